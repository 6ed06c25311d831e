#include "fnet/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace fnet {

namespace {

constexpr int kMaxSyntaxErrors = 50;

enum class Tok {
    Ident,
    KwSignal,
    KwType,
    KwBlock,
    KwPort,
    KwIn,
    KwOut,
    KwConnect,
    KwView,
    KwEnv,
    KwContains,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Colon,
    Comma,
    Dot,
    Arrow,
    StereoOpen,  // <<
    StereoClose, // >>
    Bad,
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    Span span;
};

const std::map<std::string_view, Tok> kKeywords = {
    {"signal", Tok::KwSignal}, {"type", Tok::KwType},     {"block", Tok::KwBlock},
    {"port", Tok::KwPort},     {"in", Tok::KwIn},         {"out", Tok::KwOut},
    {"connect", Tok::KwConnect}, {"view", Tok::KwView},   {"env", Tok::KwEnv},
    {"contains", Tok::KwContains},
};

std::string_view token_label(Tok kind) {
    switch (kind) {
    case Tok::Ident: return "identifier";
    case Tok::KwSignal: return "'signal'";
    case Tok::KwType: return "'type'";
    case Tok::KwBlock: return "'block'";
    case Tok::KwPort: return "'port'";
    case Tok::KwIn: return "'in'";
    case Tok::KwOut: return "'out'";
    case Tok::KwConnect: return "'connect'";
    case Tok::KwView: return "'view'";
    case Tok::KwEnv: return "'env'";
    case Tok::KwContains: return "'contains'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Colon: return "':'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Arrow: return "'->'";
    case Tok::StereoOpen: return "'<<'";
    case Tok::StereoClose: return "'>>'";
    case Tok::Bad: return "invalid character";
    case Tok::End: return "end of file";
    }
    return "token";
}

// Whole-input tokenizer. Never throws: unknown bytes become Bad tokens that
// the parser reports as P001 and skips.
class Lexer {
public:
    Lexer(std::string_view text, std::string_view file) : text_(text), file_(file) {}

    std::vector<Token> lex(std::vector<Diagnostic>& diagnostics) {
        std::vector<Token> tokens;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '\n') {
                advance_line();
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r') {
                ++pos_;
                ++col_;
                continue;
            }
            if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    ++pos_;
                    ++col_;
                }
                continue;
            }
            if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
                skip_block_comment(diagnostics);
                continue;
            }
            tokens.push_back(next_token());
        }
        Token end;
        end.kind = Tok::End;
        end.span = here(0);
        tokens.push_back(end);
        return tokens;
    }

private:
    Span here(uint32_t length) const {
        Span s;
        s.file = std::string(file_);
        s.line = line_;
        s.col = col_;
        s.offset = static_cast<uint32_t>(pos_);
        s.length = length;
        return s;
    }

    void advance_line() {
        ++pos_;
        ++line_;
        col_ = 1;
    }

    void skip_block_comment(std::vector<Diagnostic>& diagnostics) {
        const Span start = here(2);
        pos_ += 2;
        col_ += 2;
        while (pos_ < text_.size()) {
            if (text_[pos_] == '*' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                pos_ += 2;
                col_ += 2;
                return;
            }
            if (text_[pos_] == '\n') {
                advance_line();
            } else {
                ++pos_;
                ++col_;
            }
        }
        diagnostics.push_back(
            make_diagnostic(DiagCode::P001, start, "unterminated block comment"));
    }

    Token next_token() {
        const char c = text_[pos_];
        Token t;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const size_t start = pos_;
            t.span = here(0);
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
                ++col_;
            }
            t.text = std::string(text_.substr(start, pos_ - start));
            t.span.length = static_cast<uint32_t>(pos_ - start);
            auto kw = kKeywords.find(t.text);
            t.kind = kw == kKeywords.end() ? Tok::Ident : kw->second;
            return t;
        }

        auto simple = [&](Tok kind, uint32_t len) {
            t.kind = kind;
            t.span = here(len);
            t.text = std::string(text_.substr(pos_, len));
            pos_ += len;
            col_ += len;
            return t;
        };

        switch (c) {
        case '{': return simple(Tok::LBrace, 1);
        case '}': return simple(Tok::RBrace, 1);
        case '[': return simple(Tok::LBracket, 1);
        case ']': return simple(Tok::RBracket, 1);
        case ':': return simple(Tok::Colon, 1);
        case ',': return simple(Tok::Comma, 1);
        case '.': return simple(Tok::Dot, 1);
        case '-':
            if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
                return simple(Tok::Arrow, 2);
            }
            return simple(Tok::Bad, 1);
        case '<':
            if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '<') {
                return simple(Tok::StereoOpen, 2);
            }
            return simple(Tok::Bad, 1);
        case '>':
            if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
                return simple(Tok::StereoClose, 2);
            }
            return simple(Tok::Bad, 1);
        default:
            return simple(Tok::Bad, 1);
        }
    }

    std::string_view text_;
    std::string_view file_;
    size_t pos_ = 0;
    uint32_t line_ = 1;
    uint32_t col_ = 1;
};

// Recursive-descent parser over the token stream. Recovery skips to the
// next declaration keyword in the current nesting, capped at 50 findings.
class ParserBase {
public:
    ParserBase(std::vector<Token> tokens, std::vector<Diagnostic>& diagnostics)
        : tokens_(std::move(tokens)), diagnostics_(diagnostics) {}

protected:
    const Token& peek(size_t ahead = 0) const {
        const size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }

    const Token& advance() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) {
            ++pos_;
        }
        return t;
    }

    bool at(Tok kind) const { return peek().kind == kind; }

    bool accept(Tok kind) {
        if (at(kind)) {
            advance();
            return true;
        }
        return false;
    }

    bool expect(Tok kind, std::string_view context) {
        if (accept(kind)) {
            return true;
        }
        error(std::string("expected ") + std::string(token_label(kind)) + " " +
              std::string(context) + ", found " + std::string(token_label(peek().kind)));
        return false;
    }

    void error(std::string message) {
        if (error_count_ < kMaxSyntaxErrors) {
            diagnostics_.push_back(
                make_diagnostic(DiagCode::P001, peek().span, std::move(message)));
        }
        ++error_count_;
    }

    void error_at(Span span, std::string message) {
        if (error_count_ < kMaxSyntaxErrors) {
            diagnostics_.push_back(make_diagnostic(DiagCode::P001, std::move(span),
                                                   std::move(message)));
        }
        ++error_count_;
    }

    bool too_many_errors() const { return error_count_ >= kMaxSyntaxErrors; }

    // Skips tokens until one of `sync` (or End); consumes nothing from sync.
    void recover(std::initializer_list<Tok> sync) {
        while (!at(Tok::End)) {
            for (Tok k : sync) {
                if (at(k)) {
                    return;
                }
            }
            advance();
        }
    }

    std::optional<DottedRef> parse_dotted(std::string_view context) {
        if (!at(Tok::Ident)) {
            error(std::string("expected identifier ") + std::string(context) + ", found " +
                  std::string(token_label(peek().kind)));
            return std::nullopt;
        }
        DottedRef ref;
        ref.span = peek().span;
        ref.segments.push_back(advance().text);
        while (at(Tok::Dot)) {
            advance();
            if (!at(Tok::Ident)) {
                error(std::string("expected identifier after '.' ") + std::string(context));
                return std::nullopt;
            }
            ref.segments.push_back(advance().text);
        }
        return ref;
    }

    std::optional<std::string> parse_stereotype_opt() {
        if (!accept(Tok::StereoOpen)) {
            return std::nullopt;
        }
        if (!at(Tok::Ident)) {
            error("expected identifier inside '<<' '>>'");
            return std::nullopt;
        }
        std::string name = advance().text;
        expect(Tok::StereoClose, "to close the stereotype");
        return name;
    }

    // connect dotted -> dotted [: [s, ...]] [<<st>>]
    std::optional<ConnectDecl> parse_connect() {
        ConnectDecl decl;
        decl.span = peek().span;
        advance(); // 'connect'
        auto source = parse_dotted("as connector source");
        if (!source) {
            return std::nullopt;
        }
        decl.source = std::move(*source);
        if (!expect(Tok::Arrow, "between connector endpoints")) {
            return std::nullopt;
        }
        auto target = parse_dotted("as connector target");
        if (!target) {
            return std::nullopt;
        }
        decl.target = std::move(*target);
        if (accept(Tok::Colon)) {
            if (!expect(Tok::LBracket, "to open the signal list")) {
                return std::nullopt;
            }
            if (!at(Tok::RBracket)) {
                do {
                    if (!at(Tok::Ident)) {
                        error("expected signal name in signal list");
                        return std::nullopt;
                    }
                    decl.signals.push_back(advance().text);
                } while (accept(Tok::Comma));
            }
            if (!expect(Tok::RBracket, "to close the signal list")) {
                return std::nullopt;
            }
        }
        decl.stereotype = parse_stereotype_opt();
        decl.span.length = static_cast<uint32_t>(previous_end_offset() - decl.span.offset);
        return decl;
    }

    uint32_t previous_end_offset() const {
        if (pos_ == 0) {
            return 0;
        }
        const Token& prev = tokens_[pos_ - 1];
        return prev.span.offset + prev.span.length;
    }

    std::vector<Token> tokens_;
    std::vector<Diagnostic>& diagnostics_;
    size_t pos_ = 0;
    int error_count_ = 0;
};

class NetParser : public ParserBase {
public:
    using ParserBase::ParserBase;

    NetFragment parse(std::string file) {
        NetFragment fragment;
        fragment.file = std::move(file);
        while (!at(Tok::End) && !too_many_errors()) {
            switch (peek().kind) {
            case Tok::KwSignal:
                if (auto s = parse_signal()) {
                    fragment.signals.push_back(std::move(*s));
                } else {
                    recover({Tok::KwSignal, Tok::KwType, Tok::KwBlock, Tok::KwConnect});
                }
                break;
            case Tok::KwType:
                if (auto t = parse_type()) {
                    fragment.types.push_back(std::move(*t));
                } else {
                    recover({Tok::KwSignal, Tok::KwType, Tok::KwBlock, Tok::KwConnect});
                }
                break;
            case Tok::KwBlock:
                if (auto b = parse_block()) {
                    fragment.blocks.push_back(std::move(*b));
                } else {
                    recover({Tok::KwSignal, Tok::KwType, Tok::KwBlock, Tok::KwConnect});
                }
                break;
            case Tok::KwConnect:
                if (auto c = parse_connect()) {
                    fragment.connects.push_back(std::move(*c));
                } else {
                    recover({Tok::KwSignal, Tok::KwType, Tok::KwBlock, Tok::KwConnect});
                }
                break;
            default:
                error("expected 'signal', 'type', 'block' or 'connect' at file level, found " +
                      std::string(token_label(peek().kind)));
                advance();
                recover({Tok::KwSignal, Tok::KwType, Tok::KwBlock, Tok::KwConnect});
                break;
            }
        }
        return fragment;
    }

private:
    std::optional<SignalDecl> parse_signal() {
        SignalDecl decl;
        decl.span = peek().span;
        advance(); // 'signal'
        if (!at(Tok::Ident)) {
            error("expected signal name after 'signal'");
            return std::nullopt;
        }
        decl.name = advance().text;
        if (accept(Tok::Colon)) {
            if (!at(Tok::Ident)) {
                error("expected value type after ':'");
                return std::nullopt;
            }
            decl.value_type = advance().text;
        }
        decl.span.length = static_cast<uint32_t>(previous_end_offset() - decl.span.offset);
        return decl;
    }

    std::optional<TypeDecl> parse_type() {
        TypeDecl decl;
        decl.span = peek().span;
        advance(); // 'type'
        if (!at(Tok::Ident)) {
            error("expected type name after 'type'");
            return std::nullopt;
        }
        decl.name = advance().text;
        if (!expect(Tok::LBrace, "to open the type body")) {
            return std::nullopt;
        }
        if (!parse_body(decl.blocks, decl.ports, decl.connects, "type body")) {
            return std::nullopt;
        }
        decl.span.length = static_cast<uint32_t>(previous_end_offset() - decl.span.offset);
        return decl;
    }

    std::optional<BlockDecl> parse_block() {
        BlockDecl decl;
        decl.span = peek().span;
        advance(); // 'block'
        if (!at(Tok::Ident)) {
            error("expected block name after 'block'");
            return std::nullopt;
        }
        decl.name = advance().text;
        if (accept(Tok::Colon)) {
            if (!at(Tok::Ident)) {
                error("expected type name after ':'");
                return std::nullopt;
            }
            decl.type_name = advance().text;
        }
        if (accept(Tok::LBrace)) {
            if (!parse_body(decl.blocks, decl.ports, decl.connects, "block body")) {
                return std::nullopt;
            }
        }
        decl.span.length = static_cast<uint32_t>(previous_end_offset() - decl.span.offset);
        return decl;
    }

    std::optional<PortDecl> parse_port() {
        PortDecl decl;
        decl.span = peek().span;
        advance(); // 'port'
        if (at(Tok::KwIn)) {
            decl.direction = PortDirection::In;
            advance();
        } else if (at(Tok::KwOut)) {
            decl.direction = PortDirection::Out;
            advance();
        } else {
            error("expected 'in' or 'out' after 'port'");
            return std::nullopt;
        }
        if (!at(Tok::Ident)) {
            error("expected port name");
            return std::nullopt;
        }
        decl.name = advance().text;
        decl.stereotype = parse_stereotype_opt();
        decl.span.length = static_cast<uint32_t>(previous_end_offset() - decl.span.offset);
        return decl;
    }

    // Shared body of type and block declarations; consumes the closing '}'.
    bool parse_body(std::vector<BlockDecl>& blocks, std::vector<PortDecl>& ports,
                    std::vector<ConnectDecl>& connects, std::string_view what) {
        while (!at(Tok::RBrace)) {
            if (at(Tok::End)) {
                error(std::string("unterminated ") + std::string(what) + ", expected '}'");
                return false;
            }
            if (too_many_errors()) {
                return false;
            }
            bool ok = true;
            switch (peek().kind) {
            case Tok::KwBlock: {
                auto b = parse_block();
                if (b) {
                    blocks.push_back(std::move(*b));
                } else {
                    ok = false;
                }
                break;
            }
            case Tok::KwPort: {
                auto p = parse_port();
                if (p) {
                    ports.push_back(std::move(*p));
                } else {
                    ok = false;
                }
                break;
            }
            case Tok::KwConnect: {
                auto c = parse_connect();
                if (c) {
                    connects.push_back(std::move(*c));
                } else {
                    ok = false;
                }
                break;
            }
            default:
                error(std::string("expected 'block', 'port', 'connect' or '}' in ") +
                      std::string(what) + ", found " + std::string(token_label(peek().kind)));
                advance();
                ok = false;
                break;
            }
            if (!ok) {
                recover({Tok::KwBlock, Tok::KwPort, Tok::KwConnect, Tok::RBrace});
            }
        }
        advance(); // '}'
        return true;
    }
};

class ViewParser : public ParserBase {
public:
    using ParserBase::ParserBase;

    std::optional<FeatureView> parse(std::string file) {
        FeatureView view;
        view.file = std::move(file);
        if (!expect(Tok::KwView, "at start of view file")) {
            return std::nullopt;
        }
        if (!at(Tok::Ident)) {
            error("expected view name after 'view'");
            return std::nullopt;
        }
        view.name = advance().text;
        if (!expect(Tok::LBrace, "to open the view body")) {
            return std::nullopt;
        }
        parse_items(view, /*outer=*/nullptr);
        if (!at(Tok::End)) {
            error("expected end of file after view body");
        }
        validate(view);
        return view;
    }

private:
    struct Mention {
        std::string name;
        bool env = false;
        std::optional<std::string> stereotype;
        Span span;
    };

    // Consumes items until the matching '}'. `outer` is the containing
    // view-block name when inside a contains group.
    void parse_items(FeatureView& view, const std::string* outer) {
        while (!at(Tok::RBrace)) {
            if (at(Tok::End)) {
                error("unterminated view body, expected '}'");
                return;
            }
            if (too_many_errors()) {
                return;
            }
            bool ok = true;
            switch (peek().kind) {
            case Tok::KwEnv:
            case Tok::KwBlock:
                ok = parse_block_item(view, outer);
                break;
            case Tok::KwContains:
                ok = parse_contains(view, outer);
                break;
            case Tok::KwConnect: {
                auto c = parse_connect();
                if (c) {
                    ViewConnector vc;
                    vc.source = c->source.text();
                    vc.target = c->target.text();
                    vc.signals = std::move(c->signals);
                    vc.stereotype = std::move(c->stereotype);
                    vc.origin = c->span;
                    view.connectors.push_back(std::move(vc));
                } else {
                    ok = false;
                }
                break;
            }
            default:
                error("expected 'block', 'env', 'contains', 'connect' or '}' in view body, "
                      "found " +
                      std::string(token_label(peek().kind)));
                advance();
                ok = false;
                break;
            }
            if (!ok) {
                recover({Tok::KwEnv, Tok::KwBlock, Tok::KwContains, Tok::KwConnect,
                         Tok::RBrace});
            }
        }
        advance(); // '}'
    }

    bool parse_block_item(FeatureView& view, const std::string* outer) {
        Mention m;
        m.span = peek().span;
        if (accept(Tok::KwEnv)) {
            m.env = true;
        }
        if (!expect(Tok::KwBlock, "to declare a view block")) {
            return false;
        }
        auto name = parse_dotted("as view block name");
        if (!name) {
            return false;
        }
        m.name = name->text();
        m.stereotype = parse_stereotype_opt();
        mention(view, m);
        if (outer) {
            ViewNesting n;
            n.outer = *outer;
            n.inner = m.name;
            n.origin = m.span;
            view.nestings.push_back(std::move(n));
        }
        return true;
    }

    bool parse_contains(FeatureView& view, const std::string* outer) {
        const Span span = peek().span;
        advance(); // 'contains'
        auto head = parse_dotted("as contains target");
        if (!head) {
            return false;
        }
        const std::string head_name = head->text();
        heads_.push_back({head_name, span});
        if (outer) {
            ViewNesting n;
            n.outer = *outer;
            n.inner = head_name;
            n.origin = span;
            view.nestings.push_back(std::move(n));
        }
        if (!expect(Tok::LBrace, "to open the contains group")) {
            return false;
        }
        parse_items(view, &head_name);
        return true;
    }

    // Unifies repeated mentions of the same view block: flags must agree, a
    // stereotype may be added once. Conflicts are P001 findings.
    void mention(FeatureView& view, const Mention& m) {
        for (ViewBlock& existing : view.blocks) {
            if (existing.name != m.name) {
                continue;
            }
            if (existing.env != m.env) {
                error_at(m.span, "view block '" + m.name +
                                     "' mentioned both with and without 'env'");
                return;
            }
            if (m.stereotype) {
                if (existing.stereotype && *existing.stereotype != *m.stereotype) {
                    error_at(m.span, "view block '" + m.name +
                                         "' mentioned with conflicting stereotypes '" +
                                         *existing.stereotype + "' and '" + *m.stereotype +
                                         "'");
                    return;
                }
                existing.stereotype = m.stereotype;
            }
            return;
        }
        ViewBlock b;
        b.name = m.name;
        b.env = m.env;
        b.stereotype = m.stereotype;
        b.origin = m.span;
        view.blocks.push_back(std::move(b));
    }

    // Post-parse well-formedness: contains heads must resolve to declared
    // blocks (or become implicit ones), link endpoints must be declared, and
    // env blocks may not be nested inside non-env blocks.
    void validate(FeatureView& view) {
        for (const auto& [name, span] : heads_) {
            if (!view.find_block(name)) {
                ViewBlock b;
                b.name = name;
                b.origin = span;
                view.blocks.push_back(std::move(b));
            }
        }
        for (const ViewConnector& c : view.connectors) {
            for (const std::string* end : {&c.source, &c.target}) {
                if (!view.find_block(*end)) {
                    error_at(c.origin, "connector endpoint '" + *end +
                                           "' does not name a view block declared in this view");
                }
            }
        }
        for (const ViewNesting& n : view.nestings) {
            const ViewBlock* outer = view.find_block(n.outer);
            const ViewBlock* inner = view.find_block(n.inner);
            if (outer && inner && inner->env && !outer->env) {
                error_at(n.origin, "env block '" + n.inner +
                                       "' cannot be nested inside non-env block '" + n.outer +
                                       "'");
            }
        }
    }

    std::vector<std::pair<std::string, Span>> heads_;
};

} // namespace

Parsed<NetFragment> parse_net_source(std::string_view text, std::string filename) {
    Parsed<NetFragment> result;
    Lexer lexer(text, filename);
    std::vector<Token> tokens = lexer.lex(result.diagnostics);
    NetParser parser(std::move(tokens), result.diagnostics);
    NetFragment fragment = parser.parse(std::move(filename));
    sort_diagnostics(result.diagnostics);
    if (!has_errors(result.diagnostics)) {
        result.value = std::move(fragment);
    }
    return result;
}

Parsed<ViewFragment> parse_view_source(std::string_view text, std::string filename) {
    Parsed<ViewFragment> result;
    Lexer lexer(text, filename);
    std::vector<Token> tokens = lexer.lex(result.diagnostics);
    ViewParser parser(std::move(tokens), result.diagnostics);
    std::optional<FeatureView> view = parser.parse(std::move(filename));
    sort_diagnostics(result.diagnostics);
    if (view && !has_errors(result.diagnostics)) {
        result.value = std::move(*view);
    }
    return result;
}

} // namespace fnet
