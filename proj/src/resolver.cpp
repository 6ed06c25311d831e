#include "fnet/resolver.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace fnet {

namespace {

bool span_less(const Span& a, const Span& b) {
    return std::tie(a.file, a.line, a.col) < std::tie(b.file, b.line, b.col);
}

std::string span_text(const Span& s) {
    std::ostringstream out;
    out << s.file << ':' << s.line << ':' << s.col;
    return out.str();
}

std::string join_path(std::span<const std::string> segments) {
    std::string out;
    for (size_t i = 0; i < segments.size(); ++i) {
        if (i) {
            out += '.';
        }
        out += segments[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// merge
// ---------------------------------------------------------------------------

class Merger {
public:
    MergeResult run(std::span<const NetFragment> fragments) {
        for (const NetFragment& fragment : fragments) {
            merge_signals(fragment);
            merge_types(fragment);
            // File level is not a declaration body: re-opening a top-level
            // block in the same file unions like it does across files.
            merge_children(model_.roots, fragment.blocks, {}, /*report_duplicates=*/false);
            for (const ConnectDecl& c : fragment.connects) {
                model_.connects.push_back({c, {}});
            }
        }
        sort_diagnostics(diagnostics_);
        dedupe_diagnostics(diagnostics_);
        MergeResult result;
        result.diagnostics = std::move(diagnostics_);
        if (!has_errors(result.diagnostics)) {
            result.model = std::move(model_);
        }
        return result;
    }

private:
    void merge_signals(const NetFragment& fragment) {
        for (const SignalDecl& decl : fragment.signals) {
            auto it = signal_index_.find(decl.name);
            if (it == signal_index_.end()) {
                signal_index_.emplace(decl.name, model_.signals.size());
                model_.signals.push_back({decl.name, decl.value_type, decl.span});
                continue;
            }
            Signal& existing = model_.signals[it->second];
            if (!decl.value_type) {
                continue;
            }
            if (!existing.value_type) {
                existing.value_type = decl.value_type;
                continue;
            }
            if (*existing.value_type != *decl.value_type) {
                const bool existing_first = span_less(existing.origin, decl.span);
                const Span& at = existing_first ? decl.span : existing.origin;
                const Span& other = existing_first ? existing.origin : decl.span;
                const std::string first_type = existing_first ? *existing.value_type
                                                              : *decl.value_type;
                const std::string second_type = existing_first ? *decl.value_type
                                                               : *existing.value_type;
                diagnostics_.push_back(make_diagnostic(
                    DiagCode::N005, at,
                    "signal '" + decl.name + "' redeclared with value type '" + second_type +
                        "', previously '" + first_type + "' at " + span_text(other),
                    {span_text(other)}));
            }
        }
    }

    void merge_types(const NetFragment& fragment) {
        for (const TypeDecl& decl : fragment.types) {
            auto it = type_index_.find(decl.name);
            if (it == type_index_.end()) {
                type_index_.emplace(decl.name, model_.types.size());
                model_.types.push_back(decl);
                check_duplicate_siblings(decl.blocks);
                check_duplicate_ports(decl.ports);
                for (const BlockDecl& b : decl.blocks) {
                    check_block_tree(b);
                }
                continue;
            }
            const TypeDecl& existing = model_.types[it->second];
            if (!structurally_equal(existing, decl)) {
                const bool existing_first = span_less(existing.span, decl.span);
                const Span& at = existing_first ? decl.span : existing.span;
                const Span& other = existing_first ? existing.span : decl.span;
                diagnostics_.push_back(make_diagnostic(
                    DiagCode::N002, at,
                    "conflicting definitions of type '" + decl.name + "' (see " +
                        span_text(other) + ")",
                    {span_text(other)}));
            }
        }
    }

    void check_block_tree(const BlockDecl& decl) {
        check_duplicate_siblings(decl.blocks);
        check_duplicate_ports(decl.ports);
        for (const BlockDecl& child : decl.blocks) {
            check_block_tree(child);
        }
    }

    void check_duplicate_siblings(const std::vector<BlockDecl>& blocks) {
        std::map<std::string, const BlockDecl*> seen;
        for (const BlockDecl& b : blocks) {
            auto [it, inserted] = seen.emplace(b.name, &b);
            if (!inserted) {
                diagnostics_.push_back(make_diagnostic(
                    DiagCode::N001, b.span,
                    "duplicate sibling block '" + b.name + "' in the same declaration",
                    {span_text(it->second->span)}));
            }
        }
    }

    void check_duplicate_ports(const std::vector<PortDecl>& ports) {
        std::map<std::string, const PortDecl*> seen;
        for (const PortDecl& p : ports) {
            auto [it, inserted] = seen.emplace(p.name, &p);
            if (!inserted) {
                diagnostics_.push_back(make_diagnostic(
                    DiagCode::N001, p.span, "duplicate port '" + p.name + "'",
                    {span_text(it->second->span)}));
            }
        }
    }

    // Unions one fragment's sibling list into the model; re-opening a path
    // in another declaration is legal, duplicates inside one body are N001.
    void merge_children(std::vector<ProtoBlock>& target, const std::vector<BlockDecl>& decls,
                        const std::vector<std::string>& scope, bool report_duplicates = true) {
        std::map<std::string, const BlockDecl*> seen;
        for (const BlockDecl& decl : decls) {
            auto [dup, inserted] = seen.emplace(decl.name, &decl);
            if (!inserted && report_duplicates) {
                diagnostics_.push_back(make_diagnostic(
                    DiagCode::N001, decl.span,
                    "duplicate sibling block '" + decl.name + "' in the same declaration",
                    {span_text(dup->second->span)}));
            }

            ProtoBlock* node = nullptr;
            for (ProtoBlock& existing : target) {
                if (existing.name == decl.name) {
                    node = &existing;
                    break;
                }
            }
            if (!node) {
                ProtoBlock fresh;
                fresh.name = decl.name;
                fresh.origin = decl.span;
                target.push_back(std::move(fresh));
                node = &target.back();
            }

            if (decl.type_name) {
                if (node->type_name && *node->type_name != *decl.type_name) {
                    diagnostics_.push_back(make_diagnostic(
                        DiagCode::N002, decl.span,
                        "block '" + join_scope(scope, decl.name) +
                            "' declared with conflicting types '" + *node->type_name +
                            "' and '" + *decl.type_name + "'"));
                } else {
                    node->type_name = decl.type_name;
                }
            }

            merge_ports(*node, decl.ports);

            std::vector<std::string> child_scope = scope;
            child_scope.push_back(decl.name);
            merge_children(node->children, decl.blocks, child_scope);
            for (const ConnectDecl& c : decl.connects) {
                model_.connects.push_back({c, child_scope});
            }
        }
    }

    void merge_ports(ProtoBlock& node, const std::vector<PortDecl>& ports) {
        check_duplicate_ports(ports);
        for (const PortDecl& decl : ports) {
            Port* existing = nullptr;
            for (Port& p : node.ports) {
                if (p.name == decl.name) {
                    existing = &p;
                    break;
                }
            }
            if (!existing) {
                node.ports.push_back({decl.name, decl.direction, decl.stereotype, decl.span});
                continue;
            }
            if (existing->direction != decl.direction) {
                diagnostics_.push_back(make_diagnostic(
                    DiagCode::N001, decl.span,
                    "port '" + decl.name + "' of block '" + node.name +
                        "' redeclared with a different direction",
                    {span_text(existing->origin)}));
                continue;
            }
            if (decl.stereotype) {
                if (existing->stereotype && *existing->stereotype != *decl.stereotype) {
                    diagnostics_.push_back(make_diagnostic(
                        DiagCode::N001, decl.span,
                        "port '" + decl.name + "' of block '" + node.name +
                            "' redeclared with a different stereotype",
                        {span_text(existing->origin)}));
                } else {
                    existing->stereotype = decl.stereotype;
                }
            }
        }
    }

    static std::string join_scope(const std::vector<std::string>& scope,
                                  const std::string& name) {
        std::string out;
        for (const std::string& s : scope) {
            out += s;
            out += '.';
        }
        out += name;
        return out;
    }

    ProtoNet model_;
    std::vector<Diagnostic> diagnostics_;
    std::map<std::string, size_t> signal_index_;
    std::map<std::string, size_t> type_index_;
};

// ---------------------------------------------------------------------------
// type expansion
// ---------------------------------------------------------------------------

// A fully expanded type body, ready to be copied per instance. Provenance
// of nested instances is kept relative to the template root.
struct Template {
    std::vector<ProtoBlock> blocks;
    std::vector<Port> ports;
    // Connects with scope relative to the instance block ([] = instance).
    std::vector<ScopedConnect> connects;
};

class Expander {
public:
    MergeResult run(ProtoNet model) {
        model_ = std::move(model);
        index_types();
        collect_unknown_type_refs();
        if (!has_errors(diagnostics_)) {
            check_cycles();
        }
        if (!has_errors(diagnostics_)) {
            build_templates();
        }
        if (!has_errors(diagnostics_)) {
            std::vector<ProtoBlock> expanded;
            for (ProtoBlock& root : model_.roots) {
                expanded.push_back(expand_block(std::move(root), {}));
            }
            model_.roots = std::move(expanded);
        }
        sort_diagnostics(diagnostics_);
        dedupe_diagnostics(diagnostics_);
        MergeResult result;
        result.diagnostics = std::move(diagnostics_);
        if (!has_errors(result.diagnostics)) {
            result.model = std::move(model_);
        }
        return result;
    }

private:
    void index_types() {
        for (size_t i = 0; i < model_.types.size(); ++i) {
            type_index_.emplace(model_.types[i].name, i);
        }
    }

    void collect_type_refs(const BlockDecl& decl, std::vector<const BlockDecl*>& out) {
        if (decl.type_name) {
            out.push_back(&decl);
        }
        for (const BlockDecl& child : decl.blocks) {
            collect_type_refs(child, out);
        }
    }

    void collect_type_refs(const ProtoBlock& block, std::vector<const ProtoBlock*>& out) {
        if (block.type_name) {
            out.push_back(&block);
        }
        for (const ProtoBlock& child : block.children) {
            collect_type_refs(child, out);
        }
    }

    void collect_unknown_type_refs() {
        for (const TypeDecl& type : model_.types) {
            std::vector<const BlockDecl*> refs;
            for (const BlockDecl& b : type.blocks) {
                collect_type_refs(b, refs);
            }
            for (const BlockDecl* ref : refs) {
                if (!type_index_.count(*ref->type_name)) {
                    diagnostics_.push_back(make_diagnostic(
                        DiagCode::N002, ref->span,
                        "unknown type '" + *ref->type_name + "' referenced by block '" +
                            ref->name + "'"));
                }
            }
        }
        std::vector<const ProtoBlock*> refs;
        for (const ProtoBlock& root : model_.roots) {
            collect_type_refs(root, refs);
        }
        for (const ProtoBlock* ref : refs) {
            if (!type_index_.count(*ref->type_name)) {
                diagnostics_.push_back(make_diagnostic(
                    DiagCode::N002, ref->origin,
                    "unknown type '" + *ref->type_name + "' referenced by block '" + ref->name +
                        "'"));
            }
        }
    }

    // DFS over the type dependency graph; a back edge is an instantiation
    // cycle, reported as the chain of type names.
    void check_cycles() {
        std::map<std::string, int> state; // 0 fresh, 1 on stack, 2 done
        std::vector<std::string> stack;
        for (const TypeDecl& type : model_.types) {
            if (visit(type.name, state, stack)) {
                return;
            }
        }
    }

    bool visit(const std::string& name, std::map<std::string, int>& state,
               std::vector<std::string>& stack) {
        const int s = state[name];
        if (s == 1) {
            std::string cycle;
            const auto begin = std::find(stack.begin(), stack.end(), name);
            for (auto it = begin; it != stack.end(); ++it) {
                cycle += *it + " -> ";
            }
            cycle += name;
            diagnostics_.push_back(make_diagnostic(
                DiagCode::N003, model_.types[type_index_.at(name)].span,
                "recursive type instantiation: " + cycle));
            return true;
        }
        if (s == 2) {
            return false;
        }
        state[name] = 1;
        stack.push_back(name);
        const TypeDecl& type = model_.types[type_index_.at(name)];
        std::vector<const BlockDecl*> refs;
        for (const BlockDecl& b : type.blocks) {
            collect_type_refs(b, refs);
        }
        for (const BlockDecl* ref : refs) {
            if (visit(*ref->type_name, state, stack)) {
                return true;
            }
        }
        stack.pop_back();
        state[name] = 2;
        return false;
    }

    ProtoBlock to_proto(const BlockDecl& decl, std::vector<ScopedConnect>& connects,
                        const std::vector<std::string>& scope) {
        ProtoBlock out;
        out.name = decl.name;
        out.type_name = decl.type_name;
        out.origin = decl.span;
        for (const PortDecl& p : decl.ports) {
            out.ports.push_back({p.name, p.direction, p.stereotype, p.span});
        }
        std::vector<std::string> child_scope = scope;
        child_scope.push_back(decl.name);
        for (const ConnectDecl& c : decl.connects) {
            connects.push_back({c, child_scope});
        }
        for (const BlockDecl& child : decl.blocks) {
            out.children.push_back(to_proto(child, connects, child_scope));
        }
        return out;
    }

    // Expands type bodies in dependency order so instantiating a type is a
    // plain tree copy afterwards.
    void build_templates() {
        for (const TypeDecl& type : model_.types) {
            build_template(type.name);
            if (has_errors(diagnostics_)) {
                return;
            }
        }
    }

    const Template& build_template(const std::string& name) {
        auto done = templates_.find(name);
        if (done != templates_.end()) {
            return done->second;
        }
        const TypeDecl& type = model_.types[type_index_.at(name)];
        Template tmpl;
        for (const Port& p : to_ports(type.ports)) {
            tmpl.ports.push_back(p);
        }
        for (const ConnectDecl& c : type.connects) {
            tmpl.connects.push_back({c, {}});
        }
        for (const BlockDecl& b : type.blocks) {
            tmpl.blocks.push_back(to_proto(b, tmpl.connects, {}));
        }
        std::vector<ProtoBlock> expanded;
        for (ProtoBlock& b : tmpl.blocks) {
            expanded.push_back(expand_template_block(std::move(b), {}, tmpl));
        }
        tmpl.blocks = std::move(expanded);
        validate_template_connects(tmpl, type);
        return templates_.emplace(name, std::move(tmpl)).first->second;
    }

    static std::vector<Port> to_ports(const std::vector<PortDecl>& decls) {
        std::vector<Port> out;
        for (const PortDecl& p : decls) {
            out.push_back({p.name, p.direction, p.stereotype, p.span});
        }
        return out;
    }

    // Expansion inside a template: provenance roots are relative paths.
    ProtoBlock expand_template_block(ProtoBlock block, std::vector<std::string> rel_path,
                                     Template& tmpl) {
        rel_path.push_back(block.name);
        if (block.type_name) {
            // The copied body is fully expanded already; descending again
            // would re-instantiate nested instance roots.
            instantiate(block, rel_path, tmpl.connects);
            return block;
        }
        std::vector<ProtoBlock> expanded;
        for (ProtoBlock& child : block.children) {
            expanded.push_back(expand_template_block(std::move(child), rel_path, tmpl));
        }
        block.children = std::move(expanded);
        return block;
    }

    // Copies the template of block.type_name into block. `base_path` is the
    // block's path (relative inside templates, absolute in the main tree).
    void instantiate(ProtoBlock& block, const std::vector<std::string>& base_path,
                     std::vector<ScopedConnect>& connects) {
        if (!block.children.empty() || !block.ports.empty()) {
            diagnostics_.push_back(make_diagnostic(
                DiagCode::N002, block.origin,
                "typed block '" + block.name + "' must not declare an inline body"));
            return;
        }
        const Template& tmpl = build_template(*block.type_name);
        const std::string base = join_path(base_path);
        block.ports = tmpl.ports;
        for (const ProtoBlock& body_block : tmpl.blocks) {
            block.children.push_back(copy_with_provenance(body_block, base, *block.type_name));
        }
        for (const ScopedConnect& c : tmpl.connects) {
            std::vector<std::string> scope = base_path;
            scope.insert(scope.end(), c.scope.begin(), c.scope.end());
            connects.push_back({c.decl, std::move(scope)});
        }
    }

    ProtoBlock copy_with_provenance(const ProtoBlock& node, const std::string& instance_root,
                                    const std::string& type_name) {
        ProtoBlock copy = node;
        rebase_provenance(copy, instance_root, type_name);
        return copy;
    }

    void rebase_provenance(ProtoBlock& node, const std::string& instance_root,
                           const std::string& type_name) {
        if (node.instantiated_from) {
            // Nested instance copy: its root is relative to the template.
            node.instantiated_from->first =
                instance_root.empty() ? node.instantiated_from->first
                                      : instance_root + "." + node.instantiated_from->first;
        } else {
            node.instantiated_from = {instance_root, type_name};
        }
        for (ProtoBlock& child : node.children) {
            rebase_provenance(child, instance_root, type_name);
        }
    }

    // A type's connectors may only reference blocks (and ports) inside its
    // own body; anything else would not survive instantiation as a copy.
    void validate_template_connects(const Template& tmpl, const TypeDecl& type) {
        for (const ScopedConnect& c : tmpl.connects) {
            for (const DottedRef* ref : {&c.decl.source, &c.decl.target}) {
                if (!template_resolves(tmpl, c.scope, ref->segments)) {
                    diagnostics_.push_back(make_diagnostic(
                        DiagCode::N004, ref->span,
                        "connector in type '" + type.name + "' references '" + ref->text() +
                            "' outside the type body"));
                }
            }
        }
    }

    const ProtoBlock* find_template_child(const Template& tmpl, const ProtoBlock* parent,
                                          const std::string& name) const {
        const std::vector<ProtoBlock>& siblings = parent ? parent->children : tmpl.blocks;
        for (const ProtoBlock& b : siblings) {
            if (b.name == name) {
                return &b;
            }
        }
        return nullptr;
    }

    const ProtoBlock* template_node(const Template& tmpl,
                                    const std::vector<std::string>& path) const {
        const ProtoBlock* node = nullptr;
        for (const std::string& seg : path) {
            node = find_template_child(tmpl, node, seg);
            if (!node) {
                return nullptr;
            }
        }
        return node;
    }

    bool template_resolves(const Template& tmpl, const std::vector<std::string>& scope,
                           const std::vector<std::string>& segments) const {
        // Scope chain from the declaring block outwards, ending at the
        // template root, which also owns the type's interface ports.
        for (size_t depth = scope.size() + 1; depth-- > 0;) {
            const std::vector<std::string> prefix(scope.begin(), scope.begin() + depth);
            const ProtoBlock* base = prefix.empty() ? nullptr : template_node(tmpl, prefix);
            if (!prefix.empty() && !base) {
                continue;
            }
            const ProtoBlock* first = find_template_child(tmpl, base, segments[0]);
            if (first) {
                const ProtoBlock* node = first;
                for (size_t i = 1; i < segments.size(); ++i) {
                    const ProtoBlock* next = find_template_child(tmpl, node, segments[i]);
                    if (!next) {
                        if (i + 1 == segments.size() && has_port(node->ports, segments[i])) {
                            return true;
                        }
                        return false;
                    }
                    node = next;
                }
                return true;
            }
            if (segments.size() == 1) {
                const std::vector<Port>& ports = base ? base->ports : tmpl.ports;
                if (has_port(ports, segments[0])) {
                    return true;
                }
            }
        }
        return false;
    }

    static bool has_port(const std::vector<Port>& ports, const std::string& name) {
        for (const Port& p : ports) {
            if (p.name == name) {
                return true;
            }
        }
        return false;
    }

    // Expansion in the main tree: provenance roots become absolute paths.
    ProtoBlock expand_block(ProtoBlock block, std::vector<std::string> path) {
        path.push_back(block.name);
        if (block.type_name) {
            instantiate(block, path, model_.connects);
            return block;
        }
        std::vector<ProtoBlock> expanded;
        for (ProtoBlock& child : block.children) {
            expanded.push_back(expand_block(std::move(child), path));
        }
        block.children = std::move(expanded);
        return block;
    }

    ProtoNet model_;
    std::vector<Diagnostic> diagnostics_;
    std::map<std::string, size_t> type_index_;
    std::map<std::string, Template> templates_;
};

// ---------------------------------------------------------------------------
// binding
// ---------------------------------------------------------------------------

class Binder {
public:
    ResolutionResult run(const ProtoNet& model) {
        build_blocks(model);
        for (const Signal& s : model.signals) {
            signal_names_.insert(s.name);
            builder_.add_signal(s);
        }
        bind_connects(model);
        ResolutionResult result;
        sort_diagnostics(diagnostics_);
        dedupe_diagnostics(diagnostics_);
        result.diagnostics = std::move(diagnostics_);
        if (!has_errors(result.diagnostics)) {
            result.net = builder_.finalize();
        }
        return result;
    }

private:
    void build_blocks(const ProtoNet& model) {
        std::vector<const ProtoBlock*> roots;
        for (const ProtoBlock& r : model.roots) {
            roots.push_back(&r);
        }
        std::sort(roots.begin(), roots.end(), [](const ProtoBlock* a, const ProtoBlock* b) {
            return a->name < b->name;
        });
        for (const ProtoBlock* r : roots) {
            build_block(*r, std::nullopt, "");
        }
        // Provenance paths can point forward inside one instance subtree, so
        // translate them once every block exists.
        for (const auto& [id, key] : pending_provenance_) {
            auto it = path_to_id_.find(key.first);
            if (it == path_to_id_.end()) {
                throw internal_error("instance root '" + key.first + "' was not built");
            }
            provenance_fixups_.push_back({id, {it->second, key.second}});
        }
        for (const auto& [id, origin] : provenance_fixups_) {
            builder_.set_instantiated_from(id, origin);
        }
    }

    void build_block(const ProtoBlock& node, std::optional<BlockId> parent,
                     const std::string& parent_path) {
        const std::string path = parent_path.empty() ? node.name : parent_path + "." + node.name;
        const BlockId id = builder_.add_block(parent, node.name, node.origin, node.type_name);
        path_to_id_.emplace(path, id);
        if (node.instantiated_from) {
            pending_provenance_.push_back({id, *node.instantiated_from});
        }
        for (const Port& p : node.ports) {
            builder_.add_port(id, p);
        }
        std::vector<const ProtoBlock*> children;
        for (const ProtoBlock& c : node.children) {
            children.push_back(&c);
        }
        std::sort(children.begin(), children.end(),
                  [](const ProtoBlock* a, const ProtoBlock* b) { return a->name < b->name; });
        for (const ProtoBlock* c : children) {
            build_block(*c, id, path);
        }
    }

    std::optional<BlockId> lookup(const std::string& path) const {
        auto it = path_to_id_.find(path);
        if (it == path_to_id_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    // Lexical endpoint resolution: the innermost scope where the first
    // segment names a child (or a port of the scope block itself) wins.
    std::optional<Endpoint> resolve_endpoint(const std::vector<std::string>& scope,
                                             const std::vector<std::string>& segments) const {
        for (size_t depth = scope.size() + 1; depth-- > 0;) {
            const std::vector<std::string> prefix(scope.begin(), scope.begin() + depth);
            std::optional<BlockId> base;
            if (!prefix.empty()) {
                base = lookup(join_path(prefix));
                if (!base) {
                    continue;
                }
            }
            std::optional<BlockId> first = find_child(base, segments[0]);
            if (first) {
                BlockId node = *first;
                for (size_t i = 1; i < segments.size(); ++i) {
                    std::optional<BlockId> next = find_child(node, segments[i]);
                    if (!next) {
                        if (i + 1 == segments.size() && has_port(node, segments[i])) {
                            return Endpoint{node, segments[i]};
                        }
                        return std::nullopt;
                    }
                    node = *next;
                }
                return Endpoint{node, std::nullopt};
            }
            if (segments.size() == 1 && base && has_port(*base, segments[0])) {
                return Endpoint{*base, segments[0]};
            }
        }
        return std::nullopt;
    }

    std::optional<BlockId> find_child(std::optional<BlockId> parent,
                                      const std::string& name) const {
        if (!parent) {
            return lookup(name); // root level
        }
        for (BlockId c : builder_.block(*parent).children) {
            if (builder_.block(c).name == name) {
                return c;
            }
        }
        return std::nullopt;
    }

    bool has_port(BlockId id, const std::string& name) const {
        for (const Port& p : builder_.block(id).ports) {
            if (p.name == name) {
                return true;
            }
        }
        return false;
    }

    void bind_connects(const ProtoNet& model) {
        struct Bound {
            Connector connector;
            std::string key;
        };
        std::vector<Bound> bound;

        for (const ScopedConnect& sc : model.connects) {
            const ConnectDecl& decl = sc.decl;
            std::optional<Endpoint> source = resolve_endpoint(sc.scope, decl.source.segments);
            std::optional<Endpoint> target = resolve_endpoint(sc.scope, decl.target.segments);
            if (!source || !target) {
                DanglingConnector d;
                d.source_text = decl.source.text();
                d.target_text = decl.target.text();
                d.origin = decl.span;
                d.reason = !source ? "cannot resolve connector source '" + decl.source.text() + "'"
                                   : "cannot resolve connector target '" + decl.target.text() + "'";
                builder_.add_dangling(std::move(d));
                continue;
            }
            if (*source == *target) {
                DanglingConnector d;
                d.source_text = decl.source.text();
                d.target_text = decl.target.text();
                d.origin = decl.span;
                d.reason = "connector source and target resolve to the same endpoint";
                builder_.add_dangling(std::move(d));
                continue;
            }

            Connector c;
            c.source = *source;
            c.target = *target;
            c.stereotype = decl.stereotype;
            c.origin = decl.span;
            std::vector<std::string> signals = decl.signals;
            std::sort(signals.begin(), signals.end());
            signals.erase(std::unique(signals.begin(), signals.end()), signals.end());
            for (const std::string& s : signals) {
                if (signal_names_.count(s)) {
                    c.signals.push_back(s);
                } else {
                    builder_.add_unknown_signal_use(
                        {s, decl.source.text() + " -> " + decl.target.text(), decl.span});
                }
            }

            std::ostringstream key;
            key << c.source.block.value << ':' << c.source.port.value_or("") << '>'
                << c.target.block.value << ':' << c.target.port.value_or("");
            for (const std::string& s : c.signals) {
                key << '|' << s;
            }
            key << '#' << c.stereotype.value_or("");
            bound.push_back({std::move(c), key.str()});
        }

        // Identical declarations collapse to one connector; later spans get
        // the W004 notice so the outcome is permutation independent.
        std::stable_sort(bound.begin(), bound.end(), [](const Bound& a, const Bound& b) {
            if (a.key != b.key) {
                return a.key < b.key;
            }
            return span_less(a.connector.origin, b.connector.origin);
        });
        for (size_t i = 0; i < bound.size(); ++i) {
            if (i > 0 && bound[i].key == bound[i - 1].key) {
                diagnostics_.push_back(make_diagnostic(
                    DiagCode::W004, bound[i].connector.origin,
                    "duplicate connector declaration collapsed (first declared at " +
                        span_text(bound[i - 1].connector.origin) + ")",
                    {span_text(bound[i - 1].connector.origin)}));
                continue;
            }
            builder_.add_connector(bound[i].connector);
        }
    }

    NetBuilder builder_;
    std::vector<Diagnostic> diagnostics_;
    std::map<std::string, BlockId> path_to_id_;
    std::set<std::string> signal_names_;
    std::vector<std::pair<BlockId, std::pair<std::string, std::string>>> pending_provenance_;
    std::vector<std::pair<BlockId, InstanceOrigin>> provenance_fixups_;
};

} // namespace

MergeResult merge_fragments(std::span<const NetFragment> fragments) {
    Merger merger;
    return merger.run(fragments);
}

MergeResult expand_types(ProtoNet model) {
    Expander expander;
    return expander.run(std::move(model));
}

ResolutionResult bind_net(const ProtoNet& model) {
    Binder binder;
    return binder.run(model);
}

ResolutionResult resolve_model(std::span<const NetFragment> fragments) {
    ResolutionResult result;
    MergeResult merged = merge_fragments(fragments);
    result.diagnostics = std::move(merged.diagnostics);
    if (!merged.model) {
        return result;
    }
    MergeResult expanded = expand_types(std::move(*merged.model));
    result.diagnostics.insert(result.diagnostics.end(), expanded.diagnostics.begin(),
                              expanded.diagnostics.end());
    if (!expanded.model) {
        sort_diagnostics(result.diagnostics);
        return result;
    }
    ResolutionResult boundResult = bind_net(*expanded.model);
    result.diagnostics.insert(result.diagnostics.end(), boundResult.diagnostics.begin(),
                              boundResult.diagnostics.end());
    sort_diagnostics(result.diagnostics);
    if (!has_errors(result.diagnostics)) {
        result.net = std::move(boundResult.net);
    }
    return result;
}

RefResolution resolve_ref(const ResolvedNet& net, std::string_view dotted, Span span) {
    RefResolution result;
    std::vector<std::string> segments;
    size_t start = 0;
    while (start <= dotted.size()) {
        const size_t dot = dotted.find('.', start);
        const std::string_view seg =
            dotted.substr(start, dot == std::string_view::npos ? dotted.size() - start
                                                               : dot - start);
        segments.emplace_back(seg);
        if (dot == std::string_view::npos) {
            break;
        }
        start = dot + 1;
    }
    for (const std::string& seg : segments) {
        if (seg.empty()) {
            result.diagnostic = make_diagnostic(
                DiagCode::V001, span, "malformed reference '" + std::string(dotted) + "'");
            return result;
        }
    }

    // An exact qualified path wins; paths are unique by construction.
    if (std::optional<BlockId> exact = net.find_path(dotted)) {
        result.id = exact;
        return result;
    }

    const std::vector<BlockId> matches = net.suffix_matches(segments);
    if (matches.empty()) {
        result.diagnostic = make_diagnostic(
            DiagCode::V001, span,
            "'" + std::string(dotted) + "' does not match any architecture block");
        return result;
    }
    if (matches.size() > 1) {
        std::string candidates;
        std::vector<std::string> related;
        for (BlockId id : matches) {
            if (!candidates.empty()) {
                candidates += ", ";
            }
            candidates += net.qualified_path(id);
            related.push_back(net.qualified_path(id));
        }
        result.diagnostic = make_diagnostic(
            DiagCode::V002, span,
            "'" + std::string(dotted) + "' is ambiguous: candidates " + candidates,
            std::move(related));
        return result;
    }
    result.id = matches.front();
    return result;
}

} // namespace fnet
