#include "fnet/parser.hpp"

#include "fnet/serialize.hpp"
#include "support/generators.hpp"

#include <doctest.h>

using namespace fnet;
using namespace fnet::testgen;

TEST_CASE("nested block declaration") {
    Parsed<NetFragment> parsed = parse_net_source("block A { block B }", "t.fnet");
    REQUIRE(parsed.ok());
    REQUIRE(parsed.value->blocks.size() == 1);
    CHECK(parsed.value->blocks[0].name == "A");
    REQUIRE(parsed.value->blocks[0].blocks.size() == 1);
    CHECK(parsed.value->blocks[0].blocks[0].name == "B");
}

TEST_CASE("connect declaration with dotted endpoints and signals") {
    Parsed<NetFragment> parsed =
        parse_net_source("connect A.B -> C : [s1, s2]", "t.fnet");
    REQUIRE(parsed.ok());
    REQUIRE(parsed.value->connects.size() == 1);
    const ConnectDecl& c = parsed.value->connects[0];
    CHECK(c.source.segments == std::vector<std::string>{"A", "B"});
    CHECK(c.target.segments == std::vector<std::string>{"C"});
    CHECK(c.signals == std::vector<std::string>{"s1", "s2"});
}

TEST_CASE("incomplete declaration is a P001 finding, not a crash") {
    Parsed<NetFragment> parsed = parse_net_source("block A { block", "t.fnet");
    CHECK_FALSE(parsed.ok());
    REQUIRE_FALSE(parsed.diagnostics.empty());
    const Diagnostic& d = parsed.diagnostics.front();
    CHECK(d.code == DiagCode::P001);
    CHECK(d.span.line == 1);
    CHECK(d.span.col > 15); // past the inner 'block' keyword
}

TEST_CASE("error recovery finds later findings and caps at fifty") {
    std::string text;
    for (int i = 0; i < 80; ++i) {
        text += "block { }\n"; // name missing, one finding per line
    }
    Parsed<NetFragment> parsed = parse_net_source(text, "t.fnet");
    CHECK_FALSE(parsed.ok());
    CHECK(parsed.diagnostics.size() == 50);
}

TEST_CASE("view with env blocks and a stereotyped physical link") {
    const char* text =
        "view Braking { env block Driver  block BrakeLogic  "
        "connect Driver -> BrakeLogic <<mechanical>> }";
    Parsed<ViewFragment> parsed = parse_view_source(text, "t.fview");
    REQUIRE(parsed.ok());
    const FeatureView& view = *parsed.value;
    REQUIRE(view.blocks.size() == 2);
    CHECK(view.blocks[0].name == "Driver");
    CHECK(view.blocks[0].env);
    CHECK_FALSE(view.blocks[1].env);
    REQUIRE(view.connectors.size() == 1);
    CHECK(view.connectors[0].stereotype == "mechanical");
    CHECK(view.connectors[0].signals.empty());
}

TEST_CASE("contains group declares a nesting") {
    Parsed<ViewFragment> parsed = parse_view_source(
        "view V { contains Brake { block BrakeLogic } }", "t.fview");
    REQUIRE(parsed.ok());
    REQUIRE(parsed.value->nestings.size() == 1);
    CHECK(parsed.value->nestings[0].outer == "Brake");
    CHECK(parsed.value->nestings[0].inner == "BrakeLogic");
    CHECK(parsed.value->find_block("Brake") != nullptr);
    CHECK(parsed.value->find_block("BrakeLogic") != nullptr);
}

TEST_CASE("env block with a communication stereotype") {
    Parsed<ViewFragment> parsed =
        parse_view_source("view V { env block Hydraulics <<hydraulic>> }", "t.fview");
    REQUIRE(parsed.ok());
    REQUIRE(parsed.value->blocks.size() == 1);
    CHECK(parsed.value->blocks[0].env);
    CHECK(parsed.value->blocks[0].stereotype == "hydraulic");
}

TEST_CASE("view link endpoints must name declared view blocks") {
    Parsed<ViewFragment> parsed =
        parse_view_source("view V { block A  connect A -> Ghost }", "t.fview");
    CHECK_FALSE(parsed.ok());
    REQUIRE_FALSE(parsed.diagnostics.empty());
    CHECK(parsed.diagnostics.front().code == DiagCode::P001);
}

TEST_CASE("env blocks cannot sit inside non-env blocks") {
    Parsed<ViewFragment> parsed = parse_view_source(
        "view V { contains Brake { env block Driver } }", "t.fview");
    CHECK_FALSE(parsed.ok());
    CHECK(parsed.diagnostics.front().code == DiagCode::P001);
}

TEST_CASE("repeated mentions unify; conflicting mentions do not") {
    Parsed<ViewFragment> ok = parse_view_source(
        "view V { block X  contains Outer { block X } }", "t.fview");
    REQUIRE(ok.ok());
    CHECK(ok.value->blocks.size() == 2); // X and Outer
    REQUIRE(ok.value->nestings.size() == 1);

    Parsed<ViewFragment> bad = parse_view_source(
        "view V { block X  env block X }", "t.fview");
    CHECK_FALSE(bad.ok());
}

TEST_CASE("declaration spans slice back to parseable text") {
    const std::string text = "signal s : float\nblock A {\n  block B\n}\nconnect A.B -> A.B2";
    Parsed<NetFragment> parsed = parse_net_source(text, "t.fnet");
    REQUIRE(parsed.ok());
    const BlockDecl& a = parsed.value->blocks[0];
    const std::string slice = text.substr(a.span.offset, a.span.length);
    Parsed<NetFragment> again = parse_net_source(slice, "slice.fnet");
    REQUIRE(again.ok());
    REQUIRE(again.value->blocks.size() == 1);
    CHECK(structurally_equal(again.value->blocks[0], a));
}

TEST_CASE("every declaration span re-parses to an equal declaration") {
    Rng rng(2005);
    for (int round = 0; round < 50; ++round) {
        const std::string text = serialize_net(random_fragment(rng));
        Parsed<NetFragment> parsed = parse_net_source(text, "spans.fnet");
        REQUIRE(parsed.ok());
        for (const SignalDecl& s : parsed.value->signals) {
            Parsed<NetFragment> again =
                parse_net_source(text.substr(s.span.offset, s.span.length), "s.fnet");
            REQUIRE(again.ok());
            REQUIRE(again.value->signals.size() == 1);
            CHECK(again.value->signals[0].name == s.name);
            CHECK(again.value->signals[0].value_type == s.value_type);
        }
        for (const TypeDecl& t : parsed.value->types) {
            Parsed<NetFragment> again =
                parse_net_source(text.substr(t.span.offset, t.span.length), "t.fnet");
            REQUIRE(again.ok());
            REQUIRE(again.value->types.size() == 1);
            CHECK(structurally_equal(again.value->types[0], t));
        }
        for (const BlockDecl& b : parsed.value->blocks) {
            Parsed<NetFragment> again =
                parse_net_source(text.substr(b.span.offset, b.span.length), "b.fnet");
            REQUIRE(again.ok());
            REQUIRE(again.value->blocks.size() == 1);
            CHECK(structurally_equal(again.value->blocks[0], b));
        }
        for (const ConnectDecl& c : parsed.value->connects) {
            Parsed<NetFragment> again =
                parse_net_source(text.substr(c.span.offset, c.span.length), "c.fnet");
            REQUIRE(again.ok());
            REQUIRE(again.value->connects.size() == 1);
            CHECK(structurally_equal(again.value->connects[0], c));
        }
    }
}

TEST_CASE("parser survives arbitrary byte input") {
    Rng rng(2001);
    for (int round = 0; round < 300; ++round) {
        std::string junk;
        const int len = rng.range(0, 160);
        for (int i = 0; i < len; ++i) {
            junk += static_cast<char>(rng.range(0, 255));
        }
        // Returns findings or a fragment; must never throw.
        (void)parse_net_source(junk, "fuzz.fnet");
        (void)parse_view_source(junk, "fuzz.fview");
    }
    CHECK(true);
}

TEST_CASE("fragment round trip on random declarations") {
    Rng rng(2002);
    for (int round = 0; round < 200; ++round) {
        const NetFragment fragment = random_fragment(rng);
        const std::string text = serialize_net(fragment);
        Parsed<NetFragment> parsed = parse_net_source(text, "round.fnet");
        REQUIRE(parsed.ok());
        REQUIRE(structurally_equal(*parsed.value, fragment));
        // Canonical text is a fixed point.
        CHECK(serialize_net(*parsed.value) == text);
    }
}

TEST_CASE("view round trip on random views") {
    Rng rng(2003);
    for (int round = 0; round < 200; ++round) {
        const FeatureView view = random_view_fragment(rng);
        const std::string text = serialize_view(view);
        Parsed<ViewFragment> parsed = parse_view_source(text, "round.fview");
        CAPTURE(text);
        REQUIRE(parsed.ok());
        REQUIRE(structurally_equal(*parsed.value, view));
        CHECK(serialize_view(*parsed.value) == text);
    }
}

TEST_CASE("corpus files reach a serialization fixed point") {
    const std::string net_text = slurp(repo_path("examples/braking.fnet"));
    Parsed<NetFragment> first = parse_net_source(net_text, "braking.fnet");
    REQUIRE(first.ok());
    const std::string canonical = serialize_net(*first.value);
    Parsed<NetFragment> second = parse_net_source(canonical, "braking.fnet");
    REQUIRE(second.ok());
    CHECK(serialize_net(*second.value) == canonical);
    CHECK(structurally_equal(*second.value, *first.value));

    const std::string view_text = slurp(repo_path("examples/braking.fview"));
    Parsed<ViewFragment> vfirst = parse_view_source(view_text, "braking.fview");
    REQUIRE(vfirst.ok());
    const std::string vcanonical = serialize_view(*vfirst.value);
    Parsed<ViewFragment> vsecond = parse_view_source(vcanonical, "braking.fview");
    REQUIRE(vsecond.ok());
    CHECK(serialize_view(*vsecond.value) == vcanonical);
    CHECK(structurally_equal(*vsecond.value, *vfirst.value));
}

TEST_CASE("empty input serializes to empty output") {
    Parsed<NetFragment> parsed = parse_net_source("", "empty.fnet");
    REQUIRE(parsed.ok());
    CHECK(serialize_net(*parsed.value).empty());
}

TEST_CASE("signal lists canonicalize sorted") {
    Parsed<NetFragment> parsed = parse_net_source("connect A -> B : [s2, s1]", "t.fnet");
    REQUIRE(parsed.ok());
    const std::string text = serialize_net(*parsed.value);
    CHECK(text.find("[s1, s2]") != std::string::npos);
}
