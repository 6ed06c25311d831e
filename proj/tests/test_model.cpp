#include "fnet/model.hpp"

#include "support/generators.hpp"

#include <doctest.h>

#include <set>

using namespace fnet;
using namespace fnet::testgen;

namespace {

// Random forest built directly against the builder; names repeat on purpose.
ResolvedNet random_forest(Rng& rng, int max_blocks) {
    NetBuilder builder;
    const int n = rng.range(1, max_blocks);
    std::vector<BlockId> ids;
    for (int i = 0; i < n; ++i) {
        std::optional<BlockId> parent;
        if (!ids.empty() && rng.chance(0.8)) {
            parent = ids[static_cast<size_t>(rng.range(0, static_cast<int>(ids.size()) - 1))];
        }
        // Sibling uniqueness by index suffix.
        ids.push_back(builder.add_block(parent, "b" + std::to_string(i)));
    }
    return builder.finalize();
}

} // namespace

TEST_CASE("qualified paths follow the containment chain") {
    NetBuilder builder;
    const BlockId vehicle = builder.add_block(std::nullopt, "Vehicle");
    const BlockId brake = builder.add_block(vehicle, "Brake");
    const BlockId logic = builder.add_block(brake, "BrakeLogic");
    const ResolvedNet net = builder.finalize();

    CHECK(net.qualified_path(vehicle) == "Vehicle");
    CHECK(net.qualified_path(logic) == "Vehicle.Brake.BrakeLogic");
}

TEST_CASE("same leaf name under different parents keeps distinct paths") {
    NetBuilder builder;
    const BlockId a = builder.add_block(std::nullopt, "A");
    const BlockId b = builder.add_block(std::nullopt, "B");
    const BlockId s1 = builder.add_block(a, "Sensor");
    const BlockId s2 = builder.add_block(b, "Sensor");
    const ResolvedNet net = builder.finalize();

    CHECK(net.qualified_path(s1) == "A.Sensor");
    CHECK(net.qualified_path(s2) == "B.Sensor");
    CHECK(net.qualified_path(s1) != net.qualified_path(s2));
}

TEST_CASE("ancestor queries on the corpus") {
    const ResolvedNet net = load_corpus_net();
    const BlockId vehicle = *net.find_path("Vehicle");
    const BlockId logic = *net.find_path("Vehicle.Brake.BrakeLogic");
    const BlockId acc = *net.find_path("Vehicle.ACC");

    CHECK(net.is_ancestor(vehicle, logic));
    CHECK_FALSE(net.is_ancestor(logic, logic));
    CHECK(net.is_ancestor_or_self(logic, logic));
    // Frozen from the parent-chain oracle on the corpus.
    CHECK(naive_is_ancestor(net, acc, logic) == false);
    CHECK_FALSE(net.is_ancestor(acc, logic));
}

TEST_CASE("ancestor index agrees with the parent-chain walk everywhere") {
    Rng rng(1001);
    for (int round = 0; round < 30; ++round) {
        const ResolvedNet net = random_forest(rng, 50);
        const uint32_t n = net.block_count();
        for (uint32_t i = 0; i < n; ++i) {
            for (uint32_t j = 0; j < n; ++j) {
                const BlockId a{i}, b{j};
                CAPTURE(i);
                CAPTURE(j);
                REQUIRE(net.is_ancestor(a, b) == naive_is_ancestor(net, a, b));
            }
        }
    }
}

TEST_CASE("is_ancestor is a strict partial order") {
    Rng rng(1002);
    for (int round = 0; round < 20; ++round) {
        const ResolvedNet net = random_forest(rng, 200);
        const uint32_t n = net.block_count();
        for (int trial = 0; trial < 400; ++trial) {
            const BlockId a{static_cast<uint32_t>(rng.range(0, static_cast<int>(n) - 1))};
            const BlockId b{static_cast<uint32_t>(rng.range(0, static_cast<int>(n) - 1))};
            const BlockId c{static_cast<uint32_t>(rng.range(0, static_cast<int>(n) - 1))};
            REQUIRE_FALSE(net.is_ancestor(a, a)); // irreflexive
            if (net.is_ancestor(a, b)) {
                REQUIRE_FALSE(net.is_ancestor(b, a)); // antisymmetric
            }
            if (net.is_ancestor(a, b) && net.is_ancestor(b, c)) {
                REQUIRE(net.is_ancestor(a, c)); // transitive
            }
        }
    }
}

TEST_CASE("qualified_path is injective over a net") {
    Rng rng(1003);
    for (int round = 0; round < 20; ++round) {
        const ResolvedNet net = random_forest(rng, 120);
        std::set<std::string> seen;
        for (uint32_t i = 0; i < net.block_count(); ++i) {
            REQUIRE(seen.insert(net.qualified_path(BlockId{i})).second);
        }
    }
}

TEST_CASE("stale and foreign ids raise internal errors, never UB") {
    NetBuilder builder;
    builder.add_block(std::nullopt, "Solo");
    const ResolvedNet net = builder.finalize();

    CHECK_THROWS_AS(net.block(BlockId{42}), internal_error);
    CHECK_THROWS_AS(net.qualified_path(BlockId{}), internal_error);
    CHECK_THROWS_AS(net.is_ancestor(BlockId{0}, BlockId{7}), internal_error);
}

TEST_CASE("suffix matching returns every path with the given tail") {
    const ResolvedNet net = load_corpus_net();
    const std::vector<std::string> segments{"BrakeLogic"};
    const std::vector<BlockId> matches = net.suffix_matches(segments);
    REQUIRE(matches.size() == 1);
    CHECK(net.qualified_path(matches.front()) == "Vehicle.Brake.BrakeLogic");

    Rng rng(1004);
    for (int round = 0; round < 15; ++round) {
        const GeneratedNet gen = random_net(rng);
        for (uint32_t i = 0; i < gen.net.block_count(); ++i) {
            const std::string name = gen.net.block(BlockId{i}).name;
            const std::vector<std::string> segs{name};
            std::set<uint32_t> fast;
            for (BlockId id : gen.net.suffix_matches(segs)) {
                fast.insert(id.value);
            }
            std::set<uint32_t> naive;
            for (BlockId id : naive_suffix_matches(gen.net, name)) {
                naive.insert(id.value);
            }
            REQUIRE(fast == naive);
        }
    }
}
