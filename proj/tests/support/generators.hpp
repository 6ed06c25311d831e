#pragma once

#include "fnet/fragment.hpp"
#include "fnet/model.hpp"
#include "fnet/parser.hpp"
#include "fnet/view.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

// Test-only machinery: random models, the reference view projection, single
// mutations, and naive oracles kept independent of the library's indexed
// implementations.
namespace fnet::testgen {

struct Rng {
    std::mt19937 engine;

    explicit Rng(uint32_t seed) : engine(seed) {}

    int range(int lo, int hi); // inclusive bounds
    bool chance(double p);

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<size_t>(range(0, static_cast<int>(v.size()) - 1))];
    }
};

// ---- naive oracles -------------------------------------------------------

// Parent-chain walk; the reference for the preorder-interval index.
bool naive_is_ancestor(const ResolvedNet& net, BlockId a, BlockId b);
bool naive_is_ancestor_or_self(const ResolvedNet& net, BlockId a, BlockId b);

// O(connectors x depth) enumeration; the reference for match_connectors.
std::vector<uint32_t> naive_match_connectors(const ResolvedNet& net, BlockId src, BlockId dst);

// Path-enumeration suffix resolution; the reference for resolve_ref.
std::vector<BlockId> naive_suffix_matches(const ResolvedNet& net, const std::string& dotted);

// Recursive-copy count over fragment declarations; the reference for the
// block count after type expansion.
size_t naive_expanded_block_count(const NetFragment& fragment);

// ---- corpus --------------------------------------------------------------

std::string repo_path(const std::string& relative);
std::string slurp(const std::string& path);
ResolvedNet load_corpus_net();
FeatureView load_corpus_view();

// ---- random models -------------------------------------------------------

struct GenLimits {
    int max_blocks = 50;
    int max_connectors = 100;
    int max_types = 5;
    int max_signals = 10;
    bool allow_signalless_connectors = false;
};

struct GeneratedNet {
    std::string text;
    ResolvedNet net;
};

// A well-formed random architecture: resolves without findings (modulo
// W003-style lint warnings) and every connector carries signals unless
// allow_signalless_connectors is set.
GeneratedNet random_net(Rng& rng, const GenLimits& limits = {});

// The reference projection: a subset of blocks, architecture connectors
// lifted to chosen ancestors with a subset of their signals, nesting pairs
// respecting the ancestor relation, plus env decoration.
FeatureView project_view(Rng& rng, const ResolvedNet& net, const std::string& name);

enum class Mutation {
    RenameBlock,        // non-env block to a fresh name      -> V001
    InvertNesting,      // swap outer and inner               -> V003
    AddUnmatchedLink,   // link with no matching connector    -> V004
    ForeignSignal,      // undeclared signal on a valid link  -> V005
    ReverseLink,        // flip a link with no reverse match  -> V004
};

// Applies exactly one mutation; nullopt when the view offers no target.
std::optional<FeatureView> mutate_view(Rng& rng, const ResolvedNet& net, const FeatureView& view,
                                       Mutation mutation);

// Syntax-level random fragments for round-trip properties; references may
// dangle, the text always parses.
NetFragment random_fragment(Rng& rng);
FeatureView random_view_fragment(Rng& rng);

// Structural fingerprint of a subtree: names, ports and name-sorted children,
// excluding the root's own name. Two instances of one type share it.
std::string subtree_shape(const ResolvedNet& net, BlockId root);

// Connectors with both endpoints inside the subtree, endpoint paths rebased
// to be relative to the subtree root.
std::set<std::string> internal_connectors_rebased(const ResolvedNet& net, BlockId root);

} // namespace fnet::testgen
