#pragma once

#include "fnet/diagnostic.hpp"
#include "fnet/model.hpp"
#include "fnet/view.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fnet {

struct CheckOptions {
    bool strict = false;               // upgrade listed warnings to errors
    bool cc3_single_connector = false; // one connector must carry all view signals
};

// Evidence gathered while checking one view: which architecture block each
// non-env view block resolved to, and which connectors backed each view link.
struct ViewBinding {
    std::map<std::string, BlockId, std::less<>> bound;
    // Parallel to FeatureView::connectors; architecture connector indices.
    std::vector<std::vector<uint32_t>> matched;

    std::optional<BlockId> lookup(std::string_view view_block) const;
};

// Architecture well-formedness: N004 dangling endpoints, N006 unknown
// signals, W001 signal-less connectors, W002 port direction misuse, W003
// isolated subtrees. Sorted, deduplicated.
std::vector<Diagnostic> lint_net(const ResolvedNet& net);

struct Cc1Result {
    ViewBinding binding;
    std::vector<Diagnostic> diagnostics;
};

// Every view block not marked <<env>> must resolve to exactly one
// architecture block (V001 unresolved, V002 ambiguous). Env blocks are
// exempt and never bound.
Cc1Result check_cc1(const ResolvedNet& net, const FeatureView& view);

// Every nesting whose endpoints both bound must follow the containment
// forest: outer a proper ancestor of inner, any number of levels apart (V003).
std::vector<Diagnostic> check_cc2(const ResolvedNet& net, const FeatureView& view,
                                  const ViewBinding& binding);

// All architecture connectors whose source lies at or below src and whose
// target lies at or below dst; direction is respected.
std::vector<uint32_t> match_connectors(const ResolvedNet& net, BlockId src, BlockId dst);

// Communication shown in a view must exist in the architecture. Signals
// listed on a view link must each be carried by a matching connector (V005);
// a signal-less link needs a matching connector at all (V004) that carries
// at least one signal (V006). Links touching env blocks or carrying a
// physical stereotype are exempt. Fills binding.matched.
std::vector<Diagnostic> check_cc3(const ResolvedNet& net, const FeatureView& view,
                                  ViewBinding& binding, const CheckOptions& options = {});

// CC1 then CC2 then CC3; result sorted by (file, line, col, code).
std::vector<Diagnostic> check_view(const ResolvedNet& net, const FeatureView& view,
                                   const CheckOptions& options = {});

} // namespace fnet
