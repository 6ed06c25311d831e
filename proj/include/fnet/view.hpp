#pragma once

#include "fnet/diagnostic.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fnet {

// One referenced element of a feature view. `name` is a dotted suffix path
// into the architecture for regular blocks, or a free name for env blocks.
struct ViewBlock {
    std::string name;
    bool env = false;
    std::optional<std::string> stereotype;
    Span origin;
};

// Hierarchy indication: `outer` is drawn containing `inner`; intermediate
// architecture levels may be omitted.
struct ViewNesting {
    std::string outer;
    std::string inner;
    Span origin;
};

struct ViewConnector {
    std::string source;
    std::string target;
    std::vector<std::string> signals;
    std::optional<std::string> stereotype;
    Span origin;
};

// One feature's cross-hierarchy diagram. Well-formedness (unique block
// names, declared endpoints, env placement) is enforced by the view parser.
struct FeatureView {
    std::string name;
    std::string file;
    std::vector<ViewBlock> blocks;
    std::vector<ViewNesting> nestings;
    std::vector<ViewConnector> connectors;

    const ViewBlock* find_block(std::string_view name) const;
};

// Span-insensitive, order-insensitive comparison (the canonical serializer
// regroups declarations).
bool structurally_equal(const FeatureView& a, const FeatureView& b);

} // namespace fnet
