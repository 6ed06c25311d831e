#pragma once

#include "fnet/fragment.hpp"
#include "fnet/model.hpp"
#include "fnet/view.hpp"

#include <string>

namespace fnet {

// Canonical text form: 2-space indentation, declarations grouped by kind in
// source order, connector signal lists sorted. parse(serialize(x)) is
// structurally equal to x and serialize is a fixed point after one pass.
std::string serialize_net(const NetFragment& fragment);

// Resolved nets serialize flattened: expanded blocks in path order, every
// connector at top level with absolute endpoint paths, no type declarations.
std::string serialize_net(const ResolvedNet& net);

std::string serialize_view(const FeatureView& view);

} // namespace fnet
