#pragma once

#include "fnet/diagnostic.hpp"
#include "fnet/fragment.hpp"
#include "fnet/model.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fnet {

// Multi-file union model before type expansion. Connects are hoisted out of
// block bodies with the path of their declaring block as lexical scope.
struct ScopedConnect {
    ConnectDecl decl;
    std::vector<std::string> scope; // path of the declaring block, [] = file level
};

struct ProtoBlock {
    std::string name;
    std::optional<std::string> type_name;
    std::vector<Port> ports;
    std::vector<ProtoBlock> children;
    Span origin;
    // Set on blocks copied out of a type body: path of the instance root
    // plus the type that supplied the copy.
    std::optional<std::pair<std::string, std::string>> instantiated_from;
};

struct ProtoNet {
    std::vector<Signal> signals;
    std::vector<TypeDecl> types;
    std::vector<ProtoBlock> roots;
    std::vector<ScopedConnect> connects;
};

struct MergeResult {
    std::optional<ProtoNet> model;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return model.has_value(); }
};

struct ResolutionResult {
    std::optional<ResolvedNet> net;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return net.has_value(); }
};

// Unions fragments: a block path may be re-opened across files, signals and
// types union idempotently. N001 duplicate siblings, N002 conflicting type
// bodies, N005 conflicting signal types.
MergeResult merge_fragments(std::span<const NetFragment> fragments);

// Replaces every typed block's contents by a fresh copy of the type body,
// recursively; internal type connectors are duplicated per instance. N002
// unknown type, N003 instantiation cycle, N004 connector escaping its body.
MergeResult expand_types(ProtoNet model);

// Builds the immutable net: canonical block order, connector endpoint
// binding (dangling connectors recorded for lint), duplicate collapse (W004).
ResolutionResult bind_net(const ProtoNet& model);

// merge_fragments | expand_types | bind_net. Diagnostics from all stages.
ResolutionResult resolve_model(std::span<const NetFragment> fragments);

struct RefResolution {
    std::optional<BlockId> id;
    std::optional<Diagnostic> diagnostic; // V001 or V002
};

// Resolves a dotted name against the expanded net: an exact qualified path
// wins, otherwise the name must match exactly one path suffix (V002 lists
// every candidate).
RefResolution resolve_ref(const ResolvedNet& net, std::string_view dotted, Span span = {});

} // namespace fnet
