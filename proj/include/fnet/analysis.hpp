#pragma once

#include "fnet/checker.hpp"
#include "fnet/model.hpp"
#include "fnet/view.hpp"

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace fnet {

struct ViewBlocksResult {
    std::set<std::string> paths;           // qualified paths touched by the view
    std::vector<Diagnostic> diagnostics;   // non-empty iff the view is inconsistent
    bool ok() const { return diagnostics.empty(); }
};

// Union of the view's CC1 bindings and both endpoint blocks of every
// architecture connector matched by its links. Inconsistent views yield
// their check diagnostics instead.
ViewBlocksResult blocks_of_view(const ResolvedNet& net, const FeatureView& view,
                                const CheckOptions& options = {});

// What an impact query may point at: one block or one communication pair.
struct ElementRef {
    enum class Kind { Block, Connector };
    Kind kind = Kind::Block;
    std::string block_path;          // Kind::Block
    std::string source, target;      // Kind::Connector, qualified paths
};

// Parses "Vehicle.Brake" or "Vehicle.ACC -> Vehicle.Brake.BrakeLogic" and
// verifies the element exists; nullopt with a message otherwise.
std::optional<ElementRef> parse_element_ref(const ResolvedNet& net, std::string_view text,
                                            std::string& error);

struct ImpactHit {
    std::string view;
    std::string element; // view block name or view link description
    std::string reason;  // direct-reference | superblock-match | signal-use
};

struct ImpactReport {
    std::string element;
    std::vector<ImpactHit> hits; // sorted, unique
};

// Every view that references the element directly, matches through it from
// a superblock, or names one of its signals on a view link.
ImpactReport impact(const ResolvedNet& net, std::span<const FeatureView> views,
                    const ElementRef& element, const CheckOptions& options = {});

struct FeatureFunctionMatrix {
    std::vector<std::string> columns; // all architecture paths, sorted

    struct Row {
        std::string view;
        bool consistent = true; // inconsistent rows carry CC1 bindings only
        std::vector<bool> cells;
    };

    std::vector<Row> rows; // sorted by view name

    size_t set_cell_count() const;
};

FeatureFunctionMatrix feature_matrix(const ResolvedNet& net, std::span<const FeatureView> views,
                                     const CheckOptions& options = {});

std::string render_matrix_text(const FeatureFunctionMatrix& m);
std::string render_matrix_csv(const FeatureFunctionMatrix& m);

struct FlatLink {
    std::string source; // "path" or "path:port"
    std::string target;
    std::vector<std::string> signals;
};

// One entry per architecture connector with endpoints rendered as qualified
// paths, sorted by (source, target, signals).
std::vector<FlatLink> flatten_communication(const ResolvedNet& net);

} // namespace fnet
