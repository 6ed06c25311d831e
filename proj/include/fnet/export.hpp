#pragma once

#include "fnet/diagnostic.hpp"
#include "fnet/model.hpp"
#include "fnet/view.hpp"

#include <json.hpp>

#include <optional>
#include <span>
#include <string>

namespace fnet {

struct ExportOptions {
    bool include_signals = true;    // edge labels
    bool cluster_hierarchy = true;  // containment as nested clusters
    std::optional<std::string> highlight_view;
};

// Directed graph text: one node per block, nested clusters for containment,
// one edge per connector. When a view is highlighted its env blocks are
// overlaid with a distinct style, physical links drawn dashed and matched
// architecture edges emphasized.
std::string to_dot(const ResolvedNet& net, std::span<const FeatureView> views = {},
                   const ExportOptions& options = {});

// Structured export, schema_version 1. Arrays are sorted by path/span so
// output is byte-stable across runs.
nlohmann::json export_document(const ResolvedNet* net, std::span<const FeatureView> views,
                               std::span<const Diagnostic> diagnostics);

nlohmann::json to_json(const ResolvedNet& net);
nlohmann::json to_json(const FeatureView& view);
nlohmann::json to_json(std::span<const Diagnostic> diagnostics);

std::string to_json_text(const nlohmann::json& doc);

} // namespace fnet
