#pragma once

#include "fnet/diagnostic.hpp"
#include "fnet/fragment.hpp"
#include "fnet/view.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace fnet {

// Parse outcome: `value` is present iff no error-severity diagnostic was
// produced. Syntax errors never throw; they become P001 findings.
template <typename T>
struct Parsed {
    std::optional<T> value;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return value.has_value(); }
};

using ViewFragment = FeatureView;

Parsed<NetFragment> parse_net_source(std::string_view text, std::string filename);

// Also enforces view-local well-formedness: unique block names, connector
// and nesting endpoints naming declared view blocks, and env blocks never
// nested inside non-env blocks. Violations are P001 findings.
Parsed<ViewFragment> parse_view_source(std::string_view text, std::string filename);

} // namespace fnet
