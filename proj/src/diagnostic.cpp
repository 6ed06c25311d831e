#include "fnet/diagnostic.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace fnet {

std::string_view code_name(DiagCode code) {
    switch (code) {
    case DiagCode::P001: return "P001";
    case DiagCode::N001: return "N001";
    case DiagCode::N002: return "N002";
    case DiagCode::N003: return "N003";
    case DiagCode::N004: return "N004";
    case DiagCode::N005: return "N005";
    case DiagCode::N006: return "N006";
    case DiagCode::W001: return "W001";
    case DiagCode::W002: return "W002";
    case DiagCode::W003: return "W003";
    case DiagCode::W004: return "W004";
    case DiagCode::V001: return "V001";
    case DiagCode::V002: return "V002";
    case DiagCode::V003: return "V003";
    case DiagCode::V004: return "V004";
    case DiagCode::V005: return "V005";
    case DiagCode::V006: return "V006";
    }
    return "????";
}

Severity default_severity(DiagCode code) {
    switch (code) {
    case DiagCode::W001:
    case DiagCode::W002:
    case DiagCode::W003:
    case DiagCode::W004:
        return Severity::Warning;
    default:
        return Severity::Error;
    }
}

bool strict_upgradable(DiagCode code) {
    return code == DiagCode::W001;
}

Diagnostic make_diagnostic(DiagCode code, Span span, std::string message,
                           std::vector<std::string> related) {
    return Diagnostic{code, default_severity(code), std::move(span), std::move(message),
                      std::move(related)};
}

std::string format_diagnostic(const Diagnostic& d) {
    std::ostringstream out;
    out << d.span.file << ':' << d.span.line << ':' << d.span.col << ": "
        << (d.severity == Severity::Error ? "error" : "warning") << '[' << code_name(d.code)
        << "]: " << d.message;
    return out.str();
}

namespace {

auto sort_key(const Diagnostic& d) {
    return std::tie(d.span.file, d.span.line, d.span.col, d.code, d.message);
}

} // namespace

void sort_diagnostics(std::vector<Diagnostic>& diagnostics) {
    std::stable_sort(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& a, const Diagnostic& b) {
                         return sort_key(a) < sort_key(b);
                     });
}

void dedupe_diagnostics(std::vector<Diagnostic>& diagnostics) {
    diagnostics.erase(std::unique(diagnostics.begin(), diagnostics.end(),
                                  [](const Diagnostic& a, const Diagnostic& b) {
                                      return sort_key(a) == sort_key(b) &&
                                             a.related == b.related;
                                  }),
                      diagnostics.end());
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

void apply_strict(std::vector<Diagnostic>& diagnostics) {
    for (Diagnostic& d : diagnostics) {
        if (d.severity == Severity::Warning && strict_upgradable(d.code)) {
            d.severity = Severity::Error;
        }
    }
}

} // namespace fnet
