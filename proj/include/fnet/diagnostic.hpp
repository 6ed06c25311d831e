#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fnet {

// Location of a model element or finding in its source file. line/col are
// 1-based; offset/length are byte positions used for slicing, not printed.
struct Span {
    std::string file;
    uint32_t line = 1;
    uint32_t col = 1;
    uint32_t offset = 0;
    uint32_t length = 0;
};

enum class Severity { Warning, Error };

// Stable diagnostic catalog. Codes are part of the external interface and
// must not be renumbered.
enum class DiagCode {
    P001, // syntax error
    N001, // duplicate sibling name within one declaration
    N002, // unknown or conflicting type definition/reference
    N003, // recursive type instantiation
    N004, // connector endpoint does not resolve
    N005, // signal redeclared with conflicting value type
    N006, // connector references an undeclared signal
    W001, // connector carries no signals
    W002, // connector direction contradicts port direction
    W003, // block exchanges no signals (isolated subtree)
    W004, // duplicate connector collapsed
    V001, // view block not found in the architecture
    V002, // view block reference is ambiguous
    V003, // view nesting not backed by the containment hierarchy
    V004, // view communication has no architecture counterpart
    V005, // view signal not carried by any matching connector
    V006, // matching connectors carry no signals at all
};

std::string_view code_name(DiagCode code);
Severity default_severity(DiagCode code);

// Warnings that `--strict` promotes to errors.
bool strict_upgradable(DiagCode code);

struct Diagnostic {
    DiagCode code;
    Severity severity;
    Span span;
    std::string message;
    std::vector<std::string> related; // qualified paths / connector descriptions
};

Diagnostic make_diagnostic(DiagCode code, Span span, std::string message,
                           std::vector<std::string> related = {});

// FILE:LINE:COL: SEVERITY[CODE]: MESSAGE
std::string format_diagnostic(const Diagnostic& d);

// Deterministic order: (file, line, col, code, message).
void sort_diagnostics(std::vector<Diagnostic>& diagnostics);

// Drops exact duplicates; expects a sorted vector.
void dedupe_diagnostics(std::vector<Diagnostic>& diagnostics);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

// Applies --strict: upgrades the strict_upgradable warnings to errors.
void apply_strict(std::vector<Diagnostic>& diagnostics);

// Programming errors (stale ids, broken invariants). Never used for model
// findings; the CLI maps it to exit code 2.
class internal_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace fnet
