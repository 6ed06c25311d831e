#include "fnet/cli.hpp"

#include "fnet/analysis.hpp"
#include "fnet/checker.hpp"
#include "fnet/export.hpp"
#include "fnet/parser.hpp"
#include "fnet/resolver.hpp"
#include "fnet/serialize.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

namespace fs = std::filesystem;

namespace fnet::cli {

namespace {

constexpr int kExitClean = 0;
constexpr int kExitFindings = 1;
constexpr int kExitFault = 2;

struct Options {
    std::vector<std::string> net_files;
    std::vector<std::string> view_files;
    std::string views_dir;
    bool strict = false;
    bool cc3_single_connector = false;
    std::string format = "text";
    std::string output;
};

class Fault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Fault("cannot read '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Fault("cannot write '" + path + "'");
    }
    out << text;
    if (!out) {
        throw Fault("cannot write '" + path + "'");
    }
}

// --views <dir> picks up *.fview in sorted order for reproducible runs.
std::vector<std::string> collect_view_files(const Options& opts) {
    std::vector<std::string> files = opts.view_files;
    if (!opts.views_dir.empty()) {
        std::error_code ec;
        fs::directory_iterator it(opts.views_dir, ec);
        if (ec) {
            throw Fault("cannot read views directory '" + opts.views_dir + "'");
        }
        std::vector<std::string> found;
        for (const auto& entry : it) {
            if (entry.is_regular_file() && entry.path().extension() == ".fview") {
                found.push_back(entry.path().string());
            }
        }
        std::sort(found.begin(), found.end());
        files.insert(files.end(), found.begin(), found.end());
    }
    return files;
}

bool color_enabled(const std::ostream& out) {
    return &out == &std::cout && ::isatty(STDOUT_FILENO) != 0 &&
           std::getenv("FNET_NO_COLOR") == nullptr;
}

void print_diagnostics(const std::vector<Diagnostic>& diagnostics, std::ostream& out) {
    const bool color = color_enabled(out);
    for (const Diagnostic& d : diagnostics) {
        if (!color) {
            out << format_diagnostic(d) << '\n';
            continue;
        }
        const char* tint = d.severity == Severity::Error ? "\033[31m" : "\033[33m";
        out << d.span.file << ':' << d.span.line << ':' << d.span.col << ": " << tint
            << (d.severity == Severity::Error ? "error" : "warning") << '['
            << code_name(d.code) << ']' << "\033[0m" << ": " << d.message << '\n';
    }
}

void emit_diagnostics(const Options& opts, const std::vector<Diagnostic>& diagnostics,
                      std::ostream& out) {
    if (opts.format == "json") {
        out << to_json_text(to_json(std::span<const Diagnostic>(diagnostics)));
    } else {
        print_diagnostics(diagnostics, out);
    }
}

struct LoadedModel {
    std::optional<ResolvedNet> net;
    std::vector<FeatureView> views;
    std::vector<Diagnostic> diagnostics; // parse + resolve + lint findings
};

LoadedModel load(const Options& opts, bool want_views, bool want_lint) {
    LoadedModel model;

    std::vector<NetFragment> fragments;
    bool parse_failed = false;
    for (const std::string& path : opts.net_files) {
        Parsed<NetFragment> parsed = parse_net_source(read_file(path), path);
        model.diagnostics.insert(model.diagnostics.end(), parsed.diagnostics.begin(),
                                 parsed.diagnostics.end());
        if (parsed.value) {
            fragments.push_back(std::move(*parsed.value));
        } else {
            parse_failed = true;
        }
    }

    if (!parse_failed) {
        ResolutionResult resolved = resolve_model(fragments);
        model.diagnostics.insert(model.diagnostics.end(), resolved.diagnostics.begin(),
                                 resolved.diagnostics.end());
        if (resolved.net) {
            model.net = std::move(resolved.net);
            if (want_lint) {
                std::vector<Diagnostic> lint = lint_net(*model.net);
                model.diagnostics.insert(model.diagnostics.end(), lint.begin(), lint.end());
            }
        }
    }

    if (want_views && model.net) {
        for (const std::string& path : collect_view_files(opts)) {
            Parsed<ViewFragment> parsed = parse_view_source(read_file(path), path);
            model.diagnostics.insert(model.diagnostics.end(), parsed.diagnostics.begin(),
                                     parsed.diagnostics.end());
            if (parsed.value) {
                model.views.push_back(std::move(*parsed.value));
            }
        }
    }
    return model;
}

int finish(const Options& opts, std::vector<Diagnostic> diagnostics, std::ostream& out) {
    if (opts.strict) {
        apply_strict(diagnostics);
    }
    sort_diagnostics(diagnostics);
    dedupe_diagnostics(diagnostics);
    emit_diagnostics(opts, diagnostics, out);
    return has_errors(diagnostics) ? kExitFindings : kExitClean;
}

int run_check(const Options& opts, std::ostream& out) {
    LoadedModel model = load(opts, /*want_views=*/true, /*want_lint=*/true);
    if (model.net) {
        CheckOptions check_opts{opts.strict, opts.cc3_single_connector};
        for (const FeatureView& view : model.views) {
            std::vector<Diagnostic> found = check_view(*model.net, view, check_opts);
            model.diagnostics.insert(model.diagnostics.end(), found.begin(), found.end());
        }
    }
    return finish(opts, std::move(model.diagnostics), out);
}

int run_lint(const Options& opts, std::ostream& out) {
    LoadedModel model = load(opts, /*want_views=*/false, /*want_lint=*/true);
    return finish(opts, std::move(model.diagnostics), out);
}

void write_or_print(const Options& opts, const std::string& text, std::ostream& out) {
    if (opts.output.empty()) {
        out << text;
    } else {
        write_file(opts.output, text);
    }
}

int run_query_impact(const Options& opts, const std::string& element, std::ostream& out) {
    LoadedModel model = load(opts, /*want_views=*/true, /*want_lint=*/false);
    if (!model.net || has_errors(model.diagnostics)) {
        return finish(opts, std::move(model.diagnostics), out);
    }
    std::string error;
    std::optional<ElementRef> ref = parse_element_ref(*model.net, element, error);
    if (!ref) {
        throw Fault(error);
    }
    CheckOptions check_opts{opts.strict, opts.cc3_single_connector};
    ImpactReport report = impact(*model.net, model.views, *ref, check_opts);

    if (opts.format == "json") {
        nlohmann::json doc;
        doc["schema_version"] = 1;
        doc["element"] = report.element;
        nlohmann::json hits = nlohmann::json::array();
        for (const ImpactHit& hit : report.hits) {
            nlohmann::json h;
            h["view"] = hit.view;
            h["element"] = hit.element;
            h["reason"] = hit.reason;
            hits.push_back(std::move(h));
        }
        doc["hits"] = std::move(hits);
        write_or_print(opts, to_json_text(doc), out);
    } else {
        std::ostringstream text;
        text << "impact of " << report.element << ":\n";
        for (const ImpactHit& hit : report.hits) {
            text << "  " << hit.view << ": " << hit.element << ": " << hit.reason << '\n';
        }
        if (report.hits.empty()) {
            text << "  (no view references it)\n";
        }
        write_or_print(opts, text.str(), out);
    }
    return kExitClean;
}

int run_query_matrix(const Options& opts, std::ostream& out) {
    LoadedModel model = load(opts, /*want_views=*/true, /*want_lint=*/false);
    if (!model.net || has_errors(model.diagnostics)) {
        return finish(opts, std::move(model.diagnostics), out);
    }
    CheckOptions check_opts{opts.strict, opts.cc3_single_connector};
    FeatureFunctionMatrix m = feature_matrix(*model.net, model.views, check_opts);
    if (opts.format == "csv") {
        write_or_print(opts, render_matrix_csv(m), out);
    } else if (opts.format == "json") {
        nlohmann::json doc;
        doc["schema_version"] = 1;
        doc["columns"] = m.columns;
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : m.rows) {
            nlohmann::json r;
            r["view"] = row.view;
            r["consistent"] = row.consistent;
            std::vector<int> cells;
            for (bool cell : row.cells) {
                cells.push_back(cell ? 1 : 0);
            }
            r["cells"] = cells;
            rows.push_back(std::move(r));
        }
        doc["rows"] = std::move(rows);
        write_or_print(opts, to_json_text(doc), out);
    } else {
        write_or_print(opts, render_matrix_text(m), out);
    }
    return kExitClean;
}

int run_export(const Options& opts, const std::string& kind, bool no_signals, bool flat,
               const std::string& highlight, std::ostream& out) {
    LoadedModel model = load(opts, /*want_views=*/true, /*want_lint=*/false);
    if (!model.net || has_errors(model.diagnostics)) {
        return finish(opts, std::move(model.diagnostics), out);
    }
    if (kind == "dot") {
        ExportOptions export_opts;
        export_opts.include_signals = !no_signals;
        export_opts.cluster_hierarchy = !flat;
        if (!highlight.empty()) {
            export_opts.highlight_view = highlight;
        }
        write_or_print(opts, to_dot(*model.net, model.views, export_opts), out);
    } else {
        nlohmann::json doc = export_document(&*model.net, model.views, {});
        write_or_print(opts, to_json_text(doc), out);
    }
    return kExitClean;
}

int run_fmt(const std::vector<std::string>& files, const Options& opts, std::ostream& out) {
    std::vector<Diagnostic> diagnostics;
    for (const std::string& path : files) {
        const std::string text = read_file(path);
        std::string canonical;
        if (fs::path(path).extension() == ".fview") {
            Parsed<ViewFragment> parsed = parse_view_source(text, path);
            diagnostics.insert(diagnostics.end(), parsed.diagnostics.begin(),
                               parsed.diagnostics.end());
            if (!parsed.value) {
                continue;
            }
            canonical = serialize_view(*parsed.value);
        } else {
            Parsed<NetFragment> parsed = parse_net_source(text, path);
            diagnostics.insert(diagnostics.end(), parsed.diagnostics.begin(),
                               parsed.diagnostics.end());
            if (!parsed.value) {
                continue;
            }
            canonical = serialize_net(*parsed.value);
        }
        if (!opts.output.empty()) {
            write_file(opts.output, canonical);
        } else if (canonical != text) {
            write_file(path, canonical);
        }
    }
    return finish(opts, std::move(diagnostics), out);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"function net modeling and feature view consistency toolkit", "fnet"};
    app.require_subcommand(1);

    Options opts;

    auto add_common = [&](CLI::App* cmd, bool with_views) {
        cmd->add_option("nets", opts.net_files, "architecture files (.fnet)")
            ->required()
            ->check(CLI::ExistingFile);
        if (with_views) {
            cmd->add_option("--view", opts.view_files, "feature view file (.fview)")
                ->check(CLI::ExistingFile);
            cmd->add_option("--views", opts.views_dir, "directory scanned for *.fview");
        }
        cmd->add_flag("--strict", opts.strict, "treat listed warnings as errors");
        cmd->add_flag("--cc3-single-connector", opts.cc3_single_connector,
                      "one architecture connector must carry all signals of a view link");
        cmd->add_option("--format", opts.format, "output format")
            ->check(CLI::IsMember({"text", "json"}));
    };

    CLI::App* check = app.add_subcommand("check", "check views against the architecture");
    add_common(check, true);

    CLI::App* lint = app.add_subcommand("lint", "architecture well-formedness only");
    add_common(lint, false);

    CLI::App* query = app.add_subcommand("query", "traceability queries");
    query->require_subcommand(1);
    CLI::App* impact_cmd = query->add_subcommand("impact", "views affected by an element");
    std::string element;
    impact_cmd->add_option("element", element,
                           "block path or 'src -> dst' connector description")
        ->required();
    add_common(impact_cmd, true);
    impact_cmd->add_option("-o,--output", opts.output, "write the report here");

    CLI::App* matrix_cmd = query->add_subcommand("matrix", "feature x function matrix");
    matrix_cmd->add_option("nets", opts.net_files, "architecture files (.fnet)")
        ->required()
        ->check(CLI::ExistingFile);
    matrix_cmd->add_option("--view", opts.view_files, "feature view file (.fview)")
        ->check(CLI::ExistingFile);
    matrix_cmd->add_option("--views", opts.views_dir, "directory scanned for *.fview");
    matrix_cmd->add_flag("--strict", opts.strict, "treat listed warnings as errors");
    matrix_cmd->add_flag("--cc3-single-connector", opts.cc3_single_connector,
                         "one architecture connector must carry all signals of a view link");
    matrix_cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    matrix_cmd->add_option("-o,--output", opts.output, "write the matrix here");

    CLI::App* export_cmd = app.add_subcommand("export", "emit dot or json");
    export_cmd->require_subcommand(1);
    bool no_signals = false;
    bool flat = false;
    std::string highlight;
    for (const char* kind : {"dot", "json"}) {
        CLI::App* sub = export_cmd->add_subcommand(kind);
        sub->add_option("nets", opts.net_files, "architecture files (.fnet)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--view", opts.view_files, "feature view file (.fview)")
            ->check(CLI::ExistingFile);
        sub->add_option("--views", opts.views_dir, "directory scanned for *.fview");
        sub->add_option("-o,--output", opts.output, "write here instead of standard output");
        if (std::string(kind) == "dot") {
            sub->add_flag("--no-signals", no_signals, "omit signal labels on edges");
            sub->add_flag("--flat", flat, "plain nodes instead of nested clusters");
            sub->add_option("--highlight", highlight, "overlay this view's environment");
        }
    }

    CLI::App* fmt = app.add_subcommand("fmt", "rewrite files to canonical form");
    std::vector<std::string> fmt_files;
    fmt->add_option("files", fmt_files, ".fnet or .fview files")
        ->required()
        ->check(CLI::ExistingFile);
    fmt->add_option("-o,--output", opts.output,
                    "write here instead of rewriting in place (single input)");

    try {
        std::vector<std::string> argv = args;
        argv.insert(argv.begin(), "fnet");
        std::vector<const char*> raw;
        for (const std::string& a : argv) {
            raw.push_back(a.c_str());
        }
        app.parse(static_cast<int>(raw.size()), raw.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitClean;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitClean;
    } catch (const CLI::ParseError& e) {
        err << "fnet: " << e.what() << '\n';
        return kExitFault;
    }

    try {
        if (check->parsed()) {
            return run_check(opts, out);
        }
        if (lint->parsed()) {
            return run_lint(opts, out);
        }
        if (query->parsed()) {
            if (impact_cmd->parsed()) {
                return run_query_impact(opts, element, out);
            }
            return run_query_matrix(opts, out);
        }
        if (export_cmd->parsed()) {
            const bool dot = export_cmd->get_subcommands().front()->get_name() == "dot";
            return run_export(opts, dot ? "dot" : "json", no_signals, flat, highlight, out);
        }
        if (fmt->parsed()) {
            if (!opts.output.empty() && fmt_files.size() != 1) {
                throw Fault("-o requires exactly one input file");
            }
            return run_fmt(fmt_files, opts, out);
        }
        throw Fault("no subcommand selected");
    } catch (const Fault& e) {
        err << "fnet: " << e.what() << '\n';
        return kExitFault;
    } catch (const std::exception& e) {
        err << "fnet: internal error: " << e.what() << '\n';
        return kExitFault;
    }
}

} // namespace fnet::cli
