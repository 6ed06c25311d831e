#include "fnet/analysis.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace fnet {

namespace {

// CC1 bindings plus the concrete endpoints of every architecture connector
// matched by the view's links.
std::set<std::string> gather_paths(const ResolvedNet& net, const ViewBinding& binding) {
    std::set<std::string> paths;
    for (const auto& [name, id] : binding.bound) {
        paths.insert(net.qualified_path(id));
    }
    for (const auto& matches : binding.matched) {
        for (uint32_t m : matches) {
            const Connector& c = net.connectors()[m];
            paths.insert(net.qualified_path(c.source.block));
            paths.insert(net.qualified_path(c.target.block));
        }
    }
    return paths;
}

} // namespace

ViewBlocksResult blocks_of_view(const ResolvedNet& net, const FeatureView& view,
                                const CheckOptions& options) {
    ViewBlocksResult result;
    Cc1Result cc1 = check_cc1(net, view);
    std::vector<Diagnostic> diagnostics = std::move(cc1.diagnostics);
    std::vector<Diagnostic> cc2 = check_cc2(net, view, cc1.binding);
    diagnostics.insert(diagnostics.end(), cc2.begin(), cc2.end());
    std::vector<Diagnostic> cc3 = check_cc3(net, view, cc1.binding, options);
    diagnostics.insert(diagnostics.end(), cc3.begin(), cc3.end());
    if (has_errors(diagnostics)) {
        sort_diagnostics(diagnostics);
        result.diagnostics = std::move(diagnostics);
        return result;
    }
    result.paths = gather_paths(net, cc1.binding);
    return result;
}

std::optional<ElementRef> parse_element_ref(const ResolvedNet& net, std::string_view text,
                                            std::string& error) {
    const size_t arrow = text.find("->");
    if (arrow == std::string_view::npos) {
        ElementRef ref;
        ref.kind = ElementRef::Kind::Block;
        ref.block_path = std::string(text);
        while (!ref.block_path.empty() && ref.block_path.back() == ' ') {
            ref.block_path.pop_back();
        }
        while (!ref.block_path.empty() && ref.block_path.front() == ' ') {
            ref.block_path.erase(ref.block_path.begin());
        }
        if (!net.find_path(ref.block_path)) {
            error = "no architecture block has qualified path '" + ref.block_path + "'";
            return std::nullopt;
        }
        return ref;
    }

    auto trim = [](std::string_view v) {
        while (!v.empty() && v.front() == ' ') {
            v.remove_prefix(1);
        }
        while (!v.empty() && v.back() == ' ') {
            v.remove_suffix(1);
        }
        return std::string(v);
    };
    ElementRef ref;
    ref.kind = ElementRef::Kind::Connector;
    ref.source = trim(text.substr(0, arrow));
    ref.target = trim(text.substr(arrow + 2));
    const std::optional<BlockId> src = net.find_path(ref.source);
    const std::optional<BlockId> dst = net.find_path(ref.target);
    if (!src || !dst) {
        error = "connector endpoints must be qualified paths: '" + std::string(text) + "'";
        return std::nullopt;
    }
    bool found = false;
    for (const Connector& c : net.connectors()) {
        if (c.source.block == *src && c.target.block == *dst) {
            found = true;
            break;
        }
    }
    if (!found) {
        error = "no architecture connector runs '" + ref.source + " -> " + ref.target + "'";
        return std::nullopt;
    }
    return ref;
}

ImpactReport impact(const ResolvedNet& net, std::span<const FeatureView> views,
                    const ElementRef& element, const CheckOptions& options) {
    ImpactReport report;
    std::set<std::tuple<std::string, std::string, std::string>> seen;

    auto add_hit = [&](const std::string& view, std::string el, std::string reason) {
        if (seen.emplace(view, el, reason).second) {
            report.hits.push_back({view, std::move(el), std::move(reason)});
        }
    };

    if (element.kind == ElementRef::Kind::Block) {
        report.element = element.block_path;
        const BlockId target = *net.find_path(element.block_path);

        for (const FeatureView& view : views) {
            Cc1Result cc1 = check_cc1(net, view);
            check_cc3(net, view, cc1.binding, options);

            for (const auto& [name, id] : cc1.binding.bound) {
                if (id == target) {
                    add_hit(view.name, name, "direct-reference");
                }
            }
            for (size_t i = 0; i < view.connectors.size(); ++i) {
                const ViewConnector& vc = view.connectors[i];
                const std::string link = vc.source + " -> " + vc.target;
                for (uint32_t m : cc1.binding.matched[i]) {
                    const Connector& c = net.connectors()[m];
                    const bool src_hit = c.source.block == target &&
                                         cc1.binding.lookup(vc.source) != target;
                    const bool dst_hit = c.target.block == target &&
                                         cc1.binding.lookup(vc.target) != target;
                    if (src_hit || dst_hit) {
                        add_hit(view.name, link, "superblock-match");
                    }
                }
            }
        }
    } else {
        report.element = element.source + " -> " + element.target;
        const BlockId src = *net.find_path(element.source);
        const BlockId dst = *net.find_path(element.target);
        std::vector<uint32_t> element_connectors;
        for (uint32_t i = 0; i < net.connectors().size(); ++i) {
            const Connector& c = net.connectors()[i];
            if (c.source.block == src && c.target.block == dst) {
                element_connectors.push_back(i);
            }
        }

        for (const FeatureView& view : views) {
            Cc1Result cc1 = check_cc1(net, view);
            check_cc3(net, view, cc1.binding, options);

            for (size_t i = 0; i < view.connectors.size(); ++i) {
                const ViewConnector& vc = view.connectors[i];
                const std::string link = vc.source + " -> " + vc.target;
                for (uint32_t m : cc1.binding.matched[i]) {
                    if (std::find(element_connectors.begin(), element_connectors.end(), m) ==
                        element_connectors.end()) {
                        continue;
                    }
                    const Connector& c = net.connectors()[m];
                    const bool exact = cc1.binding.lookup(vc.source) == c.source.block &&
                                       cc1.binding.lookup(vc.target) == c.target.block;
                    add_hit(view.name, link, exact ? "direct-reference" : "superblock-match");
                    for (const std::string& s : vc.signals) {
                        if (std::binary_search(c.signals.begin(), c.signals.end(), s)) {
                            add_hit(view.name, link, "signal-use");
                            break;
                        }
                    }
                }
            }
        }
    }

    std::sort(report.hits.begin(), report.hits.end(),
              [](const ImpactHit& a, const ImpactHit& b) {
                  return std::tie(a.view, a.element, a.reason) <
                         std::tie(b.view, b.element, b.reason);
              });
    return report;
}

size_t FeatureFunctionMatrix::set_cell_count() const {
    size_t count = 0;
    for (const Row& row : rows) {
        for (bool cell : row.cells) {
            count += cell ? 1 : 0;
        }
    }
    return count;
}

FeatureFunctionMatrix feature_matrix(const ResolvedNet& net, std::span<const FeatureView> views,
                                     const CheckOptions& options) {
    FeatureFunctionMatrix m;
    for (uint32_t i = 0; i < net.block_count(); ++i) {
        m.columns.push_back(net.qualified_path(BlockId{i}));
    }
    std::sort(m.columns.begin(), m.columns.end());

    std::map<std::string, size_t> column_index;
    for (size_t i = 0; i < m.columns.size(); ++i) {
        column_index.emplace(m.columns[i], i);
    }

    for (const FeatureView& view : views) {
        FeatureFunctionMatrix::Row row;
        row.view = view.name;
        row.cells.assign(m.columns.size(), false);

        ViewBlocksResult blocks = blocks_of_view(net, view, options);
        if (blocks.ok()) {
            for (const std::string& path : blocks.paths) {
                row.cells[column_index.at(path)] = true;
            }
        } else {
            // Inconsistent views keep their resolvable references so the
            // matrix still shows what they touch.
            row.consistent = false;
            Cc1Result cc1 = check_cc1(net, view);
            for (const auto& [name, id] : cc1.binding.bound) {
                row.cells[column_index.at(net.qualified_path(id))] = true;
            }
        }
        m.rows.push_back(std::move(row));
    }
    std::sort(m.rows.begin(), m.rows.end(),
              [](const FeatureFunctionMatrix::Row& a, const FeatureFunctionMatrix::Row& b) {
                  return a.view < b.view;
              });
    return m;
}

std::string render_matrix_text(const FeatureFunctionMatrix& m) {
    std::ostringstream out;
    size_t name_width = 4; // "view"
    for (const auto& row : m.rows) {
        name_width = std::max(name_width, row.view.size() + (row.consistent ? 0 : 2));
    }

    out << std::string(name_width, ' ');
    for (const std::string& col : m.columns) {
        out << "  " << col;
    }
    out << '\n';
    for (const auto& row : m.rows) {
        std::string label = row.view + (row.consistent ? "" : " !");
        out << label << std::string(name_width - label.size(), ' ');
        for (size_t i = 0; i < m.columns.size(); ++i) {
            const std::string mark = row.cells[i] ? "x" : ".";
            out << "  " << mark << std::string(m.columns[i].size() - 1, ' ');
        }
        out << '\n';
    }
    return out.str();
}

std::string render_matrix_csv(const FeatureFunctionMatrix& m) {
    std::ostringstream out;
    out << "view";
    for (const std::string& col : m.columns) {
        out << ',' << col;
    }
    out << '\n';
    for (const auto& row : m.rows) {
        out << row.view << (row.consistent ? "" : "!");
        for (bool cell : row.cells) {
            out << ',' << (cell ? '1' : '0');
        }
        out << '\n';
    }
    return out.str();
}

std::vector<FlatLink> flatten_communication(const ResolvedNet& net) {
    std::vector<FlatLink> out;
    for (const Connector& c : net.connectors()) {
        FlatLink link;
        link.source = net.endpoint_text(c.source);
        link.target = net.endpoint_text(c.target);
        link.signals = c.signals;
        out.push_back(std::move(link));
    }
    std::sort(out.begin(), out.end(), [](const FlatLink& a, const FlatLink& b) {
        return std::tie(a.source, a.target, a.signals) <
               std::tie(b.source, b.target, b.signals);
    });
    return out;
}

} // namespace fnet
