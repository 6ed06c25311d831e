#include "fnet/export.hpp"

#include "fnet/checker.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace fnet {

namespace {

std::string dot_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out;
}

void write_block_nodes(std::ostringstream& out, const ResolvedNet& net, BlockId id,
                       const ExportOptions& options, const std::set<uint32_t>& bound,
                       int depth) {
    const Block& b = net.block(id);
    const std::string ind(static_cast<size_t>(depth) * 2, ' ');
    const bool emphasized = bound.count(id.value) > 0;
    const std::string extra = emphasized ? ", penwidth=2, color=\"#1f4e99\"" : "";
    if (options.cluster_hierarchy && !b.children.empty()) {
        out << ind << "subgraph cluster_" << id.value << " {\n";
        out << ind << "  label=\"" << dot_escape(b.name) << "\";\n";
        out << ind << "  n" << id.value << " [label=\"" << dot_escape(b.name)
            << "\", shape=box" << extra << "];\n";
        for (BlockId child : b.children) {
            write_block_nodes(out, net, child, options, bound, depth + 1);
        }
        out << ind << "}\n";
        return;
    }
    const std::string label = options.cluster_hierarchy ? b.name : net.qualified_path(id);
    out << ind << "n" << id.value << " [label=\"" << dot_escape(label) << "\", shape=box"
        << extra << "];\n";
    for (BlockId child : b.children) {
        write_block_nodes(out, net, child, options, bound, depth);
    }
}

std::string signal_label(const std::vector<std::string>& signals) {
    std::string out;
    for (const std::string& s : signals) {
        out += out.empty() ? s : ", " + s;
    }
    return out;
}

} // namespace

std::string to_dot(const ResolvedNet& net, std::span<const FeatureView> views,
                   const ExportOptions& options) {
    const FeatureView* highlight = nullptr;
    if (options.highlight_view) {
        for (const FeatureView& v : views) {
            if (v.name == *options.highlight_view) {
                highlight = &v;
                break;
            }
        }
    }

    // Bindings and matches of the highlighted view drive the styling.
    std::set<uint32_t> bound_blocks;
    std::set<uint32_t> matched_edges;
    Cc1Result cc1;
    if (highlight) {
        cc1 = check_cc1(net, *highlight);
        check_cc3(net, *highlight, cc1.binding);
        for (const auto& [name, id] : cc1.binding.bound) {
            bound_blocks.insert(id.value);
        }
        for (const auto& matches : cc1.binding.matched) {
            for (uint32_t m : matches) {
                matched_edges.insert(m);
            }
        }
    }

    std::ostringstream out;
    out << "digraph fnet {\n";
    out << "  rankdir=LR;\n";
    out << "  node [fontname=\"Helvetica\"];\n";
    for (BlockId root : net.roots()) {
        write_block_nodes(out, net, root, options, bound_blocks, 1);
    }

    const auto& connectors = net.connectors();
    for (uint32_t i = 0; i < connectors.size(); ++i) {
        const Connector& c = connectors[i];
        out << "  n" << c.source.block.value << " -> n" << c.target.block.value;
        std::vector<std::string> attrs;
        if (options.include_signals && !c.signals.empty()) {
            attrs.push_back("label=\"" + dot_escape(signal_label(c.signals)) + "\"");
        }
        if (c.stereotype) {
            attrs.push_back("style=dashed");
        }
        if (matched_edges.count(i)) {
            attrs.push_back("penwidth=2");
            attrs.push_back("color=\"#1f4e99\"");
        }
        if (!attrs.empty()) {
            out << " [";
            for (size_t a = 0; a < attrs.size(); ++a) {
                out << (a ? ", " : "") << attrs[a];
            }
            out << ']';
        }
        out << ";\n";
    }

    // Environment overlay: env blocks have no architecture node, so the
    // highlighted view contributes them (and its physical links) directly.
    if (highlight) {
        std::map<std::string, std::string> env_nodes;
        uint32_t next = 0;
        for (const ViewBlock& b : highlight->blocks) {
            if (!b.env) {
                continue;
            }
            const std::string node = "env" + std::to_string(next++);
            env_nodes.emplace(b.name, node);
            std::string label = "<<env>> " + b.name;
            if (b.stereotype) {
                label += " <<" + *b.stereotype + ">>";
            }
            out << "  " << node << " [label=\"" << dot_escape(label)
                << "\", shape=box, style=dashed];\n";
        }
        for (const ViewConnector& vc : highlight->connectors) {
            auto render = [&](const std::string& name) -> std::optional<std::string> {
                auto env = env_nodes.find(name);
                if (env != env_nodes.end()) {
                    return env->second;
                }
                if (std::optional<BlockId> id = cc1.binding.lookup(name)) {
                    return "n" + std::to_string(id->value);
                }
                return std::nullopt;
            };
            const auto src = render(vc.source);
            const auto dst = render(vc.target);
            const bool env_link = env_nodes.count(vc.source) || env_nodes.count(vc.target);
            if (!src || !dst || !(env_link || vc.stereotype)) {
                continue; // signal links are already shown by matched edges
            }
            out << "  " << *src << " -> " << *dst << " [style=dashed";
            if (vc.stereotype) {
                out << ", label=\"<<" << dot_escape(*vc.stereotype) << ">>\"";
            }
            out << "];\n";
        }
    }

    out << "}\n";
    return out.str();
}

namespace {

nlohmann::json block_to_json(const ResolvedNet& net, BlockId id) {
    const Block& b = net.block(id);
    nlohmann::json j;
    j["path"] = net.qualified_path(id);
    j["type"] = b.type_name ? nlohmann::json(*b.type_name) : nlohmann::json(nullptr);
    j["parent"] = b.parent ? nlohmann::json(net.qualified_path(*b.parent))
                           : nlohmann::json(nullptr);
    j["stereotypes"] = nlohmann::json::array();
    nlohmann::json ports = nlohmann::json::array();
    std::vector<Port> sorted_ports = b.ports;
    std::sort(sorted_ports.begin(), sorted_ports.end(),
              [](const Port& a, const Port& p) { return a.name < p.name; });
    for (const Port& p : sorted_ports) {
        nlohmann::json pj;
        pj["name"] = p.name;
        pj["direction"] = p.direction == PortDirection::In ? "in" : "out";
        if (p.stereotype) {
            pj["stereotype"] = *p.stereotype;
        }
        ports.push_back(std::move(pj));
    }
    j["ports"] = std::move(ports);
    return j;
}

nlohmann::json connector_to_json(const ResolvedNet& net, const Connector& c) {
    nlohmann::json j;
    j["source"] = net.qualified_path(c.source.block);
    if (c.source.port) {
        j["source_port"] = *c.source.port;
    }
    j["target"] = net.qualified_path(c.target.block);
    if (c.target.port) {
        j["target_port"] = *c.target.port;
    }
    j["signals"] = c.signals;
    if (c.stereotype) {
        j["stereotype"] = *c.stereotype;
    }
    return j;
}

nlohmann::json view_to_json(const FeatureView& view) {
    nlohmann::json j;
    j["name"] = view.name;

    nlohmann::json blocks = nlohmann::json::array();
    std::vector<ViewBlock> sorted_blocks = view.blocks;
    std::sort(sorted_blocks.begin(), sorted_blocks.end(),
              [](const ViewBlock& a, const ViewBlock& b) { return a.name < b.name; });
    for (const ViewBlock& b : sorted_blocks) {
        nlohmann::json bj;
        bj["name"] = b.name;
        bj["env"] = b.env;
        if (b.stereotype) {
            bj["stereotype"] = *b.stereotype;
        }
        blocks.push_back(std::move(bj));
    }
    j["blocks"] = std::move(blocks);

    nlohmann::json nestings = nlohmann::json::array();
    std::vector<ViewNesting> sorted_nestings = view.nestings;
    std::sort(sorted_nestings.begin(), sorted_nestings.end(),
              [](const ViewNesting& a, const ViewNesting& b) {
                  return std::tie(a.outer, a.inner) < std::tie(b.outer, b.inner);
              });
    for (const ViewNesting& n : sorted_nestings) {
        nlohmann::json nj;
        nj["outer"] = n.outer;
        nj["inner"] = n.inner;
        nestings.push_back(std::move(nj));
    }
    j["nestings"] = std::move(nestings);

    nlohmann::json connectors = nlohmann::json::array();
    std::vector<ViewConnector> sorted_connectors = view.connectors;
    for (ViewConnector& c : sorted_connectors) {
        std::sort(c.signals.begin(), c.signals.end());
    }
    std::sort(sorted_connectors.begin(), sorted_connectors.end(),
              [](const ViewConnector& a, const ViewConnector& b) {
                  return std::tie(a.source, a.target, a.signals) <
                         std::tie(b.source, b.target, b.signals);
              });
    for (const ViewConnector& c : sorted_connectors) {
        nlohmann::json cj;
        cj["source"] = c.source;
        cj["target"] = c.target;
        cj["signals"] = c.signals;
        if (c.stereotype) {
            cj["stereotype"] = *c.stereotype;
        }
        connectors.push_back(std::move(cj));
    }
    j["connectors"] = std::move(connectors);
    return j;
}

nlohmann::json diagnostic_to_json(const Diagnostic& d) {
    nlohmann::json j;
    j["code"] = std::string(code_name(d.code));
    j["severity"] = d.severity == Severity::Error ? "error" : "warning";
    j["file"] = d.span.file;
    j["line"] = d.span.line;
    j["col"] = d.span.col;
    j["message"] = d.message;
    j["related"] = d.related;
    return j;
}

} // namespace

nlohmann::json export_document(const ResolvedNet* net, std::span<const FeatureView> views,
                               std::span<const Diagnostic> diagnostics) {
    nlohmann::json doc;
    doc["schema_version"] = 1;

    nlohmann::json blocks = nlohmann::json::array();
    nlohmann::json signals = nlohmann::json::array();
    nlohmann::json connectors = nlohmann::json::array();
    if (net) {
        std::vector<BlockId> ids;
        for (uint32_t i = 0; i < net->block_count(); ++i) {
            ids.push_back(BlockId{i});
        }
        std::sort(ids.begin(), ids.end(), [&](BlockId a, BlockId b) {
            return net->qualified_path(a) < net->qualified_path(b);
        });
        for (BlockId id : ids) {
            blocks.push_back(block_to_json(*net, id));
        }
        for (const Signal& s : net->signals()) {
            nlohmann::json sj;
            sj["name"] = s.name;
            sj["type"] = s.value_type ? nlohmann::json(*s.value_type) : nlohmann::json(nullptr);
            signals.push_back(std::move(sj));
        }
        std::vector<const Connector*> sorted;
        for (const Connector& c : net->connectors()) {
            sorted.push_back(&c);
        }
        std::sort(sorted.begin(), sorted.end(), [&](const Connector* a, const Connector* b) {
            return net->connector_text(*a) + signal_label(a->signals) <
                   net->connector_text(*b) + signal_label(b->signals);
        });
        for (const Connector* c : sorted) {
            connectors.push_back(connector_to_json(*net, *c));
        }
    }
    doc["blocks"] = std::move(blocks);
    doc["signals"] = std::move(signals);
    doc["connectors"] = std::move(connectors);

    nlohmann::json views_json = nlohmann::json::array();
    std::vector<const FeatureView*> sorted_views;
    for (const FeatureView& v : views) {
        sorted_views.push_back(&v);
    }
    std::sort(sorted_views.begin(), sorted_views.end(),
              [](const FeatureView* a, const FeatureView* b) { return a->name < b->name; });
    for (const FeatureView* v : sorted_views) {
        views_json.push_back(view_to_json(*v));
    }
    doc["views"] = std::move(views_json);

    nlohmann::json diags = nlohmann::json::array();
    std::vector<Diagnostic> sorted_diags(diagnostics.begin(), diagnostics.end());
    sort_diagnostics(sorted_diags);
    for (const Diagnostic& d : sorted_diags) {
        diags.push_back(diagnostic_to_json(d));
    }
    doc["diagnostics"] = std::move(diags);
    return doc;
}

nlohmann::json to_json(const ResolvedNet& net) {
    return export_document(&net, {}, {});
}

nlohmann::json to_json(const FeatureView& view) {
    return export_document(nullptr, {&view, 1}, {});
}

nlohmann::json to_json(std::span<const Diagnostic> diagnostics) {
    return export_document(nullptr, {}, diagnostics);
}

std::string to_json_text(const nlohmann::json& doc) {
    return doc.dump(2) + "\n";
}

} // namespace fnet
