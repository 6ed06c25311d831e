#include "fnet/serialize.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace fnet {

namespace {

std::string indent(int depth) {
    return std::string(static_cast<size_t>(depth) * 2, ' ');
}

std::vector<std::string> canonical_signals(const std::vector<std::string>& signals) {
    std::vector<std::string> out = signals;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void write_signal_list(std::ostringstream& out, const std::vector<std::string>& signals) {
    if (signals.empty()) {
        return;
    }
    out << " : [";
    const std::vector<std::string> sorted = canonical_signals(signals);
    for (size_t i = 0; i < sorted.size(); ++i) {
        out << (i ? ", " : "") << sorted[i];
    }
    out << ']';
}

void write_stereotype(std::ostringstream& out, const std::optional<std::string>& stereotype) {
    if (stereotype) {
        out << " <<" << *stereotype << ">>";
    }
}

void write_port(std::ostringstream& out, const PortDecl& p, int depth) {
    out << indent(depth) << "port " << (p.direction == PortDirection::In ? "in " : "out ")
        << p.name;
    write_stereotype(out, p.stereotype);
    out << '\n';
}

void write_port(std::ostringstream& out, const Port& p, int depth) {
    out << indent(depth) << "port " << (p.direction == PortDirection::In ? "in " : "out ")
        << p.name;
    write_stereotype(out, p.stereotype);
    out << '\n';
}

void write_connect(std::ostringstream& out, const ConnectDecl& c, int depth) {
    out << indent(depth) << "connect " << c.source.text() << " -> " << c.target.text();
    write_signal_list(out, c.signals);
    write_stereotype(out, c.stereotype);
    out << '\n';
}

void write_block(std::ostringstream& out, const BlockDecl& b, int depth) {
    out << indent(depth) << "block " << b.name;
    if (b.type_name) {
        out << " : " << *b.type_name;
    }
    if (b.ports.empty() && b.blocks.empty() && b.connects.empty()) {
        out << '\n';
        return;
    }
    out << " {\n";
    for (const PortDecl& p : b.ports) {
        write_port(out, p, depth + 1);
    }
    for (const BlockDecl& child : b.blocks) {
        write_block(out, child, depth + 1);
    }
    for (const ConnectDecl& c : b.connects) {
        write_connect(out, c, depth + 1);
    }
    out << indent(depth) << "}\n";
}

void write_resolved_block(std::ostringstream& out, const ResolvedNet& net, BlockId id,
                          int depth) {
    const Block& b = net.block(id);
    out << indent(depth) << "block " << b.name;
    if (b.ports.empty() && b.children.empty()) {
        out << '\n';
        return;
    }
    out << " {\n";
    for (const Port& p : b.ports) {
        write_port(out, p, depth + 1);
    }
    for (BlockId child : b.children) {
        write_resolved_block(out, net, child, depth + 1);
    }
    out << indent(depth) << "}\n";
}

std::string view_block_decl(const ViewBlock& b) {
    std::ostringstream out;
    if (b.env) {
        out << "env ";
    }
    out << "block " << b.name;
    write_stereotype(out, b.stereotype);
    return out.str();
}

} // namespace

std::string serialize_net(const NetFragment& fragment) {
    std::ostringstream out;
    for (const SignalDecl& s : fragment.signals) {
        out << "signal " << s.name;
        if (s.value_type) {
            out << " : " << *s.value_type;
        }
        out << '\n';
    }
    for (const TypeDecl& t : fragment.types) {
        out << "type " << t.name << " {\n";
        for (const PortDecl& p : t.ports) {
            write_port(out, p, 1);
        }
        for (const BlockDecl& b : t.blocks) {
            write_block(out, b, 1);
        }
        for (const ConnectDecl& c : t.connects) {
            write_connect(out, c, 1);
        }
        out << "}\n";
    }
    for (const BlockDecl& b : fragment.blocks) {
        write_block(out, b, 0);
    }
    for (const ConnectDecl& c : fragment.connects) {
        write_connect(out, c, 0);
    }
    return out.str();
}

std::string serialize_net(const ResolvedNet& net) {
    std::ostringstream out;
    for (const Signal& s : net.signals()) {
        out << "signal " << s.name;
        if (s.value_type) {
            out << " : " << *s.value_type;
        }
        out << '\n';
    }
    for (BlockId root : net.roots()) {
        write_resolved_block(out, net, root, 0);
    }

    struct Line {
        std::string source, target, rendered;
    };
    std::vector<Line> lines;
    for (const Connector& c : net.connectors()) {
        Line line;
        line.source = net.qualified_path(c.source.block);
        if (c.source.port) {
            line.source += "." + *c.source.port;
        }
        line.target = net.qualified_path(c.target.block);
        if (c.target.port) {
            line.target += "." + *c.target.port;
        }
        std::ostringstream conn;
        conn << "connect " << line.source << " -> " << line.target;
        write_signal_list(conn, c.signals);
        write_stereotype(conn, c.stereotype);
        conn << '\n';
        line.rendered = conn.str();
        lines.push_back(std::move(line));
    }
    std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
        return std::tie(a.source, a.target, a.rendered) < std::tie(b.source, b.target, b.rendered);
    });
    for (const Line& line : lines) {
        out << line.rendered;
    }
    return out.str();
}

std::string serialize_view(const FeatureView& view) {
    std::ostringstream out;
    out << "view " << view.name << " {\n";

    std::set<std::string> inners;
    std::set<std::string> outers;
    for (const ViewNesting& n : view.nestings) {
        inners.insert(n.inner);
        outers.insert(n.outer);
    }

    // A block is declared by its contains group when it is someone's inner;
    // a plain outer needs no standalone line either, its group implies it.
    for (const ViewBlock& b : view.blocks) {
        if (inners.count(b.name)) {
            continue;
        }
        if (outers.count(b.name) && !b.env && !b.stereotype) {
            continue;
        }
        out << indent(1) << view_block_decl(b) << '\n';
    }

    std::vector<std::string> group_order;
    for (const ViewNesting& n : view.nestings) {
        if (std::find(group_order.begin(), group_order.end(), n.outer) == group_order.end()) {
            group_order.push_back(n.outer);
        }
    }
    for (const std::string& outer : group_order) {
        out << indent(1) << "contains " << outer << " {\n";
        for (const ViewNesting& n : view.nestings) {
            if (n.outer != outer) {
                continue;
            }
            const ViewBlock* inner = view.find_block(n.inner);
            if (inner) {
                out << indent(2) << view_block_decl(*inner) << '\n';
            }
        }
        out << indent(1) << "}\n";
    }

    for (const ViewConnector& c : view.connectors) {
        out << indent(1) << "connect " << c.source << " -> " << c.target;
        write_signal_list(out, c.signals);
        write_stereotype(out, c.stereotype);
        out << '\n';
    }
    out << "}\n";
    return out.str();
}

} // namespace fnet
