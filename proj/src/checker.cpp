#include "fnet/checker.hpp"

#include "fnet/resolver.hpp"

#include <algorithm>

namespace fnet {

std::optional<BlockId> ViewBinding::lookup(std::string_view view_block) const {
    auto it = bound.find(view_block);
    if (it == bound.end()) {
        return std::nullopt;
    }
    return it->second;
}

namespace {

bool same_place(const Span& a, const Span& b) {
    return a.file == b.file && a.line == b.line && a.col == b.col;
}

// Exempt from CC3: links into the environment and links modeling physical
// (non-signal) communication like <<hydraulic>>.
bool cc3_exempt(const FeatureView& view, const ViewConnector& c) {
    if (c.stereotype) {
        return true;
    }
    const ViewBlock* src = view.find_block(c.source);
    const ViewBlock* dst = view.find_block(c.target);
    return (src && src->env) || (dst && dst->env);
}

} // namespace

std::vector<Diagnostic> lint_net(const ResolvedNet& net) {
    std::vector<Diagnostic> out;

    for (const DanglingConnector& d : net.dangling_connectors()) {
        out.push_back(make_diagnostic(DiagCode::N004, d.origin,
                                      d.reason + " (connector '" + d.source_text + " -> " +
                                          d.target_text + "')"));
    }
    for (const UnknownSignalUse& u : net.unknown_signal_uses()) {
        out.push_back(make_diagnostic(DiagCode::N006, u.origin,
                                      "connector '" + u.connector_text +
                                          "' references unknown signal '" + u.signal + "'"));
    }

    for (const Connector& c : net.connectors()) {
        if (c.signals.empty()) {
            // Connectors stripped by N006 already got their finding.
            bool stripped = false;
            for (const UnknownSignalUse& u : net.unknown_signal_uses()) {
                if (same_place(u.origin, c.origin)) {
                    stripped = true;
                    break;
                }
            }
            if (!stripped && !c.stereotype) {
                out.push_back(make_diagnostic(DiagCode::W001, c.origin,
                                              "connector '" + net.connector_text(c) +
                                                  "' carries no signals"));
            }
        }
        // Port direction is judged against the block boundary: an in port
        // accepts from outside and forwards inward (delegation), an out
        // port collects from inside and emits outward.
        if (c.source.port) {
            const Port* p = net.find_port(c.source.block, *c.source.port);
            const bool inward = net.is_ancestor_or_self(c.source.block, c.target.block);
            if (p && ((p->direction == PortDirection::In && !inward) ||
                      (p->direction == PortDirection::Out && inward))) {
                const char* kind = p->direction == PortDirection::In ? "input" : "output";
                out.push_back(make_diagnostic(
                    DiagCode::W002, c.origin,
                    "connector leaves " + std::string(kind) + " port '" + *c.source.port +
                        "' of block '" + net.qualified_path(c.source.block) +
                        "' in the wrong direction"));
            }
        }
        if (c.target.port) {
            const Port* p = net.find_port(c.target.block, *c.target.port);
            const bool from_inside = net.is_ancestor_or_self(c.target.block, c.source.block);
            if (p && ((p->direction == PortDirection::Out && !from_inside) ||
                      (p->direction == PortDirection::In && from_inside))) {
                const char* kind = p->direction == PortDirection::In ? "input" : "output";
                out.push_back(make_diagnostic(
                    DiagCode::W002, c.origin,
                    "connector enters " + std::string(kind) + " port '" + *c.target.port +
                        "' of block '" + net.qualified_path(c.target.block) +
                        "' in the wrong direction"));
            }
        }
    }

    // W003: maximal subtrees no connector touches, reported at their root.
    // A block counts as connected when an endpoint lies in its subtree or
    // among its ancestors.
    const uint32_t n = net.block_count();
    std::vector<bool> endpoint(n, false);
    for (const Connector& c : net.connectors()) {
        endpoint[c.source.block.value] = true;
        endpoint[c.target.block.value] = true;
    }
    std::vector<bool> subtree(endpoint);
    std::vector<bool> above(n, false);
    std::vector<std::pair<BlockId, bool>> stack;
    for (BlockId root : net.roots()) {
        stack.emplace_back(root, false);
    }
    while (!stack.empty()) {
        auto [id, exit] = stack.back();
        stack.pop_back();
        const Block& b = net.block(id);
        if (exit) {
            if (subtree[id.value] && b.parent) {
                subtree[b.parent->value] = true;
            }
            continue;
        }
        above[id.value] = endpoint[id.value] || (b.parent && above[b.parent->value]);
        stack.emplace_back(id, true);
        for (BlockId child : b.children) {
            stack.emplace_back(child, false);
        }
    }
    std::vector<bool> connected(n, false);
    for (uint32_t i = 0; i < n; ++i) {
        connected[i] = subtree[i] || above[i];
    }
    for (uint32_t i = 0; i < n; ++i) {
        if (connected[i]) {
            continue;
        }
        const Block& b = net.block(BlockId{i});
        if (b.parent && !connected[b.parent->value]) {
            continue; // parent already reported
        }
        out.push_back(make_diagnostic(DiagCode::W003, b.origin,
                                      "block '" + net.qualified_path(BlockId{i}) +
                                          "' exchanges no signals (isolated subtree)"));
    }

    sort_diagnostics(out);
    dedupe_diagnostics(out);
    return out;
}

Cc1Result check_cc1(const ResolvedNet& net, const FeatureView& view) {
    Cc1Result result;
    result.binding.matched.resize(view.connectors.size());
    for (const ViewBlock& b : view.blocks) {
        if (b.env) {
            continue; // environment elements have no architecture counterpart
        }
        RefResolution r = resolve_ref(net, b.name, b.origin);
        if (r.id) {
            result.binding.bound.emplace(b.name, *r.id);
        } else if (r.diagnostic) {
            Diagnostic d = std::move(*r.diagnostic);
            if (d.code == DiagCode::V001) {
                d.message = "view block '" + b.name + "' is not part of the logical architecture";
            } else {
                d.message = "view block " + d.message;
            }
            result.diagnostics.push_back(std::move(d));
        }
    }
    sort_diagnostics(result.diagnostics);
    return result;
}

std::vector<Diagnostic> check_cc2(const ResolvedNet& net, const FeatureView& view,
                                  const ViewBinding& binding) {
    std::vector<Diagnostic> out;
    for (const ViewNesting& n : view.nestings) {
        const std::optional<BlockId> outer = binding.lookup(n.outer);
        const std::optional<BlockId> inner = binding.lookup(n.inner);
        if (!outer || !inner) {
            continue; // env or unresolved endpoints are exempt
        }
        if (!net.is_ancestor(*outer, *inner)) {
            const std::string outer_path = net.qualified_path(*outer);
            const std::string inner_path = net.qualified_path(*inner);
            out.push_back(make_diagnostic(
                DiagCode::V003, n.origin,
                "view shows '" + n.inner + "' inside '" + n.outer + "', but '" + outer_path +
                    "' is not an ancestor of '" + inner_path + "' in the architecture",
                {outer_path, inner_path}));
        }
    }
    sort_diagnostics(out);
    return out;
}

std::vector<uint32_t> match_connectors(const ResolvedNet& net, BlockId src, BlockId dst) {
    std::vector<uint32_t> matches;
    const auto& connectors = net.connectors();
    for (uint32_t i = 0; i < connectors.size(); ++i) {
        const Connector& c = connectors[i];
        if (net.is_ancestor_or_self(src, c.source.block) &&
            net.is_ancestor_or_self(dst, c.target.block)) {
            matches.push_back(i);
        }
    }
    return matches;
}

std::vector<Diagnostic> check_cc3(const ResolvedNet& net, const FeatureView& view,
                                  ViewBinding& binding, const CheckOptions& options) {
    std::vector<Diagnostic> out;
    binding.matched.assign(view.connectors.size(), {});

    for (size_t i = 0; i < view.connectors.size(); ++i) {
        const ViewConnector& vc = view.connectors[i];
        if (cc3_exempt(view, vc)) {
            continue;
        }
        const std::optional<BlockId> src = binding.lookup(vc.source);
        const std::optional<BlockId> dst = binding.lookup(vc.target);
        if (!src || !dst) {
            continue; // CC1 already reported unresolved blocks
        }
        std::vector<uint32_t> matches = match_connectors(net, *src, *dst);
        binding.matched[i] = matches;

        const std::string link = vc.source + " -> " + vc.target;

        if (!vc.signals.empty()) {
            std::vector<std::string> signals = vc.signals;
            std::sort(signals.begin(), signals.end());
            signals.erase(std::unique(signals.begin(), signals.end()), signals.end());
            if (options.cc3_single_connector) {
                // Strict mode: one architecture connector must carry the
                // whole set.
                bool satisfied = false;
                for (uint32_t m : matches) {
                    const Connector& c = net.connectors()[m];
                    if (std::includes(c.signals.begin(), c.signals.end(), signals.begin(),
                                      signals.end())) {
                        satisfied = true;
                        break;
                    }
                }
                if (!satisfied) {
                    std::string all;
                    for (const std::string& s : signals) {
                        all += all.empty() ? s : ", " + s;
                    }
                    out.push_back(make_diagnostic(
                        DiagCode::V005, vc.origin,
                        "no single architecture connector matching '" + link +
                            "' carries all of [" + all + "]"));
                }
            } else {
                for (const std::string& s : signals) {
                    bool carried = false;
                    for (uint32_t m : matches) {
                        const Connector& c = net.connectors()[m];
                        if (std::binary_search(c.signals.begin(), c.signals.end(), s)) {
                            carried = true;
                            break;
                        }
                    }
                    if (!carried) {
                        out.push_back(make_diagnostic(
                            DiagCode::V005, vc.origin,
                            "signal '" + s + "' on view link '" + link +
                                "' is not stated by any matching architecture connector"));
                    }
                }
            }
        } else {
            if (matches.empty()) {
                out.push_back(make_diagnostic(
                    DiagCode::V004, vc.origin,
                    "communication '" + link + "' is not present in the architecture"));
            } else {
                bool any_signal = false;
                for (uint32_t m : matches) {
                    if (!net.connectors()[m].signals.empty()) {
                        any_signal = true;
                        break;
                    }
                }
                if (!any_signal) {
                    out.push_back(make_diagnostic(
                        DiagCode::V006, vc.origin,
                        "architecture connectors matching '" + link +
                            "' carry no signals (at least one signal must be present)"));
                }
            }
        }
    }
    sort_diagnostics(out);
    return out;
}

std::vector<Diagnostic> check_view(const ResolvedNet& net, const FeatureView& view,
                                   const CheckOptions& options) {
    Cc1Result cc1 = check_cc1(net, view);
    std::vector<Diagnostic> out = std::move(cc1.diagnostics);

    std::vector<Diagnostic> cc2 = check_cc2(net, view, cc1.binding);
    out.insert(out.end(), cc2.begin(), cc2.end());

    std::vector<Diagnostic> cc3 = check_cc3(net, view, cc1.binding, options);
    out.insert(out.end(), cc3.begin(), cc3.end());

    sort_diagnostics(out);
    dedupe_diagnostics(out);
    return out;
}

} // namespace fnet
