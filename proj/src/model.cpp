#include "fnet/model.hpp"

#include <algorithm>
#include <sstream>

namespace fnet {

void ResolvedNet::check_id(BlockId id) const {
    if (!id.valid() || id.value >= blocks_.size()) {
        throw internal_error("block id " + std::to_string(id.value) +
                             " is not valid for this net");
    }
}

const Block& ResolvedNet::block(BlockId id) const {
    check_id(id);
    return blocks_[id.value];
}

const std::string& ResolvedNet::qualified_path(BlockId id) const {
    check_id(id);
    return paths_[id.value];
}

std::optional<BlockId> ResolvedNet::find_path(std::string_view dotted) const {
    auto it = path_index_.find(dotted);
    if (it == path_index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

const Signal* ResolvedNet::find_signal(std::string_view name) const {
    for (const Signal& s : signals_) {
        if (s.name == name) {
            return &s;
        }
    }
    return nullptr;
}

const Port* ResolvedNet::find_port(BlockId id, std::string_view port) const {
    for (const Port& p : block(id).ports) {
        if (p.name == port) {
            return &p;
        }
    }
    return nullptr;
}

std::vector<BlockId> ResolvedNet::suffix_matches(std::span<const std::string> segments) const {
    std::vector<BlockId> matches;
    if (segments.empty()) {
        return matches;
    }
    auto it = name_index_.find(segments.back());
    if (it == name_index_.end()) {
        return matches;
    }
    for (BlockId candidate : it->second) {
        BlockId walk = candidate;
        bool match = true;
        for (size_t i = segments.size(); i-- > 1;) {
            const std::optional<BlockId> parent = blocks_[walk.value].parent;
            if (!parent || blocks_[parent->value].name != segments[i - 1]) {
                match = false;
                break;
            }
            walk = *parent;
        }
        if (match) {
            matches.push_back(candidate);
        }
    }
    std::sort(matches.begin(), matches.end(), [&](BlockId a, BlockId b) {
        return paths_[a.value] < paths_[b.value];
    });
    return matches;
}

bool ResolvedNet::is_ancestor(BlockId a, BlockId b) const {
    check_id(a);
    check_id(b);
    return preorder_in_[a.value] < preorder_in_[b.value] &&
           preorder_out_[b.value] <= preorder_out_[a.value];
}

bool ResolvedNet::is_ancestor_or_self(BlockId a, BlockId b) const {
    return a == b || is_ancestor(a, b);
}

std::string ResolvedNet::endpoint_text(const Endpoint& e) const {
    std::string text = qualified_path(e.block);
    if (e.port) {
        text += ':';
        text += *e.port;
    }
    return text;
}

std::string ResolvedNet::connector_text(const Connector& c) const {
    return endpoint_text(c.source) + " -> " + endpoint_text(c.target);
}

void ResolvedNet::finalize_indexes() {
    const uint32_t n = static_cast<uint32_t>(blocks_.size());
    paths_.assign(n, {});
    preorder_in_.assign(n, 0);
    preorder_out_.assign(n, 0);

    uint32_t clock = 0;
    // Iterative preorder numbering; intervals [in, out] answer containment.
    std::vector<std::pair<BlockId, bool>> stack;
    for (size_t r = roots_.size(); r-- > 0;) {
        stack.emplace_back(roots_[r], false);
    }
    while (!stack.empty()) {
        auto [id, exit] = stack.back();
        stack.pop_back();
        Block& b = blocks_[id.value];
        if (exit) {
            preorder_out_[id.value] = clock;
            continue;
        }
        preorder_in_[id.value] = ++clock;
        preorder_out_[id.value] = clock; // provisional, fixed by the exit marker
        paths_[id.value] = b.parent ? paths_[b.parent->value] + "." + b.name : b.name;
        stack.emplace_back(id, true);
        for (size_t i = b.children.size(); i-- > 0;) {
            stack.emplace_back(b.children[i], false);
        }
    }

    path_index_.clear();
    name_index_.clear();
    for (uint32_t i = 0; i < n; ++i) {
        path_index_.emplace(paths_[i], BlockId{i});
        name_index_[blocks_[i].name].push_back(BlockId{i});
    }
}

BlockId NetBuilder::add_block(std::optional<BlockId> parent, std::string name, Span origin,
                              std::optional<std::string> type_name,
                              std::optional<InstanceOrigin> instantiated_from) {
    const BlockId id{static_cast<uint32_t>(net_.blocks_.size())};
    Block b;
    b.name = std::move(name);
    b.parent = parent;
    b.type_name = std::move(type_name);
    b.origin = std::move(origin);
    b.instantiated_from = std::move(instantiated_from);
    net_.blocks_.push_back(std::move(b));
    if (parent) {
        if (!parent->valid() || parent->value >= net_.blocks_.size()) {
            throw internal_error("parent id is not valid for this builder");
        }
        net_.blocks_[parent->value].children.push_back(id);
    } else {
        net_.roots_.push_back(id);
    }
    return id;
}

void NetBuilder::add_port(BlockId owner, Port port) {
    if (!owner.valid() || owner.value >= net_.blocks_.size()) {
        throw internal_error("port owner id is not valid for this builder");
    }
    net_.blocks_[owner.value].ports.push_back(std::move(port));
}

void NetBuilder::set_instantiated_from(BlockId id, InstanceOrigin origin) {
    if (!id.valid() || id.value >= net_.blocks_.size()) {
        throw internal_error("block id is not valid for this builder");
    }
    net_.blocks_[id.value].instantiated_from = std::move(origin);
}

void NetBuilder::add_signal(Signal signal) {
    net_.signals_.push_back(std::move(signal));
}

void NetBuilder::add_connector(Connector connector) {
    net_.connectors_.push_back(std::move(connector));
}

void NetBuilder::add_dangling(DanglingConnector dangling) {
    net_.dangling_.push_back(std::move(dangling));
}

void NetBuilder::add_unknown_signal_use(UnknownSignalUse use) {
    net_.unknown_signals_.push_back(std::move(use));
}

const Block& NetBuilder::block(BlockId id) const {
    if (!id.valid() || id.value >= net_.blocks_.size()) {
        throw internal_error("block id is not valid for this builder");
    }
    return net_.blocks_[id.value];
}

ResolvedNet NetBuilder::finalize() {
    std::sort(net_.signals_.begin(), net_.signals_.end(),
              [](const Signal& a, const Signal& b) { return a.name < b.name; });
    net_.finalize_indexes();
    return std::move(net_);
}

} // namespace fnet
