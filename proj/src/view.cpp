#include "fnet/view.hpp"

#include <algorithm>
#include <tuple>

namespace fnet {

const ViewBlock* FeatureView::find_block(std::string_view name) const {
    for (const ViewBlock& b : blocks) {
        if (b.name == name) {
            return &b;
        }
    }
    return nullptr;
}

namespace {

std::vector<std::string> sorted(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace

bool structurally_equal(const FeatureView& a, const FeatureView& b) {
    if (a.name != b.name) {
        return false;
    }

    auto block_key = [](const ViewBlock& v) {
        return std::tuple(v.name, v.env, v.stereotype.value_or(""));
    };
    auto nest_key = [](const ViewNesting& n) { return std::tuple(n.outer, n.inner); };
    auto conn_key = [](const ViewConnector& c) {
        return std::tuple(c.source, c.target, sorted(c.signals), c.stereotype.value_or(""));
    };

    auto blocks_a = a.blocks, blocks_b = b.blocks;
    auto by_block = [&](const ViewBlock& x, const ViewBlock& y) {
        return block_key(x) < block_key(y);
    };
    std::sort(blocks_a.begin(), blocks_a.end(), by_block);
    std::sort(blocks_b.begin(), blocks_b.end(), by_block);
    if (blocks_a.size() != blocks_b.size() ||
        !std::equal(blocks_a.begin(), blocks_a.end(), blocks_b.begin(),
                    [&](const ViewBlock& x, const ViewBlock& y) {
                        return block_key(x) == block_key(y);
                    })) {
        return false;
    }

    auto nests_a = a.nestings, nests_b = b.nestings;
    auto by_nest = [&](const ViewNesting& x, const ViewNesting& y) {
        return nest_key(x) < nest_key(y);
    };
    std::sort(nests_a.begin(), nests_a.end(), by_nest);
    std::sort(nests_b.begin(), nests_b.end(), by_nest);
    if (nests_a.size() != nests_b.size() ||
        !std::equal(nests_a.begin(), nests_a.end(), nests_b.begin(),
                    [&](const ViewNesting& x, const ViewNesting& y) {
                        return nest_key(x) == nest_key(y);
                    })) {
        return false;
    }

    auto conns_a = a.connectors, conns_b = b.connectors;
    auto by_conn = [&](const ViewConnector& x, const ViewConnector& y) {
        return conn_key(x) < conn_key(y);
    };
    std::sort(conns_a.begin(), conns_a.end(), by_conn);
    std::sort(conns_b.begin(), conns_b.end(), by_conn);
    return conns_a.size() == conns_b.size() &&
           std::equal(conns_a.begin(), conns_a.end(), conns_b.begin(),
                      [&](const ViewConnector& x, const ViewConnector& y) {
                          return conn_key(x) == conn_key(y);
                      });
}

} // namespace fnet
