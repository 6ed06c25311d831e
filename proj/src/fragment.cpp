#include "fnet/fragment.hpp"

#include <algorithm>

namespace fnet {

std::string DottedRef::text() const {
    std::string out;
    for (size_t i = 0; i < segments.size(); ++i) {
        if (i) {
            out += '.';
        }
        out += segments[i];
    }
    return out;
}

namespace {

std::vector<std::string> sorted(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

bool equal(const PortDecl& a, const PortDecl& b) {
    return a.name == b.name && a.direction == b.direction && a.stereotype == b.stereotype;
}

template <typename T, typename Eq>
bool all_equal(const std::vector<T>& a, const std::vector<T>& b, Eq eq) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), eq);
}

} // namespace

bool structurally_equal(const ConnectDecl& a, const ConnectDecl& b) {
    return a.source.segments == b.source.segments && a.target.segments == b.target.segments &&
           sorted(a.signals) == sorted(b.signals) && a.stereotype == b.stereotype;
}

bool structurally_equal(const BlockDecl& a, const BlockDecl& b) {
    return a.name == b.name && a.type_name == b.type_name &&
           all_equal(a.ports, b.ports, [](const PortDecl& x, const PortDecl& y) {
               return equal(x, y);
           }) &&
           all_equal(a.blocks, b.blocks, [](const BlockDecl& x, const BlockDecl& y) {
               return structurally_equal(x, y);
           }) &&
           all_equal(a.connects, b.connects, [](const ConnectDecl& x, const ConnectDecl& y) {
               return structurally_equal(x, y);
           });
}

bool structurally_equal(const TypeDecl& a, const TypeDecl& b) {
    return a.name == b.name &&
           all_equal(a.ports, b.ports, [](const PortDecl& x, const PortDecl& y) {
               return equal(x, y);
           }) &&
           all_equal(a.blocks, b.blocks, [](const BlockDecl& x, const BlockDecl& y) {
               return structurally_equal(x, y);
           }) &&
           all_equal(a.connects, b.connects, [](const ConnectDecl& x, const ConnectDecl& y) {
               return structurally_equal(x, y);
           });
}

bool structurally_equal(const NetFragment& a, const NetFragment& b) {
    return all_equal(a.signals, b.signals, [](const SignalDecl& x, const SignalDecl& y) {
               return x.name == y.name && x.value_type == y.value_type;
           }) &&
           all_equal(a.types, b.types, [](const TypeDecl& x, const TypeDecl& y) {
               return structurally_equal(x, y);
           }) &&
           all_equal(a.blocks, b.blocks, [](const BlockDecl& x, const BlockDecl& y) {
               return structurally_equal(x, y);
           }) &&
           all_equal(a.connects, b.connects, [](const ConnectDecl& x, const ConnectDecl& y) {
               return structurally_equal(x, y);
           });
}

} // namespace fnet
