#pragma once

#include "fnet/diagnostic.hpp"
#include "fnet/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fnet {

// Syntax tree of one .fnet file. No name resolution has happened yet;
// dotted endpoint paths are kept verbatim.
struct DottedRef {
    std::vector<std::string> segments;
    Span span;

    std::string text() const;
};

struct PortDecl {
    std::string name;
    PortDirection direction = PortDirection::In;
    std::optional<std::string> stereotype;
    Span span;
};

struct ConnectDecl {
    DottedRef source;
    DottedRef target;
    std::vector<std::string> signals; // source order; canonicalized on output
    std::optional<std::string> stereotype;
    Span span;
};

struct BlockDecl {
    std::string name;
    std::optional<std::string> type_name;
    std::vector<BlockDecl> blocks;
    std::vector<PortDecl> ports;
    std::vector<ConnectDecl> connects;
    Span span;
};

struct SignalDecl {
    std::string name;
    std::optional<std::string> value_type;
    Span span;
};

struct TypeDecl {
    std::string name;
    std::vector<BlockDecl> blocks;
    std::vector<PortDecl> ports;
    std::vector<ConnectDecl> connects;
    Span span;
};

struct NetFragment {
    std::string file;
    std::vector<SignalDecl> signals;
    std::vector<TypeDecl> types;
    std::vector<BlockDecl> blocks;
    std::vector<ConnectDecl> connects;
};

// Span-insensitive comparisons. Declaration order matters per kind (the
// serializer keeps it); connector signal lists compare as sets.
bool structurally_equal(const NetFragment& a, const NetFragment& b);
bool structurally_equal(const BlockDecl& a, const BlockDecl& b);
bool structurally_equal(const TypeDecl& a, const TypeDecl& b);
bool structurally_equal(const ConnectDecl& a, const ConnectDecl& b);

} // namespace fnet
