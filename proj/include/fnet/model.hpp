#pragma once

#include "fnet/diagnostic.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fnet {

// Dense handle into one ResolvedNet's block table. Ids are only meaningful
// relative to the net that issued them; the net bounds-checks every access.
struct BlockId {
    uint32_t value = UINT32_MAX;

    bool valid() const { return value != UINT32_MAX; }
    auto operator<=>(const BlockId&) const = default;
};

enum class PortDirection { In, Out };

struct Port {
    std::string name;
    PortDirection direction = PortDirection::In;
    std::optional<std::string> stereotype;
    Span origin;
};

struct Signal {
    std::string name;
    std::optional<std::string> value_type; // documentation only
    Span origin;
};

struct Endpoint {
    BlockId block;
    std::optional<std::string> port;

    auto operator<=>(const Endpoint&) const = default;
};

struct Connector {
    Endpoint source;
    Endpoint target;
    std::vector<std::string> signals; // sorted, unique, all declared
    std::optional<std::string> stereotype;
    Span origin;
};

// Where a block came from when type expansion produced it.
struct InstanceOrigin {
    BlockId instance_root; // the typed block this copy belongs to
    std::string type_name;
};

struct Block {
    std::string name;
    std::optional<BlockId> parent;
    std::vector<BlockId> children; // sorted by name in a finalized net
    std::optional<std::string> type_name;
    std::vector<Port> ports;
    Span origin;
    std::optional<InstanceOrigin> instantiated_from;
};

// Connector whose endpoints did not resolve; excluded from the net proper
// and surfaced by lint as N004.
struct DanglingConnector {
    std::string source_text;
    std::string target_text;
    std::string reason;
    Span origin;
};

// Signal name used on a connector but never declared; surfaced as N006.
struct UnknownSignalUse {
    std::string signal;
    std::string connector_text;
    Span origin;
};

// The resolved whole-system architecture: block forest, signal table and
// directed signal-carrying connectors, with a precomputed ancestor index.
// Immutable after NetBuilder::finalize(); safe for concurrent reads.
class ResolvedNet {
public:
    uint32_t block_count() const { return static_cast<uint32_t>(blocks_.size()); }
    const Block& block(BlockId id) const;
    std::span<const BlockId> roots() const { return roots_; }
    const std::vector<Signal>& signals() const { return signals_; }
    const std::vector<Connector>& connectors() const { return connectors_; }
    const std::vector<DanglingConnector>& dangling_connectors() const { return dangling_; }
    const std::vector<UnknownSignalUse>& unknown_signal_uses() const { return unknown_signals_; }

    // Root-to-block name chain joined by '.'; unique per block.
    const std::string& qualified_path(BlockId id) const;

    std::optional<BlockId> find_path(std::string_view dotted) const;
    const Signal* find_signal(std::string_view name) const;
    const Port* find_port(BlockId id, std::string_view port) const;

    // All blocks whose qualified path ends with the given segment chain,
    // sorted by path. Exact full paths are handled by find_path.
    std::vector<BlockId> suffix_matches(std::span<const std::string> segments) const;

    // Proper-ancestor test via the preorder interval index, O(1).
    bool is_ancestor(BlockId a, BlockId b) const;
    bool is_ancestor_or_self(BlockId a, BlockId b) const;

    // Source/target endpoint rendered as "path" or "path:port".
    std::string endpoint_text(const Endpoint& e) const;
    std::string connector_text(const Connector& c) const;

private:
    friend class NetBuilder;

    void check_id(BlockId id) const;
    void finalize_indexes();

    std::vector<Block> blocks_;
    std::vector<BlockId> roots_;
    std::vector<Signal> signals_;
    std::vector<Connector> connectors_;
    std::vector<DanglingConnector> dangling_;
    std::vector<UnknownSignalUse> unknown_signals_;

    std::vector<std::string> paths_;
    std::map<std::string, BlockId, std::less<>> path_index_;
    std::map<std::string, std::vector<BlockId>, std::less<>> name_index_;
    std::vector<uint32_t> preorder_in_;
    std::vector<uint32_t> preorder_out_;
};

// Single-threaded construction facade for ResolvedNet. Callers are expected
// to add children in the order they should be serialized (the resolver adds
// them name-sorted).
class NetBuilder {
public:
    BlockId add_block(std::optional<BlockId> parent, std::string name, Span origin = {},
                      std::optional<std::string> type_name = {},
                      std::optional<InstanceOrigin> instantiated_from = {});
    void add_port(BlockId owner, Port port);
    void set_instantiated_from(BlockId id, InstanceOrigin origin);
    void add_signal(Signal signal);
    void add_connector(Connector connector);
    void add_dangling(DanglingConnector dangling);
    void add_unknown_signal_use(UnknownSignalUse use);

    const Block& block(BlockId id) const;
    uint32_t block_count() const { return static_cast<uint32_t>(net_.blocks_.size()); }

    // Computes paths and the ancestor index; the builder is spent afterwards.
    ResolvedNet finalize();

private:
    ResolvedNet net_;
};

} // namespace fnet
