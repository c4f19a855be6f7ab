#pragma once

#include <cstdint>
#include <vector>

namespace codedsync {

/// Bits needed to address n distinct values: ceil(log2 n), with 1 value -> 0.
std::uint64_t ceil_log2(std::uint64_t n);

enum class MsgKind { Position, Value, TypeBit, SymbolSpan, SyndromeShare };

struct Endpoint {
    enum class Role { User, Node, Coordinator };
    Role role = Role::Coordinator;
    std::size_t index = 0;

    static Endpoint user(std::size_t s) { return {Role::User, s}; }
    static Endpoint node(std::size_t t) { return {Role::Node, t}; }
    static Endpoint coordinator() { return {Role::Coordinator, 0}; }
    bool operator==(const Endpoint&) const = default;
};

/// One logged transmission. `payload_symbols` counts positions, values or
/// span symbols as appropriate; `bits` is the exact cost with ceiling
/// bit-widths.
struct SyncMessage {
    Endpoint src, dst;
    MsgKind kind = MsgKind::Value;
    std::size_t payload_symbols = 0;
    std::uint64_t bits = 0;
    std::size_t round = 0;
};

/// Append-only message log, one round counter per protocol round.
class CostLedger {
public:
    std::size_t round() const { return round_; }
    void advance_round() { ++round_; }

    void add(Endpoint src, Endpoint dst, MsgKind kind, std::size_t payload, std::uint64_t bits) {
        entries_.push_back({src, dst, kind, payload, bits, round_});
    }

    const std::vector<SyncMessage>& entries() const { return entries_; }

    /// Total bits sent from user s to storage node t during `round`.
    std::uint64_t bits_user_to_node(std::size_t s, std::size_t t, std::size_t round) const;
    /// Total bits over all user-to-node messages of `round`.
    std::uint64_t user_to_node_bits(std::size_t round) const;
    /// Total bits of `round`, all endpoints.
    std::uint64_t round_bits(std::size_t round) const;
    /// Bits of `round` restricted to one message kind.
    std::uint64_t round_bits_of_kind(std::size_t round, MsgKind kind) const;

private:
    std::vector<SyncMessage> entries_;
    std::size_t round_ = 0;
};

}  // namespace codedsync
