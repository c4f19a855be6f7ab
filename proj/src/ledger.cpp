#include "codedsync/ledger.hpp"

namespace codedsync {

std::uint64_t ceil_log2(std::uint64_t n) {
    if (n <= 1) return 0;
    std::uint64_t bits = 0, v = n - 1;
    while (v > 0) {
        v >>= 1;
        ++bits;
    }
    return bits;
}

std::uint64_t CostLedger::bits_user_to_node(std::size_t s, std::size_t t, std::size_t round) const {
    std::uint64_t sum = 0;
    for (const auto& e : entries_)
        if (e.round == round && e.src == Endpoint::user(s) && e.dst == Endpoint::node(t))
            sum += e.bits;
    return sum;
}

std::uint64_t CostLedger::user_to_node_bits(std::size_t round) const {
    std::uint64_t sum = 0;
    for (const auto& e : entries_)
        if (e.round == round && e.src.role == Endpoint::Role::User &&
            e.dst.role == Endpoint::Role::Node)
            sum += e.bits;
    return sum;
}

std::uint64_t CostLedger::round_bits(std::size_t round) const {
    std::uint64_t sum = 0;
    for (const auto& e : entries_)
        if (e.round == round) sum += e.bits;
    return sum;
}

std::uint64_t CostLedger::round_bits_of_kind(std::size_t round, MsgKind kind) const {
    std::uint64_t sum = 0;
    for (const auto& e : entries_)
        if (e.round == round && e.kind == kind) sum += e.bits;
    return sum;
}

}  // namespace codedsync
