#pragma once

#include <span>
#include <vector>

#include "codedsync/dss.hpp"

namespace codedsync {

/// Checksum pair that pins down a single deletion: the symbol sum over F_q
/// and the weighted ascent indicator sum modulo the block length.
struct VtSyndrome {
    std::uint64_t nu1 = 0;   // sum of symbols in F_q
    std::size_t nu2 = 0;     // sum of i * [x_i <= x_{i+1}] mod l (1-based weights)
    bool operator==(const VtSyndrome&) const = default;
};

VtSyndrome vt_syndrome(const Field& f, std::span<const std::uint64_t> x);

struct VtRecovery {
    std::vector<std::uint64_t> recovered;
    std::size_t pos = 0;       // 0-based insertion index (smallest that works)
    std::uint64_t symbol = 0;
};

/// Recover the original length-l string from a one-shorter copy and the
/// original's syndrome, by exhaustive search over reinsertions. Candidates
/// that agree as strings are merged; distinct surviving strings raise
/// AmbiguousRecovery, no survivor raises NoCandidate.
VtRecovery vt_recover(const Field& f, std::span<const std::uint64_t> shortened,
                      const VtSyndrome& syndrome, std::size_t ell);

/// MDS-coded syndrome checks: each of the n-k parity nodes stores one linear
/// combination per syndrome family, so any k of the n per-node values
/// determine every user's syndrome. Requires l = q so the nu2 arithmetic
/// lives in the same field.
struct SyndromeShares {
    std::vector<std::uint64_t> nu1_shares;  // one per parity node
    std::vector<std::uint64_t> nu2_shares;
};

SyndromeShares encode_syndrome_shares(const CodeSpec& code, std::size_t ell,
                                      const std::vector<VtSyndrome>& syndromes);

/// One per-node value: a user's own syndrome pair for systematic nodes, a
/// coded share for parity nodes.
struct SyndromeValue {
    std::size_t node = 0;
    std::uint64_t nu1 = 0;
    std::uint64_t nu2 = 0;
};

/// Solve for user s's syndrome from any k per-node values.
VtSyndrome recover_own_syndrome(const CodeSpec& code, std::size_t user,
                                const std::vector<SyndromeValue>& values);

/// Protocol helper: given which users are affected, assemble the k values an
/// affected user would fetch (syndromes of unaffected users, then coded
/// shares). Throws TooManyAffected when more than n-k users are affected.
std::vector<SyndromeValue> collect_syndrome_values(const CodeSpec& code,
                                                   const std::vector<bool>& affected,
                                                   const std::vector<VtSyndrome>& syndromes,
                                                   const SyndromeShares& shares);

}  // namespace codedsync
