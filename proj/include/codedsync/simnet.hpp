#pragma once

#include "codedsync/analysis.hpp"
#include "codedsync/rng.hpp"
#include "codedsync/schemes.hpp"

namespace codedsync {

enum class SchemeId { T, P, V, C, H };

const char* scheme_name(SchemeId id);

/// System shape for a simulated network: n storage nodes, k = B users, block
/// length l over F_q. `gamma` sets the hybrid split; schemes V and C also
/// need l <= q and 2l <= q respectively.
struct BuildParams {
    SchemeId scheme = SchemeId::V;
    std::size_t n = 3;
    std::size_t k = 2;
    std::size_t ell = 8;
    std::uint64_t q = 17;
    double gamma = 0.5;
};

struct SystemState {
    BuildParams params;
    SyncState sync;
    std::size_t tail_len = 0;  // hybrid scheme only
    std::size_t rounds_run = 0;
};

/// Build with blocks drawn from the seeded generator.
SystemState build_system(const BuildParams& params, std::uint64_t seed);
/// Build with caller-provided blocks (demos and tests).
SystemState build_system_with_blocks(const BuildParams& params,
                                     std::vector<std::vector<std::uint64_t>> blocks);

/// Sample per-user deletion positions for one round. Positions are 0-based
/// indices into blocks of the given lengths, sorted ascending per user.
std::vector<std::vector<std::size_t>> sample_edit_positions(const analysis::EditModel& model,
                                                            const std::vector<std::size_t>& lengths,
                                                            Rng& rng);

enum class VerifyLevel { None, Light, Full };

struct TrialResult {
    std::uint64_t user_node_bits = 0;
    std::size_t pair_count = 0;     // sum over users of |N(s)|
    std::size_t span_symbols = 0;   // traditional rounds only
    double imin = 0;                // 1-based smallest deleted position; l when none
    std::size_t deletions = 0;
    bool consistent = true;
};

/// Advance the system by one protocol round over the sampled deletions.
TrialResult run_round(SystemState& state, const std::vector<std::vector<std::size_t>>& positions,
                      VerifyLevel verify);

struct Summary {
    std::size_t trials = 0;
    double mean_user_node_bits = 0, stderr_user_node_bits = 0;
    double mean_span_symbols = 0, stderr_span_symbols = 0;
    double mean_span_fraction = 0;
    double mean_imin = 0, stderr_imin = 0;
    std::size_t failures = 0;
    std::uint64_t checksum = 0;  // digest of all per-trial bit counts
};

/// Independent one-round trials on fresh systems; reproducible bit for bit
/// from (seed, trials). Trial i uses the stream derived from (seed, i), so
/// results do not depend on scheduling.
Summary monte_carlo(const BuildParams& params, const analysis::EditModel& model,
                    std::size_t trials, std::uint64_t seed, VerifyLevel verify);

/// Reconstruction/repair cross-check used after each round: every (or at
/// most `cap` sampled) k-subset must reproduce the blocks, and in full mode
/// every node must be repairable.
bool check_consistency(const SystemState& state, std::size_t cap, VerifyLevel level, Rng& rng);

}  // namespace codedsync
