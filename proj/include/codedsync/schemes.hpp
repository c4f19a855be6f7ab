#pragma once

#include <optional>
#include <vector>

#include "codedsync/intermediary.hpp"
#include "codedsync/ledger.hpp"

namespace codedsync {

enum class EditKind { Deletion, Insertion };

/// A single edit made by one user. `value` is the inserted symbol; deletions
/// read the removed symbol from the block.
struct EditEvent {
    std::size_t user = 0;
    EditKind kind = EditKind::Deletion;
    std::size_t pos = 0;
    std::uint64_t value = 0;
};

/// A deletion whose removed symbol must be known to the protocol. Callers
/// that learned of the edit indirectly recover the value first (see vtsync).
struct Deletion {
    std::size_t pos = 0;
    std::optional<std::uint64_t> value;
};

/// Everything a protocol round mutates: the blocks as the users hold them,
/// the intermediary matrices, the node contents, and the message log.
/// For the permutation scheme blocks stay zero-padded at fixed length and
/// `live_len` tracks the unpadded prefix; elsewhere live_len == block size.
struct SyncState {
    CodeSpec code;
    IntermediaryConfig config;
    std::vector<std::vector<std::uint64_t>> blocks;
    std::vector<std::size_t> live_len;
    StorageTensor tensor;
    CostLedger ledger;
};

/// Encode the blocks and assemble the initial state.
SyncState make_state(CodeSpec code, IntermediaryConfig config,
                     std::vector<std::vector<std::uint64_t>> blocks);

struct TRoundInfo {
    bool any_edits = false;
    std::size_t imin = 0;  // 0-based; meaningful only when any_edits
    std::size_t span_symbols = 0;
};

/// Traditional update: one deletion per user, identity coding. All users send
/// positions to the coordinator, which answers with the deletion span; each
/// user then streams its span symbols to its connected nodes. Storage width
/// shrinks by one.
TRoundInfo scheme_t_round(SyncState& st, const std::vector<std::size_t>& del_pos);

/// Traditional update with an arbitrary number of deletions per block. The
/// nodes refresh the whole suffix starting at the smallest deleted position;
/// blocks are zero-padded up to the new common width l - min_s d_s.
TRoundInfo scheme_t_round_multi(SyncState& st,
                                const std::vector<std::vector<std::size_t>>& del_pos);

/// Permutation-matrix update for semi-static data: a single edit turns into a
/// one-coordinate change at the tracked position j. Costs
/// log l + log q + 1 bits per connected node; storage width never changes.
void scheme_p_apply_edit(SyncState& st, const EditEvent& edit);

/// Vandermonde update for hot data: one known deletion per user. Nodes
/// subtract the encoded deleted rows and drop the last storage column.
void scheme_v_round(SyncState& st, const std::vector<Deletion>& dels);

/// Vandermonde update with d_s deletions for user s; storage shrinks by
/// min_s d_s and each coding matrix becomes right-invertible (l_s - d_s) x l'.
void scheme_v_round_nonuniform(SyncState& st, const std::vector<std::vector<Deletion>>& dels);

/// Cauchy variant: user 0 keeps the identity matrix and sends only its
/// deletion position; storage drops that column everywhere, which every other
/// Cauchy matrix survives. Remaining users proceed as in the Vandermonde
/// round.
void scheme_c_round(SyncState& st, const std::vector<Deletion>& dels);

/// Hybrid split-block update. A deletion in the leading (Vandermonde)
/// segment is handled like scheme V without narrowing storage; a deletion in
/// the trailing segment ships the whole re-aligned tail of `tail_len`
/// symbols.
void scheme_h_apply_edit(SyncState& st, std::size_t user, std::size_t pos, std::size_t tail_len);

/// Post-process deduplication on a Vandermonde configuration: broadcast the
/// pattern, each user reports the leftmost occurrence, and the occurrence is
/// deleted via nested nonuniform rounds. Only positions travel; the values
/// are known from the broadcast.
void dedup_round(SyncState& st, const std::vector<std::uint64_t>& pattern);

/// Split point tuning for the hybrid scheme under a storage budget (bits of
/// overhead allowed per edit).
struct GammaChoice {
    double gamma = 0;           // operating point: min(balance_root, budget_cap)
    double balance_root = 0;    // root of log2(g*l) + log2(q) = (1-g)*l*log2(q)
    double budget_cap = 0;      // 2^budget / l, clamped to 1
    double lambert_form = 0;    // closed-form W(q^(l-1) log2 q) / (l log2 q)
    double worst_case_bits = 0;
    double storage_bits = 0;
};
GammaChoice choose_gamma(std::size_t ell, std::uint64_t q, double budget);

double hybrid_worst_case_bits(std::size_t ell, std::uint64_t q, double gamma);
double hybrid_storage_bits(std::size_t ell, double gamma);

/// All-or-nothing scheme assignment minimizing communication plus
/// theta-weighted storage overhead under single-edit-per-round editing.
struct AggregateAssignment {
    bool use_intermediary = false;  // true: every user runs scheme P/V
    double threshold = 0;           // (l-1) log q / log l
    double p = 0;                   // total edit probability of assigned users
    double cost = 0;
};
AggregateAssignment aggregate_assignment(std::size_t ell, std::uint64_t q, double theta,
                                         const std::vector<double>& probs);
double aggregate_cost(std::size_t ell, std::uint64_t q, double theta, double p);

}  // namespace codedsync
