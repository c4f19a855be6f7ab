#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "codedsync/errors.hpp"

namespace codedsync::analysis {

/// Edit models for average-case cost analysis. All formulas here use
/// real-valued base-2 logarithms; ledger bit counts use integer ceilings.
enum class EditModelKind {
    UniformDeletions,         // one deletion per block, uniform position
    CombinatorialDeletions,   // exactly D deletions over all B*l coordinates
    ProbabilisticDeletions,   // i.i.d. Bernoulli(p) deletion per coordinate
};

struct EditModel {
    EditModelKind kind = EditModelKind::UniformDeletions;
    std::size_t ell = 0;
    std::size_t users = 0;         // B
    std::size_t total_deletions = 0;  // D, combinatorial model
    double per_symbol_prob = 0;       // p, probabilistic model

    static EditModel uniform(std::size_t ell, std::size_t users);
    static EditModel combinatorial(std::size_t ell, std::size_t users, std::size_t total);
    static EditModel probabilistic(std::size_t ell, std::size_t users, double p);
};

/// Exact binomial coefficient for small arguments, log-gamma beyond.
double binom(std::uint64_t n, std::uint64_t k);
double log2_binom(std::uint64_t n, std::uint64_t k);

/// E[min deletion position] (1-based), exact finite sums per model. Rounds
/// with no deletion count as l.
double expected_imin(const EditModel& m);

/// E[max deletion position] under the uniform model, by the reflection
/// identity E[imax] = l + 1 - E[imin].
double expected_imax_uniform(const EditModel& m);

/// Exact expected size of the refresh span of the traditional scheme:
/// E[imax - imin] for the uniform model, l - E[imin] otherwise.
double expected_span(const EditModel& m);

/// Span fraction eta = E[span] / l.
double eta(const EditModel& m);

struct EtaLimit {
    double value = 0;
    bool lower_bound = false;  // true when the limit is only a bound
};
/// Large-l limit of eta: exact (B-1)/(B+1) for constant-B uniform deletions,
/// and the bounds D/(D+1), 1 - e^{-Bp} for the other models.
EtaLimit eta_limit(const EditModel& m);
/// Limit bound 1 - 2e^{-c} for the uniform model when B(l)/l -> c.
EtaLimit eta_limit_ud_scaling(double c);

struct CostEstimate {
    double bits = 0;
    double position_bits = 0;
    double value_bits = 0;
    double span_bits = 0;
};

/// Expected per-user-per-node cost of the traditional scheme: E[span] log2 q.
CostEstimate expected_cost_T(const EditModel& m, std::uint64_t q);

/// Expected per-user-per-node cost of the permutation/Vandermonde schemes:
/// E[#edits] * (log2 l + log2 q).
CostEstimate expected_cost_PV(const EditModel& m, std::uint64_t q);

/// Levenshtein-style lower bound on the bits needed to describe d edits:
/// log2 C(l-d, d), or log2((q-1)^d C(l+d, d)) when insertions are allowed.
double lev_lower_bound(std::size_t ell, std::size_t d, std::uint64_t q, bool with_insertions);

/// Exact count of distinct strings reachable from x by at most d deletions
/// (including x itself). Desk-scale oracle for the bound above.
std::size_t edit_ball_size(std::span<const std::uint64_t> x, std::size_t d);

/// s(l,d): expected bits saved per position by encoding positions relative to
/// the largest edited index, given d uniform deletions in one block.
double reduced_range_savings(std::size_t ell, std::size_t d);

/// E[ceil(log2 imax)] given d edits = ceil(log2 l) - s(l,d).
double expected_log_imax(std::size_t ell, std::size_t d);

/// Expected reduced-range position cost per user under the combinatorial
/// model (d drawn from the uniform-composition prior over D total edits).
double expected_cost_reduced_range_cnd(std::size_t ell, std::size_t users, std::size_t total);

/// Expected reduced-range position cost per user under the probabilistic
/// model (d ~ Binomial(l, p)).
double expected_cost_reduced_range_pnd(std::size_t ell, double p);

/// Complete homogeneous symmetric polynomial h_k of the given weights.
double homogeneous_h(std::size_t k, std::span<const double> weights);

/// Principal-branch Lambert W on x >= 0, Newton iteration from log(1+x).
double lambert_w(double x);
/// W(e^y); usable when e^y would overflow.
double lambert_w_exp(double y);

}  // namespace codedsync::analysis
