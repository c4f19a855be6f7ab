#include "codedsync/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "codedsync/ledger.hpp"

namespace codedsync::analysis {

namespace {
std::uint64_t clog2(std::uint64_t n) { return codedsync::ceil_log2(n); }
}  // namespace

EditModel EditModel::uniform(std::size_t ell, std::size_t users) {
    return {EditModelKind::UniformDeletions, ell, users, 0, 0.0};
}

EditModel EditModel::combinatorial(std::size_t ell, std::size_t users, std::size_t total) {
    if (total > ell * users) throw TooLarge("more deletions than coordinates");
    return {EditModelKind::CombinatorialDeletions, ell, users, total, 0.0};
}

EditModel EditModel::probabilistic(std::size_t ell, std::size_t users, double p) {
    if (p < 0.0 || p > 1.0) throw TooLarge("probability out of range");
    return {EditModelKind::ProbabilisticDeletions, ell, users, 0, p};
}

double binom(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0.0;
    if (k == 0 || k == n) return 1.0;
    if (n <= 64) {
        // Exact in extended precision for all n <= 64.
        long double r = 1.0L;
        std::uint64_t kk = std::min(k, n - k);
        for (std::uint64_t i = 1; i <= kk; ++i) r = r * (n - kk + i) / i;
        return static_cast<double>(r);
    }
    return std::exp(std::lgamma(static_cast<double>(n) + 1.0) -
                    std::lgamma(static_cast<double>(k) + 1.0) -
                    std::lgamma(static_cast<double>(n - k) + 1.0));
}

double log2_binom(std::uint64_t n, std::uint64_t k) {
    if (k > n) return -std::numeric_limits<double>::infinity();
    if (k == 0 || k == n) return 0.0;
    double ln = std::lgamma(static_cast<double>(n) + 1.0) -
                std::lgamma(static_cast<double>(k) + 1.0) -
                std::lgamma(static_cast<double>(n - k) + 1.0);
    return ln / std::log(2.0);
}

double expected_imin(const EditModel& m) {
    double l = static_cast<double>(m.ell);
    double sum = 0.0;
    switch (m.kind) {
        case EditModelKind::UniformDeletions:
            for (std::size_t i = 1; i <= m.ell; ++i)
                sum += std::pow((l - i + 1.0) / l, static_cast<double>(m.users));
            return sum;
        case EditModelKind::CombinatorialDeletions: {
            double denom = log2_binom(m.users * m.ell, m.total_deletions);
            for (std::size_t i = 1; i <= m.ell; ++i) {
                double num = log2_binom(m.users * (m.ell - i + 1), m.total_deletions);
                if (std::isinf(num)) continue;
                sum += std::exp2(num - denom);
            }
            return sum;
        }
        case EditModelKind::ProbabilisticDeletions: {
            double base = std::pow(1.0 - m.per_symbol_prob, static_cast<double>(m.users));
            double term = 1.0;
            for (std::size_t i = 1; i <= m.ell; ++i) {
                sum += term;
                term *= base;
            }
            return sum;
        }
    }
    return sum;
}

double expected_imax_uniform(const EditModel& m) {
    return static_cast<double>(m.ell) + 1.0 - expected_imin(m);
}

double expected_span(const EditModel& m) {
    double l = static_cast<double>(m.ell);
    if (m.kind == EditModelKind::UniformDeletions)
        return expected_imax_uniform(m) - expected_imin(m);
    return l - expected_imin(m);
}

double eta(const EditModel& m) { return expected_span(m) / static_cast<double>(m.ell); }

EtaLimit eta_limit(const EditModel& m) {
    switch (m.kind) {
        case EditModelKind::UniformDeletions: {
            double b = static_cast<double>(m.users);
            return {(b - 1.0) / (b + 1.0), false};
        }
        case EditModelKind::CombinatorialDeletions: {
            double d = static_cast<double>(m.total_deletions);
            return {d / (d + 1.0), true};
        }
        case EditModelKind::ProbabilisticDeletions: {
            double c = static_cast<double>(m.users) * m.per_symbol_prob;
            return {1.0 - std::exp(-c), true};
        }
    }
    return {0.0, true};
}

EtaLimit eta_limit_ud_scaling(double c) { return {1.0 - 2.0 * std::exp(-c), true}; }

CostEstimate expected_cost_T(const EditModel& m, std::uint64_t q) {
    CostEstimate out;
    out.span_bits = expected_span(m) * std::log2(static_cast<double>(q));
    out.bits = out.span_bits;
    return out;
}

CostEstimate expected_cost_PV(const EditModel& m, std::uint64_t q) {
    double edits = 1.0;
    switch (m.kind) {
        case EditModelKind::UniformDeletions:
            edits = 1.0;
            break;
        case EditModelKind::CombinatorialDeletions:
            edits = static_cast<double>(m.total_deletions) / static_cast<double>(m.users);
            break;
        case EditModelKind::ProbabilisticDeletions:
            edits = m.per_symbol_prob * static_cast<double>(m.ell);
            break;
    }
    CostEstimate out;
    out.position_bits = edits * std::log2(static_cast<double>(m.ell));
    out.value_bits = edits * std::log2(static_cast<double>(q));
    out.bits = out.position_bits + out.value_bits;
    return out;
}

double lev_lower_bound(std::size_t ell, std::size_t d, std::uint64_t q, bool with_insertions) {
    if (d > ell) throw TooLarge("more edits than symbols");
    if (d == 0) return 0.0;
    if (with_insertions)
        return static_cast<double>(d) * std::log2(static_cast<double>(q - 1)) +
               log2_binom(ell + d, d);
    return log2_binom(ell - d, d);
}

std::size_t edit_ball_size(std::span<const std::uint64_t> x, std::size_t d) {
    if (x.size() > 24 || d > 4) throw TooLarge("edit ball enumeration is desk-scale only");
    std::set<std::vector<std::uint64_t>> ball;
    std::vector<std::vector<std::uint64_t>> frontier;
    frontier.emplace_back(x.begin(), x.end());
    ball.insert(frontier.front());
    for (std::size_t depth = 0; depth < d; ++depth) {
        std::vector<std::vector<std::uint64_t>> next;
        for (const auto& s : frontier) {
            for (std::size_t i = 0; i < s.size(); ++i) {
                std::vector<std::uint64_t> shorter;
                shorter.reserve(s.size() - 1);
                shorter.insert(shorter.end(), s.begin(), s.begin() + static_cast<std::ptrdiff_t>(i));
                shorter.insert(shorter.end(), s.begin() + static_cast<std::ptrdiff_t>(i) + 1, s.end());
                if (ball.insert(shorter).second) next.push_back(std::move(shorter));
            }
        }
        frontier = std::move(next);
    }
    return ball.size();
}

double reduced_range_savings(std::size_t ell, std::size_t d) {
    if (d == 0 || d > ell) throw TooLarge("edit count out of range");
    std::uint64_t levels = clog2(ell);
    double denom = log2_binom(ell, d);
    double sum = 0.0;
    for (std::uint64_t i = 1; i <= levels; ++i) {
        std::uint64_t window = 1ull << (i - 1);
        double num = log2_binom(window, d);
        if (std::isinf(num)) continue;
        sum += std::exp2(num - denom);
    }
    return sum;
}

double expected_log_imax(std::size_t ell, std::size_t d) {
    return static_cast<double>(clog2(ell)) - reduced_range_savings(ell, d);
}

double expected_cost_reduced_range_cnd(std::size_t ell, std::size_t users, std::size_t total) {
    double b = static_cast<double>(users);
    double cl = static_cast<double>(clog2(ell));
    double lead = static_cast<double>(total) / b * cl;
    double denom = binom(users + total - 1, total);
    double corr = 0.0;
    for (std::size_t d = 1; d <= std::min(total, ell); ++d) {
        double weight = binom(users + total - d - 2, total - d);
        if (weight == 0.0) {
            if (!(users == 1 && d == total)) continue;
            weight = 1.0;  // [z^0](1-z)^0
        }
        corr += static_cast<double>(d) * reduced_range_savings(ell, d) * weight;
    }
    return lead - corr / denom;
}

double expected_cost_reduced_range_pnd(std::size_t ell, double p) {
    if (p < 0.0 || p > 1.0) throw TooLarge("probability out of range");
    double cl = static_cast<double>(clog2(ell));
    double lead = p * static_cast<double>(ell) * cl;
    double corr = 0.0;
    for (std::size_t d = 1; d <= ell; ++d) {
        double pd = std::pow(p, static_cast<double>(d)) *
                    std::pow(1.0 - p, static_cast<double>(ell - d));
        if (pd == 0.0) continue;
        std::uint64_t levels = clog2(ell);
        double inner = 0.0;
        for (std::uint64_t i = 1; i <= levels; ++i) inner += binom(1ull << (i - 1), d);
        corr += static_cast<double>(d) * pd * inner;
    }
    return lead - corr;
}

double homogeneous_h(std::size_t k, std::span<const double> weights) {
    std::vector<double> h(k + 1, 0.0);
    h[0] = 1.0;
    for (double w : weights)
        for (std::size_t j = 1; j <= k; ++j) h[j] += w * h[j - 1];
    return h[k];
}

double lambert_w(double x) {
    if (x < 0.0 || !std::isfinite(x)) throw NonConvergence("argument outside the supported range");
    if (x == 0.0) return 0.0;
    double w = std::log1p(x);
    for (int it = 0; it < 128; ++it) {
        double ew = std::exp(w);
        double f = w * ew - x;
        if (std::abs(f) <= 1e-12 * std::max(1.0, x)) return w;
        w -= f / (ew * (w + 1.0));
    }
    if (std::abs(w * std::exp(w) - x) <= 1e-9 * std::max(1.0, x)) return w;
    throw NonConvergence("Lambert W iteration failed to converge");
}

double lambert_w_exp(double y) {
    // Solve w + log w = y. For moderate y fall back to the direct form.
    if (y < 1.0) return lambert_w(std::exp(y));
    double w = std::max(y - std::log(std::max(y, 1.0)), 1e-12);
    for (int it = 0; it < 128; ++it) {
        double f = w + std::log(w) - y;
        double fp = 1.0 + 1.0 / w;
        double step = f / fp;
        w -= step;
        if (w <= 0) w = 1e-12;
        if (std::abs(f) <= 1e-13 * std::max(1.0, std::abs(y))) return w;
    }
    throw NonConvergence("Lambert W iteration failed to converge");
}

}  // namespace codedsync::analysis
