// Acceptance suite: every criterion below prints one PASS/FAIL line and is
// asserted, at the stated tolerance, against the library as shipped.

#include "doctest.h"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>

#include "codedsync/simnet.hpp"
#include "codedsync/vtsync.hpp"

using namespace codedsync;
using analysis::EditModel;

namespace {

void report(int num, const std::string& name, bool ok) {
    std::cout << "[criterion " << num << "] " << name << ": " << (ok ? "PASS" : "FAIL")
              << std::endl;
    CHECK_MESSAGE(ok, "criterion ", num, ": ", name);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(CODEDSYNC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

std::vector<std::vector<std::uint64_t>> random_blocks(std::size_t users, std::size_t l,
                                                      std::uint64_t q, Rng& rng) {
    std::vector<std::vector<std::uint64_t>> blocks(users, std::vector<std::uint64_t>(l));
    for (auto& b : blocks)
        for (auto& v : b) v = rng.below(q);
    return blocks;
}

}  // namespace

TEST_CASE("criterion 1: worked-example fidelity") {
    bool ok = true;
    for (const char* name : {"scheme-p", "scheme-v", "scheme-h"}) {
        auto t0 = std::chrono::steady_clock::now();
        int code = run_cli(std::string("demo ") + name);
        double dt = seconds_since(t0);
        if (code != 0 || dt >= 1.0) ok = false;
    }
    report(1, "demos replay every reference table exactly, under 1 s each", ok);
}

TEST_CASE("criterion 2: protocol cost exactness on the (l, q) grid") {
    bool ok = true;
    std::vector<std::size_t> lens = {2, 3, 5, 8, 16, 33, 64, 128, 256};
    std::vector<std::uint64_t> qs = {2, 5, 13, 257};
    Rng rng(2020);
    for (std::size_t l : lens) {
        for (std::uint64_t q : qs) {
            // permutation scheme: any l, q
            {
                BuildParams p{SchemeId::P, 3, 2, l, q, 0};
                SystemState st = build_system(p, rng.next());
                auto pos = sample_edit_positions(EditModel::uniform(l, 2), st.sync.live_len, rng);
                run_round(st, pos, VerifyLevel::None);
                for (std::size_t s = 0; s < 2 && ok; ++s)
                    for (std::size_t t : st.sync.code.connected_nodes(s)) {
                        std::uint64_t want = ceil_log2(l) + ceil_log2(q) + 1;
                        std::uint64_t have = 0;
                        for (std::size_t r = 0; r < st.sync.ledger.round(); ++r)
                            have += st.sync.ledger.bits_user_to_node(s, t, r);
                        if (have != want) ok = false;
                    }
            }
            // Vandermonde scheme: needs l <= q
            if (l <= q) {
                BuildParams p{SchemeId::V, 3, 2, l, q, 0};
                SystemState st = build_system(p, rng.next());
                auto pos = sample_edit_positions(EditModel::uniform(l, 2), st.sync.live_len, rng);
                run_round(st, pos, VerifyLevel::None);
                for (std::size_t s = 0; s < 2 && ok; ++s)
                    for (std::size_t t : st.sync.code.connected_nodes(s))
                        if (st.sync.ledger.bits_user_to_node(s, t, 0) !=
                            ceil_log2(l) + ceil_log2(q))
                            ok = false;
            }
        }
    }
    report(2, "ledger bits equal ceil(log2 l)+ceil(log2 q)(+1) per connected node", ok);
}

TEST_CASE("criterion 3: traditional-scheme span fraction at l = 1024") {
    auto t0 = std::chrono::steady_clock::now();
    BuildParams p{SchemeId::T, 3, 2, 1024, 5, 0};
    Summary s = monte_carlo(p, EditModel::uniform(1024, 2), 100000, 20260810, VerifyLevel::Light);
    double dt = seconds_since(t0);
    bool ok = s.failures == 0 && std::abs(s.mean_span_fraction - 1.0 / 3.0) <= 0.02 && dt < 60.0;
    std::cout << "    mean span fraction " << s.mean_span_fraction << " vs 1/3, " << dt
              << " s\n";
    report(3, "100k seeded trials land within 0.02 of the 1/3 span fraction", ok);
}

TEST_CASE("criterion 4: sampled minima match the exact order statistics") {
    struct Point {
        EditModel model;
        std::size_t n, k;
    };
    std::vector<Point> grid = {
        {EditModel::uniform(8, 2), 3, 2},         {EditModel::uniform(32, 3), 4, 3},
        {EditModel::uniform(64, 2), 3, 2},        {EditModel::uniform(16, 5), 6, 5},
        {EditModel::combinatorial(16, 2, 3), 3, 2}, {EditModel::combinatorial(32, 3, 6), 4, 3},
        {EditModel::combinatorial(8, 4, 4), 5, 4},  {EditModel::combinatorial(64, 2, 1), 3, 2},
        {EditModel::probabilistic(16, 2, 0.1), 3, 2},
        {EditModel::probabilistic(32, 3, 0.05), 4, 3},
        {EditModel::probabilistic(64, 2, 0.02), 3, 2},
        {EditModel::probabilistic(8, 5, 0.2), 6, 5},
    };
    bool ok = true;
    std::uint64_t seed = 9000;
    for (const auto& pt : grid) {
        BuildParams bp{SchemeId::T, pt.n, pt.k, pt.model.ell, 5, 0};
        Summary s = monte_carlo(bp, pt.model, 20000, seed++, VerifyLevel::None);
        double want = analysis::expected_imin(pt.model);
        if (std::abs(s.mean_imin - want) > 3.0 * s.stderr_imin + 1e-9) ok = false;
    }
    report(4, "12-point grid: Monte Carlo E[i_min] within 3 standard errors", ok);
}

TEST_CASE("criterion 5: randomized edit histories stay reconstructible") {
    Rng rng(50505);
    std::size_t failures = 0;
    const std::size_t histories = 10000;
    for (std::size_t h = 0; h < histories; ++h) {
        bool use_perm = rng.below(2) == 0;
        std::uint64_t q = std::vector<std::uint64_t>{5, 7, 13}[rng.below(3)];
        // the Vandermonde configuration needs l <= q; the permutation scheme
        // runs the full range
        std::size_t l;
        if (use_perm) {
            l = 4 + rng.below(61);  // up to 64
        } else {
            l = 3 + rng.below(q - 2);
        }
        BuildParams p{use_perm ? SchemeId::P : SchemeId::V, 3, 2, l, q, 0};
        SystemState st = build_system_with_blocks(p, random_blocks(2, l, q, rng));
        std::size_t rounds = 1 + rng.below(3);
        for (std::size_t r = 0; r < rounds; ++r) {
            std::size_t shortest = std::min(st.sync.live_len[0], st.sync.live_len[1]);
            if (shortest < 2) break;
            std::vector<std::size_t> lens(2, shortest);
            auto pos = sample_edit_positions(EditModel::uniform(shortest, 2), lens, rng);
            TrialResult res = run_round(st, pos, VerifyLevel::Full);
            if (!res.consistent) ++failures;
        }
    }
    std::cout << "    " << histories << " histories, " << failures << " failures\n";
    report(5, "10k mixed histories: every subset reconstructs, every node repairs", failures == 0);
}

TEST_CASE("criterion 6: single-coordinate update identities") {
    Rng rng(606060);
    std::size_t failures = 0;
    const int instances = 10000;
    std::vector<std::uint64_t> qs = {5, 13, 257};
    for (int i = 0; i < instances; ++i) {
        Field f = make_field(qs[rng.below(qs.size())]);
        std::size_t l = 2 + rng.below(63);

        // permutation claim
        {
            UserCoding coding = UserCoding::permutation(l);
            for (int m = 0; m < 4; ++m) coding.perm_delete(rng.below(l));
            std::vector<std::uint64_t> x(l);
            for (auto& v : x) v = rng.below(f.order());
            std::size_t pos = rng.below(l);
            auto xa = coding.apply(f, x);
            std::size_t j = coding.perm().map[pos];
            std::uint64_t deleted = x[pos];
            UserCoding after = coding;
            after.perm_delete(pos);
            std::vector<std::uint64_t> edited(x);
            edited.erase(edited.begin() + static_cast<std::ptrdiff_t>(pos));
            edited.push_back(0);
            auto xa2 = after.apply(f, edited);
            for (std::size_t c = 0; c < l; ++c)
                if (f.sub(xa[c], xa2[c]) != (c == j ? deleted : 0)) ++failures;
        }
        // Vandermonde claim
        if (l <= f.order()) {
            Matrix a = Matrix::vandermonde_standard(f, l, l);
            std::vector<std::uint64_t> x(l);
            for (auto& v : x) v = rng.below(f.order());
            std::size_t pos = rng.below(l);
            auto xa = vec_mat_mul(x, a);
            Matrix trimmed = a.delete_row(pos).delete_col(l - 1);
            std::vector<std::uint64_t> edited(x);
            edited.erase(edited.begin() + static_cast<std::ptrdiff_t>(pos));
            auto xa2 = vec_mat_mul(edited, trimmed);
            for (std::size_t c = 0; c + 1 < l; ++c)
                if (f.sub(xa[c], xa2[c]) != f.mul(x[pos], a.at(pos, c))) ++failures;
        }
    }
    report(6, "update-claim identities hold entrywise on 10k random instances", failures == 0);
}

TEST_CASE("criterion 7: exhaustive syndrome recovery") {
    auto t0 = std::chrono::steady_clock::now();
    Field f = make_field(3);
    std::size_t ambiguous = 0, wrong = 0;
    for (std::size_t l = 2; l <= 6; ++l) {
        std::size_t count = 1;
        for (std::size_t i = 0; i < l; ++i) count *= 3;
        for (std::size_t word = 0; word < count; ++word) {
            std::vector<std::uint64_t> x(l);
            std::size_t w = word;
            for (std::size_t i = 0; i < l; ++i) {
                x[i] = w % 3;
                w /= 3;
            }
            VtSyndrome s = vt_syndrome(f, x);
            for (std::size_t i = 0; i < l; ++i) {
                std::vector<std::uint64_t> shortened(x);
                shortened.erase(shortened.begin() + static_cast<std::ptrdiff_t>(i));
                try {
                    auto rec = vt_recover(f, shortened, s, l);
                    if (rec.recovered != x) ++wrong;
                } catch (const AmbiguousRecovery&) {
                    ++ambiguous;
                } catch (const NoCandidate&) {
                    ++wrong;
                }
            }
        }
    }
    double dt = seconds_since(t0);
    bool ok = ambiguous == 0 && wrong == 0 && dt < 60.0;
    std::cout << "    all strings over F_3 up to length 6, " << dt << " s\n";
    report(7, "every single deletion recovers exactly, zero ambiguity", ok);
}

TEST_CASE("criterion 8: subsequence-count lower bound") {
    bool ok = true;
    for (std::uint64_t q : {2ull, 3ull}) {
        for (std::size_t l = 2; l <= 10; ++l) {
            for (std::size_t d = 1; d <= 2 && d <= l; ++d) {
                // V(l,d) is a maximum over strings; enumerate them all
                std::size_t best = 0;
                std::size_t count = 1;
                for (std::size_t i = 0; i < l; ++i) count *= q;
                for (std::size_t word = 0; word < count; ++word) {
                    std::vector<std::uint64_t> x(l);
                    std::size_t w = word;
                    for (std::size_t i = 0; i < l; ++i) {
                        x[i] = w % q;
                        w /= q;
                    }
                    best = std::max(best, analysis::edit_ball_size(x, d));
                }
                if (static_cast<double>(best) < analysis::binom(l - d, d)) ok = false;
            }
        }
    }
    report(8, "max edit-ball size dominates C(l-d, d) on the exhaustive grid", ok);
}

TEST_CASE("criterion 9: hybrid tuning and aggregate assignment") {
    bool ok = true;
    for (std::size_t l : {8, 64, 256, 1024, 4096}) {
        for (std::uint64_t q : {5ull, 13ull, 257ull}) {
            GammaChoice g = choose_gamma(l, q, std::log2(static_cast<double>(l)));
            double lq = std::log2(static_cast<double>(q));
            double resid = std::log2(g.gamma * l) + lq - (1.0 - g.gamma) * l * lq;
            if (std::abs(resid) > 1e-9) ok = false;
        }
    }
    Rng rng(909);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t users = 2 + rng.below(3);  // up to 4
        std::size_t l = 2 + rng.below(62);
        std::uint64_t q = 5;
        double threshold = (l - 1) * std::log2(5.0) / std::log2(static_cast<double>(l));
        double theta = rng.unit() * 2.0 * threshold;
        std::vector<double> probs(users);
        for (auto& pr : probs) pr = rng.unit();
        auto a = aggregate_assignment(l, q, theta, probs);
        double best = 1e300;
        for (unsigned mask = 0; mask < (1u << users); ++mask) {
            double p = 0;
            for (std::size_t s = 0; s < users; ++s)
                if (mask & (1u << s)) p += probs[s];
            best = std::min(best, aggregate_cost(l, q, theta, p));
        }
        if (std::abs(a.cost - best) > 1e-9 * std::max(1.0, best)) ok = false;
    }
    report(9, "balance-equation residual under 1e-9; assignment matches brute force", ok);
}

TEST_CASE("criterion 10: intermediary coding dominates asymptotically") {
    bool ok = true;
    for (int which = 0; which < 3; ++which) {
        double prev = 1e18;
        for (std::size_t e = 6; e <= 14; ++e) {
            std::size_t ell = 1ull << e;
            EditModel m = which == 0   ? EditModel::uniform(ell, 2)
                          : which == 1 ? EditModel::combinatorial(ell, 2, 2)
                                       : EditModel::probabilistic(ell, 2, 1.0 / ell);
            double ratio =
                analysis::expected_cost_PV(m, 5).bits / analysis::expected_cost_T(m, 5).bits;
            if (ratio >= prev) ok = false;
            prev = ratio;
            if (e == 14 && ratio >= 0.05) ok = false;
        }
    }
    report(10, "PV/T cost ratio falls monotonically and ends below 0.05", ok);
}

TEST_CASE("figure data: tradeoff curve ordering") {
    bool ok = true;
    for (std::size_t l : {16, 64, 256}) {
        for (std::uint64_t q : {5ull, 13ull}) {
            double lq = std::log2(static_cast<double>(q));
            double tworst = (static_cast<double>(l) - 1.0) * lq;
            double lower = analysis::lev_lower_bound(l, 1, q, false);
            for (int j = 1; j <= 32; ++j) {
                double budget = std::log2(static_cast<double>(l)) * j / 32.0;
                double gamma_b = std::min(std::exp2(budget) / static_cast<double>(l), 1.0);
                double hybrid = hybrid_worst_case_bits(l, q, gamma_b);
                if (!(lower <= hybrid + 1e-9 && hybrid <= tworst + 1e-9)) ok = false;
                GammaChoice opt = choose_gamma(l, q, budget);
                if (!(lower <= opt.worst_case_bits + 1e-9 &&
                      opt.worst_case_bits <= tworst + 1e-9))
                    ok = false;
            }
        }
    }
    report(11, "lower bound <= hybrid <= worst case at every budget", ok);
}
