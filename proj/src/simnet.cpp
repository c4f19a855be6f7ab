#include "codedsync/simnet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace codedsync {

const char* scheme_name(SchemeId id) {
    switch (id) {
        case SchemeId::T: return "T";
        case SchemeId::P: return "P";
        case SchemeId::V: return "V";
        case SchemeId::C: return "C";
        case SchemeId::H: return "H";
    }
    return "?";
}

namespace {

CodeSpec make_code(const BuildParams& p) {
    if (p.n == p.k + 1) return CodeSpec::single_parity(p.k, p.q);
    return CodeSpec::rs_systematic(p.n, p.k, p.q);
}

IntermediaryConfig make_config(const BuildParams& p, const Field& f, std::size_t& tail_len) {
    tail_len = 0;
    switch (p.scheme) {
        case SchemeId::T:
            return IntermediaryConfig::identity(f, p.k, p.ell);
        case SchemeId::P:
            return IntermediaryConfig::permutations(p.k, p.ell);
        case SchemeId::V:
            return IntermediaryConfig::shared_matrix(
                p.k, Matrix::vandermonde_standard(f, p.ell, p.ell));
        case SchemeId::C: {
            IntermediaryConfig cfg;
            cfg.users.push_back(UserCoding::matrix(Matrix::identity(f, p.ell)));
            Matrix c = Matrix::cauchy_standard(f, p.ell);
            for (std::size_t s = 1; s < p.k; ++s) cfg.users.push_back(UserCoding::matrix(c));
            return cfg;
        }
        case SchemeId::H: {
            if (p.gamma <= 0.0 || p.gamma > 1.0) throw InfeasibleBudget("gamma must be in (0, 1]");
            std::size_t first = std::clamp<std::size_t>(
                static_cast<std::size_t>(std::llround(p.gamma * static_cast<double>(p.ell))), 1,
                p.ell);
            tail_len = p.ell - first;
            Matrix top = Matrix::vandermonde_standard(f, first, first);
            Matrix m = tail_len > 0 ? Matrix::block_diag(top, Matrix::identity(f, tail_len)) : top;
            return IntermediaryConfig::shared_matrix(p.k, m);
        }
    }
    throw IndexOutOfRange("unknown scheme");
}

}  // namespace

SystemState build_system_with_blocks(const BuildParams& params,
                                     std::vector<std::vector<std::uint64_t>> blocks) {
    CodeSpec code = make_code(params);
    std::size_t tail_len = 0;
    IntermediaryConfig cfg = make_config(params, code.field(), tail_len);
    SystemState st{params, make_state(std::move(code), std::move(cfg), std::move(blocks)), tail_len,
                   0};
    return st;
}

SystemState build_system(const BuildParams& params, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<std::uint64_t>> blocks(params.k,
                                                   std::vector<std::uint64_t>(params.ell, 0));
    for (auto& b : blocks)
        for (auto& v : b) v = rng.below(params.q);
    return build_system_with_blocks(params, std::move(blocks));
}

std::vector<std::vector<std::size_t>> sample_edit_positions(const analysis::EditModel& model,
                                                            const std::vector<std::size_t>& lengths,
                                                            Rng& rng) {
    std::size_t users = lengths.size();
    std::vector<std::vector<std::size_t>> out(users);
    switch (model.kind) {
        case analysis::EditModelKind::UniformDeletions:
            for (std::size_t s = 0; s < users; ++s) out[s].push_back(rng.below(lengths[s]));
            break;
        case analysis::EditModelKind::CombinatorialDeletions: {
            std::size_t total = std::accumulate(lengths.begin(), lengths.end(), std::size_t{0});
            std::size_t want = std::min<std::size_t>(model.total_deletions, total);
            std::unordered_set<std::size_t> chosen;
            if (want * 2 <= total) {
                while (chosen.size() < want) chosen.insert(rng.below(total));
            } else {
                std::vector<std::size_t> idx(total);
                std::iota(idx.begin(), idx.end(), 0);
                for (std::size_t i = 0; i < want; ++i) {
                    std::size_t j = i + rng.below(total - i);
                    std::swap(idx[i], idx[j]);
                    chosen.insert(idx[i]);
                }
            }
            for (std::size_t flat : chosen) {
                std::size_t s = 0, off = flat;
                while (off >= lengths[s]) off -= lengths[s++];
                out[s].push_back(off);
            }
            break;
        }
        case analysis::EditModelKind::ProbabilisticDeletions:
            for (std::size_t s = 0; s < users; ++s)
                for (std::size_t i = 0; i < lengths[s]; ++i)
                    if (rng.unit() < model.per_symbol_prob) out[s].push_back(i);
            break;
    }
    for (auto& v : out) std::sort(v.begin(), v.end());
    return out;
}

namespace {

std::vector<std::vector<std::size_t>> k_subsets(std::size_t n, std::size_t k, std::size_t cap,
                                                Rng& rng) {
    double total = analysis::binom(n, k);
    std::vector<std::vector<std::size_t>> out;
    if (total <= static_cast<double>(cap)) {
        std::vector<std::size_t> idx(k);
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            out.push_back(idx);
            std::size_t i = k;
            bool done = true;
            while (i-- > 0) {
                if (idx[i] != i + n - k) {
                    ++idx[i];
                    for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
                    done = false;
                    break;
                }
            }
            if (done) break;
        }
        return out;
    }
    for (std::size_t c = 0; c < cap; ++c) {
        std::vector<std::size_t> pick(n);
        std::iota(pick.begin(), pick.end(), 0);
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + rng.below(n - i);
            std::swap(pick[i], pick[j]);
        }
        pick.resize(k);
        std::sort(pick.begin(), pick.end());
        out.push_back(pick);
    }
    return out;
}

}  // namespace

bool check_consistency(const SystemState& state, std::size_t cap, VerifyLevel level, Rng& rng) {
    if (level == VerifyLevel::None) return true;
    const SyncState& st = state.sync;
    std::size_t n = st.code.n(), k = st.code.k();
    std::vector<std::vector<std::size_t>> subsets;
    if (level == VerifyLevel::Light) {
        std::vector<std::size_t> t(k);
        std::size_t off = state.rounds_run % n;
        for (std::size_t i = 0; i < k; ++i) t[i] = (off + i) % n;
        std::sort(t.begin(), t.end());
        subsets.push_back(std::move(t));
    } else {
        subsets = k_subsets(n, k, cap, rng);
    }
    try {
        for (const auto& t_set : subsets) {
            auto got = reconstruct_star(st.code, st.config, t_set, st.tensor);
            if (got != st.blocks) return false;
        }
        if (level == VerifyLevel::Full) {
            for (std::size_t t = 0; t < n; ++t) {
                std::vector<std::size_t> t_set;
                for (std::size_t u = 0; u < n && t_set.size() < k; ++u)
                    if (u != t) t_set.push_back(u);
                auto repaired = repair_star(st.code, st.config, t, t_set, st.tensor);
                if (repaired != st.tensor.node_row(t)) return false;
            }
        }
    } catch (const Error&) {
        return false;
    }
    return true;
}

TrialResult run_round(SystemState& state, const std::vector<std::vector<std::size_t>>& positions,
                      VerifyLevel verify) {
    SyncState& st = state.sync;
    if (positions.size() != st.code.users()) throw NonUniformEdits("expected one list per user");
    TrialResult res;
    res.deletions = 0;
    std::size_t imin = st.tensor.len;
    bool any = false;
    for (const auto& v : positions) {
        res.deletions += v.size();
        if (!v.empty()) {
            imin = std::min(imin, v.front());
            any = true;
        }
    }
    res.imin = any ? static_cast<double>(imin + 1) : static_cast<double>(st.tensor.len);
    for (std::size_t s = 0; s < st.code.users(); ++s)
        res.pair_count += st.code.connected_nodes(s).size();

    bool uniform_single = std::all_of(positions.begin(), positions.end(),
                                      [](const auto& v) { return v.size() == 1; });
    std::size_t round_before = st.ledger.round();

    switch (state.params.scheme) {
        case SchemeId::T: {
            TRoundInfo info;
            if (uniform_single) {
                std::vector<std::size_t> one(positions.size());
                for (std::size_t s = 0; s < positions.size(); ++s) one[s] = positions[s][0];
                info = scheme_t_round(st, one);
            } else {
                info = scheme_t_round_multi(st, positions);
            }
            res.span_symbols = info.span_symbols;
            break;
        }
        case SchemeId::P:
            for (std::size_t s = 0; s < positions.size(); ++s) {
                auto desc = positions[s];
                std::sort(desc.rbegin(), desc.rend());
                for (std::size_t p : desc)
                    scheme_p_apply_edit(st, EditEvent{s, EditKind::Deletion, p, 0});
            }
            break;
        case SchemeId::V: {
            std::vector<std::vector<Deletion>> lists(positions.size());
            for (std::size_t s = 0; s < positions.size(); ++s)
                for (std::size_t p : positions[s]) lists[s].push_back({p, st.blocks[s][p]});
            scheme_v_round_nonuniform(st, lists);
            break;
        }
        case SchemeId::C: {
            if (!uniform_single)
                throw NonUniformEdits("the Cauchy round handles one deletion per user");
            std::vector<Deletion> dels(positions.size());
            for (std::size_t s = 0; s < positions.size(); ++s)
                dels[s] = {positions[s][0], st.blocks[s][positions[s][0]]};
            scheme_c_round(st, dels);
            break;
        }
        case SchemeId::H:
            for (std::size_t s = 0; s < positions.size(); ++s) {
                auto desc = positions[s];
                std::sort(desc.rbegin(), desc.rend());
                for (std::size_t p : desc) scheme_h_apply_edit(st, s, p, state.tail_len);
            }
            break;
    }

    for (std::size_t r = round_before; r < st.ledger.round(); ++r)
        res.user_node_bits += st.ledger.user_to_node_bits(r);
    ++state.rounds_run;

    if (verify != VerifyLevel::None) {
        Rng vrng(0x5eedull ^ (state.rounds_run * 0x9e3779b97f4a7c15ull));
        res.consistent = check_consistency(state, 64, verify, vrng);
    }
    return res;
}

Summary monte_carlo(const BuildParams& params, const analysis::EditModel& model,
                    std::size_t trials, std::uint64_t seed, VerifyLevel verify) {
    if (model.ell != params.ell || model.users != params.k)
        throw DimensionMismatch("edit model shape must match the system shape");
    Summary sum;
    sum.trials = trials;
    double s_bits = 0, s2_bits = 0, s_span = 0, s2_span = 0, s_imin = 0, s2_imin = 0;
    double s_frac = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        Rng rng = Rng::for_trial(seed, trial);
        std::vector<std::vector<std::uint64_t>> blocks(params.k,
                                                       std::vector<std::uint64_t>(params.ell, 0));
        for (auto& b : blocks)
            for (auto& v : b) v = rng.below(params.q);
        SystemState state = build_system_with_blocks(params, std::move(blocks));
        auto positions = sample_edit_positions(model, state.sync.live_len, rng);
        TrialResult r = run_round(state, positions, verify);
        if (!r.consistent) ++sum.failures;
        double per_pair =
            r.pair_count == 0 ? 0.0 : static_cast<double>(r.user_node_bits) / r.pair_count;
        s_bits += per_pair;
        s2_bits += per_pair * per_pair;
        double span = static_cast<double>(r.span_symbols);
        s_span += span;
        s2_span += span * span;
        s_frac += span / static_cast<double>(params.ell);
        s_imin += r.imin;
        s2_imin += r.imin * r.imin;
        sum.checksum += (r.user_node_bits + 1) * 0x9e3779b97f4a7c15ull ^ (trial + r.deletions);
    }
    if (trials > 0) {
        double n = static_cast<double>(trials);
        auto fin = [&](double s, double s2, double& mean, double& se) {
            mean = s / n;
            double var = std::max(0.0, s2 / n - mean * mean);
            se = std::sqrt(var / n);
        };
        fin(s_bits, s2_bits, sum.mean_user_node_bits, sum.stderr_user_node_bits);
        fin(s_span, s2_span, sum.mean_span_symbols, sum.stderr_span_symbols);
        fin(s_imin, s2_imin, sum.mean_imin, sum.stderr_imin);
        sum.mean_span_fraction = s_frac / n;
    }
    return sum;
}

}  // namespace codedsync
