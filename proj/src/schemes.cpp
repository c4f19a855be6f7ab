#include "codedsync/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "codedsync/analysis.hpp"

namespace codedsync {

namespace {

void check_user_count(const SyncState& st, std::size_t got) {
    if (got != st.code.users()) throw NonUniformEdits("expected one entry per user");
}

bool all_identity(const IntermediaryConfig& cfg) {
    for (const auto& u : cfg.users)
        if (u.is_permutation() || u.mat().kind() != MatrixKind::Identity) return false;
    return true;
}

// Subtract coeff * row from node t of the tensor.
void subtract_scaled(const Field& f, StorageTensor& tensor, std::size_t t, std::uint64_t coeff,
                     const std::vector<std::uint64_t>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i] == 0) continue;
        tensor.at(t, i) = f.sub(tensor.at(t, i), f.mul(coeff, row[i]));
    }
}

std::uint64_t position_bits(std::size_t range) { return ceil_log2(range); }

}  // namespace

SyncState make_state(CodeSpec code, IntermediaryConfig config,
                     std::vector<std::vector<std::uint64_t>> blocks) {
    StorageTensor tensor = encode_star(code, config, blocks);
    std::vector<std::size_t> live;
    for (const auto& b : blocks) live.push_back(b.size());
    return SyncState{std::move(code), std::move(config), std::move(blocks), std::move(live),
                     std::move(tensor), CostLedger{}};
}

TRoundInfo scheme_t_round(SyncState& st, const std::vector<std::size_t>& del_pos) {
    check_user_count(st, del_pos.size());
    if (!all_identity(st.config))
        throw NonUniformEdits("traditional round requires identity coding matrices");
    const Field& f = st.code.field();
    std::size_t l = st.tensor.len;
    for (std::size_t s = 0; s < del_pos.size(); ++s)
        if (del_pos[s] >= st.blocks[s].size()) throw IndexOutOfRange("deletion position out of range");

    std::size_t imin = *std::min_element(del_pos.begin(), del_pos.end());
    std::size_t imax = *std::max_element(del_pos.begin(), del_pos.end());
    std::size_t span = imax - imin;

    std::uint64_t pos_bits = position_bits(l);
    std::uint64_t sym_bits = ceil_log2(f.order());
    for (std::size_t s = 0; s < st.code.users(); ++s) {
        st.ledger.add(Endpoint::user(s), Endpoint::coordinator(), MsgKind::Position, 1, pos_bits);
        st.ledger.add(Endpoint::coordinator(), Endpoint::user(s), MsgKind::Position, 2, 2 * pos_bits);
    }

    // Apply the deletions locally.
    for (std::size_t s = 0; s < st.code.users(); ++s) {
        st.blocks[s].erase(st.blocks[s].begin() + static_cast<std::ptrdiff_t>(del_pos[s]));
        st.live_len[s] = st.blocks[s].size();
    }

    if (span > 0) {
        for (std::size_t s = 0; s < st.code.users(); ++s)
            for (std::size_t t : st.code.connected_nodes(s))
                st.ledger.add(Endpoint::user(s), Endpoint::node(t), MsgKind::SymbolSpan, span,
                              span * sym_bits);
    }

    // Slices before imin are untouched, slices from imax on shift left by
    // one, and the window [imin, imax) is re-encoded from the spans.
    StorageTensor next(st.tensor.nodes, l - 1);
    for (std::size_t t = 0; t < next.nodes; ++t) {
        for (std::size_t i = 0; i < imin; ++i) next.at(t, i) = st.tensor.at(t, i);
        for (std::size_t i = imax; i + 1 < l; ++i) next.at(t, i) = st.tensor.at(t, i + 1);
    }
    const Matrix& g = st.code.generator();
    for (std::size_t s = 0; s < st.code.users(); ++s) {
        for (std::size_t t = 0; t < next.nodes; ++t) {
            std::uint64_t c = g.at(s, t);
            if (c == 0) continue;
            for (std::size_t i = imin; i < imax; ++i)
                next.at(t, i) = f.add(next.at(t, i), f.mul(c, st.blocks[s][i]));
        }
    }
    st.tensor = std::move(next);
    st.config = IntermediaryConfig::identity(f, st.code.users(), l - 1);
    st.ledger.advance_round();
    return {true, imin, span};
}

TRoundInfo scheme_t_round_multi(SyncState& st,
                                const std::vector<std::vector<std::size_t>>& del_pos) {
    check_user_count(st, del_pos.size());
    if (!all_identity(st.config))
        throw NonUniformEdits("traditional round requires identity coding matrices");
    const Field& f = st.code.field();
    std::size_t l = st.tensor.len;

    std::size_t dmin = std::numeric_limits<std::size_t>::max();
    std::size_t imin = l;
    bool any = false;
    for (std::size_t s = 0; s < del_pos.size(); ++s) {
        auto sorted = del_pos[s];
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw IndexOutOfRange("duplicate deletion position");
        for (std::size_t p : sorted)
            if (p >= st.blocks[s].size()) throw IndexOutOfRange("deletion position out of range");
        dmin = std::min(dmin, del_pos[s].size());
        if (!sorted.empty()) {
            imin = std::min(imin, sorted.front());
            any = true;
        }
    }
    if (!any) {
        st.ledger.advance_round();
        return {false, l, 0};
    }

    std::size_t next_len = l - dmin;
    std::uint64_t pos_bits = position_bits(l);
    std::uint64_t sym_bits = ceil_log2(f.order());

    for (std::size_t s = 0; s < st.code.users(); ++s) {
        std::size_t d = del_pos[s].size();
        if (d > 0)
            st.ledger.add(Endpoint::user(s), Endpoint::coordinator(), MsgKind::Position, d,
                          d * pos_bits);
        st.ledger.add(Endpoint::coordinator(), Endpoint::user(s), MsgKind::Position, 2, 2 * pos_bits);
    }

    for (std::size_t s = 0; s < st.code.users(); ++s) {
        auto desc = del_pos[s];
        std::sort(desc.rbegin(), desc.rend());
        for (std::size_t p : desc)
            st.blocks[s].erase(st.blocks[s].begin() + static_cast<std::ptrdiff_t>(p));
        st.blocks[s].resize(next_len, 0);
        st.live_len[s] = next_len;
    }

    std::size_t span = next_len - imin;
    if (span > 0) {
        for (std::size_t s = 0; s < st.code.users(); ++s)
            for (std::size_t t : st.code.connected_nodes(s))
                st.ledger.add(Endpoint::user(s), Endpoint::node(t), MsgKind::SymbolSpan, span,
                              span * sym_bits);
    }

    StorageTensor next(st.tensor.nodes, next_len);
    for (std::size_t t = 0; t < next.nodes; ++t)
        for (std::size_t i = 0; i < imin; ++i) next.at(t, i) = st.tensor.at(t, i);
    const Matrix& g = st.code.generator();
    for (std::size_t s = 0; s < st.code.users(); ++s) {
        for (std::size_t t = 0; t < next.nodes; ++t) {
            std::uint64_t c = g.at(s, t);
            if (c == 0) continue;
            for (std::size_t i = imin; i < next_len; ++i)
                next.at(t, i) = f.add(next.at(t, i), f.mul(c, st.blocks[s][i]));
        }
    }
    st.tensor = std::move(next);
    st.config = IntermediaryConfig::identity(f, st.code.users(), next_len);
    st.ledger.advance_round();
    return {true, imin, span};
}

void scheme_p_apply_edit(SyncState& st, const EditEvent& edit) {
    std::size_t s = edit.user;
    if (s >= st.code.users()) throw IndexOutOfRange("user index out of range");
    UserCoding& coding = st.config.users[s];
    if (!coding.is_permutation())
        throw DimensionMismatch("permutation scheme requires permutation codings");
    const Field& f = st.code.field();
    std::size_t l = st.tensor.len;
    std::size_t live = st.live_len[s];

    std::uint64_t x = 0;
    std::size_t j = 0;
    bool insertion = edit.kind == EditKind::Insertion;
    if (insertion) {
        if (live == l) throw NoPadSlack("no trailing pad slot left for an insertion");
        if (edit.pos > live) throw IndexOutOfRange("insertion position out of range");
        x = edit.value % f.order();
        j = coding.perm().map[l - 1];
        coding.perm_insert(edit.pos);
        st.blocks[s].insert(st.blocks[s].begin() + static_cast<std::ptrdiff_t>(edit.pos), x);
        st.blocks[s].pop_back();
        st.live_len[s] = live + 1;
    } else {
        if (edit.pos >= live) throw IndexOutOfRange("deletion position out of range");
        x = st.blocks[s][edit.pos];
        j = coding.perm().map[edit.pos];
        coding.perm_delete(edit.pos);
        st.blocks[s].erase(st.blocks[s].begin() + static_cast<std::ptrdiff_t>(edit.pos));
        st.blocks[s].push_back(0);
        st.live_len[s] = live - 1;
    }

    std::uint64_t pos_bits = position_bits(l);
    std::uint64_t sym_bits = ceil_log2(f.order());
    const Matrix& g = st.code.generator();
    for (std::size_t t : st.code.connected_nodes(s)) {
        st.ledger.add(Endpoint::user(s), Endpoint::node(t), MsgKind::Value, 1, sym_bits);
        st.ledger.add(Endpoint::user(s), Endpoint::node(t), MsgKind::TypeBit, 1, 1);
        st.ledger.add(Endpoint::user(s), Endpoint::node(t), MsgKind::Position, 1, pos_bits);
        std::uint64_t delta = f.mul(x, g.at(s, t));
        st.tensor.at(t, j) =
            insertion ? f.add(st.tensor.at(t, j), delta) : f.sub(st.tensor.at(t, j), delta);
    }
    st.ledger.advance_round();
}

namespace {

// Shared Vandermonde-round core: subtract the encoded deleted rows, narrow
// storage by min_s d_s, and shrink the coding matrices. Message emission is
// the caller's job (deduplication reuses this with positions already known).
void apply_v_deletions(SyncState& st, const std::vector<std::vector<Deletion>>& dels) {
    const Field& f = st.code.field();
    const Matrix& g = st.code.generator();
    std::size_t dmin = std::numeric_limits<std::size_t>::max();
    for (std::size_t s = 0; s < dels.size(); ++s) {
        std::vector<std::size_t> seen;
        for (const auto& d : dels[s]) {
            if (d.pos >= st.blocks[s].size()) throw IndexOutOfRange("deletion position out of range");
            if (!d.value) throw MissingValue("deleted value unknown; recover it first");
            seen.push_back(d.pos);
        }
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
            throw IndexOutOfRange("duplicate deletion position");
        dmin = std::min(dmin, dels[s].size());
    }

    // Node update: subtract Encode(d^(1), ..., d^(B)) restricted to each node.
    for (std::size_t s = 0; s < dels.size(); ++s) {
        if (dels[s].empty()) continue;
        std::vector<std::uint64_t> drow(st.tensor.len, 0);
        for (const auto& d : dels[s]) {
            auto row = st.config.users[s].coded_row(f, d.pos);
            std::uint64_t v = *d.value % f.order();
            for (std::size_t i = 0; i < row.size(); ++i)
                drow[i] = f.add(drow[i], f.mul(v, row[i]));
        }
        for (std::size_t t : st.code.connected_nodes(s))
            subtract_scaled(f, st.tensor, t, g.at(s, t), drow);
    }

    for (std::size_t s = 0; s < dels.size(); ++s) {
        std::vector<std::size_t> desc;
        for (const auto& d : dels[s]) desc.push_back(d.pos);
        std::sort(desc.rbegin(), desc.rend());
        for (std::size_t p : desc) {
            st.config.users[s].drop_row(p);
            st.blocks[s].erase(st.blocks[s].begin() + static_cast<std::ptrdiff_t>(p));
        }
        st.live_len[s] = st.blocks[s].size();
    }
    if (dmin > 0) {
        st.tensor.drop_last_cols(dmin);
        for (auto& u : st.config.users) u.drop_last_cols(dmin);
    }
}

void require_matrix_codings(const SyncState& st) {
    for (const auto& u : st.config.users)
        if (u.is_permutation())
            throw DimensionMismatch("this scheme requires matrix codings");
}

}  // namespace

void scheme_v_round(SyncState& st, const std::vector<Deletion>& dels) {
    check_user_count(st, dels.size());
    std::vector<std::vector<Deletion>> lists(dels.size());
    for (std::size_t s = 0; s < dels.size(); ++s) lists[s] = {dels[s]};
    scheme_v_round_nonuniform(st, lists);
}

void scheme_v_round_nonuniform(SyncState& st, const std::vector<std::vector<Deletion>>& dels) {
    check_user_count(st, dels.size());
    require_matrix_codings(st);
    const Field& f = st.code.field();
    std::uint64_t sym_bits = ceil_log2(f.order());
    for (std::size_t s = 0; s < dels.size(); ++s) {
        std::size_t d = dels[s].size();
        if (d == 0) continue;
        std::uint64_t pos_bits = position_bits(st.blocks[s].size());
        for (std::size_t t : st.code.connected_nodes(s)) {
            st.ledger.add(Endpoint::user(s), Endpoint::node(t), MsgKind::Value, d, d * sym_bits);
            st.ledger.add(Endpoint::user(s), Endpoint::node(t), MsgKind::Position, d, d * pos_bits);
        }
    }
    apply_v_deletions(st, dels);
    st.ledger.advance_round();
}

void scheme_c_round(SyncState& st, const std::vector<Deletion>& dels) {
    check_user_count(st, dels.size());
    require_matrix_codings(st);
    if (st.config.users.empty()) throw NonUniformEdits("no users");
    if (st.config.users[0].mat().kind() != MatrixKind::Identity)
        throw DimensionMismatch("first user must hold the identity matrix");
    for (std::size_t s = 1; s < st.config.users.size(); ++s)
        if (st.config.users[s].mat().kind() != MatrixKind::Cauchy)
            throw DimensionMismatch("users beyond the first must hold Cauchy matrices");
    const Field& f = st.code.field();
    const Matrix& g = st.code.generator();

    std::size_t i1 = dels[0].pos;
    if (i1 >= st.blocks[0].size()) throw IndexOutOfRange("deletion position out of range");
    std::uint64_t sym_bits = ceil_log2(f.order());
    for (std::size_t s = 0; s < dels.size(); ++s) {
        if (dels[s].pos >= st.blocks[s].size())
            throw IndexOutOfRange("deletion position out of range");
        if (s > 0 && !dels[s].value) throw MissingValue("deleted value unknown");
        std::uint64_t pos_bits = position_bits(st.blocks[s].size());
        for (std::size_t t : st.code.connected_nodes(s)) {
            st.ledger.add(Endpoint::user(s), Endpoint::node(t), MsgKind::Position, 1, pos_bits);
            if (s > 0)
                st.ledger.add(Endpoint::user(s), Endpoint::node(t), MsgKind::Value, 1, sym_bits);
        }
    }

    // The first user's deleted symbol only ever lands in storage column i1,
    // which is about to be removed, so its value never travels.
    for (std::size_t s = 1; s < dels.size(); ++s) {
        std::vector<std::uint64_t> drow = st.config.users[s].coded_row(f, dels[s].pos);
        std::uint64_t v = *dels[s].value % f.order();
        for (auto& c : drow) c = f.mul(c, v);
        for (std::size_t t : st.code.connected_nodes(s))
            subtract_scaled(f, st.tensor, t, g.at(s, t), drow);
    }
    st.tensor.drop_col(i1);

    std::size_t l = st.config.users[0].mat().rows();
    st.config.users[0] = UserCoding::matrix(Matrix::identity(f, l - 1));
    for (std::size_t s = 1; s < dels.size(); ++s) {
        st.config.users[s].drop_row(dels[s].pos);
        st.config.users[s].drop_col(i1);
    }
    for (std::size_t s = 0; s < dels.size(); ++s) {
        st.blocks[s].erase(st.blocks[s].begin() + static_cast<std::ptrdiff_t>(dels[s].pos));
        st.live_len[s] = st.blocks[s].size();
    }
    st.ledger.advance_round();
}

void scheme_h_apply_edit(SyncState& st, std::size_t user, std::size_t pos, std::size_t tail_len) {
    if (user >= st.code.users()) throw IndexOutOfRange("user index out of range");
    require_matrix_codings(st);
    const Field& f = st.code.field();
    const Matrix& g = st.code.generator();
    std::size_t ls = st.blocks[user].size();
    if (pos >= ls) throw IndexOutOfRange("deletion position out of range");
    if (tail_len > ls) throw IndexOutOfRange("tail longer than the block");
    std::size_t first_len = ls - tail_len;
    std::uint64_t sym_bits = ceil_log2(f.order());

    if (pos < first_len) {
        // Leading segment: Vandermonde-style single-coordinate update. The
        // coding matrix only loses the row; storage width is unchanged.
        std::uint64_t v = st.blocks[user][pos];
        std::vector<std::uint64_t> drow = st.config.users[user].coded_row(f, pos);
        for (auto& c : drow) c = f.mul(c, v);
        for (std::size_t t : st.code.connected_nodes(user)) {
            st.ledger.add(Endpoint::user(user), Endpoint::node(t), MsgKind::Value, 1, sym_bits);
            st.ledger.add(Endpoint::user(user), Endpoint::node(t), MsgKind::Position, 1,
                          position_bits(first_len));
            subtract_scaled(f, st.tensor, t, g.at(user, t), drow);
        }
        st.config.users[user].drop_row(pos);
        st.blocks[user].erase(st.blocks[user].begin() + static_cast<std::ptrdiff_t>(pos));
    } else {
        // Trailing segment: ship the re-aligned tail difference and keep the
        // block zero-padded at its current length.
        std::vector<std::uint64_t> old_tail(st.blocks[user].begin() +
                                                static_cast<std::ptrdiff_t>(first_len),
                                            st.blocks[user].end());
        st.blocks[user].erase(st.blocks[user].begin() + static_cast<std::ptrdiff_t>(pos));
        st.blocks[user].push_back(0);
        std::vector<std::uint64_t> diff(tail_len);
        for (std::size_t i = 0; i < tail_len; ++i)
            diff[i] = f.sub(old_tail[i], st.blocks[user][first_len + i]);
        std::size_t lc = st.tensor.len;
        for (std::size_t t : st.code.connected_nodes(user)) {
            st.ledger.add(Endpoint::user(user), Endpoint::node(t), MsgKind::SymbolSpan, tail_len,
                          tail_len * sym_bits);
            std::uint64_t c = g.at(user, t);
            for (std::size_t i = 0; i < tail_len; ++i) {
                if (diff[i] == 0) continue;
                std::size_t col = lc - tail_len + i;
                st.tensor.at(t, col) = f.sub(st.tensor.at(t, col), f.mul(c, diff[i]));
            }
        }
    }
    st.live_len[user] = st.blocks[user].size();
    st.ledger.advance_round();
}

void dedup_round(SyncState& st, const std::vector<std::uint64_t>& pattern) {
    require_matrix_codings(st);
    if (pattern.empty()) throw LengthMismatch("empty deduplication pattern");
    const Field& f = st.code.field();
    std::size_t e = pattern.size();
    std::uint64_t sym_bits = ceil_log2(f.order());

    for (std::size_t s = 0; s < st.code.users(); ++s)
        st.ledger.add(Endpoint::coordinator(), Endpoint::user(s), MsgKind::Value, e, e * sym_bits);
    for (std::size_t t = 0; t < st.code.n(); ++t)
        st.ledger.add(Endpoint::coordinator(), Endpoint::node(t), MsgKind::Value, e, e * sym_bits);

    std::vector<std::optional<std::size_t>> match(st.code.users());
    for (std::size_t s = 0; s < st.code.users(); ++s) {
        const auto& b = st.blocks[s];
        for (std::size_t start = 0; start + e <= b.size(); ++start) {
            bool hit = true;
            for (std::size_t i = 0; i < e && hit; ++i)
                hit = b[start + i] == pattern[i] % f.order();
            if (hit) {
                match[s] = start;
                break;
            }
        }
        if (match[s]) {
            std::uint64_t pos_bits = position_bits(st.blocks[s].size());
            for (std::size_t t : st.code.connected_nodes(s))
                st.ledger.add(Endpoint::user(s), Endpoint::node(t), MsgKind::Position, e,
                              e * pos_bits);
        }
    }

    // Delete the occurrence one symbol per iteration; after each deletion the
    // remainder of the occurrence sits at the same start index.
    for (std::size_t round = 0; round < e; ++round) {
        std::vector<std::vector<Deletion>> lists(st.code.users());
        for (std::size_t s = 0; s < st.code.users(); ++s)
            if (match[s]) lists[s] = {Deletion{*match[s], st.blocks[s][*match[s]]}};
        apply_v_deletions(st, lists);
    }
    st.ledger.advance_round();
}

double hybrid_worst_case_bits(std::size_t ell, std::uint64_t q, double gamma) {
    double lq = std::log2(static_cast<double>(q));
    double l = static_cast<double>(ell);
    double v_branch = std::log2(gamma * l) + lq;
    double t_branch = (1.0 - gamma) * l * lq;
    return std::max(v_branch, t_branch);
}

double hybrid_storage_bits(std::size_t ell, double gamma) {
    return std::max(std::log2(gamma * static_cast<double>(ell)), 0.0);
}

GammaChoice choose_gamma(std::size_t ell, std::uint64_t q, double budget) {
    if (budget <= 0) throw InfeasibleBudget("storage budget must be positive");
    double l = static_cast<double>(ell);
    double lq = std::log2(static_cast<double>(q));

    // Balance point of the two branch costs, found by bisection. The
    // left branch rises and the right branch falls in gamma, so the max is
    // minimized where they cross.
    auto residual = [&](double g) { return std::log2(g * l) + lq - (1.0 - g) * l * lq; };
    double lo = std::numeric_limits<double>::min(), hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (residual(mid) < 0)
            lo = mid;
        else
            hi = mid;
    }
    double root = 0.5 * (lo + hi);

    double cap = std::min(std::exp2(budget) / l, 1.0);
    double gamma = std::min(root, cap);

    GammaChoice out;
    out.gamma = gamma;
    out.balance_root = root;
    out.budget_cap = cap;
    // As-printed closed form, evaluated in the log domain to survive q^(l-1).
    double ln_arg = (l - 1.0) * std::log(static_cast<double>(q)) + std::log(lq);
    out.lambert_form = analysis::lambert_w_exp(ln_arg) / (l * lq);
    out.worst_case_bits = hybrid_worst_case_bits(ell, q, gamma);
    out.storage_bits = hybrid_storage_bits(ell, gamma);
    return out;
}

double aggregate_cost(std::size_t ell, std::uint64_t q, double theta, double p) {
    double l = static_cast<double>(ell);
    double lq = std::log2(static_cast<double>(q));
    double ll = std::log2(l);
    return ll + p * lq + (1.0 - p) * l * lq + theta * p * ll;
}

AggregateAssignment aggregate_assignment(std::size_t ell, std::uint64_t q, double theta,
                                         const std::vector<double>& probs) {
    if (ell < 2) throw IndexOutOfRange("block length must be at least 2");
    if (theta < 0) throw InfeasibleBudget("theta must be nonnegative");
    for (double p : probs)
        if (p < 0) throw InfeasibleBudget("probabilities must be nonnegative");
    double l = static_cast<double>(ell);
    double threshold = (l - 1.0) * std::log2(static_cast<double>(q)) / std::log2(l);
    AggregateAssignment out;
    out.threshold = threshold;
    out.use_intermediary = theta <= threshold;
    out.p = 0;
    if (out.use_intermediary)
        for (double ps : probs) out.p += ps;
    out.cost = aggregate_cost(ell, q, theta, out.p);
    return out;
}

}  // namespace codedsync
