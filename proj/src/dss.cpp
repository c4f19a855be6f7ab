#include "codedsync/dss.hpp"

#include <algorithm>

namespace codedsync {

void StorageTensor::drop_col(std::size_t j) {
    if (j >= len) throw IndexOutOfRange("tensor column out of range");
    std::vector<std::uint64_t> next(nodes * (len - 1));
    for (std::size_t t = 0; t < nodes; ++t) {
        std::size_t o = t * (len - 1);
        for (std::size_t i = 0; i < len; ++i) {
            if (i == j) continue;
            next[o++] = at(t, i);
        }
    }
    cells = std::move(next);
    --len;
}

void StorageTensor::drop_last_cols(std::size_t m) {
    if (m > len) throw IndexOutOfRange("tensor narrower than requested drop");
    std::vector<std::uint64_t> next(nodes * (len - m));
    for (std::size_t t = 0; t < nodes; ++t)
        for (std::size_t i = 0; i < len - m; ++i) next[t * (len - m) + i] = at(t, i);
    cells = std::move(next);
    len -= m;
}

CodeSpec::CodeSpec(std::size_t n, std::size_t k, Matrix g) : n_(n), k_(k), generator_(std::move(g)) {}

CodeSpec CodeSpec::single_parity(std::size_t k, std::uint64_t q) {
    Field f = make_field(q);
    Matrix g(f, k, k + 1);
    for (std::size_t s = 0; s < k; ++s) {
        g.set(s, s, 1);
        g.set(s, k, 1);
    }
    return CodeSpec(k + 1, k, std::move(g));
}

CodeSpec CodeSpec::rs_systematic(std::size_t n, std::size_t k, std::uint64_t q) {
    Field f = make_field(q);
    if (n > q)
        throw FieldTooSmall("Reed-Solomon over F_" + std::to_string(q) + " supports at most q nodes");
    if (k > n) throw DimensionMismatch("k exceeds n");
    // Evaluation-style generator at points 0..n-1, then systematized so the
    // first k columns form the identity. Column operations preserve the MDS
    // property of the evaluation code.
    std::vector<std::uint64_t> pts(n);
    for (std::size_t j = 0; j < n; ++j) pts[j] = j % q;
    Matrix eval(f, k, n);
    for (std::size_t j = 0; j < n; ++j) {
        std::uint64_t p = 1 % q;
        for (std::size_t i = 0; i < k; ++i) {
            eval.set(i, j, p);
            p = f.mul(p, pts[j]);
        }
    }
    Matrix lead(f, k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) lead.set(i, j, eval.at(i, j));
    Matrix g = lead.inverse().mul(eval);
    return CodeSpec(n, k, std::move(g));
}

std::vector<std::size_t> CodeSpec::connected_nodes(std::size_t s) const {
    if (s >= k_) throw IndexOutOfRange("user index out of range");
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < n_; ++t)
        if (generator_.at(s, t) != 0) out.push_back(t);
    return out;
}

bool CodeSpec::is_mds() const {
    // Check every k-subset of columns for nonsingularity.
    std::vector<std::size_t> idx(k_);
    for (std::size_t i = 0; i < k_; ++i) idx[i] = i;
    const Field& f = field();
    while (true) {
        Matrix sub(f, k_, k_);
        for (std::size_t i = 0; i < k_; ++i)
            for (std::size_t j = 0; j < k_; ++j) sub.set(i, j, generator_.at(i, idx[j]));
        try {
            sub.inverse();
        } catch (const Singular&) {
            return false;
        }
        // next combination
        std::size_t i = k_;
        while (i > 0) {
            --i;
            if (idx[i] != i + n_ - k_) {
                ++idx[i];
                for (std::size_t j = i + 1; j < k_; ++j) idx[j] = idx[j - 1] + 1;
                break;
            }
            if (i == 0) return true;
        }
    }
}

StorageTensor encode_block(const CodeSpec& code,
                           const std::vector<std::vector<std::uint64_t>>& blocks) {
    if (blocks.size() != code.users()) throw LengthMismatch("expected one block per user");
    std::size_t l = blocks.empty() ? 0 : blocks[0].size();
    for (const auto& b : blocks)
        if (b.size() != l) throw LengthMismatch("blocks must share one length");
    const Field& f = code.field();
    const Matrix& g = code.generator();
    StorageTensor tensor(code.n(), l);
    for (std::size_t s = 0; s < code.users(); ++s) {
        for (std::size_t t = 0; t < code.n(); ++t) {
            std::uint64_t c = g.at(s, t);
            if (c == 0) continue;
            for (std::size_t i = 0; i < l; ++i)
                tensor.at(t, i) = f.add(tensor.at(t, i), f.mul(c, blocks[s][i] % f.order()));
        }
    }
    return tensor;
}

namespace {

// Inverse of the k x k system mapping blocks to the tensor rows in t_set.
Matrix decoding_matrix(const CodeSpec& code, const std::vector<std::size_t>& t_set) {
    const Field& f = code.field();
    Matrix sys(f, t_set.size(), code.users());
    for (std::size_t r = 0; r < t_set.size(); ++r) {
        if (t_set[r] >= code.n()) throw IndexOutOfRange("node index out of range");
        for (std::size_t s = 0; s < code.users(); ++s)
            sys.set(r, s, code.generator().at(s, t_set[r]));
    }
    return sys.inverse();
}

}  // namespace

std::vector<std::vector<std::uint64_t>> reconstruct_block(const CodeSpec& code,
                                                          const std::vector<std::size_t>& t_set,
                                                          const StorageTensor& tensor) {
    if (t_set.size() != code.k()) throw BadSubsetSize("reconstruction needs exactly k nodes");
    const Field& f = code.field();
    Matrix dec = decoding_matrix(code, t_set);
    std::vector<std::vector<std::uint64_t>> blocks(code.users(),
                                                   std::vector<std::uint64_t>(tensor.len, 0));
    for (std::size_t i = 0; i < tensor.len; ++i) {
        for (std::size_t s = 0; s < code.users(); ++s) {
            std::uint64_t acc = 0;
            for (std::size_t r = 0; r < t_set.size(); ++r)
                acc = f.add(acc, f.mul(dec.at(s, r), tensor.at(t_set[r], i)));
            blocks[s][i] = acc;
        }
    }
    return blocks;
}

std::vector<std::uint64_t> repair_node(const CodeSpec& code, std::size_t t,
                                       const std::vector<std::size_t>& t_set,
                                       const StorageTensor& tensor) {
    if (t_set.size() != code.d()) throw BadSubsetSize("repair needs exactly d nodes");
    if (t >= code.n()) throw IndexOutOfRange("node index out of range");
    if (std::find(t_set.begin(), t_set.end(), t) != t_set.end())
        throw BadSubsetSize("repair set must exclude the failed node");
    const Field& f = code.field();
    auto blocks = reconstruct_block(code, t_set, tensor);
    std::vector<std::uint64_t> out(tensor.len, 0);
    for (std::size_t s = 0; s < code.users(); ++s) {
        std::uint64_t c = code.generator().at(s, t);
        if (c == 0) continue;
        for (std::size_t i = 0; i < tensor.len; ++i)
            out[i] = f.add(out[i], f.mul(c, blocks[s][i]));
    }
    return out;
}

}  // namespace codedsync
