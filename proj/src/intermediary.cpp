#include "codedsync/intermediary.hpp"

namespace codedsync {

UserCoding UserCoding::permutation(std::size_t n) {
    UserCoding c;
    c.perm_ = PermutationCompact::identity(n);
    return c;
}

UserCoding UserCoding::matrix(Matrix m) {
    UserCoding c;
    c.mat_ = std::move(m);
    return c;
}

std::size_t UserCoding::in_len() const { return perm_ ? perm_->size() : mat_->rows(); }

std::size_t UserCoding::out_len() const { return perm_ ? perm_->size() : mat_->cols(); }

std::vector<std::uint64_t> UserCoding::apply(const Field& f,
                                             std::span<const std::uint64_t> x) const {
    if (x.size() != in_len()) throw DimensionMismatch("block length does not match coding matrix");
    if (perm_) {
        std::vector<std::uint64_t> y(perm_->size(), 0);
        for (std::size_t i = 0; i < x.size(); ++i) y[perm_->map[i]] = x[i] % f.order();
        return y;
    }
    return vec_mat_mul(x, *mat_);
}

std::vector<std::uint64_t> UserCoding::coded_row(const Field& f, std::size_t i) const {
    if (i >= in_len()) throw IndexOutOfRange("coding matrix row out of range");
    if (perm_) {
        std::vector<std::uint64_t> r(perm_->size(), 0);
        r[perm_->map[i]] = 1 % f.order();
        return r;
    }
    return mat_->row(i);
}

std::vector<std::uint64_t> UserCoding::unapply(const Field& f,
                                               std::span<const std::uint64_t> y) const {
    if (y.size() != out_len()) throw DimensionMismatch("coded length does not match coding matrix");
    if (perm_) {
        std::vector<std::uint64_t> x(perm_->size(), 0);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = y[perm_->map[i]] % f.order();
        return x;
    }
    if (mat_->kind() == MatrixKind::Identity) return std::vector<std::uint64_t>(y.begin(), y.end());
    if (!inv_cache_) {
        try {
            inv_cache_ = std::make_shared<const Matrix>(
                mat_->rows() == mat_->cols() ? mat_->inverse() : mat_->right_inverse());
        } catch (const RankDeficient&) {
            throw Singular("coding matrix lost right invertibility");
        }
    }
    return vec_mat_mul(y, *inv_cache_);
}

void UserCoding::perm_delete(std::size_t i) {
    if (!perm_) throw DimensionMismatch("not a permutation coding");
    perm_->move_to_back(i);
    inv_cache_.reset();
}

void UserCoding::perm_insert(std::size_t i) {
    if (!perm_) throw DimensionMismatch("not a permutation coding");
    perm_->move_back_to(i);
    inv_cache_.reset();
}

void UserCoding::drop_row(std::size_t i) {
    if (!mat_) throw DimensionMismatch("not a matrix coding");
    mat_ = mat_->delete_row(i);
    inv_cache_.reset();
}

void UserCoding::drop_col(std::size_t j) {
    if (!mat_) throw DimensionMismatch("not a matrix coding");
    mat_ = mat_->delete_col(j);
    inv_cache_.reset();
}

void UserCoding::drop_last_cols(std::size_t m) {
    if (!mat_) throw DimensionMismatch("not a matrix coding");
    if (m == 0) return;
    mat_ = mat_->delete_last_cols(m);
    inv_cache_.reset();
}

std::size_t IntermediaryConfig::storage_len() const {
    std::size_t l = users.empty() ? 0 : users[0].out_len();
    for (const auto& u : users)
        if (u.out_len() != l) throw DimensionMismatch("coded lengths disagree across users");
    return l;
}

IntermediaryConfig IntermediaryConfig::identity(const Field& f, std::size_t users, std::size_t l) {
    IntermediaryConfig cfg;
    for (std::size_t s = 0; s < users; ++s) cfg.users.push_back(UserCoding::matrix(Matrix::identity(f, l)));
    return cfg;
}

IntermediaryConfig IntermediaryConfig::permutations(std::size_t users, std::size_t l) {
    IntermediaryConfig cfg;
    for (std::size_t s = 0; s < users; ++s) cfg.users.push_back(UserCoding::permutation(l));
    return cfg;
}

IntermediaryConfig IntermediaryConfig::shared_matrix(std::size_t users, const Matrix& m) {
    IntermediaryConfig cfg;
    for (std::size_t s = 0; s < users; ++s) cfg.users.push_back(UserCoding::matrix(m));
    return cfg;
}

namespace {

std::vector<std::uint64_t> padded(const std::vector<std::uint64_t>& v, std::size_t l) {
    std::vector<std::uint64_t> out(v);
    out.resize(l, 0);
    return out;
}

}  // namespace

StorageTensor encode_star(const CodeSpec& code, const IntermediaryConfig& cfg,
                          const std::vector<std::vector<std::uint64_t>>& blocks) {
    if (blocks.size() != code.users() || cfg.users.size() != code.users())
        throw DimensionMismatch("expected one block and one coding matrix per user");
    const Field& f = code.field();
    std::size_t l = cfg.storage_len();
    std::vector<std::vector<std::uint64_t>> coded(code.users());
    for (std::size_t s = 0; s < code.users(); ++s) coded[s] = cfg.users[s].apply(f, blocks[s]);
    StorageTensor tensor = encode_block(code, coded);
    if (cfg.systematic) {
        for (std::size_t s = 0; s < code.k(); ++s) {
            auto raw = padded(blocks[s], l);
            for (std::size_t i = 0; i < l; ++i) tensor.at(s, i) = raw[i] % f.order();
        }
    }
    return tensor;
}

namespace {

// In systematic mode nodes below k hold raw blocks; push them through their
// coding matrix so the plain decoder applies.
StorageTensor with_systematic_rows_coded(const CodeSpec& code, const IntermediaryConfig& cfg,
                                         const std::vector<std::size_t>& t_set,
                                         const StorageTensor& tensor) {
    StorageTensor work = tensor;
    const Field& f = code.field();
    for (std::size_t t : t_set) {
        if (t >= code.k()) continue;
        std::vector<std::uint64_t> raw = tensor.node_row(t);
        raw.resize(cfg.users[t].in_len());
        auto coded = cfg.users[t].apply(f, raw);
        for (std::size_t i = 0; i < tensor.len; ++i) work.at(t, i) = coded[i];
    }
    return work;
}

}  // namespace

std::vector<std::vector<std::uint64_t>> reconstruct_star(const CodeSpec& code,
                                                         const IntermediaryConfig& cfg,
                                                         const std::vector<std::size_t>& t_set,
                                                         const StorageTensor& tensor) {
    const Field& f = code.field();
    std::vector<std::vector<std::uint64_t>> coded;
    if (cfg.systematic) {
        coded = reconstruct_block(code, t_set, with_systematic_rows_coded(code, cfg, t_set, tensor));
    } else {
        coded = reconstruct_block(code, t_set, tensor);
    }
    std::vector<std::vector<std::uint64_t>> blocks(code.users());
    for (std::size_t s = 0; s < code.users(); ++s) blocks[s] = cfg.users[s].unapply(f, coded[s]);
    return blocks;
}

std::vector<std::uint64_t> repair_star(const CodeSpec& code, const IntermediaryConfig& cfg,
                                       std::size_t t, const std::vector<std::size_t>& t_set,
                                       const StorageTensor& tensor) {
    if (!cfg.systematic) return repair_node(code, t, t_set, tensor);
    // Decode the coded blocks, then rebuild node t in its native form.
    if (t_set.size() != code.d()) throw BadSubsetSize("repair needs exactly d nodes");
    StorageTensor work = with_systematic_rows_coded(code, cfg, t_set, tensor);
    if (t < code.k()) {
        auto coded = reconstruct_block(code, t_set, work);
        auto raw = cfg.users[t].unapply(code.field(), coded[t]);
        raw.resize(tensor.len, 0);
        return raw;
    }
    return repair_node(code, t, t_set, work);
}

}  // namespace codedsync
