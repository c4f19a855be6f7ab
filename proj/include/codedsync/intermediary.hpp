#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "codedsync/dss.hpp"

namespace codedsync {

/// The per-user coding matrix A^(s) applied to a block before DSS encoding.
/// Permutation maps are kept in compact form; every other structure is a
/// Matrix. The (right) inverse needed for reconstruction is computed once per
/// protocol round and cached; any mutation drops the cache.
class UserCoding {
public:
    static UserCoding permutation(std::size_t n);
    static UserCoding matrix(Matrix m);

    bool is_permutation() const { return perm_.has_value(); }
    const PermutationCompact& perm() const { return *perm_; }
    const Matrix& mat() const { return *mat_; }

    /// Block length accepted (rows of A).
    std::size_t in_len() const;
    /// Coded length produced (columns of A).
    std::size_t out_len() const;

    /// y = x * A.
    std::vector<std::uint64_t> apply(const Field& f, std::span<const std::uint64_t> x) const;
    /// Row i of A.
    std::vector<std::uint64_t> coded_row(const Field& f, std::size_t i) const;
    /// x = y * A^{-1}, using the right inverse when A is rectangular.
    /// Throws Singular if A lost invertibility (protocol corruption).
    std::vector<std::uint64_t> unapply(const Field& f, std::span<const std::uint64_t> y) const;

    // Protocol updates. Each invalidates the cached inverse.
    void perm_delete(std::size_t i);  // row i -> last row
    void perm_insert(std::size_t i);  // last row -> row i
    void drop_row(std::size_t i);
    void drop_col(std::size_t j);
    void drop_last_cols(std::size_t m);

private:
    std::optional<PermutationCompact> perm_;
    std::optional<Matrix> mat_;
    mutable std::shared_ptr<const Matrix> inv_cache_;
};

/// The list of intermediary matrices, one per user, plus the systematic-mode
/// switch. In systematic mode the first k nodes store raw blocks and only the
/// parity nodes see coded data.
struct IntermediaryConfig {
    std::vector<UserCoding> users;
    bool systematic = false;

    /// Common coded length (columns of every A^(s)).
    std::size_t storage_len() const;

    static IntermediaryConfig identity(const Field& f, std::size_t users, std::size_t l);
    static IntermediaryConfig permutations(std::size_t users, std::size_t l);
    static IntermediaryConfig shared_matrix(std::size_t users, const Matrix& m);
};

/// Encode with the intermediary layer: the DSS encoding of (x^(s) A^(s))_s.
StorageTensor encode_star(const CodeSpec& code, const IntermediaryConfig& cfg,
                          const std::vector<std::vector<std::uint64_t>>& blocks);

/// Invert the intermediary layer after block reconstruction from nodes in T.
std::vector<std::vector<std::uint64_t>> reconstruct_star(const CodeSpec& code,
                                                         const IntermediaryConfig& cfg,
                                                         const std::vector<std::size_t>& t_set,
                                                         const StorageTensor& tensor);

/// Node repair; the intermediary layer needs no inversion for repair.
std::vector<std::uint64_t> repair_star(const CodeSpec& code, const IntermediaryConfig& cfg,
                                       std::size_t t, const std::vector<std::size_t>& t_set,
                                       const StorageTensor& tensor);

}  // namespace codedsync
