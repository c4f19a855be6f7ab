#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "codedsync/gf.hpp"

namespace codedsync {

/// Structural tag carried by a Matrix. Operations preserve the tag only when
/// they provably preserve the structure; anything else degrades to General.
enum class MatrixKind { General, Identity, Permutation, Vandermonde, Cauchy, BlockDiag };

/// Dense row-major matrix over a prime field, with a structural kind tag.
/// Matrices are immutable values: every operation returns a new matrix.
class Matrix {
public:
    Matrix(const Field& f, std::size_t rows, std::size_t cols);

    static Matrix identity(const Field& f, std::size_t n);
    static Matrix permutation(const Field& f, const std::vector<std::size_t>& map);
    /// entry(i,j) = nodes[i]^j for j = 0..cols-1 (first column all ones).
    static Matrix vandermonde(const Field& f, std::vector<std::uint64_t> nodes, std::size_t cols);
    /// Square Vandermonde on nodes 1, 2, ..., rows (mod q).
    static Matrix vandermonde_standard(const Field& f, std::size_t rows, std::size_t cols);
    /// entry(i,j) = (a[i] - b[j])^{-1}; all 2l parameters pairwise distinct.
    static Matrix cauchy(const Field& f, std::vector<std::uint64_t> a, std::vector<std::uint64_t> b);
    /// Square Cauchy on a = 0..l-1, b = l..2l-1; needs 2l <= q.
    static Matrix cauchy_standard(const Field& f, std::size_t l);
    static Matrix block_diag(const Matrix& top, const Matrix& bottom);
    static Matrix from_rows(const Field& f, const std::vector<std::vector<std::uint64_t>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Field& field() const { return field_; }
    MatrixKind kind() const { return kind_; }

    std::uint64_t at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, std::uint64_t v) {
        a_[r * cols_ + c] = v;
        kind_ = MatrixKind::General;
    }
    std::vector<std::uint64_t> row(std::size_t i) const;

    /// Kind metadata; valid only for the matching kind.
    const std::vector<std::uint64_t>& vandermonde_nodes() const { return vand_nodes_; }
    const std::vector<std::uint64_t>& cauchy_row_params() const { return cauchy_a_; }
    const std::vector<std::uint64_t>& cauchy_col_params() const { return cauchy_b_; }

    /// Gauss-Jordan inverse with first-nonzero pivoting. Throws Singular.
    Matrix inverse() const;
    /// Right inverse R with (*this) * R = I_rows; needs full row rank.
    Matrix right_inverse() const;

    Matrix mul(const Matrix& other) const;
    Matrix delete_row(std::size_t i) const;
    Matrix delete_col(std::size_t j) const;
    Matrix delete_last_cols(std::size_t m) const;
    /// Remove row `from` and reinsert it so it lands at index `to`.
    Matrix move_row(std::size_t from, std::size_t to) const;

    bool is_zero() const;
    bool operator==(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && a_ == other.a_;
    }
    bool operator!=(const Matrix& other) const { return !(*this == other); }

private:
    Field field_;
    std::size_t rows_, cols_;
    std::vector<std::uint64_t> a_;
    MatrixKind kind_ = MatrixKind::General;
    std::vector<std::uint64_t> vand_nodes_;
    std::vector<std::uint64_t> cauchy_a_, cauchy_b_;

    std::uint64_t& cell(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    void check_index(std::size_t r, std::size_t c) const;
};

/// y = x * M for a row vector x of length M.rows().
std::vector<std::uint64_t> vec_mat_mul(std::span<const std::uint64_t> x, const Matrix& m);

/// Permutation matrix stored as its row->column map: map[i] is the column of
/// the single 1 in row i. Used where a full l x l grid would be wasteful.
struct PermutationCompact {
    std::vector<std::size_t> map;

    static PermutationCompact identity(std::size_t n);
    std::size_t size() const { return map.size(); }

    /// Remove entry i and append it at the back (row i moved to the last row).
    void move_to_back(std::size_t i);
    /// Remove the last entry and reinsert it at index i.
    void move_back_to(std::size_t i);
    /// Generic row move, mirroring Matrix::move_row.
    PermutationCompact moved(std::size_t from, std::size_t to) const;

    PermutationCompact inverse() const;
    Matrix materialize(const Field& f) const;
    bool is_valid() const;

    bool operator==(const PermutationCompact&) const = default;
};

}  // namespace codedsync
