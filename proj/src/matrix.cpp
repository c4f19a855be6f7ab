#include "codedsync/matrix.hpp"

#include <algorithm>
#include <unordered_set>

namespace codedsync {

Matrix::Matrix(const Field& f, std::size_t rows, std::size_t cols)
    : field_(f), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

Matrix Matrix::identity(const Field& f, std::size_t n) {
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m.cell(i, i) = 1;
    m.kind_ = MatrixKind::Identity;
    return m;
}

Matrix Matrix::permutation(const Field& f, const std::vector<std::size_t>& map) {
    Matrix m(f, map.size(), map.size());
    for (std::size_t i = 0; i < map.size(); ++i) {
        if (map[i] >= map.size()) throw IndexOutOfRange("permutation map entry out of range");
        m.cell(i, map[i]) = 1;
    }
    m.kind_ = MatrixKind::Permutation;
    return m;
}

Matrix Matrix::vandermonde(const Field& f, std::vector<std::uint64_t> nodes, std::size_t cols) {
    for (auto& v : nodes) v %= f.order();
    std::unordered_set<std::uint64_t> seen(nodes.begin(), nodes.end());
    if (seen.size() != nodes.size())
        throw DuplicateNodes("Vandermonde nodes must be pairwise distinct");
    Matrix m(f, nodes.size(), cols);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::uint64_t p = 1 % f.order();
        for (std::size_t j = 0; j < cols; ++j) {
            m.cell(i, j) = p;
            p = f.mul(p, nodes[i]);
        }
    }
    m.kind_ = MatrixKind::Vandermonde;
    m.vand_nodes_ = std::move(nodes);
    return m;
}

Matrix Matrix::vandermonde_standard(const Field& f, std::size_t rows, std::size_t cols) {
    if (rows > f.order())
        throw FieldTooSmall("need " + std::to_string(rows) + " distinct Vandermonde nodes in F_" +
                            std::to_string(f.order()));
    std::vector<std::uint64_t> nodes(rows);
    for (std::size_t i = 0; i < rows; ++i) nodes[i] = (i + 1) % f.order();
    return vandermonde(f, std::move(nodes), cols);
}

Matrix Matrix::cauchy(const Field& f, std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
    for (auto& v : a) v %= f.order();
    for (auto& v : b) v %= f.order();
    std::unordered_set<std::uint64_t> seen(a.begin(), a.end());
    seen.insert(b.begin(), b.end());
    if (seen.size() != a.size() + b.size())
        throw DuplicateNodes("Cauchy parameters must be pairwise distinct across rows and columns");
    Matrix m(f, a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) m.cell(i, j) = f.inv(f.sub(a[i], b[j]));
    m.kind_ = MatrixKind::Cauchy;
    m.cauchy_a_ = std::move(a);
    m.cauchy_b_ = std::move(b);
    return m;
}

Matrix Matrix::cauchy_standard(const Field& f, std::size_t l) {
    if (2 * l > f.order())
        throw FieldTooSmall("Cauchy matrix of size " + std::to_string(l) + " needs 2l <= q");
    std::vector<std::uint64_t> a(l), b(l);
    for (std::size_t i = 0; i < l; ++i) {
        a[i] = i;
        b[i] = l + i;
    }
    return cauchy(f, std::move(a), std::move(b));
}

Matrix Matrix::block_diag(const Matrix& top, const Matrix& bottom) {
    if (top.field_ != bottom.field_) throw MixedFields("block_diag blocks over different fields");
    Matrix m(top.field_, top.rows_ + bottom.rows_, top.cols_ + bottom.cols_);
    for (std::size_t i = 0; i < top.rows_; ++i)
        for (std::size_t j = 0; j < top.cols_; ++j) m.cell(i, j) = top.at(i, j);
    for (std::size_t i = 0; i < bottom.rows_; ++i)
        for (std::size_t j = 0; j < bottom.cols_; ++j)
            m.cell(top.rows_ + i, top.cols_ + j) = bottom.at(i, j);
    m.kind_ = MatrixKind::BlockDiag;
    return m;
}

Matrix Matrix::from_rows(const Field& f, const std::vector<std::vector<std::uint64_t>>& rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows[0].size();
    Matrix m(f, r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) throw DimensionMismatch("ragged row list");
        for (std::size_t j = 0; j < c; ++j) m.cell(i, j) = rows[i][j] % f.order();
    }
    return m;
}

std::vector<std::uint64_t> Matrix::row(std::size_t i) const {
    check_index(i, 0);
    return std::vector<std::uint64_t>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
}

void Matrix::check_index(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw IndexOutOfRange("matrix index out of range");
}

namespace {

// Gauss-Jordan elimination on an augmented matrix held as rows x (cols) grid.
// Returns the pivot column of each pivot row; stops after `limit` columns.
std::vector<std::size_t> row_reduce(const Field& f, std::vector<std::uint64_t>& g,
                                    std::size_t rows, std::size_t cols, std::size_t limit) {
    auto at = [&](std::size_t r, std::size_t c) -> std::uint64_t& { return g[r * cols + c]; };
    std::vector<std::size_t> pivot_cols;
    std::size_t prow = 0;
    for (std::size_t col = 0; col < limit && prow < rows; ++col) {
        std::size_t sel = prow;
        while (sel < rows && at(sel, col) == 0) ++sel;
        if (sel == rows) continue;
        if (sel != prow)
            for (std::size_t j = 0; j < cols; ++j) std::swap(at(sel, j), at(prow, j));
        std::uint64_t piv_inv = f.inv(at(prow, col));
        for (std::size_t j = 0; j < cols; ++j) at(prow, j) = f.mul(at(prow, j), piv_inv);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == prow) continue;
            std::uint64_t factor = at(r, col);
            if (factor == 0) continue;
            for (std::size_t j = 0; j < cols; ++j)
                at(r, j) = f.sub(at(r, j), f.mul(factor, at(prow, j)));
        }
        pivot_cols.push_back(col);
        ++prow;
    }
    return pivot_cols;
}

}  // namespace

Matrix Matrix::inverse() const {
    if (rows_ != cols_) throw DimensionMismatch("inverse requires a square matrix");
    std::size_t n = rows_;
    if (kind_ == MatrixKind::Identity) return *this;
    if (kind_ == MatrixKind::Permutation) {
        Matrix inv(field_, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (at(i, j) == 1) inv.cell(j, i) = 1;
        inv.kind_ = MatrixKind::Permutation;
        return inv;
    }
    std::size_t w = 2 * n;
    std::vector<std::uint64_t> g(n * w, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) g[i * w + j] = at(i, j);
        g[i * w + n + i] = 1;
    }
    auto pivots = row_reduce(field_, g, n, w, n);
    if (pivots.size() != n) throw Singular("matrix is singular");
    Matrix inv(field_, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv.cell(i, j) = g[i * w + n + j];
    return inv;
}

Matrix Matrix::right_inverse() const {
    if (rows_ > cols_) throw RankDeficient("right inverse needs rows <= cols");
    if (rows_ == cols_) return inverse();
    std::size_t m = rows_, w = cols_ + m;
    std::vector<std::uint64_t> g(m * w, 0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) g[i * w + j] = at(i, j);
        g[i * w + cols_ + i] = 1;
    }
    auto pivots = row_reduce(field_, g, m, w, cols_);
    if (pivots.size() != m) throw RankDeficient("matrix does not have full row rank");
    // With E * M in reduced form, a solution of M * r = e_j supported on the
    // pivot columns is r[pivot(i)] = E[i][j].
    Matrix r(field_, cols_, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) r.cell(pivots[i], j) = g[i * w + cols_ + j];
    return r;
}

Matrix Matrix::mul(const Matrix& other) const {
    if (field_ != other.field_) throw MixedFields("matrix product over different fields");
    if (cols_ != other.rows_) throw DimensionMismatch("inner dimensions disagree");
    Matrix out(field_, rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            std::uint64_t v = at(i, k);
            if (v == 0) continue;
            for (std::size_t j = 0; j < other.cols_; ++j)
                out.cell(i, j) = field_.add(out.cell(i, j), field_.mul(v, other.at(k, j)));
        }
    }
    return out;
}

Matrix Matrix::delete_row(std::size_t i) const {
    check_index(i, 0);
    Matrix out(field_, rows_ - 1, cols_);
    for (std::size_t r = 0, o = 0; r < rows_; ++r) {
        if (r == i) continue;
        for (std::size_t j = 0; j < cols_; ++j) out.cell(o, j) = at(r, j);
        ++o;
    }
    if (kind_ == MatrixKind::Vandermonde) {
        out.kind_ = MatrixKind::Vandermonde;
        out.vand_nodes_ = vand_nodes_;
        out.vand_nodes_.erase(out.vand_nodes_.begin() + static_cast<std::ptrdiff_t>(i));
    } else if (kind_ == MatrixKind::Cauchy) {
        out.kind_ = MatrixKind::Cauchy;
        out.cauchy_a_ = cauchy_a_;
        out.cauchy_b_ = cauchy_b_;
        out.cauchy_a_.erase(out.cauchy_a_.begin() + static_cast<std::ptrdiff_t>(i));
    }
    return out;
}

Matrix Matrix::delete_col(std::size_t j) const {
    check_index(0, j);
    Matrix out(field_, rows_, cols_ - 1);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0, o = 0; c < cols_; ++c) {
            if (c == j) continue;
            out.cell(r, o++) = at(r, c);
        }
    if (kind_ == MatrixKind::Vandermonde && j == cols_ - 1) {
        // Dropping the trailing column keeps powers 0..cols-2.
        out.kind_ = MatrixKind::Vandermonde;
        out.vand_nodes_ = vand_nodes_;
    } else if (kind_ == MatrixKind::Cauchy) {
        out.kind_ = MatrixKind::Cauchy;
        out.cauchy_a_ = cauchy_a_;
        out.cauchy_b_ = cauchy_b_;
        out.cauchy_b_.erase(out.cauchy_b_.begin() + static_cast<std::ptrdiff_t>(j));
    }
    return out;
}

Matrix Matrix::delete_last_cols(std::size_t m) const {
    if (m > cols_) throw IndexOutOfRange("cannot delete more columns than present");
    Matrix out = *this;
    for (std::size_t i = 0; i < m; ++i) out = out.delete_col(out.cols_ - 1);
    return out;
}

Matrix Matrix::move_row(std::size_t from, std::size_t to) const {
    check_index(from, 0);
    check_index(to, 0);
    Matrix out = *this;
    std::vector<std::uint64_t> moved = row(from);
    std::vector<std::uint64_t> rest;
    rest.reserve(a_.size());
    for (std::size_t r = 0; r < rows_; ++r) {
        if (r == from) continue;
        for (std::size_t j = 0; j < cols_; ++j) rest.push_back(at(r, j));
    }
    rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(to * cols_), moved.begin(), moved.end());
    out.a_ = std::move(rest);
    if (kind_ == MatrixKind::Permutation || kind_ == MatrixKind::Identity)
        out.kind_ = MatrixKind::Permutation;
    else
        out.kind_ = MatrixKind::General;
    return out;
}

bool Matrix::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](std::uint64_t v) { return v == 0; });
}

std::vector<std::uint64_t> vec_mat_mul(std::span<const std::uint64_t> x, const Matrix& m) {
    if (x.size() != m.rows()) throw DimensionMismatch("vector length must equal matrix rows");
    const Field& f = m.field();
    std::vector<std::uint64_t> y(m.cols(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::uint64_t v = x[i] % f.order();
        if (v == 0) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) y[j] = f.add(y[j], f.mul(v, m.at(i, j)));
    }
    return y;
}

PermutationCompact PermutationCompact::identity(std::size_t n) {
    PermutationCompact p;
    p.map.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.map[i] = i;
    return p;
}

void PermutationCompact::move_to_back(std::size_t i) {
    if (i >= map.size()) throw IndexOutOfRange("permutation row out of range");
    std::size_t v = map[i];
    map.erase(map.begin() + static_cast<std::ptrdiff_t>(i));
    map.push_back(v);
}

void PermutationCompact::move_back_to(std::size_t i) {
    if (i >= map.size()) throw IndexOutOfRange("permutation row out of range");
    std::size_t v = map.back();
    map.pop_back();
    map.insert(map.begin() + static_cast<std::ptrdiff_t>(i), v);
}

PermutationCompact PermutationCompact::moved(std::size_t from, std::size_t to) const {
    if (from >= map.size() || to >= map.size())
        throw IndexOutOfRange("permutation row out of range");
    PermutationCompact out = *this;
    std::size_t v = out.map[from];
    out.map.erase(out.map.begin() + static_cast<std::ptrdiff_t>(from));
    out.map.insert(out.map.begin() + static_cast<std::ptrdiff_t>(to), v);
    return out;
}

PermutationCompact PermutationCompact::inverse() const {
    PermutationCompact out;
    out.map.resize(map.size());
    for (std::size_t i = 0; i < map.size(); ++i) out.map[map[i]] = i;
    return out;
}

Matrix PermutationCompact::materialize(const Field& f) const {
    return Matrix::permutation(f, map);
}

bool PermutationCompact::is_valid() const {
    std::vector<bool> seen(map.size(), false);
    for (std::size_t v : map) {
        if (v >= map.size() || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

}  // namespace codedsync
