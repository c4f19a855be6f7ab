#pragma once

#include <cstdint>
#include <vector>

#include "codedsync/matrix.hpp"

namespace codedsync {

/// Per-node storage for the block-extended code: an n x l grid of field
/// values. Slice i (column i across all nodes) is the base encoding of the
/// i-th coordinates of all data blocks. The per-node payload width alpha is 1
/// for the MDS instances shipped here.
struct StorageTensor {
    std::size_t nodes = 0;
    std::size_t len = 0;
    std::vector<std::uint64_t> cells;  // row-major nodes x len

    StorageTensor() = default;
    StorageTensor(std::size_t n, std::size_t l) : nodes(n), len(l), cells(n * l, 0) {}

    std::uint64_t at(std::size_t t, std::size_t i) const { return cells[t * len + i]; }
    std::uint64_t& at(std::size_t t, std::size_t i) { return cells[t * len + i]; }
    std::vector<std::uint64_t> node_row(std::size_t t) const {
        return std::vector<std::uint64_t>(cells.begin() + t * len, cells.begin() + (t + 1) * len);
    }

    void drop_col(std::size_t j);
    void drop_last_cols(std::size_t m);

    bool operator==(const StorageTensor&) const = default;
};

/// An (n, k, d, alpha, B) storage code given by a systematic k x n generator
/// over a prime field. The shipped instances are MDS with alpha = 1, B = k,
/// d = k: reconstruction from any k nodes doubles as exact repair.
class CodeSpec {
public:
    /// [k+1, k] code whose parity node stores the sum of all blocks.
    static CodeSpec single_parity(std::size_t k, std::uint64_t q);
    /// Systematic Reed-Solomon code from evaluation at n distinct points.
    static CodeSpec rs_systematic(std::size_t n, std::size_t k, std::uint64_t q);

    std::size_t n() const { return n_; }
    std::size_t k() const { return k_; }
    std::size_t d() const { return k_; }
    std::size_t users() const { return k_; }  // B = k for MDS instances
    const Field& field() const { return generator_.field(); }
    const Matrix& generator() const { return generator_; }

    /// Nodes whose content depends on user s's data.
    std::vector<std::size_t> connected_nodes(std::size_t s) const;

    /// Every k columns of the generator are nonsingular. Used by tests.
    bool is_mds() const;

private:
    CodeSpec(std::size_t n, std::size_t k, Matrix g);
    std::size_t n_, k_;
    Matrix generator_;
};

/// Slice-wise encoding of B equal-length blocks into an n x l tensor.
StorageTensor encode_block(const CodeSpec& code,
                           const std::vector<std::vector<std::uint64_t>>& blocks);

/// Recover all B blocks from the tensor rows indexed by T (|T| = k).
std::vector<std::vector<std::uint64_t>> reconstruct_block(const CodeSpec& code,
                                                          const std::vector<std::size_t>& t_set,
                                                          const StorageTensor& tensor);

/// Rebuild the content of node t from the rows indexed by T (t not in T).
std::vector<std::uint64_t> repair_node(const CodeSpec& code, std::size_t t,
                                       const std::vector<std::size_t>& t_set,
                                       const StorageTensor& tensor);

}  // namespace codedsync
