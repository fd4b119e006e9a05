#ifndef MSF_GRID_SIM_HPP
#define MSF_GRID_SIM_HPP

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "msf/adjacency_matrix.hpp"
#include "msf/algebra.hpp"
#include "msf/cost_counters.hpp"
#include "msf/dense_vector.hpp"
#include "msf/kernels.hpp"

// Deterministic simulation of the distributed kernel schedule: the matrix
// lives on a sqrt(p) x sqrt(p) grid in contiguous blocks, vectors on a 1D
// p-rank layout. Collectives are modeled analytically as word volumes, with
// fixed-size (padded) blocks so every participant moves the same amount:
//
//   redistribute: each of the sqrt(p) block roots gathers the part of its
//                 block it does not own, ceil(n/sqrt(p)) - ceil(n/p) words;
//                 counted for every input vector and the scattered output
//   broadcast:    block root sends ceil(n/sqrt(p)) words to each of the
//                 sqrt(p)-1 peers in its grid row/column, per input vector
//   reduce:       mirror of broadcast for the output blocks
//   all-gather:   (p-1) * entries * 2 words (vertex id + parent id)
//
// Outputs are computed in the same per-row ascending-column fold as the
// in-process kernels, so they match them bitwise.

namespace msf {
// Vertices whose parent changed, mapped to the new parent.
using ChangeSet = std::unordered_map<VertexId, VertexId>;
}  // namespace msf

namespace msf::grid {

struct GridLayout {
  std::int64_t n = 0;
  std::int64_t ranks = 1;
  std::int64_t dim = 1;        // sqrt(ranks)
  std::int64_t row_block = 0;  // ceil(n / dim), 2D block edge
  std::int64_t vec_block = 0;  // ceil(n / ranks), 1D block size

  // Throws std::invalid_argument unless ranks is a perfect square <= n^2.
  static GridLayout make(std::int64_t n, std::int64_t ranks);

  std::int64_t grid_row_of(VertexId v) const {
    return row_block > 0 ? (v - 1) / row_block : 0;
  }
  std::int64_t rank_of_element(VertexId v) const {
    return vec_block > 0 ? (v - 1) / vec_block : 0;
  }
  VertexId row_begin(std::int64_t r) const { return r * row_block + 1; }
  VertexId row_end(std::int64_t r) const {  // inclusive, may be < begin when empty
    const VertexId e = (r + 1) * row_block;
    return e < n ? e : n;
  }
};

// The matrix split into dim x dim blocks, each a small CSR over the block's
// local rows. Reassembling the blocks reproduces the original matrix.
class PartitionedMatrix {
 public:
  struct Block {
    std::vector<std::int64_t> row_ptr;  // local rows + 1
    std::vector<AdjacencyMatrix::Nonzero> entries;
  };

  PartitionedMatrix(const AdjacencyMatrix& A, const GridLayout& layout);

  const GridLayout& layout() const { return layout_; }
  std::int64_t stored_nonzeros() const { return nnz_; }
  const Block& block(std::int64_t r, std::int64_t s) const {
    return blocks_[static_cast<std::size_t>(r * layout_.dim + s)];
  }

  AdjacencyMatrix reassemble() const;

 private:
  GridLayout layout_;
  std::vector<Block> blocks_;
  std::int64_t nnz_ = 0;
};

namespace detail {

inline std::uint64_t padded_gather_words(const GridLayout& L) {
  const std::int64_t d = L.row_block - L.vec_block;
  return d > 0 ? static_cast<std::uint64_t>(L.dim) * static_cast<std::uint64_t>(d) : 0;
}

inline void charge_vector_phases(const GridLayout& L, std::uint64_t in_vectors,
                                 std::uint64_t visited, CostCounters& c) {
  const auto dim = static_cast<std::uint64_t>(L.dim);
  const auto blk = static_cast<std::uint64_t>(L.row_block);
  const std::uint64_t bcast_per_vector = dim * (dim - 1) * blk;
  c.words_redistributed += (in_vectors + 1) * padded_gather_words(L);
  c.words_broadcast += in_vectors * bcast_per_vector;
  c.words_reduced += bcast_per_vector;
  c.local_combines += visited + bcast_per_vector;
}

template <class XT, class YT, class F, class M>
auto compute_blocks(const PartitionedMatrix& P, const DenseVector<XT>& x,
                    const DenseVector<YT>& y, F&& f, const M& m,
                    const StarFlags* mask, std::uint64_t& visited) {
  using W = msf::kernels::detail::multilinear_result_t<F, XT, YT>;
  const auto& L = P.layout();
  DenseVector<W> w(L.n, m.identity);
  std::uint64_t total = 0;
  for (std::int64_t r = 0; r < L.dim; ++r) {
    const VertexId lo = L.row_begin(r);
    const VertexId hi = L.row_end(r);
    std::uint64_t row_visited = 0;
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : row_visited)
    for (VertexId i = lo; i <= hi; ++i) {
      if (mask && !(*mask)[i]) continue;
      W acc = m.identity;
      for (std::int64_t s = 0; s < L.dim; ++s) {
        const auto& B = P.block(r, s);
        const auto li = static_cast<std::size_t>(i - lo);
        const auto kb = static_cast<std::size_t>(B.row_ptr[li]);
        const auto ke = static_cast<std::size_t>(B.row_ptr[li + 1]);
        for (std::size_t k = kb; k < ke; ++k) {
          const auto& nz = B.entries[k];
          acc = m.combine(acc, f(x[i], MatrixEntry{nz.weight, EdgeKey::of(i, nz.col)}, y[nz.col]));
          ++row_visited;
        }
      }
      w[i] = acc;
    }
    total += row_visited;
  }
  visited = total;
  return w;
}

}  // namespace detail

// All-at-once schedule: redistribute + broadcast the input vectors, apply f
// per stored entry, reduce the output blocks. Never writes the matrix.
template <class XT, class YT, class F, class M>
auto multilinear(const PartitionedMatrix& P, const DenseVector<XT>& x,
                 const DenseVector<YT>& y, F&& f, const M& m,
                 const StarFlags* mask, CostCounters& counters) {
  std::uint64_t visited = 0;
  auto w = detail::compute_blocks(P, x, y, f, m, mask, visited);
  detail::charge_vector_phases(P.layout(), mask ? 3 : 2, visited, counters);
  return w;
}

// Pairwise schedule: first write the (a_ij, y_j) pair into every stored
// entry of the distributed matrix, then combine rows against x. Same output
// and communication, plus one remote write per stored nonzero.
template <class XT, class YT, class F, class M>
auto multilinear_pairwise(const PartitionedMatrix& P, const DenseVector<XT>& x,
                          const DenseVector<YT>& y, F&& f, const M& m,
                          const StarFlags* mask, CostCounters& counters) {
  using W = msf::kernels::detail::multilinear_result_t<F, XT, YT>;
  const auto& L = P.layout();

  struct Updated {
    MatrixEntry a;
    YT yj;
  };
  std::vector<std::vector<Updated>> pairs(
      static_cast<std::size_t>(L.dim * L.dim));
  for (std::int64_t r = 0; r < L.dim; ++r) {
    const VertexId lo = L.row_begin(r);
    const VertexId hi = L.row_end(r);
    for (std::int64_t s = 0; s < L.dim; ++s) {
      const auto& B = P.block(r, s);
      auto& out = pairs[static_cast<std::size_t>(r * L.dim + s)];
      out.reserve(B.entries.size());
      for (VertexId i = lo; i <= hi; ++i) {
        const auto li = static_cast<std::size_t>(i - lo);
        for (auto k = static_cast<std::size_t>(B.row_ptr[li]);
             k < static_cast<std::size_t>(B.row_ptr[li + 1]); ++k) {
          const auto& nz = B.entries[k];
          out.push_back({MatrixEntry{nz.weight, EdgeKey::of(i, nz.col)}, y[nz.col]});
        }
      }
    }
  }
  counters.remote_writes += static_cast<std::uint64_t>(P.stored_nonzeros());

  DenseVector<W> w(L.n, m.identity);
  std::uint64_t visited = 0;
  for (std::int64_t r = 0; r < L.dim; ++r) {
    const VertexId lo = L.row_begin(r);
    const VertexId hi = L.row_end(r);
    std::uint64_t row_visited = 0;
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : row_visited)
    for (VertexId i = lo; i <= hi; ++i) {
      if (mask && !(*mask)[i]) continue;
      W acc = m.identity;
      for (std::int64_t s = 0; s < L.dim; ++s) {
        const auto& B = P.block(r, s);
        const auto& out = pairs[static_cast<std::size_t>(r * L.dim + s)];
        const auto li = static_cast<std::size_t>(i - lo);
        for (auto k = static_cast<std::size_t>(B.row_ptr[li]);
             k < static_cast<std::size_t>(B.row_ptr[li + 1]); ++k) {
          acc = m.combine(acc, f(x[i], out[k].a, out[k].yj));
          ++row_visited;
        }
      }
      w[i] = acc;
    }
    visited += row_visited;
  }
  detail::charge_vector_phases(L, mask ? 3 : 2, visited, counters);
  return w;
}

// Every rank contributes the changed entries it owns; afterwards all ranks
// hold the union. Throws std::invalid_argument if two parts share a key.
ChangeSet allgather_parts(std::span<const ChangeSet> parts,
                          const GridLayout& layout, CostCounters& counters);

// Splits `changed` by element ownership, then all-gathers the parts.
ChangeSet allgather(const ChangeSet& changed, const GridLayout& layout,
                    CostCounters& counters);

}  // namespace msf::grid

#endif
