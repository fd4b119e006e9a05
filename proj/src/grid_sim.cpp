#include "msf/grid_sim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace msf::grid {

GridLayout GridLayout::make(std::int64_t n, std::int64_t ranks) {
  if (ranks < 1) throw std::invalid_argument("grid: ranks must be positive");
  const auto dim = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(ranks))));
  if (dim * dim != ranks) {
    throw std::invalid_argument("grid: " + std::to_string(ranks) +
                                " ranks is not a perfect square");
  }
  if (n > 0 && ranks > n * n) {
    throw std::invalid_argument("grid: more ranks than matrix entries");
  }
  GridLayout L;
  L.n = n;
  L.ranks = ranks;
  L.dim = dim;
  L.row_block = n > 0 ? (n + dim - 1) / dim : 0;
  L.vec_block = n > 0 ? (n + ranks - 1) / ranks : 0;
  return L;
}

PartitionedMatrix::PartitionedMatrix(const AdjacencyMatrix& A,
                                     const GridLayout& layout)
    : layout_(layout) {
  if (A.vertex_count() != layout.n) {
    throw std::invalid_argument("grid: layout dimension does not match matrix");
  }
  const auto dim = layout_.dim;
  blocks_.resize(static_cast<std::size_t>(dim * dim));
  for (std::int64_t r = 0; r < dim; ++r) {
    const VertexId lo = layout_.row_begin(r);
    const VertexId hi = layout_.row_end(r);
    const std::int64_t local_rows = hi >= lo ? hi - lo + 1 : 0;
    for (std::int64_t s = 0; s < dim; ++s) {
      blocks_[static_cast<std::size_t>(r * dim + s)].row_ptr.assign(
          static_cast<std::size_t>(local_rows) + 1, 0);
    }
    for (VertexId i = lo; i <= hi; ++i) {
      for (const auto& nz : A.row(i)) {
        auto& b = blocks_[static_cast<std::size_t>(r * dim + layout_.grid_row_of(nz.col))];
        b.entries.push_back(nz);
        ++nnz_;
      }
      for (std::int64_t s = 0; s < dim; ++s) {
        auto& b = blocks_[static_cast<std::size_t>(r * dim + s)];
        b.row_ptr[static_cast<std::size_t>(i - lo + 1)] =
            static_cast<std::int64_t>(b.entries.size());
      }
    }
  }
}

AdjacencyMatrix PartitionedMatrix::reassemble() const {
  std::vector<EdgeRecord> recs;
  recs.reserve(static_cast<std::size_t>(nnz_ / 2));
  const auto dim = layout_.dim;
  for (std::int64_t r = 0; r < dim; ++r) {
    const VertexId lo = layout_.row_begin(r);
    const VertexId hi = layout_.row_end(r);
    for (std::int64_t s = 0; s < dim; ++s) {
      const auto& b = block(r, s);
      for (VertexId i = lo; i <= hi; ++i) {
        const auto li = static_cast<std::size_t>(i - lo);
        for (auto k = static_cast<std::size_t>(b.row_ptr[li]);
             k < static_cast<std::size_t>(b.row_ptr[li + 1]); ++k) {
          if (b.entries[k].col > i) {
            recs.push_back({i, b.entries[k].col, b.entries[k].weight});
          }
        }
      }
    }
  }
  return AdjacencyMatrix::from_edges(layout_.n, recs);
}

ChangeSet allgather_parts(std::span<const ChangeSet> parts,
                          const GridLayout& layout, CostCounters& counters) {
  ChangeSet merged;
  std::uint64_t total = 0;
  for (const auto& part : parts) {
    total += part.size();
    for (const auto& [v, parent] : part) {
      if (!merged.emplace(v, parent).second) {
        throw std::invalid_argument(
            "allgather: vertex " + std::to_string(v) +
            " contributed by more than one rank");
      }
    }
  }
  counters.words_allgathered +=
      static_cast<std::uint64_t>(layout.ranks - 1) * total * kWordsPerChangedEntry;
  return merged;
}

ChangeSet allgather(const ChangeSet& changed, const GridLayout& layout,
                    CostCounters& counters) {
  std::vector<ChangeSet> parts(static_cast<std::size_t>(layout.ranks));
  for (const auto& [v, parent] : changed) {
    if (v < 1 || v > layout.n) {
      throw std::invalid_argument("allgather: vertex " + std::to_string(v) +
                                  " owned by no rank");
    }
    parts[static_cast<std::size_t>(layout.rank_of_element(v))].emplace(v, parent);
  }
  return allgather_parts(parts, layout, counters);
}

}  // namespace msf::grid
