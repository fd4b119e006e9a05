#ifndef MSF_KERNELS_HPP
#define MSF_KERNELS_HPP

#include <omp.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "msf/adjacency_matrix.hpp"
#include "msf/algebra.hpp"
#include "msf/cost_counters.hpp"
#include "msf/dense_vector.hpp"

// The three sparse kernels plus gather. The OpenMP versions in msf::kernels
// are the ones the engine uses; msf::kernels::serial keeps plain-loop
// reference implementations that must match them bitwise. All combines fold
// each output element in ascending input order, and the monoids used here
// select rather than accumulate, so results do not depend on thread count.

namespace msf::kernels {

struct KernelStats {
  std::uint64_t entries_visited = 0;
};

namespace detail {

inline void check_length(std::int64_t got, std::int64_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": length " +
                                std::to_string(got) + " != matrix dimension " +
                                std::to_string(want));
  }
}

template <class F, class XT, class YT>
using multilinear_result_t =
    decltype(std::declval<F&>()(std::declval<const XT&>(),
                                std::declval<const MatrixEntry&>(),
                                std::declval<const YT&>()));

}  // namespace detail

namespace serial {

// w_i = combine_j f(x_i, a_ij, y_j) over the stored nonzeros of row i.
// Masked-out rows are skipped entirely and produce the identity.
template <class XT, class YT, class F, class M>
auto multilinear(const AdjacencyMatrix& A, const DenseVector<XT>& x,
                 const DenseVector<YT>& y, F&& f, const M& m,
                 const StarFlags* mask = nullptr, KernelStats* stats = nullptr) {
  using W = detail::multilinear_result_t<F, XT, YT>;
  const std::int64_t n = A.vertex_count();
  detail::check_length(x.size(), n, "multilinear x");
  detail::check_length(y.size(), n, "multilinear y");
  if (mask) detail::check_length(mask->size(), n, "multilinear mask");

  DenseVector<W> w(n, m.identity);
  std::uint64_t visited = 0;
  for (VertexId i = 1; i <= n; ++i) {
    if (mask && !(*mask)[i]) continue;
    W acc = m.identity;
    for (const auto& nz : A.row(i)) {
      acc = m.combine(acc, f(x[i], MatrixEntry{nz.weight, EdgeKey::of(i, nz.col)}, y[nz.col]));
      ++visited;
    }
    w[i] = acc;
  }
  if (stats) stats->entries_visited += visited;
  return w;
}

// Two-step reference: first materialize (a_ij, y_j) for every stored
// nonzero, then combine rows against x. The materialization costs one
// remote write per stored entry, which is what the counter records.
template <class XT, class YT, class F, class M>
auto multilinear_pairwise_reference(const AdjacencyMatrix& A,
                                    const DenseVector<XT>& x,
                                    const DenseVector<YT>& y, F&& f, const M& m,
                                    const StarFlags* mask = nullptr,
                                    CostCounters* counters = nullptr,
                                    KernelStats* stats = nullptr) {
  using W = detail::multilinear_result_t<F, XT, YT>;
  const std::int64_t n = A.vertex_count();
  detail::check_length(x.size(), n, "multilinear x");
  detail::check_length(y.size(), n, "multilinear y");
  if (mask) detail::check_length(mask->size(), n, "multilinear mask");

  struct Updated {
    MatrixEntry a;
    YT yj;
  };
  std::vector<std::vector<Updated>> updated(static_cast<std::size_t>(n));
  for (VertexId i = 1; i <= n; ++i) {
    auto& row = updated[static_cast<std::size_t>(i - 1)];
    row.reserve(A.row(i).size());
    for (const auto& nz : A.row(i)) {
      row.push_back({MatrixEntry{nz.weight, EdgeKey::of(i, nz.col)}, y[nz.col]});
    }
  }
  if (counters) counters->remote_writes += static_cast<std::uint64_t>(A.stored_nonzeros());

  DenseVector<W> w(n, m.identity);
  std::uint64_t visited = 0;
  for (VertexId i = 1; i <= n; ++i) {
    if (mask && !(*mask)[i]) continue;
    W acc = m.identity;
    for (const auto& u : updated[static_cast<std::size_t>(i - 1)]) {
      acc = m.combine(acc, f(x[i], u.a, u.yj));
      ++visited;
    }
    w[i] = acc;
  }
  if (stats) stats->entries_visited += visited;
  return w;
}

// y_j = x_j (+) combine_k x_k (*) a_kj. The implicit unit diagonal keeps
// already-settled values, matching relaxation semantics; symmetry lets the
// column gather run over row j.
template <class T, class SR>
DenseVector<T> spmv(const AdjacencyMatrix& A, const DenseVector<T>& x,
                    const SR& sr) {
  const std::int64_t n = A.vertex_count();
  detail::check_length(x.size(), n, "spmv x");
  DenseVector<T> y(n, sr.add.identity);
  for (VertexId j = 1; j <= n; ++j) {
    T acc = x[j];
    for (const auto& nz : A.row(j)) {
      acc = sr.add.combine(acc, sr.multiply(x[nz.col], nz.weight));
    }
    y[j] = acc;
  }
  return y;
}

// r_i = combine of all q_j with p_j == i; identity where no such j.
template <class T, class M>
DenseVector<T> scatter_combine(const DenseVector<T>& q, const ParentVector& p,
                               const M& m) {
  const std::int64_t n = q.size();
  detail::check_length(p.size(), n, "scatter_combine p");
  DenseVector<T> r(n, m.identity);
  for (VertexId j = 1; j <= n; ++j) {
    const VertexId tgt = p[j];
    r[tgt] = m.combine(r[tgt], q[j]);
  }
  return r;
}

// out_i = src[idx_i]; the sentinel 0 gathers the sentinel.
inline ParentVector gather(const ParentVector& src, const ParentVector& idx) {
  const std::int64_t n = idx.size();
  ParentVector out(n, kNoVertex);
  for (VertexId i = 1; i <= n; ++i) {
    const VertexId v = idx[i];
    if (v == kNoVertex) continue;
    if (v < 1 || v > src.size()) {
      throw std::out_of_range("gather: index " + std::to_string(v) +
                              " outside 1.." + std::to_string(src.size()));
    }
    out[i] = src[v];
  }
  return out;
}

}  // namespace serial

template <class XT, class YT, class F, class M>
auto multilinear(const AdjacencyMatrix& A, const DenseVector<XT>& x,
                 const DenseVector<YT>& y, F&& f, const M& m,
                 const StarFlags* mask = nullptr, KernelStats* stats = nullptr) {
  using W = detail::multilinear_result_t<F, XT, YT>;
  const std::int64_t n = A.vertex_count();
  detail::check_length(x.size(), n, "multilinear x");
  detail::check_length(y.size(), n, "multilinear y");
  if (mask) detail::check_length(mask->size(), n, "multilinear mask");

  DenseVector<W> w(n, m.identity);
  std::uint64_t visited = 0;
#pragma omp parallel for schedule(dynamic, 256) reduction(+ : visited)
  for (VertexId i = 1; i <= n; ++i) {
    if (mask && !(*mask)[i]) continue;
    W acc = m.identity;
    for (const auto& nz : A.row(i)) {
      acc = m.combine(acc, f(x[i], MatrixEntry{nz.weight, EdgeKey::of(i, nz.col)}, y[nz.col]));
      ++visited;
    }
    w[i] = acc;
  }
  if (stats) stats->entries_visited += visited;
  return w;
}

template <class XT, class YT, class F, class M>
auto multilinear_pairwise_reference(const AdjacencyMatrix& A,
                                    const DenseVector<XT>& x,
                                    const DenseVector<YT>& y, F&& f, const M& m,
                                    const StarFlags* mask = nullptr,
                                    CostCounters* counters = nullptr,
                                    KernelStats* stats = nullptr) {
  using W = detail::multilinear_result_t<F, XT, YT>;
  const std::int64_t n = A.vertex_count();
  detail::check_length(x.size(), n, "multilinear x");
  detail::check_length(y.size(), n, "multilinear y");
  if (mask) detail::check_length(mask->size(), n, "multilinear mask");

  struct Updated {
    MatrixEntry a;
    YT yj;
  };
  std::vector<std::vector<Updated>> updated(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 256)
  for (VertexId i = 1; i <= n; ++i) {
    auto& row = updated[static_cast<std::size_t>(i - 1)];
    row.reserve(A.row(i).size());
    for (const auto& nz : A.row(i)) {
      row.push_back({MatrixEntry{nz.weight, EdgeKey::of(i, nz.col)}, y[nz.col]});
    }
  }
  if (counters) counters->remote_writes += static_cast<std::uint64_t>(A.stored_nonzeros());

  DenseVector<W> w(n, m.identity);
  std::uint64_t visited = 0;
#pragma omp parallel for schedule(dynamic, 256) reduction(+ : visited)
  for (VertexId i = 1; i <= n; ++i) {
    if (mask && !(*mask)[i]) continue;
    W acc = m.identity;
    for (const auto& u : updated[static_cast<std::size_t>(i - 1)]) {
      acc = m.combine(acc, f(x[i], u.a, u.yj));
      ++visited;
    }
    w[i] = acc;
  }
  if (stats) stats->entries_visited += visited;
  return w;
}

template <class T, class SR>
DenseVector<T> spmv(const AdjacencyMatrix& A, const DenseVector<T>& x,
                    const SR& sr) {
  const std::int64_t n = A.vertex_count();
  detail::check_length(x.size(), n, "spmv x");
  DenseVector<T> y(n, sr.add.identity);
#pragma omp parallel for schedule(dynamic, 256)
  for (VertexId j = 1; j <= n; ++j) {
    T acc = x[j];
    for (const auto& nz : A.row(j)) {
      acc = sr.add.combine(acc, sr.multiply(x[nz.col], nz.weight));
    }
    y[j] = acc;
  }
  return y;
}

// Bucketed scatter: inputs are sliced per thread and routed to contiguous
// output ranges, then each range is combined by one thread in ascending
// (slice, index) order. The combine is a total-order min, so the result is
// the same for any thread count.
template <class T, class M>
DenseVector<T> scatter_combine(const DenseVector<T>& q, const ParentVector& p,
                               const M& m) {
  const std::int64_t n = q.size();
  detail::check_length(p.size(), n, "scatter_combine p");
  DenseVector<T> r(n, m.identity);
  if (n == 0) return r;

  const int nt = omp_get_max_threads();
  if (nt <= 1 || n < 4096) {
    for (VertexId j = 1; j <= n; ++j) {
      const VertexId tgt = p[j];
      r[tgt] = m.combine(r[tgt], q[j]);
    }
    return r;
  }

  const std::int64_t chunk = (n + nt - 1) / nt;
  auto owner = [chunk](VertexId v) { return static_cast<int>((v - 1) / chunk); };

  std::vector<std::vector<std::int64_t>> count(
      static_cast<std::size_t>(nt), std::vector<std::int64_t>(static_cast<std::size_t>(nt), 0));
#pragma omp parallel num_threads(nt)
  {
    const int t = omp_get_thread_num();
    const VertexId lo = static_cast<VertexId>(t) * chunk + 1;
    const VertexId hi = std::min<std::int64_t>(n, (t + 1) * static_cast<std::int64_t>(chunk));
    auto& cnt = count[static_cast<std::size_t>(t)];
    for (VertexId j = lo; j <= hi; ++j) ++cnt[static_cast<std::size_t>(owner(p[j]))];
  }

  // offsets in (destination bucket, source slice) order
  std::vector<std::vector<std::int64_t>> offset(
      static_cast<std::size_t>(nt), std::vector<std::int64_t>(static_cast<std::size_t>(nt), 0));
  std::vector<std::int64_t> bucket_start(static_cast<std::size_t>(nt) + 1, 0);
  {
    std::int64_t pos = 0;
    for (int d = 0; d < nt; ++d) {
      bucket_start[static_cast<std::size_t>(d)] = pos;
      for (int s = 0; s < nt; ++s) {
        offset[static_cast<std::size_t>(s)][static_cast<std::size_t>(d)] = pos;
        pos += count[static_cast<std::size_t>(s)][static_cast<std::size_t>(d)];
      }
    }
    bucket_start[static_cast<std::size_t>(nt)] = pos;
  }

  std::vector<VertexId> routed(static_cast<std::size_t>(n));
#pragma omp parallel num_threads(nt)
  {
    const int t = omp_get_thread_num();
    const VertexId lo = static_cast<VertexId>(t) * chunk + 1;
    const VertexId hi = std::min<std::int64_t>(n, (t + 1) * static_cast<std::int64_t>(chunk));
    auto& off = offset[static_cast<std::size_t>(t)];
    for (VertexId j = lo; j <= hi; ++j) {
      routed[static_cast<std::size_t>(off[static_cast<std::size_t>(owner(p[j]))]++)] = j;
    }
  }

#pragma omp parallel num_threads(nt)
  {
    const int d = omp_get_thread_num();
    for (std::int64_t k = bucket_start[static_cast<std::size_t>(d)];
         k < bucket_start[static_cast<std::size_t>(d) + 1]; ++k) {
      const VertexId j = routed[static_cast<std::size_t>(k)];
      const VertexId tgt = p[j];
      r[tgt] = m.combine(r[tgt], q[j]);
    }
  }
  return r;
}

inline ParentVector gather(const ParentVector& src, const ParentVector& idx) {
  const std::int64_t n = idx.size();
  ParentVector out(n, kNoVertex);
  bool bad = false;
#pragma omp parallel for schedule(static) reduction(|| : bad)
  for (VertexId i = 1; i <= n; ++i) {
    const VertexId v = idx[i];
    if (v == kNoVertex) continue;
    if (v < 1 || v > src.size()) {
      bad = true;
      continue;
    }
    out[i] = src[v];
  }
  if (bad) throw std::out_of_range("gather: index outside 1..n");
  return out;
}

}  // namespace msf::kernels

#endif
