#include <doctest.h>
#include <omp.h>

#include <random>

#include "msf/graph_io.hpp"
#include "msf/verify.hpp"
#include "msf/kernels.hpp"
#include "oracles.hpp"

using namespace msf;

namespace {

AdjacencyMatrix triangle() {
  const EdgeRecord recs[] = {{1, 2, 1.0}, {2, 3, 2.0}, {1, 3, 3.0}};
  return AdjacencyMatrix::from_edges(3, recs);
}

AdjacencyMatrix path4() {
  const EdgeRecord recs[] = {{1, 2, 1.0}, {2, 3, 2.0}, {3, 4, 3.0}};
  return AdjacencyMatrix::from_edges(4, recs);
}

AdjacencyMatrix random_graph(std::int64_t n, double density, std::uint64_t seed) {
  io::GenSpec spec;
  spec.kind = io::GenSpec::Kind::kUniform;
  spec.n = n;
  spec.density_percent = density;
  spec.seed = seed;
  return io::gen_uniform(spec);
}

struct ThreadGuard {
  int saved = omp_get_max_threads();
  ~ThreadGuard() { omp_set_num_threads(saved); }
};

}  // namespace

TEST_CASE("tropical spmv relaxes one edge") {
  const EdgeRecord recs[] = {{1, 2, 5.0}};
  const auto A = AdjacencyMatrix::from_edges(2, recs);
  DenseVector<Weight> x(2, kInfWeight);
  x[1] = 0;
  const auto y = kernels::spmv(A, x, tropical());
  CHECK(y[1] == 0.0);
  CHECK(y[2] == 5.0);
}

TEST_CASE("tropical spmv annihilates an all-infinity vector") {
  const auto A = triangle();
  const DenseVector<Weight> x(3, kInfWeight);
  const auto y = kernels::spmv(A, x, tropical());
  for (VertexId v = 1; v <= 3; ++v) CHECK(y[v] == kInfWeight);
}

TEST_CASE("three spmv steps settle the 4-vertex path") {
  const auto A = path4();
  DenseVector<Weight> d(4, kInfWeight);
  d[1] = 0;
  for (int step = 0; step < 3; ++step) d = kernels::spmv(A, d, tropical());
  // frozen from exhaustive simple-path enumeration
  CHECK(d[1] == 0.0);
  CHECK(d[2] == 1.0);
  CHECK(d[3] == 3.0);
  CHECK(d[4] == 6.0);
}

TEST_CASE("iterated tropical spmv reaches all-simple-paths distances") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 25; ++trial) {
    const std::int64_t n = 2 + static_cast<std::int64_t>(rng() % 9);
    const auto A = random_graph(n, 25.0, rng());
    const VertexId source = static_cast<VertexId>(rng() % n + 1);
    DenseVector<Weight> d(n, kInfWeight);
    d[source] = 0;
    for (std::int64_t step = 1; step < n; ++step) d = kernels::spmv(A, d, tropical());
    CHECK(d == msf::verify::brute_force_sssp(A, source));
  }
}

TEST_CASE("spmv rejects mismatched dimensions") {
  const auto A = triangle();
  const DenseVector<Weight> x(2, kInfWeight);
  CHECK_THROWS_AS(kernels::spmv(A, x, tropical()), std::invalid_argument);
}

TEST_CASE("multilinear finds outgoing edges of the triangle") {
  const auto A = triangle();
  const ParentVector p = identity_parents(3);
  kernels::KernelStats stats;
  const auto q = kernels::multilinear(A, p, p, outgoing_edge_fn(),
                                      min_weight_monoid(), nullptr, &stats);
  CHECK(q[1] == EdgeEntry{1.0, EdgeKey::of(1, 2), 2});
  CHECK(q[2] == EdgeEntry{1.0, EdgeKey::of(1, 2), 1});
  CHECK(q[3] == EdgeEntry{2.0, EdgeKey::of(2, 3), 2});
  CHECK(stats.entries_visited == 6);  // exactly the stored nonzeros
}

TEST_CASE("multilinear yields identities when all parents agree") {
  const auto A = triangle();
  const ParentVector p(3, 1);
  const auto q =
      kernels::multilinear(A, p, p, outgoing_edge_fn(), min_weight_monoid());
  for (VertexId v = 1; v <= 3; ++v) CHECK(q[v] == EdgeEntry{});
}

TEST_CASE("multilinear skips masked rows") {
  const auto A = triangle();
  const ParentVector p = identity_parents(3);
  const StarFlags none(3, 0);
  kernels::KernelStats stats;
  const auto q = kernels::multilinear(A, p, p, outgoing_edge_fn(),
                                      min_weight_monoid(), &none, &stats);
  for (VertexId v = 1; v <= 3; ++v) CHECK(q[v] == EdgeEntry{});
  CHECK(stats.entries_visited == 0);
}

TEST_CASE("pairwise reference matches all-at-once and counts its writes") {
  const auto A = triangle();
  const ParentVector p = identity_parents(3);
  CostCounters counters;
  const auto q = kernels::multilinear(A, p, p, outgoing_edge_fn(), min_weight_monoid());
  const auto qp = kernels::multilinear_pairwise_reference(
      A, p, p, outgoing_edge_fn(), min_weight_monoid(), nullptr, &counters);
  CHECK(q == qp);
  CHECK(counters.remote_writes == 6);

  const AdjacencyMatrix empty = AdjacencyMatrix::from_edges(0, {});
  CostCounters zero;
  const ParentVector p0(0);
  const auto q0 = kernels::multilinear_pairwise_reference(
      empty, p0, p0, outgoing_edge_fn(), min_weight_monoid(), nullptr, &zero);
  CHECK(q0.size() == 0);
  CHECK(zero.remote_writes == 0);
}

TEST_CASE("kernel routes agree with the dense reference on random graphs") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const std::int64_t n = 2 + static_cast<std::int64_t>(rng() % 63);
    const auto A = random_graph(n, 1.0 + static_cast<double>(rng() % 40), rng());
    const oracles::DenseMirror D(A);

    ParentVector p(n);
    for (VertexId v = 1; v <= n; ++v) p[v] = static_cast<VertexId>(rng() % n + 1);
    StarFlags mask(n, 0);
    for (VertexId v = 1; v <= n; ++v) mask[v] = rng() % 2;
    const StarFlags* use_mask = trial % 3 == 0 ? &mask : nullptr;

    const auto f = outgoing_edge_fn();
    const auto m = min_weight_monoid();
    const auto want = oracles::dense_multilinear(D, p, p, f, m, use_mask);
    CHECK(kernels::multilinear(A, p, p, f, m, use_mask) == want);
    CHECK(kernels::multilinear_pairwise_reference(A, p, p, f, m, use_mask) == want);
    CHECK(kernels::serial::multilinear(A, p, p, f, m, use_mask) == want);
    CHECK(kernels::serial::multilinear_pairwise_reference(A, p, p, f, m, use_mask) == want);
  }
}

TEST_CASE("scatter_combine projects onto parents") {
  const auto m = min_weight_monoid();
  DenseVector<EdgeEntry> q(3);
  q[1] = EdgeEntry{1.0, EdgeKey::of(1, 2), 2};
  q[2] = EdgeEntry{1.0, EdgeKey::of(1, 2), 1};
  q[3] = EdgeEntry{2.0, EdgeKey::of(2, 3), 2};

  SUBCASE("identity parents keep entries in place") {
    const auto r = kernels::scatter_combine(q, identity_parents(3), m);
    CHECK(r == q);
  }
  SUBCASE("shared parent combines all entries") {
    const auto r = kernels::scatter_combine(q, ParentVector(3, 1), m);
    CHECK(r[1] == EdgeEntry{1.0, EdgeKey::of(1, 2), 1});  // parent breaks the tie
    CHECK(r[2] == EdgeEntry{});
    CHECK(r[3] == EdgeEntry{});
  }
  SUBCASE("identities stay identities") {
    const DenseVector<EdgeEntry> empty(3);
    const auto r = kernels::scatter_combine(empty, ParentVector(3, 2), m);
    for (VertexId v = 1; v <= 3; ++v) CHECK(r[v] == EdgeEntry{});
  }
}

TEST_CASE("scatter_combine does not depend on traversal order") {
  const auto m = min_weight_monoid();
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 200);
    DenseVector<EdgeEntry> q(n);
    ParentVector p(n);
    for (VertexId v = 1; v <= n; ++v) {
      p[v] = static_cast<VertexId>(rng() % n + 1);
      if (rng() % 4 != 0) {
        q[v] = EdgeEntry{static_cast<Weight>(rng() % 5 + 1),
                         EdgeKey::of(v, v % n + 1), static_cast<VertexId>(rng() % n + 1)};
      }
    }
    // reversed-order fold as an order-sensitivity probe
    DenseVector<EdgeEntry> reversed(n, m.identity);
    for (VertexId j = n; j >= 1; --j) reversed[p[j]] = m.combine(reversed[p[j]], q[j]);

    CHECK(kernels::scatter_combine(q, p, m) == reversed);
    CHECK(kernels::serial::scatter_combine(q, p, m) == reversed);
  }
}

TEST_CASE("gather reads through the index vector") {
  ParentVector p(3);
  p[1] = 1;
  p[2] = 1;
  p[3] = 2;
  const auto grandparents = kernels::gather(p, p);
  CHECK(grandparents[1] == 1);
  CHECK(grandparents[2] == 1);
  CHECK(grandparents[3] == 1);

  const auto same = kernels::gather(p, identity_parents(3));
  CHECK(same == p);

  ParentVector swap(2);
  swap[1] = 2;
  swap[2] = 1;
  const auto swapped = kernels::gather(swap, swap);
  CHECK(swapped[1] == 1);
  CHECK(swapped[2] == 2);
}

TEST_CASE("gather propagates the sentinel and rejects bad indices") {
  ParentVector src(2);
  src[1] = 2;
  src[2] = 2;
  ParentVector idx(2);
  idx[1] = kNoVertex;
  idx[2] = 1;
  const auto out = kernels::gather(src, idx);
  CHECK(out[1] == kNoVertex);
  CHECK(out[2] == 2);

  idx[1] = 5;
  CHECK_THROWS_AS(kernels::gather(src, idx), std::out_of_range);
  CHECK_THROWS_AS(kernels::serial::gather(src, idx), std::out_of_range);
}

TEST_CASE("parallel kernels match the serial reference for any thread count") {
  ThreadGuard guard;
  std::mt19937_64 rng(41);
  const auto A = random_graph(300, 3.0, 99);
  ParentVector p(300);
  for (VertexId v = 1; v <= 300; ++v) p[v] = static_cast<VertexId>(rng() % 300 + 1);
  DenseVector<Weight> x(300);
  for (VertexId v = 1; v <= 300; ++v) x[v] = static_cast<Weight>(rng() % 255 + 1);

  const auto f = outgoing_edge_fn();
  const auto m = min_weight_monoid();
  const auto q_ref = kernels::serial::multilinear(A, p, p, f, m);
  const auto r_ref = kernels::serial::scatter_combine(q_ref, p, m);
  const auto d_ref = kernels::serial::spmv(A, x, tropical());
  const auto g_ref = kernels::serial::gather(p, p);

  // large enough to hit the bucketed scatter path
  const std::int64_t big = 10000;
  DenseVector<EdgeEntry> bq(big);
  ParentVector bp(big);
  for (VertexId v = 1; v <= big; ++v) {
    bp[v] = static_cast<VertexId>(rng() % big + 1);
    bq[v] = EdgeEntry{static_cast<Weight>(rng() % 7 + 1), EdgeKey::of(v, v % big + 1),
                      static_cast<VertexId>(rng() % big + 1)};
  }
  const auto br_ref = kernels::serial::scatter_combine(bq, bp, m);

  for (int threads : {1, 2, 3, 5}) {
    omp_set_num_threads(threads);
    CHECK(kernels::multilinear(A, p, p, f, m) == q_ref);
    CHECK(kernels::scatter_combine(q_ref, p, m) == r_ref);
    CHECK(kernels::spmv(A, x, tropical()) == d_ref);
    CHECK(kernels::gather(p, p) == g_ref);
    CHECK(kernels::scatter_combine(bq, bp, m) == br_ref);
  }
}
