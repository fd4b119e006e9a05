#include <doctest.h>

#include <random>
#include <vector>

#include "msf/algebra.hpp"

using namespace msf;

namespace {

EdgeEntry random_entry(std::mt19937_64& rng) {
  if (rng() % 8 == 0) return EdgeEntry{};  // identity shows up in real folds
  std::uniform_int_distribution<VertexId> vid(1, 16);
  std::uniform_int_distribution<int> wht(1, 6);  // small range forces weight ties
  VertexId u = vid(rng);
  VertexId v = vid(rng);
  if (u == v) v = u % 16 + 1;
  return EdgeEntry{static_cast<Weight>(wht(rng)), EdgeKey::of(u, v), vid(rng)};
}

}  // namespace

TEST_CASE("min_weight picks the smaller weight") {
  const EdgeEntry a{3.0, EdgeKey::of(1, 4), 4};
  const EdgeEntry b{7.0, EdgeKey::of(2, 5), 5};
  CHECK(min_weight(a, b) == a);
  CHECK(min_weight(b, a) == a);
}

TEST_CASE("min_weight identity law") {
  const EdgeEntry x{3.0, EdgeKey::of(1, 4), 4};
  CHECK(min_weight(EdgeEntry{}, x) == x);
  CHECK(min_weight(x, EdgeEntry{}) == x);
  CHECK(min_weight(EdgeEntry{}, EdgeEntry{}) == EdgeEntry{});

  // an infinite-weight entry with a key is not the identity and still loses
  const EdgeEntry absent{kInfWeight, EdgeKey::of(3, 7), 2};
  CHECK(min_weight(EdgeEntry{}, absent) == absent);
  CHECK(min_weight(absent, x) == x);

  std::mt19937_64 rng(11);
  for (int k = 0; k < 1000; ++k) {
    const EdgeEntry e = random_entry(rng);
    CHECK(min_weight(EdgeEntry{}, e) == e);
    CHECK(min_weight(e, EdgeEntry{}) == e);
  }
}

TEST_CASE("min_weight breaks weight ties on the key") {
  const EdgeEntry a{5.0, EdgeKey::of(1, 2), 2};
  const EdgeEntry b{5.0, EdgeKey::of(1, 3), 3};
  CHECK(min_weight(a, b) == a);
  CHECK(min_weight(b, a) == a);
}

TEST_CASE("min_weight is associative and commutative on random triples") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 10000; ++k) {
    const EdgeEntry a = random_entry(rng);
    const EdgeEntry b = random_entry(rng);
    const EdgeEntry c = random_entry(rng);
    CHECK(min_weight(min_weight(a, b), c) == min_weight(a, min_weight(b, c)));
    CHECK(min_weight(a, b) == min_weight(b, a));
  }
}

TEST_CASE("edge_entry_less is a strict total order") {
  std::mt19937_64 rng(13);
  std::vector<EdgeEntry> sample;
  for (int k = 0; k < 64; ++k) sample.push_back(random_entry(rng));
  for (const auto& a : sample) {
    CHECK(!edge_entry_less(a, a));
    for (const auto& b : sample) {
      if (a == b) continue;
      CHECK(edge_entry_less(a, b) != edge_entry_less(b, a));
    }
  }
}

TEST_CASE("tropical semiring basics") {
  const auto sr = tropical();
  CHECK(sr.add.combine(3.0, 5.0) == 3.0);
  CHECK(sr.multiply(3.0, 5.0) == 8.0);
  CHECK(sr.multiply(kInfWeight, 5.0) == kInfWeight);
  CHECK(sr.add.identity == kInfWeight);
  CHECK(sr.one == 0.0);
  CHECK(sr.add.combine(sr.add.identity, 4.0) == 4.0);
}

TEST_CASE("tropical distributivity holds exactly on integer weights") {
  const auto sr = tropical();
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> val(0, 255);
  for (int k = 0; k < 10000; ++k) {
    const Weight a = val(rng);
    const Weight b = val(rng);
    const Weight c = val(rng);
    CHECK(sr.multiply(a, sr.add.combine(b, c)) ==
          sr.add.combine(sr.multiply(a, b), sr.multiply(a, c)));
    CHECK(sr.multiply(sr.add.combine(b, c), a) ==
          sr.add.combine(sr.multiply(b, a), sr.multiply(c, a)));
    CHECK(sr.add.combine(a, b) == sr.add.combine(b, a));
  }
}

TEST_CASE("outgoing_edge_fn keeps edges that leave the tree") {
  const auto f = outgoing_edge_fn();
  const MatrixEntry e{4.5, EdgeKey::of(3, 7)};

  const EdgeEntry out = f(1, e, 2);
  CHECK(out == EdgeEntry{4.5, EdgeKey::of(3, 7), 2});

  CHECK(f(2, e, 2) == EdgeEntry{});

  // absent edges carry infinite weight; any finite entry beats them
  const EdgeEntry inf_entry = f(1, MatrixEntry{kInfWeight, EdgeKey::of(3, 7)}, 2);
  CHECK(inf_entry.weight == kInfWeight);
  CHECK(inf_entry.parent == 2);
  CHECK(min_weight(inf_entry, out) == out);
}

TEST_CASE("outgoing_edge_fn is deterministic") {
  const auto f = outgoing_edge_fn();
  std::mt19937_64 rng(5);
  for (int k = 0; k < 1000; ++k) {
    const VertexId x = static_cast<VertexId>(rng() % 16 + 1);
    const VertexId y = static_cast<VertexId>(rng() % 16 + 1);
    const MatrixEntry e{static_cast<Weight>(rng() % 255 + 1), EdgeKey::of(1, 2)};
    CHECK(f(x, e, y) == f(x, e, y));
  }
}
