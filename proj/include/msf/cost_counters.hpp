#ifndef MSF_COST_COUNTERS_HPP
#define MSF_COST_COUNTERS_HPP

#include <cstdint>

namespace msf {

// Per-phase communication and write tallies. Units are words: a weight, a
// vertex id, and an edge key each count as one word, so an edge entry is
// three words and a (vertex, parent) pair is two. remote_writes counts
// writes into the distributed matrix structure; the all-at-once kernel
// performs none, the pairwise scheme one per stored nonzero.
struct CostCounters {
  std::uint64_t words_redistributed = 0;
  std::uint64_t words_broadcast = 0;
  std::uint64_t words_reduced = 0;
  std::uint64_t words_allgathered = 0;
  std::uint64_t remote_writes = 0;
  std::uint64_t local_combines = 0;

  CostCounters& operator+=(const CostCounters& o) {
    words_redistributed += o.words_redistributed;
    words_broadcast += o.words_broadcast;
    words_reduced += o.words_reduced;
    words_allgathered += o.words_allgathered;
    remote_writes += o.remote_writes;
    local_combines += o.local_combines;
    return *this;
  }

  friend bool operator==(const CostCounters&, const CostCounters&) = default;
};

inline constexpr std::uint64_t kWordsPerChangedEntry = 2;  // (vertex, parent)

}  // namespace msf

#endif
