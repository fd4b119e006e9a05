#ifndef MSF_ENGINE_HPP
#define MSF_ENGINE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "msf/adjacency_matrix.hpp"
#include "msf/algebra.hpp"
#include "msf/cost_counters.hpp"
#include "msf/dense_vector.hpp"
#include "msf/grid_sim.hpp"

// The minimum spanning forest driver and its component steps. Each iteration
// finds the minimum outgoing edge of every star via the three-operand kernel,
// projects the candidates onto the star roots, hooks, breaks the 2-cycles
// mutual hooks create, and shortcuts. Three shortcutting strategies are
// provided: the per-iteration pointer jump, complete shortcutting (jump until
// every tree is a star), and complete shortcutting driven by a prefetched
// change map, plus a size-thresholded hybrid of the latter two.

namespace msf {

enum class ShortcutMode { kBaseline, kComplete, kCsp, kAuto };
enum class TerminationMode { kParent, kGrandparent };

struct MsfOptions {
  ShortcutMode shortcut = ShortcutMode::kAuto;
  TerminationMode termination = TerminationMode::kGrandparent;
  std::int64_t csp_threshold = 1'310'000;
  std::int64_t grid_ranks = 0;  // 0: in-process kernels; >0: simulated grid
  bool pairwise_kernel = false;
  bool validate_forest = false;      // cycle search after every tie break
  bool cross_check_shortcuts = false;  // complete == csp == auto each iteration
};

struct ForestEdge {
  EdgeKey key;
  Weight weight = 0;
  friend bool operator==(const ForestEdge&, const ForestEdge&) = default;
};

struct IterationStats {
  std::int64_t hooks = 0;          // star roots that received a hook
  std::int64_t tie_breaks = 0;     // hooks reverted as 2-cycle halves
  std::int64_t shortcut_sub_iterations = 0;
  std::int64_t changed_count = 0;  // parents changed between hook and tie break
  CostCounters counters;
};

struct MsfResult {
  Weight total_weight = 0;
  std::vector<ForestEdge> forest_edges;  // sorted by key
  std::int64_t iterations = 0;
  std::int64_t component_count = 0;
  std::vector<IterationStats> per_iteration;

  CostCounters total_counters() const {
    CostCounters c;
    for (const auto& it : per_iteration) c += it.counters;
    return c;
  }
};

// Wall-clock seconds spent per driver phase.
struct PhaseTimings {
  double multilinear = 0;
  double scatter = 0;
  double hook = 0;
  double tie_break = 0;
  double shortcut = 0;
};

// Three-phase star membership check: mark every vertex whose parent is not a
// root together with that parent and grandparent, then have the survivors
// adopt their parent's flag.
StarFlags starcheck(const ParentVector& p);

// q_i = min over j of f(p_i, a_ij, p_j) for star members, identity otherwise.
DenseVector<EdgeEntry> min_outgoing(const AdjacencyMatrix& A,
                                    const ParentVector& p, const StarFlags& s);

// p_i <- r_i.parent wherever r_i is not the identity.
ParentVector hook(const ParentVector& p, const DenseVector<EdgeEntry>& r);

// Reverts the smaller-rooted half of every mutual hook. `roots_before_hook`
// marks the vertices that were roots entering the hook step; post-hook p no
// longer identifies them.
std::pair<ParentVector, DenseVector<std::uint8_t>> tie_break(
    const ParentVector& p, const DenseVector<std::uint8_t>& roots_before_hook);

// Adds the surviving hooks' weights and keys to the running result.
void accumulate(const DenseVector<EdgeEntry>& r,
                const DenseVector<std::uint8_t>& t, MsfResult& result);

// One pointer jump for every non-star vertex.
ParentVector shortcut_baseline(const ParentVector& p, const StarFlags& s);

// Jump everyone until nothing moves; returns the number of jumps that
// changed at least one entry (zero on an already-star forest).
std::pair<ParentVector, std::int64_t> shortcut_complete(const ParentVector& p);

// Complete shortcutting via the prefetched change map: gather
// {i -> p_i : p_i != p_prev_i} once, then resolve every parent by local map
// chasing. Requires the complete-shortcut invariant that p_prev was all
// stars; throws std::logic_error if the chase finds a cycle. When `layout`
// is given the gather volume is charged to `counters`.
std::pair<ParentVector, ChangeSet> shortcut_csp(
    const ParentVector& p, const ParentVector& p_prev,
    const grid::GridLayout* layout = nullptr, CostCounters* counters = nullptr);

struct AutoShortcutResult {
  ParentVector parents;
  bool used_csp = false;
  std::int64_t sub_iterations = 0;
  std::int64_t changed_count = 0;
};

// CSP when the change map is below `threshold` entries, plain complete
// shortcutting otherwise; identical output either way.
AutoShortcutResult shortcut_auto(const ParentVector& p,
                                 const ParentVector& p_prev,
                                 std::int64_t threshold,
                                 const grid::GridLayout* layout = nullptr,
                                 CostCounters* counters = nullptr);

// Pointer-chases every vertex and throws std::logic_error if the parent
// structure contains a cycle of length >= 2 or an out-of-range entry.
void validate_forest(const ParentVector& p);

MsfResult minimum_spanning_forest(const AdjacencyMatrix& A,
                                  const MsfOptions& opts = {},
                                  PhaseTimings* timings = nullptr);

// Component label of every vertex (the final root id). Conditional hooking
// onto smaller parents, unconditional hooking for stars the condition
// starved, one pointer jump per round.
DenseVector<VertexId> connected_components(const AdjacencyMatrix& A);

// Sort edges by (weight, key) and grow the forest with union-find. The
// verification oracle: same unique forest, independent route.
MsfResult kruskal_oracle(const AdjacencyMatrix& A);

// n-1 tropical matrix-vector products from the unit distance vector, with
// early exit on a fixpoint. Throws std::out_of_range on a bad source.
DenseVector<Weight> sssp_bellman_ford(const AdjacencyMatrix& A, VertexId source);

}  // namespace msf

#endif
