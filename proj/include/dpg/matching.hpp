#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpg/graph.hpp"
#include "dpg/rng.hpp"

namespace dpg {

// Maximum cardinality matching via Edmonds' blossom algorithm, grown as a
// simultaneous multi-root alternating forest: one phase either augments or
// certifies maximality. Deterministic (roots and adjacency in ascending order).
Matching maximum_matching(const Graph& g);

// Maintains a maximum matching across the edits a growth step makes (lifted
// edges leave the graph, one vertex arrives). repair() re-certifies
// maximality: greedy rematch over exposed vertices, then forest phases until
// no augmenting path remains or the size hits a caller-supplied upper bound
// (a step can raise the matching number by at most one, so hitting
// previous+1 is a certificate by itself).
class DynamicMatching {
public:
    void init(const Graph& g);
    void on_edge_removed(VertexId u, VertexId v);
    void on_vertex_grown(); // keep internal arrays sized to the graph

    // rng, when given, shuffles the greedy rematch order; this is the only
    // randomness in maintenance and makes the maintained maximum matching
    // seed-dependent
    void repair(Rng* rng, std::size_t size_upper_bound);
    void recompute_cold(); // drift guard: full solve from scratch

    std::size_t size() const { return size_; }
    VertexId mate(VertexId v) const { return mate_[v]; }
    // matching edges, canonical order
    Matching current() const;

private:
    friend Matching maximum_matching(const Graph& g);
    void greedy_extend(Rng* rng);
    bool phase(); // one forest growth; true if it augmented
    void contract_blossom(VertexId v, VertexId to);
    VertexId lowest_common_base(VertexId a, VertexId b);
    void mark_path(VertexId v, VertexId stop, VertexId child);
    void flip_to_root(VertexId v);

    const Graph* g_ = nullptr;
    std::vector<VertexId> mate_, parent_, base_, tree_, queue_;
    std::vector<char> even_, in_blossom_, lca_mark_;
    std::size_t size_ = 0;
};

inline constexpr std::size_t kNoSizeBound = static_cast<std::size_t>(-1);

enum class StrategyKind { MaximumThenSubset, Greedy, NearUniformBipartiteJS };

struct MatchingStrategy {
    StrategyKind kind = StrategyKind::MaximumThenSubset;
    // chain length for the bipartite sampler; 0 picks 10*n*n
    std::uint64_t js_steps = 0;
};

// Result of a size-k matching request. A missing matching is either proven
// impossible (k exceeds the matching number) or a strategy giving up
// (greedy dead end, sampler preconditions); callers that must not proceed
// convert this into a NoMatching error.
struct MatchingOutcome {
    std::optional<Matching> matching;
    bool proven_infeasible = false;
    std::string note;
};

MatchingOutcome find_matching_of_size(const Graph& g, std::size_t k,
                                      const MatchingStrategy& strategy, Rng& rng);

// --- matching number lower bounds ---

// ceil(m / (max degree + 1)); EmptyGraph when the graph has no edges
std::size_t vizing_lower_bound(const Graph& g);
// min over 0 <= q < (n-1)/2 of max((n - D_{<=q} + q - 1)/2, q), floored;
// evaluated in doubled integer arithmetic. TooSmall when n < 2.
std::size_t posa_lower_bound(const Graph& g);
// max over 1 <= q < n of (m - sum_{i>=q} i*D_i) / q, ceiling, clamped at 0.
// den_plus_one switches the denominator to q+1 (weaker, also sound).
std::size_t generalized_vizing_bound(const Graph& g, bool den_plus_one = false);

struct MatchingBoundReport {
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t vizing = 0;
    std::size_t posa = 0;
    std::size_t generalized_vizing = 0;
    bool gv_den_plus_one = false;
    std::optional<std::size_t> exact; // filled only when requested
};

MatchingBoundReport matching_bound_report(const Graph& g, bool with_exact,
                                          bool den_plus_one = false);

// --- near-uniform matching chain (bipartite graphs only) ---

bool is_bipartite(const Graph& g);

// Chain state: a perfect matching, or a near-perfect matching plus its two
// uncovered vertices (holes, stored lo<hi).
struct JsState {
    Matching matching;
    std::optional<std::pair<VertexId, VertexId>> holes;
};

// starting state from a maximum matching; InvalidState unless that matching
// is perfect or near-perfect
JsState js_initial_state(const Graph& g);

// One transition. From a perfect matching: drop a uniform matched edge.
// From a near-perfect matching with holes (u,v): draw x uniform over all
// vertices; if x is a hole and uv is an edge, close it; otherwise try to
// rotate x's matched edge onto a uniform hole; else stay.
JsState js_chain_step(const Graph& g, const JsState& state, Rng& rng);

} // namespace dpg
