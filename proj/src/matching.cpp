#include "dpg/matching.hpp"

#include <algorithm>

namespace dpg {

void DynamicMatching::init(const Graph& g) {
    g_ = &g;
    mate_.assign(g.id_bound(), kNoVertex);
    size_ = 0;
    greedy_extend(nullptr);
    while (phase()) {
    }
}

void DynamicMatching::on_vertex_grown() { mate_.resize(g_->id_bound(), kNoVertex); }

void DynamicMatching::on_edge_removed(VertexId u, VertexId v) {
    if (u < mate_.size() && mate_[u] == v) {
        mate_[u] = kNoVertex;
        mate_[v] = kNoVertex;
        --size_;
    }
}

void DynamicMatching::repair(Rng* rng, std::size_t size_upper_bound) {
    on_vertex_grown();
    greedy_extend(rng);
    while (size_ < size_upper_bound && phase()) {
    }
}

void DynamicMatching::recompute_cold() {
    mate_.assign(g_->id_bound(), kNoVertex);
    size_ = 0;
    greedy_extend(nullptr);
    while (phase()) {
    }
}

Matching DynamicMatching::current() const {
    Matching m;
    m.edges.reserve(size_);
    for (VertexId v = 0; v < mate_.size(); ++v)
        if (mate_[v] != kNoVertex && v < mate_[v]) m.edges.push_back({v, mate_[v]});
    return m;
}

void DynamicMatching::greedy_extend(Rng* rng) {
    std::vector<VertexId> exposed;
    for (VertexId v = 0; v < g_->id_bound(); ++v)
        if (g_->live(v) && mate_[v] == kNoVertex) exposed.push_back(v);
    if (rng) rng->shuffle(exposed);
    for (VertexId x : exposed) {
        if (mate_[x] != kNoVertex) continue;
        for (VertexId y : g_->neighbors(x)) {
            if (mate_[y] == kNoVertex) {
                mate_[x] = y;
                mate_[y] = x;
                ++size_;
                break;
            }
        }
    }
}

// One simultaneous forest phase over all exposed roots. Exposed vertices are
// exactly the roots, so an even-even edge inside one tree closes a blossom
// and across trees completes an augmenting path.
bool DynamicMatching::phase() {
    const std::size_t n = g_->id_bound();
    parent_.assign(n, kNoVertex);
    base_.resize(n);
    for (VertexId v = 0; v < n; ++v) base_[v] = v;
    tree_.assign(n, kNoVertex);
    even_.assign(n, 0);
    queue_.clear();
    for (VertexId v = 0; v < n; ++v)
        if (g_->live(v) && mate_[v] == kNoVertex) {
            even_[v] = 1;
            tree_[v] = v;
            queue_.push_back(v);
        }
    for (std::size_t head = 0; head < queue_.size(); ++head) {
        VertexId v = queue_[head];
        for (VertexId to : g_->neighbors(v)) {
            if (base_[v] == base_[to] || mate_[v] == to) continue;
            if (even_[to]) {
                if (tree_[to] == tree_[v]) {
                    contract_blossom(v, to);
                } else {
                    flip_to_root(v);
                    flip_to_root(to);
                    mate_[v] = to;
                    mate_[to] = v;
                    ++size_;
                    return true;
                }
            } else if (parent_[to] == kNoVertex) {
                parent_[to] = v;
                VertexId u = mate_[to];
                even_[u] = 1;
                tree_[u] = tree_[v];
                queue_.push_back(u);
            }
        }
    }
    return false;
}

VertexId DynamicMatching::lowest_common_base(VertexId a, VertexId b) {
    lca_mark_.assign(g_->id_bound(), 0);
    VertexId x = a;
    while (true) {
        x = base_[x];
        lca_mark_[x] = 1;
        if (mate_[x] == kNoVertex) break; // reached the root
        x = parent_[mate_[x]];
    }
    VertexId y = b;
    while (true) {
        y = base_[y];
        if (lca_mark_[y]) return y;
        y = parent_[mate_[y]];
    }
}

void DynamicMatching::mark_path(VertexId v, VertexId stop, VertexId child) {
    while (base_[v] != stop) {
        in_blossom_[base_[v]] = 1;
        in_blossom_[base_[mate_[v]]] = 1;
        parent_[v] = child;
        child = mate_[v];
        v = parent_[mate_[v]];
    }
}

void DynamicMatching::contract_blossom(VertexId v, VertexId to) {
    VertexId cb = lowest_common_base(v, to);
    in_blossom_.assign(g_->id_bound(), 0);
    mark_path(v, cb, to);
    mark_path(to, cb, v);
    for (VertexId i = 0; i < g_->id_bound(); ++i)
        if (in_blossom_[base_[i]]) {
            base_[i] = cb;
            if (!even_[i]) {
                even_[i] = 1;
                tree_[i] = tree_[v];
                queue_.push_back(i);
            }
        }
}

// v is even; reverse matched/unmatched along its tree path so the root gets
// matched and v becomes free for the caller to pair with the cross vertex
void DynamicMatching::flip_to_root(VertexId v) {
    VertexId a = mate_[v];
    while (a != kNoVertex) {
        VertexId e = parent_[a];
        VertexId next = mate_[e];
        mate_[a] = e;
        mate_[e] = a;
        a = next;
    }
}

Matching maximum_matching(const Graph& g) {
    DynamicMatching dm;
    dm.init(g);
    return dm.current();
}

namespace {

Matching uniform_subset(std::vector<Edge> pool, std::size_t k, Rng& rng) {
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return Matching{std::move(pool)};
}

std::vector<Edge> all_edges_canonical(const Graph& g) {
    std::vector<Edge> edges;
    edges.reserve(g.m());
    for (VertexId v : g.vertices())
        for (VertexId w : g.neighbors(v))
            if (v < w) edges.push_back({v, w});
    return edges;
}

} // namespace

MatchingOutcome find_matching_of_size(const Graph& g, std::size_t k,
                                      const MatchingStrategy& strategy, Rng& rng) {
    MatchingOutcome out;
    if (k == 0) {
        out.matching = Matching{};
        return out;
    }
    switch (strategy.kind) {
        case StrategyKind::MaximumThenSubset: {
            Matching mm = maximum_matching(g);
            if (mm.size() < k) {
                out.proven_infeasible = true;
                out.note = "matching number is " + std::to_string(mm.size());
                return out;
            }
            out.matching = uniform_subset(std::move(mm.edges), k, rng);
            return out;
        }
        case StrategyKind::Greedy: {
            std::vector<Edge> edges = all_edges_canonical(g);
            rng.shuffle(edges);
            std::vector<char> covered(g.id_bound(), 0);
            std::vector<Edge> picked;
            for (const Edge& e : edges) {
                if (covered[e.u] || covered[e.v]) continue;
                covered[e.u] = covered[e.v] = 1;
                picked.push_back(e);
                if (picked.size() == k) break;
            }
            if (picked.size() == k) {
                out.matching = Matching{std::move(picked)};
            } else {
                // picked is maximal here, so nu <= 2*|picked| proves some gaps
                out.proven_infeasible = k > 2 * picked.size();
                out.note = "greedy stalled at " + std::to_string(picked.size());
            }
            return out;
        }
        case StrategyKind::NearUniformBipartiteJS: {
            if (!is_bipartite(g)) fail(ErrorCode::NotBipartite, "chain sampler needs a bipartite graph");
            Matching mm = maximum_matching(g);
            if (mm.size() < k) {
                out.proven_infeasible = true;
                out.note = "matching number is " + std::to_string(mm.size());
                return out;
            }
            const std::size_t n = g.n();
            if (2 * mm.size() + 2 < n) {
                out.note = "graph has no perfect or near-perfect matching";
                return out;
            }
            JsState s;
            if (2 * mm.size() == n) {
                s.matching = std::move(mm);
            } else {
                s = js_initial_state(g);
            }
            std::uint64_t steps = strategy.js_steps ? strategy.js_steps
                                                    : 10 * static_cast<std::uint64_t>(n) * n;
            for (std::uint64_t i = 0; i < steps; ++i) s = js_chain_step(g, s, rng);
            // land on a state large enough to subset from
            std::uint64_t patience = 50 * static_cast<std::uint64_t>(n) + 50;
            while (s.matching.size() < k && patience-- > 0) s = js_chain_step(g, s, rng);
            if (s.matching.size() < k) {
                out.note = "chain did not reach a matching of the requested size";
                return out;
            }
            out.matching = uniform_subset(std::move(s.matching.edges), k, rng);
            return out;
        }
    }
    fail(ErrorCode::InvalidState, "unknown strategy");
}

std::size_t vizing_lower_bound(const Graph& g) {
    if (g.m() == 0) fail(ErrorCode::EmptyGraph, "no edges");
    return (g.m() + g.max_degree()) / (g.max_degree() + 1);
}

std::size_t posa_lower_bound(const Graph& g) {
    const std::size_t n = g.n();
    if (n < 2) fail(ErrorCode::TooSmall, "need n >= 2");
    // doubled arithmetic: 2*value_q = max(n - D_{<=q} + q - 1, 2q)
    long long best2 = -1;
    for (std::size_t q = 0; 2 * q < n - 1; ++q) {
        long long expr2 = static_cast<long long>(n) - static_cast<long long>(g.count_degree_at_most(q)) +
                          static_cast<long long>(q) - 1;
        long long v2 = std::max(expr2, static_cast<long long>(2 * q));
        if (best2 < 0 || v2 < best2) best2 = v2;
    }
    if (best2 < 0) best2 = 0;
    return static_cast<std::size_t>(std::max(0LL, best2 / 2));
}

std::size_t generalized_vizing_bound(const Graph& g, bool den_plus_one) {
    const std::size_t n = g.n();
    long long best = 0;
    if (n < 2) return 0;
    // suffix[q] = sum over i >= q of i * D_i
    auto hist = g.degree_histogram();
    for (std::size_t q = 1; q < n; ++q) {
        long long suffix = 0;
        for (const auto& [deg, cnt] : hist)
            if (deg >= q) suffix += static_cast<long long>(deg) * static_cast<long long>(cnt);
        long long numer = static_cast<long long>(g.m()) - suffix;
        if (numer <= 0) continue;
        long long den = static_cast<long long>(q) + (den_plus_one ? 1 : 0);
        best = std::max(best, (numer + den - 1) / den);
    }
    return static_cast<std::size_t>(best);
}

MatchingBoundReport matching_bound_report(const Graph& g, bool with_exact, bool den_plus_one) {
    MatchingBoundReport r;
    r.n = g.n();
    r.m = g.m();
    r.gv_den_plus_one = den_plus_one;
    r.vizing = g.m() == 0 ? 0 : vizing_lower_bound(g);
    r.posa = g.n() < 2 ? 0 : posa_lower_bound(g);
    r.generalized_vizing = generalized_vizing_bound(g, den_plus_one);
    if (with_exact) r.exact = maximum_matching(g).size();
    return r;
}

bool is_bipartite(const Graph& g) {
    std::vector<int> color(g.id_bound(), -1);
    std::vector<VertexId> stack;
    for (VertexId s : g.vertices()) {
        if (color[s] >= 0) continue;
        color[s] = 0;
        stack.push_back(s);
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            for (VertexId w : g.neighbors(v)) {
                if (color[w] < 0) {
                    color[w] = 1 - color[v];
                    stack.push_back(w);
                } else if (color[w] == color[v]) {
                    return false;
                }
            }
        }
    }
    return true;
}

namespace {

// mate array from a state, validating it against the graph
std::vector<VertexId> js_validate(const Graph& g, const JsState& s) {
    std::vector<VertexId> mate(g.id_bound(), kNoVertex);
    for (const Edge& e : s.matching.edges) {
        if (!g.live(e.u) || !g.live(e.v) || !g.has_edge(e.u, e.v))
            fail(ErrorCode::InvalidState, "state edge not in graph");
        if (mate[e.u] != kNoVertex || mate[e.v] != kNoVertex)
            fail(ErrorCode::InvalidState, "state edges overlap");
        mate[e.u] = e.v;
        mate[e.v] = e.u;
    }
    const std::size_t covered = 2 * s.matching.size();
    if (s.holes) {
        auto [u, v] = *s.holes;
        if (covered + 2 != g.n()) fail(ErrorCode::InvalidState, "not a near-perfect matching");
        if (!g.live(u) || !g.live(v) || u == v || mate[u] != kNoVertex || mate[v] != kNoVertex)
            fail(ErrorCode::InvalidState, "holes do not match the uncovered pair");
    } else if (covered != g.n()) {
        fail(ErrorCode::InvalidState, "not a perfect matching");
    }
    return mate;
}

std::pair<VertexId, VertexId> sorted_pair(VertexId a, VertexId b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

} // namespace

JsState js_initial_state(const Graph& g) {
    if (!is_bipartite(g)) fail(ErrorCode::NotBipartite, "chain needs a bipartite graph");
    Matching mm = maximum_matching(g);
    JsState s;
    if (2 * mm.size() == g.n()) {
        s.matching = std::move(mm);
        return s;
    }
    if (2 * mm.size() + 2 == g.n()) {
        std::vector<char> covered(g.id_bound(), 0);
        for (const Edge& e : mm.edges) covered[e.u] = covered[e.v] = 1;
        std::vector<VertexId> holes;
        for (VertexId v : g.vertices())
            if (!covered[v]) holes.push_back(v);
        s.matching = std::move(mm);
        s.holes = sorted_pair(holes[0], holes[1]);
        return s;
    }
    fail(ErrorCode::InvalidState, "graph has no perfect or near-perfect matching");
}

JsState js_chain_step(const Graph& g, const JsState& state, Rng& rng) {
    if (!is_bipartite(g)) fail(ErrorCode::NotBipartite, "chain needs a bipartite graph");
    std::vector<VertexId> mate = js_validate(g, state);
    JsState next = state;
    if (!state.holes) {
        // perfect: drop a uniform matched edge
        std::size_t i = static_cast<std::size_t>(rng.below(next.matching.size()));
        Edge e = next.matching.edges[i];
        next.matching.edges.erase(next.matching.edges.begin() + static_cast<std::ptrdiff_t>(i));
        next.holes = sorted_pair(e.u, e.v);
        return next;
    }
    auto [u, v] = *state.holes;
    const std::vector<VertexId> live = g.vertices();
    VertexId x = live[rng.below(live.size())];
    if (x == u || x == v) {
        if (g.has_edge(u, v)) {
            next.matching.edges.push_back({u, v});
            next.holes.reset();
        }
        return next;
    }
    VertexId y = mate[x];
    VertexId w = rng.below(2) == 0 ? u : v;
    if (g.has_edge(x, w)) {
        for (Edge& e : next.matching.edges)
            if (e == Edge{x, y}) {
                e = {x, w};
                break;
            }
        next.holes = sorted_pair(w == u ? v : u, y);
    }
    return next;
}

} // namespace dpg
