#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpg/errors.hpp"

namespace dpg {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = static_cast<VertexId>(-1);

// Undirected edge. Stored endpoints keep their construction order (matchings
// remember selection order for trace replay); lo/hi give the canonical form.
struct Edge {
    VertexId u = kNoVertex;
    VertexId v = kNoVertex;

    VertexId lo() const { return u < v ? u : v; }
    VertexId hi() const { return u < v ? v : u; }

    bool operator==(const Edge& o) const { return lo() == o.lo() && hi() == o.hi(); }
};

// Canonical ordering on (lo, hi); used whenever edge lists are serialized.
inline bool edge_less(const Edge& a, const Edge& b) {
    return a.lo() != b.lo() ? a.lo() < b.lo() : a.hi() < b.hi();
}

// A set of pairwise disjoint edges, in selection order.
struct Matching {
    std::vector<Edge> edges;

    std::size_t size() const { return edges.size(); }
    bool covers(VertexId x) const {
        for (const Edge& e : edges)
            if (e.u == x || e.v == x) return true;
        return false;
    }
    // vertices of union(M) in selection order, (lo, hi) within each edge;
    // this is the sequence the odd-step r-index points into
    std::vector<VertexId> covered_sequence() const {
        std::vector<VertexId> out;
        out.reserve(2 * edges.size());
        for (const Edge& e : edges) {
            out.push_back(e.lo());
            out.push_back(e.hi());
        }
        return out;
    }
    void check_disjoint() const;
};

// Simple undirected graph over dense vertex ids. Removing a vertex tombstones
// its id (ids are never reused while a trace is alive, so replay references
// stay valid). Adjacency lists are kept sorted ascending: iteration order is a
// pure function of the graph, never of container internals, which is what
// makes runs reproducible.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t n) { resize(n); }

    VertexId add_vertex();
    // revive a tombstoned id (or claim a brand-new one past the current
    // bound); replay needs inserted vertices to land on their recorded ids
    VertexId add_vertex_at(VertexId id);
    void add_edge(VertexId u, VertexId v);
    void remove_edge(VertexId u, VertexId v);
    void remove_vertex(VertexId v);

    bool has_edge(VertexId u, VertexId v) const;
    bool live(VertexId v) const { return v < alive_.size() && alive_[v]; }
    std::size_t degree(VertexId v) const { check_vertex(v); return adj_[v].size(); }
    std::span<const VertexId> neighbors(VertexId v) const {
        check_vertex(v);
        return {adj_[v].data(), adj_[v].size()};
    }

    std::size_t n() const { return n_live_; }
    std::size_t m() const { return m_; }
    // one past the largest id ever allocated (tombstones included)
    std::size_t id_bound() const { return adj_.size(); }

    std::vector<VertexId> vertices() const; // live ids, ascending
    std::size_t max_degree() const;

    // induced subgraph on `verts` (all live); vertex i of the result is verts[i]
    Graph induced(const std::vector<VertexId>& verts) const;
    // induced subgraph on the neighborhood of v, v excluded
    Graph neighborhood_graph(VertexId v) const;
    // complement over live vertices, same id space, tombstones preserved
    Graph complement() const;

    std::map<std::size_t, std::size_t> degree_histogram() const;
    // D_{<=q}: number of live vertices with degree <= q
    std::size_t count_degree_at_most(std::size_t q) const;
    // D_{>=i}: number of live vertices with degree >= i
    std::size_t count_degree_at_least(std::size_t i) const;

    std::size_t component_count() const;

    bool operator==(const Graph& o) const;

    // full invariant sweep (sortedness, symmetry, no loops or duplicates,
    // counter consistency); debug/test hook, O(n + m log m)
    void validate() const;

private:
    void resize(std::size_t n);
    void check_vertex(VertexId v) const {
        if (!live(v)) fail(ErrorCode::UnknownVertex, "vertex " + std::to_string(v));
    }

    std::vector<std::vector<VertexId>> adj_;
    std::vector<char> alive_;
    std::size_t n_live_ = 0;
    std::size_t m_ = 0;
};

// Graph plus the degree-deficiency bookkeeping: at most one vertex is marked
// deficient, meaning its prescribed degree is one above its current degree
// (the implied stub-edge is never stored in the adjacency).
struct StubGraph {
    Graph graph;
    std::optional<VertexId> deficient;

    StubGraph() = default;
    explicit StubGraph(Graph g) : graph(std::move(g)) {}

    std::size_t p_degree(VertexId v) const {
        return graph.degree(v) + (deficient && *deficient == v ? 1 : 0);
    }
    void validate() const {
        graph.validate();
        if (deficient && !graph.live(*deficient))
            fail(ErrorCode::InvalidState, "deficient vertex is not live");
    }
    bool operator==(const StubGraph& o) const {
        return deficient == o.deficient && graph == o.graph;
    }
};

Graph complete_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph complete_bipartite(std::size_t a, std::size_t b);
// disjoint union; ids of b are shifted by a.id_bound()
Graph disjoint_union(const Graph& a, const Graph& b);

} // namespace dpg
