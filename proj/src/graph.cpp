#include "dpg/graph.hpp"

#include <algorithm>

namespace dpg {

void Matching::check_disjoint() const {
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].u == edges[i].v)
            fail(ErrorCode::LoopEdge, "matching edge is a loop");
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            const Edge &a = edges[i], &b = edges[j];
            if (a.u == b.u || a.u == b.v || a.v == b.u || a.v == b.v)
                fail(ErrorCode::InvalidState, "matching edges share a vertex");
        }
    }
}

void Graph::resize(std::size_t n) {
    adj_.resize(n);
    alive_.assign(n, 1);
    n_live_ = n;
}

VertexId Graph::add_vertex() {
    adj_.emplace_back();
    alive_.push_back(1);
    ++n_live_;
    return static_cast<VertexId>(adj_.size() - 1);
}

VertexId Graph::add_vertex_at(VertexId id) {
    if (id < alive_.size()) {
        if (alive_[id]) fail(ErrorCode::InvalidState, "vertex " + std::to_string(id) + " is live");
        alive_[id] = 1;
        ++n_live_;
        return id;
    }
    while (adj_.size() < id) {
        adj_.emplace_back();
        alive_.push_back(0);
    }
    adj_.emplace_back();
    alive_.push_back(1);
    ++n_live_;
    return id;
}

namespace {
// position of x in sorted vector a, or npos
std::size_t sorted_find(const std::vector<VertexId>& a, VertexId x) {
    auto it = std::lower_bound(a.begin(), a.end(), x);
    if (it == a.end() || *it != x) return static_cast<std::size_t>(-1);
    return static_cast<std::size_t>(it - a.begin());
}
} // namespace

void Graph::add_edge(VertexId u, VertexId v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) fail(ErrorCode::LoopEdge, "loop at " + std::to_string(u));
    auto it = std::lower_bound(adj_[u].begin(), adj_[u].end(), v);
    if (it != adj_[u].end() && *it == v)
        fail(ErrorCode::DuplicateEdge, std::to_string(u) + "-" + std::to_string(v));
    adj_[u].insert(it, v);
    adj_[v].insert(std::lower_bound(adj_[v].begin(), adj_[v].end(), u), u);
    ++m_;
}

void Graph::remove_edge(VertexId u, VertexId v) {
    check_vertex(u);
    check_vertex(v);
    std::size_t pu = sorted_find(adj_[u], v);
    if (pu == static_cast<std::size_t>(-1))
        fail(ErrorCode::MissingEdge, std::to_string(u) + "-" + std::to_string(v));
    adj_[u].erase(adj_[u].begin() + static_cast<std::ptrdiff_t>(pu));
    std::size_t pv = sorted_find(adj_[v], u);
    adj_[v].erase(adj_[v].begin() + static_cast<std::ptrdiff_t>(pv));
    --m_;
}

void Graph::remove_vertex(VertexId v) {
    check_vertex(v);
    for (VertexId w : adj_[v]) {
        auto& list = adj_[w];
        list.erase(list.begin() + static_cast<std::ptrdiff_t>(sorted_find(list, v)));
    }
    m_ -= adj_[v].size();
    adj_[v].clear();
    adj_[v].shrink_to_fit();
    alive_[v] = 0;
    --n_live_;
}

bool Graph::has_edge(VertexId u, VertexId v) const {
    check_vertex(u);
    check_vertex(v);
    return sorted_find(adj_[u], v) != static_cast<std::size_t>(-1);
}

std::vector<VertexId> Graph::vertices() const {
    std::vector<VertexId> out;
    out.reserve(n_live_);
    for (VertexId v = 0; v < alive_.size(); ++v)
        if (alive_[v]) out.push_back(v);
    return out;
}

std::size_t Graph::max_degree() const {
    std::size_t d = 0;
    for (VertexId v = 0; v < alive_.size(); ++v)
        if (alive_[v]) d = std::max(d, adj_[v].size());
    return d;
}

Graph Graph::induced(const std::vector<VertexId>& verts) const {
    Graph out(verts.size());
    std::vector<VertexId> local(id_bound(), kNoVertex);
    for (std::size_t i = 0; i < verts.size(); ++i) {
        check_vertex(verts[i]);
        if (local[verts[i]] != kNoVertex)
            fail(ErrorCode::InvalidState, "duplicate vertex in induced set");
        local[verts[i]] = static_cast<VertexId>(i);
    }
    for (VertexId v : verts)
        for (VertexId w : adj_[v])
            if (v < w && local[w] != kNoVertex) out.add_edge(local[v], local[w]);
    return out;
}

Graph Graph::neighborhood_graph(VertexId v) const {
    check_vertex(v);
    return induced(std::vector<VertexId>(adj_[v].begin(), adj_[v].end()));
}

Graph Graph::complement() const {
    Graph out;
    out.adj_.resize(adj_.size());
    out.alive_ = alive_;
    out.n_live_ = n_live_;
    const std::vector<VertexId> verts = vertices();
    for (VertexId v : verts) {
        const auto& nbrs = adj_[v];
        std::size_t k = 0;
        for (VertexId w : verts) {
            while (k < nbrs.size() && nbrs[k] < w) ++k;
            bool adjacent = k < nbrs.size() && nbrs[k] == w;
            if (w != v && !adjacent) out.adj_[v].push_back(w);
        }
        out.m_ += out.adj_[v].size();
    }
    out.m_ /= 2;
    return out;
}

std::map<std::size_t, std::size_t> Graph::degree_histogram() const {
    std::map<std::size_t, std::size_t> h;
    for (VertexId v = 0; v < alive_.size(); ++v)
        if (alive_[v]) ++h[adj_[v].size()];
    return h;
}

std::size_t Graph::count_degree_at_most(std::size_t q) const {
    std::size_t c = 0;
    for (VertexId v = 0; v < alive_.size(); ++v)
        if (alive_[v] && adj_[v].size() <= q) ++c;
    return c;
}

std::size_t Graph::count_degree_at_least(std::size_t i) const {
    std::size_t c = 0;
    for (VertexId v = 0; v < alive_.size(); ++v)
        if (alive_[v] && adj_[v].size() >= i) ++c;
    return c;
}

std::size_t Graph::component_count() const {
    std::vector<char> seen(id_bound(), 0);
    std::vector<VertexId> stack;
    std::size_t comps = 0;
    for (VertexId v = 0; v < alive_.size(); ++v) {
        if (!alive_[v] || seen[v]) continue;
        ++comps;
        seen[v] = 1;
        stack.push_back(v);
        while (!stack.empty()) {
            VertexId x = stack.back();
            stack.pop_back();
            for (VertexId w : adj_[x])
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
    }
    return comps;
}

bool Graph::operator==(const Graph& o) const {
    if (n_live_ != o.n_live_ || m_ != o.m_) return false;
    const std::size_t bound = std::max(alive_.size(), o.alive_.size());
    for (VertexId v = 0; v < bound; ++v) {
        bool a = live(v), b = o.live(v);
        if (a != b) return false;
        if (a && adj_[v] != o.adj_[v]) return false;
    }
    return true;
}

void Graph::validate() const {
    std::size_t live_count = 0, deg_sum = 0;
    for (VertexId v = 0; v < alive_.size(); ++v) {
        if (!alive_[v]) {
            if (!adj_[v].empty())
                fail(ErrorCode::InvalidState, "tombstone with edges");
            continue;
        }
        ++live_count;
        deg_sum += adj_[v].size();
        for (std::size_t i = 0; i < adj_[v].size(); ++i) {
            VertexId w = adj_[v][i];
            if (w == v) fail(ErrorCode::InvalidState, "loop stored");
            if (!live(w)) fail(ErrorCode::InvalidState, "edge to dead vertex");
            if (i > 0 && adj_[v][i - 1] >= w)
                fail(ErrorCode::InvalidState, "adjacency not strictly sorted");
            if (sorted_find(adj_[w], v) == static_cast<std::size_t>(-1))
                fail(ErrorCode::InvalidState, "asymmetric adjacency");
        }
    }
    if (live_count != n_live_ || deg_sum != 2 * m_)
        fail(ErrorCode::InvalidState, "counter drift");
}

Graph complete_graph(std::size_t n) {
    Graph g(n);
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

Graph cycle_graph(std::size_t n) {
    if (n < 3) fail(ErrorCode::TooSmall, "cycle needs n >= 3");
    Graph g(n);
    for (VertexId v = 0; v < n; ++v) g.add_edge(v, static_cast<VertexId>((v + 1) % n));
    return g;
}

Graph path_graph(std::size_t n) {
    Graph g(n);
    for (VertexId v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
    return g;
}

Graph complete_bipartite(std::size_t a, std::size_t b) {
    Graph g(a + b);
    for (VertexId u = 0; u < a; ++u)
        for (VertexId v = 0; v < b; ++v) g.add_edge(u, static_cast<VertexId>(a + v));
    return g;
}

Graph disjoint_union(const Graph& a, const Graph& b) {
    Graph out;
    const VertexId shift = static_cast<VertexId>(a.id_bound());
    for (std::size_t v = 0; v < a.id_bound() + b.id_bound(); ++v) out.add_vertex();
    for (VertexId v : a.vertices())
        for (VertexId w : a.neighbors(v))
            if (v < w) out.add_edge(v, w);
    for (VertexId v : b.vertices())
        for (VertexId w : b.neighbors(v))
            if (v < w) out.add_edge(v + shift, w + shift);
    // tombstones of the inputs stay tombstones
    for (VertexId v = 0; v < a.id_bound(); ++v)
        if (!a.live(v)) out.remove_vertex(v);
    for (VertexId v = 0; v < b.id_bound(); ++v)
        if (!b.live(v)) out.remove_vertex(v + shift);
    return out;
}

} // namespace dpg
