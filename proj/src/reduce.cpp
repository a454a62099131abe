#include "dpg/reduce.hpp"

#include <algorithm>
#include <atomic>
#include <set>

#include "dpg/edgelist_io.hpp"
#include "dpg/matching.hpp"

namespace dpg {

const char* inv_op_kind_name(InvOpKind op) {
    switch (op) {
        case InvOpKind::InvOp1: return "InvOp1";
        case InvOpKind::InvOp2: return "InvOp2";
        case InvOpKind::InvOp3a: return "InvOp3a";
        case InvOpKind::InvOp3b: return "InvOp3b";
    }
    return "?";
}

InvOpKind inv_op_kind_from_name(const std::string& name) {
    if (name == "InvOp1") return InvOpKind::InvOp1;
    if (name == "InvOp2") return InvOpKind::InvOp2;
    if (name == "InvOp3a") return InvOpKind::InvOp3a;
    if (name == "InvOp3b") return InvOpKind::InvOp3b;
    fail(ErrorCode::BadFormat, "unknown inverse op name: " + name);
}

namespace {

// complement of the induced subgraph on verts (sorted), with the local->global map
struct ComplementView {
    std::vector<VertexId> verts;
    Graph comp;
};

ComplementView complement_view(const Graph& g, std::vector<VertexId> verts) {
    std::sort(verts.begin(), verts.end());
    ComplementView view;
    view.comp = g.induced(verts).complement();
    view.verts = std::move(verts);
    return view;
}

Matching to_global(const ComplementView& view, const Matching& local) {
    Matching out;
    out.edges.reserve(local.size());
    for (const Edge& e : local.edges) out.edges.push_back({view.verts[e.u], view.verts[e.v]});
    return out;
}

// perfect matching among the pairwise non-edges of verts, or nullopt
std::optional<Matching> perfect_complement_matching(const Graph& g, std::vector<VertexId> verts) {
    if (verts.size() % 2 != 0) return std::nullopt;
    if (verts.empty()) return Matching{};
    ComplementView view = complement_view(g, std::move(verts));
    Matching mm = maximum_matching(view.comp);
    if (2 * mm.size() != view.verts.size()) return std::nullopt;
    return to_global(view, mm);
}

// matching of non-edges covering all of verts but exactly one (|verts| odd)
std::optional<std::pair<Matching, VertexId>> near_perfect_complement_matching(
    const Graph& g, std::vector<VertexId> verts) {
    if (verts.size() % 2 != 1) return std::nullopt;
    ComplementView view = complement_view(g, std::move(verts));
    Matching mm = maximum_matching(view.comp);
    if (2 * mm.size() + 1 != view.verts.size()) return std::nullopt;
    std::vector<char> covered(view.verts.size(), 0);
    for (const Edge& e : mm.edges) covered[e.u] = covered[e.v] = 1;
    VertexId uncovered = kNoVertex;
    for (std::size_t i = 0; i < view.verts.size(); ++i)
        if (!covered[i]) uncovered = view.verts[i];
    return std::make_pair(to_global(view, mm), uncovered);
}

} // namespace

std::optional<RemovabilityCertificate> removability(const StubGraph& sg, VertexId w) {
    const Graph& g = sg.graph;
    if (!g.live(w)) fail(ErrorCode::UnknownVertex, "vertex " + std::to_string(w));
    const std::size_t d = g.degree(w);
    const bool self_stub = sg.deficient && *sg.deficient == w;

    RemovabilityCertificate cert;
    cert.vertex = w;
    cert.stub_before = sg.deficient;
    std::vector<VertexId> verts(g.neighbors(w).begin(), g.neighbors(w).end());

    if (self_stub) {
        if (d % 2 == 1) {
            // p-degree even: reverse of an even insertion that lifted the
            // stub-edge; the neighbor left unmatched takes the stub back
            cert.inv_op = InvOpKind::InvOp1;
            auto res = near_perfect_complement_matching(g, std::move(verts));
            if (!res) return std::nullopt;
            cert.restored_matching = std::move(res->first);
            cert.new_deficient = res->second;
        } else {
            cert.inv_op = InvOpKind::InvOp3a;
            auto res = perfect_complement_matching(g, std::move(verts));
            if (!res) return std::nullopt;
            cert.restored_matching = std::move(*res);
        }
        return cert;
    }
    if (d % 2 == 0) {
        // no forward op inserts an isolated plain vertex
        if (d == 0) return std::nullopt;
        cert.inv_op = InvOpKind::InvOp1;
        auto res = perfect_complement_matching(g, std::move(verts));
        if (!res) return std::nullopt;
        cert.restored_matching = std::move(*res);
        cert.new_deficient = sg.deficient; // an unrelated stub persists
        return cert;
    }
    if (!sg.deficient) {
        cert.inv_op = InvOpKind::InvOp2;
        auto res = near_perfect_complement_matching(g, std::move(verts));
        if (!res) return std::nullopt;
        cert.restored_matching = std::move(res->first);
        cert.new_deficient = res->second;
        return cert;
    }
    // odd degree with the stub elsewhere: only the "lift then drop the edge
    // to u" insertion reverses this, and it needs u off the neighborhood
    const VertexId u = *sg.deficient;
    if (g.has_edge(u, w)) return std::nullopt;
    cert.inv_op = InvOpKind::InvOp3b;
    verts.push_back(u);
    auto res = perfect_complement_matching(g, std::move(verts));
    if (!res) return std::nullopt;
    cert.restored_matching = std::move(*res);
    return cert;
}

namespace {

// all matchings of complement non-edges on verts covering everything except
// at most `spare` vertices (0 or 1), lexicographic by (vertex, partner)
void enumerate_complement_matchings(const Graph& g, const std::vector<VertexId>& verts,
                                    std::size_t spare, std::size_t limit,
                                    std::vector<std::pair<Matching, VertexId>>& out) {
    std::vector<Edge> chosen;
    std::vector<char> done(verts.size(), 0);
    VertexId skipped = kNoVertex;

    auto rec = [&](auto&& self, std::size_t lo) -> void {
        if (limit && out.size() >= limit) return;
        while (lo < verts.size() && done[lo]) ++lo;
        if (lo == verts.size()) {
            if (spare == 1 && skipped == kNoVertex) return;
            out.emplace_back(Matching{chosen}, skipped);
            return;
        }
        for (std::size_t j = lo + 1; j < verts.size(); ++j) {
            if (done[j] || g.has_edge(verts[lo], verts[j])) continue;
            done[lo] = done[j] = 1;
            chosen.push_back({verts[lo], verts[j]});
            self(self, lo + 1);
            chosen.pop_back();
            done[lo] = done[j] = 0;
            if (limit && out.size() >= limit) return;
        }
        if (spare == 1 && skipped == kNoVertex) {
            skipped = verts[lo];
            done[lo] = 1;
            self(self, lo + 1);
            done[lo] = 0;
            skipped = kNoVertex;
        }
    };
    rec(rec, 0);
}

} // namespace

std::vector<RemovabilityCertificate> enumerate_certificates(const StubGraph& sg, VertexId w,
                                                            std::size_t limit) {
    const Graph& g = sg.graph;
    if (!g.live(w)) fail(ErrorCode::UnknownVertex, "vertex " + std::to_string(w));
    const std::size_t d = g.degree(w);
    const bool self_stub = sg.deficient && *sg.deficient == w;

    RemovabilityCertificate base;
    base.vertex = w;
    base.stub_before = sg.deficient;
    std::vector<VertexId> verts(g.neighbors(w).begin(), g.neighbors(w).end());
    std::size_t spare = 0;

    if (self_stub) {
        if (d % 2 == 1) {
            base.inv_op = InvOpKind::InvOp1;
            spare = 1;
        } else {
            base.inv_op = InvOpKind::InvOp3a;
        }
    } else if (d % 2 == 0) {
        if (d == 0) return {};
        base.inv_op = InvOpKind::InvOp1;
        base.new_deficient = sg.deficient;
    } else if (!sg.deficient) {
        base.inv_op = InvOpKind::InvOp2;
        spare = 1;
    } else {
        const VertexId u = *sg.deficient;
        if (g.has_edge(u, w)) return {};
        base.inv_op = InvOpKind::InvOp3b;
        verts.push_back(u);
        std::sort(verts.begin(), verts.end());
    }

    std::vector<std::pair<Matching, VertexId>> raw;
    enumerate_complement_matchings(g, verts, spare, limit, raw);
    std::vector<RemovabilityCertificate> out;
    out.reserve(raw.size());
    for (auto& [matching, skipped] : raw) {
        RemovabilityCertificate cert = base;
        cert.restored_matching = std::move(matching);
        if (spare == 1) cert.new_deficient = skipped;
        out.push_back(std::move(cert));
    }
    return out;
}

void dp_remove(StubGraph& sg, const RemovabilityCertificate& cert) {
    Graph& g = sg.graph;
    const VertexId w = cert.vertex;
    auto stale = [&](const std::string& why) {
        fail(ErrorCode::StaleCertificate, why + " (vertex " + std::to_string(w) + ")");
    };
    if (!g.live(w)) stale("vertex is gone");
    if (cert.stub_before != sg.deficient) stale("stub moved");
    const std::size_t d = g.degree(w);
    const bool self_stub = sg.deficient && *sg.deficient == w;

    // the op must still be the one the current parity and stub state force
    std::vector<VertexId> covered_set(g.neighbors(w).begin(), g.neighbors(w).end());
    switch (cert.inv_op) {
        case InvOpKind::InvOp1:
            if (self_stub) {
                if (d % 2 != 1) stale("parity changed");
                if (!cert.new_deficient || !g.has_edge(w, *cert.new_deficient))
                    stale("stub handover target is not a neighbor");
                std::erase(covered_set, *cert.new_deficient);
            } else {
                if (d % 2 != 0 || d == 0) stale("parity changed");
                if (cert.new_deficient != sg.deficient) stale("stub bookkeeping mismatch");
            }
            break;
        case InvOpKind::InvOp2:
            if (sg.deficient) stale("a stub appeared");
            if (d % 2 != 1) stale("parity changed");
            if (!cert.new_deficient || !g.has_edge(w, *cert.new_deficient))
                stale("uncovered neighbor is not a neighbor");
            std::erase(covered_set, *cert.new_deficient);
            break;
        case InvOpKind::InvOp3a:
            if (!self_stub || d % 2 != 0) stale("not the deficient even-degree case");
            if (cert.new_deficient) stale("deficiency must clear");
            break;
        case InvOpKind::InvOp3b: {
            if (!sg.deficient || self_stub) stale("stub is not on another vertex");
            if (d % 2 != 1) stale("parity changed");
            const VertexId u = *sg.deficient;
            if (g.has_edge(u, w)) stale("removed vertex became adjacent to the stub");
            if (cert.new_deficient) stale("deficiency must clear");
            covered_set.push_back(u);
            break;
        }
    }

    // restored edges: disjoint non-edges exactly covering covered_set
    std::vector<VertexId> ends;
    for (const Edge& e : cert.restored_matching.edges) {
        if (e.u == e.v || !g.live(e.u) || !g.live(e.v)) stale("restored edge is malformed");
        if (g.has_edge(e.u, e.v)) stale("restored pair is already an edge");
        ends.push_back(e.u);
        ends.push_back(e.v);
    }
    std::sort(ends.begin(), ends.end());
    if (std::adjacent_find(ends.begin(), ends.end()) != ends.end())
        stale("restored edges overlap");
    std::sort(covered_set.begin(), covered_set.end());
    if (ends != covered_set) stale("restored edges do not cover the neighborhood");

    g.remove_vertex(w);
    for (const Edge& e : cert.restored_matching.edges) g.add_edge(e.u, e.v);
    sg.deficient = cert.new_deficient;
}

DpStepPlan mirror_certificate(const RemovabilityCertificate& cert) {
    DpStepPlan plan;
    plan.reuse_id = cert.vertex;
    plan.lifted = cert.restored_matching.edges;
    switch (cert.inv_op) {
        case InvOpKind::InvOp1:
            if (cert.stub_before && *cert.stub_before == cert.vertex) {
                plan.lift_stub = true; // the handed-over stub comes back
                plan.p_degree = 2 * (plan.lifted.size() + 1);
            } else {
                plan.p_degree = 2 * plan.lifted.size();
            }
            break;
        case InvOpKind::InvOp2:
            plan.lift_stub = true;
            plan.p_degree = 2 * plan.lifted.size() + 1;
            break;
        case InvOpKind::InvOp3a:
            plan.r = 0;
            plan.p_degree = 2 * plan.lifted.size() + 1;
            break;
        case InvOpKind::InvOp3b: {
            plan.p_degree = 2 * plan.lifted.size() - 1;
            const VertexId u = *cert.stub_before;
            const std::vector<VertexId> seq = cert.restored_matching.covered_sequence();
            for (std::size_t i = 0; i < seq.size(); ++i)
                if (seq[i] == u) {
                    plan.r = i + 1;
                    break;
                }
            break;
        }
    }
    return plan;
}

IrreducibilityResult is_irreducible_serial(const StubGraph& sg) {
    for (VertexId v : sg.graph.vertices())
        if (auto cert = removability(sg, v)) return {false, std::move(cert)};
    return {true, std::nullopt};
}

IrreducibilityResult is_irreducible(const StubGraph& sg) {
#ifdef _OPENMP
    const std::vector<VertexId> verts = sg.graph.vertices();
    std::atomic<std::size_t> first_removable{verts.size()};
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(verts.size()); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        // indices past an already-found removable vertex cannot win
        if (idx >= first_removable.load(std::memory_order_relaxed)) continue;
        if (removability(sg, verts[idx])) {
            std::size_t cur = first_removable.load(std::memory_order_relaxed);
            while (idx < cur &&
                   !first_removable.compare_exchange_weak(cur, idx, std::memory_order_relaxed)) {
            }
        }
    }
    const std::size_t found = first_removable.load();
    if (found == verts.size()) return {true, std::nullopt};
    return {false, removability(sg, verts[found])};
#else
    return is_irreducible_serial(sg);
#endif
}

const char* order_policy_name(OrderPolicy policy) {
    switch (policy) {
        case OrderPolicy::Random: return "random";
        case OrderPolicy::MinDegreeFirst: return "min-degree";
        case OrderPolicy::MaxDegreeFirst: return "max-degree";
        case OrderPolicy::MostNonEdgesInNeighborhood: return "most-non-edges";
    }
    return "?";
}

OrderPolicy order_policy_from_name(const std::string& name) {
    if (name == "random") return OrderPolicy::Random;
    if (name == "min-degree") return OrderPolicy::MinDegreeFirst;
    if (name == "max-degree") return OrderPolicy::MaxDegreeFirst;
    if (name == "most-non-edges") return OrderPolicy::MostNonEdgesInNeighborhood;
    fail(ErrorCode::BadParams, "unknown policy: " + name);
}

namespace {

std::size_t non_edges_in_neighborhood(const Graph& g, VertexId v) {
    const auto nbrs = g.neighbors(v);
    std::size_t inside = 0;
    for (VertexId a : nbrs) {
        // two-pointer intersection of sorted lists
        const auto an = g.neighbors(a);
        std::size_t i = 0, j = 0;
        while (i < an.size() && j < nbrs.size()) {
            if (an[i] < nbrs[j]) ++i;
            else if (an[i] > nbrs[j]) ++j;
            else { ++inside; ++i; ++j; }
        }
    }
    inside /= 2;
    return nbrs.size() * (nbrs.size() - 1) / 2 - inside;
}

std::vector<VertexId> policy_order(const StubGraph& sg, OrderPolicy policy, Rng& rng) {
    std::vector<VertexId> verts = sg.graph.vertices();
    const Graph& g = sg.graph;
    switch (policy) {
        case OrderPolicy::Random:
            rng.shuffle(verts);
            break;
        case OrderPolicy::MinDegreeFirst:
            std::stable_sort(verts.begin(), verts.end(), [&](VertexId a, VertexId b) {
                return g.degree(a) != g.degree(b) ? g.degree(a) < g.degree(b) : a < b;
            });
            break;
        case OrderPolicy::MaxDegreeFirst:
            std::stable_sort(verts.begin(), verts.end(), [&](VertexId a, VertexId b) {
                return g.degree(a) != g.degree(b) ? g.degree(a) > g.degree(b) : a < b;
            });
            break;
        case OrderPolicy::MostNonEdgesInNeighborhood: {
            std::vector<std::size_t> key(g.id_bound(), 0);
            for (VertexId v : verts) key[v] = non_edges_in_neighborhood(g, v);
            std::stable_sort(verts.begin(), verts.end(), [&](VertexId a, VertexId b) {
                return key[a] != key[b] ? key[a] > key[b] : a < b;
            });
            break;
        }
    }
    return verts;
}

ReductionResult exact_reduce(StubGraph& sg, const ReduceOptions& options) {
    if (sg.graph.n() > 20) fail(ErrorCode::TooLarge, "exact search is capped at 20 vertices");
    std::set<std::string> seen;
    StubGraph best = sg;
    std::vector<RemovabilityCertificate> best_seq;
    std::vector<RemovabilityCertificate> current;
    std::size_t used = 0;
    bool exhausted = false;

    auto rec = [&](auto&& self) -> void {
        if (exhausted) return;
        if (!seen.insert(to_edge_list(sg)).second) return;
        if (sg.graph.n() < best.graph.n()) {
            best = sg;
            best_seq = current;
        }
        for (VertexId v : sg.graph.vertices()) {
            for (const RemovabilityCertificate& cert : enumerate_certificates(sg, v)) {
                if (options.budget && used >= options.budget) {
                    exhausted = true;
                    return;
                }
                ++used;
                dp_remove(sg, cert);
                current.push_back(cert);
                self(self);
                current.pop_back();
                apply_dp_step(sg, mirror_certificate(cert));
                if (exhausted) return;
            }
        }
    };
    rec(rec);

    sg = best;
    ReductionResult result;
    result.kernel = best;
    result.removals = std::move(best_seq);
    result.removed_count = result.removals.size();
    result.budget_exhausted = exhausted;
    result.irreducible = !exhausted || is_irreducible(sg).irreducible;
    return result;
}

} // namespace

ReductionResult reduce_to_kernel(StubGraph& sg, const ReduceOptions& options) {
    if (options.exact) return exact_reduce(sg, options);
    Rng rng(options.seed);

    struct Frame {
        std::vector<VertexId> order;
        std::size_t next = 0;
        RemovabilityCertificate applied;
    };
    std::vector<Frame> stack;
    std::vector<RemovabilityCertificate> current;
    StubGraph best = sg;
    std::vector<RemovabilityCertificate> best_removals;
    std::size_t used = 0, undos = 0;
    bool exhausted = false;
    const auto out_of_budget = [&] { return options.budget && used >= options.budget; };

    Frame frame{policy_order(sg, options.policy, rng), 0, {}};
    while (true) {
        bool advanced = false;
        while (frame.next < frame.order.size()) {
            const VertexId v = frame.order[frame.next++];
            if (!sg.graph.live(v)) continue;
            auto cert = removability(sg, v);
            if (!cert) continue;
            if (out_of_budget()) {
                exhausted = true;
                break;
            }
            ++used;
            dp_remove(sg, *cert);
            frame.applied = *cert;
            stack.push_back(std::move(frame));
            current.push_back(std::move(*cert));
            if (current.size() > best_removals.size()) {
                best = sg;
                best_removals = current;
            }
            frame = Frame{policy_order(sg, options.policy, rng), 0, {}};
            advanced = true;
            break;
        }
        if (exhausted || advanced) {
            if (exhausted) break;
            continue;
        }
        // stuck: every vertex scanned, none removable
        if (stack.empty() || undos >= options.backtrack) break;
        if (out_of_budget()) {
            exhausted = true;
            break;
        }
        ++used;
        ++undos;
        Frame prev = std::move(stack.back());
        stack.pop_back();
        apply_dp_step(sg, mirror_certificate(prev.applied));
        current.pop_back();
        frame = std::move(prev);
    }

    sg = best;
    ReductionResult result;
    result.kernel = best;
    result.removals = std::move(best_removals);
    result.removed_count = result.removals.size();
    result.budget_exhausted = exhausted;
    result.irreducible = !exhausted && is_irreducible(sg).irreducible;
    return result;
}

std::optional<std::vector<RemovabilityCertificate>> remove_independent_set(
    StubGraph& sg, const std::vector<VertexId>& S) {
    for (std::size_t i = 0; i < S.size(); ++i) {
        for (std::size_t j = i + 1; j < S.size(); ++j) {
            if (S[i] == S[j]) fail(ErrorCode::NotIndependent, "duplicate vertex in set");
            if (sg.graph.has_edge(S[i], S[j]))
                fail(ErrorCode::NotIndependent, std::to_string(S[i]) + "-" + std::to_string(S[j]) +
                                                    " is an edge");
        }
    }
    // feasibility is checked per vertex on the unmodified graph
    for (VertexId v : S)
        if (!removability(sg, v)) return std::nullopt;

    StubGraph backup = sg;
    std::vector<VertexId> order = S;
    std::sort(order.begin(), order.end());
    std::vector<RemovabilityCertificate> out;
    for (VertexId v : order) {
        auto cert = removability(sg, v);
        if (!cert) {
            sg = std::move(backup);
            return std::nullopt;
        }
        dp_remove(sg, *cert);
        out.push_back(std::move(*cert));
    }
    return out;
}

} // namespace dpg
