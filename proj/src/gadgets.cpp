#include "dpg/gadgets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "dpg/errors.hpp"
#include "dpg/reduce.hpp"

namespace dpg {

namespace {

// ---------------------------------------------------------------------------
// formula helpers

void check_literal(const Formula& f, int lit) {
    int v = std::abs(lit);
    if (lit == 0 || v < 1 || v > f.num_vars) {
        throw Error(ErrorCode::NotThreeSatThree,
                    "literal " + std::to_string(lit) + " names no variable in [1, " +
                        std::to_string(f.num_vars) + "]");
    }
}

// Removes satisfied clauses and falsified literals for variable = value.
// Returns false when an empty clause appears (contradiction).
bool assign_and_simplify(std::vector<std::vector<int>>& clauses, int variable, bool value) {
    std::vector<std::vector<int>> next;
    next.reserve(clauses.size());
    for (auto& clause : clauses) {
        bool satisfied = false;
        std::vector<int> rest;
        rest.reserve(clause.size());
        for (int lit : clause) {
            if (std::abs(lit) != variable) {
                rest.push_back(lit);
            } else if ((lit > 0) == value) {
                satisfied = true;
                break;
            }
        }
        if (satisfied) continue;
        if (rest.empty()) return false;
        next.push_back(std::move(rest));
    }
    clauses = std::move(next);
    return true;
}

bool dpll(std::vector<std::vector<int>> clauses) {
    for (;;) {
        if (clauses.empty()) return true;
        const std::vector<int>* unit = nullptr;
        for (const auto& clause : clauses) {
            if (clause.empty()) return false;
            if (clause.size() == 1) {
                unit = &clause;
                break;
            }
        }
        if (unit == nullptr) break;
        int lit = (*unit)[0];
        if (!assign_and_simplify(clauses, std::abs(lit), lit > 0)) return false;
    }
    int branch = std::abs(clauses[0][0]);
    auto left = clauses;
    if (assign_and_simplify(left, branch, true) && dpll(std::move(left))) return true;
    if (assign_and_simplify(clauses, branch, false) && dpll(std::move(clauses))) return true;
    return false;
}

// ---------------------------------------------------------------------------
// ring geometry of the variable gadget

constexpr int kRing = 8;

// Ring positions a and b are consecutive on the 8-cycle of literal slots.
bool ring_consecutive(int a, int b) {
    int d = ((a - b) % kRing + kRing) % kRing;
    return d == 1 || d == kRing - 1;
}

// Slot j occupies ring positions {j, j+1 mod 8}. Positive occurrences take
// even-numbered slots (1-based e2, e4, e6), negated ones odd-numbered slots
// (e5, e7, e1); both sequences are endpoint-disjoint on their own, and the
// skip rule below resolves the one mixed collision (e4 vs e5).
constexpr int kPositiveSlots[3] = {1, 3, 5};
constexpr int kNegativeSlots[3] = {4, 6, 0};

std::pair<int, int> slot_endpoints(int slot) { return {slot, (slot + 1) % kRing}; }

// Minimal union-find over the planned vertex slots of the instance.
struct UnionFind {
    std::vector<std::size_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent[b] = a;  // keep the smaller slot as representative
    }
};

// One endpoint identification between two variable gadgets: ring position
// `pos_a` of `var_a` merges with `pos_b` of `var_b` (var_a < var_b).
struct MergeRecord {
    int var_a = 0;
    int pos_a = 0;
    int var_b = 0;
    int pos_b = 0;
};

// Two merges on the same gadget pair may not place merged endpoints on
// consecutive ring positions on either side: a consecutive pair is a literal
// slot, and the partner side (always adjacent or consecutive in the ring)
// would either fill that slot with a foreign edge or couple two slots into
// one, both of which destroy the two-certificate structure of the gadget.
bool merges_conflict(const MergeRecord& a, const MergeRecord& b) {
    if (a.var_a != b.var_a || a.var_b != b.var_b) return false;
    return ring_consecutive(a.pos_a, b.pos_a) || ring_consecutive(a.pos_b, b.pos_b);
}

MergeRecord make_merge(int var_u, int pos_u, int var_v, int pos_v) {
    if (var_u < var_v) return {var_u, pos_u, var_v, pos_v};
    return {var_v, pos_v, var_u, pos_u};
}

}  // namespace

// ---------------------------------------------------------------------------
// formulas

void validate_formula(const Formula& formula) {
    if (formula.num_vars < 0) {
        throw Error(ErrorCode::NotThreeSatThree, "negative variable count");
    }
    std::vector<int> occurrences(static_cast<std::size_t>(formula.num_vars) + 1, 0);
    for (std::size_t c = 0; c < formula.clauses.size(); ++c) {
        const auto& clause = formula.clauses[c];
        if (clause.size() > 3) {
            throw Error(ErrorCode::NotThreeSatThree,
                        "clause " + std::to_string(c + 1) + " has " +
                            std::to_string(clause.size()) + " literals (max 3)");
        }
        std::set<int> vars;
        for (int lit : clause) {
            check_literal(formula, lit);
            if (!vars.insert(std::abs(lit)).second) {
                throw Error(ErrorCode::NotThreeSatThree,
                            "clause " + std::to_string(c + 1) + " repeats variable " +
                                std::to_string(std::abs(lit)));
            }
        }
        for (int v : vars) {
            if (++occurrences[static_cast<std::size_t>(v)] > 3) {
                throw Error(ErrorCode::NotThreeSatThree,
                            "variable " + std::to_string(v) + " occurs in more than 3 clauses");
            }
        }
    }
}

Formula parse_dimacs(const std::string& text) {
    std::istringstream in(text);
    std::string token;
    Formula formula;
    bool have_header = false;
    std::vector<int> current;
    while (in >> token) {
        if (token == "c" || token[0] == 'c') {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        if (token == "%") break;  // SATLIB-style trailer
        if (token == "p") {
            std::string kind;
            long vars = 0, clauses = 0;
            if (!(in >> kind >> vars >> clauses) || kind != "cnf" || vars < 0 || clauses < 0) {
                throw Error(ErrorCode::BadFormat, "malformed DIMACS problem line");
            }
            formula.num_vars = static_cast<int>(vars);
            formula.clauses.reserve(static_cast<std::size_t>(clauses));
            have_header = true;
            continue;
        }
        if (!have_header) {
            throw Error(ErrorCode::BadFormat, "clause data before DIMACS problem line");
        }
        int lit = 0;
        try {
            std::size_t used = 0;
            lit = std::stoi(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw Error(ErrorCode::BadFormat, "bad DIMACS token '" + token + "'");
        }
        if (lit == 0) {
            formula.clauses.push_back(current);
            current.clear();
        } else {
            current.push_back(lit);
        }
    }
    if (!have_header) throw Error(ErrorCode::BadFormat, "missing DIMACS problem line");
    if (!current.empty()) {
        throw Error(ErrorCode::BadFormat, "last clause is not 0-terminated");
    }
    validate_formula(formula);
    return formula;
}

Formula read_dimacs_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dimacs(buf.str());
}

UnitPropagation unit_propagate(const Formula& formula) {
    UnitPropagation result;
    result.residual.num_vars = formula.num_vars;
    auto clauses = formula.clauses;
    for (;;) {
        int unit = 0;
        for (const auto& clause : clauses) {
            if (clause.empty()) {
                result.contradiction = true;
                return result;
            }
            if (clause.size() == 1) {
                unit = clause[0];
                break;
            }
        }
        if (unit == 0) break;
        result.forced[std::abs(unit)] = unit > 0;
        if (!assign_and_simplify(clauses, std::abs(unit), unit > 0)) {
            result.contradiction = true;
            return result;
        }
    }
    result.residual.clauses = std::move(clauses);
    return result;
}

bool brute_force_sat(const Formula& formula) {
    if (formula.num_vars > 24) {
        throw Error(ErrorCode::TooLarge, "brute-force SAT capped at 24 variables, got " +
                                             std::to_string(formula.num_vars));
    }
    return dpll(formula.clauses);
}

Formula unsat_core_formula() {
    // Two 4-variable implication cycles (forcing x1=..=x4 and y1=..=y4) plus
    // the four excluded sign combinations of the two cycle values. Every
    // variable occurs exactly 3 times, all clauses have 2 literals.
    Formula f;
    f.num_vars = 8;
    f.clauses = {
        {-1, 2}, {-2, 3}, {-3, 4}, {-4, 1},  // x-cycle
        {-5, 6}, {-6, 7}, {-7, 8}, {-8, 5},  // y-cycle
        {1, 5},  {2, -6}, {-3, 7}, {-4, -8},
    };
    return f;
}

// ---------------------------------------------------------------------------
// blockers

std::vector<VertexId> attach_blocker(Graph& g, VertexId x) {
    std::size_t size = g.degree(x) + 2;  // degree() throws UnknownVertex
    std::vector<VertexId> clique;
    clique.reserve(size);
    for (std::size_t i = 0; i < size; ++i) clique.push_back(g.add_vertex());
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = i + 1; j < size; ++j) g.add_edge(clique[i], clique[j]);
        g.add_edge(x, clique[i]);
    }
    return clique;
}

std::vector<VertexId> attach_blocker_pair(Graph& g, VertexId u, VertexId v) {
    if (u == v) throw Error(ErrorCode::BadParams, "blocker pair needs two distinct vertices");
    std::size_t size = std::max(g.degree(u), g.degree(v)) + 2;
    std::vector<VertexId> clique;
    clique.reserve(size);
    for (std::size_t i = 0; i < size; ++i) clique.push_back(g.add_vertex());
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = i + 1; j < size; ++j) g.add_edge(clique[i], clique[j]);
        g.add_edge(u, clique[i]);
        g.add_edge(v, clique[i]);
    }
    return clique;
}

// ---------------------------------------------------------------------------
// variable gadget

VariableGadget variable_gadget() {
    VariableGadget vg;
    vg.graph = Graph(9);
    for (int a = 0; a < kRing; ++a) {
        for (int b = a + 1; b < kRing; ++b) {
            if (!ring_consecutive(a, b)) {
                vg.graph.add_edge(static_cast<VertexId>(a), static_cast<VertexId>(b));
            }
        }
        vg.graph.add_edge(vg.x, static_cast<VertexId>(a));
    }
    for (int j = 0; j < kRing; ++j) {
        auto [a, b] = slot_endpoints(j);
        vg.literal_edges[static_cast<std::size_t>(j)] =
            Edge{static_cast<VertexId>(a), static_cast<VertexId>(b)};
    }
    return vg;
}

// ---------------------------------------------------------------------------
// the reduction build

namespace {

// Slot assignment for one variable: slot_of[clause index] = ring slot.
using SlotAssignment = std::map<int, int>;

// Assigns literal slots to every occurrence of `var`: positives first (in
// clause order) from the even-slot sequence, then negated occurrences from
// the odd-slot sequence, skipping any slot sharing a ring position with an
// already assigned one. With at most 3 occurrences per variable this greedy
// pass always succeeds.
SlotAssignment assign_slots(int var, const std::vector<std::pair<int, bool>>& occurrences) {
    SlotAssignment chosen;
    std::set<int> used_positions;
    auto take = [&](int clause, const int* sequence) {
        for (int s = 0; s < 3; ++s) {
            auto [a, b] = slot_endpoints(sequence[s]);
            if (used_positions.count(a) || used_positions.count(b)) continue;
            used_positions.insert(a);
            used_positions.insert(b);
            chosen[clause] = sequence[s];
            return;
        }
        throw Error(ErrorCode::InvalidState,
                    "no literal slot available for variable " + std::to_string(var));
    };
    for (auto [clause, positive] : occurrences) {
        if (positive) take(clause, kPositiveSlots);
    }
    for (auto [clause, positive] : occurrences) {
        if (!positive) take(clause, kNegativeSlots);
    }
    return chosen;
}

// A candidate identification for one clause: the merges to perform plus, for
// cherries, the extra edge between the two dangling endpoints (as global
// slot ids). Candidates compare by their sorted global merge pairs so "pick
// the first harmless one" realizes the lexicographically smallest choice.
struct Identification {
    std::vector<MergeRecord> merges;
    std::vector<std::pair<std::size_t, std::size_t>> merge_slots;  // global slot pairs
    std::optional<std::pair<std::size_t, std::size_t>> cherry_edge;

    std::vector<std::pair<std::size_t, std::size_t>> sorted_pairs() const {
        auto pairs = merge_slots;
        for (auto& p : pairs) {
            if (p.second < p.first) std::swap(p.first, p.second);
        }
        std::sort(pairs.begin(), pairs.end());
        return pairs;
    }
};

struct ClauseEdge {
    int var = 0;
    int slot = 0;
    std::size_t endpoint_slot[2] = {0, 0};  // global slot ids of the two ring positions
    int endpoint_pos[2] = {0, 0};           // ring positions
};

}  // namespace

GadgetInstance build_reduction(const Formula& formula, const BuildOptions& options) {
    validate_formula(formula);
    auto propagated = unit_propagate(formula);
    Formula built = propagated.contradiction ? unsat_core_formula() : propagated.residual;
    if (propagated.contradiction) {
        // The substituted core has no units, so this terminates immediately.
        built = unit_propagate(built).residual;
    }

    GadgetInstance inst;
    if (built.clauses.empty()) {
        inst.graph = Graph(0);
        return inst;  // trivially satisfiable: nothing to remove
    }

    // Active variables and their occurrences in clause order.
    std::map<int, std::vector<std::pair<int, bool>>> occurrences;
    for (std::size_t c = 0; c < built.clauses.size(); ++c) {
        for (int lit : built.clauses[c]) {
            occurrences[std::abs(lit)].emplace_back(static_cast<int>(c), lit > 0);
        }
    }
    std::vector<int> variables;
    variables.reserve(occurrences.size());
    for (const auto& [var, occ] : occurrences) variables.push_back(var);

    // Planned slots: 9 per variable gadget (ring 0..7, then x), then one
    // clause vertex and one dummy per clause.
    std::map<int, std::size_t> gadget_base;
    for (std::size_t i = 0; i < variables.size(); ++i) gadget_base[variables[i]] = 9 * i;
    const std::size_t clause_base = 9 * variables.size();
    const std::size_t total_slots = clause_base + 2 * built.clauses.size();
    auto ring_slot = [&](int var, int pos) {
        return gadget_base.at(var) + static_cast<std::size_t>(pos);
    };

    std::map<int, SlotAssignment> slots;  // var -> clause -> slot
    for (int var : variables) slots[var] = assign_slots(var, occurrences[var]);

    // Identify clause endpoints. Each clause tries its candidate
    // identifications in lexicographic order and keeps the first one that
    // does not interact with a previous merge on the same gadget pair.
    UnionFind uf(total_slots);
    std::vector<MergeRecord> all_merges;
    std::vector<std::pair<std::size_t, std::size_t>> cherry_edges;
    std::vector<std::vector<std::size_t>> clause_endpoint_slots(built.clauses.size());

    for (std::size_t c = 0; c < built.clauses.size(); ++c) {
        std::vector<ClauseEdge> edges;
        for (int lit : built.clauses[c]) {
            ClauseEdge e;
            e.var = std::abs(lit);
            e.slot = slots[e.var].at(static_cast<int>(c));
            auto [a, b] = slot_endpoints(e.slot);
            e.endpoint_pos[0] = a;
            e.endpoint_pos[1] = b;
            e.endpoint_slot[0] = ring_slot(e.var, a);
            e.endpoint_slot[1] = ring_slot(e.var, b);
            edges.push_back(e);
        }
        std::sort(edges.begin(), edges.end(),
                  [](const ClauseEdge& l, const ClauseEdge& r) { return l.var < r.var; });
        for (const auto& e : edges) {
            clause_endpoint_slots[c].push_back(e.endpoint_slot[0]);
            clause_endpoint_slots[c].push_back(e.endpoint_slot[1]);
        }

        std::vector<Identification> candidates;
        if (edges.size() == 3) {
            // Choice bits: which endpoint of each edge goes to its first
            // corner; the other endpoint lands in the remaining corner.
            for (int b1 = 0; b1 < 2; ++b1) {
                for (int b2 = 0; b2 < 2; ++b2) {
                    for (int b3 = 0; b3 < 2; ++b3) {
                        Identification id;
                        int pick[3] = {b1, b2, b3};
                        for (int t = 0; t < 3; ++t) {
                            const auto& ea = edges[static_cast<std::size_t>(t)];
                            const auto& eb = edges[static_cast<std::size_t>((t + 1) % 3)];
                            int pa = ea.endpoint_pos[1 - pick[t]];       // second use of ea
                            int pb = eb.endpoint_pos[pick[(t + 1) % 3]]; // first use of eb
                            id.merges.push_back(make_merge(ea.var, pa, eb.var, pb));
                            id.merge_slots.emplace_back(ea.endpoint_slot[1 - pick[t]],
                                                        eb.endpoint_slot[pick[(t + 1) % 3]]);
                        }
                        candidates.push_back(std::move(id));
                    }
                }
            }
        } else if (edges.size() == 2) {
            for (int b1 = 0; b1 < 2; ++b1) {
                for (int b2 = 0; b2 < 2; ++b2) {
                    Identification id;
                    id.merges.push_back(make_merge(edges[0].var, edges[0].endpoint_pos[b1],
                                                   edges[1].var, edges[1].endpoint_pos[b2]));
                    id.merge_slots.emplace_back(edges[0].endpoint_slot[b1],
                                                edges[1].endpoint_slot[b2]);
                    id.cherry_edge = {edges[0].endpoint_slot[1 - b1],
                                      edges[1].endpoint_slot[1 - b2]};
                    candidates.push_back(std::move(id));
                }
            }
        } else {
            throw Error(ErrorCode::InvalidState,
                        "clause of size " + std::to_string(edges.size()) +
                            " survived unit propagation");
        }

        std::sort(candidates.begin(), candidates.end(),
                  [](const Identification& l, const Identification& r) {
                      return l.sorted_pairs() < r.sorted_pairs();
                  });
        const Identification* picked = nullptr;
        for (const auto& candidate : candidates) {
            bool ok = true;
            for (const auto& m : candidate.merges) {
                for (const auto& old : all_merges) {
                    if (merges_conflict(m, old)) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
            }
            if (ok) {
                picked = &candidate;
                break;
            }
        }
        if (picked == nullptr) {
            throw Error(ErrorCode::InvalidState,
                        "no interference-free identification for clause " + std::to_string(c));
        }
        for (std::size_t i = 0; i < picked->merges.size(); ++i) {
            all_merges.push_back(picked->merges[i]);
            uf.unite(picked->merge_slots[i].first, picked->merge_slots[i].second);
        }
        if (picked->cherry_edge) cherry_edges.push_back(*picked->cherry_edge);
    }

    // Compact representative slots into vertex ids.
    std::vector<std::size_t> reps;
    reps.reserve(total_slots);
    for (std::size_t s = 0; s < total_slots; ++s) {
        if (uf.find(s) == s) reps.push_back(s);
    }
    std::map<std::size_t, VertexId> id_of_rep;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        id_of_rep[reps[i]] = static_cast<VertexId>(i);
    }
    auto vertex_of = [&](std::size_t slot) { return id_of_rep.at(uf.find(slot)); };

    std::set<std::pair<VertexId, VertexId>> edge_set;
    auto put_edge = [&](VertexId u, VertexId v) {
        if (u == v) {
            throw Error(ErrorCode::InvalidState, "identification collapsed an edge into a loop");
        }
        edge_set.insert({std::min(u, v), std::max(u, v)});
    };

    for (int var : variables) {
        VertexId x = vertex_of(gadget_base[var] + 8);
        for (int a = 0; a < kRing; ++a) {
            for (int b = a + 1; b < kRing; ++b) {
                if (!ring_consecutive(a, b)) {
                    put_edge(vertex_of(ring_slot(var, a)), vertex_of(ring_slot(var, b)));
                }
            }
            put_edge(x, vertex_of(ring_slot(var, a)));
        }
    }
    for (const auto& [a, b] : cherry_edges) put_edge(vertex_of(a), vertex_of(b));
    for (std::size_t c = 0; c < built.clauses.size(); ++c) {
        VertexId cv = vertex_of(clause_base + 2 * c);
        VertexId dv = vertex_of(clause_base + 2 * c + 1);
        std::set<VertexId> endpoint_ids;
        for (std::size_t s : clause_endpoint_slots[c]) endpoint_ids.insert(vertex_of(s));
        for (VertexId e : endpoint_ids) put_edge(cv, e);
        put_edge(cv, dv);
    }

    Graph g(reps.size());
    for (const auto& [u, v] : edge_set) g.add_edge(u, v);

    // Literal slots must have survived as non-edges; the identification
    // interference rule guarantees it.
    for (int var : variables) {
        for (const auto& [clause, slot] : slots[var]) {
            auto [a, b] = slot_endpoints(slot);
            VertexId u = vertex_of(ring_slot(var, a));
            VertexId v = vertex_of(ring_slot(var, b));
            if (g.has_edge(u, v)) {
                throw Error(ErrorCode::InvalidState, "literal slot lost to an identification");
            }
            inst.literal_edge_map[{var, clause}] = Edge{u, v};
        }
        inst.variable_vertices[var] = vertex_of(gadget_base[var] + 8);
    }
    for (std::size_t c = 0; c < built.clauses.size(); ++c) {
        inst.clause_vertices[static_cast<int>(c)] = vertex_of(clause_base + 2 * c);
        inst.dummy_vertices[static_cast<int>(c)] = vertex_of(clause_base + 2 * c + 1);
    }

    // Blockers on everything outside X and C.
    std::set<VertexId> protected_ids;
    for (const auto& [var, x] : inst.variable_vertices) protected_ids.insert(x);
    for (const auto& [c, cv] : inst.clause_vertices) protected_ids.insert(cv);
    std::vector<VertexId> to_block;
    for (VertexId v = 0; v < static_cast<VertexId>(reps.size()); ++v) {
        if (!protected_ids.count(v)) to_block.push_back(v);
    }
    if (options.even_blockers) {
        std::vector<VertexId> odd, even;
        for (VertexId v : to_block) {
            (g.degree(v) % 2 == 1 ? odd : even).push_back(v);
        }
        if (odd.size() % 2 != 0) {
            throw Error(ErrorCode::InvalidState, "odd-degree vertices do not pair up");
        }
        for (std::size_t i = 0; i + 1 < odd.size(); i += 2) {
            attach_blocker_pair(g, odd[i], odd[i + 1]);
        }
        for (VertexId v : even) attach_blocker(g, v);
    } else {
        for (VertexId v : to_block) attach_blocker(g, v);
    }

    if (g.max_degree() > 28) {
        throw Error(ErrorCode::InvalidState, "reduction exceeded the degree-28 bound");
    }
    for (VertexId a : protected_ids) {
        for (VertexId b : protected_ids) {
            if (a < b && g.has_edge(a, b)) {
                throw Error(ErrorCode::InvalidState, "X and C are not independent");
            }
        }
    }

    inst.graph = std::move(g);
    inst.m_target = inst.variable_vertices.size() + inst.clause_vertices.size();
    return inst;
}

// ---------------------------------------------------------------------------
// removability of the reduction target

namespace {

// The walk below must close back to its start to be a single 8-cycle.
bool ring_consecutive_close(const Graph& g, const std::vector<VertexId>& cycle) {
    return !g.has_edge(cycle.front(), cycle.back());
}

// Recovers the literal cycle of a variable gadget inside the instance: the
// complement of the induced neighborhood of x is an 8-cycle; returns its
// vertices in traversal order starting from the smallest id.
std::vector<VertexId> literal_cycle(const Graph& g, VertexId x) {
    std::vector<VertexId> ring(g.neighbors(x).begin(), g.neighbors(x).end());
    if (ring.size() != kRing) {
        throw Error(ErrorCode::InvalidState, "variable vertex does not have 8 neighbors");
    }
    std::sort(ring.begin(), ring.end());
    std::map<VertexId, std::vector<VertexId>> comp;
    for (VertexId a : ring) {
        for (VertexId b : ring) {
            if (a < b && !g.has_edge(a, b)) {
                comp[a].push_back(b);
                comp[b].push_back(a);
            }
        }
    }
    for (VertexId a : ring) {
        if (comp[a].size() != 2) {
            throw Error(ErrorCode::InvalidState, "literal slots of a gadget do not form a cycle");
        }
    }
    std::vector<VertexId> cycle;
    cycle.push_back(ring[0]);
    cycle.push_back(std::min(comp[ring[0]][0], comp[ring[0]][1]));
    while (cycle.size() < kRing) {
        VertexId prev = cycle[cycle.size() - 2];
        VertexId cur = cycle.back();
        cycle.push_back(comp[cur][0] == prev ? comp[cur][1] : comp[cur][0]);
    }
    std::set<VertexId> distinct(cycle.begin(), cycle.end());
    if (distinct.size() != kRing || !ring_consecutive_close(g, cycle)) {
        throw Error(ErrorCode::InvalidState, "literal slots of a gadget do not form one 8-cycle");
    }
    return cycle;
}

}  // namespace

bool instance_removable(const GadgetInstance& inst) {
    if (inst.variable_vertices.size() > 8) {
        throw Error(ErrorCode::TooLarge,
                    "removability search capped at 8 variables, got " +
                        std::to_string(inst.variable_vertices.size()));
    }
    std::vector<VertexId> xs;
    for (const auto& [var, x] : inst.variable_vertices) xs.push_back(x);

    for (std::size_t mask = 0; mask < (std::size_t{1} << xs.size()); ++mask) {
        StubGraph sg(inst.graph);
        bool ok = true;
        for (std::size_t i = 0; i < xs.size() && ok; ++i) {
            auto cycle = literal_cycle(sg.graph, xs[i]);
            std::size_t start = (mask >> i) & 1;
            RemovabilityCertificate cert;
            cert.vertex = xs[i];
            cert.inv_op = InvOpKind::InvOp1;
            for (std::size_t j = start; j < start + kRing; j += 2) {
                cert.restored_matching.edges.push_back(
                    Edge{cycle[j % kRing], cycle[(j + 1) % kRing]});
            }
            dp_remove(sg, cert);
        }
        for (const auto& [c, cv] : inst.clause_vertices) {
            if (!ok) break;
            auto cert = removability(sg, cv);
            if (!cert) {
                ok = false;
                break;
            }
            dp_remove(sg, *cert);
        }
        if (ok) return true;
    }
    return false;
}

bool verify_reduction(const GadgetInstance& inst, const Formula& formula) {
    bool sat = brute_force_sat(formula);
    bool removable = instance_removable(inst);
    return sat == removable;
}

// ---------------------------------------------------------------------------
// padding

Graph padded_instance(const GadgetInstance& inst, double epsilon, std::size_t max_vertices) {
    if (!(epsilon > 0.0) || epsilon > 1.0) {
        throw Error(ErrorCode::BadParams, "epsilon must be in (0, 1]");
    }
    const long double m = static_cast<long double>(inst.m_target);
    long double want = m > 0 ? std::ceil(std::pow(m, 1.0L / epsilon)) : 0.0L;
    if (want > static_cast<long double>(max_vertices)) {
        throw Error(ErrorCode::PaddingTooLarge, "padding would exceed the vertex guard");
    }
    std::size_t copies = static_cast<std::size_t>(want);
    auto big_enough = [&](std::size_t extra) {
        long double n = static_cast<long double>(inst.graph.vertices().size()) +
                        28.0L * static_cast<long double>(extra);
        return m <= std::pow(n, static_cast<long double>(epsilon)) + 1e-9L;
    };
    while (!big_enough(copies)) ++copies;  // belt and braces; ceil already suffices
    if (inst.graph.vertices().size() + 28 * copies > max_vertices) {
        throw Error(ErrorCode::PaddingTooLarge, "padding would exceed the vertex guard");
    }
    Graph g = inst.graph;
    for (std::size_t c = 0; c < copies; ++c) {
        std::vector<VertexId> ids;
        ids.reserve(28);
        for (int i = 0; i < 28; ++i) ids.push_back(g.add_vertex());
        for (std::size_t i = 0; i < ids.size(); ++i) {
            for (std::size_t j = i + 1; j < ids.size(); ++j) g.add_edge(ids[i], ids[j]);
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// the irreducible 4-regular family

Graph irreducible_4regular(std::size_t k) {
    if (k < 3) {
        throw Error(ErrorCode::KTooSmall, "the 4-regular family needs k >= 3, got " +
                                              std::to_string(k));
    }
    const std::size_t n = 4 * k;
    Graph g(n);
    for (std::size_t b = 0; b < k; ++b) {
        VertexId base = static_cast<VertexId>(4 * b);
        for (int i = 0; i < 4; ++i) {
            for (int j = i + 1; j < 4; ++j) {
                g.add_edge(base + static_cast<VertexId>(i), base + static_cast<VertexId>(j));
            }
        }
        g.add_edge(base + 2, static_cast<VertexId>((4 * b + 4) % n));
        g.add_edge(base + 3, static_cast<VertexId>((4 * b + 5) % n));
    }
    return g;
}

FourRegularDecomposition check_4regular_indecomposable_structure(const Graph& g) {
    auto vs = g.vertices();
    for (VertexId v : vs) {
        if (g.degree(v) != 4) {
            throw Error(ErrorCode::NotFourRegular,
                        "vertex " + std::to_string(v) + " has degree " +
                            std::to_string(g.degree(v)));
        }
    }
    FourRegularDecomposition out;
    if (vs.empty()) {
        out.matches = true;
        return out;
    }

    // u ~ v when u lies in a triangle of the induced neighborhood of v.
    std::map<VertexId, VertexId> leader;
    for (VertexId v : vs) leader[v] = v;
    std::function<VertexId(VertexId)> find = [&](VertexId a) {
        while (leader[a] != a) {
            leader[a] = leader[leader[a]];
            a = leader[a];
        }
        return a;
    };
    auto unite = [&](VertexId a, VertexId b) {
        a = find(a);
        b = find(b);
        if (a != b) leader[std::max(a, b)] = std::min(a, b);
    };
    for (VertexId v : vs) {
        std::vector<VertexId> nb(g.neighbors(v).begin(), g.neighbors(v).end());
        for (VertexId u : nb) {
            bool in_triangle = false;
            for (std::size_t i = 0; i < nb.size() && !in_triangle; ++i) {
                for (std::size_t j = i + 1; j < nb.size() && !in_triangle; ++j) {
                    if (nb[i] == u || nb[j] == u) continue;
                    in_triangle = g.has_edge(u, nb[i]) && g.has_edge(u, nb[j]) &&
                                  g.has_edge(nb[i], nb[j]);
                }
            }
            if (in_triangle) unite(u, v);
        }
    }

    std::map<VertexId, std::vector<VertexId>> classes;
    for (VertexId v : vs) classes[find(v)].push_back(v);

    for (auto& [root, members] : classes) {
        std::sort(members.begin(), members.end());
        std::size_t internal_edges = 0;
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                if (g.has_edge(members[i], members[j])) ++internal_edges;
            }
        }
        FourRegularBlock block;
        block.vertices = members;
        if (members.size() == 5 && internal_edges == 10) {
            block.kind = FourRegularBlockKind::K5;
        } else if (members.size() == 5 && internal_edges == 9) {
            block.kind = FourRegularBlockKind::K5MinusEdge;
        } else if (members.size() == 4 && internal_edges == 6) {
            block.kind = FourRegularBlockKind::K4;
        } else {
            return out;  // matches = false
        }
        out.blocks.push_back(std::move(block));
    }

    // Degree arithmetic: internal degree 3 leaves exactly one edge to
    // another class, internal degree 4 leaves none, so the cross edges form
    // the required matching automatically once every block has a valid shape.
    out.matches = true;
    return out;
}

// ---------------------------------------------------------------------------
// terminal kernels of the max-degree-3 reduction

bool check_low_degree_kernel(const Graph& g) {
    auto vs = g.vertices();
    for (VertexId v : vs) {
        if (g.degree(v) > 3) {
            throw Error(ErrorCode::DegreeTooHigh,
                        "vertex " + std::to_string(v) + " has degree " +
                            std::to_string(g.degree(v)));
        }
    }
    std::set<VertexId> seen;
    std::size_t pendant_components = 0;
    for (VertexId start : vs) {
        if (seen.count(start)) continue;
        std::vector<VertexId> comp{start};
        seen.insert(start);
        for (std::size_t i = 0; i < comp.size(); ++i) {
            for (VertexId w : g.neighbors(comp[i])) {
                if (seen.insert(w).second) comp.push_back(w);
            }
        }
        std::size_t edges = 0;
        std::vector<VertexId> core, leaves;
        for (VertexId v : comp) {
            edges += g.degree(v);
            (g.degree(v) == 1 ? leaves : core).push_back(v);
        }
        edges /= 2;
        if (comp.size() == 3 && edges == 3) continue;  // K3
        if (comp.size() == 4 && edges == 6) continue;  // K4
        // Triangle with 1..3 pendant vertices on distinct corners.
        bool triangle = core.size() == 3 && !leaves.empty() && leaves.size() <= 3 &&
                        comp.size() == 3 + leaves.size() && edges == 3 + leaves.size();
        if (triangle) {
            for (std::size_t i = 0; i < core.size() && triangle; ++i) {
                for (std::size_t j = i + 1; j < core.size(); ++j) {
                    if (!g.has_edge(core[i], core[j])) {
                        triangle = false;
                        break;
                    }
                }
            }
        }
        if (!triangle) return false;
        if (++pendant_components > 1) return false;  // only one stub graph-wide
    }
    return true;
}

}  // namespace dpg
