#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpg/graph.hpp"

namespace dpg {

// Hardness gadgets and structure checkers. The centerpiece is a reduction
// from 3-SAT-3 (at most 3 literals per clause, every variable in at most 3
// clauses) to the question "can this independent set be entirely DP-removed",
// plus clique blockers that pin vertices against removal, an infinite family
// of irreducible 4-regular graphs, and checkers for the two decomposition
// results on low-degree graphs.

// CNF formula with 1-based variable indices; literal +v is the positive and
// -v the negated occurrence of variable v.
struct Formula {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;
};

// Checks the 3-SAT-3 shape: every literal names a variable in [1, num_vars],
// no clause repeats a variable, clauses have at most 3 literals, and every
// variable occurs in at most 3 clauses. Throws NotThreeSatThree otherwise.
// Empty and 1-literal clauses are legal input; build_reduction eliminates
// them by unit propagation.
void validate_formula(const Formula& formula);

// DIMACS CNF: "c" comments, one "p cnf <vars> <clauses>" line, then clauses
// as 0-terminated integer runs (possibly spanning lines). BadFormat on
// malformed input; the result is validated as 3-SAT-3.
Formula parse_dimacs(const std::string& text);
Formula read_dimacs_file(const std::string& path);

// Result of exhaustive unit propagation: assignments forced by 1-literal
// clauses, the residual formula (satisfied clauses dropped, falsified
// literals removed, no unit clauses left), and whether a contradiction was
// reached. The residual keeps the original variable numbering.
struct UnitPropagation {
    bool contradiction = false;
    std::map<int, bool> forced;
    Formula residual;
};
UnitPropagation unit_propagate(const Formula& formula);

// DPLL on the formula; exact, exponential. TooLarge above 24 variables.
bool brute_force_sat(const Formula& formula);

// A fixed unsatisfiable 3-SAT-3 formula with 2-literal clauses (two cyclic
// implication chains forced equal-valued, then the four excluded sign
// combinations). build_reduction substitutes it when unit propagation finds
// a contradiction, so the instance stays faithful to "not satisfiable".
Formula unsat_core_formula();

// Attaches a disjoint clique on d(x)+2 fresh vertices and joins x to all of
// them. Afterwards no DP-removal sequence can ever remove x or a clique
// vertex: x's neighborhood outgrows every candidate matching, and each
// clique vertex sees a complete neighborhood. d(x) becomes even (2d+2).
// Returns the new clique vertices. Throws UnknownVertex.
std::vector<VertexId> attach_blocker(Graph& g, VertexId x);

// Variant for two odd-degree vertices sharing one blocker: a clique on
// max(d(u), d(v))+2 fresh vertices joined completely to both u and v. Both
// degrees become even and both endpoints plus the clique stay unremovable.
// Throws UnknownVertex, and BadParams when u == v.
std::vector<VertexId> attach_blocker_pair(Graph& g, VertexId u, VertexId v);

// The 9-vertex variable gadget: ring vertices 0..7 carrying the complement
// of an 8-cycle (u and v adjacent iff nonconsecutive mod 8) and x = 8 joined
// to all ring vertices. literal_edges[j] is the j-th "literal slot", the
// ring non-edge {j, j+1 mod 8}; slots alternate around the cycle, so the
// only two ways to DP-remove x restore either all odd-indexed or all
// even-indexed slots.
struct VariableGadget {
    Graph graph;
    VertexId x = 8;
    std::array<Edge, 8> literal_edges;
};
VariableGadget variable_gadget();

struct BuildOptions {
    // Replace per-vertex blockers by shared blockers over pairs of
    // odd-degree vertices (every blocked vertex ends up with even degree).
    bool even_blockers = false;
};

// The reduction instance: one variable gadget per active variable, literal
// slots assigned to clause occurrences (positive occurrences on even slots,
// negated on odd slots, endpoint-disjoint per variable), per clause the
// chosen slots identified into a triangle (or a cherry plus one extra edge
// between the dangling endpoints for 2-literal clauses), a clause vertex
// joined to the identified endpoints plus a private dummy (degree exactly
// 4), and finally a blocker on every vertex outside X ∪ C.
struct GadgetInstance {
    Graph graph;
    std::map<int, VertexId> variable_vertices;              // variable -> x_i
    std::map<int, VertexId> clause_vertices;                // clause index -> c_l
    std::map<int, VertexId> dummy_vertices;                 // clause index -> d_l
    std::map<std::pair<int, int>, Edge> literal_edge_map;   // (variable, clause) -> slot
    std::size_t m_target = 0;                               // |X| + |C|
};

// Builds the instance for the formula. Unit clauses are removed by unit
// propagation first; a propagation contradiction substitutes
// unsat_core_formula() so removability still mirrors satisfiability. The
// clause indices in the maps refer to the residual formula actually built.
// Throws NotThreeSatThree on malformed input. The built graph always has
// X ∪ C independent and max degree at most 28.
GadgetInstance build_reduction(const Formula& formula, const BuildOptions& options = {});

// Decides whether X ∪ C can be entirely DP-removed, searching over the two
// removal certificates of every variable vertex (clause vertices never need
// a search: given the variable choices each one is independently removable
// or not). Exponential in |X|; throws TooLarge when |X| > 8.
bool instance_removable(const GadgetInstance& inst);

// True iff brute-force satisfiability of the formula agrees with
// instance_removable(inst). Throws TooLarge when |X| > 8.
bool verify_reduction(const GadgetInstance& inst, const Formula& formula);

// Appends ceil(m_target^(1/epsilon)) disjoint copies of K_28 so that
// m_target <= n^epsilon holds for the returned graph. Requires
// 0 < epsilon <= 1 (BadParams); PaddingTooLarge when the padded graph would
// exceed the vertex guard.
Graph padded_instance(const GadgetInstance& inst, double epsilon,
                      std::size_t max_vertices = 2'000'000);

// The irreducible 4-regular family on 4k vertices: k disjoint K_4 blocks
// {4b..4b+3} chained into a cycle by the edges (4b+2, 4b+4) and
// (4b+3, 4b+5) mod 4k. Every neighborhood induces a triangle plus an
// isolated vertex, so no vertex is removable. Throws KTooSmall for k < 3.
Graph irreducible_4regular(std::size_t k);

// Block decomposition of a 4-regular graph into K_5 / K_5-e / K_4 pieces
// joined by a matching on their degree-3 vertices — exactly the structure
// of irreducible 4-regular graphs.
enum class FourRegularBlockKind { K5, K5MinusEdge, K4 };

struct FourRegularBlock {
    FourRegularBlockKind kind = FourRegularBlockKind::K4;
    std::vector<VertexId> vertices;
};

struct FourRegularDecomposition {
    bool matches = false;                   // g has the irreducible structure
    std::vector<FourRegularBlock> blocks;   // filled only when matches
};

// Groups vertices by the relation "u lies in a triangle of the induced
// neighborhood of v", then validates that every class induces K_5, K_5-e or
// K_4 and that the edges between classes form a matching on their degree-3
// vertices. matches == true iff the graph is irreducible. Throws
// NotFourRegular unless every vertex has degree 4.
FourRegularDecomposition check_4regular_indecomposable_structure(const Graph& g);

// True iff every component of g is one of the terminal kernels of the
// max-degree-3 reduction: K_3, K_4, or a triangle with 1..3 pendant vertices
// on distinct corners (the stub-carrying form; at most one such component is
// accepted since a single stub exists graph-wide). Throws DegreeTooHigh when
// some degree exceeds 3.
bool check_low_degree_kernel(const Graph& g);

}  // namespace dpg
