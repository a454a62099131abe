#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpg/graph.hpp"
#include "dpg/growth.hpp"
#include "dpg/rng.hpp"

namespace dpg {

// Inverse direction: vertex removals that re-add a matching of neighborhood
// non-edges, removability certification, and kernel search.

enum class InvOpKind { InvOp1, InvOp2, InvOp3a, InvOp3b };

const char* inv_op_kind_name(InvOpKind op);
InvOpKind inv_op_kind_from_name(const std::string& name);

// Proof that `vertex` can be removed right now. restored_matching lists the
// neighborhood non-edges to re-add (selection order); new_deficient is the
// deficient vertex after removal (engaged for InvOp1 with the stub riding on
// the removed vertex, for InvOp2, and whenever an unrelated stub persists).
// stub_before snapshots the pre-removal stub so the certificate can be
// mirrored back into a forward step.
struct RemovabilityCertificate {
    VertexId vertex = kNoVertex;
    InvOpKind inv_op = InvOpKind::InvOp1;
    Matching restored_matching;
    std::optional<VertexId> new_deficient;
    std::optional<VertexId> stub_before;
};

// The unique applicable inverse op is forced by the degree parity of w and
// the stub state; one maximum matching on the complement of the induced
// neighborhood (plus the deficient vertex for InvOp3b) decides it.
std::optional<RemovabilityCertificate> removability(const StubGraph& sg, VertexId w);

// All certificates for w: every matching in the complement neighborhood with
// the required coverage, in lexicographic order. Exponential; meant for small
// degrees (oracle tests, exact search, certificate tie-breaking). `limit`
// truncates the enumeration (0 = no limit).
std::vector<RemovabilityCertificate> enumerate_certificates(const StubGraph& sg, VertexId w,
                                                            std::size_t limit = 0);

// Applies a certificate after revalidating it against the current state
// (StaleCertificate when anything moved underneath it).
void dp_remove(StubGraph& sg, const RemovabilityCertificate& cert);

// Forward plan that undoes dp_remove(cert): re-inserts the vertex on its old
// id and restores the exact pre-removal state.
DpStepPlan mirror_certificate(const RemovabilityCertificate& cert);

struct IrreducibilityResult {
    bool irreducible = false;
    // certificate of the smallest-id removable vertex when reducible
    std::optional<RemovabilityCertificate> witness;
};

// Sweeps removability over all vertices (OpenMP across vertices when
// enabled). is_irreducible_serial is the plain loop kept as the reference
// implementation; both return the same witness.
IrreducibilityResult is_irreducible(const StubGraph& sg);
IrreducibilityResult is_irreducible_serial(const StubGraph& sg);

enum class OrderPolicy { Random, MinDegreeFirst, MaxDegreeFirst, MostNonEdgesInNeighborhood };

const char* order_policy_name(OrderPolicy policy);
OrderPolicy order_policy_from_name(const std::string& name);

struct ReduceOptions {
    OrderPolicy policy = OrderPolicy::MinDegreeFirst;
    // one unit per applied removal and per backtrack undo; 0 = unlimited
    std::size_t budget = 0;
    // how many applied removals may be undone in total when search gets stuck
    std::size_t backtrack = 0;
    // exhaustive search over removal sequences and certificates (n <= 20)
    bool exact = false;
    std::uint64_t seed = 0;
};

struct ReductionResult {
    StubGraph kernel;
    std::vector<RemovabilityCertificate> removals;  // applied order
    std::size_t removed_count = 0;
    bool irreducible = false;       // kernel certified irreducible
    bool budget_exhausted = false;  // stopped early; kernel may be reducible
};

// Greedy kernel search: repeatedly removes the policy's favorite removable
// vertex; bounded backtracking rewinds recent choices when stuck. sg ends at
// the best (fewest vertices) state found, which the result snapshots.
ReductionResult reduce_to_kernel(StubGraph& sg, const ReduceOptions& options);

// Per-vertex feasibility is checked on the current graph independently
// (removals of an independent set commute); returns the certificates in the
// order applied, or nullopt if some vertex loses its certificate mid-way.
// Throws NotIndependent if S spans an edge. sg is only mutated on success.
std::optional<std::vector<RemovabilityCertificate>> remove_independent_set(
    StubGraph& sg, const std::vector<VertexId>& S);

} // namespace dpg
