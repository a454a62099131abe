#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpg/graph.hpp"
#include "dpg/matching.hpp"
#include "dpg/rng.hpp"

namespace dpg {

// Forward growth: vertex insertions that preserve every existing degree by
// lifting a matching onto the new vertex, plus the degree-schedule protocols.

enum class OpKind { Op1, Op2, Op3a, Op3b };

const char* op_kind_name(OpKind op);
OpKind op_kind_from_name(const std::string& name);

// One applied insertion. matching_used holds the lifted graph edges in
// selection order; a lifted stub-edge is not part of it and is recovered from
// the stub fields (Op2 always lifts it; Op1 lifted it iff stub_after ==
// new_vertex). r is 0 for Op3a and the 1-based covered-vertex index for Op3b.
struct DpStepRecord {
    VertexId new_vertex = kNoVertex;
    std::size_t p_degree = 0;
    Matching matching_used;
    OpKind op = OpKind::Op1;
    std::optional<std::size_t> r;
    std::optional<VertexId> stub_before;
    std::optional<VertexId> stub_after;
};

bool stub_edge_lifted(const DpStepRecord& rec);

// Everything apply_dp_step needs; replay rebuilds plans from trace records.
struct DpStepPlan {
    std::size_t p_degree = 0;
    std::vector<Edge> lifted;      // graph edges, selection order
    bool lift_stub = false;        // include the stub-edge in the lift
    std::optional<std::size_t> r;  // odd degree without stub: 0 or 1..p+1
    std::optional<VertexId> reuse_id;  // replay: land on this recorded id
};

// Validates the plan against the current state, mutates sg, and returns the
// record. Throws NoMatching / StubMismatch / BadR / MissingEdge on bad plans.
DpStepRecord apply_dp_step(StubGraph& sg, const DpStepPlan& plan);

// Insert a vertex of even p-degree 2k (k >= 1). The stub-edge competes with
// ordinary edges during selection; lifting it hands the deficiency to the new
// vertex.
DpStepRecord dp_step_even(StubGraph& sg, std::size_t k, const MatchingStrategy& strategy,
                          Rng& rng);

// Insert a vertex of odd p-degree 2k+1. With a deficient vertex present the
// stub-edge must be lifted (k ordinary edges on top). Without one, r picks
// the variant: r = 0 lifts k edges and leaves the new vertex deficient;
// r in [1, 2k+2] lifts k+1 edges and then drops the edge to the r-th covered
// vertex, which becomes deficient.
DpStepRecord dp_step_odd(StubGraph& sg, std::size_t k, std::optional<std::size_t> r,
                         const MatchingStrategy& strategy, Rng& rng);

// Exact fraction for degree schedules; avoids float rounding in ceil(c*nu).
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
};

Rational make_rational(std::int64_t num, std::int64_t den);
// Parses "0.75", "3/4", or "1" exactly. Throws BadParams.
Rational rational_from_string(const std::string& text);
std::string rational_to_string(const Rational& q);

enum class ProtocolKind { Max, Linear, ScaleFree, Regular };

struct ProtocolConfig {
    ProtocolKind kind = ProtocolKind::Max;
    Rational c{1, 1};            // Linear: degree 2*ceil(c*nu), 0 < c <= 1
    double gamma = 2.5;          // ScaleFree exponent, > 1
    double certainty_c = 1.0;    // ScaleFree tail-certainty constant, > 0
    std::size_t regular_c = 4;   // Regular: constant incoming degree, >= 2
    MatchingStrategy strategy{};
    std::uint64_t seed = 0;
    std::size_t target_n = 0;
};

// Validates ranges (BadParams) without touching a graph.
void validate_protocol(const ProtocolConfig& config);

// Label used in trace headers and reports, e.g. "max", "linear:3/4",
// "sf:2.5", "regular:4".
std::string protocol_label(const ProtocolConfig& config);
// Parses the CLI syntax {max|linear:c|sf:gamma|regular:c}.
ProtocolConfig protocol_from_label(const std::string& label);

// 2*ceil(c*nu): the even incoming degree of the linear schedule.
std::size_t next_degree_linear(std::size_t nu, const Rational& c);

// Sample i in [1, 2*nu] with P(i) proportional to i^-gamma (one rng draw).
std::size_t next_degree_scale_free(std::size_t nu, double gamma, Rng& rng);

struct GrowResult {
    std::vector<DpStepRecord> steps;
    std::vector<std::size_t> nu_history;  // matching number before each step
};

// Runs the protocol until sg has config.target_n live vertices. Randomness
// comes from a generator seeded with config.seed; the per-step draw order is
// documented in rng.hpp. Throws SeedTooSmall / NoMatching.
GrowResult grow(StubGraph& sg, const ProtocolConfig& config);

// Incremental driver behind grow, exposed for step-at-a-time callers (tests,
// experiment pipelines). Keeps the matching number maintained across steps.
class GrowthEngine {
  public:
    GrowthEngine(StubGraph& sg, const ProtocolConfig& config);

    // Applies one protocol step and returns its record.
    DpStepRecord step();
    std::size_t nu() const { return dm_.size(); }
    StubGraph& graph() { return *sg_; }
    Rng& rng() { return rng_; }

  private:
    std::size_t pick_degree();
    DpStepPlan make_plan(std::size_t p_degree);
    std::vector<Edge> select_edges(const Graph& h, std::size_t k);
    void after_apply(const DpStepRecord& rec, std::size_t nu_before);

    StubGraph* sg_;
    ProtocolConfig config_;
    Rng rng_;
    DynamicMatching dm_;
    std::size_t steps_since_cold_ = 0;
};

} // namespace dpg
