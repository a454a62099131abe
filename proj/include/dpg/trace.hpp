#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpg/graph.hpp"
#include "dpg/growth.hpp"
#include "dpg/reduce.hpp"

namespace dpg {

// Line-oriented event log. A trace is replayable in both directions: forward
// replay re-applies every insertion/removal on the recorded vertex ids;
// reverse replay undoes them last-to-first (insertions via their mirrored
// removal certificates, removals via mirrored forward steps).

// One trace line.
//
//   STEP <w> <p_degree> <op> <r|-> M=<u>-<v>,...[,<x>-s]
//   REMOVE <w> <p_degree> <inv_op> <aux|-> M=<u>-<v>,...
//
// STEP: `matching` holds the lifted graph edges in selection order; a lifted
// stub-edge is encoded as the trailing `<x>-s` token and lands in
// `stub_partner`. `r` is 0 for Op3a and the 1-based covered-vertex index for
// Op3b.
//
// REMOVE: `matching` holds the restored neighborhood non-edges. The aux
// column is the post-removal deficient vertex for InvOp1-with-stub / InvOp2
// (`new_deficient`), the 1-based mirror index for InvOp3b (`r`), and `-`
// otherwise. An InvOp1 line with aux set is ambiguous between "the removed
// vertex handed its stub to aux" and "an unrelated stub stayed on aux"; the
// recorded p_degree disambiguates (2|M|+2 vs 2|M|).
struct TraceRecord {
    bool is_removal = false;
    VertexId vertex = kNoVertex;
    std::size_t p_degree = 0;
    OpKind op = OpKind::Op1;               // STEP lines
    InvOpKind inv_op = InvOpKind::InvOp1;  // REMOVE lines
    std::optional<std::size_t> r;
    std::optional<VertexId> new_deficient;
    std::optional<VertexId> stub_partner;
    Matching matching;
    std::size_t line = 0;  // 1-based source line when parsed from a file
};

// Parsed trace file. The seed-summary headers let the growth-law checks work
// from the trace alone: seed_degrees lists the live-vertex degrees of the
// seed graph in ascending id order.
struct Trace {
    std::string protocol;  // "max", "linear:3/4", "sf:2.5", "reduce:min-degree", ...
    std::optional<std::size_t> seed_n;
    std::optional<std::size_t> seed_m;
    std::vector<std::size_t> seed_degrees;
    std::vector<TraceRecord> records;
};

TraceRecord to_trace_record(const DpStepRecord& rec);
TraceRecord to_trace_record(const RemovabilityCertificate& cert);

// Fills seed_n / seed_m / seed_degrees from the graph the trace will start
// from. Call before the first event is applied.
void stamp_seed_info(Trace& trace, const StubGraph& sg);

std::string serialize_trace(const Trace& trace);
// Throws BadFormat naming the 1-based line of the first offending line.
Trace parse_trace(const std::string& text);

void write_trace_file(const std::string& path, const Trace& trace);
Trace read_trace_file(const std::string& path);

// Applies one record to the current state. STEP lines insert on the recorded
// id, REMOVE lines delete. Throws TraceMismatch when the record disagrees
// with the state (wrong stub location, diverged op kind, occupied id).
void apply_trace_record(StubGraph& sg, const TraceRecord& rec);

// Undoes one record: STEP via the mirrored removal certificate, REMOVE via
// the mirrored forward step. Throws TraceMismatch on state disagreement.
void undo_trace_record(StubGraph& sg, const TraceRecord& rec);

void replay_forward(StubGraph& sg, const Trace& trace);
void replay_reverse(StubGraph& sg, const Trace& trace);

}  // namespace dpg
