#include "dpg/trace.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "dpg/errors.hpp"

namespace dpg {

namespace {

template <typename T>
T parse_number(std::string_view tok) {
    T out{};
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last)
        fail(ErrorCode::BadFormat, "bad integer '" + std::string(tok) + "'");
    return out;
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(sep, start);
        if (end == std::string_view::npos) end = text.size();
        out.emplace_back(text.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

void append_record_line(std::string& out, const TraceRecord& rec) {
    out += rec.is_removal ? "REMOVE" : "STEP";
    out += ' ';
    out += std::to_string(rec.vertex);
    out += ' ';
    out += std::to_string(rec.p_degree);
    out += ' ';
    out += rec.is_removal ? inv_op_kind_name(rec.inv_op) : op_kind_name(rec.op);
    out += ' ';
    if (!rec.is_removal) {
        out += rec.r ? std::to_string(*rec.r) : "-";
    } else if (rec.inv_op == InvOpKind::InvOp3b) {
        out += std::to_string(rec.r.value());
    } else if (rec.new_deficient) {
        out += std::to_string(*rec.new_deficient);
    } else {
        out += '-';
    }
    out += " M=";
    if (rec.matching.edges.empty() && !rec.stub_partner) {
        out += '-';
        out += '\n';
        return;
    }
    bool first = true;
    for (const Edge& e : rec.matching.edges) {
        if (!first) out += ',';
        out += std::to_string(e.lo());
        out += '-';
        out += std::to_string(e.hi());
        first = false;
    }
    if (rec.stub_partner) {
        if (!first) out += ',';
        out += std::to_string(*rec.stub_partner);
        out += "-s";
    }
    out += '\n';
}

TraceRecord parse_record_line(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> tok;
    std::string t;
    while (in >> t) tok.push_back(t);
    if (tok.size() != 6) fail(ErrorCode::BadFormat, "expected 6 fields, got " + std::to_string(tok.size()));

    TraceRecord rec;
    if (tok[0] == "STEP")
        rec.is_removal = false;
    else if (tok[0] == "REMOVE")
        rec.is_removal = true;
    else
        fail(ErrorCode::BadFormat, "unknown record kind '" + tok[0] + "'");

    rec.vertex = parse_number<VertexId>(tok[1]);
    rec.p_degree = parse_number<std::size_t>(tok[2]);
    if (rec.is_removal)
        rec.inv_op = inv_op_kind_from_name(tok[3]);
    else
        rec.op = op_kind_from_name(tok[3]);

    // column 4: r for STEP Op3a/Op3b; aux for REMOVE (new deficient or mirror r)
    if (tok[4] != "-") {
        std::size_t aux = parse_number<std::size_t>(tok[4]);
        if (!rec.is_removal) {
            rec.r = aux;
        } else if (rec.inv_op == InvOpKind::InvOp3b) {
            rec.r = aux;
        } else if (rec.inv_op == InvOpKind::InvOp3a) {
            fail(ErrorCode::BadFormat, "InvOp3a takes no aux field");
        } else {
            rec.new_deficient = static_cast<VertexId>(parse_number<VertexId>(tok[4]));
        }
    }
    if (!rec.is_removal) {
        const bool needs_r = rec.op == OpKind::Op3a || rec.op == OpKind::Op3b;
        if (needs_r && !rec.r) fail(ErrorCode::BadFormat, std::string(op_kind_name(rec.op)) + " needs an r field");
        if (!needs_r && rec.r) fail(ErrorCode::BadFormat, std::string(op_kind_name(rec.op)) + " takes no r field");
        if (rec.op == OpKind::Op3a && *rec.r != 0) fail(ErrorCode::BadFormat, "Op3a requires r=0");
        if (rec.op == OpKind::Op3b && *rec.r == 0) fail(ErrorCode::BadFormat, "Op3b requires r>=1");
    } else if (rec.inv_op == InvOpKind::InvOp3b && (!rec.r || *rec.r == 0)) {
        fail(ErrorCode::BadFormat, "InvOp3b needs a positive mirror index");
    }

    if (tok[5].rfind("M=", 0) != 0) fail(ErrorCode::BadFormat, "missing M= field");
    std::string body = tok[5].substr(2);
    if (body.empty()) fail(ErrorCode::BadFormat, "empty M= field (use M=- for none)");
    if (body != "-") {
        for (const std::string& part : split(body, ',')) {
            std::size_t dash = part.find('-');
            if (dash == std::string::npos || dash == 0 || dash + 1 >= part.size())
                fail(ErrorCode::BadFormat, "bad edge token '" + part + "'");
            std::string a = part.substr(0, dash);
            std::string b = part.substr(dash + 1);
            if (b == "s") {
                if (rec.is_removal) fail(ErrorCode::BadFormat, "stub-edge token in a REMOVE record");
                if (rec.stub_partner) fail(ErrorCode::BadFormat, "duplicate stub-edge token");
                rec.stub_partner = parse_number<VertexId>(a);
            } else {
                if (rec.stub_partner) fail(ErrorCode::BadFormat, "stub-edge token must come last");
                Edge e{parse_number<VertexId>(a), parse_number<VertexId>(b)};
                if (e.u == e.v) fail(ErrorCode::BadFormat, "loop edge token '" + part + "'");
                rec.matching.edges.push_back(e);
            }
        }
    }
    return rec;
}

// the forward op kind a REMOVE record mirrors back into
OpKind forward_kind(InvOpKind op) {
    switch (op) {
        case InvOpKind::InvOp1: return OpKind::Op1;
        case InvOpKind::InvOp2: return OpKind::Op2;
        case InvOpKind::InvOp3a: return OpKind::Op3a;
        case InvOpKind::InvOp3b: return OpKind::Op3b;
    }
    return OpKind::Op1;
}

std::string show(std::optional<VertexId> v) {
    return v ? std::to_string(*v) : std::string("none");
}

void expect_deficient(const StubGraph& sg, std::optional<VertexId> want, const char* when) {
    if (sg.deficient != want)
        fail(ErrorCode::TraceMismatch, std::string(when) + ": expected deficient vertex " + show(want) +
                                           ", state has " + show(sg.deficient));
}

[[noreturn]] void rethrow_mismatch(const Error& e, const TraceRecord& rec) {
    std::string prefix;
    if (rec.line) prefix = "line " + std::to_string(rec.line) + ": ";
    std::string_view inner = e.what();
    if (e.code() == ErrorCode::TraceMismatch) {
        if (inner.rfind("TraceMismatch: ", 0) == 0) inner.remove_prefix(15);
        if (inner.rfind("line ", 0) == 0) throw e;  // already tagged
        fail(ErrorCode::TraceMismatch, prefix + std::string(inner));
    }
    fail(ErrorCode::TraceMismatch, prefix + std::string(rec.is_removal ? "REMOVE " : "STEP ") +
                                       std::to_string(rec.vertex) + ": " + std::string(inner));
}

}  // namespace

TraceRecord to_trace_record(const DpStepRecord& rec) {
    TraceRecord out;
    out.vertex = rec.new_vertex;
    out.p_degree = rec.p_degree;
    out.op = rec.op;
    out.r = rec.r;
    out.matching = rec.matching_used;
    if (stub_edge_lifted(rec)) out.stub_partner = rec.stub_before;
    return out;
}

TraceRecord to_trace_record(const RemovabilityCertificate& cert) {
    TraceRecord out;
    out.is_removal = true;
    out.vertex = cert.vertex;
    out.inv_op = cert.inv_op;
    out.matching = cert.restored_matching;
    DpStepPlan mirror = mirror_certificate(cert);
    out.p_degree = mirror.p_degree;
    if (cert.inv_op == InvOpKind::InvOp3b)
        out.r = mirror.r;
    else if (cert.inv_op != InvOpKind::InvOp3a)
        out.new_deficient = cert.new_deficient;
    return out;
}

void stamp_seed_info(Trace& trace, const StubGraph& sg) {
    trace.seed_n = sg.graph.n();
    trace.seed_m = sg.graph.m();
    trace.seed_degrees.clear();
    for (VertexId v : sg.graph.vertices()) trace.seed_degrees.push_back(sg.graph.degree(v));
}

std::string serialize_trace(const Trace& trace) {
    std::string out = "# dpg-trace v1\n";
    if (!trace.protocol.empty()) out += "# protocol=" + trace.protocol + "\n";
    if (trace.seed_n) out += "# seed-n=" + std::to_string(*trace.seed_n) + "\n";
    if (trace.seed_m) out += "# seed-m=" + std::to_string(*trace.seed_m) + "\n";
    if (!trace.seed_degrees.empty()) {
        out += "# seed-degrees=";
        for (std::size_t i = 0; i < trace.seed_degrees.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(trace.seed_degrees[i]);
        }
        out += '\n';
    }
    for (const TraceRecord& rec : trace.records) append_record_line(out, rec);
    return out;
}

Trace parse_trace(const std::string& text) {
    Trace trace;
    std::size_t line_no = 0;
    bool saw_version = false;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            if (line[0] == '#') {
                std::string body = line.substr(1);
                if (!body.empty() && body[0] == ' ') body = body.substr(1);
                if (body == "dpg-trace v1") {
                    saw_version = true;
                } else if (body.rfind("protocol=", 0) == 0) {
                    trace.protocol = body.substr(9);
                } else if (body.rfind("seed-n=", 0) == 0) {
                    trace.seed_n = parse_number<std::size_t>(std::string_view(body).substr(7));
                } else if (body.rfind("seed-m=", 0) == 0) {
                    trace.seed_m = parse_number<std::size_t>(std::string_view(body).substr(7));
                } else if (body.rfind("seed-degrees=", 0) == 0) {
                    trace.seed_degrees.clear();
                    for (const std::string& part : split(body.substr(13), ','))
                        trace.seed_degrees.push_back(parse_number<std::size_t>(part));
                }
                // unknown header keys are ignored for forward compatibility
                continue;
            }
            if (!saw_version)
                fail(ErrorCode::BadFormat, "missing '# dpg-trace v1' header before the first record");
            TraceRecord rec = parse_record_line(line);
            rec.line = line_no;
            trace.records.push_back(std::move(rec));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::BadFormat &&
                std::string_view(e.what()).find("line ") == std::string_view::npos)
                fail(ErrorCode::BadFormat, "line " + std::to_string(line_no) + ": " + e.what());
            throw;
        }
    }
    if (!saw_version) fail(ErrorCode::BadFormat, "not a trace file (missing '# dpg-trace v1')");
    return trace;
}

void write_trace_file(const std::string& path, const Trace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    out << serialize_trace(trace);
    if (!out) fail(ErrorCode::IoError, "short write to '" + path + "'");
}

Trace read_trace_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_trace(buf.str());
}

void apply_trace_record(StubGraph& sg, const TraceRecord& rec) {
    try {
        if (!rec.is_removal) {
            // the stub-edge lift binds to whatever vertex is deficient right
            // now, so a diverged stub location must be caught before applying
            if (rec.stub_partner) expect_deficient(sg, rec.stub_partner, "stub-edge lift");
            DpStepPlan plan;
            plan.p_degree = rec.p_degree;
            plan.lifted = rec.matching.edges;
            plan.lift_stub = rec.stub_partner.has_value();
            plan.r = rec.r;
            plan.reuse_id = rec.vertex;
            DpStepRecord got = apply_dp_step(sg, plan);
            if (got.op != rec.op)
                fail(ErrorCode::TraceMismatch, std::string("recorded ") + op_kind_name(rec.op) +
                                                   " replayed as " + op_kind_name(got.op));
        } else {
            if (rec.inv_op == InvOpKind::InvOp3b) {
                std::vector<VertexId> seq = rec.matching.covered_sequence();
                if (*rec.r > seq.size())
                    fail(ErrorCode::TraceMismatch, "mirror index " + std::to_string(*rec.r) +
                                                       " out of range for " + std::to_string(seq.size()) +
                                                       " covered vertices");
                if (!sg.deficient || seq[*rec.r - 1] != *sg.deficient)
                    fail(ErrorCode::TraceMismatch, "mirror index points at vertex " +
                                                       std::to_string(seq[*rec.r - 1]) +
                                                       " but the deficient vertex is " + show(sg.deficient));
            }
            RemovabilityCertificate cert;
            cert.vertex = rec.vertex;
            cert.inv_op = rec.inv_op;
            cert.restored_matching = rec.matching;
            cert.new_deficient =
                (rec.inv_op == InvOpKind::InvOp1 || rec.inv_op == InvOpKind::InvOp2) ? rec.new_deficient
                                                                                     : std::nullopt;
            cert.stub_before = sg.deficient;
            dp_remove(sg, cert);
        }
    } catch (const Error& e) {
        rethrow_mismatch(e, rec);
    }
}

void undo_trace_record(StubGraph& sg, const TraceRecord& rec) {
    try {
        if (!rec.is_removal) {
            // undo an insertion by removing the vertex with the mirrored certificate
            RemovabilityCertificate cert;
            cert.vertex = rec.vertex;
            cert.restored_matching = rec.matching;
            switch (rec.op) {
                case OpKind::Op1:
                    cert.inv_op = InvOpKind::InvOp1;
                    if (rec.stub_partner) {
                        expect_deficient(sg, rec.vertex, "undo Op1 stub lift");
                        cert.new_deficient = rec.stub_partner;
                        cert.stub_before = rec.vertex;
                    } else {
                        cert.new_deficient = sg.deficient;
                        cert.stub_before = sg.deficient;
                    }
                    break;
                case OpKind::Op2:
                    cert.inv_op = InvOpKind::InvOp2;
                    expect_deficient(sg, std::nullopt, "undo Op2");
                    cert.new_deficient = rec.stub_partner;
                    break;
                case OpKind::Op3a:
                    cert.inv_op = InvOpKind::InvOp3a;
                    expect_deficient(sg, rec.vertex, "undo Op3a");
                    cert.stub_before = rec.vertex;
                    break;
                case OpKind::Op3b: {
                    cert.inv_op = InvOpKind::InvOp3b;
                    std::vector<VertexId> seq = rec.matching.covered_sequence();
                    if (!rec.r || *rec.r == 0 || *rec.r > seq.size())
                        fail(ErrorCode::TraceMismatch, "Op3b record has no usable r index");
                    expect_deficient(sg, seq[*rec.r - 1], "undo Op3b");
                    cert.stub_before = seq[*rec.r - 1];
                    break;
                }
            }
            dp_remove(sg, cert);
        } else {
            // undo a removal by re-inserting the vertex with a forward step
            DpStepPlan plan;
            plan.p_degree = rec.p_degree;
            plan.lifted = rec.matching.edges;
            plan.reuse_id = rec.vertex;
            switch (rec.inv_op) {
                case InvOpKind::InvOp1:
                    // aux with p = 2|M|+2 marks a stub handover; aux with
                    // p = 2|M| marks an unrelated stub that persisted
                    plan.lift_stub =
                        rec.new_deficient && rec.p_degree == 2 * (rec.matching.size() + 1);
                    expect_deficient(sg, rec.new_deficient, "undo InvOp1");
                    break;
                case InvOpKind::InvOp2:
                    if (!rec.new_deficient)
                        fail(ErrorCode::TraceMismatch, "InvOp2 record lacks the stub holder");
                    plan.lift_stub = true;
                    expect_deficient(sg, rec.new_deficient, "undo InvOp2");
                    break;
                case InvOpKind::InvOp3a:
                    plan.r = 0;
                    expect_deficient(sg, std::nullopt, "undo InvOp3a");
                    break;
                case InvOpKind::InvOp3b:
                    plan.r = rec.r;
                    expect_deficient(sg, std::nullopt, "undo InvOp3b");
                    break;
            }
            DpStepRecord got = apply_dp_step(sg, plan);
            if (got.op != forward_kind(rec.inv_op))
                fail(ErrorCode::TraceMismatch, std::string("undone ") + inv_op_kind_name(rec.inv_op) +
                                                   " replayed as " + op_kind_name(got.op));
        }
    } catch (const Error& e) {
        rethrow_mismatch(e, rec);
    }
}

void replay_forward(StubGraph& sg, const Trace& trace) {
    for (const TraceRecord& rec : trace.records) apply_trace_record(sg, rec);
}

void replay_reverse(StubGraph& sg, const Trace& trace) {
    for (auto it = trace.records.rbegin(); it != trace.records.rend(); ++it) undo_trace_record(sg, *it);
}

}  // namespace dpg
