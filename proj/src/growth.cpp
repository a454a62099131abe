#include "dpg/growth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace dpg {

const char* op_kind_name(OpKind op) {
    switch (op) {
        case OpKind::Op1: return "Op1";
        case OpKind::Op2: return "Op2";
        case OpKind::Op3a: return "Op3a";
        case OpKind::Op3b: return "Op3b";
    }
    return "?";
}

OpKind op_kind_from_name(const std::string& name) {
    if (name == "Op1") return OpKind::Op1;
    if (name == "Op2") return OpKind::Op2;
    if (name == "Op3a") return OpKind::Op3a;
    if (name == "Op3b") return OpKind::Op3b;
    fail(ErrorCode::BadFormat, "unknown op name: " + name);
}

bool stub_edge_lifted(const DpStepRecord& rec) {
    if (rec.op == OpKind::Op2) return true;
    return rec.op == OpKind::Op1 && rec.stub_before && rec.stub_after &&
           *rec.stub_after == rec.new_vertex;
}

DpStepRecord apply_dp_step(StubGraph& sg, const DpStepPlan& plan) {
    Graph& g = sg.graph;
    const std::size_t p = plan.p_degree;
    if (p == 0) fail(ErrorCode::BadParams, "p-degree must be at least 1");
    if (plan.lift_stub && !sg.deficient)
        fail(ErrorCode::StubMismatch, "no stub-edge to lift");
    if (plan.r && plan.lift_stub)
        fail(ErrorCode::StubMismatch, "r given while the stub-edge is lifted");
    if (plan.r && p % 2 == 0) fail(ErrorCode::BadR, "r only applies to odd insertions");

    std::size_t expected;
    if (p % 2 == 0) {
        expected = p / 2 - (plan.lift_stub ? 1 : 0);
    } else {
        const std::size_t k = (p - 1) / 2;
        if (plan.lift_stub) {
            expected = k;
        } else {
            if (sg.deficient)
                fail(ErrorCode::StubMismatch, "stub present: odd insertion must lift the stub-edge");
            if (!plan.r) fail(ErrorCode::BadR, "odd insertion without a stub needs r");
            if (*plan.r > 2 * k + 2) fail(ErrorCode::BadR, "r out of [0, " + std::to_string(2 * k + 2) + "]");
            expected = *plan.r == 0 ? k : k + 1;
        }
    }
    if (plan.lifted.size() != expected)
        fail(ErrorCode::BadParams, "plan lifts " + std::to_string(plan.lifted.size()) +
                                       " edges, needs " + std::to_string(expected));

    // independence of the lift set (plus the deficient endpoint when the
    // stub-edge rides along)
    std::vector<VertexId> ends;
    for (const Edge& e : plan.lifted) {
        if (!g.has_edge(e.u, e.v))
            fail(ErrorCode::MissingEdge,
                 std::to_string(e.u) + "-" + std::to_string(e.v) + " is not an edge");
        ends.push_back(e.u);
        ends.push_back(e.v);
    }
    if (plan.lift_stub) ends.push_back(*sg.deficient);
    std::sort(ends.begin(), ends.end());
    if (std::adjacent_find(ends.begin(), ends.end()) != ends.end())
        fail(ErrorCode::NotIndependent, "lifted edges are not independent");

    DpStepRecord rec;
    rec.p_degree = p;
    rec.matching_used = Matching{plan.lifted};
    rec.stub_before = sg.deficient;
    rec.r = plan.r;

    const VertexId w = plan.reuse_id ? g.add_vertex_at(*plan.reuse_id) : g.add_vertex();
    rec.new_vertex = w;
    for (const Edge& e : plan.lifted) {
        g.remove_edge(e.u, e.v);
        g.add_edge(e.u, w);
        g.add_edge(e.v, w);
    }
    if (p % 2 == 0) {
        rec.op = OpKind::Op1;
        if (plan.lift_stub) {
            g.add_edge(*sg.deficient, w);
            sg.deficient = w; // the new vertex inherits the missing edge
        }
    } else if (plan.lift_stub) {
        rec.op = OpKind::Op2;
        g.add_edge(*sg.deficient, w);
        sg.deficient.reset();
    } else if (*plan.r == 0) {
        rec.op = OpKind::Op3a;
        sg.deficient = w;
    } else {
        rec.op = OpKind::Op3b;
        const VertexId u = rec.matching_used.covered_sequence()[*plan.r - 1];
        g.remove_edge(u, w);
        sg.deficient = u;
    }
    rec.stub_after = sg.deficient;

    const std::size_t missing = sg.deficient && *sg.deficient == w ? 1 : 0;
    if (g.degree(w) + missing != p)
        fail(ErrorCode::InvalidState, "inserted vertex has the wrong degree");
    return rec;
}

namespace {

std::vector<Edge> require_edges(const Graph& h, std::size_t k, const MatchingStrategy& strategy,
                                Rng& rng) {
    MatchingOutcome out = find_matching_of_size(h, k, strategy, rng);
    if (out.matching) return std::move(out.matching->edges);
    std::string msg = "no matching of size " + std::to_string(k);
    if (!out.note.empty()) msg += " (" + out.note + ")";
    if (!out.proven_infeasible) msg += " [strategy failure, not proven infeasible]";
    fail(ErrorCode::NoMatching, msg);
}

// uniform k-subset in draw order (partial Fisher-Yates, k rng draws)
std::vector<Edge> subset_edges(std::vector<Edge> pool, std::size_t k, Rng& rng) {
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

// copy of g with an explicit stub vertex attached to x, so the stub-edge can
// compete in matching selection; returns the stub vertex id
std::pair<Graph, VertexId> with_stub_vertex(const Graph& g, VertexId x) {
    Graph h = g;
    const VertexId sigma = h.add_vertex();
    h.add_edge(x, sigma);
    return {std::move(h), sigma};
}

} // namespace

DpStepRecord dp_step_even(StubGraph& sg, std::size_t k, const MatchingStrategy& strategy,
                          Rng& rng) {
    if (k == 0) fail(ErrorCode::BadParams, "even insertion needs k >= 1");
    DpStepPlan plan;
    plan.p_degree = 2 * k;
    if (sg.deficient) {
        auto [h, sigma] = with_stub_vertex(sg.graph, *sg.deficient);
        for (const Edge& e : require_edges(h, k, strategy, rng)) {
            if (e.u == sigma || e.v == sigma)
                plan.lift_stub = true;
            else
                plan.lifted.push_back(e);
        }
    } else {
        plan.lifted = require_edges(sg.graph, k, strategy, rng);
    }
    return apply_dp_step(sg, plan);
}

DpStepRecord dp_step_odd(StubGraph& sg, std::size_t k, std::optional<std::size_t> r,
                         const MatchingStrategy& strategy, Rng& rng) {
    DpStepPlan plan;
    plan.p_degree = 2 * k + 1;
    if (sg.deficient) {
        if (r) fail(ErrorCode::StubMismatch, "r given while a stub-edge must be lifted");
        Graph h = sg.graph;
        h.remove_vertex(*sg.deficient);
        plan.lifted = require_edges(h, k, strategy, rng);
        plan.lift_stub = true;
    } else {
        if (!r) fail(ErrorCode::BadR, "odd insertion without a stub needs r");
        if (*r > 2 * k + 2) fail(ErrorCode::BadR, "r out of [0, " + std::to_string(2 * k + 2) + "]");
        plan.r = r;
        plan.lifted = require_edges(sg.graph, *r == 0 ? k : k + 1, strategy, rng);
    }
    return apply_dp_step(sg, plan);
}

Rational make_rational(std::int64_t num, std::int64_t den) {
    if (den == 0) fail(ErrorCode::BadParams, "zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return {num, den == 0 ? 1 : den};
}

namespace {

std::int64_t parse_i64(std::string_view s) {
    std::int64_t v{};
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        fail(ErrorCode::BadParams, "bad integer: " + std::string(s));
    return v;
}

} // namespace

Rational rational_from_string(const std::string& text) {
    if (text.empty()) fail(ErrorCode::BadParams, "empty number");
    if (const auto slash = text.find('/'); slash != std::string::npos)
        return make_rational(parse_i64(std::string_view(text).substr(0, slash)),
                             parse_i64(std::string_view(text).substr(slash + 1)));
    const auto dot = text.find('.');
    if (dot == std::string::npos) return make_rational(parse_i64(text), 1);
    std::string_view head = std::string_view(text).substr(0, dot);
    std::string_view frac = std::string_view(text).substr(dot + 1);
    bool negative = false;
    if (!head.empty() && (head[0] == '-' || head[0] == '+')) {
        negative = head[0] == '-';
        head.remove_prefix(1);
    }
    if (frac.empty() || frac.size() > 18) fail(ErrorCode::BadParams, "bad decimal: " + text);
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const std::int64_t whole = head.empty() ? 0 : parse_i64(head);
    const std::int64_t fpart = parse_i64(frac);
    if (whole < 0 || fpart < 0 || whole > (std::numeric_limits<std::int64_t>::max() - fpart) / den)
        fail(ErrorCode::BadParams, "bad decimal: " + text);
    std::int64_t num = whole * den + fpart;
    return make_rational(negative ? -num : num, den);
}

std::string rational_to_string(const Rational& q) {
    return q.den == 1 ? std::to_string(q.num)
                      : std::to_string(q.num) + "/" + std::to_string(q.den);
}

void validate_protocol(const ProtocolConfig& config) {
    switch (config.kind) {
        case ProtocolKind::Max:
            break;
        case ProtocolKind::Linear:
            if (config.c.num < 1 || config.c.num > config.c.den)
                fail(ErrorCode::BadParams, "linear factor must be in (0, 1]");
            break;
        case ProtocolKind::ScaleFree:
            if (!(config.gamma > 1.0)) fail(ErrorCode::BadParams, "gamma must exceed 1");
            if (!(config.certainty_c > 0.0)) fail(ErrorCode::BadParams, "certainty level must be positive");
            break;
        case ProtocolKind::Regular:
            if (config.regular_c < 2) fail(ErrorCode::BadParams, "regular degree must be at least 2");
            break;
    }
}

namespace {

std::string double_to_string(double x) {
    char buf[32];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc{} ? std::string(buf, p) : std::string("nan");
}

} // namespace

std::string protocol_label(const ProtocolConfig& config) {
    switch (config.kind) {
        case ProtocolKind::Max: return "max";
        case ProtocolKind::Linear: return "linear:" + rational_to_string(config.c);
        case ProtocolKind::ScaleFree: return "sf:" + double_to_string(config.gamma);
        case ProtocolKind::Regular: return "regular:" + std::to_string(config.regular_c);
    }
    return "?";
}

ProtocolConfig protocol_from_label(const std::string& label) {
    ProtocolConfig config;
    const auto colon = label.find(':');
    const std::string head = label.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : label.substr(colon + 1);
    if (head == "max") {
        if (!arg.empty()) fail(ErrorCode::BadParams, "max takes no parameter");
        config.kind = ProtocolKind::Max;
    } else if (head == "linear") {
        config.kind = ProtocolKind::Linear;
        config.c = rational_from_string(arg);
    } else if (head == "sf") {
        config.kind = ProtocolKind::ScaleFree;
        double g{};
        const auto [p, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), g);
        if (ec != std::errc{} || p != arg.data() + arg.size())
            fail(ErrorCode::BadParams, "bad exponent: " + arg);
        config.gamma = g;
    } else if (head == "regular") {
        config.kind = ProtocolKind::Regular;
        const std::int64_t c = parse_i64(arg);
        if (c < 0) fail(ErrorCode::BadParams, "bad degree: " + arg);
        config.regular_c = static_cast<std::size_t>(c);
    } else {
        fail(ErrorCode::BadParams, "unknown protocol: " + label);
    }
    validate_protocol(config);
    return config;
}

std::size_t next_degree_linear(std::size_t nu, const Rational& c) {
    if (nu == 0) fail(ErrorCode::BadParams, "matching number must be positive");
    if (c.num < 1 || c.num > c.den) fail(ErrorCode::BadParams, "linear factor must be in (0, 1]");
    const auto num = static_cast<unsigned __int128>(c.num) * nu;
    const auto den = static_cast<unsigned __int128>(c.den);
    return 2 * static_cast<std::size_t>((num + den - 1) / den);
}

std::size_t next_degree_scale_free(std::size_t nu, double gamma, Rng& rng) {
    if (nu == 0) fail(ErrorCode::BadParams, "matching number must be positive");
    if (!(gamma > 1.0)) fail(ErrorCode::BadParams, "gamma must exceed 1");
    // prefix[i] = sum_{j<=i} j^-gamma, extended lazily and reused across calls
    thread_local std::vector<double> prefix{0.0};
    thread_local double cached_gamma = 0.0;
    if (gamma != cached_gamma) {
        prefix.assign(1, 0.0);
        cached_gamma = gamma;
    }
    const std::size_t top = 2 * nu;
    while (prefix.size() <= top) {
        const auto i = static_cast<double>(prefix.size());
        prefix.push_back(prefix.back() + std::pow(i, -gamma));
    }
    const double u = rng.unit() * prefix[top];
    const auto it = std::upper_bound(prefix.begin() + 1, prefix.begin() + 1 + top, u);
    const auto i = static_cast<std::size_t>(it - prefix.begin());
    return std::min(i, top);
}

GrowthEngine::GrowthEngine(StubGraph& sg, const ProtocolConfig& config)
    : sg_(&sg), config_(config), rng_(config.seed) {
    validate_protocol(config_);
    dm_.init(sg_->graph);
}

std::size_t GrowthEngine::pick_degree() {
    const std::size_t nu = dm_.size();
    switch (config_.kind) {
        case ProtocolKind::Max:
            if (nu == 0) fail(ErrorCode::NoMatching, "graph has no edges left to lift");
            return 2 * nu;
        case ProtocolKind::Linear:
            if (nu == 0) fail(ErrorCode::NoMatching, "graph has no edges left to lift");
            return next_degree_linear(nu, config_.c);
        case ProtocolKind::ScaleFree:
            if (nu == 0) fail(ErrorCode::NoMatching, "graph has no edges left to lift");
            return next_degree_scale_free(nu, config_.gamma, rng_);
        case ProtocolKind::Regular:
            return config_.regular_c;
    }
    fail(ErrorCode::InvalidState, "unknown protocol");
}

std::vector<Edge> GrowthEngine::select_edges(const Graph& h, std::size_t k) {
    if (config_.strategy.kind == StrategyKind::MaximumThenSubset) {
        // selecting from the live graph reuses the maintained matching;
        // auxiliary graphs (stub cases) get a fresh run
        std::vector<Edge> pool =
            (&h == &sg_->graph) ? dm_.current().edges : maximum_matching(h).edges;
        if (pool.size() < k)
            fail(ErrorCode::NoMatching, "protocol asked for " + std::to_string(k) +
                                            " edges, matching number is " +
                                            std::to_string(pool.size()));
        return subset_edges(std::move(pool), k, rng_);
    }
    return require_edges(h, k, config_.strategy, rng_);
}

DpStepPlan GrowthEngine::make_plan(std::size_t p_degree) {
    DpStepPlan plan;
    plan.p_degree = p_degree;
    const Graph& g = sg_->graph;
    if (p_degree % 2 == 0) {
        const std::size_t k = p_degree / 2;
        if (sg_->deficient) {
            auto [h, sigma] = with_stub_vertex(g, *sg_->deficient);
            for (const Edge& e : select_edges(h, k)) {
                if (e.u == sigma || e.v == sigma)
                    plan.lift_stub = true;
                else
                    plan.lifted.push_back(e);
            }
        } else {
            plan.lifted = select_edges(g, k);
        }
        return plan;
    }
    const std::size_t k = (p_degree - 1) / 2;
    if (sg_->deficient) {
        Graph h = g;
        h.remove_vertex(*sg_->deficient);
        plan.lifted = select_edges(h, k);
        plan.lift_stub = true;
        return plan;
    }
    std::size_t r;
    if (config_.kind == ProtocolKind::Regular) {
        // leave the new vertex deficient; the next odd insertion lifts the
        // stub-edge and restores regularity (degrees stay exact every 2 steps)
        r = 0;
    } else {
        r = static_cast<std::size_t>(rng_.below(2 * k + 3));
    }
    plan.r = r;
    plan.lifted = select_edges(g, r == 0 ? k : k + 1);
    return plan;
}

void GrowthEngine::after_apply(const DpStepRecord& rec, std::size_t nu_before) {
    dm_.on_vertex_grown();
    for (const Edge& e : rec.matching_used.edges) dm_.on_edge_removed(e.u, e.v);
    // the matching number can grow by at most one per insertion, so the
    // repair may certify-and-stop at nu_before + 1
    dm_.repair(&rng_, nu_before + 1);
    if (++steps_since_cold_ >= 256) {
        steps_since_cold_ = 0;
        const std::size_t maintained = dm_.size();
        dm_.recompute_cold();
        if (dm_.size() != maintained) fail(ErrorCode::InvalidState, "matching maintenance drift");
    }
}

DpStepRecord GrowthEngine::step() {
    const std::size_t nu_before = dm_.size();
    const std::size_t p = pick_degree();
    const DpStepPlan plan = make_plan(p);
    const DpStepRecord rec = apply_dp_step(*sg_, plan);
    after_apply(rec, nu_before);
    return rec;
}

GrowResult grow(StubGraph& sg, const ProtocolConfig& config) {
    validate_protocol(config);
    GrowResult result;
    if (config.target_n <= sg.graph.n()) return result;
    if (sg.graph.m() == 0) fail(ErrorCode::SeedTooSmall, "seed graph needs at least one edge");
    if (config.kind == ProtocolKind::Regular) {
        // fail on the seed, not mid-run: check the very first insertion fits
        const std::size_t c = config.regular_c;
        std::size_t cap;
        if (c % 2 == 0) {
            if (sg.deficient) {
                auto [h, sigma] = with_stub_vertex(sg.graph, *sg.deficient);
                (void)sigma;
                cap = maximum_matching(h).size();
            } else {
                cap = maximum_matching(sg.graph).size();
            }
            if (cap < c / 2) fail(ErrorCode::SeedTooSmall, "seed cannot host a degree-" + std::to_string(c) + " insertion");
        } else {
            Graph h = sg.graph;
            if (sg.deficient) h.remove_vertex(*sg.deficient);
            cap = maximum_matching(h).size();
            if (cap < (c - 1) / 2)
                fail(ErrorCode::SeedTooSmall, "seed cannot host a degree-" + std::to_string(c) + " insertion");
        }
    }
    GrowthEngine engine(sg, config);
    while (sg.graph.n() < config.target_n) {
        result.nu_history.push_back(engine.nu());
        result.steps.push_back(engine.step());
    }
    return result;
}

} // namespace dpg
