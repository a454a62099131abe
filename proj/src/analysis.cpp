#include "dpg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dpg/errors.hpp"

namespace dpg {

namespace {

// Kahan-compensated running sum; the zeta partial sums add ~1e6 terms and the
// bracket certificate should not be swamped by accumulation error.
struct Accumulator {
    double sum = 0.0;
    double comp = 0.0;

    void add(double term) {
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

std::optional<ProtocolConfig> try_protocol(const std::string& label) {
    if (label.empty()) return std::nullopt;
    try {
        return protocol_from_label(label);
    } catch (const Error&) {
        return std::nullopt;
    }
}

// net edge change of a replayed record, derived without touching a graph
long long edge_delta(const TraceRecord& rec) {
    const long long k = static_cast<long long>(rec.matching.size());
    if (!rec.is_removal) {
        switch (rec.op) {
            case OpKind::Op1: return k + (rec.stub_partner ? 1 : 0);
            case OpKind::Op2: return k + 1;
            case OpKind::Op3a: return k;
            case OpKind::Op3b: return k - 1;
        }
        return 0;
    }
    switch (rec.inv_op) {
        case InvOpKind::InvOp1:
            // aux at p = 2|M|+2 marks a stub handover (one extra edge vanished)
            return rec.new_deficient && rec.p_degree == 2 * (rec.matching.size() + 1) ? -(k + 1) : -k;
        case InvOpKind::InvOp2: return -(k + 1);
        case InvOpKind::InvOp3a: return -k;
        case InvOpKind::InvOp3b: return -(k - 1);
    }
    return 0;
}

void require_growth_only(const TraceRecord& rec, const char* who) {
    if (rec.is_removal)
        fail(ErrorCode::WrongProtocol, std::string(who) + " needs a pure growth trace, found a REMOVE record");
}

constexpr std::int64_t kRationalCap = 1'000'000;

void check_rational_scale(const Rational& q, const char* name) {
    if (q.num > kRationalCap || q.num < -kRationalCap || q.den > kRationalCap)
        fail(ErrorCode::BadParams, std::string(name) + " is too fine-grained for exact range arithmetic");
}

}  // namespace

ZetaBracket zeta_tail(double gamma, std::size_t i, std::size_t terms) {
    if (!(gamma > 1.0)) fail(ErrorCode::BadParams, "zeta tail needs gamma > 1");
    if (i == 0) fail(ErrorCode::BadParams, "zeta tail index starts at 1");
    if (terms == 0) terms = 1;
    const std::size_t last = std::max(i, terms);
    Accumulator acc;
    std::size_t j = i;
    while (j <= last) {
        double term = std::pow(static_cast<double>(j), -gamma);
        acc.add(term);
        ++j;
        if (j > i + 1 && term < acc.sum * 1e-18) break;  // remaining terms below resolution
    }
    // integral enclosure of the remainder sum(t >= j) t^-gamma; j >= 2 here
    const double tail_lo = std::pow(static_cast<double>(j), 1.0 - gamma) / (gamma - 1.0);
    const double tail_hi = std::pow(static_cast<double>(j - 1), 1.0 - gamma) / (gamma - 1.0);
    return {acc.sum + tail_lo, acc.sum + tail_hi};
}

PowerLawReport check_distribution_bounded(const Graph& g, double gamma, double C) {
    if (!(gamma > 1.0)) fail(ErrorCode::BadParams, "distribution bound needs gamma > 1");
    if (!(C > 0.0)) fail(ErrorCode::BadParams, "distribution bound needs C > 0");
    PowerLawReport rep;
    rep.gamma = gamma;
    rep.C = C;
    rep.bound_kind = BoundKind::DistributionBounded;
    rep.passed = true;
    const std::size_t n = g.n();
    if (n == 0) return rep;

    std::size_t dmax = g.max_degree();
    std::vector<std::size_t> at_least(dmax + 3, 0);
    for (const auto& [d, cnt] : g.degree_histogram()) at_least[d] = cnt;
    for (std::size_t d = dmax + 1; d-- > 0;) at_least[d] += at_least[d + 1];

    // one shared prefix pass gives every tail sum(j >= i) j^-gamma
    const std::size_t cutoff = std::max<std::size_t>(1'000'000, dmax + 1);
    std::vector<double> prefix(cutoff + 1, 0.0);
    Accumulator acc;
    for (std::size_t j = 1; j <= cutoff; ++j) {
        acc.add(std::pow(static_cast<double>(j), -gamma));
        prefix[j] = acc.sum;
    }
    const double tail_lo = std::pow(static_cast<double>(cutoff) + 1.0, 1.0 - gamma) / (gamma - 1.0);
    const double tail_hi = std::pow(static_cast<double>(cutoff), 1.0 - gamma) / (gamma - 1.0);
    rep.bracket_width = C * static_cast<double>(n) * (tail_hi - tail_lo);

    for (std::size_t i = 1; i <= dmax + 1; ++i) {
        const double zeta_lo = prefix[cutoff] - prefix[i - 1] + tail_lo;
        const double bound = C * static_cast<double>(n) * zeta_lo;
        if (static_cast<double>(at_least[i]) > bound)
            rep.violations.push_back({i, at_least[i], bound});
    }
    rep.passed = rep.violations.empty();
    return rep;
}

PowerLawReport check_density_bounded(const Graph& g, double gamma, double C) {
    if (!(gamma > 1.0)) fail(ErrorCode::BadParams, "density bound needs gamma > 1");
    if (!(C > 0.0)) fail(ErrorCode::BadParams, "density bound needs C > 0");
    PowerLawReport rep;
    rep.gamma = gamma;
    rep.C = C;
    rep.bound_kind = BoundKind::DensityBounded;
    rep.passed = true;
    const std::size_t n = g.n();
    if (n == 0) return rep;
    for (const auto& [d, cnt] : g.degree_histogram()) {
        if (d < 1) continue;
        const double bound = C * static_cast<double>(n) * std::pow(static_cast<double>(d), -gamma);
        if (static_cast<double>(cnt) > bound) rep.violations.push_back({d, cnt, bound});
    }
    rep.passed = rep.violations.empty();
    return rep;
}

double sf_theoretical_C(double gamma, double certainty_c) {
    if (!(gamma > 1.0)) fail(ErrorCode::BadParams, "coefficient needs gamma > 1");
    if (!(certainty_c > 0.0)) fail(ErrorCode::BadParams, "coefficient needs certainty c > 0");
    ZetaBracket z = zeta_tail(gamma, 1);
    const double denom = 0.5 * (z.lo + z.hi) - 1.0 / (gamma - 1.0);
    if (!(denom > 0.0)) fail(ErrorCode::BadParams, "zeta(gamma) - 1/(gamma-1) is not positive");
    const double C = (1.0 + std::sqrt(certainty_c)) / denom;
    // certified ceiling: for gamma >= 2 the denominator is at least
    // zeta(2) - 1 > 1/2, so C <= 2(1+sqrt(c)) must hold
    if (gamma >= 2.0 && certainty_c >= 0.25 && C > 2.0 * (1.0 + std::sqrt(certainty_c)) * (1.0 + 1e-12))
        fail(ErrorCode::InvalidState, "coefficient exceeded its certified ceiling");
    return C;
}

double sf_nu_constant(double gamma, double certainty_c) {
    if (!(gamma > 2.0)) fail(ErrorCode::BadParams, "matching-number floor needs gamma > 2");
    const double C = sf_theoretical_C(gamma, certainty_c);
    const double q = std::pow(4.0 * C / (gamma - 2.0), 1.0 / (gamma - 2.0)) + 1.0;
    return 1.0 / (4.0 * q + 8.0);
}

GrowthLawReport check_maxdpg_law(const Trace& trace, double slack_C, std::size_t warmup) {
    auto cfg = try_protocol(trace.protocol);
    if (!cfg || cfg->kind != ProtocolKind::Max)
        fail(ErrorCode::WrongProtocol,
             "max growth law needs a max-protocol trace, got '" + trace.protocol + "'");
    if (!trace.seed_n) fail(ErrorCode::InsufficientData, "trace lacks the seed-n header");

    GrowthLawReport rep;
    rep.law = "d(n) >= n - 2*log2(n) - C";
    rep.fitted_constant = slack_C;
    rep.warmup = warmup;
    std::size_t n = *trace.seed_n;
    long long m = trace.seed_m ? static_cast<long long>(*trace.seed_m) : -1;
    double worst = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (const TraceRecord& rec : trace.records) {
        require_growth_only(rec, "max growth law");
        ++n;
        if (m >= 0) m += edge_delta(rec);
        GrowthSample s;
        s.n = n;
        s.d_n = rec.p_degree;
        s.nu_n = rec.p_degree / 2;  // max protocol: d = 2*nu at insertion
        s.rho_n = (m >= 0 && n >= 2)
                      ? static_cast<double>(m) / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1))
                      : 0.0;
        rep.samples.push_back(s);
        if (n < warmup) continue;
        const double margin =
            static_cast<double>(rec.p_degree) -
            (static_cast<double>(n) - 2.0 * std::log2(static_cast<double>(n)) - slack_C);
        worst = std::min(worst, margin);
        ++rep.checked;
        if (margin < 0.0) ok = false;
    }
    rep.worst_margin = rep.checked ? worst : 0.0;
    rep.passed = ok;
    return rep;
}

GrowthLawReport check_linear_law(const Trace& trace, const Rational& c, const Rational& K) {
    const Rational cn = make_rational(c.num, c.den);
    const Rational kn = make_rational(K.num, K.den);
    if (!(2 * cn.num > cn.den && cn.num <= cn.den))
        fail(ErrorCode::BadParams, "linear law needs 1/2 < c <= 1");
    if (kn.num < 0) fail(ErrorCode::BadParams, "linear law needs K >= 0");
    check_rational_scale(cn, "c");
    check_rational_scale(kn, "K");

    auto cfg = try_protocol(trace.protocol);
    const bool matches =
        cfg && ((cfg->kind == ProtocolKind::Linear && cfg->c.num == cn.num && cfg->c.den == cn.den) ||
                (cfg->kind == ProtocolKind::Max && cn.num == cn.den));
    if (!matches)
        fail(ErrorCode::WrongProtocol, "linear growth law for c=" + rational_to_string(cn) +
                                           " does not match trace protocol '" + trace.protocol + "'");
    if (!trace.seed_n) fail(ErrorCode::InsufficientData, "trace lacks the seed-n header");
    const std::size_t n0 = *trace.seed_n;
    if (trace.seed_degrees.size() != n0)
        fail(ErrorCode::InsufficientData, "trace lacks a full seed-degrees header");

    using I = __int128;
    const I a = 2 * static_cast<I>(cn.num) - cn.den;  // (2c-1) * den, > 0
    const I cd = cn.den;
    const I pn = kn.num;
    const I pd = kn.den;

    // premise d(i) >= (2c-1)i - K over the seed, easiest ordering first:
    // sorting degrees ascending minimizes the K any ordering would need
    std::vector<std::size_t> degs = trace.seed_degrees;
    std::sort(degs.begin(), degs.end());
    for (std::size_t i = 1; i <= n0; ++i) {
        const I lhs = static_cast<I>(degs[i - 1]) * cd * pd;
        const I rhs = a * static_cast<I>(i) * pd - pn * cd;
        if (lhs < rhs)
            fail(ErrorCode::HypothesisFailed,
                 "seed degree " + std::to_string(degs[i - 1]) + " at position " + std::to_string(i) +
                     " violates d(i) >= (2c-1)i - K");
    }

    // validity ceiling R = 2c(n0+1 - 3/(2c-1)) - K as an exact fraction
    const I r_num = 2 * static_cast<I>(cn.num) * ((static_cast<I>(n0) + 1) * a - 3 * cd) * pd - pn * cd * a;
    const I r_den = cd * a * pd;  // > 0

    GrowthLawReport rep;
    rep.law = "d(n) >= (2c-1)n - K - 2 for n0 < n <= 2c(n0+1 - 3/(2c-1)) - K";
    rep.fitted_constant = static_cast<double>(kn.num) / static_cast<double>(kn.den);
    rep.warmup = n0 + 1;
    const double c_real = static_cast<double>(cn.num) / static_cast<double>(cn.den);
    const double k_real = rep.fitted_constant;

    std::size_t n = n0;
    long long m = trace.seed_m ? static_cast<long long>(*trace.seed_m) : -1;
    double worst = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (const TraceRecord& rec : trace.records) {
        require_growth_only(rec, "linear growth law");
        ++n;
        if (m >= 0) m += edge_delta(rec);
        GrowthSample s;
        s.n = n;
        s.d_n = rec.p_degree;
        s.nu_n = cn.num == cn.den ? rec.p_degree / 2 : 0;
        s.rho_n = (m >= 0 && n >= 2)
                      ? static_cast<double>(m) / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1))
                      : 0.0;
        rep.samples.push_back(s);
        if (static_cast<I>(n) * r_den > r_num) continue;  // past the validity range
        // d * cd * pd >= a*n*pd - (K+2) * cd * pd, exactly
        const I lhs = static_cast<I>(rec.p_degree) * cd * pd;
        const I rhs = a * static_cast<I>(n) * pd - (pn + 2 * pd) * cd;
        ++rep.checked;
        if (lhs < rhs) ok = false;
        worst = std::min(worst, static_cast<double>(rec.p_degree) -
                                    ((2.0 * c_real - 1.0) * static_cast<double>(n) - k_real - 2.0));
    }
    rep.worst_margin = rep.checked ? worst : 0.0;
    rep.passed = ok;
    return rep;
}

double edge_density(const Graph& g) {
    if (g.n() < 2) fail(ErrorCode::TooSmall, "edge density needs at least 2 vertices");
    const double n = static_cast<double>(g.n());
    return static_cast<double>(g.m()) / (0.5 * n * (n - 1.0));
}

MaxDegreeScalingReport max_degree_scaling(const std::vector<Trace>& traces) {
    if (traces.size() < 3)
        fail(ErrorCode::InsufficientData, "max-degree scaling needs at least 3 traces");

    MaxDegreeScalingReport rep;
    bool all_scale_free = true;
    std::optional<double> shared_gamma;
    for (const Trace& trace : traces) {
        if (!trace.seed_n) fail(ErrorCode::InsufficientData, "trace lacks the seed-n header");
        if (trace.seed_degrees.size() != *trace.seed_n)
            fail(ErrorCode::InsufficientData, "trace lacks a full seed-degrees header");
        std::size_t n = *trace.seed_n;
        std::size_t dmax = 0;
        for (std::size_t d : trace.seed_degrees) dmax = std::max(dmax, d);
        for (const TraceRecord& rec : trace.records) {
            require_growth_only(rec, "max-degree scaling");
            ++n;
            dmax = std::max(dmax, rec.p_degree);
        }
        rep.samples.push_back({n, dmax});

        auto cfg = try_protocol(trace.protocol);
        if (cfg && cfg->kind == ProtocolKind::ScaleFree) {
            if (!shared_gamma) shared_gamma = cfg->gamma;
            if (*shared_gamma != cfg->gamma) all_scale_free = false;  // mixed exponents
        } else {
            all_scale_free = false;
        }
    }
    std::sort(rep.samples.begin(), rep.samples.end(),
              [](const ScalingSample& x, const ScalingSample& y) { return x.n < y.n; });

    std::size_t distinct = 0;
    for (std::size_t i = 0; i < rep.samples.size(); ++i)
        if (i == 0 || rep.samples[i].n != rep.samples[i - 1].n) ++distinct;
    if (distinct < 3)
        fail(ErrorCode::InsufficientData, "max-degree scaling needs 3 distinct final orders (no spread)");

    double sx = 0, sy = 0;
    for (const ScalingSample& s : rep.samples) {
        if (s.max_degree == 0)
            fail(ErrorCode::InsufficientData, "max-degree scaling cannot regress a degree-0 sample");
        sx += std::log(static_cast<double>(s.n));
        sy += std::log(static_cast<double>(s.max_degree));
    }
    const double mx = sx / static_cast<double>(rep.samples.size());
    const double my = sy / static_cast<double>(rep.samples.size());
    double sxx = 0, sxy = 0;
    for (const ScalingSample& s : rep.samples) {
        const double dx = std::log(static_cast<double>(s.n)) - mx;
        const double dy = std::log(static_cast<double>(s.max_degree)) - my;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    rep.exponent = sxy / sxx;
    if (all_scale_free && shared_gamma) {
        rep.gamma = *shared_gamma;
        rep.threshold = 1.0 / *shared_gamma;
        rep.exceeds_threshold = rep.exponent > *rep.threshold;
    }
    return rep;
}

}  // namespace dpg
