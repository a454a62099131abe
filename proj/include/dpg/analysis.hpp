#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpg/graph.hpp"
#include "dpg/growth.hpp"
#include "dpg/trace.hpp"

namespace dpg {

// Degree-sequence analytics: power-law bound checking against certified zeta
// brackets, growth-law verification from traces, density tracking.

// Certified enclosure of the zeta tail sum(j >= i) j^-gamma: partial sum plus
// integral bounds on the remainder, so lo <= true value <= hi always.
struct ZetaBracket {
    double lo = 0.0;
    double hi = 0.0;
};

// Requires gamma > 1, i >= 1 (BadParams). terms caps the partial summation.
ZetaBracket zeta_tail(double gamma, std::size_t i, std::size_t terms = 1'000'000);

enum class BoundKind { DistributionBounded, DensityBounded };

struct PowerLawViolation {
    std::size_t i = 0;
    std::size_t d_value = 0;    // D_{>=i} or D_i, by bound kind
    double bound_value = 0.0;   // the right-hand side the value exceeded
};

struct PowerLawReport {
    double gamma = 0.0;
    double C = 0.0;
    BoundKind bound_kind = BoundKind::DistributionBounded;
    std::vector<PowerLawViolation> violations;
    bool passed = false;
    // width of the tail-estimate enclosure folded into the verdict (0 for the
    // density check, whose bound is elementary)
    double bracket_width = 0.0;
};

// Verifies D_{>=i}(g) <= C * n * zeta(gamma, i) for every i in [1, max
// degree + 1]. The right side is evaluated at the LOWER end of its bracket,
// so a pass implies the true inequality; a violation within bracket_width of
// the bound may be an artifact of the enclosure. Requires gamma > 1, C > 0.
PowerLawReport check_distribution_bounded(const Graph& g, double gamma, double C);

// The stricter per-degree variant: D_i(g) <= C * n * i^-gamma for all i.
PowerLawReport check_density_bounded(const Graph& g, double gamma, double C);

// Closed-form coefficient (1 + sqrt(c)) / (zeta(gamma) - 1/(gamma-1)) that
// the scale-free protocol satisfies with certainty growing in c. Requires
// gamma > 1 and c > 0; throws BadParams when the denominator is not positive.
double sf_theoretical_C(double gamma, double certainty_c);

// Linear matching-number floor for scale-free runs: nu(G_n) >= t * n with
// t = 1/(4q+8), q = (4C/(gamma-2))^(1/(gamma-2)) + 1. Requires gamma > 2.
double sf_nu_constant(double gamma, double certainty_c);

struct GrowthSample {
    std::size_t n = 0;      // graph order when the vertex arrived
    std::size_t d_n = 0;    // its prescribed degree
    std::size_t nu_n = 0;   // matching number implied by the protocol (0 = not derivable)
    double rho_n = 0.0;     // edge density after the step (0 = not derivable)
};

struct GrowthLawReport {
    std::vector<GrowthSample> samples;  // monotone in n
    std::string law;
    double fitted_constant = 0.0;
    bool passed = false;
    double worst_margin = 0.0;  // min over checked samples of d_n minus the bound
    std::size_t checked = 0;    // samples the verdict covers
    std::size_t warmup = 0;     // smallest n included in the verdict
};

// Verifies d(v_n) >= n - 2*log2(n) - slack_C for every recorded insertion at
// n >= warmup. The trace must come from the max protocol (WrongProtocol) and
// carry the seed-n header (InsufficientData).
GrowthLawReport check_maxdpg_law(const Trace& trace, double slack_C, std::size_t warmup = 16);

// Verifies d(n) >= (2c-1)n - K - 2 in exact rational arithmetic on the range
// n0 < n <= 2c(n0+1 - 3/(2c-1)) - K. Requires 1/2 < c <= 1 and a trace from
// the linear protocol with matching c (max counts as c = 1). The premise
// d(i) >= (2c-1)i - K over the seed degrees (sorted ascending) is checked
// first; HypothesisFailed when the seed violates it. An empty range passes
// vacuously.
GrowthLawReport check_linear_law(const Trace& trace, const Rational& c, const Rational& K);

// m / C(n,2). Requires n >= 2 (TooSmall).
double edge_density(const Graph& g);

struct ScalingSample {
    std::size_t n = 0;
    std::size_t max_degree = 0;
};

struct MaxDegreeScalingReport {
    std::vector<ScalingSample> samples;       // sorted by n
    double exponent = 0.0;                    // log-log regression slope
    std::optional<double> gamma;              // set when every trace is scale-free
    std::optional<double> threshold;          // 1/gamma
    bool exceeds_threshold = false;           // exponent > 1/gamma
};

// Log-log regression of the final maximum degree against the final order
// across growth traces. Degrees never change after insertion, so both are
// derived from the records plus the seed-degrees header. Requires >= 3
// distinct final orders (InsufficientData) and growth-only traces.
MaxDegreeScalingReport max_degree_scaling(const std::vector<Trace>& traces);

}  // namespace dpg
