// Acceptance suite. Each criterion prints exactly one verdict line:
//
//   criterion NN PASS <name> (X.Xs)
//
// With no arguments all 13 run in order; --criterion N runs one. The process
// exits 0 iff every criterion it ran passed. --calibrate runs the pilot for
// the criterion-5 growth-law constants (pilot seeds 1..10, disjoint from the
// verification seeds 101..120) and prints the values frozen below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dpg/analysis.hpp"
#include "dpg/edgelist_io.hpp"
#include "dpg/errors.hpp"
#include "dpg/experiment.hpp"
#include "dpg/gadgets.hpp"
#include "dpg/graph.hpp"
#include "dpg/growth.hpp"
#include "dpg/matching.hpp"
#include "dpg/reduce.hpp"
#include "dpg/rng.hpp"
#include "dpg/trace.hpp"
#include "oracles.hpp"

using namespace dpg;
namespace fs = std::filesystem;

namespace {

// ---- criterion 5 constants, frozen from the pilot (--calibrate) ----
// Pilot over seeds 1..10, growth K2 -> 2048, n >= 64: the largest observed
// deficit n - 2*log2(n) - d(v_n) was -6.00 (the degree floor holds with six
// units to spare; seed spread was under 1.2), so C* freezes at -4.0 = pilot
// max + 2 headroom. The largest observed (1/2 - rho_n) * n / log2(n) was
// 0.4621 (spread under 0.015), so a freezes at 0.6. The verification runs
// use the disjoint seeds 101..120.
constexpr double kMaxdpgCstar = -4.0;
constexpr double kMaxdpgDensityA = 0.6;

constexpr std::uint64_t kPilotSeedLo = 1, kPilotSeedHi = 10;
constexpr std::uint64_t kVerifySeedLo = 101, kVerifySeedHi = 120;

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

Graph two_k4() {
    Graph g(8);
    for (VertexId base : {0u, 4u})
        for (VertexId i = base; i < base + 4; ++i)
            for (VertexId j = i + 1; j < base + 4; ++j) g.add_edge(i, j);
    return g;
}

// all stub placements of a graph: stubless first, then each live vertex
std::vector<StubGraph> stub_states(const Graph& g) {
    std::vector<StubGraph> states;
    states.emplace_back(g);
    for (VertexId v : g.vertices()) {
        StubGraph sg(g);
        sg.deficient = v;
        states.push_back(std::move(sg));
    }
    return states;
}

// ---- criterion 1: removability oracle equivalence ----
bool criterion01(std::string& detail) {
    std::size_t pairs = 0;
    auto agree_everywhere = [&](const Graph& g) -> bool {
        for (const StubGraph& sg : stub_states(g))
            for (VertexId v : sg.graph.vertices()) {
                ++pairs;
                if (removability(sg, v).has_value() != brute_removable(sg, v)) return false;
            }
        return true;
    };

    Rng rng(2026);
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 2 + rng.below(7);
        const double p = (1 + rng.below(9)) / 10.0;
        if (!agree_everywhere(random_graph(rng, n, p))) {
            detail = "disagreement on random graph #" + std::to_string(t);
            return false;
        }
    }
    for (std::size_t n = 1; n <= 6; ++n) {
        const std::size_t bits = n * (n - 1) / 2;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask)
            if (!agree_everywhere(graph_from_mask(n, mask))) {
                detail = "disagreement on n=" + std::to_string(n) +
                         " mask=" + std::to_string(mask);
                return false;
            }
    }
    detail = std::to_string(pairs) + " vertex/stub states agreed";
    return true;
}

// ---- criterion 2: two-step, six-removal replay from the doubled clique ----
bool criterion02(std::string& detail) {
    const std::string trace_text =
        "# dpg-trace v1\n"
        "# protocol=max\n"
        "# seed-n=8\n"
        "# seed-m=12\n"
        "# seed-degrees=3,3,3,3,3,3,3,3\n"
        "STEP 8 2 Op1 - M=0-1\n"
        "STEP 9 8 Op1 - M=4-5,0-2,1-3,6-7\n"
        "REMOVE 0 3 InvOp2 9 M=3-8\n"
        "REMOVE 8 2 InvOp1 9 M=1-3\n"
        "REMOVE 9 8 InvOp1 7 M=1-4,2-5,3-6\n"
        "REMOVE 1 3 InvOp3b 4 M=2-4,3-7\n"
        "REMOVE 2 3 InvOp2 5 M=3-4\n"
        "REMOVE 3 3 InvOp3b 2 M=4-5,6-7\n";
    const Trace trace = parse_trace(trace_text);
    std::size_t steps = 0, removals = 0;
    for (const TraceRecord& rec : trace.records) (rec.is_removal ? removals : steps)++;
    if (steps != 2 || removals != 6) {
        detail = "trace shape wrong";
        return false;
    }

    const StubGraph seed(two_k4());
    StubGraph sg = seed;
    replay_forward(sg, trace);
    const bool is_k4 = to_edge_list(sg) == to_edge_list(StubGraph(complete_graph(4))) &&
                       !sg.deficient;
    if (!is_k4) {
        detail = "forward replay did not end at the 4-clique";
        return false;
    }
    replay_reverse(sg, trace);
    if (!(sg == seed)) {
        detail = "reverse replay did not restore the doubled clique";
        return false;
    }
    detail = "forward to K4 and back, exact equality";
    return true;
}

// ---- criterion 3: irreducibility verdicts ----
bool criterion03(std::string& detail) {
    // complete graphs: K2 genuinely reduces (K2 -> K1 + stub), so the
    // irreducible range starts at 3
    for (std::size_t n = 3; n <= 8; ++n)
        if (!is_irreducible(StubGraph(complete_graph(n))).irreducible) {
            detail = "complete graph n=" + std::to_string(n) + " judged reducible";
            return false;
        }
    for (std::size_t k = 3; k <= 12; ++k)
        if (!is_irreducible(StubGraph(irreducible_4regular(k))).irreducible) {
            detail = "4-regular family k=" + std::to_string(k) + " judged reducible";
            return false;
        }
    for (std::size_t n = 4; n <= 16; ++n)
        if (is_irreducible(StubGraph(cycle_graph(n))).irreducible) {
            detail = "cycle n=" + std::to_string(n) + " judged irreducible";
            return false;
        }

    // anything extended by >= 1 forward step is reducible again
    Rng rng(33);
    MatchingStrategy strat;
    for (int t = 0; t < 30; ++t) {
        Graph base;
        switch (t % 5) {
            case 0: base = complete_graph(5); break;
            case 1: base = complete_graph(8); break;
            case 2: base = cycle_graph(7); break;
            case 3: base = irreducible_4regular(3); break;
            default:
                do {
                    base = random_graph(rng, 4 + rng.below(6), 0.5);
                } while (base.m() == 0);
        }
        StubGraph sg(base);
        const std::size_t extra = 1 + rng.below(3);
        for (std::size_t s = 0; s < extra; ++s) {
            if (rng.below(2) == 0 || sg.deficient)
                // with a stub present the odd insert consumes it (no r)
                dp_step_odd(sg, 1, sg.deficient ? std::nullopt : std::optional<std::size_t>{0},
                            strat, rng);
            else
                dp_step_even(sg, 1, strat, rng);
        }
        if (is_irreducible(sg).irreducible) {
            detail = "extension #" + std::to_string(t) + " judged irreducible";
            return false;
        }
    }
    detail = "cliques and the 4-regular family irreducible; cycles and extensions not";
    return true;
}

// ---- criterion 4: matching bounds never exceed the true matching number ----
bool criterion04(std::string& detail) {
    Rng rng(44);
    for (int t = 0; t < 1000; ++t) {
        Graph g;
        do {
            g = random_graph(rng, 2 + rng.below(11), (1 + rng.below(9)) / 10.0);
        } while (g.m() == 0);
        const std::size_t nu = brute_nu(g);
        const MatchingBoundReport rep = matching_bound_report(g, false);
        if (rep.vizing > nu || rep.posa > nu || rep.generalized_vizing > nu) {
            detail = "bound above nu on random graph #" + std::to_string(t);
            return false;
        }
    }
    detail = "3000 bounds dominated by brute-force nu";
    return true;
}

// ---- criterion 5: max-growth degree floor and edge-density window ----
struct MaxdpgExtremes {
    double worst_deficit = -1e300;  // n - 2log2(n) - d(v_n)
    double worst_density_a = -1e300;  // (1/2 - rho_n) * n / log2(n)
    bool density_upper_ok = true;   // 4m <= n(n-1) at every n >= 64
};

MaxdpgExtremes maxdpg_extremes(std::uint64_t seed) {
    MaxdpgExtremes ex;
    StubGraph sg(complete_graph(2));
    ProtocolConfig pc;
    pc.kind = ProtocolKind::Max;
    pc.seed = seed;
    pc.target_n = 2048;
    GrowthEngine engine(sg, pc);
    while (sg.graph.n() < pc.target_n) {
        const DpStepRecord rec = engine.step();
        const std::size_t n = sg.graph.n();
        if (n < 64) continue;
        const double log2n = std::log2(double(n));
        ex.worst_deficit = std::max(ex.worst_deficit,
                                    double(n) - 2.0 * log2n - double(rec.p_degree));
        const std::size_t m = sg.graph.m();
        if (4 * m > n * (n - 1)) ex.density_upper_ok = false;
        const double rho = double(2 * m) / (double(n) * double(n - 1));
        ex.worst_density_a = std::max(ex.worst_density_a, (0.5 - rho) * double(n) / log2n);
    }
    return ex;
}

void calibrate_maxdpg() {
    double deficit = -1e300, density_a = -1e300;
    bool upper_ok = true;
    for (std::uint64_t seed = kPilotSeedLo; seed <= kPilotSeedHi; ++seed) {
        const MaxdpgExtremes ex = maxdpg_extremes(seed);
        deficit = std::max(deficit, ex.worst_deficit);
        density_a = std::max(density_a, ex.worst_density_a);
        upper_ok = upper_ok && ex.density_upper_ok;
        std::printf("pilot seed %llu: worst deficit %s, density a %s, rho<=1/2 %s\n",
                    static_cast<unsigned long long>(seed), fmt(ex.worst_deficit).c_str(),
                    fmt(ex.worst_density_a).c_str(), ex.density_upper_ok ? "yes" : "NO");
    }
    std::printf("pilot maxima: deficit %s -> freeze C* above this; "
                "density a %s -> freeze a above this; upper bound held: %s\n",
                fmt(deficit).c_str(), fmt(density_a).c_str(), upper_ok ? "yes" : "NO");
}

bool criterion05(std::string& detail) {
    double worst_deficit = -1e300, worst_a = -1e300;
    for (std::uint64_t seed = kVerifySeedLo; seed <= kVerifySeedHi; ++seed) {
        const MaxdpgExtremes ex = maxdpg_extremes(seed);
        worst_deficit = std::max(worst_deficit, ex.worst_deficit);
        worst_a = std::max(worst_a, ex.worst_density_a);
        if (ex.worst_deficit > kMaxdpgCstar) {
            detail = "seed " + std::to_string(seed) + " degree deficit " +
                     fmt(ex.worst_deficit) + " above C*=" + fmt(kMaxdpgCstar);
            return false;
        }
        if (!ex.density_upper_ok) {
            detail = "seed " + std::to_string(seed) + " density above 1/2";
            return false;
        }
        if (ex.worst_density_a > kMaxdpgDensityA) {
            detail = "seed " + std::to_string(seed) + " density slack " +
                     fmt(ex.worst_density_a) + " above a=" + fmt(kMaxdpgDensityA);
            return false;
        }
    }
    detail = "20 runs; worst deficit " + fmt(worst_deficit) + " <= C*=" + fmt(kMaxdpgCstar) +
             ", worst density a " + fmt(worst_a) + " <= " + fmt(kMaxdpgDensityA);
    return true;
}

// ---- criterion 6: linear-protocol degree inequality, exact arithmetic ----
bool criterion06(std::string& detail) {
    struct Case {
        Rational c;
        std::size_t n0;
        std::size_t target;
        std::size_t expect_checked;
    };
    // ranges: n0 < n <= 2c(n0+1 - 3/(2c-1)) - K with K = 2
    const Case cases[] = {
        {Rational{3, 5}, 128, 140, 6},    // range (128, 134.8]
        {Rational{3, 4}, 64, 100, 22},    // range (64, 86.5]
        {Rational{9, 10}, 64, 120, 44},   // range (64, 108.25]
    };
    for (const Case& kase : cases) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            StubGraph sg(complete_graph(kase.n0));
            ProtocolConfig pc;
            pc.kind = ProtocolKind::Linear;
            pc.c = kase.c;
            pc.seed = seed;
            pc.target_n = kase.target;
            Trace trace;
            trace.protocol = protocol_label(pc);
            stamp_seed_info(trace, sg);
            const GrowResult res = grow(sg, pc);
            for (const DpStepRecord& rec : res.steps)
                trace.records.push_back(to_trace_record(rec));
            const GrowthLawReport rep = check_linear_law(trace, kase.c, Rational{2, 1});
            if (!rep.passed || rep.checked != kase.expect_checked) {
                detail = "c=" + rational_to_string(kase.c) + " seed " + std::to_string(seed) +
                         (rep.passed ? " checked " + std::to_string(rep.checked) +
                                           " != " + std::to_string(kase.expect_checked)
                                     : " violated the exact inequality");
                return false;
            }
        }
    }
    detail = "30 runs, exact inequality held on every stated range";
    return true;
}

// ---- criterion 7: scale-free distribution-bound success rate ----
bool criterion07(std::string& detail) {
    bool all_ok = true;
    detail.clear();
    for (const double gamma : {2.2, 2.5, 3.0}) {
        const double C = sf_theoretical_C(gamma, 1.0);
        int passes = 0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            StubGraph sg(complete_graph(4));
            ProtocolConfig pc;
            pc.kind = ProtocolKind::ScaleFree;
            pc.gamma = gamma;
            pc.certainty_c = 1.0;
            pc.seed = seed;
            pc.target_n = 10000;
            grow(sg, pc);
            if (check_distribution_bounded(sg.graph, gamma, C).passed) ++passes;
        }
        if (!detail.empty()) detail += ", ";
        detail += "gamma " + fmt(gamma) + ": " + std::to_string(passes) + "/10";
        if (passes < 9) all_ok = false;
    }
    return all_ok;
}

// ---- criterion 8: degree-sampler law at nu = 100 ----
bool criterion08(std::string& detail) {
    const std::size_t nu = 100;
    const double gamma = 2.5;
    const std::size_t hi = 2 * nu;
    const std::size_t draws = 1'000'000;
    Rng rng(88);
    std::vector<std::size_t> count(hi + 1, 0);
    for (std::size_t t = 0; t < draws; ++t) {
        const std::size_t d = next_degree_scale_free(nu, gamma, rng);
        if (d < 1 || d > hi) {
            detail = "draw outside [1, 2nu]";
            return false;
        }
        ++count[d];
    }
    long double z = 0.0L;
    for (std::size_t i = 1; i <= hi; ++i) z += std::pow((long double)i, -(long double)gamma);
    long double emp = 0.0L, model = 0.0L, ks = 0.0L;
    for (std::size_t i = 1; i <= hi; ++i) {
        emp += (long double)count[i] / draws;
        model += std::pow((long double)i, -(long double)gamma) / z;
        ks = std::max(ks, (long double)std::fabs((double)(emp - model)));
    }
    detail = "Kolmogorov distance " + fmt((double)ks);
    return ks < 0.01;
}

// ---- criterion 9: satisfiability reduction fidelity ----
bool criterion09(std::string& detail) {
    Rng rng(99);
    std::vector<Formula> sat_pool, unsat_pool;
    for (int tries = 0; tries < 5000 &&
                        (sat_pool.size() < 20 || unsat_pool.size() < 20);
         ++tries) {
        const std::size_t vars = 1 + rng.below(6);
        const std::size_t clauses = 1 + rng.below(2 * vars + 1);
        const Formula f = random_3sat3(rng, vars, clauses);
        if (truth_table_sat(f)) {
            if (sat_pool.size() < 20) sat_pool.push_back(f);
        } else {
            if (unsat_pool.size() < 20) unsat_pool.push_back(f);
        }
    }
    if (sat_pool.size() < 20 || unsat_pool.size() < 20) {
        detail = "could not build the 20/20 formula pools";
        return false;
    }

    std::vector<Formula> all = sat_pool;
    all.insert(all.end(), unsat_pool.begin(), unsat_pool.end());
    for (std::size_t i = 0; i < all.size(); ++i) {
        const GadgetInstance inst = build_reduction(all[i]);
        if (!verify_reduction(inst, all[i])) {
            detail = "verify_reduction failed on formula #" + std::to_string(i);
            return false;
        }
        if (inst.graph.max_degree() > 28) {
            detail = "max degree " + std::to_string(inst.graph.max_degree()) + " above 28";
            return false;
        }
        std::vector<VertexId> core;
        for (const auto& [var, x] : inst.variable_vertices) core.push_back(x);
        for (const auto& [idx, c] : inst.clause_vertices) core.push_back(c);
        for (std::size_t a = 0; a < core.size(); ++a)
            for (std::size_t b = a + 1; b < core.size(); ++b)
                if (inst.graph.has_edge(core[a], core[b])) {
                    detail = "variable/clause vertices not independent";
                    return false;
                }
    }
    detail = "40/40 verified (20 satisfiable, 20 unsatisfiable), degree cap and "
             "independence held";
    return true;
}

// ---- criterion 10: decomposition structure of sparse kernels ----

// vertex sets of the connected components
std::vector<std::vector<VertexId>> components_of(const Graph& g) {
    std::vector<char> seen(g.id_bound(), 0);
    std::vector<std::vector<VertexId>> comps;
    for (VertexId v : g.vertices()) {
        if (seen[v]) continue;
        std::vector<VertexId> comp, stack{v};
        seen[v] = 1;
        while (!stack.empty()) {
            const VertexId u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (VertexId w : g.neighbors(u))
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        comps.push_back(std::move(comp));
    }
    return comps;
}

// random max-degree-3 graph in which every component contains a cycle (tree
// components shed vertices below the triangle kernels the lemma describes)
Graph random_low_degree_cyclic(Rng& rng) {
    for (;;) {
        const std::size_t n = 6 + rng.below(35);
        const Graph g = random_max_degree_graph(rng, n, 3);
        std::vector<VertexId> keep;
        for (const auto& comp : components_of(g)) {
            std::size_t twice_m = 0;
            for (VertexId v : comp) twice_m += g.degree(v);
            if (twice_m / 2 >= comp.size())
                keep.insert(keep.end(), comp.begin(), comp.end());
        }
        if (keep.size() < 3) continue;
        return g.induced(keep);
    }
}

// Searches for a removal sequence that never increases the component count
// and ends in a kernel the shape checker accepts. Greedy-first depth-first
// search with memoized dead states: the lemma is existential over removal
// orders, and a single greedy pass can strand the graph in an off-family
// irreducible state (e.g. a diamond with the stub on a degree-2 corner)
// that a different order avoids.
bool peel_without_splitting(const StubGraph& start, std::string& why) {
    std::set<std::string> dead;
    std::size_t budget = 200000;

    struct Candidate {
        RemovabilityCertificate cert;
        std::size_t comps_after = 0;
    };
    auto dfs = [&](auto&& self, const StubGraph& sg, std::size_t comps) -> bool {
        bool any_cert = false;
        std::vector<Candidate> options;
        for (VertexId v : sg.graph.vertices())
            for (const RemovabilityCertificate& cert : enumerate_certificates(sg, v, 64)) {
                any_cert = true;
                StubGraph probe = sg;
                dp_remove(probe, cert);
                const std::size_t c2 = probe.graph.component_count();
                if (c2 <= comps) options.push_back({cert, c2});
            }
        if (!any_cert) return check_low_degree_kernel(sg.graph);
        if (options.empty()) return false;  // only component-splitting moves
        std::stable_sort(options.begin(), options.end(),
                         [](const Candidate& a, const Candidate& b) {
                             return a.comps_after < b.comps_after;
                         });
        const std::string key = to_edge_list(sg);
        if (dead.count(key)) return false;
        for (const Candidate& option : options) {
            if (budget == 0) return false;
            --budget;
            StubGraph next = sg;
            dp_remove(next, option.cert);
            if (self(self, next, option.comps_after)) return true;
        }
        dead.insert(key);
        return false;
    };
    if (dfs(dfs, start, start.graph.component_count())) return true;
    why = budget == 0 ? "search budget exhausted" : "no non-splitting path to an accepted kernel";
    return false;
}

bool criterion10(std::string& detail) {
    // (a) max-degree-3 graphs peel to the triangle/clique kernels without the
    // component count ever increasing
    Rng rng(1010);
    for (int t = 0; t < 200; ++t) {
        const StubGraph sg(random_low_degree_cyclic(rng));
        std::string why;
        if (!peel_without_splitting(sg, why)) {
            detail = "graph #" + std::to_string(t) + ": " + why;
            return false;
        }
    }

    // (b) the 4-regular block-structure verdict is exactly irreducibility
    std::size_t samples = 0;
    auto verdicts_agree = [&](const Graph& g) {
        ++samples;
        return check_4regular_indecomposable_structure(g).matches ==
               is_irreducible(StubGraph(g)).irreducible;
    };
    for (std::size_t k = 3; k <= 6; ++k)
        if (!verdicts_agree(irreducible_4regular(k))) {
            detail = "family k=" + std::to_string(k) + " verdicts disagree";
            return false;
        }
    if (!verdicts_agree(complete_graph(5))) {
        detail = "5-clique verdicts disagree";
        return false;
    }
    for (const std::size_t n : {8, 10, 12, 14, 16})
        for (int t = 0; t < 40; ++t) {
            const Graph g = random_regular(rng, n, 4);
            if (!verdicts_agree(g)) {
                detail = "random 4-regular n=" + std::to_string(n) + " #" +
                         std::to_string(t) + " verdicts disagree";
                return false;
            }
        }
    detail = "200 sparse kernels accepted; " + std::to_string(samples) +
             " 4-regular verdicts agreed";
    return true;
}

// ---- criterion 11: constant-degree growth stays regular ----
bool criterion11(std::string& detail) {
    {
        StubGraph sg(complete_graph(5));
        ProtocolConfig pc;
        pc.kind = ProtocolKind::Regular;
        pc.regular_c = 4;
        pc.seed = 11;
        pc.target_n = 500;
        GrowthEngine engine(sg, pc);
        while (sg.graph.n() < pc.target_n) {
            engine.step();
            const auto hist = sg.graph.degree_histogram();
            if (sg.deficient || hist.size() != 1 || hist.count(4) == 0) {
                detail = "degree-4 growth broke regularity at n=" +
                         std::to_string(sg.graph.n());
                return false;
            }
        }
    }
    {
        StubGraph sg(complete_graph(6));
        ProtocolConfig pc;
        pc.kind = ProtocolKind::Regular;
        pc.regular_c = 5;
        pc.seed = 11;
        pc.target_n = 500;
        GrowthEngine engine(sg, pc);
        std::size_t steps = 0;
        while (sg.graph.n() < pc.target_n) {
            engine.step();
            ++steps;
            const auto hist = sg.graph.degree_histogram();
            const std::size_t n = sg.graph.n();
            if (steps % 2 == 0) {
                // stub consumed: exactly 5-regular
                if (sg.deficient || hist.size() != 1 || hist.count(5) == 0) {
                    detail = "degree-5 growth not 5-regular after even step " +
                             std::to_string(steps);
                    return false;
                }
            } else {
                // one realized degree 4 at the stub holder, 5 everywhere else
                const bool shape_ok = sg.deficient && hist.size() == 2 &&
                                      hist.count(4) && hist.at(4) == 1 &&
                                      hist.count(5) && hist.at(5) == n - 1;
                if (!shape_ok) {
                    detail = "degree-5 growth stub state wrong after odd step " +
                             std::to_string(steps);
                    return false;
                }
            }
        }
    }
    detail = "degree-4 regular at all 495 steps; degree-5 regular on every second";
    return true;
}

// ---- criterion 12: matching chain visits perfect matchings uniformly ----
bool criterion12(std::string& detail) {
    const Graph g = complete_bipartite(3, 3);
    Rng rng(1212);
    JsState state = js_initial_state(g);
    std::map<std::string, std::size_t> visits;
    const std::size_t steps = 1'000'000;
    for (std::size_t t = 0; t < steps; ++t) {
        state = js_chain_step(g, state, rng);
        if (state.holes) continue;
        std::vector<std::pair<VertexId, VertexId>> key;
        for (const Edge& e : state.matching.edges) key.emplace_back(e.lo(), e.hi());
        std::sort(key.begin(), key.end());
        std::string s;
        for (const auto& [a, b] : key)
            s += std::to_string(a) + "-" + std::to_string(b) + ",";
        ++visits[s];
    }
    if (visits.size() != 6) {
        detail = "saw " + std::to_string(visits.size()) + " of 6 perfect matchings";
        return false;
    }
    std::size_t total = 0;
    for (const auto& [key, cnt] : visits) total += cnt;
    const double expect = double(total) / 6.0;
    const double sigma = std::sqrt(double(total) * (1.0 / 6.0) * (5.0 / 6.0));
    double worst = 0.0;
    for (const auto& [key, cnt] : visits)
        worst = std::max(worst, std::fabs(double(cnt) - expect));
    detail = "all 6 seen, worst deviation " + fmt(worst / sigma) + " sigma of " +
             std::to_string(total) + " visits";
    return worst <= 4.0 * sigma;
}

// ---- criterion 13: reruns are byte-identical ----
bool criterion13(std::string& detail) {
    const fs::path dir = fs::temp_directory_path() / "dpg_acceptance" / "determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto cfg_for = [&](const std::string& body, const std::string& name) {
        const fs::path p = dir / name;
        write_text_file(p.string(), body);
        return p.string();
    };
    struct Pair {
        std::string base;
        std::string name;
    };
    const std::string sf_cfg =
        "name = det-sf\nprotocol = sf:2.5\nseed = complete:4\ntarget-n = 2048\n"
        "rng-seed = 5\ncertainty = 1\nchecks = distribution\nbound-c = auto\n"
        "trace-out = det.trace\ngraph-out = det.edges\n";
    const std::string max_cfg =
        "name = det-max\nprotocol = max\nseed = complete:2\ntarget-n = 512\n"
        "rng-seed = 9\nchecks = maxdpg-law\nmaxdpg-slack = 8\nmaxdpg-warmup = 64\n"
        "trace-out = det.trace\ngraph-out = det.edges\n";
    for (const std::string& base : {sf_cfg, max_cfg}) {
        const bool is_sf = base.find("sf") != std::string::npos;
        const std::string tag = is_sf ? "sf" : "max";
        const std::string c1 = cfg_for(base + "out-dir = " + (dir / (tag + "1")).string() + "\n",
                                       tag + "1.cfg");
        const std::string c2 = cfg_for(base + "out-dir = " + (dir / (tag + "2")).string() + "\n",
                                       tag + "2.cfg");
        const ExperimentResult r1 = run_experiment(c1, "acceptance");
        const ExperimentResult r2 = run_experiment(c2, "acceptance");
        if (read_text_file(r1.trace_path) != read_text_file(r2.trace_path)) {
            detail = tag + " traces differ between reruns";
            return false;
        }
        if (r1.report_json != r2.report_json) {
            detail = tag + " reports differ between reruns";
            return false;
        }
        if (read_text_file(r1.graph_path) != read_text_file(r2.graph_path)) {
            detail = tag + " graphs differ between reruns";
            return false;
        }
    }
    detail = "two protocols, trace/report/graph bytes identical across reruns";
    return true;
}

struct CriterionEntry {
    int id;
    const char* name;
    bool (*run)(std::string&);
};

const CriterionEntry kCriteria[] = {
    {1, "removability oracle equivalence", criterion01},
    {2, "doubled-clique trace replay", criterion02},
    {3, "irreducibility verdicts", criterion03},
    {4, "matching bound dominance", criterion04},
    {5, "max-growth degree floor and density", criterion05},
    {6, "linear-growth exact inequality", criterion06},
    {7, "scale-free distribution bound", criterion07},
    {8, "scale-free degree sampler law", criterion08},
    {9, "satisfiability reduction fidelity", criterion09},
    {10, "sparse and 4-regular decomposition", criterion10},
    {11, "constant-degree regular growth", criterion11},
    {12, "perfect-matching chain uniformity", criterion12},
    {13, "experiment rerun determinism", criterion13},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    bool calibrate = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else if (std::strcmp(argv[i], "--calibrate") == 0) {
            calibrate = true;
        } else {
            std::fprintf(stderr, "usage: acceptance [--criterion N] [--calibrate]\n");
            return 2;
        }
    }
    if (calibrate) {
        calibrate_maxdpg();
        return 0;
    }

    bool all_ok = true;
    for (const CriterionEntry& entry : kCriteria) {
        if (only != 0 && entry.id != only) continue;
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = entry.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %02d %s %s (%.1fs)\n", entry.id, ok ? "PASS" : "FAIL",
                    entry.name, secs);
        if (!detail.empty()) std::printf("             %s\n", detail.c_str());
        std::fflush(stdout);
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
