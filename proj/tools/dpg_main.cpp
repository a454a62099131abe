// Command-line front end: growth, reduction, matching bounds, degree-law
// analysis, hardness/regular gadget construction, trace replay, and config
// driven experiment runs. Machine-readable output is JSON on stdout; every
// error exits nonzero with the error-code name on stderr.
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dpg/analysis.hpp"
#include "dpg/edgelist_io.hpp"
#include "dpg/errors.hpp"
#include "dpg/experiment.hpp"
#include "dpg/gadgets.hpp"
#include "dpg/graph.hpp"
#include "dpg/growth.hpp"
#include "dpg/matching.hpp"
#include "dpg/reduce.hpp"
#include "dpg/trace.hpp"

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json graph_summary(const dpg::Graph& g) {
    ordered_json j;
    j["n"] = g.n();
    j["m"] = g.m();
    j["max_degree"] = g.n() > 0 ? g.max_degree() : 0;
    j["components"] = g.component_count();
    return j;
}

void print_json(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

struct GrowArgs {
    std::string protocol;
    std::string seed_graph = "complete:2";
    std::size_t target_n = 0;
    std::uint64_t rng_seed = 0;
    bool seed_given = false;
    std::string out;
    std::string trace_out;
};

int run_grow(const GrowArgs& args) {
    dpg::ProtocolConfig pc = dpg::protocol_from_label(args.protocol);
    pc.target_n = args.target_n;
    pc.seed = args.seed_given ? args.rng_seed : dpg::default_rng_seed();

    dpg::StubGraph sg = dpg::seed_graph_from_spec(args.seed_graph, ".");
    dpg::Trace trace;
    trace.protocol = dpg::protocol_label(pc);
    dpg::stamp_seed_info(trace, sg);
    const dpg::GrowResult grown = dpg::grow(sg, pc);
    for (const dpg::DpStepRecord& rec : grown.steps)
        trace.records.push_back(dpg::to_trace_record(rec));

    const std::string edges = dpg::to_edge_list(sg);
    const std::string trace_text = dpg::serialize_trace(trace);
    if (!args.out.empty()) dpg::write_text_file(args.out, edges);
    if (!args.trace_out.empty()) dpg::write_text_file(args.trace_out, trace_text);

    ordered_json j;
    j["protocol"] = trace.protocol;
    j["seed_graph"] = args.seed_graph;
    j["rng_seed"] = pc.seed;
    j["steps"] = grown.steps.size();
    j["graph"] = graph_summary(sg.graph);
    j["graph_fnv"] = dpg::fnv1a_hex(edges);
    j["trace_fnv"] = dpg::fnv1a_hex(trace_text);
    print_json(j);
    return 0;
}

struct ReduceArgs {
    std::string in;
    std::string policy = "min-degree";
    std::size_t budget = 0;
    std::size_t backtrack = 0;
    bool exact = false;
    std::uint64_t rng_seed = 0;
    bool seed_given = false;
    std::string out;
    std::string trace_out;
};

int run_reduce(const ReduceArgs& args) {
    dpg::StubGraph sg = dpg::read_edge_list_file(args.in);
    dpg::ReduceOptions options;
    options.policy = dpg::order_policy_from_name(args.policy);
    options.budget = args.budget;
    options.backtrack = args.backtrack;
    options.exact = args.exact;
    options.seed = args.seed_given ? args.rng_seed : dpg::default_rng_seed();

    dpg::Trace trace;
    trace.protocol = std::string("reduce:") + dpg::order_policy_name(options.policy);
    dpg::stamp_seed_info(trace, sg);
    ordered_json j;
    j["input"] = graph_summary(sg.graph);
    const dpg::ReductionResult result = dpg::reduce_to_kernel(sg, options);
    for (const dpg::RemovabilityCertificate& cert : result.removals)
        trace.records.push_back(dpg::to_trace_record(cert));

    const std::string edges = dpg::to_edge_list(result.kernel);
    if (!args.out.empty()) dpg::write_text_file(args.out, edges);
    if (!args.trace_out.empty())
        dpg::write_text_file(args.trace_out, dpg::serialize_trace(trace));

    j["policy"] = dpg::order_policy_name(options.policy);
    j["removed"] = result.removed_count;
    j["kernel"] = graph_summary(result.kernel.graph);
    j["irreducible"] = result.irreducible;
    j["budget_exhausted"] = result.budget_exhausted;
    j["kernel_fnv"] = dpg::fnv1a_hex(edges);
    print_json(j);
    return 0;
}

int run_bounds(const std::string& in, bool exact, bool den_plus_one) {
    const dpg::StubGraph sg = dpg::read_edge_list_file(in);
    const dpg::MatchingBoundReport report =
        dpg::matching_bound_report(sg.graph, exact, den_plus_one);
    ordered_json j;
    j["n"] = report.n;
    j["m"] = report.m;
    j["vizing"] = report.vizing;
    j["posa"] = report.posa;
    j["generalized_vizing"] = report.generalized_vizing;
    j["gv_den_plus_one"] = report.gv_den_plus_one;
    if (report.exact) j["exact"] = *report.exact;
    print_json(j);
    return 0;
}

struct AnalyzeArgs {
    std::vector<std::string> traces;
    std::string graph;
    std::vector<std::string> checks;
    double slack = 8.0;
    std::size_t warmup = 16;
    std::string linear_c;
    std::string linear_k = "2";
    double gamma = 0.0;
    bool gamma_given = false;
    std::string bound_c = "auto";
    double certainty = 1.0;
    std::string report_out;
};

ordered_json growth_law_json(const dpg::GrowthLawReport& law) {
    ordered_json j;
    j["law"] = law.law;
    j["checked"] = law.checked;
    j["warmup"] = law.warmup;
    j["fitted_constant"] = law.fitted_constant;
    j["worst_margin"] = law.worst_margin;
    j["passed"] = law.passed;
    return j;
}

int run_analyze(const AnalyzeArgs& args) {
    std::vector<dpg::Trace> traces;
    traces.reserve(args.traces.size());
    for (const std::string& path : args.traces) traces.push_back(dpg::read_trace_file(path));
    std::optional<dpg::StubGraph> graph;
    if (!args.graph.empty()) graph = dpg::read_edge_list_file(args.graph);

    ordered_json checks = ordered_json::array();
    for (const std::string& check : args.checks) {
        if (check == "maxdpg-law" || check == "linear-law") {
            if (traces.empty())
                dpg::fail(dpg::ErrorCode::BadParams, check + " needs at least one --trace");
            for (std::size_t t = 0; t < traces.size(); ++t) {
                ordered_json entry;
                entry["check"] = check;
                entry["trace"] = args.traces[t];
                if (check == "maxdpg-law") {
                    entry.update(growth_law_json(
                        dpg::check_maxdpg_law(traces[t], args.slack, args.warmup)));
                } else {
                    dpg::Rational c{1, 1};
                    if (!args.linear_c.empty()) {
                        c = dpg::rational_from_string(args.linear_c);
                    } else {
                        const dpg::ProtocolConfig pc =
                            dpg::protocol_from_label(traces[t].protocol);
                        if (pc.kind == dpg::ProtocolKind::Linear) c = pc.c;
                    }
                    entry["c"] = dpg::rational_to_string(c);
                    entry.update(growth_law_json(dpg::check_linear_law(
                        traces[t], c, dpg::rational_from_string(args.linear_k))));
                }
                checks.push_back(entry);
            }
        } else if (check == "distribution" || check == "density") {
            if (!graph)
                dpg::fail(dpg::ErrorCode::BadParams, check + " needs --graph");
            if (!args.gamma_given)
                dpg::fail(dpg::ErrorCode::BadParams, check + " needs --gamma");
            const double coefficient =
                args.bound_c == "auto" ? dpg::sf_theoretical_C(args.gamma, args.certainty)
                                       : std::stod(args.bound_c);
            const dpg::PowerLawReport law =
                check == "distribution"
                    ? dpg::check_distribution_bounded(graph->graph, args.gamma, coefficient)
                    : dpg::check_density_bounded(graph->graph, args.gamma, coefficient);
            ordered_json entry;
            entry["check"] = check;
            entry["gamma"] = law.gamma;
            entry["coefficient"] = law.C;
            entry["violations"] = law.violations.size();
            entry["bracket_width"] = law.bracket_width;
            entry["passed"] = law.passed;
            checks.push_back(entry);
        } else if (check == "scaling") {
            const dpg::MaxDegreeScalingReport report = dpg::max_degree_scaling(traces);
            ordered_json entry;
            entry["check"] = check;
            entry["traces"] = traces.size();
            entry["exponent"] = report.exponent;
            if (report.gamma) entry["gamma"] = *report.gamma;
            if (report.threshold) entry["threshold"] = *report.threshold;
            entry["exceeds_threshold"] = report.exceeds_threshold;
            checks.push_back(entry);
        } else {
            dpg::fail(dpg::ErrorCode::BadParams, "unknown check '" + check + "'");
        }
    }
    ordered_json j;
    j["checks"] = checks;
    if (!args.report_out.empty())
        dpg::write_text_file(args.report_out, j.dump(2) + "\n");
    print_json(j);
    return 0;
}

struct GadgetSatArgs {
    std::string dimacs;
    std::string out;
    std::string roles;
    double epsilon = 0.0;
    bool epsilon_given = false;
    bool even_blockers = false;
    bool verify = false;
};

int run_gadget_sat(const GadgetSatArgs& args) {
    const dpg::Formula formula = dpg::read_dimacs_file(args.dimacs);
    dpg::BuildOptions options;
    options.even_blockers = args.even_blockers;
    const dpg::GadgetInstance inst = dpg::build_reduction(formula, options);
    const dpg::Graph final_graph =
        args.epsilon_given ? dpg::padded_instance(inst, args.epsilon) : inst.graph;

    const std::string edges = dpg::to_edge_list(final_graph);
    if (!args.out.empty()) dpg::write_text_file(args.out, edges);

    if (!args.roles.empty()) {
        ordered_json roles;
        ordered_json vars = ordered_json::object();
        for (const auto& [var, id] : inst.variable_vertices)
            vars[std::to_string(var)] = id;
        roles["variable_vertices"] = vars;
        ordered_json clauses = ordered_json::object();
        for (const auto& [idx, id] : inst.clause_vertices)
            clauses[std::to_string(idx)] = id;
        roles["clause_vertices"] = clauses;
        ordered_json dummies = ordered_json::object();
        for (const auto& [idx, id] : inst.dummy_vertices)
            dummies[std::to_string(idx)] = id;
        roles["dummy_vertices"] = dummies;
        ordered_json slots = ordered_json::array();
        for (const auto& [key, edge] : inst.literal_edge_map) {
            ordered_json slot;
            slot["variable"] = key.first;
            slot["clause"] = key.second;
            slot["u"] = edge.lo();
            slot["v"] = edge.hi();
            slots.push_back(slot);
        }
        roles["literal_slots"] = slots;
        roles["m_target"] = inst.m_target;
        dpg::write_text_file(args.roles, roles.dump(2) + "\n");
    }

    ordered_json j;
    j["variables"] = formula.num_vars;
    j["clauses"] = formula.clauses.size();
    j["m_target"] = inst.m_target;
    j["even_blockers"] = args.even_blockers;
    if (args.epsilon_given) j["epsilon"] = args.epsilon;
    j["graph"] = graph_summary(final_graph);
    j["graph_fnv"] = dpg::fnv1a_hex(edges);
    if (args.verify) j["verified"] = dpg::verify_reduction(inst, formula);
    print_json(j);
    return 0;
}

int run_gadget_irreducible4(std::size_t k, const std::string& out) {
    const dpg::Graph g = dpg::irreducible_4regular(k);
    const std::string edges = dpg::to_edge_list(g);
    if (!out.empty()) dpg::write_text_file(out, edges);
    ordered_json j;
    j["k"] = k;
    j["graph"] = graph_summary(g);
    j["graph_fnv"] = dpg::fnv1a_hex(edges);
    print_json(j);
    return 0;
}

// Forward mode re-applies the trace to its seed graph and outputs the end
// state. Reverse mode reconstructs the end state the same way, then undoes
// every record last-to-first; the output is the recovered seed, which must
// byte-match the input when the trace is self-consistent.
int run_replay(const std::string& trace_path, const std::string& graph_path, bool reverse,
               const std::string& out) {
    dpg::StubGraph sg = dpg::read_edge_list_file(graph_path);
    const std::string seed_bytes = dpg::to_edge_list(sg);
    const dpg::Trace trace = dpg::read_trace_file(trace_path);
    dpg::replay_forward(sg, trace);
    ordered_json j;
    j["records"] = trace.records.size();
    j["direction"] = reverse ? "reverse" : "forward";
    j["end_graph"] = graph_summary(sg.graph);
    j["end_fnv"] = dpg::fnv1a_hex(dpg::to_edge_list(sg));
    std::string edges;
    if (reverse) {
        dpg::replay_reverse(sg, trace);
        edges = dpg::to_edge_list(sg);
        j["recovered_graph"] = graph_summary(sg.graph);
        j["recovered_fnv"] = dpg::fnv1a_hex(edges);
        j["recovered_equals_seed"] = edges == seed_bytes;
    } else {
        edges = dpg::to_edge_list(sg);
    }
    if (!out.empty()) dpg::write_text_file(out, edges);
    print_json(j);
    return 0;
}

int run_experiment_cmd(const std::string& config, const std::string& command_line) {
    const dpg::ExperimentResult result = dpg::run_experiment(config, command_line);
    ordered_json j;
    j["name"] = result.name;
    ordered_json checks = ordered_json::array();
    for (const dpg::CheckOutcome& check : result.checks) {
        ordered_json entry;
        entry["check"] = check.name;
        entry["passed"] = check.passed;
        checks.push_back(entry);
    }
    j["checks"] = checks;
    j["all_passed"] = result.all_passed;
    j["report"] = result.report_path;
    j["manifest"] = result.manifest_path;
    if (!result.trace_path.empty()) j["trace"] = result.trace_path;
    if (!result.graph_path.empty()) j["graph"] = result.graph_path;
    print_json(j);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"degree-preserving growth toolkit"};
    app.require_subcommand(1);
    std::size_t threads = 0;
    app.add_option("--threads", threads, "cap the worker count of parallel kernels");

    std::string command_line;
    for (int i = 0; i < argc; ++i) {
        if (i > 0) command_line += " ";
        command_line += argv[i];
    }

    GrowArgs grow_args;
    CLI::App* grow = app.add_subcommand("grow", "grow a graph under a degree protocol");
    grow->add_option("--protocol", grow_args.protocol,
                     "max | linear:<c> | sf:<gamma> | regular:<c>")
        ->required();
    grow->add_option("--seed-graph", grow_args.seed_graph,
                     "complete:<n> | cycle:<n> | path:<n> | bipartite:<a>:<b> | file:<path>");
    grow->add_option("--target-n", grow_args.target_n, "grow until this many vertices")
        ->required();
    CLI::Option* grow_seed = grow->add_option("--rng-seed", grow_args.rng_seed,
                                              "seed (default: DPG_RNG_SEED env, else 0)");
    grow->add_option("--out", grow_args.out, "write the final edge list here");
    grow->add_option("--trace-out", grow_args.trace_out, "write the growth trace here");

    ReduceArgs reduce_args;
    CLI::App* reduce = app.add_subcommand("reduce", "reduce a graph to an irreducible kernel");
    reduce->add_option("--in", reduce_args.in, "input edge list")->required();
    reduce->add_option("--policy", reduce_args.policy,
                       "random | min-degree | max-degree | most-non-edges");
    reduce->add_option("--budget", reduce_args.budget, "work budget, 0 = unlimited");
    reduce->add_option("--backtrack", reduce_args.backtrack, "undo allowance when stuck");
    reduce->add_flag("--exact", reduce_args.exact, "exhaustive minimum-kernel search");
    CLI::Option* reduce_seed = reduce->add_option("--rng-seed", reduce_args.rng_seed,
                                                  "seed for the random policy");
    reduce->add_option("--out", reduce_args.out, "write the kernel edge list here");
    reduce->add_option("--trace-out", reduce_args.trace_out, "write the removal trace here");

    std::string bounds_in;
    bool bounds_exact = false;
    bool bounds_dp1 = false;
    CLI::App* bounds = app.add_subcommand("bounds", "matching-number lower bounds");
    bounds->add_option("--in", bounds_in, "input edge list")->required();
    bounds->add_flag("--exact", bounds_exact, "also compute the exact matching number");
    bounds->add_flag("--den-plus-one", bounds_dp1,
                     "use the denominator+1 variant of the generalized bound");

    AnalyzeArgs analyze_args;
    CLI::App* analyze = app.add_subcommand("analyze", "degree-law checks on traces and graphs");
    analyze->add_option("--trace", analyze_args.traces, "trace file (repeatable)");
    analyze->add_option("--graph", analyze_args.graph, "edge-list file");
    analyze->add_option("--check", analyze_args.checks,
                        "maxdpg-law | linear-law | distribution | density | scaling")
        ->required();
    analyze->add_option("--slack", analyze_args.slack, "maxdpg-law slack constant");
    analyze->add_option("--warmup", analyze_args.warmup, "maxdpg-law warmup order");
    analyze->add_option("--linear-c", analyze_args.linear_c,
                        "linear-law c (default: from the trace protocol)");
    analyze->add_option("--linear-k", analyze_args.linear_k, "linear-law K");
    CLI::Option* gamma_opt =
        analyze->add_option("--gamma", analyze_args.gamma, "power-law exponent");
    analyze->add_option("--bound-c", analyze_args.bound_c,
                        "power-law coefficient or 'auto' for the theoretical one");
    analyze->add_option("--certainty", analyze_args.certainty,
                        "certainty level behind the auto coefficient");
    analyze->add_option("--report-out", analyze_args.report_out, "also write the JSON here");

    CLI::App* gadget = app.add_subcommand("gadget", "hardness and regular-family constructions");
    gadget->require_subcommand(1);
    GadgetSatArgs sat_args;
    CLI::App* sat = gadget->add_subcommand("sat", "satisfiability-to-removability instance");
    sat->add_option("dimacs", sat_args.dimacs, "DIMACS CNF input file")->required();
    sat->add_option("--out", sat_args.out, "write the instance edge list here");
    sat->add_option("--roles", sat_args.roles, "write the vertex-role JSON sidecar here");
    CLI::Option* eps_opt = sat->add_option("--epsilon", sat_args.epsilon,
                                           "pad so that target-count <= n^epsilon");
    sat->add_flag("--even-blockers", sat_args.even_blockers,
                  "share blockers across odd-degree pairs");
    sat->add_flag("--verify", sat_args.verify,
                  "check removability against brute-force satisfiability (small inputs)");
    std::size_t irr_k = 3;
    std::string irr_out;
    CLI::App* irr = gadget->add_subcommand("irreducible4", "irreducible 4-regular family member");
    irr->add_option("--k", irr_k, "number of blocks (>= 3)")->required();
    irr->add_option("--out", irr_out, "write the edge list here");

    std::string replay_trace;
    std::string replay_graph;
    bool replay_reverse_flag = false;
    std::string replay_out;
    CLI::App* replay = app.add_subcommand("replay", "re-apply a trace to its seed graph");
    replay->add_option("trace", replay_trace, "trace file")->required();
    replay->add_option("graph", replay_graph, "edge list of the trace's seed graph")
        ->required();
    replay->add_flag("--reverse", replay_reverse_flag,
                     "after the forward pass, undo every record and output the recovered seed");
    replay->add_option("--out", replay_out, "write the resulting edge list here");

    std::string experiment_config;
    CLI::App* experiment = app.add_subcommand("experiment", "run a config-driven pipeline");
    experiment->add_option("config", experiment_config, "experiment config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (threads > 0) dpg::set_thread_cap(threads);
        grow_args.seed_given = grow_seed->count() > 0;
        reduce_args.seed_given = reduce_seed->count() > 0;
        analyze_args.gamma_given = gamma_opt->count() > 0;
        sat_args.epsilon_given = eps_opt->count() > 0;
        if (app.got_subcommand(grow)) return run_grow(grow_args);
        if (app.got_subcommand(reduce)) return run_reduce(reduce_args);
        if (app.got_subcommand(bounds)) return run_bounds(bounds_in, bounds_exact, bounds_dp1);
        if (app.got_subcommand(analyze)) return run_analyze(analyze_args);
        if (app.got_subcommand(gadget)) {
            if (gadget->got_subcommand(sat)) return run_gadget_sat(sat_args);
            return run_gadget_irreducible4(irr_k, irr_out);
        }
        if (app.got_subcommand(replay))
            return run_replay(replay_trace, replay_graph, replay_reverse_flag, replay_out);
        if (app.got_subcommand(experiment))
            return run_experiment_cmd(experiment_config, command_line);
    } catch (const dpg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
