#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "dpg/edgelist_io.hpp"
#include "dpg/experiment.hpp"
#include "dpg/graph.hpp"
#include "dpg/growth.hpp"
#include "dpg/reduce.hpp"
#include "dpg/trace.hpp"
#include "oracles.hpp"

using namespace dpg;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "dpg_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// trace of a growth run followed by a full reduction, mirroring the pipeline
struct Pipeline {
    StubGraph seed;
    StubGraph end;
    Trace trace;
};

Pipeline grow_and_reduce(std::size_t target, std::uint64_t seed) {
    Pipeline p;
    p.seed = StubGraph(complete_graph(2));
    StubGraph sg = p.seed;
    ProtocolConfig pc;
    pc.kind = ProtocolKind::Max;
    pc.target_n = target;
    pc.seed = seed;
    p.trace.protocol = protocol_label(pc);
    stamp_seed_info(p.trace, sg);
    GrowResult res = grow(sg, pc);
    for (const DpStepRecord& rec : res.steps) p.trace.records.push_back(to_trace_record(rec));
    ReduceOptions opt;
    opt.seed = seed;
    ReductionResult red = reduce_to_kernel(sg, opt);
    for (const auto& cert : red.removals) p.trace.records.push_back(to_trace_record(cert));
    p.end = sg;
    return p;
}

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// runs the installed CLI binary with the given arguments
CliResult run_cli(const std::string& args) {
    const char* bin = std::getenv("DPG_CLI_PATH");
    REQUIRE(bin != nullptr);
    static int counter = 0;
    fs::path dir = fs::temp_directory_path() / "dpg_tests" / "cli_io";
    fs::create_directories(dir);
    fs::path out = dir / ("out" + std::to_string(counter));
    fs::path err = dir / ("err" + std::to_string(counter));
    ++counter;
    const std::string cmd = std::string(bin) + " " + args + " >" + out.string() + " 2>" +
                            err.string();
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = status >= 256 ? status / 256 : status;  // decode wait status
    r.out = read_text_file(out.string());
    r.err = read_text_file(err.string());
    return r;
}

}  // namespace

TEST_CASE("trace round trip: serialize, parse, and replay both ways") {
    for (std::uint64_t seed : {1, 2}) {
        Pipeline p = grow_and_reduce(24, seed);
        const std::string text = serialize_trace(p.trace);
        Trace back = parse_trace(text);
        CHECK(back.protocol == p.trace.protocol);
        CHECK(back.seed_n == p.trace.seed_n);
        CHECK(back.seed_m == p.trace.seed_m);
        CHECK(back.seed_degrees == p.trace.seed_degrees);
        REQUIRE(back.records.size() == p.trace.records.size());
        CHECK(serialize_trace(back) == text);

        // forward: seed -> end state, reverse: end state -> seed
        StubGraph fwd = p.seed;
        replay_forward(fwd, back);
        CHECK(fwd == p.end);
        CHECK(to_edge_list(fwd) == to_edge_list(p.end));
        replay_reverse(fwd, back);
        CHECK(fwd == p.seed);
    }
}

TEST_CASE("seed headers summarize the starting graph") {
    Trace t;
    StubGraph sg(complete_graph(5));
    stamp_seed_info(t, sg);
    CHECK(t.seed_n == 5);
    CHECK(t.seed_m == 10);
    CHECK(t.seed_degrees == std::vector<std::size_t>(5, 4));
}

TEST_CASE("both meanings of an even removal with auxiliary vertex round trip") {
    MatchingStrategy strat;

    // variant 1: the removed vertex carried the stub and hands it to a partner
    // (recorded degree = 2|M| + 2)
    {
        Rng rng(4);  // a seed where the even step lifts the stub-edge
        StubGraph sg(complete_graph(6));
        Trace t;
        t.protocol = "max";
        stamp_seed_info(t, sg);
        StubGraph seed = sg;
        t.records.push_back(to_trace_record(dp_step_odd(sg, 2, 0, strat, rng)));
        DpStepRecord even{};
        bool lifted = false;
        for (std::uint64_t s = 0; s < 50 && !lifted; ++s) {
            StubGraph probe = sg;
            Rng prng(s);
            DpStepRecord rec = dp_step_even(probe, 2, strat, prng);
            if (stub_edge_lifted(rec)) {
                sg = probe;
                even = rec;
                lifted = true;
            }
        }
        REQUIRE(lifted);
        t.records.push_back(to_trace_record(even));
        REQUIRE(sg.deficient == even.new_vertex);
        auto cert = removability(sg, even.new_vertex);
        REQUIRE(cert.has_value());
        CHECK(cert->inv_op == InvOpKind::InvOp1);
        REQUIRE(cert->new_deficient.has_value());
        dp_remove(sg, *cert);
        TraceRecord rr = to_trace_record(*cert);
        CHECK(rr.p_degree == 2 * rr.matching.size() + 2);
        t.records.push_back(rr);

        const std::string text = serialize_trace(t);
        Trace parsed = parse_trace(text);
        StubGraph replayed = seed;
        replay_forward(replayed, parsed);
        CHECK(replayed == sg);
        replay_reverse(replayed, parsed);
        CHECK(replayed == seed);
    }

    // variant 2: an unrelated stub rides along untouched (degree = 2|M|)
    {
        Rng rng(1);
        StubGraph sg(complete_graph(6));
        Trace t;
        t.protocol = "max";
        stamp_seed_info(t, sg);
        StubGraph seed = sg;
        t.records.push_back(to_trace_record(dp_step_odd(sg, 2, 0, strat, rng)));
        const VertexId holder = *sg.deficient;
        DpStepRecord even{};
        bool kept = false;
        for (std::uint64_t s = 0; s < 50 && !kept; ++s) {
            StubGraph probe = sg;
            Rng prng(s);
            DpStepRecord rec = dp_step_even(probe, 2, strat, prng);
            if (!stub_edge_lifted(rec)) {
                sg = probe;
                even = rec;
                kept = true;
            }
        }
        REQUIRE(kept);
        t.records.push_back(to_trace_record(even));
        REQUIRE(sg.deficient == holder);
        auto cert = removability(sg, even.new_vertex);
        REQUIRE(cert.has_value());
        CHECK(cert->inv_op == InvOpKind::InvOp1);
        REQUIRE(cert->new_deficient == holder);
        dp_remove(sg, *cert);
        TraceRecord rr = to_trace_record(*cert);
        CHECK(rr.p_degree == 2 * rr.matching.size());
        t.records.push_back(rr);

        const std::string text = serialize_trace(t);
        Trace parsed = parse_trace(text);
        StubGraph replayed = seed;
        replay_forward(replayed, parsed);
        CHECK(replayed == sg);
        replay_reverse(replayed, parsed);
        CHECK(replayed == seed);
    }
}

TEST_CASE("trace parser names the offending line") {
    Pipeline p = grow_and_reduce(10, 3);
    std::string text = serialize_trace(p.trace);
    // corrupt the first event line (line 6: after the five header lines)
    const std::string token = "STEP";
    const auto pos = text.find(token);
    REQUIRE(pos != std::string::npos);
    std::string broken = text;
    broken.replace(pos, token.size(), "STOMP");
    try {
        parse_trace(broken);
        FAIL("expected BadFormat");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BadFormat);
        CHECK(std::string(e.what()).find("line 6") != std::string::npos);
    }
}

TEST_CASE("replay rejects a mismatched seed with a line-numbered error") {
    Pipeline p = grow_and_reduce(12, 5);
    StubGraph wrong(complete_graph(3));  // not the recorded seed
    try {
        replay_forward(wrong, p.trace);
        FAIL("expected TraceMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TraceMismatch);
    }

    // applying a step onto an occupied id is a mismatch too
    StubGraph seed = p.seed;
    Trace twice = p.trace;
    twice.records.insert(twice.records.begin() + 1, twice.records.front());
    CHECK(throws_code([&] { replay_forward(seed, twice); }, ErrorCode::TraceMismatch));
}

TEST_CASE("config files: values, includes, overrides, and errors") {
    fs::path dir = fresh_dir("config");
    write_text_file((dir / "base.cfg").string(),
                    "# base settings\n"
                    "name = base\n"
                    "protocol = max\n"
                    "target-n = 32\n");
    write_text_file((dir / "run.cfg").string(),
                    "include = base.cfg\n"
                    "name = run   # override wins\n"
                    "seed = complete:2\n");
    Config cfg = load_config((dir / "run.cfg").string());
    CHECK(cfg.values.at("name") == "run");
    CHECK(cfg.values.at("protocol") == "max");
    CHECK(cfg.values.at("seed") == "complete:2");
    CHECK(cfg.files.size() == 2);
    CHECK(cfg.dir == dir.string());

    write_text_file((dir / "noval.cfg").string(), "name =\n");
    CHECK(throws_code([&] { load_config((dir / "noval.cfg").string()); },
                      ErrorCode::ConfigError));
    write_text_file((dir / "noeq.cfg").string(), "just words\n");
    CHECK(throws_code([&] { load_config((dir / "noeq.cfg").string()); },
                      ErrorCode::ConfigError));
    write_text_file((dir / "a.cfg").string(), "include = b.cfg\n");
    write_text_file((dir / "b.cfg").string(), "include = a.cfg\n");
    CHECK(throws_code([&] { load_config((dir / "a.cfg").string()); },
                      ErrorCode::ConfigError));
    CHECK(throws_code([&] { load_config((dir / "missing.cfg").string()); },
                      ErrorCode::IoError));

    // load errors carry file and line
    try {
        load_config((dir / "noeq.cfg").string());
        FAIL("expected ConfigError");
    } catch (const Error& e) {
        const std::string what = e.what();
        CHECK(what.find("noeq.cfg:1") != std::string::npos);
    }
}

TEST_CASE("seed graph specs") {
    CHECK(seed_graph_from_spec("complete:6", ".").graph.m() == 15);
    CHECK(seed_graph_from_spec("cycle:5", ".").graph.m() == 5);
    CHECK(seed_graph_from_spec("path:4", ".").graph.m() == 3);
    CHECK(seed_graph_from_spec("bipartite:2:3", ".").graph.m() == 6);

    fs::path dir = fresh_dir("seedspec");
    StubGraph sg(cycle_graph(7));
    write_edge_list_file(sg, (dir / "g.edges").string());
    std::string resolved;
    StubGraph back = seed_graph_from_spec("file:g.edges", dir.string(), &resolved);
    CHECK(back == sg);
    CHECK(resolved == (dir / "g.edges").string());

    CHECK(throws_code([] { seed_graph_from_spec("torus:3", "."); }, ErrorCode::ConfigError));
    CHECK(throws_code([] { seed_graph_from_spec("complete:x", "."); },
                      ErrorCode::ConfigError));
}

TEST_CASE("manifest serialization") {
    RunManifest m;
    m.command = "dpg grow --target-n 8";
    m.rng_seed = 42;
    m.inputs = {{"config", "abc123"}};
    m.versions = {{"graph-core", kVersion}};
    m.wall_clock_seconds = 1.5;
    m.outputs = {{"trace", "def456"}};
    json j = json::parse(manifest_to_json(m));
    CHECK(j["command"] == "dpg grow --target-n 8");
    CHECK(j["rng_seed"] == 42);
    CHECK(j["inputs"]["config"] == "abc123");
    CHECK(j["versions"]["graph-core"] == kVersion);
    CHECK(j["wall_clock_seconds"] == 1.5);
    CHECK(j["outputs"]["trace"] == "def456");
}

TEST_CASE("experiment pipeline is deterministic byte for byte") {
    fs::path dir = fresh_dir("exp");
    write_text_file((dir / "run.cfg").string(),
                    "name = unit\n"
                    "protocol = max\n"
                    "seed = complete:2\n"
                    "target-n = 48\n"
                    "rng-seed = 7\n"
                    "checks = maxdpg-law\n"
                    "maxdpg-slack = 8\n"
                    "maxdpg-warmup = 16\n"
                    "trace-out = unit.trace\n"
                    "graph-out = unit.edges\n"
                    "out-dir = out1\n");
    ExperimentResult r1 = run_experiment((dir / "run.cfg").string(), "unit-test");
    CHECK(r1.all_passed);
    REQUIRE(!r1.checks.empty());
    CHECK(r1.checks.front().name == "maxdpg-law");

    // the trace replays onto the written graph
    Trace t = read_trace_file(r1.trace_path);
    StubGraph sg(complete_graph(2));
    replay_forward(sg, t);
    CHECK(to_edge_list(sg) == read_text_file(r1.graph_path));

    write_text_file((dir / "run2.cfg").string(),
                    "include = run.cfg\n"
                    "out-dir = out2\n");
    ExperimentResult r2 = run_experiment((dir / "run2.cfg").string(), "unit-test");
    CHECK(read_text_file(r2.trace_path) == read_text_file(r1.trace_path));
    CHECK(read_text_file(r2.graph_path) == read_text_file(r1.graph_path));
    CHECK(r2.report_json == r1.report_json);

    // manifests: same versions and the same output hashes; only the paths
    // (out1 vs out2) and the wall clock may differ
    json m1 = json::parse(r1.manifest_json);
    json m2 = json::parse(r2.manifest_json);
    CHECK(m1["versions"] == m2["versions"]);
    std::vector<std::string> h1, h2;
    for (const auto& [path, hash] : m1["outputs"].items()) h1.push_back(hash);
    for (const auto& [path, hash] : m2["outputs"].items()) h2.push_back(hash);
    std::sort(h1.begin(), h1.end());
    std::sort(h2.begin(), h2.end());
    CHECK(h1 == h2);
    CHECK(h1.size() == 3);  // trace, graph, report

    // unknown keys are rejected up front
    write_text_file((dir / "bad.cfg").string(),
                    "name = x\nprotocol = max\nseed = complete:2\ntarget-n = 8\n"
                    "tarket-n = 8\n");
    CHECK(throws_code([&] { run_experiment((dir / "bad.cfg").string(), ""); },
                      ErrorCode::ConfigError));
}

TEST_CASE("cli: grow, replay, reduce, bounds, analyze") {
    fs::path dir = fresh_dir("cli");
    const std::string g = (dir / "g.edges").string();
    const std::string t = (dir / "g.trace").string();

    CliResult grow = run_cli("grow --protocol max --seed-graph complete:2 --target-n 32"
                             " --rng-seed 1 --out " + g + " --trace-out " + t);
    REQUIRE(grow.exit_code == 0);
    json gj = json::parse(grow.out);
    CHECK(gj["steps"] == 30);
    CHECK(gj["graph"]["n"] == 32);
    CHECK(gj["graph_fnv"] == fnv1a_hex(read_text_file(g)));

    // replay forward reproduces the grown graph byte for byte
    StubGraph seed(complete_graph(2));
    const std::string seed_path = (dir / "seed.edges").string();
    write_edge_list_file(seed, seed_path);
    const std::string fwd = (dir / "fwd.edges").string();
    CliResult rep = run_cli("replay " + t + " " + seed_path + " --out " + fwd);
    REQUIRE(rep.exit_code == 0);
    CHECK(read_text_file(fwd) == read_text_file(g));
    CHECK(json::parse(rep.out)["end_fnv"] == fnv1a_hex(read_text_file(g)));

    // reverse replay recovers the seed
    CliResult rev = run_cli("replay " + t + " " + seed_path + " --reverse");
    REQUIRE(rev.exit_code == 0);
    json revj = json::parse(rev.out);
    CHECK(revj["recovered_equals_seed"] == true);

    // reduce the grown graph to an irreducible kernel
    const std::string k = (dir / "k.edges").string();
    CliResult red = run_cli("reduce --in " + g + " --policy min-degree --rng-seed 1 --out " + k);
    REQUIRE(red.exit_code == 0);
    json rj = json::parse(red.out);
    CHECK(rj["irreducible"] == true);
    CHECK(rj["kernel"]["n"].get<std::size_t>() <= 32);

    // bounds on the grown graph: exact dominates every lower bound
    CliResult bounds = run_cli("bounds --in " + g + " --exact");
    REQUIRE(bounds.exit_code == 0);
    json bj = json::parse(bounds.out);
    REQUIRE(bj.contains("exact"));
    const std::size_t exact = bj["exact"].get<std::size_t>();
    CHECK(bj["vizing"].get<std::size_t>() <= exact);
    CHECK(bj["posa"].get<std::size_t>() <= exact);
    CHECK(bj["generalized_vizing"].get<std::size_t>() <= exact);

    // analyze the growth trace against the max growth law
    CliResult an = run_cli("analyze --trace " + t + " --check maxdpg-law --slack 8"
                           " --warmup 16");
    REQUIRE(an.exit_code == 0);
    json aj = json::parse(an.out);
    CHECK(aj["checks"][0]["passed"] == true);
}

TEST_CASE("cli: gadgets, experiment, and error reporting") {
    fs::path dir = fresh_dir("cli2");

    // SAT reduction with verification and a roles sidecar
    const std::string cnf = (dir / "f.cnf").string();
    write_text_file(cnf, "p cnf 3 2\n1 -2 3 0\n-1 2 0\n");
    const std::string gg = (dir / "sat.edges").string();
    const std::string roles = (dir / "roles.json").string();
    CliResult sat = run_cli("gadget sat " + cnf + " --verify --out " + gg +
                            " --roles " + roles);
    REQUIRE(sat.exit_code == 0);
    json sj = json::parse(sat.out);
    CHECK(sj["verified"] == true);
    json rolej = json::parse(read_text_file(roles));
    CHECK(rolej["m_target"].get<std::size_t>() ==
          rolej["variable_vertices"].size() + rolej["clause_vertices"].size());

    // the 4-regular family generator
    const std::string i4 = (dir / "i4.edges").string();
    CliResult fam = run_cli("gadget irreducible4 --k 5 --out " + i4);
    REQUIRE(fam.exit_code == 0);
    StubGraph fam_graph = read_edge_list_file(i4);
    CHECK(fam_graph.graph.n() == 20);
    CHECK(fam_graph.graph.max_degree() == 4);

    // experiment subcommand writes the report and manifest
    write_text_file((dir / "e.cfg").string(),
                    "name = cli-exp\nprotocol = max\nseed = complete:2\n"
                    "target-n = 24\nrng-seed = 3\nchecks = maxdpg-law\n"
                    "out-dir = " + (dir / "expout").string() + "\n");
    CliResult exp = run_cli("experiment " + (dir / "e.cfg").string());
    REQUIRE(exp.exit_code == 0);
    json ej = json::parse(exp.out);
    CHECK(ej["all_passed"] == true);
    CHECK(fs::exists(ej["report"].get<std::string>()));
    CHECK(fs::exists(ej["manifest"].get<std::string>()));

    // errors: nonzero exit with the error code name on stderr
    CliResult bad_proto = run_cli("grow --protocol warp --seed-graph complete:2"
                                  " --target-n 8");
    CHECK(bad_proto.exit_code != 0);
    CHECK(bad_proto.err.find("BadParams") != std::string::npos);

    CliResult bad_file = run_cli("bounds --in " + (dir / "ghost.edges").string());
    CHECK(bad_file.exit_code != 0);
    CHECK(bad_file.err.find("IoError") != std::string::npos);

    CliResult bad_sub = run_cli("transmogrify");
    CHECK(bad_sub.exit_code != 0);
}
