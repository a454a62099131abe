#include "dpg/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>

#include "json.hpp"

#include "dpg/analysis.hpp"
#include "dpg/edgelist_io.hpp"
#include "dpg/errors.hpp"
#include "dpg/graph.hpp"
#include "dpg/growth.hpp"
#include "dpg/reduce.hpp"
#include "dpg/trace.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dpg {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    if (t.empty() || t[0] == '-' || t[0] == '+')
        fail(ErrorCode::ConfigError, what + ": expected an unsigned integer, got '" + text + "'");
    std::size_t idx = 0;
    std::uint64_t value = 0;
    try {
        value = std::stoull(t, &idx, 10);
    } catch (const std::exception&) {
        fail(ErrorCode::ConfigError, what + ": expected an unsigned integer, got '" + text + "'");
    }
    if (idx != t.size())
        fail(ErrorCode::ConfigError, what + ": trailing characters in '" + text + "'");
    return value;
}

double parse_double(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    std::size_t idx = 0;
    double value = 0.0;
    try {
        value = std::stod(t, &idx);
    } catch (const std::exception&) {
        fail(ErrorCode::ConfigError, what + ": expected a number, got '" + text + "'");
    }
    if (idx != t.size())
        fail(ErrorCode::ConfigError, what + ": trailing characters in '" + text + "'");
    return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char ch : text) {
        if (ch == sep) {
            parts.push_back(current);
            current.clear();
        } else {
            current += ch;
        }
    }
    parts.push_back(current);
    return parts;
}

void load_config_into(const std::string& path, Config& cfg, std::vector<std::string>& stack) {
    fs::path file(path);
    std::error_code ec;
    fs::path canon = fs::weakly_canonical(file, ec);
    const std::string key_path = ec ? file.lexically_normal().string() : canon.string();
    if (std::find(stack.begin(), stack.end(), key_path) != stack.end())
        fail(ErrorCode::ConfigError, "include cycle through " + path);

    const std::string text = read_text_file(path);
    bool seen = false;
    for (const auto& entry : cfg.files)
        if (entry.first == path) seen = true;
    if (!seen) cfg.files.emplace_back(path, fnv1a_hex(text));

    stack.push_back(key_path);
    std::istringstream lines(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(lines, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::ConfigError,
                 path + ":" + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            fail(ErrorCode::ConfigError, path + ":" + std::to_string(line_no) + ": empty key");
        if (value.empty())
            fail(ErrorCode::ConfigError,
                 path + ":" + std::to_string(line_no) + ": empty value for key '" + key + "'");
        if (key == "include") {
            fs::path target(value);
            if (target.is_relative()) target = file.parent_path() / target;
            load_config_into(target.string(), cfg, stack);
        } else {
            cfg.values[key] = value;
        }
    }
    stack.pop_back();
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "name",         "protocol",      "seed",        "target-n",   "rng-seed",
        "certainty",    "threads",       "checks",      "maxdpg-slack",
        "maxdpg-warmup", "linear-k",     "gamma",       "bound-c",    "reduce",
        "reduce-policy", "reduce-budget", "out-dir",    "report-out",
        "manifest-out", "trace-out",     "graph-out",
    };
    return keys;
}

ordered_json graph_stats(const Graph& g) {
    ordered_json j;
    j["n"] = g.n();
    j["m"] = g.m();
    j["max_degree"] = g.n() > 0 ? g.max_degree() : 0;
    j["edge_density"] = g.n() >= 2 ? edge_density(g) : 0.0;
    j["components"] = g.component_count();
    return j;
}

ordered_json pairs_to_object(const std::vector<std::pair<std::string, std::string>>& pairs) {
    ordered_json j = ordered_json::object();
    for (const auto& [key, value] : pairs) j[key] = value;
    return j;
}

}  // namespace

StubGraph seed_graph_from_spec(const std::string& spec, const std::string& base_dir,
                               std::string* resolved_path) {
    const std::vector<std::string> parts = split(spec, ':');
    const std::string& kind = parts[0];
    if (kind == "file") {
        if (parts.size() != 2 || parts[1].empty())
            fail(ErrorCode::ConfigError, "seed: expected file:<path>, got '" + spec + "'");
        fs::path target(parts[1]);
        if (target.is_relative()) target = fs::path(base_dir) / target;
        if (resolved_path != nullptr) *resolved_path = target.string();
        return read_edge_list_file(target.string());
    }
    if (kind == "bipartite") {
        if (parts.size() != 3)
            fail(ErrorCode::ConfigError, "seed: expected bipartite:<a>:<b>, got '" + spec + "'");
        const std::size_t a = parse_u64(parts[1], "seed");
        const std::size_t b = parse_u64(parts[2], "seed");
        return StubGraph(complete_bipartite(a, b));
    }
    if (parts.size() != 2)
        fail(ErrorCode::ConfigError, "seed: expected <kind>:<n>, got '" + spec + "'");
    const std::size_t n = parse_u64(parts[1], "seed");
    if (kind == "complete") return StubGraph(complete_graph(n));
    if (kind == "cycle") return StubGraph(cycle_graph(n));
    if (kind == "path") return StubGraph(path_graph(n));
    fail(ErrorCode::ConfigError, "seed: unknown kind '" + kind + "'");
}

std::uint64_t default_rng_seed() {
    const char* env = std::getenv(kSeedEnvVar);
    if (env == nullptr || *env == '\0') return 0;
    try {
        return parse_u64(env, kSeedEnvVar);
    } catch (const Error&) {
        fail(ErrorCode::ConfigError, std::string(kSeedEnvVar) + ": bad value '" + env + "'");
    }
}

void set_thread_cap(std::size_t n) {
#ifdef _OPENMP
    omp_set_num_threads(static_cast<int>(std::max<std::size_t>(1, n)));
#else
    (void)n;
#endif
}

Config load_config(const std::string& path) {
    Config cfg;
    fs::path file(path);
    cfg.dir = file.parent_path().string();
    if (cfg.dir.empty()) cfg.dir = ".";
    std::vector<std::string> stack;
    load_config_into(path, cfg, stack);
    if (cfg.values.empty()) fail(ErrorCode::ConfigError, path + ": config has no keys");
    return cfg;
}

std::string manifest_to_json(const RunManifest& manifest) {
    ordered_json j;
    j["command"] = manifest.command;
    j["rng_seed"] = manifest.rng_seed;
    j["inputs"] = pairs_to_object(manifest.inputs);
    j["versions"] = pairs_to_object(manifest.versions);
    j["wall_clock_seconds"] = manifest.wall_clock_seconds;
    j["outputs"] = pairs_to_object(manifest.outputs);
    return j.dump(2) + "\n";
}

ExperimentResult run_experiment(const std::string& config_path,
                                const std::string& command_line) {
    const auto started = std::chrono::steady_clock::now();
    const Config cfg = load_config(config_path);

    for (const auto& [key, value] : cfg.values) {
        (void)value;
        if (known_keys().count(key) == 0)
            fail(ErrorCode::ConfigError, "unknown key '" + key + "'");
    }
    auto get = [&](const std::string& key) -> const std::string* {
        auto it = cfg.values.find(key);
        return it == cfg.values.end() ? nullptr : &it->second;
    };
    auto require = [&](const std::string& key) -> const std::string& {
        const std::string* value = get(key);
        if (value == nullptr) fail(ErrorCode::ConfigError, "missing required key '" + key + "'");
        return *value;
    };

    ExperimentResult result;
    result.name = require("name");

    ProtocolConfig protocol;
    try {
        protocol = protocol_from_label(require("protocol"));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError) throw;
        fail(ErrorCode::ConfigError, std::string("protocol: ") + e.what());
    }
    if (const std::string* certainty = get("certainty")) {
        protocol.certainty_c = parse_double(*certainty, "certainty");
        if (protocol.certainty_c <= 0.0) fail(ErrorCode::ConfigError, "certainty must be positive");
    }
    protocol.target_n = parse_u64(require("target-n"), "target-n");
    protocol.seed =
        get("rng-seed") ? parse_u64(*get("rng-seed"), "rng-seed") : default_rng_seed();
    if (const std::string* threads = get("threads"))
        set_thread_cap(parse_u64(*threads, "threads"));

    RunManifest manifest;
    manifest.command = command_line.empty() ? "run_experiment " + config_path : command_line;
    manifest.rng_seed = protocol.seed;
    manifest.inputs = cfg.files;
    for (const char* module : {"graph-core", "matching", "growth", "reduce", "analysis",
                               "gadgets", "cli"})
        manifest.versions.emplace_back(module, kVersion);

    // --- grow ---
    const std::string seed_spec = require("seed");
    std::string seed_file;
    StubGraph sg = seed_graph_from_spec(seed_spec, cfg.dir, &seed_file);
    if (!seed_file.empty())
        manifest.inputs.emplace_back(seed_file, fnv1a_hex(read_text_file(seed_file)));

    Trace trace;
    trace.protocol = protocol_label(protocol);
    stamp_seed_info(trace, sg);
    const GrowResult grown = grow(sg, protocol);
    trace.records.reserve(grown.steps.size());
    for (const DpStepRecord& rec : grown.steps) trace.records.push_back(to_trace_record(rec));
    const Graph grown_graph = sg.graph;

    ordered_json report;
    report["name"] = result.name;
    report["protocol"] = trace.protocol;
    report["seed"] = seed_spec;
    report["rng_seed"] = protocol.seed;
    report["target_n"] = protocol.target_n;
    report["grown"] = graph_stats(grown_graph);

    // --- analyze ---
    ordered_json checks_json = ordered_json::array();
    if (const std::string* checks = get("checks")) {
        for (const std::string& raw : split(*checks, ',')) {
            const std::string check = trim(raw);
            ordered_json entry;
            entry["check"] = check;
            bool passed = false;
            if (check == "maxdpg-law") {
                const double slack =
                    get("maxdpg-slack") ? parse_double(*get("maxdpg-slack"), "maxdpg-slack") : 8.0;
                const std::size_t warmup =
                    get("maxdpg-warmup") ? parse_u64(*get("maxdpg-warmup"), "maxdpg-warmup") : 16;
                const GrowthLawReport law = check_maxdpg_law(trace, slack, warmup);
                entry["slack"] = slack;
                entry["warmup"] = law.warmup;
                entry["law"] = law.law;
                entry["checked"] = law.checked;
                entry["fitted_constant"] = law.fitted_constant;
                entry["worst_margin"] = law.worst_margin;
                passed = law.passed;
            } else if (check == "linear-law") {
                Rational c{1, 1};
                if (protocol.kind == ProtocolKind::Linear) c = protocol.c;
                else if (protocol.kind != ProtocolKind::Max)
                    fail(ErrorCode::ConfigError, "linear-law needs the linear or max protocol");
                const Rational k = rational_from_string(
                    get("linear-k") ? *get("linear-k") : std::string("2"));
                const GrowthLawReport law = check_linear_law(trace, c, k);
                entry["c"] = rational_to_string(c);
                entry["k"] = rational_to_string(k);
                entry["law"] = law.law;
                entry["checked"] = law.checked;
                entry["worst_margin"] = law.worst_margin;
                passed = law.passed;
            } else if (check == "distribution" || check == "density") {
                double gamma = 0.0;
                if (const std::string* g = get("gamma")) gamma = parse_double(*g, "gamma");
                else if (protocol.kind == ProtocolKind::ScaleFree) gamma = protocol.gamma;
                else
                    fail(ErrorCode::ConfigError,
                         "'" + check + "' needs a gamma key under this protocol");
                double coefficient = 0.0;
                const std::string* bound_c = get("bound-c");
                if (bound_c == nullptr || *bound_c == "auto")
                    coefficient = sf_theoretical_C(gamma, protocol.certainty_c);
                else
                    coefficient = parse_double(*bound_c, "bound-c");
                const PowerLawReport law = check == "distribution"
                                               ? check_distribution_bounded(grown_graph, gamma,
                                                                            coefficient)
                                               : check_density_bounded(grown_graph, gamma,
                                                                       coefficient);
                entry["gamma"] = gamma;
                entry["coefficient"] = coefficient;
                entry["violations"] = law.violations.size();
                entry["bracket_width"] = law.bracket_width;
                passed = law.passed;
            } else {
                fail(ErrorCode::ConfigError, "unknown check '" + check + "'");
            }
            entry["passed"] = passed;
            checks_json.push_back(entry);
            result.checks.push_back({check, passed});
            result.all_passed = result.all_passed && passed;
        }
    }
    report["checks"] = checks_json;

    // --- reduce ---
    const std::string reduce_mode = get("reduce") ? *get("reduce") : std::string("none");
    if (reduce_mode == "kernel") {
        ReduceOptions options;
        if (const std::string* policy = get("reduce-policy"))
            options.policy = order_policy_from_name(*policy);
        if (const std::string* budget = get("reduce-budget"))
            options.budget = parse_u64(*budget, "reduce-budget");
        options.seed = protocol.seed;
        const ReductionResult reduced = reduce_to_kernel(sg, options);
        for (const RemovabilityCertificate& cert : reduced.removals)
            trace.records.push_back(to_trace_record(cert));
        ordered_json r;
        r["policy"] = order_policy_name(options.policy);
        r["budget"] = options.budget;
        r["removed"] = reduced.removed_count;
        r["kernel"] = graph_stats(reduced.kernel.graph);
        r["irreducible"] = reduced.irreducible;
        r["budget_exhausted"] = reduced.budget_exhausted;
        report["reduction"] = r;
    } else if (reduce_mode != "none") {
        fail(ErrorCode::ConfigError, "reduce: expected none or kernel, got '" + reduce_mode + "'");
    }
    report["all_passed"] = result.all_passed;
    result.report_json = report.dump(2) + "\n";

    // --- outputs ---
    const fs::path out_dir(get("out-dir") ? *get("out-dir") : std::string("."));
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    auto resolve = [&](const std::string& file_name) {
        fs::path p(file_name);
        return (p.is_absolute() ? p : out_dir / p).string();
    };
    auto emit = [&](const std::string& path, const std::string& content) {
        write_text_file(path, content);
        manifest.outputs.emplace_back(path, fnv1a_hex(content));
    };
    if (const std::string* out = get("trace-out")) {
        result.trace_path = resolve(*out);
        emit(result.trace_path, serialize_trace(trace));
    }
    if (const std::string* out = get("graph-out")) {
        result.graph_path = resolve(*out);
        emit(result.graph_path, to_edge_list(sg));
    }
    result.report_path = resolve(get("report-out") ? *get("report-out")
                                                   : result.name + ".report.json");
    emit(result.report_path, result.report_json);

    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    result.manifest = manifest;
    result.manifest_json = manifest_to_json(manifest);
    result.manifest_path = resolve(get("manifest-out") ? *get("manifest-out")
                                                       : result.name + ".manifest.json");
    write_text_file(result.manifest_path, result.manifest_json);
    return result;
}

}  // namespace dpg
