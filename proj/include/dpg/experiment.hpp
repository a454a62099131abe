#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dpg/graph.hpp"

namespace dpg {

// Experiment runner: loads a flat key-value config, executes the declared
// grow / analyze / reduce pipeline, and writes a JSON report plus a run
// manifest that ties output hashes back to the inputs that produced them.
// Identical inputs (config, seed files, seeds) produce byte-identical trace,
// graph, and report files; only the manifest wall clock varies.

inline constexpr const char* kVersion = "0.1.0";

// Environment variable consulted when neither the config nor the command
// line provides an rng seed.
inline constexpr const char* kSeedEnvVar = "DPG_RNG_SEED";
std::uint64_t default_rng_seed();

// Caps the worker count of the parallel kernels. No-op when the library was
// built without OpenMP.
void set_thread_cap(std::size_t n);

// Parsed config. The format is flat `key = value` lines: '#' starts a
// comment, blank lines are skipped, and `include = <path>` splices another
// file at that point (paths relative to the including file). A later key
// overrides an earlier one, so includes act as defaults for the file that
// pulls them in.
struct Config {
    std::map<std::string, std::string> values;
    // directory of the top-level file; relative output paths resolve here
    std::string dir;
    // every file the load touched, in load order, with its content hash
    std::vector<std::pair<std::string, std::string>> files;
};

// Throws ConfigError on malformed lines, include cycles, or a config with no
// keys at all; IoError when a file cannot be read.
Config load_config(const std::string& path);

// Builds a starting graph from a spec string (see the `seed` key below).
// file: paths resolve against base_dir; when one is read, resolved_path (if
// given) receives the path. Throws ConfigError on a malformed spec.
StubGraph seed_graph_from_spec(const std::string& spec, const std::string& base_dir,
                               std::string* resolved_path = nullptr);

// Provenance sidecar written next to every report.
struct RunManifest {
    std::string command;
    std::uint64_t rng_seed = 0;
    std::vector<std::pair<std::string, std::string>> inputs;    // path -> fnv1a
    std::vector<std::pair<std::string, std::string>> versions;  // module -> version
    double wall_clock_seconds = 0.0;
    std::vector<std::pair<std::string, std::string>> outputs;   // path -> fnv1a
};

std::string manifest_to_json(const RunManifest& manifest);

struct CheckOutcome {
    std::string name;
    bool passed = false;
};

struct ExperimentResult {
    std::string name;
    std::vector<CheckOutcome> checks;
    bool all_passed = true;      // true when every requested check passed
    std::string report_json;     // full report text, as written to disk
    std::string manifest_json;
    RunManifest manifest;
    // resolved paths of the files written ("" = not requested)
    std::string report_path;
    std::string manifest_path;
    std::string trace_path;
    std::string graph_path;
};

// Runs the pipeline a config declares. Recognized keys:
//
//   name          run label, used for default output file names   (required)
//   protocol      max | linear:<c> | sf:<gamma> | regular:<c>     (required)
//   seed          complete:<n> | cycle:<n> | path:<n> |
//                 bipartite:<a>:<b> | file:<edge list path,
//                 relative to the config file>                    (required)
//   target-n      grow until this many live vertices              (required)
//   rng-seed      unsigned seed (default: DPG_RNG_SEED env, else 0)
//   certainty     scale-free tail-certainty constant (default 1)
//   threads       worker cap for the parallel kernels
//
//   checks        comma list, run on the grown graph/trace:
//                   maxdpg-law    d(v_n) >= n - 2 log2 n - slack
//                   linear-law    d(n) >= (2c-1)n - K - 2 on the exact range
//                   distribution  tail counts under C n zeta(gamma, i)
//                   density       per-degree counts under C n i^-gamma
//   maxdpg-slack  slack constant of maxdpg-law        (default 8)
//   maxdpg-warmup smallest n maxdpg-law judges        (default 16)
//   linear-k      constant K of linear-law, rational  (default 2)
//   gamma         exponent for distribution/density (default: the
//                 protocol's own gamma; required otherwise)
//   bound-c       coefficient C, or "auto" for the theoretical one
//
//   reduce        none | kernel (default none); kernel reduces the grown
//                 graph and appends the removals to the trace
//   reduce-policy random | min-degree | max-degree | most-non-edges
//   reduce-budget work budget for the kernel search, 0 = unlimited
//
//   out-dir       directory for outputs (default: current directory)
//   report-out    report file name    (default <name>.report.json)
//   manifest-out  manifest file name  (default <name>.manifest.json)
//   trace-out     trace file name     (optional)
//   graph-out     final edge list     (optional)
//
// Unknown keys, missing required keys, and unparsable values all raise
// ConfigError. command_line is recorded verbatim in the manifest.
ExperimentResult run_experiment(const std::string& config_path,
                                const std::string& command_line = "");

}  // namespace dpg
