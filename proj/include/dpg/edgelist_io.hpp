#pragma once

#include <string>

#include "dpg/graph.hpp"

namespace dpg {

// Canonical edge-list text format:
//   # n=<N>
//   u v            (one line per edge, u < v, lines sorted)
//   ! deficient=<id>   (only when the deficiency marker is set)
// Live vertices are compacted to 0..N-1 in ascending original-id order at
// write time, so equal graphs serialize to identical bytes. `#` comment and
// blank lines are ignored on input.
std::string to_edge_list(const StubGraph& sg);
std::string to_edge_list(const Graph& g);
StubGraph parse_edge_list(const std::string& text);

void write_edge_list_file(const StubGraph& sg, const std::string& path);
StubGraph read_edge_list_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// FNV-1a 64-bit content hash, hex-encoded; used by run manifests
std::string fnv1a_hex(const std::string& content);

} // namespace dpg
