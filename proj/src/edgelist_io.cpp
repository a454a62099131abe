#include "dpg/edgelist_io.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace dpg {

std::string to_edge_list(const StubGraph& sg) {
    const std::vector<VertexId> verts = sg.graph.vertices();
    std::vector<VertexId> compact(sg.graph.id_bound(), kNoVertex);
    for (std::size_t i = 0; i < verts.size(); ++i) compact[verts[i]] = static_cast<VertexId>(i);

    std::vector<Edge> edges;
    edges.reserve(sg.graph.m());
    for (VertexId v : verts)
        for (VertexId w : sg.graph.neighbors(v))
            if (v < w) edges.push_back({compact[v], compact[w]});
    std::sort(edges.begin(), edges.end(), edge_less);

    std::ostringstream out;
    out << "# n=" << verts.size() << "\n";
    for (const Edge& e : edges) out << e.lo() << " " << e.hi() << "\n";
    if (sg.deficient) out << "! deficient=" << compact[*sg.deficient] << "\n";
    return out.str();
}

std::string to_edge_list(const Graph& g) { return to_edge_list(StubGraph(Graph(g))); }

namespace {

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

long parse_long(const std::string& s, int line_no) {
    try {
        std::size_t used = 0;
        long v = std::stol(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail(ErrorCode::BadFormat, "line " + std::to_string(line_no) + ": bad integer '" + s + "'");
    }
}

} // namespace

StubGraph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    long declared_n = -1;
    long deficient = -1;
    std::vector<std::pair<long, long>> edges;
    long max_id = -1;

    while (std::getline(in, line)) {
        ++line_no;
        std::string s = strip(line);
        if (s.empty()) continue;
        if (s[0] == '#') {
            std::string body = strip(s.substr(1));
            if (body.rfind("n=", 0) == 0 && declared_n < 0)
                declared_n = parse_long(strip(body.substr(2)), line_no);
            continue;
        }
        if (s[0] == '!') {
            std::string body = strip(s.substr(1));
            if (body.rfind("deficient=", 0) != 0)
                fail(ErrorCode::BadFormat, "line " + std::to_string(line_no) + ": unknown directive");
            deficient = parse_long(strip(body.substr(10)), line_no);
            continue;
        }
        std::istringstream ls(s);
        std::string a, b, extra;
        ls >> a >> b;
        if (b.empty() || (ls >> extra))
            fail(ErrorCode::BadFormat, "line " + std::to_string(line_no) + ": expected 'u v'");
        long u = parse_long(a, line_no), v = parse_long(b, line_no);
        if (u < 0 || v < 0)
            fail(ErrorCode::BadFormat, "line " + std::to_string(line_no) + ": negative vertex id");
        edges.emplace_back(u, v);
        max_id = std::max({max_id, u, v});
    }

    const long n = declared_n >= 0 ? declared_n : max_id + 1;
    if (max_id >= n) fail(ErrorCode::BadFormat, "edge references vertex >= declared n");
    StubGraph sg{Graph(static_cast<std::size_t>(n))};
    for (auto [u, v] : edges)
        sg.graph.add_edge(static_cast<VertexId>(u), static_cast<VertexId>(v));
    if (deficient >= 0) {
        if (deficient >= n) fail(ErrorCode::BadFormat, "deficient vertex >= declared n");
        sg.deficient = static_cast<VertexId>(deficient);
    }
    return sg;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path);
    out << content;
    if (!out) fail(ErrorCode::IoError, "write failed for " + path);
}

void write_edge_list_file(const StubGraph& sg, const std::string& path) {
    write_text_file(path, to_edge_list(sg));
}

StubGraph read_edge_list_file(const std::string& path) {
    return parse_edge_list(read_text_file(path));
}

std::string fnv1a_hex(const std::string& content) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : content) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

} // namespace dpg
