#include "speedpart/graph_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "speedpart/errors.hpp"
#include "speedpart/rng.hpp"

namespace speedpart {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

NodeId parse_node(const std::string& field, std::size_t row) {
    const std::string f = strip(field);
    if (f.empty() || f.find_first_not_of("0123456789") != std::string::npos)
        throw DataError("ParseError", "row " + std::to_string(row) +
                                          ": bad node id '" + field + "'");
    unsigned long long v = 0;
    try {
        v = std::stoull(f);
    } catch (const std::exception&) {
        throw DataError("ParseError",
                        "row " + std::to_string(row) + ": bad node id '" + field + "'");
    }
    if (v > std::numeric_limits<NodeId>::max() - 1)
        throw DataError("ParseError",
                        "row " + std::to_string(row) + ": node id out of range");
    return static_cast<NodeId>(v);
}

double parse_ts(const std::string& field, std::size_t row) {
    const std::string f = strip(field);
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(f, &pos);
    } catch (const std::exception&) {
        throw DataError("ParseError",
                        "row " + std::to_string(row) + ": bad timestamp '" + field + "'");
    }
    if (pos != f.size() || !std::isfinite(v) || v < 0.0)
        throw DataError("ParseError",
                        "row " + std::to_string(row) + ": bad timestamp '" + field + "'");
    return v;
}

void finalize(EdgeStream& s, bool assume_sorted) {
    if (!assume_sorted)
        std::stable_sort(s.edges.begin(), s.edges.end(),
                         [](const TemporalEdge& a, const TemporalEdge& b) {
                             return a.ts < b.ts;
                         });
    NodeId max_id = 0;
    bool any = false;
    double t_max = 0.0;
    for (const TemporalEdge& e : s.edges) {
        max_id = std::max({max_id, e.src, e.dst});
        t_max = std::max(t_max, e.ts);
        any = true;
    }
    s.node_count = any ? max_id + 1 : 0;
    s.t_max = any ? t_max : 0.0;
}

EdgeStream stream_with(std::vector<TemporalEdge> edges, NodeId node_count) {
    EdgeStream out;
    out.edges = std::move(edges);
    out.node_count = node_count;
    double t_max = 0.0;
    for (const TemporalEdge& e : out.edges) t_max = std::max(t_max, e.ts);
    out.t_max = out.edges.empty() ? 0.0 : t_max;
    return out;
}

} // namespace

EdgeStream load_edges(std::istream& in, bool assume_sorted) {
    std::string line;
    if (!std::getline(in, line))
        throw DataError("ParseError", "empty input: expected header src,dst,ts");
    {
        std::vector<std::string> cols = split_fields(line);
        if (cols.size() < 3 || strip(cols[0]) != "src" || strip(cols[1]) != "dst" ||
            strip(cols[2]) != "ts")
            throw DataError("ParseError", "expected header src,dst,ts");
    }
    EdgeStream s;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (strip(line).empty()) continue;
        ++row;
        std::vector<std::string> f = split_fields(line);
        if (f.size() < 3)
            throw DataError("ParseError",
                            "row " + std::to_string(row) + ": expected 3 fields");
        TemporalEdge e;
        e.src = parse_node(f[0], row);
        e.dst = parse_node(f[1], row);
        e.ts = parse_ts(f[2], row);
        s.edges.push_back(e);
    }
    finalize(s, assume_sorted);
    return s;
}

EdgeStream load_edges(const std::string& path, bool assume_sorted) {
    std::ifstream in(path);
    if (!in) throw DataError("FileNotFound", "cannot open '" + path + "'");
    return load_edges(in, assume_sorted);
}

void write_edges(const EdgeStream& s, std::ostream& out) {
    out << "src,dst,ts\n";
    char buf[64];
    for (const TemporalEdge& e : s.edges) {
        std::snprintf(buf, sizeof(buf), "%.17g", e.ts);
        out << e.src << ',' << e.dst << ',' << buf << '\n';
    }
}

void write_edges(const EdgeStream& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("FileNotFound", "cannot open '" + path + "' for writing");
    write_edges(s, out);
}

ChronoSplit chrono_split(const EdgeStream& s, double f_train, double f_val) {
    if (!(f_train > 0.0 && f_train < 1.0) || f_val < 0.0 || f_train + f_val > 1.0)
        throw DataError("InvalidFractions",
                        "need 0 < train < 1, val >= 0, train + val <= 1");
    const std::size_t n = s.edges.size();
    const auto n_train = static_cast<std::size_t>(std::floor(f_train * static_cast<double>(n)));
    const auto n_val = static_cast<std::size_t>(std::floor(f_val * static_cast<double>(n)));

    ChronoSplit out;
    out.f_train = f_train;
    out.f_val = f_val;
    out.f_test = 1.0 - f_train - f_val;
    auto b = s.edges.begin();
    out.train = stream_with({b, b + n_train}, s.node_count);
    out.val = stream_with({b + n_train, b + n_train + n_val}, s.node_count);
    out.test = stream_with({b + n_train + n_val, s.edges.end()}, s.node_count);
    return out;
}

EdgeStream gen_powerlaw(NodeId nodes, std::size_t edges, double alpha, std::uint64_t seed) {
    if (nodes < 2 || edges < 1 || !(alpha > 1.0))
        throw DataError("InvalidParams",
                        "need nodes >= 2, edges >= 1, alpha > 1");

    const std::size_t m_per = std::max<std::size_t>(1, edges / nodes);
    // Shifted-linear kernel deg+a yields tail exponent 3 + a/m; clamp keeps
    // the kernel positive (every node enters with degree m_per).
    double a = (alpha - 3.0) * static_cast<double>(m_per);
    const double a_min = -0.95 * static_cast<double>(m_per);
    if (a < a_min) a = a_min;
    const double accept_ceil =
        a > 0.0 ? 1.0 + a / static_cast<double>(m_per) : 1.0;

    std::mt19937_64 rng(seed);
    std::vector<TemporalEdge> out;
    out.reserve(edges);
    std::vector<std::size_t> deg(nodes, 0);
    std::vector<NodeId> pool; // node u appears deg(u) times
    pool.reserve(2 * edges);

    auto push_edge = [&](NodeId u, NodeId v) {
        out.push_back({u, v, static_cast<double>(out.size() + 1)});
        ++deg[u];
        ++deg[v];
        pool.push_back(u);
        pool.push_back(v);
    };

    // Biased draw from the current graph: proposal ~ degree, thinned to the
    // shifted kernel; bounded retries keep the function total.
    auto draw_pref = [&]() -> NodeId {
        for (int tries = 0; tries < 64; ++tries) {
            NodeId u = pool[draw_below(rng, pool.size())];
            double ratio =
                (1.0 + a / static_cast<double>(deg[u])) / accept_ceil;
            if (draw_unit(rng) < ratio) return u;
        }
        return pool[draw_below(rng, pool.size())];
    };

    // Seed block: m_per parallel interactions between nodes 0 and 1.
    for (std::size_t r = 0; r < m_per && out.size() < edges; ++r) push_edge(0, 1);

    // Growth: each new node attaches m_per times to the existing graph.
    for (NodeId v = 2; v < nodes && out.size() < edges; ++v) {
        for (std::size_t r = 0; r < m_per && out.size() < edges; ++r) {
            NodeId u = draw_pref();
            for (int tries = 0; u == v && tries < 64; ++tries) u = draw_pref();
            if (u == v) u = (v + 1) % 2; // unreachable unless the pool degenerates
            push_edge(v, u);
        }
    }

    // Remaining budget: internal interactions, both ends kernel-drawn.
    while (out.size() < edges) {
        NodeId u = draw_pref();
        NodeId v = draw_pref();
        for (int tries = 0; v == u && tries < 64; ++tries) v = draw_pref();
        if (v == u) v = (u + 1) % nodes;
        push_edge(u, v);
    }

    // Interaction order is independent of construction order: permute, then
    // stamp 1..edges. A growth-ordered stream would be pathological input
    // for anything streaming (every edge touches an already-seen node).
    fisher_yates(rng, out);
    for (std::size_t t = 0; t < out.size(); ++t)
        out[t].ts = static_cast<double>(t + 1);

    EdgeStream s;
    s.edges = std::move(out);
    s.node_count = nodes;
    s.t_max = static_cast<double>(edges);
    return s;
}

} // namespace speedpart
