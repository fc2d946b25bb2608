#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "speedpart/types.hpp"

namespace speedpart {

// Reads a CSV edge list (`src,dst,ts` header required, extra columns
// ignored). Unless assume_sorted, edges are stable-sorted by timestamp.
// node_count is inferred as max id + 1. A header-only file yields an
// empty stream; malformed rows raise ParseError with the 1-based data
// row index.
EdgeStream load_edges(const std::string& path, bool assume_sorted = false);
EdgeStream load_edges(std::istream& in, bool assume_sorted = false);

// Writes the stream back as CSV. Timestamps are printed with enough
// precision to round-trip bit-exactly.
void write_edges(const EdgeStream& s, std::ostream& out);
void write_edges(const EdgeStream& s, const std::string& path);

// Splits the first floor(f_train*|E|) edges into train, the next
// floor(f_val*|E|) into val, the remainder into test. Order preserved;
// sub-streams keep the parent node_count.
ChronoSplit chrono_split(const EdgeStream& s, double f_train, double f_val);

// Generates a heavy-tailed temporal graph: a growing network where each
// new node attaches with preferential selection under a shifted-linear
// kernel (degree + a), a chosen so the degree tail exponent tracks
// `alpha`; leftover edges are internal events sampled with the same
// kernel. Timestamps run 1..edges. Pure function of its arguments.
EdgeStream gen_powerlaw(NodeId nodes, std::size_t edges, double alpha, std::uint64_t seed);

} // namespace speedpart
