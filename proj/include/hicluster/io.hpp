#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "hicluster/graph.hpp"
#include "hicluster/ground_truth.hpp"
#include "hicluster/objectives.hpp"

namespace hicluster {

// Text formats. Every reader throws ParseError carrying the byte offset of
// the first problem.
//
//   graph:    "hicluster-graph 1 <n> <m> <sim|dis>" then m lines "u v w", u < v
//   gentree:  "hicluster-gentree 1 <sim|dis>" then a tree with ":W" after every internal node
//   cost:     "hicluster-g 1 <n_max>" then g(i,1) for i = 1.. one per line

std::string format_graph(const WeightedGraph& g);
WeightedGraph parse_graph(std::string_view text);

std::string format_gentree(const GeneratingTree& gt);
GeneratingTree parse_gentree(std::string_view text);

std::string format_cost_function(const CostFunction& cf);
CostFunction parse_cost_function(std::string_view text);

/// Whole file as a string; throws InvalidArgument if it cannot be read.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

/// 64-bit FNV-1a, printed as 16 hex digits by content_hash_hex.
std::uint64_t content_hash(std::string_view bytes);
std::string content_hash_hex(std::string_view bytes);

}  // namespace hicluster
