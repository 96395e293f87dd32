#pragma once

#include "syncgrid/graph.hpp"

#include <json.hpp>

#include <string>

namespace syncgrid {

/// {"n": int, "edges": [[i, j, w], ...]} with 1-based ids. Edges are canonicalised.
WeightedGraph parse_graph_json(const std::string& text);
WeightedGraph graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const WeightedGraph& g);

/// Header "i,j,weight" followed by one edge per line. n is the largest id seen.
WeightedGraph parse_edge_csv(const std::string& text);

/// Picks the parser from the file extension (.csv or anything else as JSON).
WeightedGraph load_graph(const std::string& path);

/// Reals separated by commas, whitespace or newlines. A non-numeric first line is treated as a header.
Eigen::VectorXd parse_vector_csv(const std::string& text);
Eigen::VectorXd load_vector(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

/// Parses JSON text, mapping syntax errors to ParseError with line and column.
nlohmann::json parse_json_text(const std::string& text);

}  // namespace syncgrid
