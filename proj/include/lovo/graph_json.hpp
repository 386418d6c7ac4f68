#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "lovo/graph.hpp"

namespace lovo {

/// How a producer encodes confounding. Graphs following NoConfoundedLinks
/// never put a directed and a bidirected edge on the same pair.
enum class GraphConvention { ConfoundedLinks, NoConfoundedLinks };

struct GraphDocument {
  Admg graph;
  std::optional<GraphConvention> convention;
  nlohmann::json metadata;  // null when absent
};

nlohmann::json graph_to_json(const Admg& g);
/// Strict: only "nodes", "directed", "bidirected", "convention", "metadata".
GraphDocument graph_document_from_json(const nlohmann::json& j);
Admg graph_from_json(const nlohmann::json& j);
nlohmann::json graph_document_to_json(const GraphDocument& doc);

GraphDocument read_graph_file(const std::filesystem::path& path);
void write_graph_file(const std::filesystem::path& path, const Admg& g);

}  // namespace lovo
