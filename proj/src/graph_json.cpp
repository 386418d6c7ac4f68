#include "lovo/graph_json.hpp"

#include <fstream>

#include "lovo/errors.hpp"

namespace lovo {

using nlohmann::json;

namespace {

std::vector<NodePair> read_pairs(const json& j, const char* field) {
  std::vector<NodePair> out;
  if (!j.contains(field)) return out;
  const json& arr = j.at(field);
  if (!arr.is_array()) throw DomainError(std::string("graph JSON: '") + field + "' must be an array");
  for (const json& e : arr) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      throw DomainError(std::string("graph JSON: '") + field + "' entries must be [string, string]");
    out.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }
  return out;
}

}  // namespace

json graph_to_json(const Admg& g) {
  json j;
  j["nodes"] = g.nodes();
  j["directed"] = json::array();
  for (const auto& [a, b] : g.directed_edges()) j["directed"].push_back({a, b});
  j["bidirected"] = json::array();
  for (const auto& [a, b] : g.bidirected_edges()) j["bidirected"].push_back({a, b});
  return j;
}

GraphDocument graph_document_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("graph JSON must be an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "nodes" && key != "directed" && key != "bidirected" && key != "convention" &&
        key != "metadata")
      throw DomainError("graph JSON: unknown field '" + key + "'");
  }
  if (!j.contains("nodes") || !j.at("nodes").is_array())
    throw DomainError("graph JSON: 'nodes' array required");
  std::vector<NodeId> nodes;
  for (const json& n : j.at("nodes")) {
    if (!n.is_string()) throw DomainError("graph JSON: node names must be strings");
    nodes.push_back(n.get<std::string>());
  }
  GraphDocument doc{Admg(nodes, read_pairs(j, "directed"), read_pairs(j, "bidirected")), std::nullopt,
                    nullptr};
  if (j.contains("convention")) {
    const json& c = j.at("convention");
    if (c == "confounded-links")
      doc.convention = GraphConvention::ConfoundedLinks;
    else if (c == "no-confounded-links")
      doc.convention = GraphConvention::NoConfoundedLinks;
    else
      throw DomainError("graph JSON: unknown convention " + c.dump());
  }
  if (j.contains("metadata")) doc.metadata = j.at("metadata");
  return doc;
}

Admg graph_from_json(const json& j) { return graph_document_from_json(j).graph; }

json graph_document_to_json(const GraphDocument& doc) {
  json j = graph_to_json(doc.graph);
  if (doc.convention)
    j["convention"] = *doc.convention == GraphConvention::NoConfoundedLinks ? "no-confounded-links"
                                                                            : "confounded-links";
  if (!doc.metadata.is_null()) j["metadata"] = doc.metadata;
  return j;
}

GraphDocument read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw DomainError("graph file " + path.string() + ": " + e.what());
  }
  return graph_document_from_json(j);
}

void write_graph_file(const std::filesystem::path& path, const Admg& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file " + path.string());
  out << graph_to_json(g).dump(2) << '\n';
}

}  // namespace lovo
