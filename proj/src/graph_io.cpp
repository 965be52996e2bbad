#include "royden/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "royden/error.hpp"

namespace royden {

Graph parse_graph_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object() || !doc.contains("edges")) throw Error(ErrorCode::ParseError, "expected object with \"edges\"");
  std::vector<std::pair<Vertex, Vertex>> edges;
  try {
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::ParseError, "edge must be a pair");
      edges.emplace_back(e[0].get<Vertex>(), e[1].get<Vertex>());
    }
    std::optional<std::size_t> n;
    if (doc.contains("vertices")) {
      const auto& vs = doc.at("vertices");
      // Declared vertices must be exactly 0..n-1.
      std::vector<Vertex> ids = vs.get<std::vector<Vertex>>();
      std::sort(ids.begin(), ids.end());
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] != static_cast<Vertex>(i)) {
          throw Error(ErrorCode::InvalidVertex, "vertex ids must be dense, starting at 0");
        }
      }
      n = ids.size();
    }
    return build_graph(edges, DuplicatePolicy::Collapse, n);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string emit_graph_json(const Graph& g) {
  nlohmann::json doc;
  auto edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({e.first, e.second});
  auto vertices = nlohmann::json::array();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) vertices.push_back(v);
  doc["edges"] = std::move(edges);
  doc["vertices"] = std::move(vertices);
  return doc.dump() + "\n";
}

Graph parse_edge_list(std::string_view text) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long a = 0;
    long long b = 0;
    if (!(fields >> a)) continue;
    std::string rest;
    if (!(fields >> b) || (fields >> rest)) {
      throw Error(ErrorCode::ParseError, fmt::format("line {}: expected two vertex ids", lineno));
    }
    edges.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
  }
  return build_graph(edges);
}

std::string emit_edge_list(const Graph& g) {
  std::string out;
  for (const auto& e : g.edges()) out += fmt::format("{} {}\n", e.first, e.second);
  return out;
}

Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, fmt::format("cannot open {}", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_graph_json(text);
  return parse_edge_list(text);
}

}  // namespace royden
