#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "royden/graph.hpp"

namespace royden {

// JSON form: {"edges":[[a,b],...],"vertices":[0,1,...]}
Graph parse_graph_json(std::string_view text);
std::string emit_graph_json(const Graph& g);

// Plain text: one "a b" pair per line, '#' starts a comment.
Graph parse_edge_list(std::string_view text);
std::string emit_edge_list(const Graph& g);

/// Dispatches on content: a leading '{' selects JSON.
Graph load_graph(const std::filesystem::path& path);

}  // namespace royden
