#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "dhj/graph.hpp"
#include "dhj/potential.hpp"
#include "dhj/special_cases.hpp"

namespace dhj::testing {

inline std::string data_path(const std::string& file) { return std::string(DHJ_TEST_DATA_DIR) + "/" + file; }

inline std::string read_text(const std::string& file) {
  std::ifstream in(data_path(file));
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Fixture graph by short name: "g2", "g4", "r4", "rev3", "g3c", "g4-broken".
inline Graph fixture(const std::string& name) { return parse_graph(std::string_view(read_text(name + ".json"))); }

inline RingSpec r4_ring() { return ring_from_json(nlohmann::json::parse(read_text("r4-ring.json"))); }

/// Potential by vertex order.
inline Potential pot(std::initializer_list<double> values) { return Potential(std::vector<double>(values)); }

/// Edge id from 1-based style vertex names.
inline EdgeId edge_id(const Graph& g, const std::string& from, const std::string& to) {
  return *g.find_edge(g.index_of(from), g.index_of(to));
}

}  // namespace dhj::testing
