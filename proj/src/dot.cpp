#include "fso/dot.hpp"

#include <sstream>

namespace fso {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string hierarchy_dot(const Hierarchy& h) {
  std::ostringstream out;
  out << "digraph hierarchy {\n  rankdir=BT;\n";
  for (const auto& id : h.node_ids()) {
    const int lvl = h.home_level(id);
    const std::string label = quote(id);
    out << "  " << label << " [label=" << label.substr(0, label.size() - 1) << "\\nL" << lvl << '"'
        << ", level=" << lvl << ", shape=" << (h.is_canon(id) ? "box" : "ellipse") << "];\n";
  }
  for (const auto& [child, parent] : h.edges()) {
    out << "  " << quote(child) << " -> " << quote(parent) << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string son_space_dot(const CapabilityMatrix& m, const std::vector<SpaceAssignment>& space) {
  std::ostringstream out;
  out << "graph son_space {\n";
  for (std::size_t i = 0; i < space.size(); ++i) {
    std::string label;
    for (const auto& [role, node] : to_assignment(m, space[i])) {
      if (!label.empty()) label += ' ';
      label += role + "@" + node;
    }
    out << "  a" << i << " [label=" << quote(label) << "];\n";
  }
  for (const auto& [i, j] : son_space_edges(space)) out << "  a" << i << " -- a" << j << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace fso
