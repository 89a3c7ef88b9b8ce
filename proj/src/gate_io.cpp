#include "treelight/gate_io.hpp"

#include <fstream>
#include <sstream>

namespace treelight {

nlohmann::json gate_to_json(const Gate& u, const nlohmann::json& metadata) {
  nlohmann::json entries = nlohmann::json::array();
  const Matrix& m = u.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
  return {{"q", u.q()}, {"z", u.z()}, {"layout", kGateLayout}, {"entries", entries}, {"metadata", metadata}};
}

Gate gate_from_json(const nlohmann::json& j) {
  try {
    const int q = j.at("q").get<int>();
    const int z = j.at("z").get<int>();
    if (q < 2 || z < 1) throw InvalidArgument("gate file: q must be >= 2 and z >= 1");
    if (j.contains("layout") && j.at("layout").get<std::string>() != kGateLayout)
      throw InvalidArgument("gate file: unsupported layout '" + j.at("layout").get<std::string>() + "'");
    const auto& entries = j.at("entries");
    const std::int64_t dim = ipow(q, z);
    if (static_cast<std::int64_t>(entries.size()) != dim * dim)
      throw InvalidArgument("gate file: expected " + std::to_string(dim * dim) + " entries, found " +
                            std::to_string(entries.size()));
    Matrix m(dim, dim);
    std::size_t k = 0;
    for (std::int64_t r = 0; r < dim; ++r)
      for (std::int64_t c = 0; c < dim; ++c, ++k) {
        const auto& e = entries[k];
        if (!e.is_array() || e.size() != 2) throw InvalidArgument("gate file: entries must be [re, im] pairs");
        m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
      }
    return Gate(q, z, std::move(m));
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidArgument(std::string("gate file: ") + ex.what());
  }
}

nlohmann::json tree_to_json(const TwoColoring& c) {
  const CayleyTree& t = c.tree();
  nlohmann::json vertices = nlohmann::json::array();
  for (Vertex v = 0; v < t.size(); ++v) {
    nlohmann::json entry = {{"id", t.id(v)}, {"parent", t.parent(v)}};
    entry["color"] = v == 0 ? nlohmann::json(nullptr) : nlohmann::json(std::string(1, color_name(c.edge_color(v))));
    vertices.push_back(entry);
  }
  return {{"z", t.z()}, {"depth", t.depth()}, {"rooted", t.rooted()}, {"vertices", vertices}};
}

TwoColoring tree_from_json(const nlohmann::json& j) {
  try {
    CayleyTree t(j.at("z").get<int>(), j.at("depth").get<int>(), j.at("rooted").get<bool>());
    TwoColoring c(t);
    const auto& vertices = j.at("vertices");
    if (static_cast<Vertex>(vertices.size()) != t.size())
      throw InvalidArgument("tree file: vertex count does not match z and depth");
    for (Vertex v = 0; v < t.size(); ++v) {
      const auto& e = vertices[v];
      if (e.at("id").get<std::string>() != t.id(v) || e.at("parent").get<Vertex>() != t.parent(v))
        throw InvalidArgument("tree file: vertex " + std::to_string(v) + " is not in breadth-first order");
      if (v > 0 && e.at("color").get<std::string>() != std::string(1, color_name(c.edge_color(v))))
        throw InvalidArgument("tree file: vertex " + std::to_string(v) + " has a non-canonical color");
    }
    return c;
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidArgument(std::string("tree file: ") + ex.what());
  }
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + tmp.string());
    out << contents;
    if (!out) throw InvalidArgument("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace treelight
