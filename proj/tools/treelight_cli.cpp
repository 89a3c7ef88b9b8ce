#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "treelight/channels.hpp"
#include "treelight/gate_generation.hpp"
#include "treelight/gate_io.hpp"
#include "treelight/graph_hyperbolicity.hpp"
#include "treelight/oracle.hpp"
#include "treelight/rng.hpp"
#include "treelight/stabilizer_sim.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace treelight;

namespace {

constexpr const char* kVersion = "0.1.0";

// Exit codes.
constexpr int kOk = 0;
constexpr int kPredicateFailed = 1;
constexpr int kUsage = 2;
constexpr int kNumerical = 3;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw InvalidArgument("not a number: '" + s + "'");
  return v;
}

// Accepts plain numbers and rational multiples of pi: "pi/4", "-3pi/4",
// "3*pi/8", "pi".
double parse_angle(const std::string& text) {
  const std::string s = trim(text);
  const auto at = s.find("pi");
  if (at == std::string::npos) return parse_number(s);
  std::string coeff = s.substr(0, at);
  if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
  double numerator = 1;
  if (coeff == "-")
    numerator = -1;
  else if (!coeff.empty() && coeff != "+")
    numerator = parse_number(coeff);
  const std::string rest = s.substr(at + 2);
  double denominator = 1;
  if (!rest.empty()) {
    if (rest[0] != '/') throw InvalidArgument("bad angle: '" + text + "'");
    denominator = parse_number(rest.substr(1));
    if (denominator == 0) throw InvalidArgument("bad angle: '" + text + "'");
  }
  return numerator * kPi / denominator;
}

// Sum of basis labels such as "X+Z", normalized to tr(A^2)/q = 1. For q > 2
// labels are basis indices "g<k>".
Matrix parse_operator(const std::string& spec, const OperatorBasis& basis) {
  Matrix a = Matrix::Zero(basis.q, basis.q);
  for (const auto& token : split(spec, '+')) {
    int index = -1;
    if (basis.q == 2 && token.size() == 1) {
      const std::string labels = "IXYZ";
      const auto pos = labels.find(token[0]);
      if (pos != std::string::npos) index = static_cast<int>(pos);
    } else if (token.size() > 1 && token[0] == 'g') {
      index = static_cast<int>(parse_number(token.substr(1)));
    }
    if (index < 0 || index >= basis.size()) throw InvalidArgument("unknown operator label '" + token + "'");
    a += basis[index];
  }
  const double norm = std::sqrt(overlap(a, a).real());
  if (norm == 0) throw InvalidArgument("operator '" + spec + "' is zero");
  return a / norm;
}

Color parse_color(const std::string& s) {
  if (s == "A") return Color::A;
  if (s == "B") return Color::B;
  throw InvalidArgument("color must be A or B");
}

fs::path sibling(const fs::path& p, const std::string& suffix) {
  return p.parent_path() / (p.stem().string() + suffix);
}

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) { row(header); }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) body_ << (k ? "," : "") << cells[k];
    body_ << '\n';
  }
  std::string str() const { return body_.str(); }

 private:
  std::ostringstream body_;
};

// Every subcommand records its outputs and echoes its configuration.
struct Run {
  std::string subcommand;
  CLI::App* app = nullptr;
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  json extra = json::object();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void write(const fs::path& path, const std::string& contents) {
    write_atomic(path, contents);
    outputs.push_back(path.string());
  }

  void manifest(const fs::path& primary) {
    json m;
    m["subcommand"] = subcommand;
    m["config"] = app->config_to_str(true, false);
    m["seed"] = seed;
    m["version"] = kVersion;
    m["outputs"] = outputs;
    m["results"] = extra;
    m["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_atomic(primary.string() + ".manifest.json", m.dump(2) + "\n");
  }
};

struct GateSource {
  std::string file;
  std::string model = "kim";
  int q = 2;
  int z = 3;
  std::string J = "pi/4";
  std::string b = "pi/4";
  std::string h;
  std::uint64_t seed = 0;
};

void add_gate_options(CLI::App* sub, GateSource& g, bool with_z = true) {
  sub->add_option("--gate", g.file, "Gate JSON file (overrides --model)");
  sub->add_option("--model", g.model, "kim | hadamard | generated | haar")
      ->check(CLI::IsMember({"kim", "hadamard", "generated", "haar"}));
  if (with_z) sub->add_option("--z", g.z, "Sites per gate")->check(CLI::Range(2, 6));
  sub->add_option("--J", g.J, "Ising coupling (e.g. pi/4)");
  sub->add_option("--b", g.b, "Transverse kick (e.g. pi/4)");
  sub->add_option("--field", g.h, "Comma-separated longitudinal fields, one per site");
  sub->add_option("--seed", g.seed, "Seed for generated or Haar gates");
}

KimParams kim_params(const GateSource& g) {
  KimParams p;
  p.z = g.z;
  p.J = parse_angle(g.J);
  p.b = parse_angle(g.b);
  if (!g.h.empty())
    for (const auto& s : split(g.h, ',')) p.h.push_back(parse_angle(s));
  if (!p.h.empty() && static_cast<int>(p.h.size()) != p.z)
    throw InvalidArgument("--field needs one value per site (" + std::to_string(p.z) + ")");
  return p;
}

Gate load_gate(const GateSource& g) {
  if (!g.file.empty()) {
    try {
      return gate_from_json(json::parse(read_file(g.file)));
    } catch (const json::exception& e) {
      throw InvalidArgument(g.file + ": " + e.what());
    }
  }
  if (g.model == "kim") return kim_gate(kim_params(g));
  if (g.model == "hadamard") return hadamard_construction_gate(kim_params(g));
  if (g.model == "generated") {
    GenerationConfig cfg;
    cfg.q = g.q;
    cfg.z = g.z;
    cfg.seed = g.seed;
    return generate_tree_unitary(cfg).gate;
  }
  const int dim = static_cast<int>(ipow(g.q, g.z));
  return Gate(g.q, g.z, random_unitary(dim, g.seed));
}

json report_json(const PredicateReport& r) {
  json j;
  j["passed"] = r.passed;
  j["max_residual"] = r.max_residual();
  j["tolerance"] = r.tolerance;
  j["residuals"] = json::object();
  for (std::size_t k = 0; k < r.labels.size(); ++k) j["residuals"][r.labels[k]] = r.residuals[k];
  return j;
}

std::pair<int, int> parse_direction(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 2) throw InvalidArgument("direction must look like i:j");
  return {static_cast<int>(parse_number(parts[0])), static_cast<int>(parse_number(parts[1]))};
}

// ---- gen --------------------------------------------------------------

struct GenOptions {
  int q = 2;
  int z = 3;
  std::uint64_t seed = 0;
  int max_iterations = 5000;
  double tol = 1e-12;
  std::vector<std::string> max_velocity;
  std::string out;
};

int run_gen(const GenOptions& o, Run& run) {
  GenerationConfig cfg;
  cfg.q = o.q;
  cfg.z = o.z;
  cfg.seed = o.seed;
  cfg.max_iterations = o.max_iterations;
  cfg.convergence_tol = o.tol;
  for (const auto& d : o.max_velocity) {
    const auto [i, j] = parse_direction(d);
    cfg.max_velocity.push_back({i, j});
  }
  run.seed = o.seed;
  const fs::path out(o.out);
  const fs::path trace_path = sibling(out, ".trace.csv");
  GenerationResult result = [&] {
    try {
      return generate_tree_unitary(cfg);
    } catch (const Diverged& e) {
      Csv trace({"iteration", "residual"});
      for (std::size_t k = 0; k < e.trace.size(); ++k) trace.row({std::to_string(k + 1), num(e.trace[k])});
      run.write(trace_path, trace.str());
      run.extra["diverged"] = e.what();
      run.manifest(out);
      throw;
    }
  }();
  const PredicateReport tree = is_tree_unitary(result.gate);
  const PredicateReport unitary = is_unitary(result.gate);
  json meta;
  meta["generator"] = "tree_unitary_projection";
  meta["seed"] = o.seed;
  meta["iterations"] = result.iterations;
  meta["tree_unitarity_residual"] = tree.max_residual();
  meta["unitarity_residual"] = unitary.max_residual();
  meta["max_velocity"] = o.max_velocity;
  Csv trace({"iteration", "residual"});
  for (std::size_t k = 0; k < result.trace.size(); ++k) trace.row({std::to_string(k + 1), num(result.trace[k])});
  run.write(out, gate_to_json(result.gate, meta).dump(1) + "\n");
  run.write(trace_path, trace.str());
  run.extra = meta;
  run.manifest(out);
  std::cout << "gate written to " << out.string() << " (tree-unitarity residual " << tree.max_residual() << ", "
            << result.iterations << " sweeps)\n";
  return kOk;
}

// ---- check ------------------------------------------------------------

struct CheckOptions {
  std::string gate;
  std::vector<std::string> max_velocity;
  bool perfect = false;
  bool triunitary = false;
  bool clifford = false;
  bool dimension = false;
  double tol = kDefaultTol;
  std::string out;
};

int run_check(const CheckOptions& o, Run& run) {
  GateSource src;
  src.file = o.gate;
  const Gate u = load_gate(src);
  json rep;
  bool passed = true;
  auto record = [&](const std::string& name, const PredicateReport& r) {
    rep[name] = report_json(r);
    passed = passed && r.passed;
  };
  record("unitary", is_unitary(u, o.tol));
  record("tree_unitary", is_tree_unitary(u, o.tol));
  for (const auto& d : o.max_velocity) {
    const auto [i, j] = parse_direction(d);
    record("max_velocity_" + std::to_string(i) + ":" + std::to_string(j), is_max_velocity(u, i, j, o.tol));
  }
  if (o.perfect) record("perfect_tensor", is_perfect_tensor(u, o.tol));
  if (o.triunitary) record("triunitary", is_triunitary(u, o.tol));
  if (o.clifford) {
    const bool cliff = u.q() == 2 && is_clifford(u, o.tol).has_value();
    rep["clifford"] = {{"passed", cliff}};
    passed = passed && cliff;
  }
  if (o.dimension) {
    const DimensionReport d = manifold_dimension(u);
    rep["manifold_dimension"] = {{"dimension", d.dimension}, {"rank", d.rank},         {"parameters", d.parameters},
                                 {"gap_ratio", d.gap_ratio}, {"fd_step", d.fd_step}, {"rank_tol", d.rank_tol}};
  }
  rep["passed"] = passed;
  std::cout << rep.dump(2) << "\n";
  if (!o.out.empty()) {
    run.write(o.out, rep.dump(2) + "\n");
    run.extra = {{"passed", passed}};
    run.manifest(o.out);
  }
  return passed ? kOk : kPredicateFailed;
}

// ---- kim --------------------------------------------------------------

struct KimOptions {
  GateSource gate;
  bool hadamard = false;
  std::string out;
};

int run_kim(const KimOptions& o, Run& run) {
  const KimParams p = kim_params(o.gate);
  const Gate u = o.hadamard ? hadamard_construction_gate(p) : kim_gate(p);
  json meta;
  meta["generator"] = o.hadamard ? "hadamard_construction" : "kicked_ising";
  meta["J"] = p.J;
  meta["b"] = p.b;
  meta["h"] = p.h;
  meta["tree_unitarity_residual"] = is_tree_unitary(u).max_residual();
  meta["clifford"] = is_clifford(u).has_value();
  run.write(o.out, gate_to_json(u, meta).dump(1) + "\n");
  run.extra = meta;
  run.manifest(o.out);
  std::cout << meta.dump(2) << "\n";
  return kOk;
}

// ---- corr -------------------------------------------------------------

struct CorrOptions {
  GateSource gate;
  int t = 4;
  std::string first = "B";
  std::string alpha = "X+Z";
  std::vector<std::string> betas{"X", "Y", "Z"};
  std::vector<std::string> targets;
  std::string heatmap;
  int heatmap_t = 2;
  std::string out;
};

std::string branch_label(const CayleyTree& tree, Vertex v) {
  const std::string id = tree.id(v);
  if (id.empty()) return "origin";
  return id.substr(0, id.find('.'));
}

int run_corr(const CorrOptions& o, Run& run) {
  const Gate u = load_gate(o.gate);
  run.seed = o.gate.seed;
  const OperatorBasis basis = build_basis(u.q());
  const Color first = parse_color(o.first);
  const OperatorVector alpha = vectorize(basis, parse_operator(o.alpha, basis));
  if (o.t < 1) throw InvalidArgument("--t must be >= 1");
  const TwoColoring c(CayleyTree(u.z(), o.t + 2, false));
  std::vector<Vertex> targets;
  if (o.targets.empty()) {
    const LightCone cone = spread(c, 0, o.t, first);
    std::size_t total = 0;
    for (const auto& f : cone.front) total += f.size();
    if (total > (1u << 16)) throw CapExceeded("corr: front too large; lower --t or pass --target");
    for (const auto& f : cone.front) targets.insert(targets.end(), f.begin(), f.end());
  } else {
    for (const auto& id : o.targets) targets.push_back(c.tree().from_id(id));
  }
  Csv csv({"t", "path_id", "alpha", "beta", "re", "im"});
  for (Vertex v : targets) {
    const LightConePath path = path_to_channel_sequence(c, 0, v, first);
    const auto steps = steps_for_path(path, u);
    for (const auto& b : o.betas) {
      const OperatorVector beta = vectorize(basis, parse_operator(b, basis));
      const cplx value = correlator_path(steps, alpha, beta, basis).values.back();
      csv.row({std::to_string(steps.size()), "\"" + c.tree().id(v) + "\"", o.alpha, b, num(value.real()),
               num(value.imag())});
    }
  }
  run.write(o.out, csv.str());
  if (!o.heatmap.empty()) {
    if (o.heatmap_t < 1 || o.heatmap_t > 2) throw Unsupported("--heatmap-t must be 1 or 2 (dense oracle)");
    const Matrix sigma = devectorize(basis, alpha);
    Csv heat({"site_id", "depth", "branch_label", "t", "log10_abs"});
    for (int t = 1; t <= o.heatmap_t; ++t) {
      const DenseRegion region = cluster_region(c, 0, t, first, u);
      const Matrix evolved = heisenberg_evolve(region, sigma, 0, t);
      for (Vertex v : region.vertices()) {
        double largest = 0;
        for (const auto& b : o.betas)
          largest = std::max(largest, std::abs(correlator_with(region, evolved, parse_operator(b, basis), v)));
        heat.row({"\"" + c.tree().id(v) + "\"", std::to_string(c.tree().depth_of(v)), branch_label(c.tree(), v),
                  std::to_string(t), num(std::log10(std::max(largest, 1e-300)))});
      }
    }
    run.write(o.heatmap, heat.str());
  }
  run.manifest(o.out);
  return kOk;
}

// ---- otoc -------------------------------------------------------------

struct OtocOptions {
  GateSource gate;
  int t = 60;
  int e = 1;
  int ee = 2;
  std::string target;
  std::string first = "B";
  std::string alpha = "X+Z";
  std::string beta = "Y";
  std::string out;
};

int run_otoc(const OtocOptions& o, Run& run) {
  const Gate u = load_gate(o.gate);
  run.seed = o.gate.seed;
  const OperatorBasis basis = build_basis(u.q());
  const OperatorVector alpha = vectorize(basis, parse_operator(o.alpha, basis));
  const OperatorVector beta = vectorize(basis, parse_operator(o.beta, basis));
  OtocSeries series;
  if (!o.target.empty()) {
    const auto depth = static_cast<int>(std::count(o.target.begin(), o.target.end(), '.')) + 1;
    const TwoColoring c(CayleyTree(u.z(), depth + 1, false));
    const auto steps =
        steps_for_path(path_to_channel_sequence(c, 0, c.tree().from_id(o.target), parse_color(o.first)), u);
    series = otoc_path(steps, alpha, beta, basis);
  } else {
    const OtocChannel channel = otoc_channel(u, o.e, o.ee, basis);
    series = otoc_power(channel, alpha, beta, basis, o.t);
    const OtocAsymptote limit = otoc_asymptote(channel, alpha, beta, basis);
    run.extra = {{"asymptote", limit.value}, {"unit_eigenvalues", limit.unit_eigenvalues}, {"fallback", limit.fallback}};
    std::cout << "asymptote " << num(limit.value) << " (" << limit.unit_eigenvalues << " unit eigenvalues)\n";
  }
  Csv csv({"t", "value"});
  for (std::size_t t = 0; t < series.values.size(); ++t) csv.row({std::to_string(t), num(series.values[t])});
  run.write(o.out, csv.str());
  run.manifest(o.out);
  return kOk;
}

// ---- entropy ----------------------------------------------------------

struct EntropyOptions {
  GateSource gate;
  int z = 3;
  int r = 7;
  int t = -1;
  int shift = 0;
  std::string tree = "unrooted";
  bool two_site = false;
  std::string out;
};

int run_entropy(const EntropyOptions& o, Run& run) {
  GateSource src = o.gate;
  src.z = o.two_site ? 2 : o.z;
  if (src.file.empty() && src.model != "kim" && src.model != "hadamard")
    throw Unsupported("entropy needs a Clifford gate");
  const Gate u = load_gate(src);
  const int max_t = o.t >= 0 ? o.t : o.r + 2;
  EntropyCurve curve = o.two_site ? entanglement_curve_2site(o.z, o.r, max_t, u)
                                  : entanglement_curve(o.tree == "rooted" ? TreeKind::Rooted : TreeKind::Unrooted,
                                                       o.z, o.r, max_t, o.shift, u);
  Csv csv({"t", "S_sim_ln2", "S_formula_ln2", "region_descriptor"});
  for (std::size_t t = 0; t < curve.simulated.size(); ++t)
    csv.row({std::to_string(t), std::to_string(curve.simulated[t]), num(curve.formula[t]), curve.descriptor()});
  run.write(o.out, csv.str());
  run.extra = {{"region_size", curve.region_size}, {"matches_formula", curve.matches()}};
  run.manifest(o.out);
  std::cout << curve.descriptor() << " region " << curve.region_size << " sites, formula "
            << (curve.matches() ? "matches" : "differs") << "\n";
  return kOk;
}

// ---- geom -------------------------------------------------------------

struct GeomOptions {
  std::string graph = "square";
  int n = 10;
  int dims = 2;
  int z = 3;
  int depth = 4;
  int p = 7;
  int q = 3;
  int radius = 2;
  std::string input;
  int i = 0;
  int j = -1;
  bool delta = false;
  int cap = 300;
  int pairs = 0;
  std::uint64_t seed = 0;
  std::string edges;
  std::string out;
};

GateGraph build_graph(const GeomOptions& o) {
  if (o.graph == "square") return square_lattice(o.n, false);
  if (o.graph == "plaquette") return square_lattice(o.n, true);
  if (o.graph == "grid") {
    const std::vector<int> sides(o.dims, o.n);
    return grid(sides);
  }
  if (o.graph == "tree") return tree_graph(CayleyTree(o.z, o.depth, false));
  if (o.graph == "cluster") return cluster_graph(TwoColoring(CayleyTree(o.z, o.depth, false)));
  if (o.graph == "tiling") return hyperbolic_tiling(o.p, o.q, o.radius).graph;
  std::ifstream in(o.input);
  if (!in) throw InvalidArgument("cannot read " + o.input);
  return read_edge_list(in);
}

int run_geom(const GeomOptions& o, Run& run) {
  run.seed = o.seed;
  const GateGraph g = build_graph(o);
  if (o.i < 0 || o.i >= g.size()) throw InvalidArgument("--i out of range");
  int j = o.j;
  if (j < 0) {
    const auto d = g.distances(o.i);
    j = static_cast<int>(std::max_element(d.begin(), d.end()) - d.begin());
  }
  const LevelSetReport levels = intersections(g, o.i, j);
  Csv csv({"s", "size"});
  const auto sizes = levels.sizes();
  for (std::size_t s = 0; s < sizes.size(); ++s) csv.row({std::to_string(s), std::to_string(sizes[s])});
  json rep;
  rep["graph"] = o.graph;
  rep["vertices"] = g.size();
  rep["edges"] = g.edge_count();
  rep["i"] = o.i;
  rep["j"] = j;
  rep["distance"] = levels.t;
  rep["max_intersection"] = levels.max_intersection;
  if (o.delta) {
    const HyperbolicityReport h = four_point_delta(g, o.cap);
    rep["delta"] = h.delta;
    rep["delta_definition"] = h.definition;
    rep["delta_witness"] = h.witness;
    if (o.pairs > 0) {
      Rng rng(o.seed);
      std::vector<std::pair<int, int>> pairs;
      for (int k = 0; k < o.pairs; ++k)
        pairs.push_back({static_cast<int>(rng.below(g.size())), static_cast<int>(rng.below(g.size()))});
      const IntersectionCheck check = bounded_intersection_check(g, pairs, h.delta);
      rep["intersection_check"] = {{"pairs", check.pairs},
                                   {"max_diameter", check.max_diameter},
                                   {"bound", check.bound},
                                   {"passed", check.passed},
                                   {"worst", check.worst}};
    }
  }
  run.write(o.out, csv.str());
  run.write(sibling(o.out, ".json"), rep.dump(2) + "\n");
  if (!o.edges.empty()) {
    std::ostringstream s;
    write_edge_list(g, s);
    run.write(o.edges, s.str());
  }
  run.extra = rep;
  run.manifest(o.out);
  std::cout << rep.dump(2) << "\n";
  return kOk;
}

// ---- bound ------------------------------------------------------------

struct BoundOptions {
  GateSource gate;
  int instances = 100;
  int t_max = 2;
  int pool = 4;
  std::string out;
};

int run_bound(const BoundOptions& o, Run& run) {
  if (o.t_max < 1 || o.t_max > 2) throw Unsupported("bound: --t-max must be 1 or 2 (dense oracle limit)");
  if (o.instances < 1 || o.pool < 1) throw InvalidArgument("bound: --instances and --pool must be >= 1");
  const std::uint64_t seed = o.gate.seed;
  run.seed = seed;
  std::vector<Gate> gates;
  for (int k = 0; k < (o.gate.file.empty() ? o.pool : 1); ++k) {
    GateSource src = o.gate;
    src.z = 3;
    src.seed = derive_seed(seed, k);
    gates.push_back(load_gate(src));
  }
  const int z = gates.front().z();
  const OperatorBasis basis = build_basis(2);
  const TwoColoring c(CayleyTree(z, o.t_max + 2, false));
  struct Row {
    int t;
    WeightReport weight;
    BoundReport bound;
  };
  std::vector<Row> rows;
  double worst_residual = 1e300, worst_mismatch = 0;
  for (int k = 0; k < o.instances; ++k) {
    Rng rng(derive_seed(seed ^ 0x5bd1e995u, k));
    const Gate& u = gates[k % gates.size()];
    if (u.q() != 2) throw Unsupported("bound requires q = 2");
    Matrix sigma = Matrix::Zero(2, 2);
    for (int a = 1; a < 4; ++a) sigma += rng.normal() * basis[a];
    sigma /= std::sqrt(overlap(sigma, sigma).real());
    const Color first = rng.below(2) ? Color::B : Color::A;
    for (int t = 1; t <= o.t_max; ++t) {
      const DenseRegion region = cluster_region(c, 0, t, first, u);
      const Matrix evolved = heisenberg_evolve(region, sigma, 0, t);
      const LightCone cone = spread(c, 0, t, first);
      const auto& front = cone.front[t - 1];
      std::vector<int> local;
      for (Vertex v : front) local.push_back(region.local(v));
      Row row{t, lightcone_weight(pauli_decompose(region, evolved, basis), 2, region.sites(), local),
              otoc_average_and_bound(region, evolved, front, basis)};
      worst_residual = std::min(worst_residual, row.bound.residual());
      worst_mismatch = std::max(worst_mismatch, std::abs(row.bound.o_direct - row.bound.o_coefficients));
      rows.push_back(std::move(row));
    }
  }
  std::size_t n_max = 0;
  for (const auto& r : rows) n_max = std::max(n_max, r.weight.w_n.size() - 1);
  std::vector<std::string> header{"t", "w"};
  for (std::size_t n = 1; n <= n_max; ++n) header.push_back("w_" + std::to_string(n));
  for (const char* h : {"R_size", "O_bar", "bound_lhs", "bound_rhs"}) header.push_back(h);
  Csv csv(header);
  for (const auto& r : rows) {
    std::vector<std::string> cells{std::to_string(r.t), num(r.weight.w)};
    for (std::size_t n = 1; n <= n_max; ++n) cells.push_back(num(n < r.weight.w_n.size() ? r.weight.w_n[n] : 0.0));
    cells.push_back(std::to_string(r.bound.region_size));
    cells.push_back(num(r.bound.o_direct));
    cells.push_back(num(r.bound.lhs));
    cells.push_back(num(r.bound.rhs));
    csv.row(cells);
  }
  run.write(o.out, csv.str());
  run.extra = {{"rows", rows.size()}, {"worst_bound_residual", worst_residual}, {"worst_o_bar_mismatch", worst_mismatch}};
  run.manifest(o.out);
  std::cout << run.extra.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"treelight: tree-unitary circuits on Cayley trees"};
  app.set_version_flag("--version", kVersion);
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  Run run;
  std::function<int()> action;

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a tree-unitary gate by alternating projections");
  gen_cmd->add_option("--q", gen.q)->check(CLI::Range(2, 4));
  gen_cmd->add_option("--z", gen.z)->check(CLI::Range(2, 5));
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--max-iterations", gen.max_iterations);
  gen_cmd->add_option("--tol", gen.tol, "Convergence tolerance");
  gen_cmd->add_option("--max-velocity", gen.max_velocity, "Impose a max-velocity direction i:j (repeatable)");
  gen_cmd->add_option("-o,--out", gen.out)->required();
  gen_cmd->callback([&] { action = [&] { return run_gen(gen, run); }; });

  CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "Check gate predicates; exit 1 if any fails");
  check_cmd->add_option("gate", check.gate)->required();
  check_cmd->add_option("--max-velocity", check.max_velocity, "Direction i:j (repeatable)");
  check_cmd->add_flag("--perfect", check.perfect);
  check_cmd->add_flag("--triunitary", check.triunitary);
  check_cmd->add_flag("--clifford", check.clifford);
  check_cmd->add_flag("--dimension", check.dimension, "Report the local manifold dimension");
  check_cmd->add_option("--tol", check.tol);
  check_cmd->add_option("-o,--out", check.out);
  check_cmd->callback([&] { action = [&] { return run_check(check, run); }; });

  KimOptions kim;
  auto* kim_cmd = app.add_subcommand("kim", "Write a kicked-Ising or Hadamard-construction gate");
  kim_cmd->add_option("--z", kim.gate.z)->check(CLI::Range(2, 6));
  kim_cmd->add_option("--J", kim.gate.J);
  kim_cmd->add_option("--b", kim.gate.b);
  kim_cmd->add_option("--field", kim.gate.h);
  kim_cmd->add_flag("--hadamard", kim.hadamard);
  kim_cmd->add_option("-o,--out", kim.out)->required();
  kim_cmd->callback([&] { action = [&] { return run_kim(kim, run); }; });

  CorrOptions corr;
  auto* corr_cmd = app.add_subcommand("corr", "Light-cone correlators from channel products");
  add_gate_options(corr_cmd, corr.gate);
  corr_cmd->add_option("--t", corr.t, "Largest arrival time");
  corr_cmd->add_option("--first", corr.first, "First layer color A or B");
  corr_cmd->add_option("--alpha", corr.alpha);
  corr_cmd->add_option("--beta", corr.betas);
  corr_cmd->add_option("--target", corr.targets, "Vertex id such as 0.1.1 (repeatable)");
  corr_cmd->add_option("--heatmap", corr.heatmap, "Dense-oracle heatmap CSV");
  corr_cmd->add_option("--heatmap-t", corr.heatmap_t);
  corr_cmd->add_option("-o,--out", corr.out)->required();
  corr_cmd->callback([&] { action = [&] { return run_corr(corr, run); }; });

  OtocOptions otoc;
  auto* otoc_cmd = app.add_subcommand("otoc", "Light-cone OTOC series");
  add_gate_options(otoc_cmd, otoc.gate);
  otoc_cmd->add_option("--t", otoc.t);
  otoc_cmd->add_option("--e", otoc.e, "In-leg of the repeated channel");
  otoc_cmd->add_option("--ee", otoc.ee, "Out-leg of the repeated channel");
  otoc_cmd->add_option("--target", otoc.target, "Follow the light-cone path to this vertex instead");
  otoc_cmd->add_option("--first", otoc.first);
  otoc_cmd->add_option("--alpha", otoc.alpha);
  otoc_cmd->add_option("--beta", otoc.beta);
  otoc_cmd->add_option("-o,--out", otoc.out)->required();
  otoc_cmd->callback([&] { action = [&] { return run_otoc(otoc, run); }; });

  EntropyOptions ent;
  auto* ent_cmd = app.add_subcommand("entropy", "Entanglement growth of a Clifford circuit from GHZ states");
  add_gate_options(ent_cmd, ent.gate, false);
  ent_cmd->add_option("--z", ent.z, "Tree coordination number")->check(CLI::Range(3, 6));
  ent_cmd->add_option("--r", ent.r, "Region radius");
  ent_cmd->add_option("--t", ent.t, "Largest time (default r + 2)");
  ent_cmd->add_option("--shift", ent.shift, "Parity shift 0 or 1")->check(CLI::Range(0, 1));
  ent_cmd->add_option("--tree", ent.tree)->check(CLI::IsMember({"unrooted", "rooted"}));
  ent_cmd->add_flag("--two-site", ent.two_site, "2-site gates with Bell pairs");
  ent_cmd->add_option("-o,--out", ent.out)->required();
  ent_cmd->callback([&] { action = [&] { return run_entropy(ent, run); }; });

  GeomOptions geom;
  auto* geom_cmd = app.add_subcommand("geom", "Level-set intersections and hyperbolicity of gate graphs");
  geom_cmd->add_option("--graph", geom.graph)
      ->check(CLI::IsMember({"square", "plaquette", "grid", "tree", "cluster", "tiling", "file"}));
  geom_cmd->add_option("--n", geom.n, "Side length");
  geom_cmd->add_option("--dims", geom.dims, "Grid dimension");
  geom_cmd->add_option("--z", geom.z);
  geom_cmd->add_option("--depth", geom.depth);
  geom_cmd->add_option("--p", geom.p);
  geom_cmd->add_option("--q", geom.q);
  geom_cmd->add_option("--radius", geom.radius, "Tiling face radius");
  geom_cmd->add_option("--input", geom.input, "Edge-list file for --graph file");
  geom_cmd->add_option("--i", geom.i);
  geom_cmd->add_option("--j", geom.j, "Default: a vertex farthest from i");
  geom_cmd->add_flag("--delta", geom.delta, "Compute the four-point delta");
  geom_cmd->add_option("--cap", geom.cap, "Vertex cap for the delta computation");
  geom_cmd->add_option("--pairs", geom.pairs, "Sampled pairs for the intersection-diameter check");
  geom_cmd->add_option("--seed", geom.seed);
  geom_cmd->add_option("--edges", geom.edges, "Also write the edge list");
  geom_cmd->add_option("-o,--out", geom.out)->required();
  geom_cmd->callback([&] { action = [&] { return run_geom(geom, run); }; });

  BoundOptions bound;
  auto* bound_cmd = app.add_subcommand("bound", "Light-cone weights and the averaged-OTOC bound");
  add_gate_options(bound_cmd, bound.gate, false);
  bound.gate.model = "generated";
  bound_cmd->add_option("--instances", bound.instances);
  bound_cmd->add_option("--t-max", bound.t_max);
  bound_cmd->add_option("--pool", bound.pool, "Number of distinct gates");
  bound_cmd->add_option("-o,--out", bound.out)->required();
  bound_cmd->callback([&] { action = [&] { return run_bound(bound, run); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }
  for (auto* sub : app.get_subcommands()) {
    run.subcommand = sub->get_name();
    run.app = sub;
  }
  try {
    return action();
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
