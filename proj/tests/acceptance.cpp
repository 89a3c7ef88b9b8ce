// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion with
// supporting detail lines; exits nonzero when any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

#include "treelight/channels.hpp"
#include "treelight/gate_generation.hpp"
#include "treelight/gate_io.hpp"
#include "treelight/graph_hyperbolicity.hpp"
#include "treelight/oracle.hpp"
#include "treelight/rng.hpp"
#include "treelight/stabilizer_sim.hpp"

namespace fs = std::filesystem;
using namespace treelight;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void info(const std::string& what) { notes.push_back("info " + what); }
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

const OperatorBasis& qubit_basis() {
  static const OperatorBasis b = build_basis(2);
  return b;
}

Matrix unit_sum(std::initializer_list<int> labels) {
  Matrix m = Matrix::Zero(2, 2);
  for (int a : labels) m += qubit_basis()[a];
  return m / std::sqrt(static_cast<double>(labels.size()));
}

// Tree-unitary gates from consecutive seeds, shared by several criteria.
struct GatePool {
  std::vector<Gate> converged;
  std::vector<std::uint64_t> seeds;
  int attempted = 0;
  int fixed_point_failures = 0;
  double worst_fixed_point = 0;
  int max_sweeps = 0;
};

GatePool& pool() {
  static GatePool p = [] {
    GatePool g;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      ++g.attempted;
      GenerationConfig cfg;
      cfg.seed = seed;
      try {
        GenerationResult r = generate_tree_unitary(cfg);
        if (!is_tree_unitary(r.gate, 1e-10).passed) continue;
        const double moved = (project_tc(r.gate.matrix(), 2, 3) - r.gate.matrix()).cwiseAbs().maxCoeff();
        g.worst_fixed_point = std::max(g.worst_fixed_point, moved);
        if (moved >= 1e-12) ++g.fixed_point_failures;
        g.max_sweeps = std::max(g.max_sweeps, r.iterations);
        g.converged.push_back(r.gate);
        g.seeds.push_back(seed);
      } catch (const Diverged&) {
      }
    }
    return g;
  }();
  return p;
}

Gate haar(std::uint64_t seed) { return Gate(2, 3, random_unitary(8, seed)); }

Gate dressed_dual_unitary(int s) {
  const Gate core = kim_gate({2, kPi / 4, kPi / 4, {0.3 * s, 0.7}});
  const std::vector<Matrix> out{random_unitary(2, s * 10 + 1), random_unitary(2, s * 10 + 2)};
  const std::vector<Matrix> in{random_unitary(2, s * 10 + 3), random_unitary(2, s * 10 + 4)};
  return dress(core, out, in);
}

// ---------------------------------------------------------------------------

Outcome kim_tree_unitarity() {
  Outcome o;
  for (int z : {3, 4}) {
    const PredicateReport r = is_tree_unitary(kim_gate({z, kPi / 4, kPi / 4, {}}));
    o.require(r.passed && r.max_residual() < 1e-12 && static_cast<int>(r.labels.size()) == z + 1,
              fmt("z=%d: %zu conditions, max residual %.2e", z, r.labels.size(), r.max_residual()));
  }
  return o;
}

Outcome generation() {
  Outcome o;
  const GatePool& p = pool();
  const int ok = static_cast<int>(p.converged.size());
  o.require(ok >= 95, fmt("%d of %d seeds converged to residual < 1e-10 (max %d sweeps)", ok, p.attempted,
                          p.max_sweeps));
  o.require(p.fixed_point_failures == 0,
            fmt("fixed points of project_tc: worst entry change %.2e", p.worst_fixed_point));
  return o;
}

Outcome manifold() {
  Outcome o;
  const GatePool& p = pool();
  int exact = 0;
  double worst_gap = 1e300;
  std::ostringstream dims;
  for (int k = 0; k < 10 && k < static_cast<int>(p.converged.size()); ++k) {
    const DimensionReport d = manifold_dimension(p.converged[k]);
    dims << d.dimension << ' ';
    if (d.dimension == 37) ++exact;
    worst_gap = std::min(worst_gap, d.gap_ratio);
  }
  o.require(exact == 10, "dimensions " + dims.str());
  o.require(worst_gap >= 10, fmt("smallest gap ratio %.3g", worst_gap));
  return o;
}

struct InteriorScan {
  double interior = 0;
  bool fraction_ok = true;
};

InteriorScan scan_interior(const Gate& u, bool check_fraction) {
  const OperatorBasis& basis = qubit_basis();
  const TwoColoring c(CayleyTree(3, 5, false));
  const Matrix sigma = unit_sum({1, 3});
  InteriorScan s;
  for (Color first : {Color::A, Color::B})
    for (int t = 1; t <= 2; ++t) {
      const DenseRegion region = cluster_region(c, 0, t, first, u);
      const Matrix evolved = heisenberg_evolve(region, sigma, 0, t);
      const LightCone cone = spread(c, 0, t, first);
      const auto& front = cone.front[t - 1];
      std::set<std::string> branches;
      for (Vertex v : region.vertices()) {
        double largest = 0;
        for (int b = 1; b < 4; ++b) largest = std::max(largest, std::abs(correlator_with(region, evolved, basis[b], v)));
        if (std::find(front.begin(), front.end(), v) == front.end()) {
          s.interior = std::max(s.interior, largest);
        } else if (largest > 1e-10) {
          branches.insert(c.tree().id(v).substr(0, 1));
        }
      }
      const std::size_t expected = first == c.hub_color(0) ? 2 : 1;
      if (check_fraction && branches.size() != expected) s.fraction_ok = false;
    }
  return s;
}

Outcome interior_correlators() {
  Outcome o;
  const GatePool& p = pool();
  double worst_tree = 0;
  bool fractions = true;
  for (int k = 0; k < 20; ++k) {
    const InteriorScan s = scan_interior(p.converged[k], true);
    worst_tree = std::max(worst_tree, s.interior);
    fractions = fractions && s.fraction_ok;
  }
  o.require(worst_tree < 1e-10, fmt("20 tree-unitary gates: largest interior |C| = %.2e at t <= 2", worst_tree));
  o.require(fractions, "nonzero cone fraction is 2/3 with the hub color first and 1/3 otherwise");
  int generic_nonzero = 0;
  double smallest = 1e300;
  for (int k = 0; k < 20; ++k) {
    const double m = scan_interior(haar(1000 + k), false).interior;
    smallest = std::min(smallest, m);
    if (m > 1e-3) ++generic_nonzero;
  }
  o.require(generic_nonzero == 20,
            fmt("20 Haar gates: %d show interior |C| > 1e-3 (smallest maximum %.3g)", generic_nonzero, smallest));
  return o;
}

struct Agreement {
  double corr = 0;
  double otoc = 0;
};

Agreement channel_vs_oracle(const Gate& u) {
  const OperatorBasis& basis = qubit_basis();
  const TwoColoring c(CayleyTree(3, 5, false));
  const Matrix sigma = unit_sum({1, 3});
  const OperatorVector alpha = vectorize(basis, sigma);
  Agreement a;
  for (Color first : {Color::A, Color::B})
    for (int t = 1; t <= 2; ++t) {
      const DenseRegion region = cluster_region(c, 0, t, first, u);
      const Matrix evolved = heisenberg_evolve(region, sigma, 0, t);
      const LightCone cone = spread(c, 0, t, first);
      for (Vertex j : cone.front[t - 1]) {
        const auto steps = steps_for_path(path_to_channel_sequence(c, 0, j, first), u);
        for (int b = 1; b < 4; ++b) {
          const OperatorVector beta = vectorize(basis, basis[b]);
          a.corr = std::max(a.corr, std::abs(correlator_path(steps, alpha, beta, basis).values.back() -
                                             correlator_with(region, evolved, basis[b], j)));
          a.otoc = std::max(a.otoc, std::abs(otoc_path(steps, alpha, beta, basis).values.back() -
                                             otoc_with(region, evolved, basis[b], j)));
        }
      }
    }
  return a;
}

Outcome channel_agreement() {
  Outcome o;
  std::vector<std::pair<std::string, Gate>> gates;
  gates.push_back({"kicked Ising h=0", kim_gate({3, kPi / 4, kPi / 4, {}})});
  gates.push_back({"kicked Ising generic h", kim_gate({3, kPi / 4, kPi / 4, {0.3, 0.5, 0.7}})});
  gates.push_back({"Hadamard construction", hadamard_construction_gate({3, kPi / 4, kPi / 4, {0.3, 0.5, 0.7}})});
  gates.push_back({"dual-unitary pair", dual_pair(dressed_dual_unitary(1), dressed_dual_unitary(2))});
  std::vector<Matrix> targets;
  for (int k = 0; k < 4; ++k) targets.push_back(random_unitary(2, 100 + k));
  gates.push_back({"controlled swap", controlled_swap(3, targets)});
  GenerationConfig tri_cfg;
  tri_cfg.seed = 42;
  const Gate tri = generate_with_constraints(2, 3, triunitary_constraints(2), tri_cfg).gate;
  gates.push_back({"triunitary + swap(1,2)", triunitary_derived(tri, SwapChoice::Legs12)});
  gates.push_back({"triunitary + swap(2,3)", triunitary_derived(tri, SwapChoice::Legs23)});
  gates.push_back({"generated tree-unitary", pool().converged.front()});
  GenerationConfig mv_cfg;
  mv_cfg.seed = 7;
  mv_cfg.max_velocity = {{2, 3}};
  gates.push_back({"generated max-velocity", generate_tree_unitary(mv_cfg).gate});
  for (int k = 0; k < 10; ++k) gates.push_back({fmt("Haar %d", k), haar(2000 + k)});
  double worst = 0;
  for (const auto& [name, u] : gates) {
    const Agreement a = channel_vs_oracle(u);
    worst = std::max({worst, a.corr, a.otoc});
    if (name.rfind("Haar", 0) != 0 || name == "Haar 0")
      o.info(fmt("%-24s corr %.1e  otoc %.1e", name.c_str(), a.corr, a.otoc));
  }
  o.require(worst < 1e-10, fmt("%zu gates, t in {1,2}, both first colors: worst deviation %.2e", gates.size(), worst));
  return o;
}

// Channel sequence of the straight path through slot-1 children, continued
// periodically to the requested length.
std::vector<ChannelStep> straight_path(const Gate& u, int length) {
  const TwoColoring c(CayleyTree(3, 12, false));
  Vertex v = 0;
  for (int d = 0; d < 11; ++d) v = c.tree().child(v, 1);
  std::vector<ChannelStep> steps = steps_for_path(path_to_channel_sequence(c, 0, v, Color::B), u);
  for (std::size_t k = 2; k < steps.size(); ++k)
    if (steps[k].e != steps[1].e || steps[k].ee != steps[1].ee) throw NumericalFailure("path is not periodic");
  steps.resize(length, steps.back());
  return steps;
}

Outcome otoc_asymptotics() {
  Outcome o;
  const OperatorBasis& basis = qubit_basis();
  const OperatorVector alpha = vectorize(basis, unit_sum({1, 3}));
  const OperatorVector y = vectorize(basis, basis[2]);
  const OperatorVector yz = vectorize(basis, unit_sum({2, 3}));

  int close = 0;
  double worst = 0, worst_limit = 0;
  std::ostringstream devs;
  for (int k = 0; k < 10; ++k) {
    const Gate& u = pool().converged[k];
    const double v = otoc_path(straight_path(u, 60), alpha, y, basis).values.back();
    devs << fmt("%.1e ", std::abs(v - 1));
    worst = std::max(worst, std::abs(v - 1));
    if (std::abs(v - 1) < 1e-6) ++close;
    worst_limit = std::max(worst_limit, std::abs(otoc_asymptote(otoc_channel(u, 1, 3, basis), alpha, y, basis).value - 1));
  }
  o.require(close == 10, fmt("generic tree-unitary, t=60 along a light-cone path: %d of 10 within 1e-6 of 1", close));
  o.info("  |value - 1| per gate: " + devs.str());
  o.info(fmt("  spectral limit of the path channel: worst |limit - 1| = %.1e", worst_limit));

  double mv_worst = 0;
  int mv_gates = 0, reseeds = 0;
  for (std::uint64_t seed = 7; mv_gates < 5 && seed < 40; ++seed) {
    GenerationConfig cfg;
    cfg.seed = seed;
    cfg.max_velocity = {{2, 3}};
    std::optional<Gate> u;
    try {
      u = generate_tree_unitary(cfg).gate;
    } catch (const Diverged&) {
      ++reseeds;
      continue;
    }
    ++mv_gates;
    const OtocChannel t = otoc_channel(*u, 2, 3, basis);
    mv_worst = std::max(mv_worst, std::abs(otoc_power(t, alpha, y, basis, 60).values.back() + 1.0 / 3));
  }
  o.require(mv_gates == 5 && mv_worst < 1e-6,
            fmt("max-velocity gates (%d, %d reseeds), direction 2->3, t=60: worst |value + 1/3| = %.2e", mv_gates,
                reseeds, mv_worst));

  const std::vector<double> fields{0.3, 0.5, 0.7};
  for (bool hadamard : {false, true}) {
    const KimParams p{3, kPi / 4, kPi / 4, fields};
    const Gate u = hadamard ? hadamard_construction_gate(p) : kim_gate(p);
    const OtocChannel t = otoc_channel(u, 1, 3, basis);
    const double vy = otoc_asymptote(t, alpha, y, basis).value;
    const double vyz = otoc_asymptote(t, alpha, yz, basis).value;
    const char* name = hadamard ? "Hadamard construction" : "kicked Ising";
    o.require(std::abs(vy + 0.5) < 1e-8 && std::abs(vyz + 0.25) < 1e-8,
              fmt("%s, h=(0.3,0.5,0.7): beta=Y %.10f, beta=(Y+Z)/sqrt2 %.10f", name, vy, vyz));
  }
  const OtocChannel clifford = otoc_channel(kim_gate({3, kPi / 4, kPi / 4, {}}), 1, 3, basis);
  o.info(fmt("kicked Ising h=0 (Clifford): beta=Y %.6f, beta=(Y+Z)/sqrt2 %.6f, %d unit eigenvalues",
             otoc_asymptote(clifford, alpha, y, basis).value, otoc_asymptote(clifford, alpha, yz, basis).value,
             count_unit_eigenvalues(clifford.matrix)));
  return o;
}

std::string curve_text(const std::vector<std::int64_t>& v) {
  std::ostringstream s;
  for (auto x : v) s << x << ' ';
  return s.str();
}

Outcome entanglement() {
  Outcome o;
  const Gate g = kim_gate({3, kPi / 4, kPi / 4, {}});
  for (int shift : {0, 1}) {
    const EntropyCurve c = entanglement_curve(TreeKind::Unrooted, 3, 7, 9, shift, g);
    o.require(c.matches(), c.descriptor() + " S = " + curve_text(c.simulated));
  }
  const EntropyCurve rooted = entanglement_curve(TreeKind::Rooted, 3, 7, 9, 0, g);
  o.require(rooted.matches(), rooted.descriptor() + " S = " + curve_text(rooted.simulated));
  const EntropyCurve shifted = entanglement_curve(TreeKind::Rooted, 3, 7, 9, 1, g);
  std::ostringstream f;
  for (double x : shifted.formula) f << x << ' ';
  o.info(shifted.descriptor() + (shifted.matches() ? " matches" : " differs") + ": S = " + curve_text(shifted.simulated) +
         "formula " + f.str());
  const EntropyCurve two = entanglement_curve_2site(3, 10, 11, kim_gate({2, kPi / 4, kPi / 4, {}}));
  bool closed_form = true;
  for (int t = 0; t < static_cast<int>(two.simulated.size()); ++t) {
    const int s = std::min(t, 10);
    closed_form = closed_form && two.simulated[t] == (1 << 10) + (1 << 11) - (1 << (11 - s));
  }
  o.require(two.matches() && closed_form, two.descriptor() + " S = " + curve_text(two.simulated));
  return o;
}

Outcome weight_and_bound() {
  Outcome o;
  const OperatorBasis& basis = qubit_basis();
  const TwoColoring c(CayleyTree(3, 5, false));
  std::vector<std::pair<Gate, bool>> gates;  // gate, tree-unitary
  for (int k = 0; k < 8; ++k) gates.push_back({pool().converged[k], true});
  for (int k = 0; k < 8; ++k) gates.push_back({haar(3000 + k), false});
  Rng rng(20240601);
  auto random_sigma = [&] {
    Matrix s = Matrix::Zero(2, 2);
    for (int a = 1; a < 4; ++a) s += rng.normal() * basis[a];
    return Matrix(s / std::sqrt(overlap(s, s).real()));
  };
  const int instances = 1000;
  double worst_w = 0, worst_mismatch = 0, worst_residual = 1e300;
  for (int k = 0; k < instances; ++k) {
    const auto& [u, tree] = gates[rng.below(gates.size())];
    const Color first = rng.below(2) ? Color::A : Color::B;
    const int t = 1 + static_cast<int>(rng.below(2));
    const Matrix sigma = random_sigma();
    const DenseRegion region = cluster_region(c, 0, t, first, u);
    const Matrix evolved = heisenberg_evolve(region, sigma, 0, t);
    const LightCone cone = spread(c, 0, t, first);
    const BoundReport b = otoc_average_and_bound(region, evolved, cone.front[t - 1], basis);
    worst_mismatch = std::max(worst_mismatch, std::abs(b.o_direct - b.o_coefficients));
    worst_residual = std::min(worst_residual, b.residual());
    if (tree) worst_w = std::max(worst_w, std::abs(b.w - 1));
  }
  for (int k = 0; k < 8; ++k) {
    const GateAssignment gate = [&, k](const Cluster&, int) { return pool().converged[k]; };
    for (Color first : {Color::A, Color::B})
      worst_w = std::max(worst_w, std::abs(front_weight_at(c, 0, 3, first, gate, random_sigma(), basis) - 1));
  }
  o.require(worst_w < 1e-10, fmt("tree-unitary light-cone weight at t <= 3: worst |w - 1| = %.2e", worst_w));
  o.require(worst_mismatch < 1e-10, fmt("O_bar direct vs from weights: worst difference %.2e", worst_mismatch));
  o.require(worst_residual >= -1e-10,
            fmt("%d instances (tree-unitary and Haar, t in {1,2}): smallest 1-O - bound = %.3g", instances,
                worst_residual));
  return o;
}

Outcome geometry() {
  Outcome o;
  const GateGraph square = square_lattice(21, false);
  bool linear = true;
  for (int a = 0; a <= 20; ++a) linear = linear && intersections(square, 0, a * 21 + a).max_intersection == a + 1;
  o.require(linear, "square lattice: |I(i,j,a)| = a + 1 for a <= 20");
  bool tree_zero = true;
  for (int depth = 1; depth <= 6; ++depth)
    tree_zero = tree_zero && four_point_delta(tree_graph(CayleyTree(3, depth, false))).delta == 0;
  o.require(tree_zero, "tree four-point delta = 0 for depth 1..6 (z=3)");
  std::ostringstream deltas;
  bool increasing = true;
  double previous = -1;
  for (int n = 3; n <= 12; ++n) {
    const double d = four_point_delta(square_lattice(n, false)).delta;
    deltas << d << ' ';
    increasing = increasing && d > previous;
    previous = d;
  }
  o.require(increasing, "grid delta for n = 3..12: " + deltas.str());
  const TilingPatch patch = hyperbolic_tiling(7, 3, 2);
  const HyperbolicityReport h = four_point_delta(patch.graph);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < patch.graph.size(); ++i)
    for (int j = i + 1; j < patch.graph.size(); ++j) pairs.push_back({i, j});
  const IntersectionCheck check = bounded_intersection_check(patch.graph, pairs, h.delta);
  o.require(check.passed, fmt("{7,3} patch (%d faces, %d vertices), %d pairs: max diameter %d <= 2 delta = %.1f",
                              patch.faces, patch.graph.size(), check.pairs, check.max_diameter, check.bound));
  o.info(fmt("cluster-clique graph delta (z=3, depth 3): %.1f",
             four_point_delta(cluster_graph(TwoColoring(CayleyTree(3, 3, false)))).delta));
  return o;
}

Outcome light_cone_timing() {
  Outcome o;
  for (int z : {3, 4}) {
    const TwoColoring c(CayleyTree(z, 7, false));
    const Vertex inner = c.tree().level_start(6);  // vertices at depth <= 5
    long checked = 0, violations = 0;
    for (Color first : {Color::A, Color::B})
      for (Vertex i = 0; i < inner; ++i) {
        const auto times = arrival_times_bfs(c, i, first, 14);
        for (Vertex j = 0; j < inner; ++j) {
          if (j == i) continue;
          const int r = c.tree().distance(i, j);
          ++checked;
          if (times[j] < r - 1 || times[j] > r + 1) ++violations;
        }
      }
    o.require(violations == 0, fmt("z=%d: %ld ordered pairs at depth <= 5, both first colors, %ld outside [r-1, r+1]",
                                   z, checked, violations));
  }
  return o;
}

int run_command(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_reproducibility(const std::string& cli) {
  Outcome o;
  if (cli.empty() || !fs::exists(cli)) {
    o.require(false, "CLI binary not given");
    return o;
  }
  const fs::path root = fs::temp_directory_path() / ("treelight_acceptance_" + std::to_string(::getpid()));
  struct Invocation {
    std::string args;
    int expected;
  };
  const std::vector<Invocation> suite{
      {"gen --q 2 --z 3 --seed 42 -o gate.json", 0},
      {"check gate.json --max-velocity 2:1", 1},
      {"check gate.json -o check.json", 0},
      {"kim --z 3 --J pi/4 --b pi/4 -o kim.json", 0},
      {"corr --model kim --field 0.3,0.5,0.7 --t 3 --heatmap heat.csv -o corr.csv", 0},
      {"otoc --gate gate.json --t 60 --e 1 --ee 3 -o otoc.csv", 0},
      {"entropy --model kim --z 3 --r 7 --tree unrooted -o ee.csv", 0},
      {"entropy --model kim --z 3 --r 10 --two-site --t 11 -o ee2.csv", 0},
      {"geom --graph tiling --radius 2 --delta --pairs 300 --seed 5 -o tiling.csv", 0},
      {"geom --graph square --n 21 --i 0 --j 440 -o square.csv", 0},
      {"bound --instances 20 --seed 3 -o bound.csv", 0},
  };
  for (const char* run : {"run1", "run2"}) {
    const fs::path dir = root / run;
    fs::create_directories(dir);
    for (const auto& inv : suite) {
      const int code = run_command("cd '" + dir.string() + "' && '" + cli + "' " + inv.args);
      if (code != inv.expected)
        o.require(false, fmt("%s: '%s' exited %d, expected %d", run, inv.args.c_str(), code, inv.expected));
    }
  }
  int compared = 0, differing = 0;
  for (const auto& entry : fs::directory_iterator(root / "run1")) {
    const std::string name = entry.path().filename().string();
    if (name.find(".manifest.json") != std::string::npos) continue;
    ++compared;
    const fs::path twin = root / "run2" / name;
    if (!fs::exists(twin) || read_file(entry.path()) != read_file(twin)) {
      ++differing;
      o.notes.push_back("FAIL differs: " + name);
    }
  }
  o.require(compared > 0 && differing == 0, fmt("%d output files byte-identical across two runs", compared));
  int manifests = 0;
  for (const auto& entry : fs::directory_iterator(root / "run1"))
    if (entry.path().string().ends_with(".manifest.json")) ++manifests;
  o.require(manifests >= 10, fmt("%d run manifests written", manifests));

  std::istringstream ee(read_file(root / "run1" / "ee.csv"));
  std::string line;
  std::getline(ee, line);
  bool even_ok = true;
  int rows = 0;
  while (std::getline(ee, line)) {
    std::istringstream cells(line);
    std::string t, s;
    std::getline(cells, t, ',');
    std::getline(cells, s, ',');
    const int tt = std::stoi(t);
    if (tt % 2 == 0 && tt <= 6) even_ok = even_ok && std::stod(s) == 384.0 * (1 - std::ldexp(1.0, -tt));
    ++rows;
  }
  o.require(even_ok && rows > 0, "entropy CLI: S = 384(1 - 2^-t) at even t < r");
  fs::remove_all(root);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"kicked Ising tree-unitarity", kim_tree_unitarity},
      {"generation convergence", generation},
      {"manifold dimension 37", manifold},
      {"vanishing interior correlators", interior_correlators},
      {"channel and oracle agreement", channel_agreement},
      {"OTOC asymptotics", otoc_asymptotics},
      {"entanglement formulas", entanglement},
      {"light-cone weight and OTOC bound", weight_and_bound},
      {"level sets and hyperbolicity", geometry},
      {"light-cone timing", light_cone_timing},
      {"CLI reproducibility", [&] { return cli_reproducibility(cli); }},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2zu %s  %s (%.1f s)\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first.c_str(),
                seconds);
    for (const auto& n : o.notes) std::printf("      %s\n", n.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
