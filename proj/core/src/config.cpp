#include "cho/config.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "cho/io.hpp"

namespace cho {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"run", {"name", "output_dir", "snapshot_stride"}},
      {"domain", {"dim", "length", "height", "cells", "cells_y"}},
      {"time", {"final_time", "steps"}},
      {"physics", {"tau", "gamma"}},
      {"potential", {"kind", "c1", "convex", "concave", "eps_yosida"}},
      {"boundary_potential", {"kind", "c1", "convex", "concave"}},
      {"solver", {"scheme", "newton_tol", "newton_max_iter", "interior_safeguard"}},
      {"initial", {"field"}},
      {"control", {"bulk", "boundary", "frequency"}},
      {"cost",
       {"alpha1", "alpha2", "alpha3", "alpha4", "alpha5", "alpha6", "target_q", "target_sigma",
        "target_omega", "target_gamma"}},
      {"box", {"u_min", "u_max", "ug_min", "ug_max", "derivative_budget", "neighborhood"}},
      {"optimizer",
       {"armijo_c1", "backtrack", "initial_step", "max_iter", "max_backtracks", "tol",
        "bb_warm_start"}},
      {"verify",
       {"taylor_directions", "gradient_directions", "eps_list", "dependence_scales", "seed",
        "energy_steps"}},
  };
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// "section.key" -> line number, for diagnostics.
std::map<std::string, int> index_lines(const std::string& text) {
  std::map<std::string, int> lines;
  std::istringstream in(text);
  std::string line, section;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == ';' || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      lines.emplace(section, number);
      continue;
    }
    const auto eq = t.find('=');
    if (eq != std::string::npos) lines.emplace(section + "." + trim(t.substr(0, eq)), number);
  }
  return lines;
}

double to_double(const std::string& s) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw std::invalid_argument("expected a number, got '" + t + "'");
  }
  return v;
}

long to_integer(const std::string& s) {
  const std::string t = trim(s);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw std::invalid_argument("expected an integer, got '" + t + "'");
  }
  return v;
}

std::vector<double> to_list(const std::string& s) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(to_double(item));
  }
  return out;
}

std::string format(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string format(const std::vector<double>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + format(v[k]);
  return out;
}

class Reader {
 public:
  Reader(const pt::ptree& tree, std::map<std::string, int> lines)
      : tree_(tree), lines_(std::move(lines)) {}

  int line(const std::string& key) const {
    const auto it = lines_.find(key);
    return it == lines_.end() ? 0 : it->second;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(key + ": " + what, line(key));
  }

  template <class T, class Parse>
  void read(const std::string& key, T& target, Parse parse) const {
    const auto raw = tree_.get_optional<std::string>(key);
    if (!raw) return;
    try {
      target = parse(*raw);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(key, e.what());
    }
  }

  void number(const std::string& key, double& target) const { read(key, target, to_double); }
  void integer(const std::string& key, int& target) const {
    read(key, target, [](const std::string& s) { return static_cast<int>(to_integer(s)); });
  }
  void text(const std::string& key, std::string& target) const {
    read(key, target, [](const std::string& s) { return trim(s); });
  }
  void list(const std::string& key, std::vector<double>& target) const {
    read(key, target, to_list);
  }
  void field(const std::string& key, FieldSpec& target) const { read(key, target, parse_field); }
  void flag(const std::string& key, bool& target) const {
    read(key, target, [](const std::string& s) {
      const std::string t = trim(s);
      if (t == "true" || t == "1" || t == "yes") return true;
      if (t == "false" || t == "0" || t == "no") return false;
      throw std::invalid_argument("expected true or false, got '" + t + "'");
    });
  }

  void require(bool ok, const std::string& key, const std::string& what) const {
    if (!ok) fail(key, what);
  }

 private:
  const pt::ptree& tree_;
  std::map<std::string, int> lines_;
};

PotentialKind parse_kind(const std::string& s) {
  const std::string t = trim(s);
  if (t == "regular") return PotentialKind::regular;
  if (t == "logarithmic") return PotentialKind::logarithmic;
  if (t == "custom") return PotentialKind::custom;
  throw std::invalid_argument("unknown potential kind '" + t + "'");
}

void read_potential(const Reader& r, const std::string& section, PotentialConfig& p) {
  r.read(section + ".kind", p.kind, parse_kind);
  r.number(section + ".c1", p.c1);
  r.list(section + ".convex", p.convex);
  r.list(section + ".concave", p.concave);
  if (p.kind == PotentialKind::logarithmic) {
    r.require(p.c1 > 1.0, section + ".c1", "logarithmic potential needs c1 > 1");
  }
  if (p.kind == PotentialKind::custom) {
    try {
      make_potential(p);
    } catch (const InvalidArgument& e) {
      r.fail(section + ".convex", e.what());
    }
  }
}

void write_potential(std::ostream& out, const PotentialConfig& p) {
  out << "kind = " << to_string(p.kind) << "\n";
  out << "c1 = " << format(p.c1) << "\n";
  if (!p.convex.empty()) out << "convex = " << format(p.convex) << "\n";
  if (!p.concave.empty()) out << "concave = " << format(p.concave) << "\n";
}

std::vector<std::array<double, 2>> boundary_points(const BulkSurfaceMesh& mesh) {
  std::vector<std::array<double, 2>> out;
  for (int node : mesh.trace_map()) out.push_back(mesh.nodes()[node]);
  return out;
}

std::array<double, 2> lengths_of(const RunConfig& c) {
  return {c.lengths[0], c.dim == 2 ? c.lengths[1] : 1.0};
}

}  // namespace

FieldSpec parse_field(const std::string& text) {
  const std::string t = trim(text);
  const auto open = t.find('(');
  if (open == std::string::npos || t.back() != ')') {
    throw InvalidArgument("field must look like name(args), got '" + t + "'");
  }
  const std::string name = trim(t.substr(0, open));
  const std::string inner = t.substr(open + 1, t.size() - open - 2);
  FieldSpec f;
  f.args.clear();
  std::size_t expected = 0;
  if (name == "file") {
    f.kind = FieldSpec::Kind::file;
    f.path = trim(inner);
    if (f.path.empty()) throw InvalidArgument("file() needs a path");
    return f;
  }
  if (name == "constant") {
    f.kind = FieldSpec::Kind::constant;
    expected = 1;
  } else if (name == "cosine") {
    f.kind = FieldSpec::Kind::cosine;
    expected = 2;
  } else if (name == "tanh") {
    f.kind = FieldSpec::Kind::tanh;
    expected = 2;
  } else if (name == "random") {
    f.kind = FieldSpec::Kind::random;
    expected = 3;
  } else {
    throw InvalidArgument("unknown field preset '" + name + "'");
  }
  try {
    f.args = to_list(inner);
  } catch (const std::invalid_argument& e) {
    throw InvalidArgument(name + "(): " + e.what());
  }
  if (f.args.size() != expected) {
    throw InvalidArgument(name + "() takes " + std::to_string(expected) + " argument(s)");
  }
  if (f.kind == FieldSpec::Kind::tanh && !(f.args[1] > 0.0)) {
    throw InvalidArgument("tanh() width must be positive");
  }
  if (f.kind == FieldSpec::Kind::random &&
      (f.args[2] < 0.0 || f.args[2] != std::floor(f.args[2]))) {
    throw InvalidArgument("random() seed must be a nonnegative integer");
  }
  return f;
}

std::string to_string(const FieldSpec& f) {
  switch (f.kind) {
    case FieldSpec::Kind::constant: return "constant(" + format(f.args) + ")";
    case FieldSpec::Kind::cosine: return "cosine(" + format(f.args) + ")";
    case FieldSpec::Kind::tanh: return "tanh(" + format(f.args) + ")";
    case FieldSpec::Kind::random: return "random(" + format(f.args) + ")";
    case FieldSpec::Kind::file: return "file(" + f.path + ")";
  }
  return "";
}

Vector evaluate_field(const FieldSpec& f, const std::vector<std::array<double, 2>>& points,
                      const std::array<double, 2>& lengths, const std::string& base_dir) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Vector v(n);
  switch (f.kind) {
    case FieldSpec::Kind::constant: v.setConstant(f.args[0]); break;
    case FieldSpec::Kind::cosine:
      for (Eigen::Index i = 0; i < n; ++i) {
        v[i] = f.args[0] + f.args[1] * std::cos(M_PI * points[i][0] / lengths[0]) *
                               std::cos(M_PI * points[i][1] / lengths[1]);
      }
      break;
    case FieldSpec::Kind::tanh:
      for (Eigen::Index i = 0; i < n; ++i) v[i] = std::tanh((points[i][0] - f.args[0]) / f.args[1]);
      break;
    case FieldSpec::Kind::random: {
      std::mt19937_64 rng(static_cast<std::uint64_t>(f.args[2]));
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      for (Eigen::Index i = 0; i < n; ++i) v[i] = f.args[0] + f.args[1] * dist(rng);
      break;
    }
    case FieldSpec::Kind::file: {
      std::filesystem::path path(f.path);
      if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
      v = read_field_csv(path.string());
      if (v.size() != n) {
        throw InvalidArgument("field file " + path.string() + " has " + std::to_string(v.size()) +
                              " values, expected " + std::to_string(n));
      }
      break;
    }
  }
  return v;
}

Potential make_potential(const PotentialConfig& p) {
  switch (p.kind) {
    case PotentialKind::regular: return Potential::regular();
    case PotentialKind::logarithmic: return Potential::logarithmic(p.c1);
    case PotentialKind::custom: return Potential::custom(p.convex, p.concave);
  }
  throw InvalidArgument("unknown potential kind");
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.message(), static_cast<int>(e.line()));
  }

  const auto lines = index_lines(text);
  for (const auto& [section, keys] : tree) {
    const auto known = schema().find(section);
    if (known == schema().end()) {
      const auto it = lines.find(section);
      throw ConfigError("unknown section [" + section + "]", it == lines.end() ? 0 : it->second);
    }
    if (!keys.data().empty()) throw ConfigError("key outside any section: " + section);
    for (const auto& [key, value] : keys) {
      if (!known->second.count(key)) {
        const auto it = lines.find(section + "." + key);
        throw ConfigError("unknown key '" + key + "' in [" + section + "]",
                          it == lines.end() ? 0 : it->second);
      }
    }
  }

  const Reader r(tree, lines);
  RunConfig c;
  r.text("run.name", c.name);
  r.text("run.output_dir", c.output_dir);
  r.integer("run.snapshot_stride", c.snapshot_stride);
  r.require(!c.name.empty() && c.name.find('/') == std::string::npos, "run.name",
            "name must be a nonempty single path component");
  r.require(c.snapshot_stride >= 0, "run.snapshot_stride", "must be >= 0");

  r.integer("domain.dim", c.dim);
  r.require(c.dim == 1 || c.dim == 2, "domain.dim", "must be 1 or 2");
  r.number("domain.length", c.lengths[0]);
  r.number("domain.height", c.lengths[1]);
  r.integer("domain.cells", c.cells[0]);
  r.integer("domain.cells_y", c.cells[1]);
  r.require(c.lengths[0] > 0.0, "domain.length", "must be positive");
  r.require(c.lengths[1] > 0.0, "domain.height", "must be positive");
  r.require(c.cells[0] >= 1, "domain.cells", "must be >= 1");
  r.require(c.cells[1] >= 1, "domain.cells_y", "must be >= 1");

  r.number("time.final_time", c.final_time);
  r.integer("time.steps", c.steps);
  r.require(c.final_time > 0.0, "time.final_time", "must be positive");
  r.require(c.steps >= 1, "time.steps", "must be >= 1");

  r.number("physics.tau", c.physics.tau);
  r.number("physics.gamma", c.physics.gamma);
  r.require(c.physics.tau > 0.0, "physics.tau", "viscosity tau must be positive");
  r.require(c.physics.gamma > 0.0, "physics.gamma", "reaction rate gamma must be positive");

  read_potential(r, "potential", c.potential);
  c.boundary_potential = c.potential;
  read_potential(r, "boundary_potential", c.boundary_potential);
  r.number("potential.eps_yosida", c.solver.eps_yosida);
  r.require(c.solver.eps_yosida >= 0.0 && c.solver.eps_yosida < 1.0, "potential.eps_yosida",
            "must be 0 or lie in (0, 1)");

  r.read("solver.scheme", c.solver.scheme, [](const std::string& s) {
    const std::string t = trim(s);
    if (t == "fully_implicit") return Scheme::fully_implicit;
    if (t == "convex_splitting") return Scheme::convex_splitting;
    throw std::invalid_argument("unknown scheme '" + t + "'");
  });
  r.number("solver.newton_tol", c.solver.newton_tol);
  r.integer("solver.newton_max_iter", c.solver.newton_max_iter);
  r.number("solver.interior_safeguard", c.solver.interior_safeguard);
  r.require(c.solver.newton_tol > 0.0, "solver.newton_tol", "must be positive");
  r.require(c.solver.newton_max_iter >= 1, "solver.newton_max_iter", "must be >= 1");
  r.require(c.solver.interior_safeguard > 0.0 && c.solver.interior_safeguard < 0.5,
            "solver.interior_safeguard", "must lie in (0, 0.5)");

  r.field("initial.field", c.initial);
  r.field("control.bulk", c.control_bulk);
  c.control_boundary = c.control_bulk;
  r.field("control.boundary", c.control_boundary);
  r.number("control.frequency", c.control_frequency);

  for (int i = 0; i < 6; ++i) {
    const std::string key = "cost.alpha" + std::to_string(i + 1);
    r.number(key, c.alpha[i]);
    r.require(c.alpha[i] >= 0.0, key, "cost weights must be nonnegative");
  }
  r.field("cost.target_q", c.target_q);
  c.target_sigma = c.target_q;
  r.field("cost.target_sigma", c.target_sigma);
  c.target_omega = c.target_q;
  r.field("cost.target_omega", c.target_omega);
  c.target_gamma = c.target_sigma;
  r.field("cost.target_gamma", c.target_gamma);

  r.number("box.u_min", c.u_min);
  r.number("box.u_max", c.u_max);
  r.number("box.ug_min", c.ug_min);
  r.number("box.ug_max", c.ug_max);
  r.number("box.derivative_budget", c.derivative_budget);
  r.number("box.neighborhood", c.neighborhood);
  r.require(c.derivative_budget > 0.0, "box.derivative_budget", "must be positive");
  r.require(c.neighborhood > 0.0, "box.neighborhood", "must be positive");

  auto& o = c.optimizer;
  r.number("optimizer.armijo_c1", o.armijo_c1);
  r.number("optimizer.backtrack", o.backtrack);
  r.number("optimizer.initial_step", o.initial_step);
  r.integer("optimizer.max_iter", o.max_iter);
  r.integer("optimizer.max_backtracks", o.max_backtracks);
  r.number("optimizer.tol", o.tol);
  r.flag("optimizer.bb_warm_start", o.bb_warm_start);
  r.require(o.armijo_c1 > 0.0 && o.armijo_c1 < 1.0, "optimizer.armijo_c1", "must lie in (0, 1)");
  r.require(o.backtrack > 0.0 && o.backtrack < 1.0, "optimizer.backtrack", "must lie in (0, 1)");
  r.require(o.initial_step > 0.0, "optimizer.initial_step", "must be positive");
  r.require(o.max_iter >= 0, "optimizer.max_iter", "must be >= 0");
  r.require(o.max_backtracks >= 0, "optimizer.max_backtracks", "must be >= 0");
  r.require(o.tol >= 0.0, "optimizer.tol", "must be >= 0");

  auto& v = c.verify;
  r.integer("verify.taylor_directions", v.taylor_directions);
  r.integer("verify.gradient_directions", v.gradient_directions);
  r.list("verify.eps_list", v.eps_list);
  r.list("verify.dependence_scales", v.dependence_scales);
  int seed = static_cast<int>(v.seed);
  r.integer("verify.seed", seed);
  r.require(seed >= 0, "verify.seed", "must be >= 0");
  v.seed = static_cast<unsigned>(seed);
  r.integer("verify.energy_steps", v.energy_steps);
  r.require(v.taylor_directions >= 1, "verify.taylor_directions", "must be >= 1");
  r.require(v.gradient_directions >= 1, "verify.gradient_directions", "must be >= 1");
  r.require(v.energy_steps >= 1, "verify.energy_steps", "must be >= 1");
  r.require(!v.eps_list.empty(), "verify.eps_list", "needs at least one value");
  for (std::size_t k = 0; k < v.eps_list.size(); ++k) {
    r.require(v.eps_list[k] > 0.0 && v.eps_list[k] < 1.0 &&
                  (k == 0 || v.eps_list[k] < v.eps_list[k - 1]),
              "verify.eps_list", "must be strictly decreasing inside (0, 1)");
  }
  r.require(!v.dependence_scales.empty(), "verify.dependence_scales", "needs at least one value");
  for (double s : v.dependence_scales) {
    r.require(s > 0.0, "verify.dependence_scales", "scales must be positive");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  try {
    RunConfig c = parse_config(text.str());
    c.base_dir = std::filesystem::path(path).parent_path().string();
    return c;
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string serialize(const RunConfig& c) {
  std::ostringstream out;
  out << "[run]\nname = " << c.name << "\noutput_dir = " << c.output_dir
      << "\nsnapshot_stride = " << c.snapshot_stride << "\n\n";
  out << "[domain]\ndim = " << c.dim << "\nlength = " << format(c.lengths[0])
      << "\nheight = " << format(c.lengths[1]) << "\ncells = " << c.cells[0]
      << "\ncells_y = " << c.cells[1] << "\n\n";
  out << "[time]\nfinal_time = " << format(c.final_time) << "\nsteps = " << c.steps << "\n\n";
  out << "[physics]\ntau = " << format(c.physics.tau) << "\ngamma = " << format(c.physics.gamma)
      << "\n\n";
  out << "[potential]\n";
  write_potential(out, c.potential);
  out << "eps_yosida = " << format(c.solver.eps_yosida) << "\n\n";
  out << "[boundary_potential]\n";
  write_potential(out, c.boundary_potential);
  out << "\n[solver]\nscheme = "
      << (c.solver.scheme == Scheme::fully_implicit ? "fully_implicit" : "convex_splitting")
      << "\nnewton_tol = " << format(c.solver.newton_tol)
      << "\nnewton_max_iter = " << c.solver.newton_max_iter
      << "\ninterior_safeguard = " << format(c.solver.interior_safeguard) << "\n\n";
  out << "[initial]\nfield = " << to_string(c.initial) << "\n\n";
  out << "[control]\nbulk = " << to_string(c.control_bulk)
      << "\nboundary = " << to_string(c.control_boundary)
      << "\nfrequency = " << format(c.control_frequency) << "\n\n";
  out << "[cost]\n";
  for (int i = 0; i < 6; ++i) out << "alpha" << i + 1 << " = " << format(c.alpha[i]) << "\n";
  out << "target_q = " << to_string(c.target_q) << "\ntarget_sigma = " << to_string(c.target_sigma)
      << "\ntarget_omega = " << to_string(c.target_omega)
      << "\ntarget_gamma = " << to_string(c.target_gamma) << "\n\n";
  out << "[box]\nu_min = " << format(c.u_min) << "\nu_max = " << format(c.u_max)
      << "\nug_min = " << format(c.ug_min) << "\nug_max = " << format(c.ug_max)
      << "\nderivative_budget = " << format(c.derivative_budget)
      << "\nneighborhood = " << format(c.neighborhood) << "\n\n";
  const auto& o = c.optimizer;
  out << "[optimizer]\narmijo_c1 = " << format(o.armijo_c1) << "\nbacktrack = "
      << format(o.backtrack) << "\ninitial_step = " << format(o.initial_step)
      << "\nmax_iter = " << o.max_iter << "\nmax_backtracks = " << o.max_backtracks
      << "\ntol = " << format(o.tol) << "\nbb_warm_start = " << (o.bb_warm_start ? "true" : "false")
      << "\n\n";
  const auto& v = c.verify;
  out << "[verify]\ntaylor_directions = " << v.taylor_directions
      << "\ngradient_directions = " << v.gradient_directions
      << "\neps_list = " << format(v.eps_list)
      << "\ndependence_scales = " << format(v.dependence_scales) << "\nseed = " << v.seed
      << "\nenergy_steps = " << v.energy_steps << "\n";
  return out.str();
}

BulkSurfaceMesh build_mesh(const RunConfig& c) {
  if (c.dim == 1) return build_interval(c.cells[0], c.lengths[0]);
  return build_rectangle(c.cells[0], c.cells[1], c.lengths[0], c.lengths[1]);
}

ForwardProblem build_problem(const RunConfig& c) {
  BulkSurfaceMesh mesh = build_mesh(c);
  PotentialPair pair =
      make_potential_pair(make_potential(c.potential), make_potential(c.boundary_potential));
  const Vector phi0 = evaluate_field(c.initial, mesh.nodes(), lengths_of(c), c.base_dir);
  return ForwardProblem(std::move(mesh), std::move(pair), c.solver, c.physics,
                        TimeGrid(c.final_time, c.steps), phi0);
}

ControlPair build_control(const RunConfig& c, const ForwardProblem& p) {
  const Vector bulk = evaluate_field(c.control_bulk, p.mesh.nodes(), lengths_of(c), c.base_dir);
  const Vector boundary =
      evaluate_field(c.control_boundary, boundary_points(p.mesh), lengths_of(c), c.base_dir);
  ControlPair u = ControlPair::constant(p.ops.size(), p.ops.boundary_size(), p.grid.steps, 0, 0);
  for (int k = 0; k < p.grid.steps; ++k) {
    const double factor =
        c.control_frequency == 0.0 ? 1.0 : std::cos(c.control_frequency * p.grid.t(k + 1));
    u.bulk[k] = factor * bulk;
    u.boundary[k] = factor * boundary;
  }
  return u;
}

CostSpec build_cost(const RunConfig& c, const ForwardProblem& p) {
  CostSpec s;
  s.alpha = c.alpha;
  const auto bp = boundary_points(p.mesh);
  const Vector q = evaluate_field(c.target_q, p.mesh.nodes(), lengths_of(c), c.base_dir);
  const Vector sigma = evaluate_field(c.target_sigma, bp, lengths_of(c), c.base_dir);
  s.target_bulk.assign(p.grid.steps + 1, q);
  s.target_boundary.assign(p.grid.steps + 1, sigma);
  s.target_final_bulk = evaluate_field(c.target_omega, p.mesh.nodes(), lengths_of(c), c.base_dir);
  s.target_final_boundary = evaluate_field(c.target_gamma, bp, lengths_of(c), c.base_dir);
  return s;
}

BoxBounds build_box(const RunConfig& c, const ForwardProblem& p) {
  BoxBounds box;
  const auto n = p.ops.size(), nb = p.ops.boundary_size();
  box.lower = ControlPair::constant(n, nb, p.grid.steps, c.u_min, c.ug_min);
  box.upper = ControlPair::constant(n, nb, p.grid.steps, c.u_max, c.ug_max);
  box.derivative_budget = c.derivative_budget;
  return box;
}

void validate_setup(const ForwardProblem& p, const BoxBounds& box, double M) {
  if (!box.consistent()) throw ValidationError("infeasible box: a lower bound exceeds its upper bound");
  const bool singular = p.options.eps_yosida == 0.0 && (p.potentials.bulk.bounded_domain() ||
                                                       p.potentials.boundary.bounded_domain());
  if (!singular) return;
  for (Eigen::Index i = 0; i < p.phi0.bulk.size(); ++i) {
    if (!p.potentials.bulk.in_domain(p.phi0.bulk[i]) ||
        !p.potentials.boundary.in_domain(p.phi0.bulk[i])) {
      throw ValidationError("initial state leaves the potential domain at node " +
                            std::to_string(i));
    }
  }
  const auto report = check_mean_value_condition(p.potentials, mean(p.ops, p.phi0), M,
                                                 p.params.gamma);
  if (!report.pass) {
    throw ValidationError("mean-value condition violated: [" + format(report.lower) + ", " +
                          format(report.upper) + "] is not inside int D(beta_Gamma) (endpoint " +
                          format(*report.violated_endpoint) + ")");
  }
}

}  // namespace cho
