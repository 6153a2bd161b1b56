#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "cho/control.hpp"
#include "cho/forward.hpp"

namespace cho {

/// Malformed configuration; `line` is 1-based, 0 when not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Spatial field given by an analytic preset or a CSV file.
///   constant(c)
///   cosine(mean, amplitude)      mean + amplitude cos(pi x / Lx) [cos(pi y / Ly)]
///   tanh(center, width)          tanh((x - center) / width)
///   random(mean, amplitude, seed)
///   file(path.csv)
struct FieldSpec {
  enum class Kind { constant, cosine, tanh, random, file };
  Kind kind = Kind::constant;
  std::vector<double> args{0.0};
  std::string path;

  bool operator==(const FieldSpec&) const = default;
};

FieldSpec parse_field(const std::string& text);
std::string to_string(const FieldSpec& field);

/// Values of the field at the given points. `lengths` scales the cosine
/// preset; relative file paths resolve against `base_dir`.
Vector evaluate_field(const FieldSpec& field, const std::vector<std::array<double, 2>>& points,
                      const std::array<double, 2>& lengths, const std::string& base_dir = "");

struct PotentialConfig {
  PotentialKind kind = PotentialKind::regular;
  double c1 = 2.0;
  std::vector<double> convex;
  std::vector<double> concave;

  bool operator==(const PotentialConfig&) const = default;
};

Potential make_potential(const PotentialConfig& config);

struct VerifyOptions {
  int taylor_directions = 3;
  int gradient_directions = 5;
  std::vector<double> eps_list{1e-1, 1e-2, 1e-3};
  std::vector<double> dependence_scales{1.0, 0.5, 0.25};
  unsigned seed = 1234;
  /// Energy-decay check length; the run uses gamma = 0 and zero controls.
  int energy_steps = 200;

  bool operator==(const VerifyOptions&) const = default;
};

struct RunConfig {
  std::string name = "run";
  std::string output_dir = "output";
  /// Field snapshots every `snapshot_stride` steps; 0 writes none.
  int snapshot_stride = 0;
  /// Directory used to resolve relative CSV paths.
  std::string base_dir;

  int dim = 1;
  std::array<double, 2> lengths{1.0, 1.0};
  std::array<int, 2> cells{32, 32};

  double final_time = 1.0;
  int steps = 100;

  PhysicalParams physics;
  PotentialConfig potential;
  PotentialConfig boundary_potential;
  SolverOptions solver;

  FieldSpec initial;
  FieldSpec control_bulk;
  FieldSpec control_boundary;
  /// Controls are multiplied by cos(frequency t) on each slab.
  double control_frequency = 0.0;

  std::array<double, 6> alpha{0, 0, 0, 0, 0, 0};
  FieldSpec target_q;
  FieldSpec target_sigma;
  FieldSpec target_omega;
  FieldSpec target_gamma;

  double u_min = -1.0, u_max = 1.0;
  double ug_min = -1.0, ug_max = 1.0;
  /// M' of the admissible set.
  double derivative_budget = 1e3;
  /// Radius R of the control neighbourhood used by perturbation checks.
  double neighborhood = 0.1;

  OptimizerOptions optimizer;
  VerifyOptions verify;

  bool operator==(const RunConfig&) const = default;
};

/// Parses INI text. Unknown sections or keys, unparsable values and violated
/// parameter ranges raise ConfigError with the offending line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// INI text that parses back to an equal RunConfig.
std::string serialize(const RunConfig& config);

BulkSurfaceMesh build_mesh(const RunConfig& config);
ForwardProblem build_problem(const RunConfig& config);
ControlPair build_control(const RunConfig& config, const ForwardProblem& problem);
CostSpec build_cost(const RunConfig& config, const ForwardProblem& problem);
BoxBounds build_box(const RunConfig& config, const ForwardProblem& problem);

/// Structural checks that precede any solve: compatibility of the potential
/// pair, phi0 inside the domain, box consistency and the mean-value
/// condition with M taken from `M`. Throws ValidationError.
void validate_setup(const ForwardProblem& problem, const BoxBounds& box, double M);

}  // namespace cho
