#include "cho/presets.hpp"

namespace cho {

namespace {

RunConfig base() {
  RunConfig c;
  c.name = "default";
  c.dim = 1;
  c.cells = {32, 32};
  c.final_time = 0.2;
  c.steps = 40;
  c.initial = parse_field("cosine(0.1, 0.4)");
  c.control_bulk = parse_field("cosine(0, 0.3)");
  c.control_boundary = parse_field("constant(-0.1)");
  c.control_frequency = 2.0;
  c.alpha = {1.0, 0.5, 1.0, 0.5, 1e-2, 1e-2};
  c.target_q = parse_field("cosine(0, 0.3)");
  c.target_sigma = parse_field("constant(-0.2)");
  c.target_omega = parse_field("cosine(0, 0.3)");
  c.target_gamma = parse_field("constant(0.1)");
  c.optimizer.bb_warm_start = true;
  return c;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"default", "coarse-dt", "logarithmic", "2d", "constant", "tracking"};
}

RunConfig preset(const std::string& name) {
  RunConfig c = base();
  c.name = name;
  if (name == "default") return c;
  if (name == "coarse-dt") {
    c.steps = 4;
    return c;
  }
  if (name == "logarithmic") {
    c.potential = PotentialConfig{PotentialKind::logarithmic, 2.0, {}, {}};
    c.boundary_potential = c.potential;
    c.initial = parse_field("cosine(0.05, 0.3)");
    c.control_bulk = parse_field("cosine(0, 0.2)");
    c.u_min = c.ug_min = -0.5;
    c.u_max = c.ug_max = 0.5;
    return c;
  }
  if (name == "2d") {
    c.dim = 2;
    c.cells = {8, 8};
    c.final_time = 0.1;
    c.steps = 10;
    c.initial = parse_field("cosine(0.05, 0.2)");
    c.verify.energy_steps = 50;
    return c;
  }
  if (name == "constant") {
    c.cells = {8, 8};
    c.final_time = 1.0;
    c.steps = 50;
    c.physics.gamma = 2.0;
    c.initial = parse_field("constant(0.5)");
    c.control_bulk = parse_field("constant(1)");
    c.control_boundary = parse_field("constant(1)");
    c.control_frequency = 0.0;
    c.u_min = c.ug_min = -2.0;
    c.u_max = c.ug_max = 2.0;
    return c;
  }
  if (name == "tracking") {
    c.control_bulk = parse_field("constant(0)");
    c.control_boundary = parse_field("constant(0)");
    c.control_frequency = 0.0;
    c.alpha = {1.0, 0.5, 1.0, 0.5, 1e-3, 1e-3};
    c.target_q = parse_field("tanh(0.5, 0.1)");
    c.target_omega = parse_field("tanh(0.5, 0.1)");
    c.u_min = c.ug_min = -2.0;
    c.u_max = c.ug_max = 2.0;
    return c;
  }
  throw InvalidArgument("unknown preset '" + name + "'");
}

}  // namespace cho
