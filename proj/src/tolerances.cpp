#include "fdtlab/tolerances.hpp"

#include <unordered_map>

namespace fdtlab {

bool set_tolerance(Tolerances& tol, const std::string& name, double value) {
  static const std::unordered_map<std::string, double Tolerances::*> fields = {
      {"generator_row_sum", &Tolerances::generator_row_sum},
      {"semigroup_tail", &Tolerances::semigroup_tail},
      {"invariant_residual", &Tolerances::invariant_residual},
      {"invariance_precheck", &Tolerances::invariance_precheck},
      {"reversibility", &Tolerances::reversibility},
      {"measure_normalization", &Tolerances::measure_normalization},
      {"family_at_zero", &Tolerances::family_at_zero},
      {"family_invariance", &Tolerances::family_invariance},
      {"kernel_row_sum", &Tolerances::kernel_row_sum},
      {"balance", &Tolerances::balance},
      {"metropolis_tie", &Tolerances::metropolis_tie},
      {"simpson_agreement", &Tolerances::simpson_agreement},
      {"fdt_dynamic", &Tolerances::fdt_dynamic},
      {"fdt_static", &Tolerances::fdt_static},
      {"mode_agreement", &Tolerances::mode_agreement},
      {"derivative_fd", &Tolerances::derivative_fd},
      {"relaxation_floor", &Tolerances::relaxation_floor},
      {"relaxation_slope_factor", &Tolerances::relaxation_slope_factor},
      {"green_kubo_identity", &Tolerances::green_kubo_identity},
      {"green_kubo_relative", &Tolerances::green_kubo_relative},
      {"green_kubo_horizon", &Tolerances::green_kubo_horizon},
      {"b_symmetry", &Tolerances::b_symmetry},
      {"stability_guard", &Tolerances::stability_guard},
      {"current_constancy", &Tolerances::current_constancy},
  };
  auto it = fields.find(name);
  if (it == fields.end()) return false;
  tol.*(it->second) = value;
  return true;
}

}  // namespace fdtlab
