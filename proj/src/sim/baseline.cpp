#include "sdcbf/errors.hpp"
#include "sdcbf/qp.hpp"
#include "sdcbf/sim.hpp"

namespace sdcbf {

Vector baseline_cbf_qp(const Vector& x, const ControlAffinePlant& plant,
                       const BarrierSpec& barrier, const SynthesisConfig& cfg) {
  require_dim(x, plant.state_dim(), "baseline_cbf_qp");
  const Vector grad = barrier.grad_h(x);
  HalfSpace hs;
  hs.a = (grad.transpose() * plant.g(x)).transpose();
  hs.b = -(grad.dot(plant.f(x)) + barrier.alpha(barrier.h(x)));
  auto u = solve_small_qp(cfg.cost_matrix, cfg.input_box, hs);
  if (!u) throw InfeasibleError("baseline CBF constraint cannot be met inside the input box");
  return *u;
}

}  // namespace sdcbf
