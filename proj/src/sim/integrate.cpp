#include "sdcbf/errors.hpp"
#include "sdcbf/sim.hpp"

namespace sdcbf {

ZohSegment integrate_zoh(const PlantModel& plant, const Vector& x0, const Vector& u, double dt,
                         int substeps, double t0, const Box* operating_box) {
  if (substeps < 1) throw Error("integrate_zoh: substeps must be >= 1");
  require_dim(x0, plant.state_dim(), "integrate_zoh state");
  require_dim(u, plant.input_dim(), "integrate_zoh input");
  ZohSegment seg;
  seg.times.reserve(static_cast<std::size_t>(substeps));
  seg.states.reserve(static_cast<std::size_t>(substeps));
  const double h = dt / substeps;
  Vector x = x0;
  for (int i = 1; i <= substeps; ++i) {
    const Vector k1 = plant.rate(x, u);
    const Vector k2 = plant.rate(x + 0.5 * h * k1, u);
    const Vector k3 = plant.rate(x + 0.5 * h * k2, u);
    const Vector k4 = plant.rate(x + h * k3, u);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    seg.times.push_back(t0 + i * h);
    seg.states.push_back(x);
    if (operating_box && !operating_box->contains(x)) seg.left_operating_box = true;
  }
  seg.x_next = x;
  return seg;
}

}  // namespace sdcbf
