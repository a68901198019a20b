#include "sdcbf/errors.hpp"
#include "sdcbf/sim.hpp"

#include <algorithm>
#include <thread>

namespace sdcbf {

InputSampler uniform_input_sampler(const Box& input_box) {
  return [input_box](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vector u(input_box.lo.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      u[i] = input_box.lo[i] + unit(rng) * (input_box.hi[i] - input_box.lo[i]);
    }
    return u;
  };
}

namespace {

std::vector<SampleTriple> one_trajectory(const PlantModel& plant, std::size_t n_steps, double dt,
                                         const InputSampler& input_sampler,
                                         const BarrierSpec& barrier, std::uint64_t seed,
                                         std::size_t traj_index, int substeps,
                                         const Box& operating_box) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(traj_index),
                    static_cast<std::uint32_t>(traj_index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector x(operating_box.lo.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x[i] = operating_box.lo[i] + unit(rng) * (operating_box.hi[i] - operating_box.lo[i]);
  }
  std::vector<SampleTriple> out;
  out.reserve(n_steps);
  for (std::size_t k = 0; k < n_steps; ++k) {
    const Vector u = input_sampler(rng);
    const double t0 = static_cast<double>(k) * dt;
    const ZohSegment seg = integrate_zoh(plant, x, u, dt, substeps, t0, &operating_box);
    if (barrier.h(x) >= 0.0 && operating_box.contains(x) && !seg.left_operating_box) {
      out.push_back({x, u, seg.x_next, t0, static_cast<double>(k + 1) * dt});
    }
    x = seg.x_next;
  }
  return out;
}

}  // namespace

SampleSet generate_dataset(const PlantModel& plant, std::size_t n_traj, std::size_t n_steps,
                           double dt, const InputSampler& input_sampler,
                           const BarrierSpec& barrier, std::uint64_t seed, int substeps,
                           const Box& operating_box) {
  if (n_traj == 0 || n_steps == 0) throw ConfigError("dataset needs n_traj, n_steps >= 1");
  require_dim(operating_box.lo, plant.state_dim(), "generate_dataset operating box");

  std::vector<std::vector<SampleTriple>> per_traj(n_traj);
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(n_traj, std::thread::hardware_concurrency()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n_traj; i += workers) {
          per_traj[i] = one_trajectory(plant, n_steps, dt, input_sampler, barrier, seed, i,
                                       substeps, operating_box);
        }
      });
    }
  }
  std::vector<SampleTriple> all;
  for (auto& v : per_traj) {
    std::move(v.begin(), v.end(), std::back_inserter(all));
  }
  return SampleSet(std::move(all));
}

}  // namespace sdcbf
