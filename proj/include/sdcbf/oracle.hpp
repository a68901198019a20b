#pragma once

#include "sdcbf/barrier.hpp"
#include "sdcbf/bounds.hpp"
#include "sdcbf/dataset.hpp"
#include "sdcbf/lipschitz.hpp"

#include <vector>

namespace sdcbf {

/// Axis-uniform box center +/- half_width * [-1, 1]^n that contains
/// f(x_now) + g(x_now) u.
struct DynamicsInterval {
  Vector center;
  double half_width = 0.0;
  const SampleTriple* source = nullptr;

  Vector lower() const { return center.array() - half_width; }
  Vector upper() const { return center.array() + half_width; }
  bool contains(const Vector& v, double tol = 0.0) const;
};

/// (x_end - x_start) / (t_end - t_start). Throws DatasetError on a
/// non-positive duration.
Vector finite_difference_rate(const SampleTriple& sample);

/// Throws OperatingBoxError if x_now is outside `operating_box`.
DynamicsInterval dynamics_interval(const Vector& x_now, const Vector& u, const SampleTriple& sample,
                                   const LipschitzSpec& spec, const Box& operating_box);

/// Picks the triple minimising the input-independent part of w,
///   theta(u_k) * (||x_now - x_k|| + sqrt(n) * reach_radius(t_{k+1} - t_k)),
/// exactly, via branch-and-bound on the dataset's kd-tree.
///
/// Per-sample weights are cached at construction, so build one selector per
/// (dataset, spec) pair and reuse it across queries.
class SampleSelector {
 public:
  SampleSelector(const SampleSet& samples, const LipschitzSpec& spec);

  /// u_hint is accepted for interface stability; the metric ignores it.
  std::size_t select_index(const Vector& x_now, const Vector& u_hint) const;

  /// Linear scan of the same metric.
  std::size_t select_index_exhaustive(const Vector& x_now) const;

  double fixed_part(const Vector& x_now, std::size_t i) const;

  const SampleSet& samples() const { return *samples_; }

 private:
  const SampleSet* samples_;
  std::vector<double> weight_;  // theta(u_k)
  std::vector<double> offset_;  // sqrt(n) * reach_radius(duration_k)
  double min_weight_ = 0.0;
  double min_offset_ = 0.0;
};

/// One-shot convenience wrapper around SampleSelector. Throws DatasetError on
/// an empty dataset.
const SampleTriple& select_sample(const Vector& x_now, const Vector& u_hint,
                                  const SampleSet& samples, const LipschitzSpec& spec);

}  // namespace sdcbf
