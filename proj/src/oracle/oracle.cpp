#include "sdcbf/oracle.hpp"

#include "sdcbf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sdcbf {

bool DynamicsInterval::contains(const Vector& v, double tol) const {
  if (v.size() != center.size()) return false;
  return ((v - center).cwiseAbs().array() <= half_width + tol).all();
}

Vector finite_difference_rate(const SampleTriple& sample) {
  const double duration = sample.duration();
  if (!(duration > 0.0)) throw DatasetError("sample has non-positive duration");
  if (sample.x_end.size() != sample.x_start.size()) {
    throw DimensionError("sample start/end dimensions differ");
  }
  return (sample.x_end - sample.x_start) / duration;
}

DynamicsInterval dynamics_interval(const Vector& x_now, const Vector& u, const SampleTriple& sample,
                                   const LipschitzSpec& spec, const Box& operating_box) {
  if (!operating_box.contains(x_now)) {
    throw OperatingBoxError("state outside the operating box; bounds do not apply");
  }
  DynamicsInterval out;
  out.center = finite_difference_rate(sample);
  out.half_width = w_bound(x_now, sample, u, spec).total;
  out.source = &sample;
  return out;
}

SampleSelector::SampleSelector(const SampleSet& samples, const LipschitzSpec& spec)
    : samples_(&samples) {
  if (samples.empty()) throw DatasetError("sample selection on an empty dataset");
  if (samples.state_dim() != spec.state_dim() || samples.input_dim() != spec.input_dim()) {
    throw DimensionError("dataset dimensions do not match the Lipschitz spec");
  }
  const double sqrt_n = std::sqrt(static_cast<double>(spec.state_dim()));
  weight_.reserve(samples.size());
  offset_.reserve(samples.size());
  for (const auto& s : samples.triples()) {
    if (!(s.duration() > 0.0)) throw DatasetError("sample has non-positive duration");
    weight_.push_back(theta(s.u_held, spec));
    offset_.push_back(sqrt_n * reach_radius(s.duration(), spec));
  }
  min_weight_ = *std::min_element(weight_.begin(), weight_.end());
  min_offset_ = *std::min_element(offset_.begin(), offset_.end());
}

double SampleSelector::fixed_part(const Vector& x_now, std::size_t i) const {
  return weight_[i] * ((x_now - (*samples_)[i].x_start).norm() + offset_[i]);
}

std::size_t SampleSelector::select_index(const Vector& x_now, const Vector& /*u_hint*/) const {
  require_dim(x_now, samples_->state_dim(), "select_sample");
  return samples_->index().argmin(
      x_now, [this](std::size_t i, double d) { return weight_[i] * (d + offset_[i]); },
      [this](double d) { return min_weight_ * (d + min_offset_); });
}

std::size_t SampleSelector::select_index_exhaustive(const Vector& x_now) const {
  std::size_t best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples_->size(); ++i) {
    const double s = fixed_part(x_now, i);
    if (s < best_score) {
      best_score = s;
      best = i;
    }
  }
  return best;
}

const SampleTriple& select_sample(const Vector& x_now, const Vector& u_hint,
                                  const SampleSet& samples, const LipschitzSpec& spec) {
  const SampleSelector selector(samples, spec);
  return samples[selector.select_index(x_now, u_hint)];
}

}  // namespace sdcbf
