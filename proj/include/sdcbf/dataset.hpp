#pragma once

#include "sdcbf/barrier.hpp"
#include "sdcbf/kdtree.hpp"
#include "sdcbf/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sdcbf {

struct SynthesisConfig;

/// One recorded sampling period: x_start was held under u_held from t_start
/// to t_end and arrived at x_end.
struct SampleTriple {
  Vector x_start;
  Vector u_held;
  Vector x_end;
  double t_start = 0.0;
  double t_end = 0.0;

  double duration() const { return t_end - t_start; }
};

/// Side-information dataset with a kd-tree over the x_start points.
class SampleSet {
 public:
  SampleSet() = default;
  explicit SampleSet(std::vector<SampleTriple> triples);

  bool empty() const { return triples_.empty(); }
  std::size_t size() const { return triples_.size(); }
  const SampleTriple& operator[](std::size_t i) const { return triples_[i]; }
  const std::vector<SampleTriple>& triples() const { return triples_; }
  const KdTree& index() const { return index_; }

  std::size_t state_dim() const;
  std::size_t input_dim() const;

  /// Euclidean-nearest x_start.
  std::size_t nearest(const Vector& x) const;

 private:
  std::vector<SampleTriple> triples_;
  KdTree index_;
};

struct DatasetIssue {
  std::size_t index = 0;
  std::string reason;
};

struct DatasetReport {
  std::size_t total = 0;
  std::size_t valid = 0;
  std::vector<DatasetIssue> flagged;
};

/// Flags triples with h(x_start) < 0, u_held outside the input box, or a
/// non-positive duration.
DatasetReport validate_dataset(const SampleSet& samples, const BarrierSpec& barrier,
                               const SynthesisConfig& cfg);

/// CSV columns: t_start,t_end,x_start_0..x_start_{n-1},u_held_0..u_held_{m-1},
/// x_end_0..x_end_{n-1}.
void write_dataset_csv(const SampleSet& samples, const std::filesystem::path& path);
SampleSet read_dataset_csv(const std::filesystem::path& path);

}  // namespace sdcbf
