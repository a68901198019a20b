#include "sdcbf/dataset.hpp"

#include "sdcbf/config.hpp"
#include "sdcbf/csv.hpp"
#include "sdcbf/errors.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

namespace sdcbf {

// ---- KdTree ---------------------------------------------------------------

KdTree::KdTree(std::vector<Vector> points) : points_(std::move(points)) {
  if (points_.empty()) return;
  const auto dim = points_.front().size();
  for (const auto& p : points_) {
    if (p.size() != dim) throw DimensionError("kd-tree points have mixed dimensions");
  }
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  nodes_.reserve(2 * points_.size() / kLeafSize + 2);
  build(0, points_.size());
}

std::size_t KdTree::build(std::size_t begin, std::size_t end) {
  const std::size_t id = nodes_.size();
  nodes_.emplace_back();
  Vector lo = points_[order_[begin]];
  Vector hi = lo;
  for (std::size_t k = begin + 1; k < end; ++k) {
    lo = lo.cwiseMin(points_[order_[k]]);
    hi = hi.cwiseMax(points_[order_[k]]);
  }
  std::size_t left = npos;
  std::size_t right = npos;
  if (end - begin > kLeafSize) {
    Eigen::Index axis = 0;
    (hi - lo).maxCoeff(&axis);
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                     order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) {
                       const double va = points_[a][axis];
                       const double vb = points_[b][axis];
                       return va < vb || (va == vb && a < b);
                     });
    left = build(begin, mid);
    right = build(mid, end);
  }
  Node& node = nodes_[id];
  node.lo = std::move(lo);
  node.hi = std::move(hi);
  node.begin = begin;
  node.end = end;
  node.left = left;
  node.right = right;
  return id;
}

double KdTree::box_distance(const Node& node, const Vector& q) const {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    double d = 0.0;
    if (q[i] < node.lo[i]) {
      d = node.lo[i] - q[i];
    } else if (q[i] > node.hi[i]) {
      d = q[i] - node.hi[i];
    }
    acc += d * d;
  }
  return std::sqrt(acc);
}

std::size_t KdTree::nearest(const Vector& query) const {
  return argmin(
      query, [](std::size_t, double d) { return d; }, [](double d) { return d; });
}

// ---- SampleSet ------------------------------------------------------------

namespace {

std::vector<Vector> starts_of(const std::vector<SampleTriple>& triples) {
  std::vector<Vector> pts;
  pts.reserve(triples.size());
  for (const auto& t : triples) pts.push_back(t.x_start);
  return pts;
}

}  // namespace

SampleSet::SampleSet(std::vector<SampleTriple> triples)
    : triples_(std::move(triples)), index_(starts_of(triples_)) {
  if (triples_.empty()) return;
  const auto n = triples_.front().x_start.size();
  const auto m = triples_.front().u_held.size();
  for (const auto& t : triples_) {
    if (t.x_start.size() != n || t.x_end.size() != n || t.u_held.size() != m) {
      throw DimensionError("sample triples have inconsistent dimensions");
    }
  }
}

std::size_t SampleSet::state_dim() const {
  return triples_.empty() ? 0 : static_cast<std::size_t>(triples_.front().x_start.size());
}

std::size_t SampleSet::input_dim() const {
  return triples_.empty() ? 0 : static_cast<std::size_t>(triples_.front().u_held.size());
}

std::size_t SampleSet::nearest(const Vector& x) const {
  if (empty()) throw DatasetError("nearest-sample query on an empty dataset");
  require_dim(x, state_dim(), "nearest-sample query");
  return index_.nearest(x);
}

DatasetReport validate_dataset(const SampleSet& samples, const BarrierSpec& barrier,
                               const SynthesisConfig& cfg) {
  DatasetReport report;
  report.total = samples.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    std::string reason;
    if (!(s.t_end > s.t_start)) {
      reason = "non-positive duration";
    } else if (!cfg.input_box.contains(s.u_held)) {
      reason = "u_held outside input box";
    } else if (barrier.h(s.x_start) < 0.0) {
      reason = "h(x_start) < 0";
    }
    if (reason.empty()) {
      ++report.valid;
    } else {
      report.flagged.push_back({i, std::move(reason)});
    }
  }
  return report;
}

// ---- CSV ------------------------------------------------------------------

void write_dataset_csv(const SampleSet& samples, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  const std::size_t n = samples.state_dim();
  const std::size_t m = samples.input_dim();
  std::vector<std::string> header = {"t_start", "t_end"};
  for (std::size_t i = 0; i < n; ++i) header.push_back("x_start_" + std::to_string(i));
  for (std::size_t i = 0; i < m; ++i) header.push_back("u_held_" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) header.push_back("x_end_" + std::to_string(i));
  write_csv_row(out, header);

  std::vector<double> row;
  for (const auto& s : samples.triples()) {
    row.clear();
    row.push_back(s.t_start);
    row.push_back(s.t_end);
    row.insert(row.end(), s.x_start.begin(), s.x_start.end());
    row.insert(row.end(), s.u_held.begin(), s.u_held.end());
    row.insert(row.end(), s.x_end.begin(), s.x_end.end());
    write_csv_row(out, row);
  }
  if (!out) throw Error("failed writing " + path.string());
}

SampleSet read_dataset_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  std::size_t n = 0;
  std::size_t m = 0;
  for (const auto& col : table.header) {
    if (col.rfind("x_start_", 0) == 0) ++n;
    if (col.rfind("u_held_", 0) == 0) ++m;
  }
  const std::size_t expected = 2 + 2 * n + m;
  if (n == 0 || m == 0 || table.header.size() != expected || table.header[0] != "t_start" ||
      table.header[1] != "t_end") {
    throw ParseError(path.string() + ": unexpected dataset header");
  }
  std::vector<SampleTriple> triples;
  triples.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    SampleTriple s;
    s.t_start = r[0];
    s.t_end = r[1];
    s.x_start = Eigen::Map<const Vector>(r.data() + 2, static_cast<Eigen::Index>(n));
    s.u_held = Eigen::Map<const Vector>(r.data() + 2 + n, static_cast<Eigen::Index>(m));
    s.x_end = Eigen::Map<const Vector>(r.data() + 2 + n + m, static_cast<Eigen::Index>(n));
    triples.push_back(std::move(s));
  }
  return SampleSet(std::move(triples));
}

}  // namespace sdcbf
