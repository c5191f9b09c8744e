#pragma once

// Data model shared by every solver stage: datasets with colored points,
// fairness bounds, solutions, diversity scoring and feasibility checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace breach {

using Index = std::size_t;
using Color = std::uint32_t;

// Diversity of a set with fewer than two points.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InfeasibleSpec : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class MetricKind { Euclidean, Precomputed };

// Points with one color each, plus the metric used to compare them.
// Either coordinates (Euclidean) or a full symmetric distance matrix.
// Immutable after construction.
class Dataset {
 public:
  Dataset(std::vector<std::vector<double>> points, std::vector<Color> colors,
          std::size_t num_colors)
      : kind_(MetricKind::Euclidean),
        n_(points.size()),
        m_(num_colors),
        colors_(std::move(colors)) {
    if (n_ == 0) throw InvalidInput("dataset must contain at least one point");
    dim_ = points.front().size();
    if (dim_ == 0) throw InvalidInput("points must have dimension >= 1");
    coords_.reserve(n_ * dim_);
    for (std::size_t i = 0; i < n_; ++i) {
      if (points[i].size() != dim_)
        throw InvalidInput("point " + std::to_string(i) + " has dimension " +
                           std::to_string(points[i].size()) + ", expected " +
                           std::to_string(dim_));
      for (double x : points[i]) {
        if (!std::isfinite(x))
          throw InvalidInput("point " + std::to_string(i) +
                             " has a non-finite coordinate");
        coords_.push_back(x);
      }
    }
    check_colors();
  }

  static Dataset from_matrix(std::vector<std::vector<double>> matrix,
                             std::vector<Color> colors,
                             std::size_t num_colors) {
    Dataset ds(MetricKind::Precomputed, matrix.size(), num_colors,
               std::move(colors));
    if (ds.n_ == 0) throw InvalidInput("dataset must contain at least one point");
    ds.coords_.reserve(ds.n_ * ds.n_);
    for (std::size_t i = 0; i < ds.n_; ++i) {
      if (matrix[i].size() != ds.n_)
        throw InvalidInput("distance matrix must be square");
      for (std::size_t j = 0; j < ds.n_; ++j) {
        double d = matrix[i][j];
        if (!(d >= 0.0) || !std::isfinite(d))
          throw InvalidInput("distance matrix entries must be finite and >= 0");
        if (i == j && d != 0.0)
          throw InvalidInput("distance matrix diagonal must be zero");
        ds.coords_.push_back(d);
      }
    }
    for (std::size_t i = 0; i < ds.n_; ++i)
      for (std::size_t j = i + 1; j < ds.n_; ++j)
        if (ds.coords_[i * ds.n_ + j] != ds.coords_[j * ds.n_ + i])
          throw InvalidInput("distance matrix must be symmetric");
    ds.check_colors();
    return ds;
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t num_colors() const noexcept { return m_; }
  // Coordinate dimension; 0 for precomputed matrices.
  std::size_t dim() const noexcept { return dim_; }
  MetricKind metric() const noexcept { return kind_; }

  Color color(Index i) const { return colors_.at(i); }
  std::span<const Color> colors() const noexcept { return colors_; }

  std::span<const double> point(Index i) const {
    if (kind_ != MetricKind::Euclidean)
      throw std::logic_error("precomputed-metric dataset has no coordinates");
    check_index(i);
    return {coords_.data() + i * dim_, dim_};
  }

  double distance(Index u, Index v) const {
    check_index(u);
    check_index(v);
    return distance_unchecked(u, v);
  }

  double distance_unchecked(Index u, Index v) const noexcept {
    if (kind_ == MetricKind::Precomputed) return coords_[u * n_ + v];
    if (u == v) return 0.0;
    const double* a = coords_.data() + u * dim_;
    const double* b = coords_.data() + v * dim_;
    double acc = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      double diff = a[j] - b[j];
      acc += diff * diff;
    }
    return std::sqrt(acc);
  }

  // |V_i| for every color.
  std::vector<std::size_t> color_counts() const {
    std::vector<std::size_t> counts(m_, 0);
    for (Color c : colors_) ++counts[c];
    return counts;
  }

  // Same points and metric, viewed with a larger color universe. The new
  // colors have no points.
  Dataset with_num_colors(std::size_t num_colors) const {
    if (num_colors < m_)
      throw InvalidInput("cannot shrink the color universe");
    Dataset copy = *this;
    copy.m_ = num_colors;
    return copy;
  }

 private:
  Dataset(MetricKind kind, std::size_t n, std::size_t m,
          std::vector<Color> colors)
      : kind_(kind), n_(n), m_(m), colors_(std::move(colors)) {}

  void check_colors() const {
    if (m_ == 0) throw InvalidInput("color count must be >= 1");
    if (colors_.size() != n_)
      throw InvalidInput("expected " + std::to_string(n_) + " colors, got " +
                         std::to_string(colors_.size()));
    for (std::size_t i = 0; i < n_; ++i)
      if (colors_[i] >= m_)
        throw InvalidInput("color of point " + std::to_string(i) +
                           " is out of range");
  }

  void check_index(Index i) const {
    if (i >= n_)
      throw std::out_of_range("point index " + std::to_string(i) +
                              " out of range (n=" + std::to_string(n_) + ")");
  }

  MetricKind kind_;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::size_t dim_ = 0;
  std::vector<Color> colors_;
  // Row-major coordinates, or the n*n matrix for precomputed metrics.
  std::vector<double> coords_;
};

// Cardinality k with per-color bounds lower[i] <= |S ∩ V_i| <= upper[i].
class FairnessSpec {
 public:
  FairnessSpec(std::size_t k, std::vector<std::size_t> lower,
               std::vector<std::size_t> upper)
      : k_(k), lower_(std::move(lower)), upper_(std::move(upper)) {
    if (k_ == 0) throw InfeasibleSpec("k must be positive");
    if (lower_.size() != upper_.size())
      throw InfeasibleSpec("lower and upper bounds differ in length");
    if (lower_.empty()) throw InfeasibleSpec("bounds must cover >= 1 color");
    std::size_t sum_lower = 0, sum_upper = 0;
    for (std::size_t i = 0; i < lower_.size(); ++i) {
      if (lower_[i] > upper_[i])
        throw InfeasibleSpec("lower bound exceeds upper bound for color " +
                             std::to_string(i));
      sum_lower += lower_[i];
      sum_upper += upper_[i];
    }
    if (sum_lower > k_)
      throw InfeasibleSpec("sum of lower bounds (" + std::to_string(sum_lower) +
                           ") exceeds k=" + std::to_string(k_));
    if (sum_upper < k_)
      throw InfeasibleSpec("sum of upper bounds (" + std::to_string(sum_upper) +
                           ") is below k=" + std::to_string(k_));
  }

  std::size_t k() const noexcept { return k_; }
  std::size_t num_colors() const noexcept { return lower_.size(); }
  const std::vector<std::size_t>& lower() const noexcept { return lower_; }
  const std::vector<std::size_t>& upper() const noexcept { return upper_; }
  std::size_t lower(Color c) const { return lower_.at(c); }
  std::size_t upper(Color c) const { return upper_.at(c); }

  std::size_t sum_lower() const noexcept {
    return std::accumulate(lower_.begin(), lower_.end(), std::size_t{0});
  }

  // Same constraints over a larger color universe; added colors get (0, 0).
  FairnessSpec with_num_colors(std::size_t num_colors) const {
    if (num_colors < lower_.size())
      throw InvalidInput("cannot shrink the color universe");
    auto lo = lower_;
    auto up = upper_;
    lo.resize(num_colors, 0);
    up.resize(num_colors, 0);
    return FairnessSpec(k_, std::move(lo), std::move(up));
  }

 private:
  std::size_t k_;
  std::vector<std::size_t> lower_;
  std::vector<std::size_t> upper_;
};

// Which grid candidate and decomposition attempt produced a solution.
struct Provenance {
  std::size_t tau_index = 0;
  std::size_t gamma2_index = 0;
  std::size_t repetition = 0;
  std::uint64_t seed = 0;
  double tau = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  // gamma2 * alpha: a lower bound on the diversity of the emitted set.
  double certificate = 0.0;
};

struct Timings {
  double prune_ms = 0.0;
  double search_ms = 0.0;
  double total_ms = 0.0;
};

struct Solution {
  std::vector<Index> indices;  // sorted ascending
  double score = 0.0;
  bool feasible = false;
  Provenance provenance;
  Timings timings;
  std::string reason;  // set when infeasible
};

// Minimum pairwise distance over distinct pairs; kInfinity when |S| <= 1.
inline double diversity(const Dataset& ds, std::span<const Index> set) {
  for (Index i : set)
    if (i >= ds.size())
      throw std::out_of_range("point index " + std::to_string(i) +
                              " out of range");
  double best = kInfinity;
  for (std::size_t a = 0; a < set.size(); ++a)
    for (std::size_t b = a + 1; b < set.size(); ++b)
      best = std::min(best, ds.distance_unchecked(set[a], set[b]));
  return best;
}

inline std::vector<std::size_t> color_histogram(const Dataset& ds,
                                                std::span<const Index> set,
                                                std::size_t num_colors) {
  std::vector<std::size_t> counts(num_colors, 0);
  for (Index i : set) {
    Color c = ds.color(i);
    if (c < num_colors) ++counts[c];
  }
  return counts;
}

// True iff the set has k distinct valid indices and every per-color count
// lies in [lower, upper].
inline bool validate(const Dataset& ds, std::span<const Index> set,
                     const FairnessSpec& spec) {
  if (set.size() != spec.k()) return false;
  if (spec.num_colors() < ds.num_colors()) return false;
  std::vector<Index> sorted(set.begin(), set.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    return false;
  if (!sorted.empty() && sorted.back() >= ds.size()) return false;
  auto counts = color_histogram(ds, sorted, spec.num_colors());
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c] < spec.lower()[c] || counts[c] > spec.upper()[c]) return false;
  return true;
}

// Bounds proportional to each color's share of the data:
//   lower_i = max(1, floor((1 - slack) k |V_i| / n))
//   upper_i = max(1, ceil((1 + slack) k |V_i| / n))
// A 1e-9 tolerance absorbs representation error before rounding, so exact
// integers such as 1.2 * 10 * 50 / 100 round to themselves.
inline FairnessSpec proportional_spec(const Dataset& ds, std::size_t k,
                                      double slack) {
  if (k == 0) throw InvalidInput("k must be >= 1");
  if (!(slack >= 0.0 && slack < 1.0))
    throw InvalidInput("proportional slack must lie in [0, 1)");
  constexpr double kTol = 1e-9;
  const double n = static_cast<double>(ds.size());
  auto counts = ds.color_counts();
  std::vector<std::size_t> lower(counts.size()), upper(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    double share = static_cast<double>(k) * static_cast<double>(counts[i]);
    double lo = std::floor((1.0 - slack) * share / n + kTol);
    double up = std::ceil((1.0 + slack) * share / n - kTol);
    lower[i] = std::max<std::size_t>(1, static_cast<std::size_t>(std::max(lo, 0.0)));
    upper[i] = std::max<std::size_t>(1, static_cast<std::size_t>(std::max(up, 0.0)));
  }
  return FairnessSpec(k, std::move(lower), std::move(upper));
}

// Reason string if the dataset cannot possibly meet the spec (a color has
// fewer points than its lower bound, or the capped uppers cannot reach k);
// empty otherwise.
inline std::string availability_problem(const Dataset& ds,
                                        const FairnessSpec& spec) {
  if (spec.num_colors() != ds.num_colors())
    return "spec covers " + std::to_string(spec.num_colors()) +
           " colors but the dataset has " + std::to_string(ds.num_colors());
  auto counts = ds.color_counts();
  std::size_t reachable = 0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (spec.lower()[c] > counts[c])
      return "color " + std::to_string(c) + " needs at least " +
             std::to_string(spec.lower()[c]) + " points but has only " +
             std::to_string(counts[c]);
    reachable += std::min(spec.upper()[c], counts[c]);
  }
  if (reachable < spec.k())
    return "only " + std::to_string(reachable) +
           " points can be selected within the upper bounds, k=" +
           std::to_string(spec.k());
  return {};
}

}  // namespace breach
