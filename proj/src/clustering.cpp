#include "zero/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "zero/errors.hpp"
#include "zero/random.hpp"

namespace zero {

ClusterAssignment make_assignment(std::vector<std::size_t> labels) {
  ClusterAssignment a;
  a.k = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  a.labels = std::move(labels);
  return a;
}

namespace {

double squared_distance(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

std::vector<Vector> centroids_of(std::span<const Vector> vectors, const std::vector<std::size_t>& labels,
                                 std::size_t k, std::vector<Vector> previous) {
  const std::size_t dim = vectors.front().size();
  std::vector<Vector> sums(k, Vector(dim, 0.0));
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    ++counts[labels[i]];
    for (std::size_t j = 0; j < dim; ++j) sums[labels[i]][j] += vectors[i][j];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;  // empty cluster keeps its old centre
    for (std::size_t j = 0; j < dim; ++j) previous[c][j] = sums[c][j] / static_cast<double>(counts[c]);
  }
  return previous;
}

double cost(std::span<const Vector> vectors, const std::vector<std::size_t>& labels,
            const std::vector<Vector>& centroids) {
  double s = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i) s += squared_distance(vectors[i], centroids[labels[i]]);
  return s;
}

std::vector<Vector> plus_plus_seeds(std::span<const Vector> vectors, std::size_t k, Rng& rng) {
  std::vector<Vector> centres;
  std::vector<bool> taken(vectors.size(), false);
  const std::size_t first = uniform_index(rng, vectors.size());
  centres.push_back(vectors[first]);
  taken[first] = true;

  std::vector<double> d2(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) d2[i] = squared_distance(vectors[i], centres[0]);

  while (centres.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i) total += taken[i] ? 0.0 : d2[i];
    std::size_t pick = vectors.size();
    if (total > 0.0) {
      double r = uniform01(rng) * total;
      for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (taken[i] || d2[i] <= 0.0) continue;
        pick = i;
        r -= d2[i];
        if (r < 0.0) break;
      }
    } else {
      // Every remaining point coincides with a centre; pick uniformly among them.
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (!taken[i]) rest.push_back(i);
      }
      pick = rest[uniform_index(rng, rest.size())];
    }
    taken[pick] = true;
    centres.push_back(vectors[pick]);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      d2[i] = std::min(d2[i], squared_distance(vectors[i], centres.back()));
    }
  }
  return centres;
}

struct LloydOutcome {
  std::vector<std::size_t> labels;
  KMeansRun run;
};

LloydOutcome lloyd(std::span<const Vector> vectors, std::size_t k, std::size_t max_iterations, Rng& rng) {
  std::vector<Vector> centres = plus_plus_seeds(vectors, k, rng);
  LloydOutcome out;
  out.labels.assign(vectors.size(), k);
  double last = std::numeric_limits<double>::infinity();

  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      std::size_t best = 0;
      double best_d = squared_distance(vectors[i], centres[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double dist = squared_distance(vectors[i], centres[c]);
        if (dist < best_d) {
          best_d = dist;
          best = c;
        }
      }
      if (out.labels[i] != best) {
        out.labels[i] = best;
        changed = true;
      }
    }
    ++out.run.iterations;
    const double j = cost(vectors, out.labels, centres);
    if (j > last + 1e-9 * (1.0 + std::abs(last))) {
      throw std::logic_error("k-means objective increased from " + std::to_string(last) + " to " +
                             std::to_string(j));
    }
    out.run.wcss_history.push_back(j);
    last = j;
    if (!changed) break;
    centres = centroids_of(vectors, out.labels, k, std::move(centres));
  }
  out.run.wcss = within_cluster_ss(vectors, {out.labels, k});
  return out;
}

void check_same_length(const ClusterAssignment& a, const ClusterAssignment& b) {
  if (a.labels.size() != b.labels.size()) {
    throw ArgumentError("assignments have different lengths (" + std::to_string(a.labels.size()) + " vs " +
                        std::to_string(b.labels.size()) + ")");
  }
}

// Remaps arbitrary cluster ids to 0..m-1 and builds the contingency table.
struct Contingency {
  std::vector<std::vector<double>> table;
  std::vector<double> rows, cols;
  double n = 0.0;
};

Contingency contingency(const ClusterAssignment& a, const ClusterAssignment& b) {
  std::map<std::size_t, std::size_t> ra, rb;
  for (auto x : a.labels) ra.try_emplace(x, ra.size());
  for (auto x : b.labels) rb.try_emplace(x, rb.size());
  Contingency c;
  c.table.assign(ra.size(), std::vector<double>(rb.size(), 0.0));
  c.rows.assign(ra.size(), 0.0);
  c.cols.assign(rb.size(), 0.0);
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    const auto r = ra[a.labels[i]];
    const auto s = rb[b.labels[i]];
    c.table[r][s] += 1.0;
    c.rows[r] += 1.0;
    c.cols[s] += 1.0;
  }
  c.n = static_cast<double>(a.labels.size());
  return c;
}

double choose2(double x) { return x * (x - 1.0) / 2.0; }

double entropy(const std::vector<double>& counts, double n) {
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) h -= (c / n) * std::log(c / n);
  }
  return h;
}

}  // namespace

double within_cluster_ss(std::span<const Vector> vectors, const ClusterAssignment& assignment) {
  if (vectors.empty()) return 0.0;
  std::vector<Vector> zero_centres(assignment.k, Vector(vectors.front().size(), 0.0));
  const auto centres = centroids_of(vectors, assignment.labels, assignment.k, std::move(zero_centres));
  return cost(vectors, assignment.labels, centres);
}

KMeansResult kmeans(std::span<const Vector> vectors, const KMeansOptions& options) {
  if (options.k == 0) throw ArgumentError("k must be positive");
  if (options.restarts == 0) throw ArgumentError("restarts must be positive");
  if (options.max_iterations == 0) throw ArgumentError("max_iterations must be positive");
  if (vectors.size() < options.k) {
    throw ArgumentError("k-means needs at least k=" + std::to_string(options.k) + " vectors, got " +
                        std::to_string(vectors.size()));
  }
  const std::size_t dim = vectors.front().size();
  for (const auto& v : vectors) {
    if (v.size() != dim) throw ShapeError("k-means input vectors have non-uniform dimensions");
  }

  KMeansResult result;
  result.wcss = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < options.restarts; ++r) {
    Rng rng = make_rng(options.seed, r);
    LloydOutcome outcome = lloyd(vectors, options.k, options.max_iterations, rng);
    if (outcome.run.wcss < result.wcss) {
      result.wcss = outcome.run.wcss;
      result.best_restart = r;
      result.assignment = {std::move(outcome.labels), options.k};
    }
    result.runs.push_back(std::move(outcome.run));
  }
  return result;
}

ClusterAssignment kmeans(std::span<const Vector> vectors, std::size_t k, std::uint64_t seed,
                         std::size_t restarts) {
  return kmeans(vectors, KMeansOptions{k, seed, restarts, 300}).assignment;
}

double adjusted_rand(const ClusterAssignment& a, const ClusterAssignment& b) {
  check_same_length(a, b);
  if (a.labels.size() < 2) return 1.0;
  const Contingency c = contingency(a, b);
  double index = 0.0;
  for (const auto& row : c.table) {
    for (double x : row) index += choose2(x);
  }
  double sum_rows = 0.0, sum_cols = 0.0;
  for (double x : c.rows) sum_rows += choose2(x);
  for (double x : c.cols) sum_cols += choose2(x);
  const double expected = sum_rows * sum_cols / choose2(c.n);
  const double max_index = 0.5 * (sum_rows + sum_cols);
  // Both partitions trivial in the same way (all-one or all-singletons).
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

VMeasure v_measure(const ClusterAssignment& truth, const ClusterAssignment& pred) {
  check_same_length(truth, pred);
  VMeasure out{1.0, 1.0, 1.0};
  if (truth.labels.empty()) return out;

  const Contingency c = contingency(truth, pred);  // rows = classes, cols = clusters
  const double h_class = entropy(c.rows, c.n);
  const double h_cluster = entropy(c.cols, c.n);

  double h_class_given_cluster = 0.0;
  double h_cluster_given_class = 0.0;
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    for (std::size_t s = 0; s < c.cols.size(); ++s) {
      const double nrs = c.table[r][s];
      if (nrs == 0.0) continue;
      h_class_given_cluster -= (nrs / c.n) * std::log(nrs / c.cols[s]);
      h_cluster_given_class -= (nrs / c.n) * std::log(nrs / c.rows[r]);
    }
  }
  out.homogeneity = h_class == 0.0 ? 1.0 : 1.0 - h_class_given_cluster / h_class;
  out.completeness = h_cluster == 0.0 ? 1.0 : 1.0 - h_cluster_given_class / h_cluster;
  const double sum = out.homogeneity + out.completeness;
  out.v = sum == 0.0 ? 0.0 : 2.0 * out.homogeneity * out.completeness / sum;
  return out;
}

}  // namespace zero
