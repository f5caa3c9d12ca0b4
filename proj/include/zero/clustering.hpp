#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zero/embeddings.hpp"

namespace zero {

struct ClusterAssignment {
  std::vector<std::size_t> labels;  // cluster index per input, each < k
  std::size_t k = 0;
};

/// k = 1 + largest label; empty input gives k = 0.
ClusterAssignment make_assignment(std::vector<std::size_t> labels);

struct KMeansOptions {
  std::size_t k = 5;
  std::uint64_t seed = 0;
  std::size_t restarts = 10;
  std::size_t max_iterations = 300;
};

struct KMeansRun {
  double wcss = 0.0;
  std::vector<double> wcss_history;  // after every assignment step
  std::size_t iterations = 0;
};

struct KMeansResult {
  ClusterAssignment assignment;
  double wcss = 0.0;
  std::size_t best_restart = 0;
  std::vector<KMeansRun> runs;  // one per restart
};

/// Sum of squared distances from each point to the mean of its cluster.
double within_cluster_ss(std::span<const Vector> vectors, const ClusterAssignment& assignment);

/// Lloyd's algorithm from k-means++ seeding, best of `restarts` by WCSS
/// (ties go to the earliest restart).
KMeansResult kmeans(std::span<const Vector> vectors, const KMeansOptions& options);

ClusterAssignment kmeans(std::span<const Vector> vectors, std::size_t k, std::uint64_t seed,
                         std::size_t restarts);

/// Contingency-table adjusted Rand index.
double adjusted_rand(const ClusterAssignment& a, const ClusterAssignment& b);

struct VMeasure {
  double homogeneity = 0.0;
  double completeness = 0.0;
  double v = 0.0;
};

VMeasure v_measure(const ClusterAssignment& truth, const ClusterAssignment& pred);

}  // namespace zero
