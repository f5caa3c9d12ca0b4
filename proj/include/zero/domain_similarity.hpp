#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "zero/corpus.hpp"

namespace zero {

/// Additively smoothed word distribution over a shared vocabulary.
struct DomainDistribution {
  std::string domain_id;
  std::vector<std::string> global_vocab;
  std::vector<double> probs;  // aligned with global_vocab, all > 0, sums to 1
};

/// Sorted union of the vocabularies of `corpora`.
std::vector<std::string> global_vocabulary(std::span<const DomainCorpus> corpora);

/// P(w) = (count(w) + eps) / (N + eps * |V|), N = tokens of the domain that fall in V.
DomainDistribution build_distribution(std::string domain_id, const std::map<std::string, std::size_t>& counts,
                                      const std::vector<std::string>& global_vocab, double epsilon);

DomainDistribution build_distribution(const DomainCorpus& corpus, const std::vector<std::string>& global_vocab,
                                      double epsilon);

/// D_KL(P || Q) in nats.
double kl_divergence(const DomainDistribution& p, const DomainDistribution& q);

/// Distance of moving a model trained on `source` to `target`: D_KL(target || source).
double transfer_distance(const DomainDistribution& source, const DomainDistribution& target);

struct RegressionPoint {
  double x = 0.0;
  double y = 0.0;
};

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;  // squared Pearson correlation, 0 when y is constant
};

RegressionFit fit_regression(std::span<const RegressionPoint> points);

}  // namespace zero
