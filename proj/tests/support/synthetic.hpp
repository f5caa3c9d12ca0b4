#pragma once

// Synthetic domains for end-to-end checks. Token features come from one
// linear model  h = (A + S_domain) v_class + noise,  where v_class is the label's
// embedding (or a fixed "outside" prototype) and S_domain an optional
// domain shift. A head that learns to invert A transfers to label sets it
// never saw; S_domain is what target examples help to correct.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "zero/embeddings.hpp"
#include "zero/encoder.hpp"
#include "zero/evaluation.hpp"
#include "zero/random.hpp"

namespace zero::testing {

struct LinearWorld {
  std::size_t embed_dim = 0;
  std::size_t feature_dim = 0;
  std::vector<double> mixing;  // feature_dim x embed_dim, row-major
  Vector outside;              // prototype of non-entity tokens
  double noise = 0.0;
};

LinearWorld make_world(std::size_t embed_dim, std::size_t feature_dim, double noise, std::uint64_t seed);

/// `count` random unit vectors named `<prefix>0`, `<prefix>1`, ...
std::vector<LabelEmbedding> random_labels(const std::string& prefix, std::size_t count, std::size_t dim,
                                          std::uint64_t seed);

struct SyntheticSpec {
  std::string id;
  std::vector<LabelEmbedding> labels;
  std::size_t train_sentences = 60;
  std::size_t test_sentences = 40;
  std::size_t tokens_per_sentence = 8;
  double outside_rate = 0.5;
  /// Std-dev of a domain-specific perturbation added to the shared mixing
  /// matrix (scaled by 1/sqrt(embed_dim)); 0 keeps the shared model.
  double mixing_shift = 0.0;
  std::uint64_t seed = 0;
};

/// Builds the domain and adds every sentence's features to `features`.
Domain make_domain(const LinearWorld& world, const SyntheticSpec& spec, FeatureMap& features);

/// Same generator, returning the features alongside so callers can compose setups.
struct SyntheticPair {
  LinearWorld world;
  Domain source;
  Domain target;
  std::shared_ptr<FeatureMap> features;
};

/// Two domains with disjoint label sets over one linear model; the target's
/// mixing matrix is shifted, so target examples carry extra information.
SyntheticPair make_transfer_pair(std::uint64_t seed);

ExperimentSetup precomputed_setup(std::shared_ptr<const FeatureMap> features, std::size_t feature_dim,
                                  const TrainConfig& train);

/// Settings that train the synthetic pair to convergence in well under a second.
TrainConfig transfer_train_config();

}  // namespace zero::testing
