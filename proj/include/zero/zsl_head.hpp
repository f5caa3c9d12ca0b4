#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "zero/embeddings.hpp"
#include "zero/encoder.hpp"

namespace zero {

/// Affine map from token features (D) into label-embedding space (d), plus a
/// learned pseudo-label vector scoring the non-entity "O" class.
struct ProjectionHead {
  std::size_t embed_dim = 0;    // d
  std::size_t feature_dim = 0;  // D
  std::vector<double> weights;  // d x D, row-major
  Vector bias;                  // d
  Vector o_embedding;           // d; unused unless o_slot
  bool o_slot = true;

  static ProjectionHead zeros(std::size_t embed_dim, std::size_t feature_dim, bool o_slot = true);

  double& weight(std::size_t row, std::size_t col) { return weights[row * feature_dim + col]; }
  double weight(std::size_t row, std::size_t col) const { return weights[row * feature_dim + col]; }

  /// Number of scored classes: labels plus the optional "O" slot.
  std::size_t num_classes(std::size_t num_labels) const { return num_labels + (o_slot ? 1 : 0); }

  bool all_finite() const;
  bool operator==(const ProjectionHead&) const = default;
};

/// weights * h + bias.
Vector project(const ProjectionHead& head, std::span<const double> h);

/// Dot products of `projected` with each label vector, then with o_embedding
/// (last slot) when the head has one.
Vector score(std::span<const double> projected, std::span<const LabelEmbedding> labels,
             const ProjectionHead& head);

/// Max-subtracted softmax.
Vector softmax(std::span<const double> logits);

/// Index of the largest entry, lowest index on ties.
std::size_t argmax(std::span<const double> values);

/// Class index; `labels.size()` means "O".
std::size_t predict(std::span<const double> h, std::span<const LabelEmbedding> labels,
                    const ProjectionHead& head);

/// Name of a predicted class index.
std::string class_name(std::size_t index, std::span<const LabelEmbedding> labels);

struct TokenExample {
  std::span<const double> features;
  std::size_t target = 0;  // class index, `labels.size()` for "O"
};

struct HeadGradient {
  std::vector<double> weights;
  Vector bias;
  Vector o_embedding;
};

struct LossGradient {
  double loss = 0.0;  // mean cross-entropy over the batch
  HeadGradient gradient;
};

/// Mean cross-entropy of softmax(score(project(h))) against the targets and its
/// analytic gradient. Label embeddings are treated as constants.
LossGradient loss_and_gradient(const ProjectionHead& head, std::span<const TokenExample> batch,
                               std::span<const LabelEmbedding> labels);

struct TrainConfig {
  double learning_rate = 0.05;
  std::size_t epochs = 20;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  double init_scale = 0.1;
  bool o_slot = true;

  void validate() const;
};

/// Parameters drawn uniformly from [-init_scale, init_scale].
ProjectionHead init_head(std::size_t embed_dim, std::size_t feature_dim, const TrainConfig& config);

struct TrainingSentence {
  TokenFeatures features;
  std::vector<std::string> gold;  // collapsed labels, "O" for non-entities
};

struct TrainResult {
  ProjectionHead head;
  /// Mean loss over all training tokens after each epoch.
  std::vector<double> loss_trace;
};

/// Mini-batch gradient descent with seeded shuffling. Label vectors stay frozen.
TrainResult train(std::span<const TrainingSentence> data, std::span<const LabelEmbedding> labels,
                  std::size_t feature_dim, const TrainConfig& config);

/// Text checkpoint: `d D o_slot`, then d rows of D weights, the bias row and
/// the o_embedding row. Leading `#` lines are comments.
void save_head(std::ostream& out, const ProjectionHead& head);
ProjectionHead load_head(std::istream& in);

/// CSV `epoch,loss`, epochs numbered from 1.
void write_loss_trace(std::ostream& out, std::span<const double> trace);

}  // namespace zero
