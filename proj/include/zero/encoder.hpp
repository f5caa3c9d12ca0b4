#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "zero/corpus.hpp"
#include "zero/embeddings.hpp"

namespace zero {

enum class EncoderMode {
  /// Concatenated embeddings of the tokens in a window around each position.
  WindowAverage,
  /// Features supplied from a file keyed by sentence id.
  Precomputed,
};

struct EncoderConfig {
  std::size_t window_radius = 0;
  std::size_t feature_dim = 0;
  EncoderMode mode = EncoderMode::WindowAverage;
};

/// Window-mode config with feature_dim = embedding_dim * (2 * radius + 1).
EncoderConfig window_config(std::size_t radius, std::size_t embedding_dim);

/// Human-readable encoder name for report headers.
std::string describe(const EncoderConfig& config);

struct TokenFeatures {
  std::vector<Vector> vectors;  // one per token
};

/// Out-of-vocabulary words and positions past either sentence end contribute zeros.
TokenFeatures encode(const Sentence& sentence, const EmbeddingTable& table, const EncoderConfig& config);

using FeatureMap = std::map<std::string, TokenFeatures>;

/// Records are a `sentence_id K D` line followed by K lines of D floats.
/// Every record in a file must share one D.
FeatureMap parse_precomputed_features(std::istream& in);

FeatureMap load_precomputed_features(const std::string& path);

void write_precomputed_features(std::ostream& out, const FeatureMap& features);

/// Sentence -> features. Implementations must be safe to call concurrently.
using Featurizer = std::function<TokenFeatures(const Sentence&)>;

/// Borrows `table`; it must outlive the featurizer.
Featurizer window_featurizer(const EmbeddingTable& table, EncoderConfig config);

/// Looks sentences up by id; checks token count and feature_dim.
Featurizer precomputed_featurizer(std::shared_ptr<const FeatureMap> features, std::size_t feature_dim);

}  // namespace zero
