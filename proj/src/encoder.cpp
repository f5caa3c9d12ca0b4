#include "zero/encoder.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "zero/errors.hpp"
#include "zero/text.hpp"

namespace zero {

EncoderConfig window_config(std::size_t radius, std::size_t embedding_dim) {
  return {radius, embedding_dim * (2 * radius + 1), EncoderMode::WindowAverage};
}

std::string describe(const EncoderConfig& config) {
  if (config.mode == EncoderMode::Precomputed) {
    return "precomputed(D=" + std::to_string(config.feature_dim) + ")";
  }
  return "window-concat(radius=" + std::to_string(config.window_radius) +
         ",D=" + std::to_string(config.feature_dim) + "); not LUKE";
}

TokenFeatures encode(const Sentence& sentence, const EmbeddingTable& table, const EncoderConfig& config) {
  if (config.mode != EncoderMode::WindowAverage) {
    throw ArgumentError("encode requires window-average mode");
  }
  const std::size_t d = table.dimension();
  const std::size_t w = config.window_radius;
  if (config.feature_dim != d * (2 * w + 1)) {
    throw ShapeError("feature_dim " + std::to_string(config.feature_dim) + " != d*(2w+1) = " +
                     std::to_string(d * (2 * w + 1)));
  }

  const std::size_t k = sentence.tokens.size();
  std::vector<const Vector*> lookup(k);
  for (std::size_t i = 0; i < k; ++i) lookup[i] = table.find(to_lower(sentence.tokens[i].surface));

  TokenFeatures out;
  out.vectors.assign(k, Vector(config.feature_dim, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t slot = 0; slot < 2 * w + 1; ++slot) {
      // Position i - w + slot, skipping anything outside [0, k).
      if (i + slot < w || i + slot - w >= k) continue;
      const Vector* v = lookup[i + slot - w];
      if (!v) continue;
      std::copy(v->begin(), v->end(), out.vectors[i].begin() + static_cast<std::ptrdiff_t>(slot * d));
    }
  }
  return out;
}

namespace {

bool valid_identifier(std::string_view id) {
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-' || c == '.' || c == ':' || c == '/' || c == '#';
    if (!ok) return false;
  }
  return !id.empty();
}

}  // namespace

FeatureMap parse_precomputed_features(std::istream& in) {
  FeatureMap out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t file_dim = 0;

  const auto next_content_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!trim(line).empty()) return true;
    }
    return false;
  };

  while (next_content_line()) {
    const auto header = split_whitespace(line);
    if (header.size() != 3) throw FormatError("expected record header 'sentence_id K D'", line_no);
    const std::string id(header[0]);
    if (!valid_identifier(id)) throw FormatError("unsupported sentence identifier '" + id + "'", line_no);
    const auto k = parse_integer<std::size_t>(header[1]);
    const auto d = parse_integer<std::size_t>(header[2]);
    if (!k || !d || *k == 0 || *d == 0) throw FormatError("K and D must be positive integers", line_no);
    if (file_dim != 0 && *d != file_dim) {
      throw FormatError("record D=" + std::to_string(*d) + " differs from D=" + std::to_string(file_dim) +
                            " of earlier records",
                        line_no);
    }
    file_dim = *d;
    if (out.contains(id)) throw FormatError("duplicate sentence identifier '" + id + "'", line_no);

    TokenFeatures features;
    features.vectors.reserve(*k);
    for (std::size_t row = 0; row < *k; ++row) {
      if (!next_content_line()) {
        throw FormatError("record '" + id + "' ends after " + std::to_string(row) + " of " +
                              std::to_string(*k) + " rows",
                          line_no);
      }
      const auto values = split_whitespace(line);
      if (values.size() != *d) {
        throw FormatError("row has " + std::to_string(values.size()) + " values, expected D=" +
                              std::to_string(*d),
                          line_no);
      }
      Vector v(*d);
      for (std::size_t j = 0; j < *d; ++j) {
        const auto x = parse_double(values[j]);
        if (!x) throw FormatError("non-numeric feature value '" + std::string(values[j]) + "'", line_no);
        v[j] = *x;
      }
      features.vectors.push_back(std::move(v));
    }
    out.emplace(id, std::move(features));
  }
  if (in.bad()) throw IoError("error while reading precomputed features");
  return out;
}

FeatureMap load_precomputed_features(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open feature file: " + path);
  try {
    return parse_precomputed_features(in);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_precomputed_features(std::ostream& out, const FeatureMap& features) {
  for (const auto& [id, f] : features) {
    const std::size_t d = f.vectors.empty() ? 0 : f.vectors.front().size();
    out << id << ' ' << f.vectors.size() << ' ' << d << '\n';
    for (const auto& v : f.vectors) {
      for (std::size_t j = 0; j < v.size(); ++j) out << (j ? " " : "") << format_exact(v[j]);
      out << '\n';
    }
  }
}

Featurizer window_featurizer(const EmbeddingTable& table, EncoderConfig config) {
  return [&table, config](const Sentence& s) { return encode(s, table, config); };
}

Featurizer precomputed_featurizer(std::shared_ptr<const FeatureMap> features, std::size_t feature_dim) {
  return [features = std::move(features), feature_dim](const Sentence& s) {
    auto it = features->find(s.id);
    if (it == features->end()) throw DataError("no precomputed features for sentence '" + s.id + "'");
    const auto& f = it->second;
    if (f.vectors.size() != s.tokens.size()) {
      throw DataError("sentence '" + s.id + "' has " + std::to_string(s.tokens.size()) +
                      " tokens but " + std::to_string(f.vectors.size()) + " feature rows");
    }
    for (const auto& v : f.vectors) {
      if (v.size() != feature_dim) {
        throw ShapeError("sentence '" + s.id + "' features have D=" + std::to_string(v.size()) +
                         ", expected " + std::to_string(feature_dim));
      }
    }
    return f;
  };
}

}  // namespace zero
