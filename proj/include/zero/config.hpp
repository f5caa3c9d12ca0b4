#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "zero/encoder.hpp"
#include "zero/errors.hpp"
#include "zero/zsl_head.hpp"

namespace zero {

/// Invalid or inconsistent configuration. `field()` is `section.key`.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct DomainSpec {
  std::string id;
  std::string train_path;  // explicit split ...
  std::string test_path;
  std::string data_path;   // ... or one file split by `split.*`
};

struct ExperimentConfig {
  std::string base_dir;  // relative paths resolve against this

  // [experiment]
  std::string embedding_path;
  std::string embedding_name;
  std::string output_dir;
  bool normalize_labels = false;
  bool strict_bio = false;
  bool parallel = true;

  // [cluster_embeddings]: extra name = path sources for `cluster`
  std::vector<std::pair<std::string, std::string>> cluster_embeddings;

  // [domain.<id>], in file order
  std::vector<DomainSpec> domains;

  // [encoder]
  EncoderMode encoder_mode = EncoderMode::WindowAverage;
  std::size_t window_radius = 1;
  std::string features_path;

  // [train]
  TrainConfig train;
  std::string train_source;

  // [split]
  double train_fraction = 0.8;
  std::uint64_t split_seed = 0;

  // [fewshot]
  std::string fewshot_source;
  std::string fewshot_target;
  std::vector<std::size_t> n_values;
  std::vector<std::uint64_t> fewshot_seeds;

  // [distance]
  double epsilon = 1.0;
  std::string scores_path;

  // [kmeans]
  std::size_t k = 0;  // 0: number of distinct ground-truth domains
  std::size_t restarts = 10;
  std::uint64_t kmeans_seed = 0;
  std::size_t max_iterations = 300;
  std::string wordlist_path;
};

/// INI text with `[section]` headers and `key = value` lines.
ExperimentConfig parse_config(std::istream& in, const std::string& base_dir);

ExperimentConfig load_config(const std::string& path);

/// Replaces every named seed with `seed`.
void override_seeds(ExperimentConfig& config, std::uint64_t seed);

/// `path` resolved against base_dir; empty stays empty.
std::string resolve_path(const ExperimentConfig& config, const std::string& path);

/// Numeric preconditions shared by all commands.
void validate_common(const ExperimentConfig& config);

/// Throws ConfigError naming `field` unless `path` names an existing file.
void require_file(const ExperimentConfig& config, const std::string& field, const std::string& path);

/// Deterministic `key=value` rendering of every resolved setting.
std::string canonical_text(const ExperimentConfig& config);

}  // namespace zero
