#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "zero/corpus.hpp"
#include "zero/embeddings.hpp"
#include "zero/encoder.hpp"
#include "zero/zsl_head.hpp"

namespace zero {

struct LabelScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // gold tokens carrying the label
};

struct EvalReport {
  std::map<std::string, LabelScore> per_label;
  /// Unweighted mean of per_label f1. Labels absent from both sequences are
  /// left out of the mean and listed in `excluded`.
  double macro_f1 = 0.0;
  std::vector<std::string> excluded;
  std::string config_fingerprint;
};

/// Token-level scores over collapsed labels; "O" never enters the macro average.
EvalReport macro_f1(std::span<const std::string> pred, std::span<const std::string> gold,
                    std::span<const std::string> label_set);

/// One domain ready for experiments: train/test splits and embeddings of its
/// full label set (in label-set order).
struct Domain {
  std::string id;
  DomainCorpus train;
  DomainCorpus test;
  std::vector<LabelEmbedding> labels;
};

/// Sorted union of the train and test label sets.
std::vector<std::string> domain_label_set(const DomainCorpus& train, const DomainCorpus& test);

struct ExperimentSetup {
  Featurizer featurize;
  std::size_t feature_dim = 0;
  TrainConfig train;
  std::string fingerprint;
  /// Grid rows (one head each) may run on separate threads.
  bool parallel = true;
};

/// Decoded label of every token of `corpus`, in corpus order.
std::vector<std::string> predict_corpus(const ProjectionHead& head, const DomainCorpus& corpus,
                                        std::span<const LabelEmbedding> labels, const Featurizer& featurize);

EvalReport evaluate(const ProjectionHead& head, const DomainCorpus& test, std::span<const LabelEmbedding> labels,
                    const Featurizer& featurize);

/// Trains on `sentences`, refusing any sentence whose provenance is not listed.
TrainResult train_on(std::span<const Sentence> sentences, std::span<const LabelEmbedding> labels,
                     const ExperimentSetup& setup, std::span<const std::string> allowed_provenance);

struct GridResult {
  std::vector<std::string> domains;
  std::vector<std::vector<double>> scores;  // [source][target]
  std::vector<std::vector<EvalReport>> reports;
  double off_diagonal_mean = 0.0;
};

/// Rows are source (train) domains, columns target (test) domains. Each
/// target is scored with its own label embeddings.
GridResult run_zero_shot_grid(std::span<const Domain> domains, const ExperimentSetup& setup);

struct FewShotPoint {
  std::size_t n = 0;
  double macro_f1 = 0.0;
  std::map<std::string, std::size_t> shortfall;
};

/// For each n: train on source-train plus n target-train sentences per label,
/// evaluate on target-test. n = 0 is exactly the zero-shot grid cell.
std::vector<FewShotPoint> run_few_shot(const Domain& source, const Domain& target,
                                       std::span<const std::size_t> n_values, std::uint64_t seed,
                                       const ExperimentSetup& setup);

EvalReport run_in_domain(const Domain& domain, const ExperimentSetup& setup);

}  // namespace zero
