#include "zero/evaluation.hpp"

#include <algorithm>
#include <future>
#include <set>

#include "zero/errors.hpp"
#include "zero/log.hpp"

namespace zero {

EvalReport macro_f1(std::span<const std::string> pred, std::span<const std::string> gold,
                    std::span<const std::string> label_set) {
  if (pred.size() != gold.size()) {
    throw ArgumentError("prediction and gold sequences differ in length (" + std::to_string(pred.size()) +
                        " vs " + std::to_string(gold.size()) + ")");
  }
  struct Counts {
    std::size_t tp = 0, fp = 0, fn = 0;
  };
  std::map<std::string, Counts, std::less<>> counts;
  for (const auto& l : label_set) counts[l];

  const auto known = [&](const std::string& l) { return l == kOutsideTag || counts.contains(l); };
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!known(pred[i]) || !known(gold[i])) {
      throw ArgumentError("label '" + (known(pred[i]) ? gold[i] : pred[i]) + "' at position " +
                          std::to_string(i) + " is outside the target label set");
    }
    if (pred[i] == gold[i]) {
      if (gold[i] != kOutsideTag) ++counts[gold[i]].tp;
      continue;
    }
    if (pred[i] != kOutsideTag) ++counts[pred[i]].fp;
    if (gold[i] != kOutsideTag) ++counts[gold[i]].fn;
  }

  EvalReport report;
  double sum = 0.0;
  std::size_t scored = 0;
  for (const auto& [label, c] : counts) {
    if (c.tp + c.fp + c.fn == 0) {
      report.excluded.push_back(label);
      continue;
    }
    LabelScore s;
    s.support = c.tp + c.fn;
    s.precision = c.tp + c.fp ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
    s.recall = c.tp + c.fn ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
    s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    report.per_label.emplace(label, s);
    sum += s.f1;
    ++scored;
  }
  report.macro_f1 = scored ? sum / static_cast<double>(scored) : 0.0;
  if (!report.excluded.empty()) {
    std::string list;
    for (const auto& l : report.excluded) list += (list.empty() ? "" : ", ") + l;
    log_warning("macro F1 excludes labels absent from both prediction and gold: " + list);
  }
  return report;
}

std::vector<std::string> domain_label_set(const DomainCorpus& train, const DomainCorpus& test) {
  std::set<std::string> all(train.label_set.begin(), train.label_set.end());
  all.insert(test.label_set.begin(), test.label_set.end());
  return {all.begin(), all.end()};
}

std::vector<std::string> predict_corpus(const ProjectionHead& head, const DomainCorpus& corpus,
                                        std::span<const LabelEmbedding> labels, const Featurizer& featurize) {
  std::vector<std::string> out;
  for (const auto& s : corpus.sentences) {
    const TokenFeatures f = featurize(s);
    if (f.vectors.size() != s.tokens.size()) {
      throw DataError("featurizer returned " + std::to_string(f.vectors.size()) + " rows for sentence '" +
                      s.id + "' with " + std::to_string(s.tokens.size()) + " tokens");
    }
    for (const auto& h : f.vectors) out.push_back(class_name(predict(h, labels, head), labels));
  }
  return out;
}

EvalReport evaluate(const ProjectionHead& head, const DomainCorpus& test, std::span<const LabelEmbedding> labels,
                    const Featurizer& featurize) {
  std::vector<std::string> gold;
  for (const auto& s : test.sentences) {
    for (const auto& t : s.tokens) gold.push_back(collapse_bio(t.gold_tag));
  }
  std::vector<std::string> label_names;
  for (const auto& l : labels) label_names.push_back(l.label);
  return macro_f1(predict_corpus(head, test, labels, featurize), gold, label_names);
}

TrainResult train_on(std::span<const Sentence> sentences, std::span<const LabelEmbedding> labels,
                     const ExperimentSetup& setup, std::span<const std::string> allowed_provenance) {
  std::vector<TrainingSentence> data;
  data.reserve(sentences.size());
  for (const auto& s : sentences) {
    if (std::find(allowed_provenance.begin(), allowed_provenance.end(), s.provenance) ==
        allowed_provenance.end()) {
      throw std::logic_error("sentence '" + s.id + "' from '" + s.provenance +
                             "' is not allowed in this training set");
    }
    data.push_back({setup.featurize(s), collapsed_tags(s)});
  }
  return train(data, labels, setup.feature_dim, setup.train);
}

namespace {

// Tags a domain's training sentences may carry: the bare domain id (unsplit
// input) or its train split. Test splits never qualify.
std::vector<std::string> training_provenance(const std::string& domain_id) {
  return {domain_id, domain_id + "/train"};
}

std::vector<EvalReport> grid_row(std::span<const Domain> domains, std::size_t row, const ExperimentSetup& setup) {
  const Domain& source = domains[row];
  std::vector<EvalReport> reports;
  try {
    // Only the source's own training sentences may reach the head.
    const auto allowed = training_provenance(source.id);
    const TrainResult trained = train_on(source.train.sentences, source.labels, setup, allowed);
    for (std::size_t col = 0; col < domains.size(); ++col) {
      const Domain& target = domains[col];
      if (target.test.sentences.empty()) {
        throw ArgumentError("domain '" + target.id + "' has an empty test split");
      }
      EvalReport r = evaluate(trained.head, target.test, target.labels, setup.featurize);
      r.config_fingerprint = setup.fingerprint;
      reports.push_back(std::move(r));
    }
  } catch (const Error& e) {
    throw Error("grid row source='" + source.id + "': " + e.what());
  }
  return reports;
}

}  // namespace

GridResult run_zero_shot_grid(std::span<const Domain> domains, const ExperimentSetup& setup) {
  if (domains.size() < 2) throw ArgumentError("the zero-shot grid needs at least 2 domains");
  const std::size_t n = domains.size();

  GridResult grid;
  for (const auto& d : domains) grid.domains.push_back(d.id);
  grid.reports.resize(n);
  if (setup.parallel) {
    std::vector<std::future<std::vector<EvalReport>>> rows;
    for (std::size_t r = 0; r < n; ++r) {
      rows.push_back(std::async(std::launch::async, [&, r] { return grid_row(domains, r, setup); }));
    }
    for (std::size_t r = 0; r < n; ++r) grid.reports[r] = rows[r].get();
  } else {
    for (std::size_t r = 0; r < n; ++r) grid.reports[r] = grid_row(domains, r, setup);
  }

  grid.scores.assign(n, std::vector<double>(n, 0.0));
  double off = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      grid.scores[r][c] = grid.reports[r][c].macro_f1;
      if (r != c) off += grid.scores[r][c];
    }
  }
  grid.off_diagonal_mean = off / static_cast<double>(n * (n - 1));
  return grid;
}

std::vector<FewShotPoint> run_few_shot(const Domain& source, const Domain& target,
                                       std::span<const std::size_t> n_values, std::uint64_t seed,
                                       const ExperimentSetup& setup) {
  if (n_values.empty()) throw ArgumentError("few-shot needs at least one n value");
  if (target.test.sentences.empty()) throw ArgumentError("domain '" + target.id + "' has an empty test split");

  auto allowed = training_provenance(source.id);
  const auto target_tags = training_provenance(target.id);
  allowed.insert(allowed.end(), target_tags.begin(), target_tags.end());

  std::vector<FewShotPoint> points;
  for (const std::size_t n : n_values) {
    const FewShotSample sample = sample_few_shot(target.train, n, seed);

    std::vector<Sentence> sentences = source.train.sentences;
    sentences.insert(sentences.end(), sample.corpus.sentences.begin(), sample.corpus.sentences.end());

    // Source labels first, then target labels that the sample actually contains.
    std::vector<LabelEmbedding> labels = source.labels;
    for (const auto& name : sample.corpus.label_set) {
      const bool present = std::any_of(labels.begin(), labels.end(),
                                       [&](const LabelEmbedding& l) { return l.label == name; });
      if (present) continue;
      auto it = std::find_if(target.labels.begin(), target.labels.end(),
                             [&](const LabelEmbedding& l) { return l.label == name; });
      if (it == target.labels.end()) throw DataError("target label '" + name + "' has no embedding");
      labels.push_back(*it);
    }

    try {
      const TrainResult trained = train_on(sentences, labels, setup, allowed);
      const EvalReport report = evaluate(trained.head, target.test, target.labels, setup.featurize);
      points.push_back({n, report.macro_f1, sample.shortfall});
    } catch (const Error& e) {
      throw Error("few-shot " + source.id + "->" + target.id + " n=" + std::to_string(n) + ": " + e.what());
    }
  }
  return points;
}

EvalReport run_in_domain(const Domain& domain, const ExperimentSetup& setup) {
  if (domain.test.sentences.empty()) throw ArgumentError("domain '" + domain.id + "' has an empty test split");
  const TrainResult trained =
      train_on(domain.train.sentences, domain.labels, setup, training_provenance(domain.id));
  EvalReport r = evaluate(trained.head, domain.test, domain.labels, setup.featurize);
  r.config_fingerprint = setup.fingerprint;
  return r;
}

}  // namespace zero
