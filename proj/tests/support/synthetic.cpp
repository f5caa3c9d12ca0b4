#include "synthetic.hpp"

#include <cmath>

#include "zero/corpus.hpp"

namespace zero::testing {

LinearWorld make_world(std::size_t embed_dim, std::size_t feature_dim, double noise, std::uint64_t seed) {
  Rng rng = make_rng(seed, 101);
  LinearWorld w;
  w.embed_dim = embed_dim;
  w.feature_dim = feature_dim;
  w.noise = noise;
  w.mixing.resize(feature_dim * embed_dim);
  for (double& x : w.mixing) x = standard_normal(rng) / std::sqrt(static_cast<double>(embed_dim));
  w.outside.resize(embed_dim);
  double norm = 0.0;
  for (double& x : w.outside) {
    x = standard_normal(rng);
    norm += x * x;
  }
  for (double& x : w.outside) x /= std::sqrt(norm);
  return w;
}

std::vector<LabelEmbedding> random_labels(const std::string& prefix, std::size_t count, std::size_t dim,
                                          std::uint64_t seed) {
  Rng rng = make_rng(seed, 202);
  std::vector<LabelEmbedding> out;
  for (std::size_t i = 0; i < count; ++i) {
    Vector v(dim);
    double norm = 0.0;
    for (double& x : v) {
      x = standard_normal(rng);
      norm += x * x;
    }
    for (double& x : v) x /= std::sqrt(norm);
    out.push_back({prefix + std::to_string(i), std::move(v)});
  }
  return out;
}

namespace {

Vector features_for(const LinearWorld& w, const Vector& v, Rng& rng) {
  Vector h(w.feature_dim, 0.0);
  for (std::size_t r = 0; r < w.feature_dim; ++r) {
    for (std::size_t c = 0; c < w.embed_dim; ++c) h[r] += w.mixing[r * w.embed_dim + c] * v[c];
    h[r] += w.noise * standard_normal(rng);
  }
  return h;
}

DomainCorpus make_split(const LinearWorld& world, const SyntheticSpec& spec, const std::string& split,
                        std::size_t count, Rng& rng, FeatureMap& features) {
  std::vector<Sentence> sentences;
  const std::string tag = spec.id + "/" + split;
  for (std::size_t s = 0; s < count; ++s) {
    Sentence sent;
    sent.id = tag + "#" + std::to_string(s);
    sent.provenance = tag;
    TokenFeatures f;
    for (std::size_t t = 0; t < spec.tokens_per_sentence; ++t) {
      Token tok;
      tok.surface = "w" + std::to_string(t);
      // Guarantee every sentence has at least one entity.
      const bool outside = t > 0 && uniform01(rng) < spec.outside_rate;
      if (outside) {
        tok.gold_tag = "O";
        f.vectors.push_back(features_for(world, world.outside, rng));
      } else {
        const auto& label = spec.labels[uniform_index(rng, spec.labels.size())];
        tok.gold_tag = "B-" + label.label;
        f.vectors.push_back(features_for(world, label.vector, rng));
      }
      sent.tokens.push_back(std::move(tok));
    }
    features.emplace(sent.id, std::move(f));
    sentences.push_back(std::move(sent));
  }
  return make_corpus(spec.id, std::move(sentences));
}

}  // namespace

Domain make_domain(const LinearWorld& world, const SyntheticSpec& spec, FeatureMap& features) {
  Rng rng = make_rng(spec.seed, 303);
  LinearWorld shifted = world;
  if (spec.mixing_shift > 0.0) {
    Rng shift_rng = make_rng(spec.seed, 404);
    const double scale = spec.mixing_shift / std::sqrt(static_cast<double>(world.embed_dim));
    for (double& x : shifted.mixing) x += scale * standard_normal(shift_rng);
  }
  Domain d;
  d.id = spec.id;
  d.train = make_split(shifted, spec, "train", spec.train_sentences, rng, features);
  d.test = make_split(shifted, spec, "test", spec.test_sentences, rng, features);
  // Embeddings in label-set (sorted) order, covering train and test.
  for (const auto& name : domain_label_set(d.train, d.test)) {
    for (const auto& l : spec.labels) {
      if (l.label == name) d.labels.push_back(l);
    }
  }
  return d;
}

SyntheticPair make_transfer_pair(std::uint64_t seed) {
  SyntheticPair pair;
  pair.world = make_world(6, 12, 0.2, seed);
  pair.features = std::make_shared<FeatureMap>();

  SyntheticSpec src;
  src.id = "alpha";
  src.labels = random_labels("a", 30, pair.world.embed_dim, seed + 1);
  src.train_sentences = 150;
  src.test_sentences = 30;
  src.seed = seed + 2;
  pair.source = make_domain(pair.world, src, *pair.features);

  SyntheticSpec tgt;
  tgt.id = "beta";
  tgt.labels = random_labels("b", 4, pair.world.embed_dim, seed + 3);
  tgt.train_sentences = 40;
  tgt.test_sentences = 50;
  tgt.mixing_shift = 0.7;
  tgt.seed = seed + 4;
  pair.target = make_domain(pair.world, tgt, *pair.features);
  return pair;
}

ExperimentSetup precomputed_setup(std::shared_ptr<const FeatureMap> features, std::size_t feature_dim,
                                  const TrainConfig& train) {
  ExperimentSetup setup;
  setup.featurize = precomputed_featurizer(std::move(features), feature_dim);
  setup.feature_dim = feature_dim;
  setup.train = train;
  setup.fingerprint = "synthetic";
  return setup;
}

TrainConfig transfer_train_config() {
  TrainConfig t;
  t.learning_rate = 0.2;
  t.epochs = 30;
  t.batch_size = 16;
  t.seed = 7;
  t.init_scale = 0.05;
  return t;
}

}  // namespace zero::testing
