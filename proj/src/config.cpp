#include "zero/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "zero/text.hpp"

namespace zero {
namespace pt = boost::property_tree;

namespace {

std::string field_name(const std::string& section, const std::string& key) { return section + "." + key; }

bool parse_bool(const std::string& field, const std::string& v) {
  const std::string s = to_lower(trim(v));
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(field, "expected a boolean, got '" + v + "'");
}

template <typename Int>
Int parse_int(const std::string& field, const std::string& v) {
  auto x = parse_integer<Int>(trim(v));
  if (!x) throw ConfigError(field, "expected a non-negative integer, got '" + v + "'");
  return *x;
}

double parse_real(const std::string& field, const std::string& v) {
  auto x = parse_double(trim(v));
  if (!x) throw ConfigError(field, "expected a number, got '" + v + "'");
  return *x;
}

template <typename Int>
std::vector<Int> parse_int_list(const std::string& field, const std::string& v) {
  std::vector<Int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_int<Int>(field, item));
  }
  return out;
}

void check_keys(const std::string& section, const pt::ptree& tree, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : tree) {
    if (!allowed.contains(key)) throw ConfigError(field_name(section, key), "unknown setting");
  }
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& base_dir) {
  pt::ptree root;
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config", "line " + std::to_string(e.line()) + ": " + e.message());
  }

  ExperimentConfig cfg;
  cfg.base_dir = base_dir;
  std::set<std::string> domain_ids;

  for (const auto& [section, tree] : root) {
    if (tree.empty() && !tree.data().empty()) {
      throw ConfigError(section, "settings must appear inside a [section]");
    }
    const auto get = [&](const std::string& key) { return tree.get_optional<std::string>(pt::ptree::path_type(key, '\0')); };
    const auto each = [&](auto&& fn) {
      for (const auto& [key, node] : tree) fn(key, std::string(trim(node.data())));
    };

    if (section == "experiment") {
      check_keys(section, tree, {"embedding_path", "embedding_name", "output_dir", "normalize_labels",
                                 "strict_bio", "parallel"});
      if (auto v = get("embedding_path")) cfg.embedding_path = std::string(trim(*v));
      if (auto v = get("embedding_name")) cfg.embedding_name = std::string(trim(*v));
      if (auto v = get("output_dir")) cfg.output_dir = std::string(trim(*v));
      if (auto v = get("normalize_labels")) cfg.normalize_labels = parse_bool("experiment.normalize_labels", *v);
      if (auto v = get("strict_bio")) cfg.strict_bio = parse_bool("experiment.strict_bio", *v);
      if (auto v = get("parallel")) cfg.parallel = parse_bool("experiment.parallel", *v);
    } else if (section == "cluster_embeddings") {
      each([&](const std::string& key, const std::string& value) { cfg.cluster_embeddings.emplace_back(key, value); });
    } else if (section.starts_with("domain.")) {
      DomainSpec d;
      d.id = section.substr(7);
      if (d.id.empty()) throw ConfigError(section, "domain id is empty");
      if (!domain_ids.insert(d.id).second) throw ConfigError(section, "duplicate domain");
      check_keys(section, tree, {"train", "test", "data"});
      if (auto v = get("train")) d.train_path = std::string(trim(*v));
      if (auto v = get("test")) d.test_path = std::string(trim(*v));
      if (auto v = get("data")) d.data_path = std::string(trim(*v));
      const bool split_files = !d.train_path.empty() || !d.test_path.empty();
      if (split_files && !d.data_path.empty()) {
        throw ConfigError(section + ".data", "give either data or train/test, not both");
      }
      if (split_files && (d.train_path.empty() || d.test_path.empty())) {
        throw ConfigError(section + (d.train_path.empty() ? ".train" : ".test"), "train and test come as a pair");
      }
      if (!split_files && d.data_path.empty()) throw ConfigError(section + ".data", "no corpus file given");
      cfg.domains.push_back(std::move(d));
    } else if (section == "encoder") {
      check_keys(section, tree, {"mode", "window_radius", "features"});
      if (auto v = get("mode")) {
        const std::string m(trim(*v));
        if (m == "window-average") cfg.encoder_mode = EncoderMode::WindowAverage;
        else if (m == "precomputed") cfg.encoder_mode = EncoderMode::Precomputed;
        else throw ConfigError("encoder.mode", "expected window-average or precomputed, got '" + m + "'");
      }
      if (auto v = get("window_radius")) cfg.window_radius = parse_int<std::size_t>("encoder.window_radius", *v);
      if (auto v = get("features")) cfg.features_path = std::string(trim(*v));
    } else if (section == "train") {
      check_keys(section, tree, {"learning_rate", "epochs", "batch_size", "seed", "init_scale", "o_slot", "source"});
      if (auto v = get("learning_rate")) cfg.train.learning_rate = parse_real("train.learning_rate", *v);
      if (auto v = get("epochs")) cfg.train.epochs = parse_int<std::size_t>("train.epochs", *v);
      if (auto v = get("batch_size")) cfg.train.batch_size = parse_int<std::size_t>("train.batch_size", *v);
      if (auto v = get("seed")) cfg.train.seed = parse_int<std::uint64_t>("train.seed", *v);
      if (auto v = get("init_scale")) cfg.train.init_scale = parse_real("train.init_scale", *v);
      if (auto v = get("o_slot")) cfg.train.o_slot = parse_bool("train.o_slot", *v);
      if (auto v = get("source")) cfg.train_source = std::string(trim(*v));
    } else if (section == "split") {
      check_keys(section, tree, {"train_fraction", "seed"});
      if (auto v = get("train_fraction")) cfg.train_fraction = parse_real("split.train_fraction", *v);
      if (auto v = get("seed")) cfg.split_seed = parse_int<std::uint64_t>("split.seed", *v);
    } else if (section == "fewshot") {
      check_keys(section, tree, {"source", "target", "n_values", "seeds"});
      if (auto v = get("source")) cfg.fewshot_source = std::string(trim(*v));
      if (auto v = get("target")) cfg.fewshot_target = std::string(trim(*v));
      if (auto v = get("n_values")) cfg.n_values = parse_int_list<std::size_t>("fewshot.n_values", *v);
      if (auto v = get("seeds")) cfg.fewshot_seeds = parse_int_list<std::uint64_t>("fewshot.seeds", *v);
    } else if (section == "distance") {
      check_keys(section, tree, {"epsilon", "scores"});
      if (auto v = get("epsilon")) cfg.epsilon = parse_real("distance.epsilon", *v);
      if (auto v = get("scores")) cfg.scores_path = std::string(trim(*v));
    } else if (section == "kmeans") {
      check_keys(section, tree, {"k", "restarts", "seed", "max_iterations", "wordlist"});
      if (auto v = get("k")) cfg.k = parse_int<std::size_t>("kmeans.k", *v);
      if (auto v = get("restarts")) cfg.restarts = parse_int<std::size_t>("kmeans.restarts", *v);
      if (auto v = get("seed")) cfg.kmeans_seed = parse_int<std::uint64_t>("kmeans.seed", *v);
      if (auto v = get("max_iterations")) cfg.max_iterations = parse_int<std::size_t>("kmeans.max_iterations", *v);
      if (auto v = get("wordlist")) cfg.wordlist_path = std::string(trim(*v));
    } else {
      throw ConfigError(section, "unknown section");
    }
  }
  if (cfg.fewshot_seeds.empty()) cfg.fewshot_seeds.push_back(cfg.train.seed);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open config file '" + path + "'");
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_config(in, parent.empty() ? "." : parent.string());
}

void override_seeds(ExperimentConfig& config, std::uint64_t seed) {
  config.train.seed = seed;
  config.split_seed = seed;
  config.kmeans_seed = seed;
  config.fewshot_seeds.assign(1, seed);
}

std::string resolve_path(const ExperimentConfig& config, const std::string& path) {
  if (path.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return p.lexically_normal().string();
  return (std::filesystem::path(config.base_dir) / p).lexically_normal().string();
}

void require_file(const ExperimentConfig& config, const std::string& field, const std::string& path) {
  if (path.empty()) throw ConfigError(field, "required but not set");
  const std::string resolved = resolve_path(config, path);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(resolved, ec)) throw ConfigError(field, "file not found: " + resolved);
}

void validate_common(const ExperimentConfig& config) {
  const auto& t = config.train;
  if (!(t.learning_rate >= 0.0)) throw ConfigError("train.learning_rate", "must be non-negative");
  if (t.epochs == 0) throw ConfigError("train.epochs", "must be positive");
  if (t.batch_size == 0) throw ConfigError("train.batch_size", "must be positive");
  if (!(t.init_scale > 0.0)) throw ConfigError("train.init_scale", "must be positive");
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
    throw ConfigError("split.train_fraction", "must lie strictly between 0 and 1");
  }
  if (!(config.epsilon > 0.0)) throw ConfigError("distance.epsilon", "must be strictly positive");
  if (config.restarts == 0) throw ConfigError("kmeans.restarts", "must be positive");
  if (config.max_iterations == 0) throw ConfigError("kmeans.max_iterations", "must be positive");
  if (config.encoder_mode == EncoderMode::Precomputed && config.features_path.empty()) {
    throw ConfigError("encoder.features", "required in precomputed mode");
  }
}

std::string canonical_text(const ExperimentConfig& c) {
  std::ostringstream out;
  const auto kv = [&](const std::string& k, const auto& v) { out << k << '=' << v << '\n'; };
  const auto path = [&](const std::string& k, const std::string& p) { kv(k, resolve_path(c, p)); };
  path("experiment.embedding_path", c.embedding_path);
  kv("experiment.embedding_name", c.embedding_name);
  kv("experiment.normalize_labels", c.normalize_labels);
  kv("experiment.strict_bio", c.strict_bio);
  for (const auto& [name, p] : c.cluster_embeddings) path("cluster_embeddings." + name, p);
  for (const auto& d : c.domains) {
    path("domain." + d.id + ".train", d.train_path);
    path("domain." + d.id + ".test", d.test_path);
    path("domain." + d.id + ".data", d.data_path);
  }
  kv("encoder.mode", c.encoder_mode == EncoderMode::WindowAverage ? "window-average" : "precomputed");
  kv("encoder.window_radius", c.window_radius);
  path("encoder.features", c.features_path);
  kv("train.learning_rate", format_exact(c.train.learning_rate));
  kv("train.epochs", c.train.epochs);
  kv("train.batch_size", c.train.batch_size);
  kv("train.seed", c.train.seed);
  kv("train.init_scale", format_exact(c.train.init_scale));
  kv("train.o_slot", c.train.o_slot);
  kv("train.source", c.train_source);
  kv("split.train_fraction", format_exact(c.train_fraction));
  kv("split.seed", c.split_seed);
  kv("fewshot.source", c.fewshot_source);
  kv("fewshot.target", c.fewshot_target);
  for (auto n : c.n_values) kv("fewshot.n", n);
  for (auto s : c.fewshot_seeds) kv("fewshot.seed", s);
  kv("distance.epsilon", format_exact(c.epsilon));
  path("distance.scores", c.scores_path);
  kv("kmeans.k", c.k);
  kv("kmeans.restarts", c.restarts);
  kv("kmeans.seed", c.kmeans_seed);
  kv("kmeans.max_iterations", c.max_iterations);
  path("kmeans.wordlist", c.wordlist_path);
  return out.str();
}

}  // namespace zero
