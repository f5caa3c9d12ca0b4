#include "zero/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "zero/clustering.hpp"
#include "zero/config.hpp"
#include "zero/corpus.hpp"
#include "zero/domain_similarity.hpp"
#include "zero/embeddings.hpp"
#include "zero/encoder.hpp"
#include "zero/evaluation.hpp"
#include "zero/log.hpp"
#include "zero/report.hpp"
#include "zero/text.hpp"
#include "zero/zsl_head.hpp"

namespace zero {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string source;
  std::string target;
  std::vector<std::size_t> n_values;
  std::string scores_path;
  std::string wordlist_path;
};

// Everything a command has resolved: config plus digests of the inputs it read.
class Session {
 public:
  Session(std::string command, ExperimentConfig config) : command_(std::move(command)), cfg(std::move(config)) {}

  void record_input(const std::string& label, std::uint64_t digest) {
    inputs_.push_back(label + "=" + hex64(digest));
  }

  void record_setting(const std::string& line) { inputs_.push_back(line); }

  std::string fingerprint() const {
    std::string text = "command=" + command_ + "\n" + canonical_text(cfg);
    for (const auto& line : inputs_) text += line + "\n";
    return hex64(fnv1a(text));
  }

  const std::string& command() const { return command_; }

 private:
  std::string command_;
  std::vector<std::string> inputs_;

 public:
  ExperimentConfig cfg;
  std::string encoder_name;
  std::string embedding_name;
};

ReportHeader base_header(const Session& s) {
  ReportHeader h{{"tool", "zero-ner"}, {"command", s.command()}};
  if (!s.encoder_name.empty()) h.emplace_back("encoder", s.encoder_name);
  if (!s.embedding_name.empty()) h.emplace_back("embedding", s.embedding_name);
  h.emplace_back("fingerprint", s.fingerprint());
  return h;
}

fs::path output_dir(const Session& s) {
  const std::string dir = s.cfg.output_dir.empty() ? resolve_path(s.cfg, "out") : resolve_path(s.cfg, s.cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  return dir;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

std::string embedding_display_name(const ExperimentConfig& cfg) {
  if (!cfg.embedding_name.empty()) return cfg.embedding_name;
  return fs::path(cfg.embedding_path).stem().string();
}

// ---------------------------------------------------------------------------
// Loading

struct LoadedDomain {
  std::string id;
  CorpusSplit split;
};

std::vector<LoadedDomain> load_domains(Session& s) {
  const auto& cfg = s.cfg;
  std::vector<LoadedDomain> out;
  for (const auto& spec : cfg.domains) {
    LoadedDomain d;
    d.id = spec.id;
    const auto load = [&](const std::string& path, const std::string& tag) {
      const std::string resolved = resolve_path(cfg, path);
      const std::string text = read_file(resolved);
      s.record_input("corpus:" + tag, fnv1a(text));
      ConllOptions opts;
      opts.strict = cfg.strict_bio;
      opts.id_prefix = tag;
      opts.provenance = tag;
      try {
        return parse_conll(text, spec.id, opts);
      } catch (const FormatError& e) {
        throw FormatError(resolved + ": " + e.what());
      }
    };
    if (!spec.data_path.empty()) {
      DomainCorpus all = load(spec.data_path, spec.id);
      d.split = split_corpus(all, cfg.train_fraction, cfg.split_seed);
      s.record_setting("split:" + spec.id + "=seeded(" + format_exact(cfg.train_fraction) + "," +
                       std::to_string(cfg.split_seed) + ")");
    } else {
      d.split.train = load(spec.train_path, spec.id + "/train");
      d.split.test = load(spec.test_path, spec.id + "/test");
    }
    out.push_back(std::move(d));
  }
  return out;
}

WordFilter corpus_words(const std::vector<LoadedDomain>& domains, bool include_surfaces) {
  WordFilter words;
  for (const auto& d : domains) {
    for (const DomainCorpus* c : {&d.split.train, &d.split.test}) {
      if (include_surfaces) {
        for (const auto& sent : c->sentences) {
          for (const auto& t : sent.tokens) words.insert(to_lower(t.surface));
        }
      }
      for (const auto& label : c->label_set) {
        for (auto& part : label_components(label)) words.insert(std::move(part));
      }
    }
  }
  return words;
}

struct Workbench {
  std::shared_ptr<const EmbeddingTable> table;
  std::vector<Domain> domains;
  ExperimentSetup setup;
};

Workbench prepare(Session& s) {
  auto& cfg = s.cfg;
  Workbench wb;
  auto loaded = load_domains(s);

  const bool window = cfg.encoder_mode == EncoderMode::WindowAverage;
  auto table = std::make_shared<const EmbeddingTable>(
      load_embeddings(resolve_path(cfg, cfg.embedding_path), corpus_words(loaded, window)));
  if (table->dimension() == 0) throw DataError("embedding file yields no vectors for the configured corpora");
  wb.table = table;
  s.record_input("embedding", table->digest);
  s.embedding_name = embedding_display_name(cfg) + " (d=" + std::to_string(table->dimension()) +
                     ", digest " + hex64(table->digest) + ")";

  if (window) {
    const EncoderConfig enc = window_config(cfg.window_radius, table->dimension());
    wb.setup.featurize = [table, enc](const Sentence& sentence) { return encode(sentence, *table, enc); };
    wb.setup.feature_dim = enc.feature_dim;
    s.encoder_name = describe(enc);
  } else {
    const std::string path = resolve_path(cfg, cfg.features_path);
    s.record_input("features", fnv1a(read_file(path)));
    auto features = std::make_shared<const FeatureMap>(load_precomputed_features(path));
    if (features->empty()) throw DataError("precomputed feature file '" + path + "' is empty");
    const std::size_t dim = features->begin()->second.vectors.front().size();
    wb.setup.featurize = precomputed_featurizer(features, dim);
    wb.setup.feature_dim = dim;
    s.encoder_name = describe(EncoderConfig{0, dim, EncoderMode::Precomputed});
  }

  const LabelEmbedOptions label_opts{cfg.normalize_labels};
  for (auto& d : loaded) {
    Domain dom;
    dom.id = d.id;
    const auto labels = domain_label_set(d.split.train, d.split.test);
    if (labels.empty()) throw DataError("domain '" + d.id + "' contains no entity labels");
    dom.labels = embed_label_set(labels, *table, label_opts);
    dom.train = std::move(d.split.train);
    dom.test = std::move(d.split.test);
    wb.domains.push_back(std::move(dom));
  }
  wb.setup.train = cfg.train;
  wb.setup.parallel = cfg.parallel;
  wb.setup.fingerprint = s.fingerprint();
  return wb;
}

void require_corpora(const ExperimentConfig& cfg, std::size_t min_domains, const std::string& command) {
  if (cfg.domains.size() < min_domains) {
    throw ConfigError("domain", command + " needs at least " + std::to_string(min_domains) + " configured domain" +
                                    (min_domains == 1 ? "" : "s") + ", found " + std::to_string(cfg.domains.size()));
  }
  for (const auto& d : cfg.domains) {
    const std::string sec = "domain." + d.id;
    if (!d.data_path.empty()) {
      require_file(cfg, sec + ".data", d.data_path);
    } else {
      require_file(cfg, sec + ".train", d.train_path);
      require_file(cfg, sec + ".test", d.test_path);
    }
  }
}

void require_model_inputs(const ExperimentConfig& cfg) {
  require_file(cfg, "experiment.embedding_path", cfg.embedding_path);
  if (cfg.encoder_mode == EncoderMode::Precomputed) require_file(cfg, "encoder.features", cfg.features_path);
}

const Domain& find_domain(const std::vector<Domain>& domains, const std::string& id, const std::string& field) {
  for (const auto& d : domains) {
    if (d.id == id) return d;
  }
  throw ConfigError(field, "unknown domain '" + id + "'");
}

void check_domain_known(const ExperimentConfig& cfg, const std::string& id, const std::string& field) {
  for (const auto& d : cfg.domains) {
    if (d.id == id) return;
  }
  throw ConfigError(field, "unknown domain '" + id + "'");
}

// ---------------------------------------------------------------------------
// Commands

int cmd_train(Session& s, std::ostream& out) {
  auto& cfg = s.cfg;
  require_corpora(cfg, 1, "train");
  require_model_inputs(cfg);
  const std::string source = cfg.train_source.empty() ? cfg.domains.front().id : cfg.train_source;
  check_domain_known(cfg, source, "train.source");
  s.record_setting("train.source.resolved=" + source);

  Workbench wb = prepare(s);
  const Domain& dom = find_domain(wb.domains, source, "train.source");
  const std::vector<std::string> allowed{dom.id, dom.id + "/train"};
  const TrainResult result = train_on(dom.train.sentences, dom.labels, wb.setup, allowed);

  ReportHeader header = base_header(s);
  header.emplace_back("source", source);
  std::ostringstream ckpt;
  write_report_header(ckpt, header);
  save_head(ckpt, result.head);
  std::ostringstream loss;
  write_report_header(loss, header);
  write_loss_trace(loss, result.loss_trace);

  const fs::path dir = output_dir(s);
  write_text(dir / "head.ckpt", ckpt.str());
  write_text(dir / "loss.csv", loss.str());
  out << "trained on " << source << " (" << dom.train.sentences.size() << " sentences); final loss "
      << format_exact(result.loss_trace.back()) << "\nwrote " << (dir / "head.ckpt").string() << " and "
      << (dir / "loss.csv").string() << '\n';
  return kExitOk;
}

std::string grid_csv(const GridResult& grid) {
  std::ostringstream csv;
  csv << "source";
  for (const auto& d : grid.domains) csv << ',' << d;
  csv << '\n';
  for (std::size_t r = 0; r < grid.domains.size(); ++r) {
    csv << grid.domains[r];
    for (double v : grid.scores[r]) csv << ',' << format_fixed(v);
    csv << '\n';
  }
  csv << "off_diagonal_mean," << format_fixed(grid.off_diagonal_mean) << '\n';
  return csv.str();
}

int cmd_grid(Session& s, std::ostream& out) {
  auto& cfg = s.cfg;
  require_corpora(cfg, 2, "grid");
  require_model_inputs(cfg);
  Workbench wb = prepare(s);
  const GridResult grid = run_zero_shot_grid(wb.domains, wb.setup);

  ReportHeader header = base_header(s);
  header.emplace_back("layout", "rows=source (train), columns=target (test); macro F1");
  std::ostringstream g;
  write_report_header(g, header);
  g << grid_csv(grid);

  // The diagonal is the in-domain table: one row, one column per domain.
  ReportHeader in_header = base_header(s);
  in_header.emplace_back("layout", "in-domain macro F1 (source = target)");
  std::ostringstream in;
  write_report_header(in, in_header);
  in << "model";
  for (const auto& d : grid.domains) in << ',' << d;
  in << "\nZERO-" << embedding_display_name(cfg);
  for (std::size_t i = 0; i < grid.domains.size(); ++i) in << ',' << format_fixed(grid.scores[i][i]);
  in << '\n';

  const fs::path dir = output_dir(s);
  write_text(dir / "grid.csv", g.str());
  write_text(dir / "in_domain.csv", in.str());
  out << grid_csv(grid) << "wrote " << (dir / "grid.csv").string() << '\n';
  return kExitOk;
}

int cmd_fewshot(Session& s, const Options& opt, std::ostream& out) {
  auto& cfg = s.cfg;
  if (!opt.source.empty()) cfg.fewshot_source = opt.source;
  if (!opt.target.empty()) cfg.fewshot_target = opt.target;
  if (!opt.n_values.empty()) cfg.n_values = opt.n_values;
  require_corpora(cfg, 2, "fewshot");
  require_model_inputs(cfg);
  if (cfg.n_values.empty()) throw ConfigError("fewshot.n_values", "at least one n value is required");
  if (cfg.fewshot_source.empty()) throw ConfigError("fewshot.source", "required");
  if (cfg.fewshot_target.empty()) throw ConfigError("fewshot.target", "required");
  check_domain_known(cfg, cfg.fewshot_source, "fewshot.source");
  check_domain_known(cfg, cfg.fewshot_target, "fewshot.target");

  Workbench wb = prepare(s);
  const Domain& source = find_domain(wb.domains, cfg.fewshot_source, "fewshot.source");
  const Domain& target = find_domain(wb.domains, cfg.fewshot_target, "fewshot.target");

  std::vector<double> mean(cfg.n_values.size(), 0.0);
  for (const auto seed : cfg.fewshot_seeds) {
    const auto points = run_few_shot(source, target, cfg.n_values, seed, wb.setup);
    for (std::size_t i = 0; i < points.size(); ++i) mean[i] += points[i].macro_f1;
  }
  for (double& m : mean) m /= static_cast<double>(cfg.fewshot_seeds.size());

  ReportHeader header = base_header(s);
  header.emplace_back("pair", cfg.fewshot_source + " -> " + cfg.fewshot_target);
  header.emplace_back("seeds", std::to_string(cfg.fewshot_seeds.size()));
  std::ostringstream csv;
  write_report_header(csv, header);
  std::ostringstream body;
  body << "n,macro_f1\n";
  for (std::size_t i = 0; i < mean.size(); ++i) body << cfg.n_values[i] << ',' << format_fixed(mean[i]) << '\n';
  csv << body.str();

  const fs::path dir = output_dir(s);
  write_text(dir / "fewshot.csv", csv.str());
  out << body.str() << "wrote " << (dir / "fewshot.csv").string() << '\n';
  return kExitOk;
}

// Grid CSV written by `grid`: [source][target] -> score.
std::map<std::pair<std::string, std::string>, double> read_grid_scores(const std::string& path) {
  const auto lines = strip_comment_lines(read_file(path));
  if (lines.empty()) throw FormatError(path + ": empty score file");
  const auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.emplace_back(trim(cell));
    return cells;
  };
  const auto head = split(lines.front());
  if (head.size() < 2 || head.front() != "source") throw FormatError(path + ": expected a 'source,...' header row");
  std::map<std::pair<std::string, std::string>, double> scores;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i]);
    if (!cells.empty() && cells.front() == "off_diagonal_mean") continue;
    if (cells.size() != head.size()) throw FormatError(path + ": row " + std::to_string(i + 1) + " has the wrong width");
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const auto v = parse_double(cells[c]);
      if (!v) throw FormatError(path + ": non-numeric score '" + cells[c] + "'");
      scores[{cells.front(), head[c]}] = *v;
    }
  }
  return scores;
}

int cmd_domain_distance(Session& s, const Options& opt, std::ostream& out) {
  auto& cfg = s.cfg;
  if (!opt.scores_path.empty()) cfg.scores_path = fs::absolute(opt.scores_path).string();
  require_corpora(cfg, 2, "domain-distance");
  if (!cfg.scores_path.empty()) require_file(cfg, "distance.scores", cfg.scores_path);

  auto loaded = load_domains(s);
  std::vector<DomainCorpus> full;
  for (auto& d : loaded) {
    std::vector<Sentence> all = d.split.train.sentences;
    all.insert(all.end(), d.split.test.sentences.begin(), d.split.test.sentences.end());
    full.push_back(make_corpus(d.id, std::move(all)));
  }
  const auto vocab = global_vocabulary(full);
  std::vector<DomainDistribution> dists;
  for (const auto& c : full) dists.push_back(build_distribution(c, vocab, cfg.epsilon));

  ReportHeader header = base_header(s);
  header.emplace_back("units", "nats");
  header.emplace_back("direction", "kl_nats = D_KL(target || source), the distance of transferring source -> target");
  header.emplace_back("smoothing", "additive epsilon=" + format_exact(cfg.epsilon) + " over |V|=" +
                                       std::to_string(vocab.size()));
  std::ostringstream body;
  body << "source,target,kl_nats\n";
  std::map<std::pair<std::string, std::string>, double> distance;
  for (std::size_t a = 0; a < dists.size(); ++a) {
    for (std::size_t b = 0; b < dists.size(); ++b) {
      if (a == b) continue;
      const double kl = transfer_distance(dists[a], dists[b]);
      distance[{full[a].domain_id, full[b].domain_id}] = kl;
      body << full[a].domain_id << ',' << full[b].domain_id << ',' << format_fixed(kl, 8) << '\n';
    }
  }
  const fs::path dir = output_dir(s);
  std::ostringstream kl_csv;
  write_report_header(kl_csv, header);
  kl_csv << body.str();
  write_text(dir / "kl.csv", kl_csv.str());
  out << body.str() << "wrote " << (dir / "kl.csv").string() << '\n';

  if (!cfg.scores_path.empty()) {
    const std::string path = resolve_path(cfg, cfg.scores_path);
    const auto scores = read_grid_scores(path);
    std::vector<RegressionPoint> points;
    for (const auto& [pair, kl] : distance) {
      auto it = scores.find(pair);
      if (it == scores.end()) {
        throw DataError(path + ": no score for " + pair.first + " -> " + pair.second);
      }
      points.push_back({kl, it->second});
    }
    const RegressionFit fit = fit_regression(points);
    ReportHeader rh = base_header(s);
    rh.emplace_back("x", "kl_nats");
    rh.emplace_back("y", "macro F1 from " + path);
    rh.emplace_back("points", std::to_string(points.size()));
    std::ostringstream reg;
    write_report_header(reg, rh);
    std::ostringstream reg_body;
    reg_body << "slope,intercept,r2\n"
             << format_fixed(fit.slope, 8) << ',' << format_fixed(fit.intercept, 8) << ','
             << format_fixed(fit.r_squared, 8) << '\n';
    reg << reg_body.str();
    write_text(dir / "regression.csv", reg.str());
    out << reg_body.str() << "wrote " << (dir / "regression.csv").string() << '\n';
  }
  return kExitOk;
}

struct WordEntry {
  std::string word;
  std::string domain;
};

std::vector<WordEntry> read_wordlist(const std::string& path) {
  std::vector<WordEntry> out;
  std::set<std::string> seen;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split_whitespace(t);
    if (fields.size() < 2) {
      throw ConfigError("kmeans.wordlist", "line " + std::to_string(line_no) + ": expected 'word domain'");
    }
    std::string word;
    for (std::size_t i = 0; i + 1 < fields.size(); ++i) word += (i ? " " : "") + std::string(fields[i]);
    if (!seen.insert(to_lower(word)).second) {
      throw ConfigError("kmeans.wordlist", "line " + std::to_string(line_no) + ": duplicate word '" + word + "'");
    }
    out.push_back({word, std::string(fields.back())});
  }
  if (out.empty()) throw ConfigError("kmeans.wordlist", "word list is empty");
  return out;
}

int cmd_cluster(Session& s, const Options& opt, std::ostream& out) {
  auto& cfg = s.cfg;
  if (!opt.wordlist_path.empty()) cfg.wordlist_path = fs::absolute(opt.wordlist_path).string();
  require_file(cfg, "kmeans.wordlist", cfg.wordlist_path);

  std::vector<std::pair<std::string, std::string>> sources;
  if (!cfg.embedding_path.empty()) {
    require_file(cfg, "experiment.embedding_path", cfg.embedding_path);
    sources.emplace_back(embedding_display_name(cfg), cfg.embedding_path);
  }
  for (const auto& [name, path] : cfg.cluster_embeddings) {
    require_file(cfg, "cluster_embeddings." + name, path);
    sources.emplace_back(name, path);
  }
  if (sources.empty()) throw ConfigError("experiment.embedding_path", "cluster needs at least one embedding source");

  const std::string wl_path = resolve_path(cfg, cfg.wordlist_path);
  const auto words = read_wordlist(wl_path);
  s.record_input("wordlist", fnv1a(read_file(wl_path)));

  std::map<std::string, std::size_t> domain_index;
  for (const auto& w : words) domain_index.try_emplace(w.domain, domain_index.size());
  const std::size_t k = cfg.k ? cfg.k : domain_index.size();

  WordFilter filter;
  for (const auto& w : words) {
    for (auto& part : label_components(w.word)) filter.insert(std::move(part));
  }

  struct Row {
    std::string source;
    std::size_t used = 0;
    double ari = 0.0;
    double v = 0.0;
  };
  std::vector<Row> rows;
  for (const auto& [name, path] : sources) {
    const EmbeddingTable table = load_embeddings(resolve_path(cfg, path), filter);
    s.record_input("embedding:" + name, table.digest);
    std::vector<Vector> vectors;
    std::vector<std::size_t> truth;
    for (const auto& w : words) {
      try {
        vectors.push_back(embed_label(w.word, table).vector);
        truth.push_back(domain_index.at(w.domain));
      } catch (const MissingEmbeddingError&) {
        log_warning(name + ": '" + w.word + "' is out of vocabulary, skipped");
      }
    }
    if (vectors.empty()) {
      log_warning(name + ": every word is out of vocabulary, source skipped");
      continue;
    }
    if (vectors.size() < k) {
      throw DataError(name + ": only " + std::to_string(vectors.size()) + " words in vocabulary, need k=" +
                      std::to_string(k));
    }
    const KMeansResult km = kmeans(vectors, KMeansOptions{k, cfg.kmeans_seed, cfg.restarts, cfg.max_iterations});
    const ClusterAssignment gold{truth, domain_index.size()};
    rows.push_back({name, vectors.size(), adjusted_rand(gold, km.assignment), v_measure(gold, km.assignment).v});
  }
  if (rows.empty()) throw DataError("all words are out of vocabulary in every embedding source");

  ReportHeader header = base_header(s);
  header.emplace_back("k", std::to_string(k));
  header.emplace_back("restarts", std::to_string(cfg.restarts));
  header.emplace_back("words", std::to_string(words.size()));
  std::ostringstream body;
  body << "embedding_source,adjusted_rand,v_measure\n";
  for (const auto& r : rows) body << r.source << ',' << format_fixed(r.ari) << ',' << format_fixed(r.v) << '\n';
  std::ostringstream csv;
  write_report_header(csv, header);
  csv << body.str();
  const fs::path dir = output_dir(s);
  write_text(dir / "cluster.csv", csv.str());
  out << body.str() << "wrote " << (dir / "cluster.csv").string() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero- and few-shot NER with label embeddings", "zero-ner"};
  app.require_subcommand(1);
  Options opt;
  std::uint64_t seed = 0;
  app.add_option("--config", opt.config_path, "Experiment config (INI)")->required();
  app.add_option("--out", opt.out_dir, "Output directory (overrides experiment.output_dir)");
  auto* seed_opt = app.add_option("--seed", seed, "Replaces every seed in the config");

  auto* train = app.add_subcommand("train", "Train a projection head on one source domain");
  auto* grid = app.add_subcommand("grid", "Zero-shot source x target macro-F1 grid");
  auto* fewshot = app.add_subcommand("fewshot", "Few-shot curve for one domain pair");
  fewshot->add_option("--source", opt.source, "Source domain id");
  fewshot->add_option("--target", opt.target, "Target domain id");
  fewshot->add_option("--n", opt.n_values, "Examples per target label, e.g. 0,1,5,10")->delimiter(',');
  auto* distance = app.add_subcommand("domain-distance", "Pairwise KL divergence and score regression");
  distance->add_option("--scores", opt.scores_path, "Grid CSV to regress against");
  auto* cluster = app.add_subcommand("cluster", "k-means over word embeddings with ARI and V-measure");
  cluster->add_option("--wordlist", opt.wordlist_path, "Lines of 'word domain'");
  app.fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  if (seed_opt->count()) opt.seed = seed;

  std::string command;
  for (auto* sub : {train, grid, fewshot, distance, cluster}) {
    if (sub->parsed()) command = sub->get_name();
  }

  try {
    ExperimentConfig cfg = load_config(opt.config_path);
    if (!opt.out_dir.empty()) cfg.output_dir = fs::absolute(opt.out_dir).string();
    if (opt.seed) override_seeds(cfg, *opt.seed);
    validate_common(cfg);

    Session session(command, std::move(cfg));
    if (command == "train") return cmd_train(session, out);
    if (command == "grid") return cmd_grid(session, out);
    if (command == "fewshot") return cmd_fewshot(session, opt, out);
    if (command == "domain-distance") return cmd_domain_distance(session, opt, out);
    return cmd_cluster(session, opt, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace zero
