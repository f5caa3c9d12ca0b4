#include "zero/zsl_head.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

#include "zero/errors.hpp"
#include "zero/random.hpp"
#include "zero/text.hpp"

namespace zero {

ProjectionHead ProjectionHead::zeros(std::size_t embed_dim, std::size_t feature_dim, bool o_slot) {
  ProjectionHead head;
  head.embed_dim = embed_dim;
  head.feature_dim = feature_dim;
  head.weights.assign(embed_dim * feature_dim, 0.0);
  head.bias.assign(embed_dim, 0.0);
  head.o_embedding.assign(embed_dim, 0.0);
  head.o_slot = o_slot;
  return head;
}

bool ProjectionHead::all_finite() const {
  const auto finite = [](double x) { return std::isfinite(x); };
  return std::all_of(weights.begin(), weights.end(), finite) &&
         std::all_of(bias.begin(), bias.end(), finite) &&
         std::all_of(o_embedding.begin(), o_embedding.end(), finite);
}

Vector project(const ProjectionHead& head, std::span<const double> h) {
  if (h.size() != head.feature_dim) {
    throw ShapeError("feature vector has length " + std::to_string(h.size()) + ", head expects " +
                     std::to_string(head.feature_dim));
  }
  Vector out(head.bias);
  for (std::size_t r = 0; r < head.embed_dim; ++r) {
    const double* row = head.weights.data() + r * head.feature_dim;
    double acc = 0.0;
    for (std::size_t c = 0; c < head.feature_dim; ++c) acc += row[c] * h[c];
    out[r] += acc;
  }
  return out;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void check_label_dims(std::span<const LabelEmbedding> labels, std::size_t d) {
  for (const auto& l : labels) {
    if (l.vector.size() != d) {
      throw ShapeError("label '" + l.label + "' has dimension " + std::to_string(l.vector.size()) +
                       ", expected " + std::to_string(d));
    }
  }
}

double log_sum_exp(std::span<const double> z) {
  const double m = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double x : z) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

Vector score(std::span<const double> projected, std::span<const LabelEmbedding> labels,
             const ProjectionHead& head) {
  if (projected.size() != head.embed_dim) {
    throw ShapeError("projected vector has length " + std::to_string(projected.size()) +
                     ", expected " + std::to_string(head.embed_dim));
  }
  check_label_dims(labels, head.embed_dim);
  Vector logits;
  logits.reserve(head.num_classes(labels.size()));
  for (const auto& l : labels) logits.push_back(dot(projected, l.vector));
  if (head.o_slot) logits.push_back(dot(projected, head.o_embedding));
  return logits;
}

Vector softmax(std::span<const double> logits) {
  if (logits.empty()) throw ShapeError("softmax of an empty vector");
  const double m = *std::max_element(logits.begin(), logits.end());
  Vector out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    total += out[i];
  }
  for (double& x : out) x /= total;
  return out;
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw ShapeError("argmax of an empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::size_t predict(std::span<const double> h, std::span<const LabelEmbedding> labels,
                    const ProjectionHead& head) {
  // softmax is monotone, so the argmax of the raw logits is the same label.
  return argmax(score(project(head, h), labels, head));
}

std::string class_name(std::size_t index, std::span<const LabelEmbedding> labels) {
  return index < labels.size() ? labels[index].label : std::string(kOutsideTag);
}

LossGradient loss_and_gradient(const ProjectionHead& head, std::span<const TokenExample> batch,
                               std::span<const LabelEmbedding> labels) {
  const std::size_t d = head.embed_dim;
  const std::size_t dim = head.feature_dim;
  const std::size_t classes = head.num_classes(labels.size());
  check_label_dims(labels, d);

  LossGradient out;
  out.gradient.weights.assign(d * dim, 0.0);
  out.gradient.bias.assign(d, 0.0);
  out.gradient.o_embedding.assign(d, 0.0);
  if (batch.empty()) return out;

  Vector du(d);
  for (const auto& ex : batch) {
    if (ex.target >= classes) throw DataError("target class " + std::to_string(ex.target) + " out of range");
    const Vector u = project(head, ex.features);
    const Vector z = score(u, labels, head);
    out.loss += log_sum_exp(z) - z[ex.target];

    Vector dz = softmax(z);
    dz[ex.target] -= 1.0;

    std::fill(du.begin(), du.end(), 0.0);
    for (std::size_t j = 0; j < labels.size(); ++j) {
      for (std::size_t r = 0; r < d; ++r) du[r] += dz[j] * labels[j].vector[r];
    }
    if (head.o_slot) {
      const double dz_o = dz[labels.size()];
      for (std::size_t r = 0; r < d; ++r) {
        du[r] += dz_o * head.o_embedding[r];
        out.gradient.o_embedding[r] += dz_o * u[r];
      }
    }
    for (std::size_t r = 0; r < d; ++r) {
      double* grow = out.gradient.weights.data() + r * dim;
      for (std::size_t c = 0; c < dim; ++c) grow[c] += du[r] * ex.features[c];
      out.gradient.bias[r] += du[r];
    }
  }

  const double scale = 1.0 / static_cast<double>(batch.size());
  out.loss *= scale;
  for (double& g : out.gradient.weights) g *= scale;
  for (double& g : out.gradient.bias) g *= scale;
  for (double& g : out.gradient.o_embedding) g *= scale;
  return out;
}

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ArgumentError("learning_rate must be a finite non-negative number");
  }
  if (epochs == 0) throw ArgumentError("epochs must be positive");
  if (batch_size == 0) throw ArgumentError("batch_size must be positive");
  if (!(init_scale > 0.0) || !std::isfinite(init_scale)) throw ArgumentError("init_scale must be positive");
}

ProjectionHead init_head(std::size_t embed_dim, std::size_t feature_dim, const TrainConfig& config) {
  ProjectionHead head = ProjectionHead::zeros(embed_dim, feature_dim, config.o_slot);
  Rng rng = make_rng(config.seed, 0);
  const double s = config.init_scale;
  for (double& w : head.weights) w = uniform(rng, -s, s);
  for (double& b : head.bias) b = uniform(rng, -s, s);
  for (double& o : head.o_embedding) o = uniform(rng, -s, s);
  if (!head.o_slot) std::fill(head.o_embedding.begin(), head.o_embedding.end(), 0.0);
  return head;
}

namespace {

double mean_loss(const ProjectionHead& head, std::span<const TokenExample> examples,
                 std::span<const LabelEmbedding> labels) {
  if (examples.empty()) return 0.0;
  double total = 0.0;
  for (const auto& ex : examples) {
    const Vector z = score(project(head, ex.features), labels, head);
    total += log_sum_exp(z) - z[ex.target];
  }
  return total / static_cast<double>(examples.size());
}

void step(std::vector<double>& params, const std::vector<double>& grad, double lr) {
  for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr * grad[i];
}

}  // namespace

TrainResult train(std::span<const TrainingSentence> data, std::span<const LabelEmbedding> labels,
                  std::size_t feature_dim, const TrainConfig& config) {
  config.validate();
  if (labels.empty()) throw ArgumentError("training needs at least one label embedding");
  if (feature_dim == 0) throw ArgumentError("feature_dim must be positive");
  const std::size_t d = labels.front().vector.size();
  check_label_dims(labels, d);

  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t j = 0; j < labels.size(); ++j) index.emplace(labels[j].label, j);

  std::vector<TokenExample> examples;
  for (const auto& s : data) {
    if (s.features.vectors.size() != s.gold.size()) {
      throw DataError("sentence has " + std::to_string(s.features.vectors.size()) + " feature rows but " +
                      std::to_string(s.gold.size()) + " gold labels");
    }
    for (std::size_t i = 0; i < s.gold.size(); ++i) {
      const auto& v = s.features.vectors[i];
      if (v.size() != feature_dim) {
        throw ShapeError("token features have D=" + std::to_string(v.size()) + ", expected " +
                         std::to_string(feature_dim));
      }
      std::size_t target;
      if (s.gold[i] == kOutsideTag) {
        if (!config.o_slot) throw DataError("gold label 'O' but the head has no O slot");
        target = labels.size();
      } else if (auto it = index.find(s.gold[i]); it != index.end()) {
        target = it->second;
      } else {
        throw DataError("gold label '" + s.gold[i] + "' is not in the label set");
      }
      examples.push_back({v, target});
    }
  }

  TrainResult result;
  result.head = init_head(d, feature_dim, config);
  ProjectionHead& head = result.head;

  Rng rng = make_rng(config.seed, 1);
  std::vector<TokenExample> batch;
  batch.reserve(config.batch_size);
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle(std::span<TokenExample>(examples), rng);
    for (std::size_t start = 0; start < examples.size(); start += config.batch_size) {
      const std::size_t end = std::min(examples.size(), start + config.batch_size);
      batch.assign(examples.begin() + static_cast<std::ptrdiff_t>(start),
                   examples.begin() + static_cast<std::ptrdiff_t>(end));
      const LossGradient lg = loss_and_gradient(head, batch, labels);
      if (!std::isfinite(lg.loss)) {
        throw DivergenceError("non-finite batch loss in epoch " + std::to_string(epoch), epoch);
      }
      step(head.weights, lg.gradient.weights, config.learning_rate);
      step(head.bias, lg.gradient.bias, config.learning_rate);
      if (head.o_slot) step(head.o_embedding, lg.gradient.o_embedding, config.learning_rate);
      if (!head.all_finite()) {
        throw DivergenceError("non-finite parameters after an update in epoch " + std::to_string(epoch),
                              epoch);
      }
    }
    const double loss = mean_loss(head, examples, labels);
    if (!std::isfinite(loss)) {
      throw DivergenceError("non-finite training loss in epoch " + std::to_string(epoch), epoch);
    }
    result.loss_trace.push_back(loss);
  }
  return result;
}

void save_head(std::ostream& out, const ProjectionHead& head) {
  out << head.embed_dim << ' ' << head.feature_dim << ' ' << (head.o_slot ? 1 : 0) << '\n';
  const auto row = [&](const double* begin, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out << (i ? " " : "") << format_exact(begin[i]);
    out << '\n';
  };
  for (std::size_t r = 0; r < head.embed_dim; ++r) row(head.weights.data() + r * head.feature_dim, head.feature_dim);
  row(head.bias.data(), head.embed_dim);
  row(head.o_embedding.data(), head.embed_dim);
}

ProjectionHead load_head(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  const auto next = [&]() {
    while (std::getline(in, line)) {
      ++line_no;
      const auto t = trim(line);
      if (!t.empty() && t.front() != '#') return;
    }
    throw FormatError("checkpoint ends early", line_no);
  };
  const auto read_row = [&](std::size_t n) {
    next();
    const auto fields = split_whitespace(line);
    if (fields.size() != n) {
      throw FormatError("expected " + std::to_string(n) + " values, found " + std::to_string(fields.size()),
                        line_no);
    }
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = parse_double(fields[i]);
      if (!x) throw FormatError("non-numeric value '" + std::string(fields[i]) + "'", line_no);
      v[i] = *x;
    }
    return v;
  };

  next();
  const auto dims = split_whitespace(line);
  if (dims.size() != 3) throw FormatError("expected 'd D o_slot' header", line_no);
  const auto d = parse_integer<std::size_t>(dims[0]);
  const auto dim = parse_integer<std::size_t>(dims[1]);
  const auto o = parse_integer<int>(dims[2]);
  if (!d || !dim || !o || *d == 0 || *dim == 0 || (*o != 0 && *o != 1)) {
    throw FormatError("invalid checkpoint dimensions", line_no);
  }
  ProjectionHead head = ProjectionHead::zeros(*d, *dim, *o == 1);
  for (std::size_t r = 0; r < *d; ++r) {
    const Vector row = read_row(*dim);
    std::copy(row.begin(), row.end(), head.weights.begin() + static_cast<std::ptrdiff_t>(r * *dim));
  }
  head.bias = read_row(*d);
  head.o_embedding = read_row(*d);
  if (!head.all_finite()) throw FormatError("checkpoint contains non-finite parameters");
  return head;
}

void write_loss_trace(std::ostream& out, std::span<const double> trace) {
  out << "epoch,loss\n";
  for (std::size_t i = 0; i < trace.size(); ++i) out << (i + 1) << ',' << format_exact(trace[i]) << '\n';
}

}  // namespace zero
