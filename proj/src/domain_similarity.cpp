#include "zero/domain_similarity.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "zero/errors.hpp"

namespace zero {

std::vector<std::string> global_vocabulary(std::span<const DomainCorpus> corpora) {
  std::set<std::string> words;
  for (const auto& c : corpora) {
    for (const auto& [w, _] : vocabulary(c)) words.insert(w);
  }
  return {words.begin(), words.end()};
}

DomainDistribution build_distribution(std::string domain_id, const std::map<std::string, std::size_t>& counts,
                                      const std::vector<std::string>& global_vocab, double epsilon) {
  if (global_vocab.empty()) throw ArgumentError("global vocabulary is empty");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ArgumentError("smoothing epsilon must be strictly positive");
  }
  DomainDistribution dist;
  dist.domain_id = std::move(domain_id);
  dist.global_vocab = global_vocab;
  dist.probs.resize(global_vocab.size());

  double n = 0.0;
  for (std::size_t i = 0; i < global_vocab.size(); ++i) {
    auto it = counts.find(global_vocab[i]);
    const double c = it == counts.end() ? 0.0 : static_cast<double>(it->second);
    dist.probs[i] = c;
    n += c;
  }
  const double denom = n + epsilon * static_cast<double>(global_vocab.size());
  for (double& p : dist.probs) p = (p + epsilon) / denom;
  return dist;
}

DomainDistribution build_distribution(const DomainCorpus& corpus, const std::vector<std::string>& global_vocab,
                                      double epsilon) {
  return build_distribution(corpus.domain_id, vocabulary(corpus), global_vocab, epsilon);
}

double kl_divergence(const DomainDistribution& p, const DomainDistribution& q) {
  if (p.global_vocab != q.global_vocab) {
    throw ArgumentError("distributions '" + p.domain_id + "' and '" + q.domain_id +
                        "' are defined over different vocabularies");
  }
  if (p.probs.size() != p.global_vocab.size() || q.probs.size() != q.global_vocab.size()) {
    throw ShapeError("distribution length does not match its vocabulary");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < p.probs.size(); ++i) {
    if (p.probs[i] > 0.0) total += p.probs[i] * std::log(p.probs[i] / q.probs[i]);
  }
  return total;
}

double transfer_distance(const DomainDistribution& source, const DomainDistribution& target) {
  return kl_divergence(target, source);
}

RegressionFit fit_regression(std::span<const RegressionPoint> points) {
  if (points.size() < 2) throw DegenerateFitError("regression needs at least 2 points");
  const bool constant_x = std::all_of(points.begin(), points.end(),
                                      [&](const RegressionPoint& p) { return p.x == points.front().x; });
  if (constant_x) throw DegenerateFitError("regression needs non-identical x values");

  RegressionFit fit;
  if (points.size() == 2) {
    const auto& a = points[0];
    const auto& b = points[1];
    fit.slope = (b.y - a.y) / (b.x - a.x);
    fit.intercept = a.y - fit.slope * a.x;
    fit.r_squared = a.y == b.y ? 0.0 : 1.0;
    return fit;
  }

  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    mx += p.x;
    my += p.y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : points) {
    const double dx = p.x - mx;
    const double dy = p.y - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 0.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return fit;
}

}  // namespace zero
