#include "zero/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "zero/errors.hpp"
#include "zero/report.hpp"
#include "zero/text.hpp"

namespace zero {

EmbeddingTable::EmbeddingTable(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw ArgumentError("embedding dimension must be positive");
}

const Vector* EmbeddingTable::find(const std::string& word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

bool EmbeddingTable::insert(std::string word, Vector vector) {
  if (vector.size() != dimension_) {
    throw ShapeError("vector for '" + word + "' has length " + std::to_string(vector.size()) +
                     ", expected " + std::to_string(dimension_));
  }
  return entries_.try_emplace(std::move(word), std::move(vector)).second;
}

std::vector<std::string> EmbeddingTable::words() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [word, _] : entries_) out.push_back(word);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

bool all_integers(std::span<const std::string_view> fields) {
  return std::all_of(fields.begin(), fields.end(),
                     [](std::string_view f) { return parse_integer<long long>(f).has_value(); });
}

}  // namespace

EmbeddingTable parse_embeddings(std::istream& in, const std::optional<WordFilter>& filter) {
  std::optional<WordFilter> lowered;
  if (filter) {
    lowered.emplace();
    for (const auto& w : *filter) lowered->insert(to_lower(w));
  }

  EmbeddingTable table;
  std::size_t dimension = 0;
  std::optional<std::size_t> header_dim;
  bool seen_content = false;
  std::uint64_t digest = kFnvOffset;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    digest = fnv1a(line, digest);
    digest = fnv1a("\n", digest);
    const auto fields = split_whitespace(line);
    if (fields.empty()) continue;

    if (!seen_content) {
      seen_content = true;
      if (fields.size() == 2 && all_integers(fields)) {
        const auto dim = parse_integer<long long>(fields[1]).value();
        if (dim <= 0) throw FormatError("header declares non-positive dimension", line_no);
        header_dim = static_cast<std::size_t>(dim);
        continue;
      }
    }

    if (fields.size() < 2) throw FormatError("record has a word but no vector components", line_no);
    const std::size_t width = fields.size() - 1;
    if (dimension == 0) {
      dimension = width;
      if (header_dim && *header_dim != dimension) {
        throw FormatError("vector length " + std::to_string(width) +
                              " differs from header dimension " + std::to_string(*header_dim),
                          line_no);
      }
      table = EmbeddingTable(dimension);
    } else if (width != dimension) {
      throw FormatError("vector length " + std::to_string(width) + " differs from dimension " +
                            std::to_string(dimension),
                        line_no);
    }

    std::string word = to_lower(fields[0]);
    Vector vec(dimension);
    for (std::size_t i = 0; i < dimension; ++i) {
      const auto value = parse_double(fields[i + 1]);
      if (!value) {
        throw FormatError("non-numeric vector component '" + std::string(fields[i + 1]) + "'",
                          line_no);
      }
      vec[i] = *value;
    }
    if (lowered && !lowered->contains(word)) continue;
    table.insert(std::move(word), std::move(vec));
  }
  if (in.bad()) throw IoError("error while reading embeddings");
  table.digest = digest;
  return table;
}

EmbeddingTable load_embeddings(const std::string& path, const std::optional<WordFilter>& filter) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file: " + path);
  EmbeddingTable table = parse_embeddings(in, filter);
  table.source = path;
  return table;
}

void write_embeddings(std::ostream& out, const EmbeddingTable& table, bool with_header) {
  if (with_header) out << table.size() << ' ' << table.dimension() << '\n';
  for (const auto& word : table.words()) {
    out << word;
    for (double v : *table.find(word)) out << ' ' << format_exact(v);
    out << '\n';
  }
}

std::vector<std::string> label_components(const std::string& label_name) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : to_lower(label_name)) {
    if (c == ' ' || c == '-' || c == '_') {
      if (!current.empty()) parts.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) parts.push_back(std::move(current));
  return parts;
}

LabelEmbedding embed_label(const std::string& label_name, const EmbeddingTable& table,
                           const LabelEmbedOptions& options) {
  if (label_name.empty()) throw ArgumentError("label name must be non-empty");
  const auto parts = label_components(label_name);
  if (parts.empty()) throw ArgumentError("label name '" + label_name + "' has no words");

  // Running mean: exact when every component vector is identical.
  Vector mean(table.dimension(), 0.0);
  std::size_t found = 0;
  std::vector<std::string> absent;
  for (const auto& part : parts) {
    const Vector* v = table.find(part);
    if (!v) {
      absent.push_back(part);
      continue;
    }
    ++found;
    for (std::size_t i = 0; i < mean.size(); ++i) {
      mean[i] += ((*v)[i] - mean[i]) / static_cast<double>(found);
    }
  }
  if (found == 0) {
    std::string list;
    for (const auto& a : absent) list += (list.empty() ? "" : ", ") + a;
    throw MissingEmbeddingError("no embedding for label '" + label_name + "' (absent: " + list + ")",
                                absent);
  }
  if (options.unit_normalize) {
    double norm = 0.0;
    for (double x : mean) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (double& x : mean) x /= norm;
    }
  }
  return {label_name, std::move(mean)};
}

std::vector<LabelEmbedding> embed_label_set(std::span<const std::string> labels,
                                            const EmbeddingTable& table,
                                            const LabelEmbedOptions& options) {
  if (labels.empty()) throw ArgumentError("label set must be non-empty");
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw ArgumentError("duplicate label '" + l + "' in label set");
  }

  std::vector<LabelEmbedding> out;
  std::vector<std::string> failed;
  std::string detail;
  for (const auto& l : labels) {
    try {
      out.push_back(embed_label(l, table, options));
    } catch (const MissingEmbeddingError& e) {
      failed.push_back(l);
      detail += std::string(detail.empty() ? "" : "; ") + e.what();
    }
  }
  if (!failed.empty()) throw MissingEmbeddingError(detail, failed);
  return out;
}

}  // namespace zero
