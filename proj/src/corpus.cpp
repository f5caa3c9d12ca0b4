#include "zero/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "zero/errors.hpp"
#include "zero/log.hpp"
#include "zero/random.hpp"
#include "zero/text.hpp"

namespace zero {

bool is_valid_tag(std::string_view tag) {
  if (tag == kOutsideTag) return true;
  return tag.size() > 2 && (tag.starts_with("B-") || tag.starts_with("I-"));
}

std::string collapse_bio(std::string_view tag) {
  if (tag.size() > 2 && (tag.starts_with("B-") || tag.starts_with("I-"))) {
    return std::string(tag.substr(2));
  }
  return std::string(tag);
}

namespace {

void finish_sentence(std::vector<Token>& tokens, std::vector<Sentence>& out,
                     const std::string& prefix, const std::string& provenance) {
  if (tokens.empty()) return;
  Sentence s;
  s.id = prefix + "#" + std::to_string(out.size());
  s.provenance = provenance;
  s.tokens = std::move(tokens);
  tokens.clear();
  out.push_back(std::move(s));
}

}  // namespace

DomainCorpus parse_conll(std::string_view text, std::string domain_id, const ConllOptions& options) {
  const std::string prefix = options.id_prefix.empty() ? domain_id : options.id_prefix;
  const std::string provenance = options.provenance.empty() ? domain_id : options.provenance;

  std::vector<Sentence> sentences;
  std::vector<Token> current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    const auto fields = split_whitespace(line);
    if (fields.empty()) {
      finish_sentence(current, sentences, prefix, provenance);
      continue;
    }
    if (fields.size() != 2) {
      throw FormatError("expected 'surface tag', found " + std::to_string(fields.size()) + " fields",
                        line_no);
    }
    std::string tag(fields[1]);
    if (!is_valid_tag(tag)) throw FormatError("malformed tag '" + tag + "'", line_no);

    if (tag.starts_with("I-")) {
      const std::string type = tag.substr(2);
      const bool continues = !current.empty() && current.back().gold_tag != kOutsideTag &&
                             collapse_bio(current.back().gold_tag) == type;
      if (!continues) {
        if (options.strict) {
          throw FormatError("'" + tag + "' does not continue an entity of the same type", line_no);
        }
        log_warning(domain_id + " line " + std::to_string(line_no) + ": repaired dangling '" + tag +
                    "' to 'B-" + type + "'");
        tag = "B-" + type;
      }
    }
    current.push_back({std::string(fields[0]), std::move(tag)});
  }
  finish_sentence(current, sentences, prefix, provenance);
  return make_corpus(std::move(domain_id), std::move(sentences));
}

DomainCorpus load_conll(const std::string& path, std::string domain_id, const ConllOptions& options) {
  const std::string text = read_file(path);
  try {
    return parse_conll(text, std::move(domain_id), options);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::string to_conll(const DomainCorpus& corpus) {
  std::string out;
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    if (i) out += '\n';
    for (const auto& t : corpus.sentences[i].tokens) {
      out += t.surface;
      out += ' ';
      out += t.gold_tag;
      out += '\n';
    }
  }
  return out;
}

std::vector<std::string> compute_label_set(const std::vector<Sentence>& sentences) {
  std::set<std::string> types;
  for (const auto& s : sentences) {
    for (const auto& t : s.tokens) {
      if (t.gold_tag != kOutsideTag) types.insert(collapse_bio(t.gold_tag));
    }
  }
  return {types.begin(), types.end()};
}

DomainCorpus make_corpus(std::string domain_id, std::vector<Sentence> sentences) {
  DomainCorpus c;
  c.domain_id = std::move(domain_id);
  c.label_set = compute_label_set(sentences);
  c.sentences = std::move(sentences);
  return c;
}

std::vector<std::string> collapsed_tags(const Sentence& sentence) {
  std::vector<std::string> out;
  out.reserve(sentence.tokens.size());
  for (const auto& t : sentence.tokens) out.push_back(collapse_bio(t.gold_tag));
  return out;
}

FewShotSample sample_few_shot(const DomainCorpus& corpus, std::size_t n, std::uint64_t seed) {
  FewShotSample result;
  result.corpus.domain_id = corpus.domain_id;
  if (n == 0) return result;

  Rng rng = make_rng(seed);
  std::vector<bool> chosen(corpus.sentences.size(), false);
  for (const auto& label : corpus.label_set) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
      const auto& tokens = corpus.sentences[i].tokens;
      if (std::any_of(tokens.begin(), tokens.end(), [&](const Token& t) {
            return t.gold_tag != kOutsideTag && collapse_bio(t.gold_tag) == label;
          })) {
        candidates.push_back(i);
      }
    }
    const std::size_t take = std::min(n, candidates.size());
    if (take < n) {
      result.shortfall[label] = candidates.size();
      log_warning(corpus.domain_id + ": label '" + label + "' has only " +
                  std::to_string(candidates.size()) + " sentences, requested " + std::to_string(n));
    }
    // Partial Fisher-Yates: the first `take` slots are a uniform draw.
    for (std::size_t i = 0; i < take; ++i) {
      std::swap(candidates[i], candidates[i + uniform_index(rng, candidates.size() - i)]);
      chosen[candidates[i]] = true;
    }
  }

  std::vector<Sentence> picked;
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    if (chosen[i]) picked.push_back(corpus.sentences[i]);
  }
  result.corpus = make_corpus(corpus.domain_id, std::move(picked));
  return result;
}

std::string normalize_word(std::string_view surface) {
  return to_lower(strip_punctuation(surface));
}

std::map<std::string, std::size_t> vocabulary(const DomainCorpus& corpus) {
  std::map<std::string, std::size_t> counts;
  for (const auto& s : corpus.sentences) {
    for (const auto& t : s.tokens) {
      auto word = normalize_word(t.surface);
      if (!word.empty()) ++counts[std::move(word)];
    }
  }
  return counts;
}

CorpusSplit split_corpus(const DomainCorpus& corpus, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ArgumentError("train_fraction must lie strictly between 0 and 1");
  }
  std::vector<std::size_t> order(corpus.sentences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng = make_rng(seed);
  shuffle(std::span<std::size_t>(order), rng);

  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(order.size())));
  std::vector<bool> in_train(order.size(), false);
  for (std::size_t i = 0; i < n_train; ++i) in_train[order[i]] = true;

  std::vector<Sentence> train, test;
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    Sentence s = corpus.sentences[i];
    s.provenance = corpus.domain_id + (in_train[i] ? "/train" : "/test");
    (in_train[i] ? train : test).push_back(std::move(s));
  }
  return {make_corpus(corpus.domain_id, std::move(train)), make_corpus(corpus.domain_id, std::move(test))};
}

}  // namespace zero
