#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace zero {

inline constexpr std::string_view kOutsideTag = "O";

struct Token {
  std::string surface;
  std::string gold_tag;  // "O", "B-<type>" or "I-<type>"
};

struct Sentence {
  std::string id;          // stable key, used to look up precomputed features
  std::string provenance;  // "<domain>/<split>" of the file the sentence came from
  std::vector<Token> tokens;
};

/// `label_set` always equals the sorted entity types occurring in `sentences`.
struct DomainCorpus {
  std::string domain_id;
  std::vector<Sentence> sentences;
  std::vector<std::string> label_set;
};

struct ConllOptions {
  /// Reject dangling `I-X` continuations instead of rewriting them to `B-X`.
  bool strict = false;
  /// Sentence ids are `<id_prefix>#<index>`; defaults to the domain id.
  std::string id_prefix;
  /// Provenance tag given to every sentence; defaults to the domain id.
  std::string provenance;
};

bool is_valid_tag(std::string_view tag);

/// "B-X"/"I-X" -> "X", "O" -> "O". Already-collapsed types pass through.
std::string collapse_bio(std::string_view tag);

/// Two-column `surface tag` lines, blank lines between sentences.
DomainCorpus parse_conll(std::string_view text, std::string domain_id, const ConllOptions& options = {});

DomainCorpus load_conll(const std::string& path, std::string domain_id, const ConllOptions& options = {});

std::string to_conll(const DomainCorpus& corpus);

std::vector<std::string> compute_label_set(const std::vector<Sentence>& sentences);

DomainCorpus make_corpus(std::string domain_id, std::vector<Sentence> sentences);

/// Collapsed gold tags of one sentence.
std::vector<std::string> collapsed_tags(const Sentence& sentence);

struct FewShotSample {
  DomainCorpus corpus;
  /// Labels with fewer than n candidate sentences, mapped to how many were available.
  std::map<std::string, std::size_t> shortfall;
};

/// Up to n sentences per label, uniformly without replacement; union kept in corpus order.
FewShotSample sample_few_shot(const DomainCorpus& corpus, std::size_t n, std::uint64_t seed);

/// Lowercase and strip surrounding punctuation; empty for pure punctuation.
std::string normalize_word(std::string_view surface);

std::map<std::string, std::size_t> vocabulary(const DomainCorpus& corpus);

struct CorpusSplit {
  DomainCorpus train;
  DomainCorpus test;
};

/// Seeded sentence-level split; provenance becomes `<domain>/train` or `<domain>/test`.
CorpusSplit split_corpus(const DomainCorpus& corpus, double train_fraction, std::uint64_t seed);

}  // namespace zero
