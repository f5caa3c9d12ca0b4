#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace zero {

using Vector = std::vector<double>;

/// Word -> dense vector map of one fixed dimension. Keys are lowercase.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dimension);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// nullptr when the word is absent.
  const Vector* find(const std::string& word) const;
  bool contains(const std::string& word) const { return find(word) != nullptr; }

  /// Returns false (and keeps the existing entry) when `word` is already present.
  /// Throws ShapeError on a vector of the wrong length.
  bool insert(std::string word, Vector vector);

  /// Words in lexicographic order.
  std::vector<std::string> words() const;

  /// Where the table came from, for report headers.
  std::string source;
  std::uint64_t digest = 0;

 private:
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, Vector> entries_;
};

using WordFilter = std::unordered_set<std::string>;

/// Parses `word v1 ... vd` records. A leading `count dim` line is skipped;
/// words are lowercased and the first occurrence of a word wins.
EmbeddingTable parse_embeddings(std::istream& in, const std::optional<WordFilter>& filter = std::nullopt);

EmbeddingTable load_embeddings(const std::string& path,
                               const std::optional<WordFilter>& filter = std::nullopt);

/// Writes in sorted word order with round-trip exact decimals.
void write_embeddings(std::ostream& out, const EmbeddingTable& table, bool with_header = false);

struct LabelEmbedding {
  std::string label;
  Vector vector;
};

struct LabelEmbedOptions {
  bool unit_normalize = false;
};

/// Component words of a label name: lowercased, split on space, hyphen and underscore.
std::vector<std::string> label_components(const std::string& label_name);

/// Mean of the component-word vectors present in `table`.
LabelEmbedding embed_label(const std::string& label_name, const EmbeddingTable& table,
                           const LabelEmbedOptions& options = {});

std::vector<LabelEmbedding> embed_label_set(std::span<const std::string> labels,
                                            const EmbeddingTable& table,
                                            const LabelEmbedOptions& options = {});

}  // namespace zero
