#ifndef PARANMT_EMBEDDING_STORE_H_
#define PARANMT_EMBEDDING_STORE_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "paranmt/corpus_io.h"

namespace paranmt {

enum class UnitKind { kWord, kCharTrigram };

std::string_view UnitKindName(UnitKind kind);
UnitKind ParseUnitKind(std::string_view name);

// Trigrams of "^token$" over code points: "cat" -> ^ca, cat, at$.
std::vector<std::string> CharTrigrams(std::string_view token);

class Vocabulary {
 public:
  static constexpr uint32_t kNotFound = UINT32_MAX;

  Vocabulary() = default;
  explicit Vocabulary(UnitKind kind) : kind_(kind) {}

  // Appends a unit; throws on duplicates.
  uint32_t Add(std::string unit);

  uint32_t Lookup(const std::string& unit) const;
  const std::string& UnitAt(uint32_t index) const { return units_.at(index); }

  size_t size() const { return units_.size(); }
  UnitKind kind() const { return kind_; }
  const std::vector<std::string>& units() const { return units_; }

 private:
  UnitKind kind_ = UnitKind::kWord;
  std::vector<std::string> units_;
  std::unordered_map<std::string, uint32_t> index_;
};

// Units with frequency >= min_count, ordered by descending frequency and then
// bytewise. For kCharTrigram every token contributes its padded trigrams.
Vocabulary BuildVocab(std::span<const TokenizedSentence> corpus, UnitKind kind,
                      size_t min_count);

// Row-major n x dim matrix of embeddings, one row per vocabulary unit.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(Vocabulary vocab, size_t dim);

  const Vocabulary& vocab() const { return vocab_; }
  size_t dim() const { return dim_; }
  size_t rows() const { return vocab_.size(); }

  std::span<double> Row(uint32_t index) {
    return {values_.data() + static_cast<size_t>(index) * dim_, dim_};
  }
  std::span<const double> Row(uint32_t index) const {
    return {values_.data() + static_cast<size_t>(index) * dim_, dim_};
  }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

 private:
  Vocabulary vocab_;
  size_t dim_ = 0;
  std::vector<double> values_;
};

// I.i.d. uniform entries on [-0.1, 0.1) from a 64-bit Mersenne Twister.
EmbeddingMatrix InitMatrix(const Vocabulary& vocab, size_t dim, uint64_t seed);

// Text embeddings: optional "<count> <dim>" header, then
// "<unit> v1 ... v_dim" per line.
EmbeddingMatrix LoadPretrained(const std::string& path,
                               UnitKind kind = UnitKind::kWord);

// Overwrites rows of `target` for units that `source` also holds. Returns
// the number of rows copied. Dimensions must agree.
size_t CopyMatchingRows(const EmbeddingMatrix& source,
                        EmbeddingMatrix* target);

// Section body shared by the model file: "store <kind> <rows> <dim>" then
// one line per unit with shortest round-trip decimals.
void WriteStore(std::ostream& out, const EmbeddingMatrix& matrix);
EmbeddingMatrix ReadStore(std::istream& in, const std::string& path,
                          size_t* line_number);

}  // namespace paranmt

#endif  // PARANMT_EMBEDDING_STORE_H_
