#ifndef PARANMT_ENCODERS_H_
#define PARANMT_ENCODERS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "paranmt/corpus_io.h"
#include "paranmt/embedding_store.h"

namespace paranmt {

using SentenceVector = std::vector<double>;

enum class EncoderKind {
  kWordAvg,     // mean of word embeddings
  kTrigramAvg,  // mean of character-trigram embeddings
  kAdditive,    // word_avg + trigram_avg
  kConcat,      // [word_avg; trigram_avg]
};

std::string_view EncoderKindName(EncoderKind kind);
EncoderKind ParseEncoderKind(std::string_view name);
bool UsesWords(EncoderKind kind);
bool UsesTrigrams(EncoderKind kind);

// In-vocabulary unit occurrences of one sentence. Both lists are multisets
// in sentence order; out-of-vocabulary units are dropped.
struct SentenceFeatures {
  std::vector<uint32_t> word_ids;
  std::vector<uint32_t> trigram_ids;
};

class Encoder {
 public:
  Encoder() = default;
  // Throws if a required store is missing or additive dims disagree.
  Encoder(EncoderKind kind, std::optional<EmbeddingMatrix> word,
          std::optional<EmbeddingMatrix> trigram);

  EncoderKind kind() const { return kind_; }
  size_t output_dim() const;

  bool has_word() const { return word_.has_value(); }
  bool has_trigram() const { return trigram_.has_value(); }
  const EmbeddingMatrix& word() const { return *word_; }
  const EmbeddingMatrix& trigram() const { return *trigram_; }
  EmbeddingMatrix& mutable_word() { return *word_; }
  EmbeddingMatrix& mutable_trigram() { return *trigram_; }

  SentenceFeatures Featurize(const TokenizedSentence& sentence) const;

  SentenceVector Encode(const TokenizedSentence& sentence) const;
  SentenceVector Encode(const SentenceFeatures& features) const;

  // Word-averaging view of this model, regardless of its kind. Requires a
  // word store.
  SentenceVector EncodeWords(const TokenizedSentence& sentence) const;

  // Model file: optional '#' lines, "paranmt-model v1 <kind> <output-dim>",
  // then one store section per embedding matrix.
  void Save(const std::string& path, std::string_view provenance = {}) const;
  static Encoder Load(const std::string& path);

 private:
  EncoderKind kind_ = EncoderKind::kWordAvg;
  std::optional<EmbeddingMatrix> word_;
  std::optional<EmbeddingMatrix> trigram_;
};

// Mean of the given rows; zeros when `ids` is empty.
void AverageRows(const EmbeddingMatrix& matrix, std::span<const uint32_t> ids,
                 std::span<double> out);

// Standard cosine clamped to [-1, 1]; 0 when either vector has zero norm.
// Throws on dimension mismatch.
double Cosine(std::span<const double> u, std::span<const double> v);

}  // namespace paranmt

#endif  // PARANMT_ENCODERS_H_
