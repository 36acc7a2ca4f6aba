#include "paranmt/encoders.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "paranmt/common.h"

namespace paranmt {

std::string_view EncoderKindName(EncoderKind kind) {
  switch (kind) {
    case EncoderKind::kWordAvg:
      return "word";
    case EncoderKind::kTrigramAvg:
      return "trigram";
    case EncoderKind::kAdditive:
      return "additive";
    case EncoderKind::kConcat:
      return "concat";
  }
  return "word";
}

EncoderKind ParseEncoderKind(std::string_view name) {
  if (name == "word") return EncoderKind::kWordAvg;
  if (name == "trigram") return EncoderKind::kTrigramAvg;
  if (name == "additive") return EncoderKind::kAdditive;
  if (name == "concat") return EncoderKind::kConcat;
  throw Error("unknown encoder kind '" + std::string(name) +
              "' (expected word, trigram, additive or concat)");
}

bool UsesWords(EncoderKind kind) { return kind != EncoderKind::kTrigramAvg; }
bool UsesTrigrams(EncoderKind kind) { return kind != EncoderKind::kWordAvg; }

Encoder::Encoder(EncoderKind kind, std::optional<EmbeddingMatrix> word,
                 std::optional<EmbeddingMatrix> trigram)
    : kind_(kind), word_(std::move(word)), trigram_(std::move(trigram)) {
  if (UsesWords(kind_) && !word_) {
    throw Error(std::string(EncoderKindName(kind_)) +
                " encoder needs a word store");
  }
  if (UsesTrigrams(kind_) && !trigram_) {
    throw Error(std::string(EncoderKindName(kind_)) +
                " encoder needs a char-trigram store");
  }
  if (word_ && word_->vocab().kind() != UnitKind::kWord) {
    throw Error("word store holds non-word units");
  }
  if (trigram_ && trigram_->vocab().kind() != UnitKind::kCharTrigram) {
    throw Error("trigram store holds non-trigram units");
  }
  if (kind_ == EncoderKind::kAdditive && word_->dim() != trigram_->dim()) {
    throw Error("additive encoder needs equal dims, got " +
                std::to_string(word_->dim()) + " and " +
                std::to_string(trigram_->dim()));
  }
}

size_t Encoder::output_dim() const {
  switch (kind_) {
    case EncoderKind::kWordAvg:
    case EncoderKind::kAdditive:
      return word_->dim();
    case EncoderKind::kTrigramAvg:
      return trigram_->dim();
    case EncoderKind::kConcat:
      return word_->dim() + trigram_->dim();
  }
  return 0;
}

SentenceFeatures Encoder::Featurize(const TokenizedSentence& sentence) const {
  SentenceFeatures f;
  if (word_) {
    for (const auto& token : sentence.tokens) {
      uint32_t id = word_->vocab().Lookup(token);
      if (id != Vocabulary::kNotFound) f.word_ids.push_back(id);
    }
  }
  if (trigram_ && UsesTrigrams(kind_)) {
    for (const auto& token : sentence.tokens) {
      for (const auto& tri : CharTrigrams(token)) {
        uint32_t id = trigram_->vocab().Lookup(tri);
        if (id != Vocabulary::kNotFound) f.trigram_ids.push_back(id);
      }
    }
  }
  return f;
}

void AverageRows(const EmbeddingMatrix& matrix, std::span<const uint32_t> ids,
                 std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  if (ids.empty()) return;
  for (uint32_t id : ids) {
    auto row = matrix.Row(id);
    for (size_t k = 0; k < out.size(); ++k) out[k] += row[k];
  }
  const double inv = 1.0 / static_cast<double>(ids.size());
  for (double& v : out) v *= inv;
}

SentenceVector Encoder::Encode(const SentenceFeatures& f) const {
  SentenceVector out(output_dim(), 0.0);
  switch (kind_) {
    case EncoderKind::kWordAvg:
      AverageRows(*word_, f.word_ids, out);
      break;
    case EncoderKind::kTrigramAvg:
      AverageRows(*trigram_, f.trigram_ids, out);
      break;
    case EncoderKind::kAdditive: {
      SentenceVector tri(trigram_->dim());
      AverageRows(*word_, f.word_ids, out);
      AverageRows(*trigram_, f.trigram_ids, tri);
      for (size_t k = 0; k < out.size(); ++k) out[k] += tri[k];
      break;
    }
    case EncoderKind::kConcat: {
      std::span<double> all(out);
      AverageRows(*word_, f.word_ids, all.first(word_->dim()));
      AverageRows(*trigram_, f.trigram_ids, all.subspan(word_->dim()));
      break;
    }
  }
  return out;
}

SentenceVector Encoder::Encode(const TokenizedSentence& sentence) const {
  return Encode(Featurize(sentence));
}

SentenceVector Encoder::EncodeWords(const TokenizedSentence& sentence) const {
  if (!word_) throw Error("model has no word store for word averaging");
  std::vector<uint32_t> ids;
  for (const auto& token : sentence.tokens) {
    uint32_t id = word_->vocab().Lookup(token);
    if (id != Vocabulary::kNotFound) ids.push_back(id);
  }
  SentenceVector out(word_->dim());
  AverageRows(*word_, ids, out);
  return out;
}

void Encoder::Save(const std::string& path,
                   std::string_view provenance) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  if (!provenance.empty()) out << provenance << '\n';
  out << "paranmt-model v1 " << EncoderKindName(kind_) << ' ' << output_dim()
      << '\n';
  if (word_) WriteStore(out, *word_);
  if (trigram_) WriteStore(out, *trigram_);
  if (!out) throw Error("write failed: " + path);
}

Encoder Encoder::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!IsCommentLine(line)) break;
  }
  const std::string prefix = "paranmt-model v1 ";
  if (line.rfind(prefix, 0) != 0) {
    ThrowAt(path, line_number, "not a paranmt-model v1 file");
  }
  std::string rest = line.substr(prefix.size());
  size_t space = rest.find(' ');
  if (space == std::string::npos) ThrowAt(path, line_number, "bad header");
  EncoderKind kind = ParseEncoderKind(rest.substr(0, space));
  auto declared_dim = ParseInt(rest.substr(space + 1));
  if (!declared_dim) ThrowAt(path, line_number, "bad output dim");

  std::optional<EmbeddingMatrix> word;
  std::optional<EmbeddingMatrix> trigram;
  while (in.peek() != std::char_traits<char>::eof()) {
    EmbeddingMatrix store = ReadStore(in, path, &line_number);
    auto& slot = store.vocab().kind() == UnitKind::kWord ? word : trigram;
    if (slot) ThrowAt(path, line_number, "store kind appears twice");
    slot = std::move(store);
  }
  Encoder encoder(kind, std::move(word), std::move(trigram));
  if (static_cast<long long>(encoder.output_dim()) != *declared_dim) {
    throw Error(path + ": header output dim does not match stores");
  }
  return encoder;
}

double Cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error("cosine: dimension mismatch (" + std::to_string(u.size()) +
                " vs " + std::to_string(v.size()) + ")");
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (size_t k = 0; k < u.size(); ++k) {
    dot += u[k] * v[k];
    uu += u[k] * u[k];
    vv += v[k] * v[k];
  }
  if (uu == 0.0 || vv == 0.0) return 0.0;
  double c = dot / (std::sqrt(uu) * std::sqrt(vv));
  return std::clamp(c, -1.0, 1.0);
}

}  // namespace paranmt
