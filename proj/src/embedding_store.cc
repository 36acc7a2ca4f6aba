#include "paranmt/embedding_store.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "paranmt/common.h"

namespace paranmt {

std::string_view UnitKindName(UnitKind kind) {
  return kind == UnitKind::kWord ? "word" : "char-trigram";
}

UnitKind ParseUnitKind(std::string_view name) {
  if (name == "word") return UnitKind::kWord;
  if (name == "char-trigram") return UnitKind::kCharTrigram;
  throw Error("unknown unit kind '" + std::string(name) + "'");
}

std::vector<std::string> CharTrigrams(std::string_view token) {
  std::vector<std::string> chars = SplitCodePoints(token);
  chars.insert(chars.begin(), "^");
  chars.push_back("$");
  std::vector<std::string> out;
  if (chars.size() < 3) return out;
  out.reserve(chars.size() - 2);
  for (size_t i = 0; i + 2 < chars.size(); ++i) {
    out.push_back(chars[i] + chars[i + 1] + chars[i + 2]);
  }
  return out;
}

uint32_t Vocabulary::Add(std::string unit) {
  if (index_.count(unit)) throw Error("duplicate unit '" + unit + "'");
  uint32_t id = static_cast<uint32_t>(units_.size());
  index_.emplace(unit, id);
  units_.push_back(std::move(unit));
  return id;
}

uint32_t Vocabulary::Lookup(const std::string& unit) const {
  auto it = index_.find(unit);
  return it == index_.end() ? kNotFound : it->second;
}

Vocabulary BuildVocab(std::span<const TokenizedSentence> corpus, UnitKind kind,
                      size_t min_count) {
  if (min_count < 1) throw Error("BuildVocab: min_count must be >= 1");
  if (corpus.empty()) throw Error("BuildVocab: empty corpus");
  std::unordered_map<std::string, size_t> counts;
  for (const auto& sentence : corpus) {
    for (const auto& token : sentence.tokens) {
      if (kind == UnitKind::kWord) {
        ++counts[token];
      } else {
        for (auto& tri : CharTrigrams(token)) ++counts[std::move(tri)];
      }
    }
  }
  std::vector<std::pair<std::string, size_t>> sorted;
  for (auto& [unit, count] : counts) {
    if (count >= min_count) sorted.emplace_back(unit, count);
  }
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocabulary vocab(kind);
  for (auto& [unit, count] : sorted) vocab.Add(std::move(unit));
  return vocab;
}

EmbeddingMatrix::EmbeddingMatrix(Vocabulary vocab, size_t dim)
    : vocab_(std::move(vocab)), dim_(dim), values_(vocab_.size() * dim, 0.0) {
  if (dim == 0) throw Error("embedding dim must be >= 1");
}

EmbeddingMatrix InitMatrix(const Vocabulary& vocab, size_t dim,
                           uint64_t seed) {
  EmbeddingMatrix matrix(vocab, dim);
  std::mt19937_64 rng(seed);
  // 53 random bits -> [0, 1), mapped onto [-0.1, 0.1).
  for (double& v : matrix.values()) {
    double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    v = -0.1 + 0.2 * unit;
  }
  return matrix;
}

namespace {

std::vector<std::string_view> SplitSpaces(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

void ParseRow(const std::vector<std::string_view>& fields, size_t dim,
              const std::string& path, size_t line_number,
              std::vector<double>* values) {
  if (fields.size() != dim + 1) {
    ThrowAt(path, line_number,
            "expected " + std::to_string(dim) + " values for '" +
                std::string(fields[0]) + "', found " +
                std::to_string(fields.size() - 1));
  }
  for (size_t j = 1; j < fields.size(); ++j) {
    auto v = ParseDouble(fields[j]);
    if (!v || !std::isfinite(*v)) {
      ThrowAt(path, line_number,
              "bad embedding value '" + std::string(fields[j]) + "'");
    }
    values->push_back(*v);
  }
}

}  // namespace

EmbeddingMatrix LoadPretrained(const std::string& path, UnitKind kind) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  Vocabulary vocab(kind);
  std::vector<double> values;
  size_t dim = 0;
  std::optional<size_t> declared_rows;
  std::string line;
  size_t line_number = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = SplitSpaces(line);
    if (fields.empty()) continue;
    if (first) {
      first = false;
      if (fields.size() == 2) {
        auto rows = ParseInt(fields[0]);
        auto d = ParseInt(fields[1]);
        if (rows && d && *rows >= 0 && *d > 0) {
          declared_rows = static_cast<size_t>(*rows);
          dim = static_cast<size_t>(*d);
          continue;
        }
      }
    }
    if (dim == 0) dim = fields.size() - 1;
    if (dim == 0) ThrowAt(path, line_number, "row has no values");
    ParseRow(fields, dim, path, line_number, &values);
    std::string unit(fields[0]);
    if (vocab.Lookup(unit) != Vocabulary::kNotFound) {
      ThrowAt(path, line_number, "duplicate unit '" + unit + "'");
    }
    vocab.Add(std::move(unit));
  }
  if (vocab.size() == 0) throw Error(path + ": no embeddings found");
  if (declared_rows && *declared_rows != vocab.size()) {
    throw Error(path + ": header declares " + std::to_string(*declared_rows) +
                " rows, found " + std::to_string(vocab.size()));
  }
  EmbeddingMatrix matrix(std::move(vocab), dim);
  matrix.values() = std::move(values);
  return matrix;
}

size_t CopyMatchingRows(const EmbeddingMatrix& source,
                        EmbeddingMatrix* target) {
  if (source.dim() != target->dim()) {
    throw Error("pretrained dim " + std::to_string(source.dim()) +
                " does not match model dim " + std::to_string(target->dim()));
  }
  size_t copied = 0;
  for (uint32_t i = 0; i < target->rows(); ++i) {
    uint32_t j = source.vocab().Lookup(target->vocab().UnitAt(i));
    if (j == Vocabulary::kNotFound) continue;
    auto src = source.Row(j);
    std::copy(src.begin(), src.end(), target->Row(i).begin());
    ++copied;
  }
  return copied;
}

void WriteStore(std::ostream& out, const EmbeddingMatrix& matrix) {
  out << "store " << UnitKindName(matrix.vocab().kind()) << ' '
      << matrix.rows() << ' ' << matrix.dim() << '\n';
  for (uint32_t i = 0; i < matrix.rows(); ++i) {
    out << matrix.vocab().UnitAt(i);
    for (double v : matrix.Row(i)) out << ' ' << FormatDouble(v);
    out << '\n';
  }
}

EmbeddingMatrix ReadStore(std::istream& in, const std::string& path,
                          size_t* line_number) {
  std::string line;
  if (!std::getline(in, line)) {
    ThrowAt(path, *line_number + 1, "missing store section");
  }
  ++*line_number;
  auto header = SplitSpaces(line);
  if (header.size() != 4 || header[0] != "store") {
    ThrowAt(path, *line_number, "expected 'store <kind> <rows> <dim>'");
  }
  UnitKind kind = ParseUnitKind(header[1]);
  auto rows = ParseInt(header[2]);
  auto dim = ParseInt(header[3]);
  if (!rows || !dim || *rows < 0 || *dim <= 0) {
    ThrowAt(path, *line_number, "bad store dimensions");
  }
  Vocabulary vocab(kind);
  std::vector<double> values;
  values.reserve(static_cast<size_t>(*rows) * static_cast<size_t>(*dim));
  for (long long r = 0; r < *rows; ++r) {
    if (!std::getline(in, line)) {
      ThrowAt(path, *line_number + 1, "truncated store section");
    }
    ++*line_number;
    auto fields = SplitSpaces(line);
    if (fields.empty()) ThrowAt(path, *line_number, "empty store row");
    ParseRow(fields, static_cast<size_t>(*dim), path, *line_number, &values);
    std::string unit(fields[0]);
    if (vocab.Lookup(unit) != Vocabulary::kNotFound) {
      ThrowAt(path, *line_number, "duplicate unit '" + unit + "'");
    }
    vocab.Add(std::move(unit));
  }
  EmbeddingMatrix matrix(std::move(vocab), static_cast<size_t>(*dim));
  matrix.values() = std::move(values);
  return matrix;
}

}  // namespace paranmt
