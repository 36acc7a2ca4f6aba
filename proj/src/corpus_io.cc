#include "paranmt/corpus_io.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>
#include <utility>

#include "paranmt/common.h"

namespace paranmt {
namespace {

constexpr UChar32 kReplacement = 0xFFFD;

void AppendUtf8(std::string* out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(reinterpret_cast<uint8_t*>(buf), len, U8_MAX_LENGTH, c, error);
  if (error) {
    len = 0;
    U8_APPEND_UNSAFE(reinterpret_cast<uint8_t*>(buf), len, kReplacement);
  }
  out->append(buf, len);
}

template <typename Fn>
void ForEachCodePoint(std::string_view text, Fn&& fn) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    fn(c < 0 ? kReplacement : c);
  }
}

}  // namespace

TokenizedSentence Tokenize(std::string_view raw) {
  TokenizedSentence out;
  out.raw = std::string(raw);
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      out.tokens.push_back(std::move(current));
      current.clear();
    }
  };
  ForEachCodePoint(raw, [&](UChar32 c) {
    if (u_isUWhiteSpace(c)) {
      flush();
    } else if (u_ispunct(c)) {
      flush();
      AppendUtf8(&current, u_tolower(c));
      flush();
    } else {
      AppendUtf8(&current, u_tolower(c));
    }
  });
  flush();
  return out;
}

std::string Lowercase(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  ForEachCodePoint(text, [&](UChar32 c) { AppendUtf8(&out, u_tolower(c)); });
  return out;
}

std::vector<std::string> SplitCodePoints(std::string_view text) {
  std::vector<std::string> out;
  ForEachCodePoint(text, [&](UChar32 c) {
    std::string cp;
    AppendUtf8(&cp, c);
    out.push_back(std::move(cp));
  });
  return out;
}

PairReader::PairReader(const std::string& path) : path_(path), in_(path) {
  if (!in_) throw Error("cannot open " + path);
}

bool PairReader::Next(ParaphrasePair* pair) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsCommentLine(line)) continue;
    auto fields = SplitTabs(line);
    if (fields.size() != 2 && fields.size() != 3) {
      ThrowAt(path_, line_number_,
              "expected 2 or 3 tab-separated columns, found " +
                  std::to_string(fields.size()));
    }
    std::optional<double> logprob;
    if (fields.size() == 3) {
      logprob = ParseDouble(fields[2]);
      if (!logprob || !std::isfinite(*logprob) || *logprob > 0.0) {
        ThrowAt(path_, line_number_,
                "logprob must be a finite number <= 0, got '" +
                    std::string(fields[2]) + "'");
      }
    }
    TokenizedSentence reference = Tokenize(fields[0]);
    TokenizedSentence translation = Tokenize(fields[1]);
    if (reference.empty() || translation.empty()) {
      ++skipped_;
      continue;
    }
    pair->reference = std::move(reference);
    pair->translation = std::move(translation);
    pair->translation_logprob = logprob;
    return true;
  }
  return false;
}

PairLoadResult LoadPairs(const std::string& path) {
  PairLoadResult result;
  PairReader reader(path);
  ParaphrasePair pair;
  while (reader.Next(&pair)) result.pairs.push_back(std::move(pair));
  result.skipped = reader.skipped();
  return result;
}

void WritePair(std::ostream& out, const ParaphrasePair& pair) {
  out << pair.reference.raw << '\t' << pair.translation.raw;
  if (pair.translation_logprob) {
    out << '\t' << FormatDouble(*pair.translation_logprob);
  }
  out << '\n';
}

void WritePairs(std::ostream& out, const std::vector<ParaphrasePair>& pairs) {
  for (const auto& pair : pairs) WritePair(out, pair);
}

std::vector<StsExample> LoadStsFile(const std::string& path) {
  std::vector<StsExample> examples;
  ForEachTsvLine(path, [&](std::string_view line, size_t line_number) {
    auto fields = SplitTabs(line);
    if (fields.size() != 3) {
      ThrowAt(path, line_number,
              "expected 3 tab-separated columns, found " +
                  std::to_string(fields.size()));
    }
    auto gold = ParseDouble(fields[2]);
    if (!gold) {
      ThrowAt(path, line_number,
              "gold score is not a number: '" + std::string(fields[2]) + "'");
    }
    if (!std::isfinite(*gold) || *gold < 0.0 || *gold > 5.0) {
      ThrowAt(path, line_number,
              "gold score outside [0,5]: " + std::string(fields[2]));
    }
    examples.push_back({Tokenize(fields[0]), Tokenize(fields[1]), *gold});
  });
  return examples;
}

StsCollection LoadSts(const std::string& manifest_path) {
  namespace fs = std::filesystem;
  const fs::path base = fs::path(manifest_path).parent_path();
  StsCollection collection;
  std::map<std::pair<std::string, std::string>, size_t> index;
  ForEachTsvLine(manifest_path, [&](std::string_view line,
                                    size_t line_number) {
    auto fields = SplitTabs(line);
    if (fields.size() != 3) {
      ThrowAt(manifest_path, line_number,
              "expected <path>\\t<year>\\t<name>, found " +
                  std::to_string(fields.size()) + " columns");
    }
    fs::path data{std::string(fields[0])};
    if (data.is_relative()) data = base / data;
    auto examples = LoadStsFile(data.string());
    auto key = std::make_pair(std::string(fields[1]), std::string(fields[2]));
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, collection.groups.size());
      collection.groups.push_back(
          StsGroup{key.first, key.second, std::move(examples)});
    } else {
      auto& dst = collection.groups[it->second].examples;
      for (auto& ex : examples) dst.push_back(std::move(ex));
    }
  });
  return collection;
}

std::vector<ParsedSentence> LoadParses(const std::string& path) {
  std::vector<ParsedSentence> out;
  ForEachTsvLine(path, [&](std::string_view line, size_t line_number) {
    auto fields = SplitTabs(line);
    if (fields.size() != 2) {
      ThrowAt(path, line_number,
              "expected <sentence>\\t<parse>, found " +
                  std::to_string(fields.size()) + " columns");
    }
    out.push_back({Tokenize(fields[0]), std::string(fields[1]), line_number});
  });
  return out;
}

std::vector<TokenizedSentence> LoadSentences(const std::string& path) {
  std::vector<TokenizedSentence> out;
  ForEachTsvLine(path, [&](std::string_view line, size_t line_number) {
    if (line.find('\t') != std::string_view::npos) {
      ThrowAt(path, line_number, "tab inside a sentence");
    }
    out.push_back(Tokenize(line));
  });
  return out;
}

}  // namespace paranmt
