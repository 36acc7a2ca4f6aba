#ifndef PARANMT_CORPUS_IO_H_
#define PARANMT_CORPUS_IO_H_

#include <cstddef>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace paranmt {

struct TokenizedSentence {
  std::string raw;
  std::vector<std::string> tokens;

  bool empty() const { return tokens.empty(); }
  size_t size() const { return tokens.size(); }
};

// Lowercases, splits on Unicode whitespace and isolates every punctuation
// code point (general category P*) as its own token. Invalid UTF-8 bytes
// are replaced by U+FFFD.
TokenizedSentence Tokenize(std::string_view raw);

// Per-code-point lowercase mapping of a UTF-8 string (the case folding Tokenize uses).
std::string Lowercase(std::string_view text);

// Decodes a UTF-8 token into its code points re-encoded one per string.
std::vector<std::string> SplitCodePoints(std::string_view text);

struct ParaphrasePair {
  TokenizedSentence reference;
  TokenizedSentence translation;
  // Natural-log probability of the whole translation; finite and <= 0.
  std::optional<double> translation_logprob;
};

// Streaming reader over a pairs TSV:
//   <reference>\t<translation>[\t<logprob>]
// Comment lines (see IsCommentLine) are ignored. Degenerate pairs, where
// either side tokenizes to nothing, are skipped and counted.
class PairReader {
 public:
  explicit PairReader(const std::string& path);

  // Returns false at end of file. Throws Error naming the line on malformed
  // input.
  bool Next(ParaphrasePair* pair);

  size_t skipped() const { return skipped_; }
  size_t line_number() const { return line_number_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  size_t line_number_ = 0;
  size_t skipped_ = 0;
};

struct PairLoadResult {
  std::vector<ParaphrasePair> pairs;
  size_t skipped = 0;
};

PairLoadResult LoadPairs(const std::string& path);

// Writes the raw sentence strings back in the pairs format.
void WritePairs(std::ostream& out, const std::vector<ParaphrasePair>& pairs);
void WritePair(std::ostream& out, const ParaphrasePair& pair);

struct StsExample {
  TokenizedSentence sentence_a;
  TokenizedSentence sentence_b;
  double gold = 0.0;  // in [0, 5]
};

struct StsGroup {
  std::string year;
  std::string name;
  std::vector<StsExample> examples;
};

// Groups in order of first appearance of (year, name) in the manifest.
struct StsCollection {
  std::vector<StsGroup> groups;
};

// Manifest rows: <data-file>\t<year>\t<name>. Relative data paths resolve
// against the manifest's directory.
StsCollection LoadSts(const std::string& manifest_path);

// One STS data file: <a>\t<b>\t<gold>.
std::vector<StsExample> LoadStsFile(const std::string& path);

struct ParsedSentence {
  TokenizedSentence sentence;
  std::string bracketed_parse;
  size_t line = 0;  // source line, 0 when not read from a file
};

// Parsed-corpus file: <sentence>\t<bracketed parse>. The parse is not
// validated here; see ParseTemplate.
std::vector<ParsedSentence> LoadParses(const std::string& path);

// One sentence per line; comment lines skipped, empty lines kept.
std::vector<TokenizedSentence> LoadSentences(const std::string& path);

// Reads every non-comment line of a TSV file, reporting line numbers.
template <typename Fn>
void ForEachTsvLine(const std::string& path, Fn&& fn);

}  // namespace paranmt

#include "paranmt/common.h"

namespace paranmt {

template <typename Fn>
void ForEachTsvLine(const std::string& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsCommentLine(line)) continue;
    fn(std::string_view(line), line_number);
  }
}

}  // namespace paranmt

#endif  // PARANMT_CORPUS_IO_H_
