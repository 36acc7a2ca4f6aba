#ifndef PARANMT_FILTER_H_
#define PARANMT_FILTER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "paranmt/corpus_io.h"

namespace paranmt {

class Encoder;

enum class Criterion { kTrigramOverlap, kParaphrase, kTranslation };

Criterion ParseCriterion(std::string_view name);  // overlap | para | trans

struct FilterScores {
  double trigram_overlap = 0.0;
  double paraphrase_score = 0.0;
  std::optional<double> translation_score;
};

// |tri(a) ∩ tri(b)| / min(|tri(a)|, |tri(b)|) over word-trigram multisets;
// 0 when either side has fewer than 3 tokens.
double TrigramOverlap(const TokenizedSentence& a, const TokenizedSentence& b);

// Cosine of the word-averaged encodings of both sides.
double ParaphraseScore(const ParaphrasePair& pair, const Encoder& scorer);

// translation_logprob / translation length. Throws when no logprob.
double TranslationScore(const ParaphrasePair& pair);

FilterScores ScoreAll(const ParaphrasePair& pair, const Encoder* scorer);

// One score per pair under the chosen criterion, in input order.
std::vector<double> ScorePairs(std::span<const ParaphrasePair> pairs,
                               Criterion criterion, const Encoder* scorer,
                               int threads = 1);

struct DecileSplit {
  std::array<std::vector<size_t>, 10> bins;

  // Bin number of every input index.
  std::vector<int> Assignments(size_t n) const;
};

// Stable ascending sort by score, then 10 contiguous bins with the larger
// (ceil) bins first.
DecileSplit SplitDeciles(std::span<const double> scores);

struct SampleResult {
  std::vector<size_t> indices;  // ascending pair indices
  size_t eligible = 0;
  size_t shortfall = 0;  // n - selected when too few pairs qualify
};

// Uniform sample without replacement from pairs whose bin is in `bins` and
// whose two sides both have at most `max_len` tokens.
SampleResult SampleTrainingSet(std::span<const ParaphrasePair> pairs,
                               std::span<const int> bin_of_pair,
                               std::span<const int> bins, size_t max_len,
                               size_t n, uint64_t seed);

}  // namespace paranmt

#endif  // PARANMT_FILTER_H_
