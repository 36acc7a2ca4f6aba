#include "paranmt/filter.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <tuple>

#include "paranmt/common.h"
#include "paranmt/encoders.h"

namespace paranmt {

Criterion ParseCriterion(std::string_view name) {
  if (name == "overlap") return Criterion::kTrigramOverlap;
  if (name == "para") return Criterion::kParaphrase;
  if (name == "trans") return Criterion::kTranslation;
  throw Error("unknown criterion '" + std::string(name) +
              "' (expected overlap, para or trans)");
}

namespace {

using Trigram = std::tuple<std::string_view, std::string_view, std::string_view>;

std::map<Trigram, size_t> WordTrigrams(const TokenizedSentence& s) {
  std::map<Trigram, size_t> out;
  for (size_t i = 0; i + 2 < s.tokens.size(); ++i) {
    ++out[{s.tokens[i], s.tokens[i + 1], s.tokens[i + 2]}];
  }
  return out;
}

}  // namespace

double TrigramOverlap(const TokenizedSentence& a, const TokenizedSentence& b) {
  if (a.size() < 3 || b.size() < 3) return 0.0;
  auto ta = WordTrigrams(a);
  auto tb = WordTrigrams(b);
  size_t shared = 0;
  for (const auto& [tri, count] : ta) {
    auto it = tb.find(tri);
    if (it != tb.end()) shared += std::min(count, it->second);
  }
  const size_t smaller = std::min(a.size(), b.size()) - 2;
  return static_cast<double>(shared) / static_cast<double>(smaller);
}

double ParaphraseScore(const ParaphrasePair& pair, const Encoder& scorer) {
  return Cosine(scorer.EncodeWords(pair.reference),
                scorer.EncodeWords(pair.translation));
}

double TranslationScore(const ParaphrasePair& pair) {
  if (!pair.translation_logprob) {
    throw Error("translation score needs a logprob column");
  }
  if (pair.translation.empty()) {
    throw Error("translation score of an empty translation");
  }
  return *pair.translation_logprob /
         static_cast<double>(pair.translation.size());
}

FilterScores ScoreAll(const ParaphrasePair& pair, const Encoder* scorer) {
  FilterScores s;
  s.trigram_overlap = TrigramOverlap(pair.reference, pair.translation);
  if (scorer) s.paraphrase_score = ParaphraseScore(pair, *scorer);
  if (pair.translation_logprob) s.translation_score = TranslationScore(pair);
  return s;
}

std::vector<double> ScorePairs(std::span<const ParaphrasePair> pairs,
                               Criterion criterion, const Encoder* scorer,
                               int threads) {
  if (criterion == Criterion::kParaphrase && scorer == nullptr) {
    throw Error("paraphrase criterion needs a scorer model");
  }
  std::vector<double> scores(pairs.size());
  ParallelFor(pairs.size(), threads, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      switch (criterion) {
        case Criterion::kTrigramOverlap:
          scores[i] = TrigramOverlap(pairs[i].reference, pairs[i].translation);
          break;
        case Criterion::kParaphrase:
          scores[i] = ParaphraseScore(pairs[i], *scorer);
          break;
        case Criterion::kTranslation:
          try {
            scores[i] = TranslationScore(pairs[i]);
          } catch (const Error& e) {
            throw Error("pair " + std::to_string(i + 1) + ": " + e.what());
          }
          break;
      }
    }
  });
  return scores;
}

std::vector<int> DecileSplit::Assignments(size_t n) const {
  std::vector<int> out(n, -1);
  for (int b = 0; b < 10; ++b) {
    for (size_t idx : bins[b]) out.at(idx) = b;
  }
  return out;
}

DecileSplit SplitDeciles(std::span<const double> scores) {
  const size_t n = scores.size();
  if (n < 10) {
    throw Error("decile split needs at least 10 items, got " +
                std::to_string(n));
  }
  for (size_t i = 0; i < n; ++i) {
    if (!std::isfinite(scores[i])) {
      throw Error("decile split: score " + std::to_string(i + 1) +
                  " is not finite");
    }
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return scores[a] < scores[b];
  });
  DecileSplit split;
  const size_t base = n / 10;
  const size_t extra = n % 10;
  size_t pos = 0;
  for (size_t b = 0; b < 10; ++b) {
    size_t size = base + (b < extra ? 1 : 0);
    split.bins[b].assign(order.begin() + pos, order.begin() + pos + size);
    pos += size;
  }
  return split;
}

SampleResult SampleTrainingSet(std::span<const ParaphrasePair> pairs,
                               std::span<const int> bin_of_pair,
                               std::span<const int> bins, size_t max_len,
                               size_t n, uint64_t seed) {
  if (bin_of_pair.size() != pairs.size()) {
    throw Error("sample: one bin per pair required");
  }
  std::vector<size_t> eligible;
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (std::find(bins.begin(), bins.end(), bin_of_pair[i]) == bins.end()) {
      continue;
    }
    if (pairs[i].reference.size() > max_len ||
        pairs[i].translation.size() > max_len) {
      continue;
    }
    eligible.push_back(i);
  }
  SampleResult result;
  result.eligible = eligible.size();
  const size_t take = std::min(n, eligible.size());
  result.shortfall = n - take;
  // Partial Fisher-Yates with an explicit draw so the sample only depends on
  // the seed and the eligible list.
  std::mt19937_64 rng(seed);
  for (size_t i = 0; i < take; ++i) {
    std::uniform_int_distribution<size_t> pick(i, eligible.size() - 1);
    std::swap(eligible[i], eligible[pick(rng)]);
  }
  result.indices.assign(eligible.begin(), eligible.begin() + take);
  std::sort(result.indices.begin(), result.indices.end());
  return result;
}

}  // namespace paranmt
