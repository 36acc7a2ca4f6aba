#include "paranmt/filter.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "paranmt/common.h"
#include "paranmt/encoders.h"

using namespace paranmt;
using doctest::Approx;

namespace {

ParaphrasePair Pair(const char* a, const char* b,
                    std::optional<double> lp = std::nullopt) {
  return {Tokenize(a), Tokenize(b), lp};
}

TokenizedSentence RandomSentence(std::mt19937_64& rng, size_t max_len) {
  size_t len = rng() % (max_len + 1);
  std::string raw;
  for (size_t i = 0; i < len; ++i) raw += std::string(1, 'a' + rng() % 4) + " ";
  return Tokenize(raw);
}

}  // namespace

TEST_CASE("trigram overlap") {
  auto s = Tokenize("one two three four five");
  CHECK(TrigramOverlap(s, s) == 1.0);
  CHECK(TrigramOverlap(Tokenize("a b c d"), Tokenize("a b c e")) == 0.5);
  CHECK(TrigramOverlap(Tokenize("a b c"), Tokenize("x y z")) == 0.0);
  CHECK(TrigramOverlap(Tokenize("a b"), Tokenize("a b")) == 0.0);
  // multiset: one shared occurrence out of two on each side
  CHECK(TrigramOverlap(Tokenize("a b c a b c"), Tokenize("a b c x y z")) ==
        Approx(1.0 / 4.0));
}

TEST_CASE("trigram overlap properties") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    auto a = RandomSentence(rng, 10);
    auto b = RandomSentence(rng, 10);
    double o = TrigramOverlap(a, b);
    CHECK(o == TrigramOverlap(b, a));
    CHECK(o >= 0.0);
    CHECK(o <= 1.0);
    CHECK(o == oracle::TrigramOverlap(a.tokens, b.tokens));
  }
}

TEST_CASE("paraphrase score") {
  Vocabulary vocab;
  vocab.Add("a");
  vocab.Add("b");
  EmbeddingMatrix m(vocab, 2);
  m.values() = {1, 0, 1, 1};
  Encoder enc(EncoderKind::kWordAvg, m, std::nullopt);
  CHECK(ParaphraseScore(Pair("a b", "a b"), enc) == Approx(1.0));
  CHECK(ParaphraseScore(Pair("x y", "z"), enc) == 0.0);
  // (1,0) vs mean((1,0),(1,1)) = (1,0.5): 1/sqrt(1.25)
  CHECK(ParaphraseScore(Pair("a", "a b"), enc) == Approx(1.0 / std::sqrt(1.25)));
}

TEST_CASE("translation score") {
  CHECK(TranslationScore(Pair("x", "a b c", -3.0)) == -1.0);
  CHECK(TranslationScore(Pair("x", "a b c d", 0.0)) == 0.0);
  CHECK(TranslationScore(Pair("x", "a b", -4.0)) <
        TranslationScore(Pair("x", "a b c d", -4.0)));
  CHECK_THROWS_AS(TranslationScore(Pair("x", "y")), Error);
  CHECK(ParseCriterion("trans") == Criterion::kTranslation);
  CHECK_THROWS_AS(ParseCriterion("bogus"), Error);
}

TEST_CASE("score pairs is thread independent") {
  std::mt19937_64 rng(6);
  std::vector<ParaphrasePair> pairs;
  for (int i = 0; i < 300; ++i) {
    pairs.push_back({RandomSentence(rng, 8), RandomSentence(rng, 8), std::nullopt});
  }
  CHECK(ScorePairs(pairs, Criterion::kTrigramOverlap, nullptr, 1) ==
        ScorePairs(pairs, Criterion::kTrigramOverlap, nullptr, 4));
}

TEST_CASE("decile sizes") {
  std::vector<double> s(103);
  for (size_t i = 0; i < s.size(); ++i) s[i] = static_cast<double>(102 - i);
  auto split = SplitDeciles(s);
  std::vector<size_t> sizes;
  for (const auto& b : split.bins) sizes.push_back(b.size());
  CHECK(sizes == std::vector<size_t>{11, 11, 11, 10, 10, 10, 10, 10, 10, 10});
  // lowest scores live at the highest indices here
  CHECK(split.bins[0].front() == 102);

  std::vector<double> hundred(100);
  for (size_t i = 0; i < 100; ++i) hundred[i] = static_cast<double>(i);
  auto h = SplitDeciles(hundred);
  CHECK(h.bins[0] == std::vector<size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});

  std::vector<double> ties(25, 1.0);
  auto t = SplitDeciles(ties);
  CHECK(t.bins[0] == std::vector<size_t>{0, 1, 2});
  CHECK(t.bins[9] == std::vector<size_t>{23, 24});

  CHECK_THROWS_AS(SplitDeciles(std::vector<double>(9, 0.0)), Error);
}

TEST_CASE("decile assignments depend only on rank") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> s(10 + rng() % 90);
    for (auto& x : s) x = std::round(u(rng) * 4) / 4;
    std::vector<double> t(s.size());
    std::transform(s.begin(), s.end(), t.begin(),
                   [](double x) { return std::exp(x) * 7 - 2; });
    CHECK(SplitDeciles(s).Assignments(s.size()) ==
          SplitDeciles(t).Assignments(t.size()));
  }
}

TEST_CASE("sampling") {
  std::vector<ParaphrasePair> pairs;
  std::vector<int> bin_of;
  for (int i = 0; i < 100; ++i) {
    pairs.push_back(Pair(i % 7 == 0 ? "a b c d e f" : "a b", "c d"));
    bin_of.push_back(i / 10);
  }
  std::vector<int> top = {8, 9};
  auto r = SampleTrainingSet(pairs, bin_of, top, 4, 10, 3);
  CHECK(r.indices.size() == 10);
  CHECK(r.shortfall == 0);
  CHECK(std::is_sorted(r.indices.begin(), r.indices.end()));
  for (size_t i : r.indices) {
    CHECK(bin_of[i] >= 8);
    CHECK(pairs[i].reference.size() <= 4);
  }
  CHECK(SampleTrainingSet(pairs, bin_of, top, 4, 10, 3).indices == r.indices);

  auto none = SampleTrainingSet(pairs, bin_of, top, 1, 10, 3);
  CHECK(none.indices.empty());
  CHECK(none.shortfall == 10);

  auto all = SampleTrainingSet(pairs, bin_of, top, 30, 1000, 3);
  CHECK(all.indices.size() == 20);
  CHECK(all.shortfall == 980);
}
