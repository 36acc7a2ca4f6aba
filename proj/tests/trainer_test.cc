#include "paranmt/trainer.h"

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "paranmt/common.h"

using namespace paranmt;
using doctest::Approx;

namespace {

std::vector<SentenceVector> RandomVectors(size_t n, size_t dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<SentenceVector> out(n, SentenceVector(dim));
  for (auto& v : out) for (auto& x : v) x = u(rng);
  return out;
}

ParaphrasePair Pair(const char* a, const char* b) {
  return {Tokenize(a), Tokenize(b), std::nullopt};
}

std::vector<ParaphrasePair> SmallCorpus() {
  return {Pair("the cat sat", "a cat was sitting"),
          Pair("dogs bark loudly", "the dogs are barking"),
          Pair("it is raining", "rain is falling"),
          Pair("he ran home", "he went home quickly"),
          Pair("we like tea", "tea is liked by us"),
          Pair("birds can fly", "flying birds")};
}

Encoder WordEncoder(const std::vector<ParaphrasePair>& pairs, size_t dim,
                    uint64_t seed) {
  std::vector<TokenizedSentence> sentences;
  for (const auto& p : pairs) {
    sentences.push_back(p.reference);
    sentences.push_back(p.translation);
  }
  return Encoder(EncoderKind::kWordAvg,
                 InitMatrix(BuildVocab(sentences, UnitKind::kWord, 1), dim, seed),
                 std::nullopt);
}

}  // namespace

TEST_CASE("margin loss") {
  CHECK(MarginLoss(0.9, 0.7, 0.4) == Approx(0.2));
  CHECK(MarginLoss(0.9, 0.3, 0.4) == 0.0);
  CHECK(MarginLoss(0.6, 0.6, 0.4) == Approx(0.4));
}

TEST_CASE("config validation") {
  TrainingConfig c;
  c.Validate();
  c.minibatch_size = 1;
  CHECK_THROWS_AS(c.Validate(), Error);
  c = {};
  c.margin = 0.0;
  CHECK_THROWS_AS(c.Validate(), Error);
  c = {};
  c.megabatch_multiplier = 0;
  CHECK_THROWS_AS(c.Validate(), Error);
  c = {};
  c.learning_rate = -1;
  CHECK_THROWS_AS(c.Validate(), Error);
}

TEST_CASE("two-pair batch picks the other pair") {
  std::vector<SentenceVector> first = {{1, 0}, {0, 1}};
  auto sel = SelectNegatives(first, {}, false, false);
  CHECK(sel.for_first[0] == SentenceRef{1, false});
  CHECK(sel.for_first[1] == SentenceRef{0, false});
  CHECK_THROWS_AS(SelectNegatives(std::vector<SentenceVector>{{1, 0}}, {}, false, false),
                  Error);
}

TEST_CASE("duplicate of own first sentence is eligible") {
  std::vector<SentenceVector> first = {{1, 2}, {-1, 0}, {1, 2}};
  auto sel = SelectNegatives(first, {}, false, false);
  CHECK(sel.for_first[0] == SentenceRef{2, false});
  CHECK(sel.first_cosines[0] == Approx(1.0));
}

TEST_CASE("ties go to the lowest pair index") {
  std::vector<SentenceVector> first = {{1, 0}, {0, 1}, {0, 1}, {0, 1}};
  auto sel = SelectNegatives(first, {}, false, false);
  CHECK(sel.for_first[0].pair == 1);
  CHECK(sel.for_first[2].pair == 1);
  CHECK(sel.for_first[1].pair == 2);
}

TEST_CASE("selection matches brute force and is thread independent") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    auto first = RandomVectors(50, 6, rng);
    auto second = RandomVectors(50, 6, rng);
    auto serial = SelectNegatives(first, second, true, false, 1);
    auto parallel = SelectNegatives(first, second, true, false, 4);
    auto brute = oracle::ArgmaxNegatives(first, first);
    auto brute_second = oracle::ArgmaxNegatives(second, first);
    for (size_t i = 0; i < 50; ++i) {
      CHECK(serial.for_first[i].pair == brute[i]);
      CHECK(serial.for_second[i].pair == brute_second[i]);
      CHECK(serial.for_first[i] == parallel.for_first[i]);
      CHECK(serial.first_cosines[i] == parallel.first_cosines[i]);
      CHECK(serial.for_second[i] == parallel.for_second[i]);
    }
  }
}

TEST_CASE("negatives from both sides consider second sentences") {
  std::vector<SentenceVector> first = {{1, 0}, {0, 1}};
  std::vector<SentenceVector> second = {{0, 1}, {1, 0.01}};
  auto sel = SelectNegatives(first, second, false, true);
  CHECK(sel.for_first[0] == SentenceRef{1, true});
}

TEST_CASE("gradient is zero when every hinge is inactive") {
  std::vector<ParaphrasePair> pairs = {Pair("a b", "a b"), Pair("c", "c")};
  Encoder enc = WordEncoder(pairs, 4, 3);
  auto feats = FeaturizePairs(enc, pairs);
  // cos_pos = 1 and cos_neg = 0, so every hinge is negative.
  auto& w = enc.mutable_word().values();
  std::fill(w.begin(), w.end(), 0.0);
  w[0 * 4 + 0] = 1; w[1 * 4 + 0] = 1;  // a, b along axis 0
  w[2 * 4 + 1] = 1;                    // c along axis 1
  std::vector<TrainingExample> ex = {
      {&feats[0].first, &feats[0].second, &feats[1].first, nullptr},
      {&feats[1].first, &feats[1].second, &feats[0].first, nullptr}};
  auto grads = Gradients::ZerosLike(enc);
  double loss = MiniBatchLoss(enc, ex, 0.4, false, &grads);
  CHECK(loss == 0.0);
  for (double g : grads.word) CHECK(g == 0.0);
}

TEST_CASE("unused rows get zero gradient and finite differences agree") {
  std::vector<ParaphrasePair> pairs = {Pair("a b", "b c"), Pair("c d", "a"),
                                       Pair("unused", "unused")};
  Encoder enc = WordEncoder(pairs, 2, 5);
  auto feats = FeaturizePairs(enc, pairs);
  std::vector<TrainingExample> ex = {
      {&feats[0].first, &feats[0].second, &feats[1].first, &feats[1].first}};
  for (bool symmetric : {false, true}) {
    const double margin = 2.5;  // keep the hinge active
    auto grads = Gradients::ZerosLike(enc);
    MiniBatchLoss(enc, ex, margin, symmetric, &grads);
    uint32_t unused = enc.word().vocab().Lookup("unused");
    CHECK(grads.word[unused * 2] == 0.0);
    CHECK(grads.word[unused * 2 + 1] == 0.0);
    auto& w = enc.mutable_word().values();
    for (size_t i = 0; i < w.size(); ++i) {
      const double saved = w[i];
      w[i] = saved + 1e-5;
      double up = oracle::NaiveLoss(enc, ex, margin, symmetric);
      w[i] = saved - 1e-5;
      double down = oracle::NaiveLoss(enc, ex, margin, symmetric);
      w[i] = saved;
      double numeric = (up - down) / 2e-5;
      CHECK(RelativeError(grads.word[i], numeric, 1e-8) < 1e-4);
    }
  }
}

TEST_CASE("mini-batch loss matches naive evaluation") {
  auto pairs = SmallCorpus();
  Encoder enc = WordEncoder(pairs, 5, 8);
  auto feats = FeaturizePairs(enc, pairs);
  std::vector<TrainingExample> ex;
  for (size_t i = 0; i < feats.size(); ++i) {
    size_t j = (i + 1) % feats.size();
    ex.push_back({&feats[i].first, &feats[i].second, &feats[j].first, &feats[j].second});
  }
  for (bool symmetric : {false, true}) {
    CHECK(MiniBatchLoss(enc, ex, 0.4, symmetric) ==
          Approx(oracle::NaiveLoss(enc, ex, 0.4, symmetric)).epsilon(1e-13));
  }
}

TEST_CASE("adam first step and fixed point") {
  AdamState state({1});
  std::vector<double> theta = {0.5};
  std::vector<double> g = {1.0};
  std::span<double> p[] = {theta};
  std::span<const double> gr[] = {g};
  state.Step(p, gr, AdamConfig{});
  CHECK(std::abs(theta[0] - (0.5 - 0.001)) < 1e-8);

  AdamState zero({3});
  std::vector<double> t3 = {1, 2, 3}, g3 = {0, 0, 0};
  std::span<double> p3[] = {t3};
  std::span<const double> gr3[] = {g3};
  zero.Step(p3, gr3, AdamConfig{});
  CHECK(t3 == std::vector<double>{1, 2, 3});

  std::vector<double> bad = {std::nan("")};
  std::span<const double> grb[] = {bad};
  std::vector<double> before = theta;
  CHECK_THROWS_AS(state.Step(p, grb, AdamConfig{}), Error);
  CHECK(theta == before);
}

TEST_CASE("training is deterministic and reduces loss") {
  auto pairs = SmallCorpus();
  TrainingConfig config;
  config.minibatch_size = 3;
  config.megabatch_multiplier = 2;
  config.epochs = 10;
  config.learning_rate = 0.01;
  config.seed = 42;
  Encoder a = WordEncoder(pairs, 8, 1);
  Encoder b = WordEncoder(pairs, 8, 1);
  auto ra = Train(pairs, &a, config);
  config.threads = 3;
  auto rb = Train(pairs, &b, config);
  CHECK(a.word().values() == b.word().values());
  REQUIRE(ra.epochs.size() == 10);
  for (size_t e = 0; e < 10; ++e) {
    CHECK(ra.epochs[e].mean_loss == rb.epochs[e].mean_loss);
  }
  CHECK(ra.epochs.back().mean_loss < ra.epochs.front().mean_loss);
}

TEST_CASE("freezing word embeddings leaves the word store unchanged") {
  auto pairs = SmallCorpus();
  TrainingConfig config;
  config.minibatch_size = 3;
  config.epochs = 2;
  config.update_embeddings = false;
  Encoder enc = WordEncoder(pairs, 4, 2);
  auto before = enc.word().values();
  Train(pairs, &enc, config);
  CHECK(enc.word().values() == before);
}

TEST_CASE("training rejects an empty corpus") {
  auto pairs = SmallCorpus();
  Encoder enc = WordEncoder(pairs, 4, 2);
  CHECK_THROWS_AS(Train(std::vector<ParaphrasePair>{}, &enc, TrainingConfig{}), Error);
}

TEST_CASE("megabatch of one minibatch equals in-minibatch selection") {
  auto pairs = SmallCorpus();
  Encoder enc = WordEncoder(pairs, 6, 4);
  auto feats = FeaturizePairs(enc, pairs);
  TrainingConfig config;
  config.minibatch_size = 6;
  std::vector<size_t> idx = {3, 0, 5, 1, 4, 2};
  auto batch = FormMegaBatch(enc, feats, idx, config);
  std::vector<SentenceVector> first;
  for (size_t i : idx) first.push_back(enc.Encode(pairs[i].reference));
  auto brute = oracle::ArgmaxNegatives(first, first);
  for (size_t i = 0; i < idx.size(); ++i) {
    CHECK(batch.negatives.for_first[i].pair == brute[i]);
  }
}

TEST_CASE("gradcheck passes for every kind") {
  for (auto kind : {EncoderKind::kWordAvg, EncoderKind::kTrigramAvg,
                    EncoderKind::kAdditive, EncoderKind::kConcat}) {
    for (bool symmetric : {false, true}) {
      auto r = GradCheck(kind, symmetric, 5, 7, 5);
      CHECK(r.instances == 5);
      CHECK(r.parameters_checked > 0);
      CHECK(r.max_relative_error < 1e-4);
    }
  }
}
