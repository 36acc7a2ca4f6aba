#include "paranmt/sts_eval.h"

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "paranmt/common.h"
#include "paranmt/encoders.h"

using namespace paranmt;
using doctest::Approx;
using Vec = std::vector<double>;

TEST_CASE("pearson") {
  Vec x = {1, 2, 3, 4};
  Vec lin = {3, 5, 7, 9};
  Vec neg = {-1, -2, -3, -4};
  Vec y = {1, 3, 2, 4};
  CHECK(Pearson(x, lin) == Approx(1.0));
  CHECK(Pearson(x, neg) == Approx(-1.0));
  CHECK(Pearson(x, y) == Approx(0.8));
  Vec c = {2, 2, 2, 2};
  CHECK_THROWS_WITH_AS(Pearson(x, c), doctest::Contains("constant"), Error);
  CHECK_THROWS_AS(Pearson(Vec{1}, Vec{1}), Error);
  CHECK_THROWS_AS(Pearson(x, Vec{1, 2}), Error);
}

TEST_CASE("pearson affine invariance") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 100; ++trial) {
    Vec x(30), y(30), ax(30), nx(30);
    for (size_t i = 0; i < 30; ++i) {
      x[i] = n(rng);
      y[i] = x[i] + n(rng);
      ax[i] = 3.5 * x[i] + 10;
      nx[i] = -2 * x[i] + 1;
    }
    double r = Pearson(x, y);
    CHECK(Pearson(ax, y) == Approx(r).epsilon(1e-12));
    CHECK(Pearson(nx, y) == Approx(-r).epsilon(1e-12));
  }
}

TEST_CASE("spearman") {
  Vec x = {1, 2, 3, 4, 5};
  Vec cube = {1, 8, 27, 64, 125};
  Vec rev = {5, 4, 3, 2, 1};
  CHECK(Spearman(x, cube) == Approx(1.0));
  CHECK(Spearman(x, rev) == Approx(-1.0));
  Vec t = {1, 2, 2, 4};
  Vec u = {1, 2, 3, 4};
  CHECK(AverageRanks(t) == Vec{1, 2.5, 2.5, 4});
  CHECK(Spearman(t, u) == Approx(oracle::Spearman(t, u)).epsilon(1e-14));
  CHECK_THROWS_AS(Spearman(Vec{3, 3, 3}, Vec{1, 2, 3}), Error);
}

TEST_CASE("spearman is rank invariant") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> d(0, 9);
  for (int trial = 0; trial < 100; ++trial) {
    Vec x(40), y(40), fx(40);
    for (size_t i = 0; i < 40; ++i) {
      x[i] = d(rng);
      y[i] = x[i] + d(rng);
      fx[i] = std::exp(x[i] / 3.0) - 4;
    }
    CHECK(Spearman(fx, y) == Approx(Spearman(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("evaluate sts") {
  Vocabulary vocab;
  for (const char* w : {"a", "b", "c", "d"}) vocab.Add(w);
  EmbeddingMatrix m(vocab, 2);
  m.values() = {1, 0, 0, 1, 1, 1, -1, 0.5};
  Encoder enc(EncoderKind::kWordAvg, m, std::nullopt);

  std::vector<std::pair<const char*, const char*>> raw = {
      {"a", "b"}, {"a", "c"}, {"a", "a"}, {"b", "d"}, {"c", "d"}};
  auto make = [&](double scale, double offset) {
    StsGroup g;
    for (auto [s, t] : raw) {
      StsExample ex{Tokenize(s), Tokenize(t), 0};
      ex.gold = scale * Cosine(enc.Encode(ex.sentence_a), enc.Encode(ex.sentence_b)) + offset;
      g.examples.push_back(ex);
    }
    return g;
  };
  StsCollection coll;
  auto g1 = make(2.0, 2.5);
  g1.year = "2014";
  g1.name = "affine";
  auto g2 = make(1.0, 1.5);
  g2.year = "2014";
  g2.name = "noisy";
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (auto& ex : g2.examples) ex.gold += u(rng);
  auto g3 = make(1.0, 2.0);
  g3.year = "2012";
  g3.name = "single";
  g3.examples[0].gold = 4.0;
  coll.groups = {g1, g2, g3};

  auto report = EvaluateSts(coll, enc, 2);
  REQUIRE(report.datasets.size() == 3);
  CHECK(report.datasets[0].pearson == Approx(1.0));
  Vec pred, gold;
  for (const auto& ex : g2.examples) {
    pred.push_back(Cosine(enc.Encode(ex.sentence_a), enc.Encode(ex.sentence_b)));
    gold.push_back(ex.gold);
  }
  CHECK(report.datasets[1].pearson == Approx(oracle::Pearson(pred, gold)).epsilon(1e-12));
  REQUIRE(report.years.size() == 2);
  CHECK(report.years[0].year == "2012");
  CHECK(report.years[0].mean_pearson == report.datasets[2].pearson);
  CHECK(report.years[1].mean_pearson ==
        Approx((report.datasets[0].pearson + report.datasets[1].pearson) / 2));
  double all = (report.datasets[0].pearson + report.datasets[1].pearson +
                report.datasets[2].pearson) / 3;
  CHECK(report.grand_mean == Approx(all));

  std::string text = FormatEvalReport(report);
  CHECK(text.rfind("year\tdataset\tn\tpearson\n", 0) == 0);
  CHECK(text.find("2014\taffine\t5\t1.0000\n") != std::string::npos);
  CHECK(text.find("ALL\tMEAN\t3\t") != std::string::npos);
}
