#include "paranmt/embedding_store.h"

#include <algorithm>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "paranmt/common.h"
#include "test_util.h"

using namespace paranmt;
using Units = std::vector<std::string>;

TEST_CASE("char trigrams pad the token") {
  CHECK(CharTrigrams("ab") == Units{"^ab", "ab$"});
  CHECK(CharTrigrams("cat") == Units{"^ca", "cat", "at$"});
  CHECK(CharTrigrams("a") == Units{"^a$"});
  CHECK(CharTrigrams("né") == Units{"^né", "né$"});
}

TEST_CASE("build vocab") {
  std::vector<TokenizedSentence> corpus = {Tokenize("a b"), Tokenize("a")};
  auto vocab = BuildVocab(corpus, UnitKind::kWord, 1);
  CHECK(vocab.units() == Units{"a", "b"});
  CHECK(vocab.Lookup("b") == 1);
  CHECK(vocab.Lookup("c") == Vocabulary::kNotFound);
  CHECK(BuildVocab(corpus, UnitKind::kWord, 2).units() == Units{"a"});

  std::vector<TokenizedSentence> one = {Tokenize("ab")};
  auto tri = BuildVocab(one, UnitKind::kCharTrigram, 1);
  CHECK(tri.size() == 2);
  CHECK(tri.Lookup("^ab") != Vocabulary::kNotFound);
  CHECK(tri.Lookup("ab$") != Vocabulary::kNotFound);

  CHECK_THROWS_AS(BuildVocab(std::vector<TokenizedSentence>{}, UnitKind::kWord, 1),
                  Error);
}

TEST_CASE("vocab indices are unique and dense") {
  std::vector<TokenizedSentence> corpus = {Tokenize("the cat sat on the mat"),
                                           Tokenize("a cat")};
  auto vocab = BuildVocab(corpus, UnitKind::kWord, 1);
  for (uint32_t i = 0; i < vocab.size(); ++i) {
    CHECK(vocab.Lookup(vocab.UnitAt(i)) == i);
  }
  CHECK_THROWS_AS(vocab.Add("cat"), Error);
}

TEST_CASE("init matrix is seeded") {
  Vocabulary vocab;
  vocab.Add("x");
  vocab.Add("y");
  auto a = InitMatrix(vocab, 4, 7);
  auto b = InitMatrix(vocab, 4, 7);
  auto c = InitMatrix(vocab, 4, 8);
  CHECK(a.values() == b.values());
  CHECK(a.values() != c.values());
  for (double v : a.values()) {
    CHECK(v >= -0.1);
    CHECK(v < 0.1);
  }
}

TEST_CASE("load pretrained") {
  testing_util::TempDir dir;
  auto ok = dir.Write("e.txt", "a 1 2 3\nb 0.5 -1e-3 4\n");
  auto m = LoadPretrained(ok);
  CHECK(m.rows() == 2);
  CHECK(m.dim() == 3);
  CHECK(m.Row(1)[1] == -1e-3);

  auto header = dir.Write("h.txt", "2 2\na 1 2\nb 3 4\n");
  CHECK(LoadPretrained(header).rows() == 2);

  auto short_row = dir.Write("s.txt", "a 1 2 3\nb 1 2\n");
  CHECK_THROWS_WITH_AS(LoadPretrained(short_row), doctest::Contains(":2:"),
                       Error);
  auto dup = dir.Write("d.txt", "a 1\na 2\n");
  CHECK_THROWS_WITH_AS(LoadPretrained(dup), doctest::Contains("'a'"), Error);
}

TEST_CASE("store round trip is exact") {
  Vocabulary vocab(UnitKind::kCharTrigram);
  vocab.Add("^ab");
  vocab.Add("ab$");
  EmbeddingMatrix m(vocab, 3);
  m.values() = {0.1, 1.0 / 3.0, -2e-300,
                std::numeric_limits<double>::denorm_min(), -0.0, 12345.678901234};
  std::stringstream ss;
  WriteStore(ss, m);
  size_t line = 0;
  auto back = ReadStore(ss, "mem", &line);
  CHECK(back.vocab().kind() == UnitKind::kCharTrigram);
  CHECK(back.vocab().units() == m.vocab().units());
  CHECK(back.values() == m.values());
}

TEST_CASE("vocab is independent of corpus order") {
  std::vector<TokenizedSentence> corpus = {Tokenize("b a c"), Tokenize("c c d"),
                                           Tokenize("a e"), Tokenize("f b")};
  auto reversed = corpus;
  std::reverse(reversed.begin(), reversed.end());
  for (auto kind : {UnitKind::kWord, UnitKind::kCharTrigram}) {
    CHECK(BuildVocab(corpus, kind, 1).units() == BuildVocab(reversed, kind, 1).units());
  }
}
