#ifndef PARANMT_LEXICON_H_
#define PARANMT_LEXICON_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "paranmt/corpus_io.h"

namespace paranmt {

class Encoder;

enum class Side { kReference = 0, kTranslation = 1 };

// Co-occurrence counts over a paraphrase corpus. Each sentence contributes
// its set of token types:
//  - cross: every (u in reference, v in translation) adds 1 to #(u,v) and
//    to #(v,u), and 2 to the cross total;
//  - within: for each side, every unordered pair of distinct types in one
//    sentence adds 1 to that side's table and its total;
//  - marginal #(u): number of sentences, both sides pooled, containing u.
class PmiCounts {
 public:
  void AddPair(const TokenizedSentence& reference,
               const TokenizedSentence& translation);
  void Merge(const PmiCounts& other);

  uint64_t Cross(const std::string& u, const std::string& v) const;
  uint64_t cross_total() const { return cross_total_; }
  uint64_t Within(Side side, const std::string& u, const std::string& v) const;
  uint64_t within_total(Side side) const {
    return within_total_[static_cast<int>(side)];
  }
  uint64_t Marginal(const std::string& u) const;

  size_t pairs_counted() const { return pairs_counted_; }
  size_t pairs_filtered = 0;  // set by CountPmi

  // Visits every non-zero cross cell, both orders, in unspecified order.
  void ForEachCross(const std::function<void(const std::string&,
                                             const std::string&, uint64_t)>&
                        fn) const;

 private:
  uint32_t Intern(const std::string& token);
  std::optional<uint32_t> Find(const std::string& token) const;
  static uint64_t Key(uint32_t a, uint32_t b) {
    return (static_cast<uint64_t>(a) << 32) | b;
  }
  static uint64_t UnorderedKey(uint32_t a, uint32_t b) {
    return a < b ? Key(a, b) : Key(b, a);
  }
  void AddSentenceWithin(Side side, const std::vector<uint32_t>& types);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, uint32_t> index_;
  std::unordered_map<uint64_t, uint64_t> cross_;
  uint64_t cross_total_ = 0;
  std::unordered_map<uint64_t, uint64_t> within_[2];
  uint64_t within_total_[2] = {0, 0};
  std::vector<uint64_t> marginal_;
  size_t pairs_counted_ = 0;
};

struct PmiOptions {
  double min_para_score = 0.35;
  size_t max_len = 30;
};

using PairScorer = std::function<double(const ParaphrasePair&)>;

// Drops pairs scoring below min_para_score or with a side longer than
// max_len tokens, then counts the rest. Partial counts from worker threads
// merge by summation, so counts do not depend on `threads`.
PmiCounts CountPmi(std::span<const ParaphrasePair> pairs,
                   const PmiOptions& options, const PairScorer& scorer,
                   int threads = 1);
PmiCounts CountPmi(std::span<const ParaphrasePair> pairs,
                   const PmiOptions& options, const Encoder& scorer,
                   int threads = 1);

// ln(#(u,v) #(.,.) / (#(u) #(v))); nullopt when #(u,v) = 0.
std::optional<double> PmiCross(const PmiCounts& counts, const std::string& u,
                               const std::string& v);

// Within-sentence PMI on one side; a side where u and v never share a
// sentence scores ln(1 / side_total) (0 when that side has no pairs at all).
double PmiWithin(const PmiCounts& counts, Side side, const std::string& u,
                 const std::string& v);

// PMI_cross minus the mean of the two within-sentence PMIs.
std::optional<double> PmiAdjusted(const PmiCounts& counts, const std::string& u,
                                  const std::string& v);

struct LexiconEntry {
  std::string u;
  std::string v;
  double pmi_cross = 0.0;
  double pmi_adjusted = 0.0;
  uint64_t joint_count = 0;
};

// Cross cells with u != v and joint >= min_joint, by adjusted PMI
// descending, then cross PMI descending, then (u, v) ascending.
std::vector<LexiconEntry> BuildLexicon(const PmiCounts& counts,
                                       uint64_t min_joint = 10);

// u, v, pmi_adjusted, pmi_cross, joint
void WriteLexicon(std::ostream& out, const std::vector<LexiconEntry>& lexicon);
std::vector<LexiconEntry> LoadLexicon(const std::string& path);

struct WordPairGold {
  std::string a;
  std::string b;
  double gold = 0.0;
};

// <word>\t<word>\t<score>, words lowercased on load.
std::vector<WordPairGold> LoadWordPairs(const std::string& path);

struct SimlexResult {
  double spearman = 0.0;
  size_t pairs = 0;
  size_t covered = 0;  // pairs found in the lexicon
};

// Prediction per pair is its adjusted PMI (mean of both orders when both
// exist), 0 for unseen pairs; returns Spearman against gold.
SimlexResult EvalSimlex(const std::vector<LexiconEntry>& lexicon,
                        std::span<const WordPairGold> pairs);

}  // namespace paranmt

#endif  // PARANMT_LEXICON_H_
