#include "paranmt/lexicon.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <utility>

#include "paranmt/common.h"
#include "paranmt/encoders.h"
#include "paranmt/filter.h"
#include "paranmt/sts_eval.h"

namespace paranmt {

uint32_t PmiCounts::Intern(const std::string& token) {
  auto [it, inserted] =
      index_.emplace(token, static_cast<uint32_t>(tokens_.size()));
  if (inserted) {
    tokens_.push_back(token);
    marginal_.push_back(0);
  }
  return it->second;
}

std::optional<uint32_t> PmiCounts::Find(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void PmiCounts::AddSentenceWithin(Side side,
                                  const std::vector<uint32_t>& types) {
  auto& table = within_[static_cast<int>(side)];
  for (size_t i = 0; i < types.size(); ++i) {
    for (size_t j = i + 1; j < types.size(); ++j) {
      ++table[UnorderedKey(types[i], types[j])];
      ++within_total_[static_cast<int>(side)];
    }
  }
}

void PmiCounts::AddPair(const TokenizedSentence& reference,
                        const TokenizedSentence& translation) {
  auto types = [&](const TokenizedSentence& s) {
    std::vector<uint32_t> ids;
    for (const auto& t : s.tokens) ids.push_back(Intern(t));
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
  };
  const std::vector<uint32_t> ref = types(reference);
  const std::vector<uint32_t> trans = types(translation);
  for (uint32_t u : ref) {
    for (uint32_t v : trans) {
      ++cross_[Key(u, v)];
      ++cross_[Key(v, u)];
      cross_total_ += 2;
    }
  }
  AddSentenceWithin(Side::kReference, ref);
  AddSentenceWithin(Side::kTranslation, trans);
  for (uint32_t u : ref) ++marginal_[u];
  for (uint32_t v : trans) ++marginal_[v];
  ++pairs_counted_;
}

void PmiCounts::Merge(const PmiCounts& other) {
  std::vector<uint32_t> remap(other.tokens_.size());
  for (size_t i = 0; i < other.tokens_.size(); ++i) {
    remap[i] = Intern(other.tokens_[i]);
    marginal_[remap[i]] += other.marginal_[i];
  }
  for (const auto& [key, count] : other.cross_) {
    cross_[Key(remap[key >> 32], remap[key & 0xffffffffu])] += count;
  }
  cross_total_ += other.cross_total_;
  for (int s = 0; s < 2; ++s) {
    for (const auto& [key, count] : other.within_[s]) {
      within_[s][UnorderedKey(remap[key >> 32], remap[key & 0xffffffffu])] +=
          count;
    }
    within_total_[s] += other.within_total_[s];
  }
  pairs_counted_ += other.pairs_counted_;
  pairs_filtered += other.pairs_filtered;
}

uint64_t PmiCounts::Cross(const std::string& u, const std::string& v) const {
  auto a = Find(u), b = Find(v);
  if (!a || !b) return 0;
  auto it = cross_.find(Key(*a, *b));
  return it == cross_.end() ? 0 : it->second;
}

uint64_t PmiCounts::Within(Side side, const std::string& u,
                           const std::string& v) const {
  auto a = Find(u), b = Find(v);
  if (!a || !b || *a == *b) return 0;
  const auto& table = within_[static_cast<int>(side)];
  auto it = table.find(UnorderedKey(*a, *b));
  return it == table.end() ? 0 : it->second;
}

uint64_t PmiCounts::Marginal(const std::string& u) const {
  auto a = Find(u);
  return a ? marginal_[*a] : 0;
}

void PmiCounts::ForEachCross(
    const std::function<void(const std::string&, const std::string&,
                             uint64_t)>& fn) const {
  for (const auto& [key, count] : cross_) {
    fn(tokens_[key >> 32], tokens_[key & 0xffffffffu], count);
  }
}

PmiCounts CountPmi(std::span<const ParaphrasePair> pairs,
                   const PmiOptions& options, const PairScorer& scorer,
                   int threads) {
  const size_t workers = static_cast<size_t>(std::max(1, threads));
  const size_t chunk = (pairs.size() + workers - 1) / std::max<size_t>(1, workers);
  std::vector<PmiCounts> partial(workers);
  ParallelFor(workers, threads, [&](size_t wb, size_t we) {
    for (size_t w = wb; w < we; ++w) {
      size_t begin = std::min(pairs.size(), w * chunk);
      size_t end = std::min(pairs.size(), begin + chunk);
      for (size_t i = begin; i < end; ++i) {
        const auto& p = pairs[i];
        if (p.reference.size() > options.max_len ||
            p.translation.size() > options.max_len ||
            scorer(p) < options.min_para_score) {
          ++partial[w].pairs_filtered;
          continue;
        }
        partial[w].AddPair(p.reference, p.translation);
      }
    }
  });
  PmiCounts total;
  for (const auto& part : partial) total.Merge(part);
  return total;
}

PmiCounts CountPmi(std::span<const ParaphrasePair> pairs,
                   const PmiOptions& options, const Encoder& scorer,
                   int threads) {
  return CountPmi(
      pairs, options,
      [&scorer](const ParaphrasePair& p) { return ParaphraseScore(p, scorer); },
      threads);
}

std::optional<double> PmiCross(const PmiCounts& counts, const std::string& u,
                               const std::string& v) {
  const uint64_t joint = counts.Cross(u, v);
  if (joint == 0) return std::nullopt;
  const double num = static_cast<double>(joint) *
                     static_cast<double>(counts.cross_total());
  const double den = static_cast<double>(counts.Marginal(u)) *
                     static_cast<double>(counts.Marginal(v));
  return std::log(num / den);
}

double PmiWithin(const PmiCounts& counts, Side side, const std::string& u,
                 const std::string& v) {
  const uint64_t total = counts.within_total(side);
  const uint64_t joint = counts.Within(side, u, v);
  if (joint == 0) {
    return total == 0 ? 0.0 : std::log(1.0 / static_cast<double>(total));
  }
  const double num = static_cast<double>(joint) * static_cast<double>(total);
  const double den = static_cast<double>(counts.Marginal(u)) *
                     static_cast<double>(counts.Marginal(v));
  return std::log(num / den);
}

std::optional<double> PmiAdjusted(const PmiCounts& counts, const std::string& u,
                                  const std::string& v) {
  auto cross = PmiCross(counts, u, v);
  if (!cross) return std::nullopt;
  const double within = 0.5 * (PmiWithin(counts, Side::kReference, u, v) +
                               PmiWithin(counts, Side::kTranslation, u, v));
  return *cross - within;
}

std::vector<LexiconEntry> BuildLexicon(const PmiCounts& counts,
                                       uint64_t min_joint) {
  std::vector<LexiconEntry> out;
  counts.ForEachCross([&](const std::string& u, const std::string& v,
                          uint64_t joint) {
    if (u == v || joint < min_joint) return;
    LexiconEntry e;
    e.u = u;
    e.v = v;
    e.joint_count = joint;
    e.pmi_cross = *PmiCross(counts, u, v);
    e.pmi_adjusted = *PmiAdjusted(counts, u, v);
    out.push_back(std::move(e));
  });
  std::sort(out.begin(), out.end(),
            [](const LexiconEntry& a, const LexiconEntry& b) {
              if (a.pmi_adjusted != b.pmi_adjusted) {
                return a.pmi_adjusted > b.pmi_adjusted;
              }
              if (a.pmi_cross != b.pmi_cross) return a.pmi_cross > b.pmi_cross;
              if (a.u != b.u) return a.u < b.u;
              return a.v < b.v;
            });
  return out;
}

void WriteLexicon(std::ostream& out, const std::vector<LexiconEntry>& lexicon) {
  for (const auto& e : lexicon) {
    out << e.u << '\t' << e.v << '\t' << FormatDouble(e.pmi_adjusted) << '\t'
        << FormatDouble(e.pmi_cross) << '\t' << e.joint_count << '\n';
  }
}

std::vector<LexiconEntry> LoadLexicon(const std::string& path) {
  std::vector<LexiconEntry> out;
  ForEachTsvLine(path, [&](std::string_view line, size_t line_number) {
    auto f = SplitTabs(line);
    if (f.size() != 5) {
      ThrowAt(path, line_number, "expected 5 lexicon columns, found " +
                                     std::to_string(f.size()));
    }
    auto adjusted = ParseDouble(f[2]);
    auto cross = ParseDouble(f[3]);
    auto joint = ParseInt(f[4]);
    if (!adjusted || !cross || !joint || *joint < 0) {
      ThrowAt(path, line_number, "bad lexicon number");
    }
    out.push_back({std::string(f[0]), std::string(f[1]), *cross, *adjusted,
                   static_cast<uint64_t>(*joint)});
  });
  return out;
}

std::vector<WordPairGold> LoadWordPairs(const std::string& path) {
  std::vector<WordPairGold> out;
  ForEachTsvLine(path, [&](std::string_view line, size_t line_number) {
    auto f = SplitTabs(line);
    if (f.size() != 3) {
      ThrowAt(path, line_number, "expected <word>\\t<word>\\t<score>");
    }
    auto gold = ParseDouble(f[2]);
    if (!gold || !std::isfinite(*gold)) {
      ThrowAt(path, line_number, "bad gold score '" + std::string(f[2]) + "'");
    }
    out.push_back({Lowercase(f[0]), Lowercase(f[1]), *gold});
  });
  return out;
}

SimlexResult EvalSimlex(const std::vector<LexiconEntry>& lexicon,
                        std::span<const WordPairGold> pairs) {
  std::map<std::pair<std::string, std::string>, double> score;
  for (const auto& e : lexicon) score[{e.u, e.v}] = e.pmi_adjusted;
  SimlexResult result;
  result.pairs = pairs.size();
  std::vector<double> predicted, gold;
  for (const auto& p : pairs) {
    auto fwd = score.find({p.a, p.b});
    auto bwd = score.find({p.b, p.a});
    double pred = 0.0;
    if (fwd != score.end() && bwd != score.end()) {
      pred = 0.5 * (fwd->second + bwd->second);
    } else if (fwd != score.end()) {
      pred = fwd->second;
    } else if (bwd != score.end()) {
      pred = bwd->second;
    }
    if (fwd != score.end() || bwd != score.end()) ++result.covered;
    predicted.push_back(pred);
    gold.push_back(p.gold);
  }
  result.spearman = Spearman(predicted, gold);
  return result;
}

}  // namespace paranmt
