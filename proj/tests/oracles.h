// Brute-force reference implementations used only by the test suites. Each
// one recomputes its quantity along a different path from the library.
#ifndef PARANMT_TESTS_ORACLES_H_
#define PARANMT_TESTS_ORACLES_H_

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "paranmt/corpus_io.h"
#include "paranmt/encoders.h"
#include "paranmt/trainer.h"

namespace oracle {

using HighPrecision = boost::multiprecision::cpp_bin_float_50;

// Greedy one-to-one matching of equal trigram strings.
inline double TrigramOverlap(const std::vector<std::string>& a,
                             const std::vector<std::string>& b) {
  if (a.size() < 3 || b.size() < 3) return 0.0;
  auto trigrams = [](const std::vector<std::string>& s) {
    std::vector<std::string> out;
    for (size_t i = 0; i + 2 < s.size(); ++i) {
      out.push_back(s[i] + '\x1f' + s[i + 1] + '\x1f' + s[i + 2]);
    }
    return out;
  };
  auto ta = trigrams(a);
  auto tb = trigrams(b);
  std::vector<bool> used(tb.size(), false);
  size_t shared = 0;
  for (const auto& t : ta) {
    for (size_t j = 0; j < tb.size(); ++j) {
      if (!used[j] && tb[j] == t) {
        used[j] = true;
        ++shared;
        break;
      }
    }
  }
  return static_cast<double>(shared) /
         static_cast<double>(std::min(ta.size(), tb.size()));
}

inline double Pearson(const std::vector<double>& x,
                      const std::vector<double>& y) {
  const size_t n = x.size();
  HighPrecision mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += HighPrecision(x[i]);
    my += HighPrecision(y[i]);
  }
  mx /= n;
  my /= n;
  HighPrecision sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    HighPrecision dx = HighPrecision(x[i]) - mx;
    HighPrecision dy = HighPrecision(y[i]) - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return static_cast<double>(sxy / boost::multiprecision::sqrt(sxx * syy));
}

// rank = 1 + #smaller + (#equal - 1) / 2, counted pairwise.
inline std::vector<double> Ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    size_t smaller = 0, equal = 0;
    for (size_t j = 0; j < v.size(); ++j) {
      if (v[j] < v[i]) ++smaller;
      if (v[j] == v[i]) ++equal;
    }
    r[i] = 1.0 + static_cast<double>(smaller) +
           (static_cast<double>(equal) - 1.0) / 2.0;
  }
  return r;
}

inline double Spearman(const std::vector<double>& x,
                       const std::vector<double>& y) {
  return Pearson(Ranks(x), Ranks(y));
}

// Full cosine matrix, then the lowest-index maximum per row.
inline std::vector<size_t> ArgmaxNegatives(
    const std::vector<paranmt::SentenceVector>& anchors,
    const std::vector<paranmt::SentenceVector>& candidates) {
  const size_t n = anchors.size();
  std::vector<std::vector<double>> cos(n, std::vector<double>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      cos[i][j] = paranmt::Cosine(anchors[i], candidates[j]);
    }
  }
  std::vector<size_t> out(n);
  for (size_t i = 0; i < n; ++i) {
    double best = -2.0;
    for (size_t j = 0; j < n; ++j) {
      if (j != i) best = std::max(best, cos[i][j]);
    }
    for (size_t j = 0; j < n; ++j) {
      if (j != i && cos[i][j] == best) {
        out[i] = j;
        break;
      }
    }
  }
  return out;
}

// Loss of a mini-batch evaluated straight from the embedding tables.
inline double NaiveLoss(const paranmt::Encoder& enc,
                        const std::vector<paranmt::TrainingExample>& examples,
                        double margin, bool symmetric) {
  auto average = [](const paranmt::EmbeddingMatrix& m,
                    const std::vector<uint32_t>& ids) {
    std::vector<long double> v(m.dim(), 0.0L);
    for (uint32_t id : ids) {
      for (size_t k = 0; k < m.dim(); ++k) v[k] += m.values()[id * m.dim() + k];
    }
    if (!ids.empty()) {
      for (auto& x : v) x /= static_cast<long double>(ids.size());
    }
    return v;
  };
  auto encode = [&](const paranmt::SentenceFeatures& f) {
    std::vector<long double> out;
    using K = paranmt::EncoderKind;
    switch (enc.kind()) {
      case K::kWordAvg:
        return average(enc.word(), f.word_ids);
      case K::kTrigramAvg:
        return average(enc.trigram(), f.trigram_ids);
      case K::kAdditive: {
        auto a = average(enc.word(), f.word_ids);
        auto b = average(enc.trigram(), f.trigram_ids);
        for (size_t k = 0; k < a.size(); ++k) a[k] += b[k];
        return a;
      }
      case K::kConcat: {
        auto a = average(enc.word(), f.word_ids);
        auto b = average(enc.trigram(), f.trigram_ids);
        a.insert(a.end(), b.begin(), b.end());
        return a;
      }
    }
    return out;
  };
  auto cosine = [](const std::vector<long double>& u,
                   const std::vector<long double>& v) {
    long double d = 0, nu = 0, nv = 0;
    for (size_t k = 0; k < u.size(); ++k) {
      d += u[k] * v[k];
      nu += u[k] * u[k];
      nv += v[k] * v[k];
    }
    if (nu == 0 || nv == 0) return 0.0L;
    return d / std::sqrt(nu * nv);
  };
  long double total = 0;
  for (const auto& ex : examples) {
    auto s = encode(*ex.first);
    auto sp = encode(*ex.second);
    auto t = encode(*ex.negative);
    total += std::max(0.0L, margin - cosine(s, sp) + cosine(s, t));
    if (symmetric) {
      auto t2 = encode(*ex.negative_second);
      total += std::max(0.0L, margin - cosine(s, sp) + cosine(sp, t2));
    }
  }
  return static_cast<double>(total / examples.size());
}

// Exhaustive PMI recomputation from the raw pairs by string sets.
struct BrutePmi {
  std::map<std::pair<std::string, std::string>, unsigned long> cross;
  unsigned long cross_total = 0;
  std::map<std::pair<std::string, std::string>, unsigned long> within[2];
  unsigned long within_total[2] = {0, 0};
  std::map<std::string, unsigned long> marginal;

  void Add(const std::vector<std::string>& ref,
           const std::vector<std::string>& trans) {
    std::set<std::string> r(ref.begin(), ref.end());
    std::set<std::string> t(trans.begin(), trans.end());
    for (const auto& u : r) {
      for (const auto& v : t) {
        cross[{u, v}] += 1;
        cross[{v, u}] += 1;
        cross_total += 2;
      }
    }
    const std::set<std::string>* sides[2] = {&r, &t};
    for (int s = 0; s < 2; ++s) {
      for (const auto& u : *sides[s]) {
        for (const auto& v : *sides[s]) {
          if (u < v) {
            within[s][{u, v}] += 1;
            within_total[s] += 1;
          }
        }
        marginal[u] += 1;
      }
    }
  }

  double Cross(const std::string& u, const std::string& v) const {
    double joint = static_cast<double>(cross.at({u, v}));
    return std::log(joint * static_cast<double>(cross_total) /
                    (static_cast<double>(marginal.at(u)) *
                     static_cast<double>(marginal.at(v))));
  }

  double Within(int side, const std::string& u, const std::string& v) const {
    auto key = u < v ? std::make_pair(u, v) : std::make_pair(v, u);
    auto it = within[side].find(key);
    if (it == within[side].end()) {
      if (within_total[side] == 0) return 0.0;
      return std::log(1.0 / static_cast<double>(within_total[side]));
    }
    return std::log(static_cast<double>(it->second) *
                    static_cast<double>(within_total[side]) /
                    (static_cast<double>(marginal.at(u)) *
                     static_cast<double>(marginal.at(v))));
  }

  double Adjusted(const std::string& u, const std::string& v) const {
    return Cross(u, v) - 0.5 * (Within(0, u, v) + Within(1, u, v));
  }
};

}  // namespace oracle

#endif  // PARANMT_TESTS_ORACLES_H_
