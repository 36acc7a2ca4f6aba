#include "paranmt/sts_eval.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "paranmt/common.h"
#include "paranmt/encoders.h"

namespace paranmt {

double Pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error("pearson: length mismatch (" + std::to_string(x.size()) +
                " vs " + std::to_string(y.size()) + ")");
  }
  const size_t n = x.size();
  if (n < 2) throw Error("pearson: need at least 2 points");
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error("correlation undefined: constant input");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> AverageRanks(std::span<const double> values) {
  const size_t n = values.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) hold ranks i+1..j+1.
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double Spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("spearman: length mismatch");
  auto rx = AverageRanks(x);
  auto ry = AverageRanks(y);
  return Pearson(rx, ry);
}

EvalReport EvaluateSts(const StsCollection& collection, const Encoder& encoder,
                       int threads) {
  EvalReport report;
  report.datasets.resize(collection.groups.size());
  ParallelFor(collection.groups.size(), threads, [&](size_t begin,
                                                     size_t end) {
    for (size_t g = begin; g < end; ++g) {
      const StsGroup& group = collection.groups[g];
      if (group.examples.empty()) {
        throw Error("sts dataset " + group.year + "/" + group.name +
                    " is empty");
      }
      std::vector<double> predicted, gold;
      for (const auto& ex : group.examples) {
        predicted.push_back(
            Cosine(encoder.Encode(ex.sentence_a), encoder.Encode(ex.sentence_b)));
        gold.push_back(ex.gold);
      }
      DatasetResult r{group.year, group.name, group.examples.size(), 0.0};
      try {
        r.pearson = Pearson(predicted, gold);
      } catch (const Error& e) {
        throw Error("sts dataset " + group.year + "/" + group.name + ": " +
                    e.what());
      }
      report.datasets[g] = r;
    }
  });
  std::map<std::string, std::vector<double>> by_year;
  double total = 0.0;
  for (const auto& d : report.datasets) {
    by_year[d.year].push_back(d.pearson);
    total += d.pearson;
  }
  for (const auto& [year, rs] : by_year) {
    double sum = 0.0;
    for (double r : rs) sum += r;
    report.years.push_back({year, rs.size(), sum / static_cast<double>(rs.size())});
  }
  if (!report.datasets.empty()) {
    report.grand_mean = total / static_cast<double>(report.datasets.size());
  }
  return report;
}

std::string FormatEvalReport(const EvalReport& report) {
  std::string out = "year\tdataset\tn\tpearson\n";
  for (const auto& d : report.datasets) {
    out += d.year + "\t" + d.name + "\t" + std::to_string(d.n) + "\t" +
           FormatFixed(d.pearson, 4) + "\n";
  }
  for (const auto& y : report.years) {
    out += y.year + "\tMEAN\t" + std::to_string(y.datasets) + "\t" +
           FormatFixed(y.mean_pearson, 4) + "\n";
  }
  out += "ALL\tMEAN\t" + std::to_string(report.datasets.size()) + "\t" +
         FormatFixed(report.grand_mean, 4) + "\n";
  return out;
}

}  // namespace paranmt
