#ifndef PARANMT_STS_EVAL_H_
#define PARANMT_STS_EVAL_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "paranmt/corpus_io.h"

namespace paranmt {

class Encoder;

// Sample Pearson correlation. Throws when lengths differ, n < 2 or either
// input is constant.
double Pearson(std::span<const double> x, std::span<const double> y);

// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> AverageRanks(std::span<const double> values);

// Pearson correlation of average ranks.
double Spearman(std::span<const double> x, std::span<const double> y);

struct DatasetResult {
  std::string year;
  std::string name;
  size_t n = 0;
  double pearson = 0.0;
};

struct YearResult {
  std::string year;
  size_t datasets = 0;
  double mean_pearson = 0.0;  // unweighted over the year's datasets
};

struct EvalReport {
  std::vector<DatasetResult> datasets;  // manifest order
  std::vector<YearResult> years;        // sorted by year
  double grand_mean = 0.0;              // unweighted over all datasets
};

// Cosine of independently encoded sentences per example, then Pearson
// against gold per dataset. Gold values are only read for correlation.
EvalReport EvaluateSts(const StsCollection& collection, const Encoder& encoder,
                       int threads = 1);

// year, dataset, n, pearson rows followed by per-year and overall summaries,
// correlations printed with 4 decimals.
std::string FormatEvalReport(const EvalReport& report);

}  // namespace paranmt

#endif  // PARANMT_STS_EVAL_H_
