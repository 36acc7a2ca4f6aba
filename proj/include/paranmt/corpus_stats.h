#ifndef PARANMT_CORPUS_STATS_H_
#define PARANMT_CORPUS_STATS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "paranmt/corpus_io.h"

namespace paranmt {

class Encoder;

// Mean and population standard deviation.
struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
  size_t count = 0;
};

MeanStd ComputeMeanStd(std::span<const double> values);

// Document-frequency accumulator; each sentence is one document. Partial
// counters over disjoint slices merge to the same result as one pass.
class DocumentFrequency {
 public:
  void Add(const TokenizedSentence& sentence);
  void Merge(const DocumentFrequency& other);

  size_t n_documents() const { return n_documents_; }
  const std::unordered_map<std::string, size_t>& counts() const {
    return df_;
  }

 private:
  std::unordered_map<std::string, size_t> df_;
  size_t n_documents_ = 0;
};

class IdfTable {
 public:
  IdfTable() = default;
  explicit IdfTable(const DocumentFrequency& df);

  // ln(N / df); tokens never seen get ln(N), i.e. df treated as 1.
  double Lookup(std::string_view token) const;
  bool Contains(std::string_view token) const;

  size_t n_documents() const { return n_documents_; }
  size_t size() const { return idf_.size(); }
  const std::unordered_map<std::string, double>& values() const {
    return idf_;
  }

 private:
  std::unordered_map<std::string, double> idf_;
  size_t n_documents_ = 0;
};

IdfTable BuildIdf(std::span<const TokenizedSentence> documents);

// Per-sentence mean idf, then mean/std over sentences. Sentences with no
// tokens have no per-sentence mean and are left out.
MeanStd AverageIdf(std::span<const TokenizedSentence> corpus,
                   const IdfTable& table);

// Base-2 Shannon entropy of an empirical distribution given by counts.
double EntropyBits(const std::map<std::string, size_t>& counts);

double VocabEntropy(std::span<const TokenizedSentence> corpus);

// Root label followed by its children's labels, e.g. "(S(NP)(VP))". A
// unary wrapper labelled ROOT, TOP or with an empty label is looked through.
std::string ParseTemplate(std::string_view bracketed_parse);

double ParseEntropy(std::span<const ParsedSentence> corpus);

struct CorpusReport {
  std::string name;
  size_t n_sentences = 0;
  MeanStd length;
  MeanStd idf;
  std::optional<MeanStd> para_score;
  double vocab_entropy_bits = 0.0;
  std::optional<double> parse_entropy_bits;
};

struct CorpusReportInputs {
  std::string name;
  std::span<const TokenizedSentence> sentences;
  const IdfTable* idf = nullptr;
  std::span<const ParsedSentence> parses;            // optional
  std::span<const ParaphrasePair> pairs;             // optional
  const Encoder* scorer = nullptr;                   // optional
  int threads = 1;
};

CorpusReport BuildCorpusReport(const CorpusReportInputs& inputs);

// TSV header and row in Table-1 column order.
std::string CorpusReportTsvHeader();
std::string CorpusReportTsvRow(const CorpusReport& report);

}  // namespace paranmt

#endif  // PARANMT_CORPUS_STATS_H_
