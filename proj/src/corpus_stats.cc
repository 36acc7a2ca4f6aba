#include "paranmt/corpus_stats.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_set>

#include "paranmt/common.h"
#include "paranmt/filter.h"

namespace paranmt {

MeanStd ComputeMeanStd(std::span<const double> values) {
  MeanStd out;
  out.count = values.size();
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - out.mean) * (v - out.mean);
  out.std = std::sqrt(sq / static_cast<double>(values.size()));
  return out;
}

void DocumentFrequency::Add(const TokenizedSentence& sentence) {
  ++n_documents_;
  std::unordered_set<std::string_view> seen;
  for (const auto& token : sentence.tokens) {
    if (seen.insert(token).second) ++df_[token];
  }
}

void DocumentFrequency::Merge(const DocumentFrequency& other) {
  n_documents_ += other.n_documents_;
  for (const auto& [token, count] : other.df_) df_[token] += count;
}

IdfTable::IdfTable(const DocumentFrequency& df)
    : n_documents_(df.n_documents()) {
  const double n = static_cast<double>(n_documents_);
  idf_.reserve(df.counts().size());
  for (const auto& [token, count] : df.counts()) {
    idf_.emplace(token, std::log(n / static_cast<double>(count)));
  }
}

double IdfTable::Lookup(std::string_view token) const {
  auto it = idf_.find(std::string(token));
  if (it != idf_.end()) return it->second;
  return std::log(static_cast<double>(n_documents_));
}

bool IdfTable::Contains(std::string_view token) const {
  return idf_.count(std::string(token)) > 0;
}

IdfTable BuildIdf(std::span<const TokenizedSentence> documents) {
  if (documents.empty()) throw Error("BuildIdf: no documents");
  DocumentFrequency df;
  for (const auto& doc : documents) df.Add(doc);
  return IdfTable(df);
}

MeanStd AverageIdf(std::span<const TokenizedSentence> corpus,
                   const IdfTable& table) {
  if (table.n_documents() == 0) throw Error("AverageIdf: empty idf table");
  if (corpus.empty()) throw Error("AverageIdf: empty corpus");
  std::vector<double> per_sentence;
  per_sentence.reserve(corpus.size());
  for (const auto& sentence : corpus) {
    if (sentence.empty()) continue;
    double sum = 0.0;
    for (const auto& token : sentence.tokens) sum += table.Lookup(token);
    per_sentence.push_back(sum / static_cast<double>(sentence.size()));
  }
  if (per_sentence.empty()) throw Error("AverageIdf: every sentence is empty");
  return ComputeMeanStd(per_sentence);
}

double EntropyBits(const std::map<std::string, size_t>& counts) {
  size_t total = 0;
  for (const auto& [key, count] : counts) total += count;
  if (total == 0) throw Error("EntropyBits: empty distribution");
  const double n = static_cast<double>(total);
  double h = 0.0;
  for (const auto& [key, count] : counts) {
    if (count == 0) continue;
    double p = static_cast<double>(count) / n;
    h -= p * std::log2(p);
  }
  return std::max(0.0, h);
}

double VocabEntropy(std::span<const TokenizedSentence> corpus) {
  std::map<std::string, size_t> counts;
  for (const auto& sentence : corpus) {
    for (const auto& token : sentence.tokens) ++counts[token];
  }
  if (counts.empty()) throw Error("VocabEntropy: corpus has no tokens");
  return EntropyBits(counts);
}

namespace {

struct TreeNode {
  std::string label;
  std::vector<TreeNode> children;  // bracketed children only
  size_t words = 0;                // bare terminals directly under this node
};

class BracketParser {
 public:
  explicit BracketParser(std::string_view text) : text_(text) {}

  TreeNode ParseRoot() {
    SkipSpace();
    if (pos_ >= text_.size()) Fail("empty parse");
    if (text_[pos_] != '(') Fail("parse must start with '('");
    TreeNode root = ParseNode();
    SkipSpace();
    if (pos_ != text_.size()) Fail("trailing text after the root");
    return root;
  }

 private:
  TreeNode ParseNode() {
    // text_[pos_] == '('
    ++pos_;
    SkipSpace();
    TreeNode node;
    node.label = ReadAtom();
    while (true) {
      SkipSpace();
      if (pos_ >= text_.size()) Fail("unbalanced parentheses");
      char c = text_[pos_];
      if (c == ')') {
        ++pos_;
        return node;
      }
      if (c == '(') {
        node.children.push_back(ParseNode());
      } else {
        ReadAtom();
        ++node.words;
      }
    }
  }

  std::string ReadAtom() {
    size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  void SkipSpace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  [[noreturn]] void Fail(const std::string& what) {
    throw Error("malformed parse: " + what + " at offset " +
                std::to_string(pos_));
  }

  std::string_view text_;
  size_t pos_ = 0;
};

bool IsWrapperLabel(const std::string& label) {
  return label.empty() || label == "ROOT" || label == "TOP";
}

}  // namespace

std::string ParseTemplate(std::string_view bracketed_parse) {
  TreeNode root = BracketParser(bracketed_parse).ParseRoot();
  const TreeNode* top = &root;
  while (IsWrapperLabel(top->label) && top->children.size() == 1 &&
         top->words == 0) {
    top = &top->children.front();
  }
  if (top->label.empty()) throw Error("malformed parse: root has no label");
  std::string out = "(" + top->label;
  for (const auto& child : top->children) {
    if (child.label.empty()) {
      throw Error("malformed parse: unlabelled constituent under the root");
    }
    out += "(" + child.label + ")";
  }
  out += ")";
  return out;
}

double ParseEntropy(std::span<const ParsedSentence> corpus) {
  if (corpus.empty()) throw Error("ParseEntropy: empty corpus");
  std::map<std::string, size_t> counts;
  for (size_t i = 0; i < corpus.size(); ++i) {
    const auto& parsed = corpus[i];
    try {
      ++counts[ParseTemplate(parsed.bracketed_parse)];
    } catch (const Error& e) {
      size_t line = parsed.line != 0 ? parsed.line : i + 1;
      throw Error("line " + std::to_string(line) + ": " + e.what());
    }
  }
  return EntropyBits(counts);
}

CorpusReport BuildCorpusReport(const CorpusReportInputs& inputs) {
  if (inputs.sentences.empty()) throw Error("corpus report: no sentences");
  if (inputs.idf == nullptr) throw Error("corpus report: no idf table");
  CorpusReport report;
  report.name = inputs.name;
  report.n_sentences = inputs.sentences.size();
  std::vector<double> lengths;
  lengths.reserve(inputs.sentences.size());
  for (const auto& s : inputs.sentences) {
    lengths.push_back(static_cast<double>(s.size()));
  }
  report.length = ComputeMeanStd(lengths);
  report.idf = AverageIdf(inputs.sentences, *inputs.idf);
  report.vocab_entropy_bits = VocabEntropy(inputs.sentences);
  if (!inputs.parses.empty()) {
    report.parse_entropy_bits = ParseEntropy(inputs.parses);
  }
  if (inputs.scorer != nullptr && !inputs.pairs.empty()) {
    auto scores = ScorePairs(inputs.pairs, Criterion::kParaphrase,
                             inputs.scorer, inputs.threads);
    report.para_score = ComputeMeanStd(scores);
  }
  return report;
}

std::string CorpusReportTsvHeader() {
  return "dataset\tavg_length\tavg_length_std\tavg_idf\tavg_idf_std\t"
         "avg_para_score\tavg_para_score_std\tvocab_entropy\tparse_entropy\t"
         "size";
}

std::string CorpusReportTsvRow(const CorpusReport& r) {
  auto fmt = [](double v) { return FormatFixed(v, 4); };
  std::string row = r.name;
  row += "\t" + fmt(r.length.mean) + "\t" + fmt(r.length.std);
  row += "\t" + fmt(r.idf.mean) + "\t" + fmt(r.idf.std);
  if (r.para_score) {
    row += "\t" + fmt(r.para_score->mean) + "\t" + fmt(r.para_score->std);
  } else {
    row += "\tNA\tNA";
  }
  row += "\t" + fmt(r.vocab_entropy_bits);
  row += "\t" + (r.parse_entropy_bits ? fmt(*r.parse_entropy_bits) : "NA");
  row += "\t" + std::to_string(r.n_sentences);
  return row;
}

}  // namespace paranmt
