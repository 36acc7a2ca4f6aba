#include "paranmt/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "paranmt/common.h"

namespace paranmt {

void TrainingConfig::Validate() const {
  if (!(margin > 0.0)) throw Error("margin must be > 0");
  if (minibatch_size < 2) throw Error("mini-batch size must be >= 2");
  if (megabatch_multiplier < 1) throw Error("mega-batch multiplier must be >= 1");
  if (!(learning_rate > 0.0)) throw Error("learning rate must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw Error("adam betas must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw Error("adam epsilon must be > 0");
}

double MarginLoss(double cos_pos, double cos_neg, double margin) {
  return std::max(0.0, margin - cos_pos + cos_neg);
}

double NegativeSelection::MeanFirstCosine() const {
  if (first_cosines.empty()) return 0.0;
  double sum = 0.0;
  for (double c : first_cosines) sum += c;
  return sum / static_cast<double>(first_cosines.size());
}

namespace {

struct Candidate {
  SentenceRef ref;
  const SentenceVector* vec;
};

// Candidates are already in tie-break order, so strict '>' keeps the first.
void ArgmaxCosine(const SentenceVector& anchor, size_t own_pair,
                  const std::vector<Candidate>& candidates, SentenceRef* best,
                  double* best_cos) {
  bool found = false;
  for (const auto& c : candidates) {
    if (c.ref.pair == own_pair) continue;
    double cos = Cosine(anchor, *c.vec);
    if (!found || cos > *best_cos) {
      found = true;
      *best = c.ref;
      *best_cos = cos;
    }
  }
}

}  // namespace

NegativeSelection SelectNegatives(std::span<const SentenceVector> first,
                                  std::span<const SentenceVector> second,
                                  bool symmetric,
                                  bool include_second_candidates,
                                  int threads) {
  const size_t n = first.size();
  if (n < 2) {
    throw Error("negative selection needs at least 2 pairs, got " +
                std::to_string(n));
  }
  if ((symmetric || include_second_candidates) && second.size() != n) {
    throw Error("negative selection: second-sentence vectors missing");
  }
  std::vector<Candidate> candidates;
  candidates.reserve(include_second_candidates ? 2 * n : n);
  for (size_t j = 0; j < n; ++j) {
    candidates.push_back({{j, false}, &first[j]});
    if (include_second_candidates) {
      candidates.push_back({{j, true}, &second[j]});
    }
  }
  NegativeSelection sel;
  sel.for_first.resize(n);
  sel.first_cosines.resize(n);
  if (symmetric) {
    sel.for_second.resize(n);
    sel.second_cosines.resize(n);
  }
  ParallelFor(n, threads, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      ArgmaxCosine(first[i], i, candidates, &sel.for_first[i],
                   &sel.first_cosines[i]);
      if (symmetric) {
        ArgmaxCosine(second[i], i, candidates, &sel.for_second[i],
                     &sel.second_cosines[i]);
      }
    }
  });
  return sel;
}

std::vector<PairFeatures> FeaturizePairs(
    const Encoder& encoder, std::span<const ParaphrasePair> pairs) {
  std::vector<PairFeatures> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    out.push_back({encoder.Featurize(p.reference),
                   encoder.Featurize(p.translation)});
  }
  return out;
}

MegaBatch FormMegaBatch(const Encoder& encoder,
                        std::span<const PairFeatures> corpus,
                        std::span<const size_t> pair_indices,
                        const TrainingConfig& config) {
  MegaBatch batch;
  batch.pair_indices.assign(pair_indices.begin(), pair_indices.end());
  const size_t n = pair_indices.size();
  const bool need_second =
      config.symmetric_loss || config.negatives_from_both_sides;
  batch.first_vectors.resize(n);
  if (need_second) batch.second_vectors.resize(n);
  ParallelFor(n, config.threads, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      const auto& pf = corpus[pair_indices[i]];
      batch.first_vectors[i] = encoder.Encode(pf.first);
      if (need_second) batch.second_vectors[i] = encoder.Encode(pf.second);
    }
  });
  batch.negatives = SelectNegatives(batch.first_vectors, batch.second_vectors,
                                    config.symmetric_loss,
                                    config.negatives_from_both_sides,
                                    config.threads);
  return batch;
}

Gradients Gradients::ZerosLike(const Encoder& encoder) {
  Gradients g;
  if (encoder.has_word()) g.word.assign(encoder.word().values().size(), 0.0);
  if (encoder.has_trigram()) {
    g.trigram.assign(encoder.trigram().values().size(), 0.0);
  }
  return g;
}

void Gradients::SetZero() {
  std::fill(word.begin(), word.end(), 0.0);
  std::fill(trigram.begin(), trigram.end(), 0.0);
}

namespace {

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Unclamped cosine plus the pieces its gradient needs.
struct CosineTerm {
  double value = 0.0;
  double norm_u = 0.0;
  double norm_v = 0.0;
};

CosineTerm RawCosine(std::span<const double> u, std::span<const double> v) {
  CosineTerm t;
  t.norm_u = std::sqrt(Dot(u, u));
  t.norm_v = std::sqrt(Dot(v, v));
  if (t.norm_u == 0.0 || t.norm_v == 0.0) return t;
  t.value = Dot(u, v) / (t.norm_u * t.norm_v);
  return t;
}

// du += w * dcos/du, dv += w * dcos/dv with
// dcos/du = v / (|u||v|) - cos * u / |u|^2.
void AccumulateCosineGrad(const CosineTerm& t, std::span<const double> u,
                          std::span<const double> v, double w,
                          std::span<double> du, std::span<double> dv) {
  if (t.norm_u == 0.0 || t.norm_v == 0.0) return;
  const double inv_uv = 1.0 / (t.norm_u * t.norm_v);
  const double cu = t.value / (t.norm_u * t.norm_u);
  const double cv = t.value / (t.norm_v * t.norm_v);
  for (size_t k = 0; k < u.size(); ++k) {
    du[k] += w * (v[k] * inv_uv - cu * u[k]);
    dv[k] += w * (u[k] * inv_uv - cv * v[k]);
  }
}

void ScatterAverage(std::span<const uint32_t> ids,
                    std::span<const double> upstream, double scale,
                    size_t dim, std::vector<double>* grad) {
  if (ids.empty()) return;
  const double w = scale / static_cast<double>(ids.size());
  for (uint32_t id : ids) {
    double* row = grad->data() + static_cast<size_t>(id) * dim;
    for (size_t k = 0; k < dim; ++k) row[k] += w * upstream[k];
  }
}

void Backprop(const Encoder& encoder, const SentenceFeatures& f,
              std::span<const double> upstream, double scale,
              Gradients* grads) {
  switch (encoder.kind()) {
    case EncoderKind::kWordAvg:
      ScatterAverage(f.word_ids, upstream, scale, encoder.word().dim(),
                     &grads->word);
      break;
    case EncoderKind::kTrigramAvg:
      ScatterAverage(f.trigram_ids, upstream, scale, encoder.trigram().dim(),
                     &grads->trigram);
      break;
    case EncoderKind::kAdditive:
      ScatterAverage(f.word_ids, upstream, scale, encoder.word().dim(),
                     &grads->word);
      ScatterAverage(f.trigram_ids, upstream, scale, encoder.trigram().dim(),
                     &grads->trigram);
      break;
    case EncoderKind::kConcat: {
      const size_t dw = encoder.word().dim();
      ScatterAverage(f.word_ids, upstream.first(dw), scale, dw, &grads->word);
      ScatterAverage(f.trigram_ids, upstream.subspan(dw), scale,
                     encoder.trigram().dim(), &grads->trigram);
      break;
    }
  }
}

}  // namespace

double MiniBatchLoss(const Encoder& encoder,
                     std::span<const TrainingExample> examples, double margin,
                     bool symmetric, Gradients* grads,
                     std::vector<double>* per_example_loss) {
  if (examples.empty()) return 0.0;
  const size_t dim = encoder.output_dim();
  const double scale = 1.0 / static_cast<double>(examples.size());
  if (grads) {
    if (grads->word.size() !=
            (encoder.has_word() ? encoder.word().values().size() : 0) ||
        grads->trigram.size() !=
            (encoder.has_trigram() ? encoder.trigram().values().size() : 0)) {
      *grads = Gradients::ZerosLike(encoder);
    } else {
      grads->SetZero();
    }
  }
  if (per_example_loss) per_example_loss->assign(examples.size(), 0.0);

  std::vector<double> ds(dim), dsp(dim), dt(dim), dt2(dim);
  double total = 0.0;
  for (size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    if (!ex.first || !ex.second || !ex.negative ||
        (symmetric && !ex.negative_second)) {
      throw Error("training example is missing a sentence");
    }
    SentenceVector gs = encoder.Encode(*ex.first);
    SentenceVector gsp = encoder.Encode(*ex.second);
    SentenceVector gt = encoder.Encode(*ex.negative);
    CosineTerm pos = RawCosine(gs, gsp);
    CosineTerm neg = RawCosine(gs, gt);
    std::fill(ds.begin(), ds.end(), 0.0);
    std::fill(dsp.begin(), dsp.end(), 0.0);
    std::fill(dt.begin(), dt.end(), 0.0);
    std::fill(dt2.begin(), dt2.end(), 0.0);
    bool any_active = false;

    double loss = 0.0;
    const double hinge = margin - pos.value + neg.value;
    if (hinge > 0.0) {
      loss += hinge;
      any_active = true;
      AccumulateCosineGrad(pos, gs, gsp, -1.0, ds, dsp);
      AccumulateCosineGrad(neg, gs, gt, 1.0, ds, dt);
    }
    SentenceVector gt2;
    if (symmetric) {
      gt2 = encoder.Encode(*ex.negative_second);
      CosineTerm neg2 = RawCosine(gsp, gt2);
      const double hinge2 = margin - pos.value + neg2.value;
      if (hinge2 > 0.0) {
        loss += hinge2;
        any_active = true;
        AccumulateCosineGrad(pos, gs, gsp, -1.0, ds, dsp);
        AccumulateCosineGrad(neg2, gsp, gt2, 1.0, dsp, dt2);
      }
    }
    total += loss;
    if (per_example_loss) (*per_example_loss)[i] = loss;
    if (grads && any_active) {
      Backprop(encoder, *ex.first, ds, scale, grads);
      Backprop(encoder, *ex.second, dsp, scale, grads);
      Backprop(encoder, *ex.negative, dt, scale, grads);
      if (symmetric) Backprop(encoder, *ex.negative_second, dt2, scale, grads);
    }
  }
  return total * scale;
}

AdamState::AdamState(std::vector<size_t> block_sizes) {
  for (size_t n : block_sizes) {
    m_.emplace_back(n, 0.0);
    v_.emplace_back(n, 0.0);
  }
}

void AdamState::Step(std::span<const std::span<double>> params,
                     std::span<const std::span<const double>> grads,
                     const AdamConfig& config) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw Error("adam: parameter block count mismatch");
  }
  for (size_t b = 0; b < m_.size(); ++b) {
    if (params[b].size() != m_[b].size() || grads[b].size() != m_[b].size()) {
      throw Error("adam: parameter block " + std::to_string(b) +
                  " has the wrong shape");
    }
    for (double g : grads[b]) {
      if (!std::isfinite(g)) throw Error("adam: non-finite gradient");
    }
  }
  ++step_;
  const double t = static_cast<double>(step_);
  const double correction1 = 1.0 - std::pow(config.beta1, t);
  const double correction2 = 1.0 - std::pow(config.beta2, t);
  for (size_t b = 0; b < m_.size(); ++b) {
    auto& m = m_[b];
    auto& v = v_[b];
    auto theta = params[b];
    auto g = grads[b];
    for (size_t i = 0; i < m.size(); ++i) {
      m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g[i];
      v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      theta[i] -= config.learning_rate * m_hat /
                  (std::sqrt(v_hat) + config.epsilon);
    }
  }
}

namespace {

// Consecutive chunks of `size`; a short last chunk survives only with >= 2.
std::vector<std::span<const size_t>> PartitionMegaBatches(
    std::span<const size_t> order, size_t size) {
  std::vector<std::span<const size_t>> out;
  for (size_t start = 0; start < order.size(); start += size) {
    size_t len = std::min(size, order.size() - start);
    if (len < 2) break;
    out.push_back(order.subspan(start, len));
  }
  return out;
}

const SentenceFeatures& Resolve(std::span<const PairFeatures> corpus,
                                const MegaBatch& batch, SentenceRef ref) {
  const auto& pf = corpus[batch.pair_indices[ref.pair]];
  return ref.second ? pf.second : pf.first;
}

}  // namespace

TrainResult Train(std::span<const ParaphrasePair> pairs, Encoder* encoder,
                  const TrainingConfig& config) {
  config.Validate();
  if (pairs.empty()) throw Error("train: empty corpus");
  if (pairs.size() < 2) throw Error("train: need at least 2 pairs");
  const std::vector<PairFeatures> corpus = FeaturizePairs(*encoder, pairs);

  const bool train_word = encoder->has_word() && config.update_embeddings &&
                          UsesWords(encoder->kind());
  const bool train_trigram =
      encoder->has_trigram() && UsesTrigrams(encoder->kind());
  std::vector<size_t> block_sizes;
  if (train_word) block_sizes.push_back(encoder->word().values().size());
  if (train_trigram) block_sizes.push_back(encoder->trigram().values().size());
  AdamState adam(block_sizes);
  const AdamConfig adam_config{config.learning_rate, config.beta1,
                               config.beta2, config.epsilon};

  std::mt19937_64 rng(config.seed);
  std::vector<size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), size_t{0});
  const size_t mega_size = config.minibatch_size * config.megabatch_multiplier;

  TrainResult result;
  Gradients grads = Gradients::ZerosLike(*encoder);
  std::vector<double> example_loss;
  std::vector<TrainingExample> examples;

  for (size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    EpochLog log;
    log.epoch = epoch;
    double loss_sum = 0.0;
    size_t loss_count = 0;
    double neg_sum = 0.0;
    for (auto mega_indices : PartitionMegaBatches(order, mega_size)) {
      MegaBatch batch = FormMegaBatch(*encoder, corpus, mega_indices, config);
      const double mega_cos = batch.negatives.MeanFirstCosine();
      result.megabatch_negative_cosines.push_back(mega_cos);
      neg_sum += mega_cos;
      ++log.megabatches;

      for (size_t start = 0; start < batch.pair_indices.size();
           start += config.minibatch_size) {
        size_t end = std::min(batch.pair_indices.size(),
                              start + config.minibatch_size);
        examples.clear();
        for (size_t i = start; i < end; ++i) {
          const auto& pf = corpus[batch.pair_indices[i]];
          TrainingExample ex;
          ex.first = &pf.first;
          ex.second = &pf.second;
          ex.negative = &Resolve(corpus, batch, batch.negatives.for_first[i]);
          if (config.symmetric_loss) {
            ex.negative_second =
                &Resolve(corpus, batch, batch.negatives.for_second[i]);
          }
          examples.push_back(ex);
        }
        MiniBatchLoss(*encoder, examples, config.margin,
                      config.symmetric_loss, &grads, &example_loss);
        for (double l : example_loss) loss_sum += l;
        loss_count += example_loss.size();

        std::vector<std::span<double>> params;
        std::vector<std::span<const double>> grad_blocks;
        if (train_word) {
          params.emplace_back(encoder->mutable_word().values());
          grad_blocks.emplace_back(grads.word);
        }
        if (train_trigram) {
          params.emplace_back(encoder->mutable_trigram().values());
          grad_blocks.emplace_back(grads.trigram);
        }
        adam.Step(params, grad_blocks, adam_config);
        ++log.steps;
      }
    }
    log.mean_loss = loss_count ? loss_sum / static_cast<double>(loss_count) : 0;
    log.mean_negative_cosine =
        log.megabatches ? neg_sum / static_cast<double>(log.megabatches) : 0;
    result.epochs.push_back(log);
  }
  return result;
}

double FrozenNegativeCosine(const Encoder& encoder,
                            std::span<const ParaphrasePair> pairs,
                            size_t minibatch_size, size_t megabatch_multiplier,
                            uint64_t seed, int threads) {
  if (pairs.size() < 2) throw Error("need at least 2 pairs");
  TrainingConfig config;
  config.minibatch_size = minibatch_size;
  config.megabatch_multiplier = megabatch_multiplier;
  config.threads = threads;
  config.Validate();
  const std::vector<PairFeatures> corpus = FeaturizePairs(encoder, pairs);
  std::vector<size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  double sum = 0.0;
  size_t count = 0;
  for (auto mega : PartitionMegaBatches(
           order, minibatch_size * megabatch_multiplier)) {
    MegaBatch batch = FormMegaBatch(encoder, corpus, mega, config);
    for (double c : batch.negatives.first_cosines) sum += c;
    count += batch.negatives.first_cosines.size();
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

double RelativeError(double analytic, double numeric, double floor) {
  double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

namespace {

struct GradInstance {
  Encoder encoder;
  std::vector<SentenceFeatures> sentences;
  std::vector<TrainingExample> examples;
  double margin = 1.0;
};

std::string RandomWord(std::mt19937_64& rng) {
  static constexpr char kLetters[] = "abcdef";
  std::uniform_int_distribution<int> len(1, 4);
  std::uniform_int_distribution<int> letter(0, 5);
  std::string w;
  int n = len(rng);
  for (int i = 0; i < n; ++i) w += kLetters[letter(rng)];
  return w;
}

Vocabulary TruncatedVocab(const Vocabulary& full, size_t max_units) {
  Vocabulary out(full.kind());
  for (size_t i = 0; i < std::min(max_units, full.size()); ++i) {
    out.Add(full.UnitAt(static_cast<uint32_t>(i)));
  }
  return out;
}

// Makes a random instance on which every hinge is clearly active or clearly
// inactive, so central differences never straddle a kink.
GradInstance MakeGradInstance(EncoderKind kind, bool symmetric,
                              size_t max_dim, std::mt19937_64& rng) {
  std::uniform_int_distribution<size_t> dim_dist(2, std::max<size_t>(2, max_dim));
  std::uniform_int_distribution<size_t> len_dist(1, 6);
  std::uniform_int_distribution<size_t> pairs_dist(2, 5);
  std::uniform_real_distribution<double> margin_dist(0.2, 1.2);
  for (int attempt = 0;; ++attempt) {
    GradInstance inst;
    const size_t dim = dim_dist(rng);
    const size_t n_pairs = pairs_dist(rng);
    std::vector<std::string> lexicon;
    std::uniform_int_distribution<size_t> lex_size(8, 40);
    size_t n_lex = lex_size(rng);
    for (size_t i = 0; i < n_lex; ++i) lexicon.push_back(RandomWord(rng));
    std::uniform_int_distribution<size_t> pick(0, lexicon.size() - 1);
    std::vector<TokenizedSentence> sentences;
    for (size_t i = 0; i < 2 * n_pairs; ++i) {
      TokenizedSentence s;
      size_t len = len_dist(rng);
      for (size_t k = 0; k < len; ++k) s.tokens.push_back(lexicon[pick(rng)]);
      sentences.push_back(std::move(s));
    }
    std::optional<EmbeddingMatrix> word, trigram;
    auto scaled = [&](const Vocabulary& v, size_t d) {
      EmbeddingMatrix m = InitMatrix(v, d, rng());
      for (double& x : m.values()) x *= 10.0;  // entries in [-1, 1)
      return m;
    };
    if (UsesWords(kind)) {
      word = scaled(TruncatedVocab(BuildVocab(sentences, UnitKind::kWord, 1), 50),
                    dim);
    }
    if (UsesTrigrams(kind)) {
      size_t tdim = kind == EncoderKind::kConcat ? dim_dist(rng) : dim;
      trigram = scaled(
          TruncatedVocab(BuildVocab(sentences, UnitKind::kCharTrigram, 1), 50),
          tdim);
    }
    inst.encoder = Encoder(kind, std::move(word), std::move(trigram));
    inst.margin = margin_dist(rng);
    for (const auto& s : sentences) {
      inst.sentences.push_back(inst.encoder.Featurize(s));
    }
    std::uniform_int_distribution<size_t> other(0, n_pairs - 2);
    bool ok = true;
    for (size_t i = 0; i < n_pairs && ok; ++i) {
      size_t j = other(rng);
      if (j >= i) ++j;
      size_t j2 = other(rng);
      if (j2 >= i) ++j2;
      TrainingExample ex;
      ex.first = &inst.sentences[2 * i];
      ex.second = &inst.sentences[2 * i + 1];
      ex.negative = &inst.sentences[2 * j];
      if (symmetric) ex.negative_second = &inst.sentences[2 * j2];
      auto gs = inst.encoder.Encode(*ex.first);
      auto gsp = inst.encoder.Encode(*ex.second);
      auto gt = inst.encoder.Encode(*ex.negative);
      auto norm = [](const SentenceVector& v) {
        return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
      };
      if (norm(gs) < 1e-2 || norm(gsp) < 1e-2 || norm(gt) < 1e-2) ok = false;
      double h = inst.margin - Cosine(gs, gsp) + Cosine(gs, gt);
      if (std::abs(h) < 1e-3) ok = false;
      if (symmetric) {
        auto gt2 = inst.encoder.Encode(*ex.negative_second);
        if (norm(gt2) < 1e-2) ok = false;
        double h2 = inst.margin - Cosine(gs, gsp) + Cosine(gsp, gt2);
        if (std::abs(h2) < 1e-3) ok = false;
      }
      inst.examples.push_back(ex);
    }
    if (ok) return inst;
    if (attempt > 1000) throw Error("gradcheck: could not build an instance");
  }
}

}  // namespace

GradCheckResult GradCheck(EncoderKind kind, bool symmetric, size_t max_dim,
                          uint64_t seed, size_t instances, double step) {
  GradCheckResult result;
  result.kind = kind;
  result.symmetric = symmetric;
  std::mt19937_64 rng(seed);
  for (size_t n = 0; n < instances; ++n) {
    GradInstance inst = MakeGradInstance(kind, symmetric, max_dim, rng);
    Gradients analytic;
    MiniBatchLoss(inst.encoder, inst.examples, inst.margin, symmetric,
                  &analytic);
    auto check_block = [&](std::vector<double>& values,
                           const std::vector<double>& grad) {
      for (size_t i = 0; i < values.size(); ++i) {
        const double saved = values[i];
        values[i] = saved + step;
        double plus = MiniBatchLoss(inst.encoder, inst.examples, inst.margin,
                                    symmetric);
        values[i] = saved - step;
        double minus = MiniBatchLoss(inst.encoder, inst.examples, inst.margin,
                                     symmetric);
        values[i] = saved;
        double numeric = (plus - minus) / (2.0 * step);
        result.max_relative_error =
            std::max(result.max_relative_error,
                     RelativeError(grad[i], numeric, 1e-8));
        ++result.parameters_checked;
      }
    };
    if (inst.encoder.has_word()) {
      check_block(inst.encoder.mutable_word().values(), analytic.word);
    }
    if (inst.encoder.has_trigram()) {
      check_block(inst.encoder.mutable_trigram().values(), analytic.trigram);
    }
    ++result.instances;
  }
  return result;
}

}  // namespace paranmt
