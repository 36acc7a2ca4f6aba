#ifndef PARANMT_TRAINER_H_
#define PARANMT_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "paranmt/corpus_io.h"
#include "paranmt/encoders.h"

namespace paranmt {

struct TrainingConfig {
  double margin = 0.4;
  size_t minibatch_size = 100;
  size_t megabatch_multiplier = 1;
  size_t epochs = 5;
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  uint64_t seed = 1;
  // Adds the mirrored hinge for s' with its own mined negative.
  bool symmetric_loss = false;
  // When false the word store is frozen; trigram embeddings still train.
  bool update_embeddings = true;
  // Second sentences of other pairs also become negative candidates.
  bool negatives_from_both_sides = false;
  int threads = 1;

  void Validate() const;
};

// max(0, margin - cos_pos + cos_neg)
double MarginLoss(double cos_pos, double cos_neg, double margin);

// One sentence of a pair, addressed by its position in a batch.
struct SentenceRef {
  size_t pair = 0;
  bool second = false;

  bool operator==(const SentenceRef&) const = default;
};

struct NegativeSelection {
  std::vector<SentenceRef> for_first;   // negative t for each s
  std::vector<double> first_cosines;    // cos(g(s), g(t))
  std::vector<SentenceRef> for_second;  // negative for each s' (symmetric)
  std::vector<double> second_cosines;

  double MeanFirstCosine() const;
};

// Hardest negative for every pair of a batch from frozen vectors. The
// candidates for pair i are the first sentences of every other pair (and
// their second sentences when `include_second_candidates`). Ties go to the
// lowest pair index, first sentence before second. Results do not depend
// on `threads`.
NegativeSelection SelectNegatives(std::span<const SentenceVector> first,
                                  std::span<const SentenceVector> second,
                                  bool symmetric,
                                  bool include_second_candidates,
                                  int threads = 1);

struct PairFeatures {
  SentenceFeatures first;
  SentenceFeatures second;
};

std::vector<PairFeatures> FeaturizePairs(const Encoder& encoder,
                                         std::span<const ParaphrasePair> pairs);

// M aggregated mini-batches with negatives chosen once, from vectors
// computed under the parameters at formation time.
struct MegaBatch {
  std::vector<size_t> pair_indices;
  std::vector<SentenceVector> first_vectors;
  std::vector<SentenceVector> second_vectors;
  NegativeSelection negatives;
};

MegaBatch FormMegaBatch(const Encoder& encoder,
                        std::span<const PairFeatures> corpus,
                        std::span<const size_t> pair_indices,
                        const TrainingConfig& config);

struct TrainingExample {
  const SentenceFeatures* first = nullptr;
  const SentenceFeatures* second = nullptr;
  const SentenceFeatures* negative = nullptr;
  const SentenceFeatures* negative_second = nullptr;  // symmetric only
};

// Gradient buffers shaped like the encoder's stores (empty when absent).
struct Gradients {
  std::vector<double> word;
  std::vector<double> trigram;

  static Gradients ZerosLike(const Encoder& encoder);
  void SetZero();
};

// Mean hinge loss over the examples. When `grads` is non-null it receives
// the exact gradient of that mean with the negatives held fixed.
double MiniBatchLoss(const Encoder& encoder,
                     std::span<const TrainingExample> examples, double margin,
                     bool symmetric, Gradients* grads = nullptr,
                     std::vector<double>* per_example_loss = nullptr);

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class AdamState {
 public:
  AdamState() = default;
  explicit AdamState(std::vector<size_t> block_sizes);

  uint64_t step() const { return step_; }
  const std::vector<double>& first_moment(size_t block) const {
    return m_.at(block);
  }
  const std::vector<double>& second_moment(size_t block) const {
    return v_.at(block);
  }

  // Bias-corrected Adam update of every block. Throws, leaving parameters
  // and state untouched, if any gradient entry is not finite.
  void Step(std::span<const std::span<double>> params,
            std::span<const std::span<const double>> grads,
            const AdamConfig& config);

 private:
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  uint64_t step_ = 0;
};

struct EpochLog {
  size_t epoch = 0;
  double mean_loss = 0.0;
  double mean_negative_cosine = 0.0;
  size_t megabatches = 0;
  size_t steps = 0;
};

struct TrainResult {
  std::vector<EpochLog> epochs;
  // Mean selected-negative cosine of every mega-batch, in training order.
  std::vector<double> megabatch_negative_cosines;
};

// Shuffles once per epoch, forms mega-batches of M*b pairs (a ragged last
// one is kept when it holds at least 2 pairs), mines negatives once per
// mega-batch and then takes one Adam step per mini-batch of b.
TrainResult Train(std::span<const ParaphrasePair> pairs, Encoder* encoder,
                  const TrainingConfig& config);

// Mean selected-negative cosine over one shuffled pass with the encoder
// frozen; consecutive mega-batches of M*b pairs, same partition rule as
// Train.
double FrozenNegativeCosine(const Encoder& encoder,
                            std::span<const ParaphrasePair> pairs,
                            size_t minibatch_size, size_t megabatch_multiplier,
                            uint64_t seed, int threads = 1);

struct GradCheckResult {
  EncoderKind kind = EncoderKind::kWordAvg;
  bool symmetric = false;
  size_t instances = 0;
  size_t parameters_checked = 0;
  double max_relative_error = 0.0;
};

// Central finite differences against MiniBatchLoss's analytic gradient on
// random small instances (vocab <= 50 per store, dim <= max_dim).
GradCheckResult GradCheck(EncoderKind kind, bool symmetric, size_t max_dim,
                          uint64_t seed, size_t instances, double step = 1e-5);

// |a - n| / max(|a|, |n|, floor), the error measure GradCheck reports.
double RelativeError(double analytic, double numeric, double floor);

}  // namespace paranmt

#endif  // PARANMT_TRAINER_H_
