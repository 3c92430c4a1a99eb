// Copyright 2026 The measkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// A small BERT-style encoder used as a randomly initialized, frozen probe.
// Only the masked-LM head and, when enabled, an additive scale-embedding
// table are trained.
//
// Input: [CLS] tokens [SEP] with tokens from measkit::tokenize. Embedding of
// position t is LayerNorm(token + position + scale), where scale is row
// (index - 1) of the scale table for index > 0 and absent for index 0.
// Encoder layers are post-LN (attention, residual, LN, GELU feed-forward,
// residual, LN). The head maps the hidden state at [MASK] through
// dense + GELU + LN and an untied decoder to one score per vocabulary entry.

#ifndef MEASKIT_PROBE_MODEL_H_
#define MEASKIT_PROBE_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "measkit/datagen.h"
#include "measkit/measure_text.h"

namespace measkit {

class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kCls = 2;
  static constexpr int kSep = 3;
  static constexpr int kMask = 4;

  Vocab() = default;
  // Special tokens first, then `tokens` sorted and deduplicated.
  explicit Vocab(std::vector<std::string> tokens);

  // Digits and number marks, every inventory unit (with "L" spellings),
  // template words, all candidates and synonyms, entity name words.
  static Vocab build_default(const UnitInventory& inventory,
                             const EntityTable& entities);

  int size() const { return static_cast<int>(tokens_.size()); }
  int id(std::string_view token) const;  // kUnk when absent
  std::optional<int> find(std::string_view token) const;
  const std::string& token(int id) const { return tokens_.at(id); }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

struct ModelConfig {
  int layers = 2;
  int hidden = 128;
  int heads = 4;
  int ffn = 256;
  int max_sequence_length = 512;
  bool scale_embedding = false;
  int scale_cap = kDefaultScaleCap;
  // Standard deviation of the normal weight init. 0 selects
  // 0.02 * sqrt(768 / hidden), i.e. 0.02 at the base size, and keeps the
  // per-unit scale of projections constant across widths.
  double init_std = 0.0;

  double effective_init_std() const;

  // 12 layers, 768 hidden, 12 heads, 3072 feed-forward.
  static ModelConfig base_size();
  void validate() const;  // throws kInvalidConfig
};

struct EncodedInput {
  std::vector<int> ids;
  std::vector<int> scale_indices;  // aligned with ids, already capped
  int mask_position = 0;
};

namespace probe_detail {
template <typename T>
struct Params;
}

// Configuration, vocabulary and parameters. Copyable; copies are deep.
class ProbeModel {
 public:
  ProbeModel(const ModelConfig& config, Vocab vocab, std::uint64_t seed);
  ~ProbeModel();
  ProbeModel(const ProbeModel& other);
  ProbeModel& operator=(const ProbeModel& other);
  ProbeModel(ProbeModel&&) noexcept;
  ProbeModel& operator=(ProbeModel&&) noexcept;

  const ModelConfig& config() const { return config_; }
  const Vocab& vocab() const { return vocab_; }
  std::uint64_t seed() const { return seed_; }

  // Throws kNoMask, kMultipleMasks or kSequenceTooLong.
  EncodedInput encode(std::string_view text) const;
  EncodedInput encode_tokens(const std::vector<std::string>& tokens,
                             const std::vector<int>& scale_indices) const;

  // One score per vocabulary entry at the mask position.
  Eigen::VectorXf forward(const EncodedInput& input) const;
  Eigen::VectorXf forward(std::string_view text) const {
    return forward(encode(text));
  }

  // Stable 64-bit hashes of the frozen and trainable partitions.
  std::uint64_t backbone_hash() const;
  std::uint64_t trainable_hash() const;

  struct TensorInfo {
    std::string name;
    int rows = 0;
    int cols = 0;
    bool trainable = false;
  };
  std::vector<TensorInfo> tensor_info() const;
  // Raw access in tensor_info() order; used by checkpoints and tests.
  std::vector<float*> tensor_data();
  std::vector<const float*> tensor_data() const;

  probe_detail::Params<float>& params() { return *params_; }
  const probe_detail::Params<float>& params() const { return *params_; }

 private:
  ModelConfig config_;
  Vocab vocab_;
  std::uint64_t seed_ = 0;
  std::unique_ptr<probe_detail::Params<float>> params_;
};

// Argmax of `scores` over the candidates; ties go to the earlier candidate.
// Throws kUnknownCandidate when a candidate is not a vocabulary entry.
std::string predict(const Eigen::VectorXf& scores,
                    const std::vector<std::string>& candidates,
                    const Vocab& vocab);

struct TrainConfig {
  int batch_size = 64;
  int epochs = 10;
  double learning_rate_start = 5e-5;
  double learning_rate_end = 1e-8;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  int patience = 2;
  std::uint64_t seed = 1;
  int jobs = 1;
};

// Linear decay; step 0 gives the start rate, step total_steps - 1 the end
// rate.
double learning_rate(const TrainConfig& config, long step, long total_steps);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double valid_accuracy = 0.0;
  double last_learning_rate = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
  double best_valid_accuracy = 0.0;
  bool stopped_early = false;
  long steps = 0;
};

// Cross-entropy over each sample's candidates, with the probability of all
// candidates in the gold label's synonym class summed. Updates only the
// trainable partition (Adam). After every epoch the valid accuracy is
// measured; training stops after `patience` epochs without improvement and
// the best epoch's parameters are restored. Throws kDivergence on a
// non-finite loss.
TrainHistory train_head(ProbeModel& model, const std::vector<MstSample>& train,
                        const std::vector<MstSample>& valid,
                        const TrainConfig& config);

// Loss and its gradient for one sample, in tensor_info() order. Frozen
// tensors get all-zero gradients.
struct SampleGradient {
  double loss = 0.0;
  std::vector<std::vector<float>> grads;
};
SampleGradient sample_gradient(const ProbeModel& model, const MstSample& sample);

// Predictors evaluated by `evaluate`.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual std::string predict(const MstSample& sample) const = 0;
};

class ModelPredictor : public Predictor {
 public:
  explicit ModelPredictor(const ProbeModel& model) : model_(model) {}
  std::string predict(const MstSample& sample) const override;

 private:
  const ProbeModel& model_;
};

class OraclePredictor : public Predictor {
 public:
  std::string predict(const MstSample& sample) const override;
};

class ConstantPredictor : public Predictor {
 public:
  explicit ConstantPredictor(std::string label) : label_(std::move(label)) {}
  std::string predict(const MstSample& sample) const override;

 private:
  std::string label_;
};

struct Accuracy {
  std::size_t correct = 0;
  std::size_t total = 0;
  double value() const {
    return total == 0 ? 0.0 : static_cast<double>(correct) / total;
  }
};

// A prediction is correct when it falls in the gold label's synonym class.
Accuracy evaluate(const Predictor& predictor,
                  const std::vector<MstSample>& samples, int jobs = 1);

struct GradientCheck {
  double max_relative_error = 0.0;
  int checked = 0;
  double max_frozen_gradient = 0.0;      // over every frozen coordinate
  double max_absent_row_gradient = 0.0;  // scale rows not indexed by the input
};

// Compares analytic gradients of the trainable partition with fourth-order
// central differences in double precision:
// rel = |a - n| / max(|a|, |n|, 1e-6).
// Samples up to `per_tensor` coordinates of each trainable tensor (for the
// decoder, rows of the sample's candidates).
GradientCheck finite_difference_check(const ProbeModel& model,
                                      const MstSample& sample,
                                      double step = 1e-3, int per_tensor = 24,
                                      std::uint64_t seed = 1);

// Versioned binary checkpoint: "MSKT", u32 version, u32 header length, JSON
// header (config, seed, vocabulary, tensor map), little-endian float32 data.
void save_checkpoint(const ProbeModel& model, const std::filesystem::path& path);
ProbeModel load_checkpoint(const std::filesystem::path& path);

std::string config_fingerprint(const ModelConfig& config, const Vocab& vocab);

}  // namespace measkit

#endif  // MEASKIT_PROBE_MODEL_H_
