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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <filesystem>
#include <functional>
#include <map>

#include "gtest/gtest.h"
#include "measkit/datagen.h"
#include "measkit/error.h"
#include "measkit/eval_report.h"
#include "measkit/probe_model.h"
#include "measkit/rng.h"

namespace measkit {
namespace {

namespace fs = std::filesystem;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::kIo;
}

const Vocab& default_vocab() {
  static const Vocab vocab = Vocab::build_default(UnitInventory::builtin(),
                                                  EntityTable::builtin());
  return vocab;
}

ModelConfig small_config(bool scale) {
  ModelConfig c;
  c.layers = 2;
  c.hidden = 16;
  c.heads = 2;
  c.ffn = 24;
  c.scale_embedding = scale;
  return c;
}

std::vector<MstSample> generate(TaskKind task, Split split, std::size_t n,
                                std::uint64_t seed = 7) {
  GenConfig g;
  g.task = task;
  g.seed = seed;
  for (Split s : kAllSplits) g.count_overrides[s] = s == split ? n : 0;
  Dataset d = build_splits(g);
  return d.splits[static_cast<std::size_t>(split)];
}

std::vector<std::vector<float>> snapshot(const ProbeModel& m) {
  std::vector<std::vector<float>> out;
  auto info = m.tensor_info();
  auto data = m.tensor_data();
  for (std::size_t i = 0; i < info.size(); ++i) {
    out.emplace_back(data[i], data[i] + info[i].rows * info[i].cols);
  }
  return out;
}

std::vector<float> tensor(const ProbeModel& m, const std::string& name) {
  auto info = m.tensor_info();
  auto data = m.tensor_data();
  for (std::size_t i = 0; i < info.size(); ++i) {
    if (info[i].name == name) {
      return {data[i], data[i] + info[i].rows * info[i].cols};
    }
  }
  ADD_FAILURE() << "no tensor " << name;
  return {};
}

float* mutable_tensor(ProbeModel& m, const std::string& name) {
  auto info = m.tensor_info();
  auto data = m.tensor_data();
  for (std::size_t i = 0; i < info.size(); ++i) {
    if (info[i].name == name) return data[i];
  }
  ADD_FAILURE() << "no tensor " << name;
  return nullptr;
}

bool bitwise_equal(const Eigen::VectorXf& a, const Eigen::VectorXf& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), sizeof(float) * a.size()) == 0;
}

// Word-only comparison prompts: every scale index is 0.
std::vector<MstSample> digit_free_samples(std::size_t n) {
  static const char* kWords[] = {"Glucose", "Sodium", "Calcium", "Albumin",
                                 "Ammonia", "Lactate"};
  std::vector<MstSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    MstSample s;
    s.id = "w" + std::to_string(i);
    s.task = TaskKind::kComparison;
    s.text = std::string(kWords[i % 6]) + " is [MASK] than " + kWords[(i / 6) % 6];
    s.candidates = {"larger", "smaller"};
    s.answer = i % 3 == 0 ? "larger" : "smaller";
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Vocabulary and configuration

TEST(VocabTest, SpecialsComeFirst) {
  const Vocab& v = default_vocab();
  EXPECT_EQ(v.token(Vocab::kPad), "[PAD]");
  EXPECT_EQ(v.token(Vocab::kUnk), "[UNK]");
  EXPECT_EQ(v.token(Vocab::kCls), "[CLS]");
  EXPECT_EQ(v.token(Vocab::kSep), "[SEP]");
  EXPECT_EQ(v.token(Vocab::kMask), "[MASK]");
  EXPECT_EQ(v.id("no-such-token"), Vocab::kUnk);
}

TEST(VocabTest, CandidatesAreSingleEntries) {
  for (TaskKind task : kAllTasks) {
    for (const std::string& c : candidates_for(task, PromptSet::kLabel)) {
      EXPECT_TRUE(default_vocab().find(c).has_value()) << c;
    }
  }
}

TEST(VocabTest, CoversUnitsDigitsAndTemplates) {
  const Vocab& v = default_vocab();
  for (const char* t : {"0", "9", ".", "E", "+", "-", "mg/dl", "mg/dL", "g",
                        "µl", "#/µl", "k/dl", "than", "is", ",", "sort",
                        "Glucose", "physician"}) {
    EXPECT_TRUE(v.find(t).has_value()) << t;
  }
}

TEST(VocabTest, GeneratedTextHasNoUnknownTokens) {
  ProbeModel model(small_config(false), default_vocab(), 1);
  for (TaskKind task : kAllTasks) {
    for (const MstSample& s : generate(task, Split::kTrain, 40)) {
      for (int id : model.encode(s.text).ids) {
        ASSERT_NE(id, Vocab::kUnk) << s.text;
      }
    }
  }
}

TEST(ModelConfigTest, Validation) {
  ModelConfig c = small_config(false);
  c.heads = 3;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::kInvalidConfig);
  c = small_config(true);
  c.scale_cap = 0;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::kInvalidConfig);
  ModelConfig base = ModelConfig::base_size();
  EXPECT_EQ(base.layers, 12);
  EXPECT_EQ(base.hidden, 768);
  EXPECT_EQ(base.heads, 12);
  EXPECT_EQ(base.max_sequence_length, 512);
  EXPECT_NO_THROW(base.validate());
  EXPECT_EQ(ModelConfig().max_sequence_length, 512);
}

// ---------------------------------------------------------------------------
// init_model and forward

TEST(ProbeModelTest, InitIsDeterministic) {
  ProbeModel a(small_config(true), default_vocab(), 11);
  ProbeModel b(small_config(true), default_vocab(), 11);
  EXPECT_EQ(snapshot(a), snapshot(b));
  ProbeModel c(small_config(true), default_vocab(), 12);
  EXPECT_NE(a.backbone_hash(), c.backbone_hash());
}

TEST(ProbeModelTest, ScaleTableStartsAtZero) {
  ProbeModel m(small_config(true), default_vocab(), 3);
  for (float v : tensor(m, "scale_embedding")) ASSERT_EQ(v, 0.0f);
  ProbeModel off(small_config(false), default_vocab(), 3);
  EXPECT_EQ(m.backbone_hash(), off.backbone_hash());
}

TEST(ProbeModelTest, PartitionIsExplicit) {
  ProbeModel m(small_config(true), default_vocab(), 3);
  std::map<std::string, bool> trainable;
  for (const auto& t : m.tensor_info()) trainable[t.name] = t.trainable;
  EXPECT_TRUE(trainable.at("scale_embedding"));
  EXPECT_TRUE(trainable.at("head.dense.weight"));
  EXPECT_TRUE(trainable.at("head.decoder.weight"));
  EXPECT_FALSE(trainable.at("embeddings.token"));
  EXPECT_FALSE(trainable.at("layer1.ffn.out.weight"));
}

TEST(ProbeModelTest, EncodeErrors) {
  ProbeModel m(small_config(false), default_vocab(), 1);
  EXPECT_EQ(code_of([&] { m.encode("3g is larger than 2g"); }),
            ErrorCode::kNoMask);
  EXPECT_EQ(code_of([&] { m.encode("[MASK] is [MASK]"); }),
            ErrorCode::kMultipleMasks);
  ModelConfig tiny = small_config(false);
  tiny.max_sequence_length = 8;
  ProbeModel t(tiny, default_vocab(), 1);
  EXPECT_NO_THROW(t.encode("3g is [MASK]"));  // CLS 3 g is MASK SEP
  EXPECT_EQ(code_of([&] { t.encode("12.5g is [MASK] than 3g"); }),
            ErrorCode::kSequenceTooLong);
}

TEST(ProbeModelTest, EncodeLayout) {
  ProbeModel m(small_config(true), default_vocab(), 1);
  EncodedInput in = m.encode("12.5g is [MASK] than 3g");
  const Vocab& v = m.vocab();
  ASSERT_EQ(in.ids.size(), 12u);
  EXPECT_EQ(in.ids.front(), Vocab::kCls);
  EXPECT_EQ(in.ids.back(), Vocab::kSep);
  EXPECT_EQ(in.ids[1], v.id("1"));
  EXPECT_EQ(in.ids[5], v.id("g"));
  EXPECT_EQ(in.mask_position, 7);
  EXPECT_EQ(in.scale_indices,
            (std::vector<int>{0, 4, 3, 2, 1, 0, 0, 0, 0, 1, 0, 0}));
}

TEST(ProbeModelTest, ForwardShapeAndFinite) {
  ProbeModel m(small_config(true), default_vocab(), 5);
  for (const MstSample& s : generate(TaskKind::kSorting, Split::kTestEx, 20)) {
    Eigen::VectorXf scores = m.forward(s.text);
    ASSERT_EQ(scores.size(), m.vocab().size());
    ASSERT_TRUE(scores.allFinite());
  }
}

TEST(ProbeModelTest, ScaleOnWithZeroIndicesMatchesScaleOff) {
  ProbeModel on(small_config(true), default_vocab(), 9);
  ProbeModel off(small_config(false), default_vocab(), 9);
  // Make the scale table nonzero so that only the indices keep it out.
  Rng rng(1);
  float* table = mutable_tensor(on, "scale_embedding");
  for (int i = 0; i < 16 * 16; ++i) table[i] = static_cast<float>(rng.normal());
  for (const MstSample& s : generate(TaskKind::kComparison, Split::kTrain, 10)) {
    ScaleIndexedText a = annotate(s.text);
    std::vector<int> zeros(a.tokens.size(), 0);
    EXPECT_TRUE(bitwise_equal(on.forward(on.encode_tokens(a.tokens, zeros)),
                              off.forward(off.encode(s.text))));
  }
}

TEST(ProbeModelTest, HeadRowsAreIndependent) {
  ProbeModel m(small_config(false), default_vocab(), 4);
  const std::string text = "12.5g is [MASK] than 3.8g";
  Eigen::VectorXf before = m.forward(text);
  const int larger = m.vocab().id("larger");
  const int smaller = m.vocab().id("smaller");
  // Reverse the order of every non-candidate decoder row.
  float* dec = mutable_tensor(m, "head.decoder.weight");
  float* bias = mutable_tensor(m, "head.decoder.bias");
  const int H = m.config().hidden;
  std::vector<int> others;
  for (int v = 0; v < m.vocab().size(); ++v) {
    if (v != larger && v != smaller) others.push_back(v);
  }
  for (std::size_t i = 0, j = others.size() - 1; i < j; ++i, --j) {
    std::swap_ranges(dec + others[i] * H, dec + others[i] * H + H,
                     dec + others[j] * H);
    std::swap(bias[others[i]], bias[others[j]]);
  }
  Eigen::VectorXf after = m.forward(text);
  EXPECT_EQ(before[larger], after[larger]);
  EXPECT_EQ(before[smaller], after[smaller]);
  EXPECT_NE(before, after);
}

TEST(ProbeModelTest, ScaleRowAffectsOnlyInputsWithThatIndex) {
  ProbeModel m(small_config(true), default_vocab(), 4);
  Rng rng(2);
  float* table = mutable_tensor(m, "scale_embedding");
  const int H = m.config().hidden;
  for (int i = 0; i < 16 * H; ++i) table[i] = static_cast<float>(rng.normal());
  const std::string with3 = "12.5g is [MASK] than 3.8g";  // indices 4,3,2,1
  const std::string without3 = "5g is [MASK] than 3.8g";  // indices 1 and 3,2,1
  const std::string only1 = "5g is [MASK] than 3g";
  Eigen::VectorXf a0 = m.forward(with3);
  Eigen::VectorXf b0 = m.forward(only1);
  Eigen::VectorXf c0 = m.forward(without3);
  for (int i = 0; i < H; ++i) table[2 * H + i] *= 2.0f;  // row for index 3
  EXPECT_FALSE(bitwise_equal(a0, m.forward(with3)));
  EXPECT_FALSE(bitwise_equal(c0, m.forward(without3)));
  EXPECT_TRUE(bitwise_equal(b0, m.forward(only1)));
}

// ---------------------------------------------------------------------------
// predict

TEST(PredictTest, Examples) {
  const Vocab& v = default_vocab();
  Eigen::VectorXf scores = Eigen::VectorXf::Zero(v.size());
  scores[v.id("smaller")] = 2.0f;
  scores[v.id("larger")] = 1.0f;
  EXPECT_EQ(predict(scores, {"larger", "smaller"}, v), "smaller");
  EXPECT_EQ(predict(scores, {"larger"}, v), "larger");
  scores[v.id("larger")] = 2.0f;
  EXPECT_EQ(predict(scores, {"larger", "smaller"}, v), "larger");
  EXPECT_EQ(predict(scores, {"smaller", "larger"}, v), "smaller");
  EXPECT_EQ(code_of([&] { predict(scores, {"bigly"}, v); }),
            ErrorCode::kUnknownCandidate);
}

TEST(PredictTest, RestrictionCommutesWithArgmax) {
  const Vocab& v = default_vocab();
  Rng rng(17);
  const std::vector<std::string> cands = candidates_for(TaskKind::kSorting,
                                                        PromptSet::kLabel);
  for (int trial = 0; trial < 500; ++trial) {
    Eigen::VectorXf scores(v.size());
    for (int i = 0; i < v.size(); ++i) scores[i] = static_cast<float>(rng.normal());
    std::string best;
    float best_score = -INFINITY;
    for (int i = 0; i < v.size(); ++i) {
      auto it = std::find(cands.begin(), cands.end(), v.token(i));
      if (it != cands.end() && scores[i] > best_score) {
        best_score = scores[i];
        best = v.token(i);
      }
    }
    ASSERT_EQ(predict(scores, cands, v), best);
  }
}

// ---------------------------------------------------------------------------
// train_head

TEST(TrainTest, LearningRateEndpoints) {
  TrainConfig c;
  EXPECT_EQ(learning_rate(c, 0, 100), 5e-5);
  EXPECT_EQ(learning_rate(c, 99, 100), 1e-8);
  EXPECT_NEAR(learning_rate(c, 50, 101), (5e-5 + 1e-8) / 2, 1e-18);
  EXPECT_GT(learning_rate(c, 10, 100), learning_rate(c, 11, 100));
}

TEST(TrainTest, OneStepLeavesBackboneUntouched) {
  ProbeModel m(small_config(true), default_vocab(), 2);
  auto data = generate(TaskKind::kComparison, Split::kTrain, 16);
  const std::uint64_t backbone = m.backbone_hash();
  const std::uint64_t head = m.trainable_hash();
  TrainConfig c;
  c.batch_size = 16;
  c.epochs = 1;
  TrainHistory h = train_head(m, data, {}, c);
  EXPECT_EQ(h.steps, 1);
  EXPECT_EQ(m.backbone_hash(), backbone);
  EXPECT_NE(m.trainable_hash(), head);
  bool scale_moved = false;
  for (float v : tensor(m, "scale_embedding")) scale_moved |= v != 0.0f;
  EXPECT_TRUE(scale_moved);
}

TEST(TrainTest, HistoryAndEarlyStopping) {
  ProbeModel m(small_config(false), default_vocab(), 2);
  auto train = generate(TaskKind::kComparison, Split::kTrain, 64);
  auto valid = generate(TaskKind::kComparison, Split::kValidIn, 32);
  TrainConfig c;
  c.batch_size = 16;
  c.epochs = 6;
  c.patience = 2;
  TrainHistory h = train_head(m, train, valid, c);
  ASSERT_FALSE(h.epochs.empty());
  EXPECT_LE(h.epochs.size(), 6u);
  double best = 0.0;
  for (const EpochRecord& r : h.epochs) best = std::max(best, r.valid_accuracy);
  EXPECT_EQ(h.best_valid_accuracy, best);
  // Restored weights reproduce the best epoch's accuracy.
  ModelPredictor p(m);
  EXPECT_DOUBLE_EQ(evaluate(p, valid).value(), best);
  if (h.stopped_early) {
    EXPECT_EQ(static_cast<int>(h.epochs.size()), h.best_epoch + c.patience);
  }
}

TEST(TrainTest, ScaleOnWithoutDigitsFollowsScaleOffTrajectory) {
  auto train = digit_free_samples(48);
  auto valid = digit_free_samples(12);
  ProbeModel on(small_config(true), default_vocab(), 21);
  ProbeModel off(small_config(false), default_vocab(), 21);
  TrainConfig c;
  c.batch_size = 8;
  c.epochs = 3;
  TrainHistory ho = train_head(on, train, valid, c);
  TrainHistory hf = train_head(off, train, valid, c);
  ASSERT_EQ(ho.epochs.size(), hf.epochs.size());
  for (std::size_t i = 0; i < ho.epochs.size(); ++i) {
    EXPECT_EQ(ho.epochs[i].train_loss, hf.epochs[i].train_loss);
  }
  for (const char* name : {"head.dense.weight", "head.ln.gamma",
                           "head.decoder.weight", "head.decoder.bias"}) {
    EXPECT_EQ(tensor(on, name), tensor(off, name)) << name;
  }
  for (float v : tensor(on, "scale_embedding")) ASSERT_EQ(v, 0.0f);
}

TEST(TrainTest, DeterministicAcrossRunsAndJobs) {
  auto train = generate(TaskKind::kComparison, Split::kTrain, 48);
  auto valid = generate(TaskKind::kComparison, Split::kValidIn, 16);
  TrainConfig c;
  c.batch_size = 8;
  c.epochs = 2;
  ProbeModel a(small_config(true), default_vocab(), 5);
  ProbeModel b(small_config(true), default_vocab(), 5);
  ProbeModel p(small_config(true), default_vocab(), 5);
  train_head(a, train, valid, c);
  train_head(b, train, valid, c);
  c.jobs = 3;
  train_head(p, train, valid, c);
  EXPECT_EQ(snapshot(a), snapshot(b));
  EXPECT_EQ(snapshot(a), snapshot(p));
}

TEST(TrainTest, RejectsBadConfigAndUnknownCandidates) {
  ProbeModel m(small_config(false), default_vocab(), 1);
  auto data = digit_free_samples(4);
  TrainConfig c;
  c.batch_size = 0;
  EXPECT_EQ(code_of([&] { train_head(m, data, {}, c); }),
            ErrorCode::kInvalidConfig);
  c = TrainConfig{};
  EXPECT_EQ(code_of([&] { train_head(m, {}, {}, c); }),
            ErrorCode::kInvalidConfig);
  data[0].candidates.push_back("enormous");
  EXPECT_EQ(code_of([&] { train_head(m, data, {}, c); }),
            ErrorCode::kUnknownCandidate);
}

// ---------------------------------------------------------------------------
// Gradients

TEST(GradientTest, FiniteDifferencesAgree) {
  ProbeModel m(small_config(true), default_vocab(), 8);
  // Move off the zero-initialized point so every path is exercised.
  TrainConfig c;
  c.batch_size = 8;
  c.epochs = 1;
  c.learning_rate_start = 1e-2;
  auto warm = generate(TaskKind::kComparison, Split::kTrain, 16, 3);
  train_head(m, warm, {}, c);
  for (TaskKind task : {TaskKind::kComparison, TaskKind::kSorting,
                        TaskKind::kRefRange}) {
    for (const MstSample& s : generate(task, Split::kTestIn, 3, 4)) {
      GradientCheck g = finite_difference_check(m, s);
      EXPECT_GT(g.checked, 100);
      EXPECT_LT(g.max_relative_error, 1e-4) << s.text;
      EXPECT_EQ(g.max_frozen_gradient, 0.0);
      EXPECT_EQ(g.max_absent_row_gradient, 0.0);
    }
  }
}

TEST(GradientTest, ExportedGradientLayout) {
  ProbeModel m(small_config(true), default_vocab(), 8);
  MstSample s = generate(TaskKind::kComparison, Split::kTrain, 1)[0];
  SampleGradient g = sample_gradient(m, s);
  auto info = m.tensor_info();
  ASSERT_EQ(g.grads.size(), info.size());
  EXPECT_GT(g.loss, 0.0);
  const int H = m.config().hidden;
  std::vector<int> idx = m.encode(s.text).scale_indices;
  for (std::size_t i = 0; i < info.size(); ++i) {
    ASSERT_EQ(g.grads[i].size(),
              static_cast<std::size_t>(info[i].rows * info[i].cols));
    if (info[i].name != "scale_embedding") continue;
    for (int r = 0; r < info[i].rows; ++r) {
      bool indexed = std::find(idx.begin(), idx.end(), r + 1) != idx.end();
      float norm = 0.0f;
      for (int k = 0; k < H; ++k) norm += std::abs(g.grads[i][r * H + k]);
      EXPECT_EQ(norm > 0.0f, indexed) << "row " << r;
    }
  }
}

// ---------------------------------------------------------------------------
// evaluate

TEST(EvaluateTest, OracleIsPerfect) {
  OraclePredictor oracle;
  for (TaskKind task : kAllTasks) {
    auto data = generate(task, Split::kTestEx, 200);
    Accuracy a = evaluate(oracle, data, 2);
    EXPECT_EQ(a.correct, a.total);
    EXPECT_EQ(a.total, 200u);
  }
}

TEST(EvaluateTest, ConstantPredictorOnBalancedComparison) {
  auto data = generate(TaskKind::kComparison, Split::kTestIn, 2000);
  EXPECT_NEAR(evaluate(ConstantPredictor("smaller"), data).value(), 0.50, 0.01);
  EXPECT_NEAR(evaluate(ConstantPredictor("larger"), data).value(), 0.50, 0.01);
}

TEST(EvaluateTest, SynonymPredictionsCount) {
  auto data = generate(TaskKind::kComparison, Split::kTestIn, 100);
  Accuracy a = evaluate(ConstantPredictor("bigger"), data);
  Accuracy b = evaluate(ConstantPredictor("larger"), data);
  EXPECT_EQ(a.correct, b.correct);
}

TEST(EvaluateTest, UntrainedModelOnSortingIsNearChance) {
  auto data = generate(TaskKind::kSorting, Split::kTestIn, 600);
  double sum = 0.0;
  for (std::uint64_t seed : {1, 2, 3}) {
    ProbeModel m(small_config(false), default_vocab(), seed);
    sum += evaluate(ModelPredictor(m), data).value();
  }
  EXPECT_NEAR(sum / 3.0, 1.0 / 3.0, 0.07);
}

// ---------------------------------------------------------------------------
// Checkpoints

TEST(CheckpointTest, RoundTrip) {
  ProbeModel m(small_config(true), default_vocab(), 31);
  train_head(m, generate(TaskKind::kComparison, Split::kTrain, 16), {},
             TrainConfig{.batch_size = 8, .epochs = 1});
  fs::path path = fs::temp_directory_path() / "measkit_ckpt_test.bin";
  save_checkpoint(m, path);
  ProbeModel back = load_checkpoint(path);
  EXPECT_EQ(back.vocab().tokens(), m.vocab().tokens());
  EXPECT_EQ(back.seed(), 31u);
  EXPECT_TRUE(back.config().scale_embedding);
  EXPECT_EQ(snapshot(back), snapshot(m));
  const std::string text = "12.5g is [MASK] than 3.8g";
  EXPECT_TRUE(bitwise_equal(back.forward(text), m.forward(text)));
  fs::remove(path);
}

TEST(CheckpointTest, RejectsCorruptFiles) {
  fs::path path = fs::temp_directory_path() / "measkit_ckpt_bad.bin";
  {
    std::ofstream out(path, std::ios::binary);
    out << "NOPE0000";
  }
  EXPECT_EQ(code_of([&] { load_checkpoint(path); }), ErrorCode::kBadCheckpoint);
  ProbeModel m(small_config(false), default_vocab(), 1);
  save_checkpoint(m, path);
  fs::resize_file(path, fs::file_size(path) - 4);
  EXPECT_EQ(code_of([&] { load_checkpoint(path); }), ErrorCode::kBadCheckpoint);
  fs::remove(path);
  EXPECT_EQ(code_of([&] { load_checkpoint(path); }), ErrorCode::kIo);
}

TEST(CheckpointTest, FingerprintTracksConfig) {
  const Vocab& v = default_vocab();
  EXPECT_EQ(config_fingerprint(small_config(true), v),
            config_fingerprint(small_config(true), v));
  EXPECT_NE(config_fingerprint(small_config(true), v),
            config_fingerprint(small_config(false), v));
  EXPECT_EQ(config_fingerprint(small_config(true), v).size(), 16u);
}

// ---------------------------------------------------------------------------
// Reports

EvalRow row(std::string task, std::string split, std::uint64_t seed,
            std::size_t correct, std::size_t total, bool scale = false) {
  return EvalRow{"scratch", std::move(task), "base", "decimal", scale,
                 std::move(split), seed, correct, total, "abc"};
}

TEST(ReportTest, CsvRoundTrip) {
  EvalReport r;
  r.rows = {row("comparison", "test_in", 1, 577, 1000),
            row("comparison", "test_in", 2, 600, 1000, true)};
  std::string csv = report_to_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kReportHeader);
  EXPECT_NE(csv.find("scratch,comparison,base,decimal,off,test_in,1,577,1000,"
                     "0.577000,abc"),
            std::string::npos);
  EXPECT_EQ(report_from_csv(csv), r);
}

TEST(ReportTest, CsvSchemaErrors) {
  EXPECT_EQ(code_of([] { report_from_csv("model,task\n"); }),
            ErrorCode::kSchemaViolation);
  std::string head = std::string(kReportHeader) + "\n";
  EXPECT_EQ(code_of([&] { report_from_csv(head + "a,b,c\n"); }),
            ErrorCode::kSchemaViolation);
  EXPECT_EQ(code_of([&] {
              report_from_csv(head + "m,t,base,decimal,maybe,test_in,1,1,2,0.5,x\n");
            }),
            ErrorCode::kSchemaViolation);
  EXPECT_EQ(code_of([&] {
              report_from_csv(head + "m,t,base,decimal,on,test_in,1,3,2,1.5,x\n");
            }),
            ErrorCode::kSchemaViolation);
}

TEST(ReportTest, MeanIsArithmeticMeanOfSeeds) {
  EvalReport r;
  r.rows = {row("comparison", "test_in", 1, 50, 100),
            row("comparison", "test_in", 2, 60, 200),
            row("comparison", "test_in", 3, 90, 100)};
  auto agg = aggregate(r);
  ASSERT_EQ(agg.size(), 1u);
  EXPECT_EQ(agg[0].seeds, (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_DOUBLE_EQ(agg[0].mean, (0.5 + 0.3 + 0.9) / 3.0);
  EXPECT_EQ(agg[0].total, 400u);
}

TEST(ReportTest, TableLayout) {
  EvalReport r;
  r.rows = {row("comparison", "test_in", 1, 577, 1000),
            row("comparison", "test_ex", 1, 513, 1000),
            row("sorting", "test_in", 1, 333, 1000)};
  std::string table = format_report_table(r);
  EXPECT_NE(table.find("Comp-in Comp-ex"), std::string::npos) << table;
  EXPECT_NE(table.find("57.7"), std::string::npos);
  EXPECT_NE(table.find("51.3"), std::string::npos);
  EXPECT_NE(table.find("33.3"), std::string::npos);
  EXPECT_NE(table.find("N/A"), std::string::npos);
  EXPECT_NE(table.find("Deci"), std::string::npos);
  EXPECT_NE(table.find("seed1=0.5770"), std::string::npos);
}

}  // namespace
}  // namespace measkit
