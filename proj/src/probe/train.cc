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

#include <cmath>
#include <numeric>

#include "encoder.h"
#include "measkit/error.h"
#include "measkit/parallel.h"
#include "measkit/probe_model.h"
#include "measkit/rng.h"

namespace measkit {
namespace {

using probe_detail::CompactGrad;
using probe_detail::Mat;
using probe_detail::Params;
using probe_detail::Target;
using probe_detail::TrainableGrads;

Target resolve_target(const Vocab& vocab, const MstSample& sample) {
  Target t;
  for (const std::string& c : sample.candidates) {
    std::optional<int> id = vocab.find(c);
    if (!id) {
      throw Error(ErrorCode::kUnknownCandidate,
                  sample.id + ": candidate '" + c + "' is not in the vocabulary");
    }
    t.ids.push_back(*id);
    t.gold.push_back(answer_matches(sample.task, c, sample.answer) ? 1 : 0);
  }
  if (t.ids.empty()) {
    throw Error(ErrorCode::kUnknownCandidate, sample.id + ": no candidates");
  }
  return t;
}

// A sample whose hidden state does not depend on trainable parameters keeps
// it cached for the whole run.
struct Prepared {
  EncodedInput input;
  Target target;
  bool cached = false;
  Mat<float> h;
};

std::vector<Prepared> prepare(const ProbeModel& model,
                              const std::vector<MstSample>& samples, int jobs) {
  std::vector<Prepared> out(samples.size());
  const Params<float>& p = model.params();
  parallel_for(samples.size(), jobs, [&](std::size_t i) {
    Prepared& s = out[i];
    s.input = model.encode(samples[i].text);
    s.target = resolve_target(model.vocab(), samples[i]);
    s.cached = !model.config().scale_embedding ||
               std::all_of(s.input.scale_indices.begin(),
                           s.input.scale_indices.end(),
                           [](int v) { return v == 0; });
    if (s.cached) {
      probe_detail::EncoderCache<float> cache;
      s.h = probe_detail::encoder_forward<float>(p, model.config(), s.input,
                                                 cache);
    }
  });
  return out;
}

Mat<float> hidden_state(const ProbeModel& model, const Prepared& s) {
  if (s.cached) return s.h;
  probe_detail::EncoderCache<float> cache;
  return probe_detail::encoder_forward<float>(model.params(), model.config(),
                                              s.input, cache);
}

bool predicts_gold(const ProbeModel& model, const Prepared& s) {
  probe_detail::HeadCache<float> head;
  probe_detail::head_forward<float>(model.params(), hidden_state(model, s),
                                    head);
  std::size_t best = 0;
  float best_score = 0.0f;
  for (std::size_t i = 0; i < s.target.ids.size(); ++i) {
    float v = probe_detail::decoder_score<float>(model.params(), head.u,
                                                 s.target.ids[i]);
    if (i == 0 || v > best_score) {
      best = i;
      best_score = v;
    }
  }
  return s.target.gold[best] != 0;
}

double prepared_accuracy(const ProbeModel& model,
                         const std::vector<Prepared>& set, int jobs) {
  if (set.empty()) return 0.0;
  std::vector<char> ok(set.size(), 0);
  parallel_for(set.size(), jobs,
               [&](std::size_t i) { ok[i] = predicts_gold(model, set[i]); });
  return static_cast<double>(std::accumulate(ok.begin(), ok.end(), 0L)) /
         static_cast<double>(set.size());
}

std::vector<Mat<float>*> trainable_tensors(Params<float>& p) {
  std::vector<Mat<float>*> out;
  probe_detail::visit_params(p, [&](const std::string&, Mat<float>& m, bool t) {
    if (t) out.push_back(&m);
  });
  return out;
}

void validate(const TrainConfig& c) {
  if (c.batch_size < 1 || c.epochs < 1 || c.patience < 1) {
    throw Error(ErrorCode::kInvalidConfig,
                "batch size, epochs and patience must be positive");
  }
}

}  // namespace

double learning_rate(const TrainConfig& config, long step, long total_steps) {
  if (total_steps <= 1) return config.learning_rate_start;
  const double t = static_cast<double>(std::clamp(step, 0L, total_steps - 1)) /
                   static_cast<double>(total_steps - 1);
  return (1.0 - t) * config.learning_rate_start + t * config.learning_rate_end;
}

TrainHistory train_head(ProbeModel& model, const std::vector<MstSample>& train,
                        const std::vector<MstSample>& valid,
                        const TrainConfig& config) {
  validate(config);
  if (train.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "empty training set");
  }
  std::vector<Prepared> train_set = prepare(model, train, config.jobs);
  std::vector<Prepared> valid_set = prepare(model, valid, config.jobs);

  Params<float>& params = model.params();
  std::vector<Mat<float>*> weights = trainable_tensors(params);
  TrainableGrads<float> adam_m(params), adam_v(params);
  std::vector<Mat<float>*> m_list, v_list;
  adam_m.visit([&](Mat<float>& m) { m_list.push_back(&m); });
  adam_v.visit([&](Mat<float>& m) { v_list.push_back(&m); });

  const long n = static_cast<long>(train_set.size());
  const long steps_per_epoch = (n + config.batch_size - 1) / config.batch_size;
  const long total_steps = steps_per_epoch * config.epochs;

  TrainHistory history;
  std::vector<Mat<float>> best;
  int bad_epochs = 0;
  std::vector<std::size_t> order(train_set.size());
  std::vector<CompactGrad<float>> per_sample;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng(config.seed, {static_cast<std::uint64_t>(epoch)});
    shuffle_rng.shuffle(order);
    double loss_sum = 0.0;
    double lr = 0.0;
    for (long b = 0; b < steps_per_epoch; ++b) {
      const std::size_t begin = static_cast<std::size_t>(b * config.batch_size);
      const std::size_t end =
          std::min(train_set.size(), begin + config.batch_size);
      per_sample.assign(end - begin, CompactGrad<float>{});
      parallel_for(end - begin, config.jobs, [&](std::size_t k) {
        const Prepared& s = train_set[order[begin + k]];
        per_sample[k] =
            s.cached
                ? probe_detail::head_gradient<float>(params, s.h, s.target)
                : probe_detail::full_gradient<float>(params, model.config(),
                                                     s.input, s.target);
      });
      TrainableGrads<float> grad(params);
      for (std::size_t k = 0; k < per_sample.size(); ++k) {
        if (!std::isfinite(per_sample[k].loss)) {
          throw Error(ErrorCode::kDivergence,
                      "non-finite loss at epoch " + std::to_string(epoch) +
                          ", step " + std::to_string(history.steps) +
                          ", sample " + train[order[begin + k]].id);
        }
        loss_sum += per_sample[k].loss;
        grad.add(per_sample[k]);
      }
      std::vector<Mat<float>*> g_list;
      grad.visit([&](Mat<float>& m) { g_list.push_back(&m); });

      lr = learning_rate(config, history.steps, total_steps);
      ++history.steps;
      const double t = static_cast<double>(history.steps);
      const float inv_batch = 1.0f / static_cast<float>(end - begin);
      const float b1 = static_cast<float>(config.beta1);
      const float b2 = static_cast<float>(config.beta2);
      const float step_size = static_cast<float>(
          lr / (1.0 - std::pow(config.beta1, t)));
      const float v_corr = static_cast<float>(1.0 - std::pow(config.beta2, t));
      const float eps = static_cast<float>(config.adam_epsilon);
      for (std::size_t j = 0; j < weights.size(); ++j) {
        float* w = weights[j]->data();
        float* m = m_list[j]->data();
        float* v = v_list[j]->data();
        const float* g = g_list[j]->data();
        for (Eigen::Index i = 0; i < weights[j]->size(); ++i) {
          const float gi = g[i] * inv_batch;
          m[i] = b1 * m[i] + (1.0f - b1) * gi;
          v[i] = b2 * v[i] + (1.0f - b2) * gi * gi;
          w[i] -= step_size * m[i] / (std::sqrt(v[i] / v_corr) + eps);
        }
      }
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = loss_sum / static_cast<double>(n);
    record.valid_accuracy = prepared_accuracy(model, valid_set, config.jobs);
    record.last_learning_rate = lr;
    history.epochs.push_back(record);

    if (valid_set.empty()) continue;
    if (best.empty() || record.valid_accuracy > history.best_valid_accuracy) {
      history.best_epoch = epoch;
      history.best_valid_accuracy = record.valid_accuracy;
      best.clear();
      for (Mat<float>* w : weights) best.push_back(*w);
      bad_epochs = 0;
    } else if (++bad_epochs >= config.patience) {
      history.stopped_early = epoch < config.epochs;
      break;
    }
  }
  if (!best.empty()) {
    for (std::size_t j = 0; j < weights.size(); ++j) *weights[j] = best[j];
  } else {
    history.best_epoch = static_cast<int>(history.epochs.size());
  }
  return history;
}

SampleGradient sample_gradient(const ProbeModel& model, const MstSample& sample) {
  const Params<float>& p = model.params();
  EncodedInput in = model.encode(sample.text);
  CompactGrad<float> g = probe_detail::full_gradient<float>(
      p, model.config(), in, resolve_target(model.vocab(), sample));
  TrainableGrads<float> dense(p);
  dense.add(g);
  std::vector<const Mat<float>*> trainable;
  dense.visit([&](Mat<float>& m) { trainable.push_back(&m); });

  SampleGradient out;
  out.loss = g.loss;
  std::size_t next = 0;
  probe_detail::visit_params(
      p, [&](const std::string&, const Mat<float>& m, bool t) {
        if (t) {
          const Mat<float>& src = *trainable[next++];
          out.grads.emplace_back(src.data(), src.data() + src.size());
        } else {
          out.grads.emplace_back(static_cast<std::size_t>(m.size()), 0.0f);
        }
      });
  return out;
}

GradientCheck finite_difference_check(const ProbeModel& model,
                                      const MstSample& sample, double step,
                                      int per_tensor, std::uint64_t seed) {
  Params<double> p = probe_detail::cast_params<double>(model.params());
  const ModelConfig& config = model.config();
  const EncodedInput in = model.encode(sample.text);
  const Target target = resolve_target(model.vocab(), sample);

  auto loss_at = [&]() {
    probe_detail::EncoderCache<double> cache;
    Mat<double> h = probe_detail::encoder_forward<double>(p, config, in, cache);
    return probe_detail::head_gradient<double>(p, h, target).loss;
  };

  TrainableGrads<double> analytic(p);
  analytic.add(probe_detail::full_gradient<double>(p, config, in, target));
  std::vector<Mat<double>*> grads;
  analytic.visit([&](Mat<double>& m) { grads.push_back(&m); });

  std::vector<char> indexed_row(p.scale.rows(), 0);
  for (int idx : in.scale_indices) {
    if (idx > 0) indexed_row[idx - 1] = 1;
  }

  GradientCheck out;
  for (Eigen::Index r = 0; r < p.scale.rows(); ++r) {
    if (indexed_row[r]) continue;
    out.max_absent_row_gradient = std::max(
        out.max_absent_row_gradient, analytic.scale.row(r).cwiseAbs().maxCoeff());
  }

  std::size_t tensor = 0;
  std::uint64_t tensor_no = 0;
  visit_params(p, [&](const std::string& name, Mat<double>& w, bool trainable) {
    ++tensor_no;
    if (!trainable) return;
    const Mat<double>& g = *grads[tensor++];
    // Rows that can carry a nonzero gradient.
    std::vector<Eigen::Index> rows;
    if (name == "head.decoder.weight") {
      rows.assign(target.ids.begin(), target.ids.end());
    } else if (name == "scale_embedding") {
      for (Eigen::Index r = 0; r < w.rows(); ++r) {
        if (indexed_row[r]) rows.push_back(r);
      }
    } else {
      for (Eigen::Index r = 0; r < w.rows(); ++r) rows.push_back(r);
    }
    if (rows.empty()) return;
    Rng rng(seed, {tensor_no});
    for (int k = 0; k < per_tensor; ++k) {
      Eigen::Index r = rows[rng.uniform(rows.size())];
      Eigen::Index c =
          name == "head.decoder.bias"
              ? target.ids[rng.uniform(target.ids.size())]
              : static_cast<Eigen::Index>(rng.uniform(w.cols()));
      const double saved = w(r, c);
      auto loss_shifted = [&](double k) {
        w(r, c) = saved + k * step;
        return loss_at();
      };
      // Fourth-order central stencil.
      const double numeric =
          (8.0 * (loss_shifted(1) - loss_shifted(-1)) -
           (loss_shifted(2) - loss_shifted(-2))) /
          (12.0 * step);
      w(r, c) = saved;
      const double a = g(r, c);
      const double rel = std::abs(a - numeric) /
                         std::max({std::abs(a), std::abs(numeric), 1e-6});
      out.max_relative_error = std::max(out.max_relative_error, rel);
      ++out.checked;
    }
  });

  // Frozen tensors have no analytic gradient path at all; the float
  // gradient export must report them as exact zeros.
  SampleGradient exported = sample_gradient(model, sample);
  std::vector<ProbeModel::TensorInfo> info = model.tensor_info();
  for (std::size_t i = 0; i < info.size(); ++i) {
    if (info[i].trainable) continue;
    for (float v : exported.grads[i]) {
      out.max_frozen_gradient =
          std::max(out.max_frozen_gradient, static_cast<double>(std::abs(v)));
    }
  }
  return out;
}

}  // namespace measkit
