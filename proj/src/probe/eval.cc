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

#include <numeric>

#include "measkit/parallel.h"
#include "measkit/probe_model.h"

namespace measkit {

std::string ModelPredictor::predict(const MstSample& sample) const {
  return measkit::predict(model_.forward(sample.text), sample.candidates,
                          model_.vocab());
}

std::string OraclePredictor::predict(const MstSample& sample) const {
  return derive_label(sample);
}

std::string ConstantPredictor::predict(const MstSample&) const { return label_; }

Accuracy evaluate(const Predictor& predictor,
                  const std::vector<MstSample>& samples, int jobs) {
  std::vector<char> ok(samples.size(), 0);
  parallel_for(samples.size(), jobs, [&](std::size_t i) {
    ok[i] = answer_matches(samples[i].task, predictor.predict(samples[i]),
                           samples[i].answer);
  });
  Accuracy acc;
  acc.total = samples.size();
  acc.correct = static_cast<std::size_t>(std::accumulate(ok.begin(), ok.end(), 0L));
  return acc;
}

}  // namespace measkit
