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
#include <array>
#include <set>

#include "encoder.h"
#include "measkit/error.h"
#include "measkit/probe_model.h"
#include "measkit/rng.h"
#include "measkit/units.h"

namespace measkit {
namespace {

using probe_detail::Mat;
using probe_detail::Params;

constexpr std::array<std::string_view, 5> kSpecials = {
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"};
constexpr double kBaseInitStd = 0.02;
constexpr double kBaseHidden = 768.0;

void add_text_tokens(std::string_view text, std::set<std::string>& out) {
  for (Token& t : tokenize(text)) {
    if (t.text != kMaskToken) out.insert(std::move(t.text));
  }
}

std::string strip_placeholders(std::string_view text) {
  std::string out(text);
  for (std::string_view p : {"[M]", "[LoM]", "[ENT]", "[MASK]"}) {
    for (std::size_t at = out.find(p); at != std::string::npos;
         at = out.find(p)) {
      out.replace(at, p.size(), " ");
    }
  }
  return out;
}

void add_unit_spellings(const Unit& unit, std::set<std::string>& out) {
  out.insert(render_unit(unit));
  Unit upper = unit;
  bool has_liter = false;
  for (UnitTerm* t : {&upper.numerator,
                      upper.denominator ? &*upper.denominator : nullptr}) {
    if (t && t->atom == Atom::kLiter) {
      t->capital_liter = true;
      has_liter = true;
    }
  }
  if (has_liter) out.insert(render_unit(upper));
}

bool is_gamma(const std::string& name) { return name.ends_with(".gamma"); }
bool is_zero_init(const std::string& name) {
  return name.ends_with(".beta") || name.ends_with(".bias") ||
         name == "scale_embedding";
}

void hash_bytes(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
}

std::uint64_t partition_hash(const Params<float>& p, bool trainable) {
  std::uint64_t h = 14695981039346656037ULL;
  probe_detail::visit_params(
      p, [&](const std::string& name, const Mat<float>& m, bool t) {
        if (t != trainable) return;
        hash_bytes(h, name.data(), name.size());
        hash_bytes(h, m.data(), sizeof(float) * m.size());
      });
  return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// Vocab

Vocab::Vocab(std::vector<std::string> tokens) {
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  for (std::string_view s : kSpecials) tokens_.emplace_back(s);
  for (std::string& t : tokens) {
    if (std::find(kSpecials.begin(), kSpecials.end(), t) != kSpecials.end()) {
      continue;
    }
    tokens_.push_back(std::move(t));
  }
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    index_.emplace(tokens_[i], static_cast<int>(i));
  }
}

Vocab Vocab::build_default(const UnitInventory& inventory,
                           const EntityTable& entities) {
  std::set<std::string> words;
  for (char c : std::string_view("0123456789.E+-")) words.insert(std::string(1, c));
  for (const UnitFamily& f : inventory.families()) {
    add_unit_spellings(parse_unit(f.head), words);
    for (const Unit& u : f.variants) add_unit_spellings(u, words);
  }
  for (TaskKind task : kAllTasks) {
    for (const PromptTemplate& t : task_templates(task)) {
      add_text_tokens(strip_placeholders(t.text), words);
    }
    for (const std::string& c : candidates_for(task, PromptSet::kLabel)) {
      words.insert(c);
    }
  }
  for (const EntityRecord& e : entities.records()) {
    add_text_tokens(e.name, words);
    add_unit_spellings(e.unit, words);
    words.insert(e.unit_text);
  }
  return Vocab(std::vector<std::string>(words.begin(), words.end()));
}

int Vocab::id(std::string_view token) const {
  return find(token).value_or(kUnk);
}

std::optional<int> Vocab::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// ModelConfig

ModelConfig ModelConfig::base_size() {
  ModelConfig c;
  c.layers = 12;
  c.hidden = 768;
  c.heads = 12;
  c.ffn = 3072;
  return c;
}

double ModelConfig::effective_init_std() const {
  if (init_std > 0.0) return init_std;
  return kBaseInitStd * std::sqrt(kBaseHidden / static_cast<double>(hidden));
}

void ModelConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidConfig, "model config: " + what);
  };
  if (layers < 0) fail("layers must be >= 0");
  if (hidden < 1 || heads < 1 || ffn < 1) fail("sizes must be positive");
  if (hidden % heads != 0) fail("hidden must be divisible by heads");
  if (max_sequence_length < 3) fail("max_sequence_length must be >= 3");
  if (scale_cap < 1) fail("scale cap must be >= 1");
  if (!(init_std >= 0.0)) fail("init_std must be >= 0");
}

// ---------------------------------------------------------------------------
// ProbeModel

ProbeModel::ProbeModel(const ModelConfig& config, Vocab vocab,
                       std::uint64_t seed)
    : config_(config), vocab_(std::move(vocab)), seed_(seed) {
  config_.validate();
  params_ = std::make_unique<Params<float>>(
      probe_detail::allocate_params<float>(config_, vocab_.size()));
  Rng rng(seed);
  const double std = config_.effective_init_std();
  probe_detail::visit_params(
      *params_, [&](const std::string& name, Mat<float>& m, bool) {
        if (is_gamma(name) || is_zero_init(name)) return;
        for (Eigen::Index i = 0; i < m.size(); ++i) {
          m.data()[i] = static_cast<float>(rng.normal() * std);
        }
      });
}

ProbeModel::~ProbeModel() = default;
ProbeModel::ProbeModel(ProbeModel&&) noexcept = default;
ProbeModel& ProbeModel::operator=(ProbeModel&&) noexcept = default;

ProbeModel::ProbeModel(const ProbeModel& other)
    : config_(other.config_),
      vocab_(other.vocab_),
      seed_(other.seed_),
      params_(std::make_unique<Params<float>>(*other.params_)) {}

ProbeModel& ProbeModel::operator=(const ProbeModel& other) {
  if (this != &other) {
    config_ = other.config_;
    vocab_ = other.vocab_;
    seed_ = other.seed_;
    params_ = std::make_unique<Params<float>>(*other.params_);
  }
  return *this;
}

EncodedInput ProbeModel::encode(std::string_view text) const {
  std::vector<Token> tokens = tokenize(text);
  std::vector<int> indices = assign_scale_indices(tokens, config_.scale_cap);
  std::vector<std::string> words;
  words.reserve(tokens.size());
  for (Token& t : tokens) words.push_back(std::move(t.text));
  return encode_tokens(words, indices);
}

EncodedInput ProbeModel::encode_tokens(const std::vector<std::string>& tokens,
                                       const std::vector<int>& scale_indices) const {
  if (tokens.size() != scale_indices.size()) {
    throw Error(ErrorCode::kInvalidConfig,
                "token and scale index counts differ");
  }
  EncodedInput in;
  in.ids.reserve(tokens.size() + 2);
  in.ids.push_back(Vocab::kCls);
  in.scale_indices.push_back(0);
  int masks = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    int id = vocab_.id(tokens[i]);
    if (id == Vocab::kMask) {
      ++masks;
      in.mask_position = static_cast<int>(in.ids.size());
    }
    in.ids.push_back(id);
    in.scale_indices.push_back(std::clamp(scale_indices[i], 0, config_.scale_cap));
  }
  in.ids.push_back(Vocab::kSep);
  in.scale_indices.push_back(0);
  if (masks == 0) throw Error(ErrorCode::kNoMask, "input has no [MASK]");
  if (masks > 1) {
    throw Error(ErrorCode::kMultipleMasks,
                "input has " + std::to_string(masks) + " [MASK] tokens");
  }
  if (static_cast<int>(in.ids.size()) > config_.max_sequence_length) {
    throw Error(ErrorCode::kSequenceTooLong,
                std::to_string(in.ids.size()) + " tokens > " +
                    std::to_string(config_.max_sequence_length));
  }
  return in;
}

Eigen::VectorXf ProbeModel::forward(const EncodedInput& input) const {
  probe_detail::EncoderCache<float> cache;
  probe_detail::HeadCache<float> head;
  Mat<float> h =
      probe_detail::encoder_forward<float>(*params_, config_, input, cache);
  probe_detail::head_forward<float>(*params_, h, head);
  Eigen::VectorXf scores(vocab_.size());
  for (int v = 0; v < vocab_.size(); ++v) {
    scores[v] = probe_detail::decoder_score<float>(*params_, head.u, v);
  }
  return scores;
}

std::uint64_t ProbeModel::backbone_hash() const {
  return partition_hash(*params_, false);
}

std::uint64_t ProbeModel::trainable_hash() const {
  return partition_hash(*params_, true);
}

std::vector<ProbeModel::TensorInfo> ProbeModel::tensor_info() const {
  std::vector<TensorInfo> out;
  probe_detail::visit_params(
      *params_, [&](const std::string& name, const Mat<float>& m, bool t) {
        out.push_back({name, static_cast<int>(m.rows()),
                       static_cast<int>(m.cols()), t});
      });
  return out;
}

std::vector<float*> ProbeModel::tensor_data() {
  std::vector<float*> out;
  probe_detail::visit_params(
      *params_,
      [&](const std::string&, Mat<float>& m, bool) { out.push_back(m.data()); });
  return out;
}

std::vector<const float*> ProbeModel::tensor_data() const {
  std::vector<const float*> out;
  probe_detail::visit_params(*params_,
                             [&](const std::string&, const Mat<float>& m,
                                 bool) { out.push_back(m.data()); });
  return out;
}

std::string predict(const Eigen::VectorXf& scores,
                    const std::vector<std::string>& candidates,
                    const Vocab& vocab) {
  if (candidates.empty()) {
    throw Error(ErrorCode::kUnknownCandidate, "empty candidate list");
  }
  std::size_t best = 0;
  float best_score = 0.0f;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::optional<int> id = vocab.find(candidates[i]);
    if (!id || *id >= scores.size()) {
      throw Error(ErrorCode::kUnknownCandidate,
                  "candidate '" + candidates[i] + "' is not in the vocabulary");
    }
    if (i == 0 || scores[*id] > best_score) {
      best = i;
      best_score = scores[*id];
    }
  }
  return candidates[best];
}

std::string config_fingerprint(const ModelConfig& config, const Vocab& vocab) {
  std::uint64_t h = 14695981039346656037ULL;
  std::string key = std::to_string(config.layers) + "/" +
                    std::to_string(config.hidden) + "/" +
                    std::to_string(config.heads) + "/" +
                    std::to_string(config.ffn) + "/" +
                    std::to_string(config.max_sequence_length) + "/" +
                    (config.scale_embedding ? "scale" : "noscale") + "/" +
                    std::to_string(config.scale_cap) + "/" +
                    std::to_string(config.effective_init_std());
  for (const std::string& t : vocab.tokens()) key += "\n" + t;
  hash_bytes(h, key.data(), key.size());
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[i] = kHex[h & 0xF];
  return out;
}

}  // namespace measkit
