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

#include <bit>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "measkit/error.h"
#include "measkit/probe_model.h"

namespace measkit {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

constexpr char kMagic[4] = {'M', 'S', 'K', 'T'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ofstream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::ifstream& in, const std::string& where) {
  std::uint32_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
    throw Error(ErrorCode::kBadCheckpoint, where + ": truncated header");
  }
  return v;
}

}  // namespace

void save_checkpoint(const ProbeModel& model, const std::filesystem::path& path) {
  const ModelConfig& c = model.config();
  nlohmann::ordered_json header;
  header["config"] = {{"layers", c.layers},
                      {"hidden", c.hidden},
                      {"heads", c.heads},
                      {"ffn", c.ffn},
                      {"max_sequence_length", c.max_sequence_length},
                      {"scale_embedding", c.scale_embedding},
                      {"scale_cap", c.scale_cap},
                      {"init_std", c.init_std}};
  header["seed"] = model.seed();
  header["fingerprint"] = config_fingerprint(c, model.vocab());
  header["vocab"] = model.vocab().tokens();
  nlohmann::ordered_json tensors = nlohmann::ordered_json::array();
  for (const ProbeModel::TensorInfo& t : model.tensor_info()) {
    tensors.push_back({{"name", t.name},
                       {"rows", t.rows},
                       {"cols", t.cols},
                       {"trainable", t.trainable}});
  }
  header["tensors"] = tensors;
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(kMagic, sizeof kMagic);
  write_u32(out, kVersion);
  write_u32(out, static_cast<std::uint32_t>(text.size()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  std::vector<ProbeModel::TensorInfo> info = model.tensor_info();
  std::vector<const float*> data = model.tensor_data();
  for (std::size_t i = 0; i < info.size(); ++i) {
    out.write(reinterpret_cast<const char*>(data[i]),
              static_cast<std::streamsize>(sizeof(float) * info[i].rows *
                                           info[i].cols));
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

ProbeModel load_checkpoint(const std::filesystem::path& path) {
  const std::string where = path.string();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + where);
  char magic[4] = {};
  if (!in.read(magic, sizeof magic) ||
      std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw Error(ErrorCode::kBadCheckpoint, where + ": not a measkit checkpoint");
  }
  const std::uint32_t version = read_u32(in, where);
  if (version != kVersion) {
    throw Error(ErrorCode::kBadCheckpoint,
                where + ": unsupported version " + std::to_string(version));
  }
  const std::uint32_t length = read_u32(in, where);
  std::string text(length, '\0');
  if (!in.read(text.data(), length)) {
    throw Error(ErrorCode::kBadCheckpoint, where + ": truncated header");
  }
  nlohmann::json header;
  ModelConfig config;
  std::vector<std::string> tokens;
  std::uint64_t seed = 0;
  try {
    header = nlohmann::json::parse(text);
    const auto& c = header.at("config");
    config.layers = c.at("layers").get<int>();
    config.hidden = c.at("hidden").get<int>();
    config.heads = c.at("heads").get<int>();
    config.ffn = c.at("ffn").get<int>();
    config.max_sequence_length = c.at("max_sequence_length").get<int>();
    config.scale_embedding = c.at("scale_embedding").get<bool>();
    config.scale_cap = c.at("scale_cap").get<int>();
    config.init_std = c.at("init_std").get<double>();
    seed = header.at("seed").get<std::uint64_t>();
    tokens = header.at("vocab").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadCheckpoint, where + ": bad header: " + e.what());
  }
  // Vocab re-sorts; the stored list is already in id order.
  Vocab vocab(std::vector<std::string>(tokens.begin() + std::min<std::size_t>(5, tokens.size()),
                                       tokens.end()));
  if (vocab.tokens() != tokens) {
    throw Error(ErrorCode::kBadCheckpoint, where + ": vocabulary mismatch");
  }
  ProbeModel model(config, std::move(vocab), seed);
  std::vector<ProbeModel::TensorInfo> info = model.tensor_info();
  const auto& stored = header.at("tensors");
  if (stored.size() != info.size()) {
    throw Error(ErrorCode::kBadCheckpoint, where + ": tensor map mismatch");
  }
  std::vector<float*> data = model.tensor_data();
  for (std::size_t i = 0; i < info.size(); ++i) {
    const auto& s = stored[i];
    if (s.at("name") != info[i].name || s.at("rows") != info[i].rows ||
        s.at("cols") != info[i].cols || s.at("trainable") != info[i].trainable) {
      throw Error(ErrorCode::kBadCheckpoint,
                  where + ": tensor '" + info[i].name + "' does not match");
    }
    const std::streamsize bytes =
        static_cast<std::streamsize>(sizeof(float) * info[i].rows * info[i].cols);
    if (!in.read(reinterpret_cast<char*>(data[i]), bytes)) {
      throw Error(ErrorCode::kBadCheckpoint, where + ": truncated tensor data");
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::kBadCheckpoint, where + ": trailing bytes");
  }
  return model;
}

}  // namespace measkit
