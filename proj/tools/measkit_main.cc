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

// measkit command-line entry point.
//
// Exit codes: 0 ok, 1 runtime or I/O failure, 2 usage or configuration
// error. MEASKIT_OUT sets the default output root; flags override it.

#include <fmt/format.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "measkit/datagen.h"
#include "measkit/dataset_io.h"
#include "measkit/error.h"
#include "measkit/eval_report.h"
#include "measkit/measure_text.h"
#include "measkit/parallel.h"
#include "measkit/probe_model.h"
#include "measkit/units.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace measkit {
namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

fs::path default_out_root() {
  const char* env = std::getenv("MEASKIT_OUT");
  return env && *env ? fs::path(env) : fs::path("out");
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_run_config(const fs::path& path, const json& config) {
  write_text(path, config.dump(2) + "\n");
}

UnitInventory load_inventory(const std::string& path) {
  return path.empty() ? UnitInventory::builtin() : UnitInventory::load(path);
}

EntityTable load_entities(const std::string& path) {
  return path.empty() ? EntityTable::builtin() : EntityTable::load(path);
}

// "train=1000" -> (kTrain, 1000)
std::map<Split, std::size_t> parse_counts(const std::vector<std::string>& items) {
  std::map<Split, std::size_t> out;
  for (const std::string& item : items) {
    std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidConfig,
                  "--count expects split=N, got '" + item + "'");
    }
    try {
      out[parse_split(item.substr(0, eq))] = std::stoull(item.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kInvalidConfig, "bad count in '" + item + "'");
    }
  }
  return out;
}

std::vector<Split> parse_splits(const std::vector<std::string>& names) {
  std::vector<Split> out;
  for (const std::string& n : names) out.push_back(parse_split(n));
  return out;
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  std::vector<std::string> tasks;
  bool all = false;
  std::vector<std::string> prompt_sets{"base"};
  std::vector<std::string> notations{"decimal"};
  std::uint64_t seed = 7;
  double scale = 1.0;
  int list_length = 3;
  std::string out;
  std::string entities;
  std::string units;
  std::vector<std::string> counts;
  int jobs = 0;
};

int run_gen(const GenArgs& a) {
  if (a.all == !a.tasks.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "give either --task or --all");
  }
  std::vector<TaskKind> tasks;
  if (a.all) {
    tasks.assign(kAllTasks.begin(), kAllTasks.end());
  } else {
    for (const std::string& t : a.tasks) tasks.push_back(parse_task(t));
  }
  std::vector<PromptSet> sets;
  for (const std::string& s : a.prompt_sets) sets.push_back(parse_prompt_set(s));
  std::vector<Notation> notations;
  for (const std::string& n : a.notations) notations.push_back(parse_notation(n));
  const fs::path root = a.out.empty() ? default_out_root() : fs::path(a.out);

  GenConfig base;
  base.seed = a.seed;
  base.scale = a.scale;
  base.list_length = a.list_length;
  base.count_overrides = parse_counts(a.counts);
  base.inventory = load_inventory(a.units);
  base.entities = load_entities(a.entities);
  base.jobs = a.jobs > 0 ? a.jobs : default_jobs();

  // Resolve everything before writing anything.
  std::vector<GenConfig> runs;
  for (TaskKind task : tasks) {
    for (PromptSet set : sets) {
      if (a.all && set == PromptSet::kUoM && task == TaskKind::kRefRange) {
        std::cerr << "note: skipping refrange under the uom prompt set\n";
        continue;
      }
      check_prompt_set_compatible(task, set);
      for (Notation notation : notations) {
        GenConfig c = base;
        c.task = task;
        c.prompt_set = set;
        c.notation = notation;
        runs.push_back(std::move(c));
      }
    }
  }

  json resolved;
  resolved["subcommand"] = "gen";
  resolved["generator_version"] = kGeneratorVersion;
  resolved["seed"] = a.seed;
  resolved["scale"] = a.scale;
  resolved["list_length"] = a.list_length;
  resolved["units"] = a.units.empty() ? "builtin" : a.units;
  resolved["entities"] = a.entities.empty() ? "builtin" : a.entities;
  json counts = json::object();
  for (const auto& [split, n] : base.count_overrides) {
    counts[std::string(split_name(split))] = n;
  }
  resolved["count_overrides"] = counts;
  json outputs = json::array();

  for (const GenConfig& c : runs) {
    Dataset d = build_splits(c);
    fs::path dir = dataset_dir(root, c.task, c.prompt_set, c.notation);
    write_dataset(d, dir);
    std::size_t total = 0;
    for (const auto& s : d.splits) total += s.size();
    std::cout << fmt::format("{}  {} samples\n", dir.string(), total);
    outputs.push_back({{"task", task_name(c.task)},
                       {"prompt_set", prompt_set_name(c.prompt_set)},
                       {"notation", notation_name(c.notation)},
                       {"dir", fs::relative(dir, root).generic_string()},
                       {"samples", total}});
  }
  resolved["outputs"] = outputs;
  write_run_config(root / "run_config.json", resolved);
  return 0;
}

// ---------------------------------------------------------------------------
// convert

MeasurementField convert_field(const MeasurementField& f) {
  Measurement m{parse_number(f.value), parse_unit(f.unit)};
  Measurement c = canonicalize(m);
  Notation notation =
      is_scientific_literal(f.value) ? Notation::kScientific : Notation::kDecimal;
  return {render(c.value, notation), render_unit(c.unit)};
}

int run_convert(const std::string& in_dir, const std::string& out_dir) {
  const fs::path in(in_dir);
  const fs::path out(out_dir);
  if (!fs::is_directory(in)) {
    throw Error(ErrorCode::kIo, "not a dataset directory: " + in.string());
  }
  if (fs::exists(out) && fs::equivalent(in, out)) {
    throw Error(ErrorCode::kInvalidConfig, "--out must differ from --in");
  }
  fs::create_directories(out);
  std::size_t converted = 0;
  for (Split split : kAllSplits) {
    fs::path src = split_path(in, split);
    if (!fs::exists(src)) continue;
    std::vector<MstSample> samples = read_jsonl(src);
    for (MstSample& s : samples) {
      s.text = rule_convert_text(s.text);
      for (MeasurementField& f : s.measurements) f = convert_field(f);
      const std::string label = derive_label(s);
      if (label != s.answer) {
        throw Error(ErrorCode::kVerificationFailed,
                    fmt::format("{}: label '{}' became '{}' after conversion",
                                s.id, s.answer, label));
      }
      for (const MeasurementSpan& span : detect_measurements(s.text)) {
        if (!parse_unit(span.unit_text).prefix_free()) {
          throw Error(ErrorCode::kVerificationFailed,
                      s.id + ": prefixed unit left in converted text");
        }
      }
    }
    write_jsonl(split_path(out, split), samples);
    converted += samples.size();
  }
  fs::path manifest = in / "manifest.json";
  if (fs::exists(manifest)) {
    json m = json::parse(read_text(manifest));
    m["rule_converted"] = true;
    write_text(out / "manifest.json", m.dump(2) + "\n");
  }
  json resolved{{"subcommand", "convert"},
                {"in", in.generic_string()},
                {"out", out.generic_string()},
                {"samples", converted}};
  write_run_config(out / "run_config.json", resolved);
  std::cout << fmt::format("{}  {} samples converted\n", out.string(), converted);
  return 0;
}

// ---------------------------------------------------------------------------
// scale-index

int run_scale_index(const std::string& text, const std::string& in,
                    const std::string& out, int cap) {
  if (text.empty() == in.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "give either --text or --in");
  }
  std::vector<std::string> sentences;
  if (!text.empty()) {
    sentences.push_back(text);
  } else if (fs::path(in).extension() == ".jsonl") {
    for (const MstSample& s : read_jsonl(in)) sentences.push_back(s.text);
  } else {
    std::istringstream lines(read_text(in));
    std::string line;
    while (std::getline(lines, line)) {
      if (!line.empty()) sentences.push_back(line);
    }
  }
  std::string dump;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i > 0) dump += '\n';
    dump += format_annotation(annotate(sentences[i], cap));
  }
  if (out.empty()) {
    std::cout << dump;
  } else {
    write_text(out, dump);
    json resolved{{"subcommand", "scale-index"},
                  {"in", in.empty() ? "--text" : in},
                  {"cap", cap},
                  {"sentences", sentences.size()}};
    write_run_config(out + ".run_config.json", resolved);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// train / eval

struct ModelArgs {
  int layers = 2;
  int hidden = 128;
  int heads = 4;
  int ffn = 256;
  int max_len = 512;
  bool base_size = false;
  bool scale_embedding = false;
  int scale_cap = kDefaultScaleCap;
  double init_std = 0.0;
  std::string units;
  std::string entities;
};

ModelConfig model_config(const ModelArgs& a) {
  ModelConfig c = a.base_size ? ModelConfig::base_size() : ModelConfig{};
  if (!a.base_size) {
    c.layers = a.layers;
    c.hidden = a.hidden;
    c.heads = a.heads;
    c.ffn = a.ffn;
  }
  c.max_sequence_length = a.max_len;
  c.scale_embedding = a.scale_embedding;
  c.scale_cap = a.scale_cap;
  c.init_std = a.init_std;
  c.validate();
  return c;
}

json config_json(const ModelConfig& c) {
  return {{"layers", c.layers},
          {"hidden", c.hidden},
          {"heads", c.heads},
          {"ffn", c.ffn},
          {"max_sequence_length", c.max_sequence_length},
          {"scale_embedding", c.scale_embedding},
          {"scale_cap", c.scale_cap},
          {"init_std", c.effective_init_std()}};
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stoull(item));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kInvalidConfig, "bad seed '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidConfig, "no seeds given");
  return out;
}

std::vector<MstSample> load_split(const fs::path& dir, Split split,
                                  bool required) {
  fs::path p = split_path(dir, split);
  if (!fs::exists(p)) {
    if (required) throw Error(ErrorCode::kIo, "missing " + p.string());
    return {};
  }
  return read_jsonl(p);
}

EvalRow make_row(const std::string& model, const std::vector<MstSample>& samples,
                 bool scale, Split split, std::uint64_t seed, Accuracy acc,
                 const std::string& fingerprint) {
  const MstSample& first = samples.front();
  return EvalRow{model,
                 std::string(task_name(first.task)),
                 std::string(prompt_set_name(first.prompt_set)),
                 std::string(notation_name(first.notation)),
                 scale,
                 std::string(split_name(split)),
                 seed,
                 acc.correct,
                 acc.total,
                 fingerprint};
}

struct TrainArgs {
  std::string data;
  std::string out;
  std::string seeds = "1,2,3";
  std::vector<std::string> eval_splits{"test_in", "test_ex"};
  TrainConfig train;
  ModelArgs model;
};

int run_train(TrainArgs a) {
  const fs::path data(a.data);
  const fs::path out = a.out.empty() ? default_out_root() / "runs" : fs::path(a.out);
  const ModelConfig config = model_config(a.model);
  const Vocab vocab = Vocab::build_default(load_inventory(a.model.units),
                                           load_entities(a.model.entities));
  const std::vector<std::uint64_t> seeds = parse_seeds(a.seeds);
  const std::vector<Split> eval_splits = parse_splits(a.eval_splits);

  std::vector<MstSample> train = load_split(data, Split::kTrain, true);
  std::vector<MstSample> valid = load_split(data, Split::kValidIn, false);
  std::map<Split, std::vector<MstSample>> eval_sets;
  for (Split s : eval_splits) eval_sets[s] = load_split(data, s, false);
  fs::create_directories(out);

  const std::string fingerprint = config_fingerprint(config, vocab);
  EvalReport report;
  json runs = json::array();
  for (std::uint64_t seed : seeds) {
    ProbeModel model(config, vocab, seed);
    const std::uint64_t backbone = model.backbone_hash();
    TrainConfig tc = a.train;
    tc.seed = seed;
    TrainHistory history = train_head(model, train, valid, tc);
    if (model.backbone_hash() != backbone) {
      throw Error(ErrorCode::kVerificationFailed,
                  "backbone changed during training");
    }
    const std::string stem = fmt::format("seed-{}", seed);
    save_checkpoint(model, out / (stem + ".ckpt"));
    json epochs = json::array();
    for (const EpochRecord& e : history.epochs) {
      epochs.push_back({{"epoch", e.epoch},
                        {"train_loss", e.train_loss},
                        {"valid_accuracy", e.valid_accuracy},
                        {"last_learning_rate", e.last_learning_rate}});
    }
    json h{{"seed", seed},
           {"steps", history.steps},
           {"best_epoch", history.best_epoch},
           {"best_valid_accuracy", history.best_valid_accuracy},
           {"stopped_early", history.stopped_early},
           {"backbone_hash", fmt::format("{:016x}", backbone)},
           {"epochs", epochs}};
    write_text(out / (stem + ".history.json"), h.dump(2) + "\n");
    runs.push_back({{"seed", seed}, {"checkpoint", stem + ".ckpt"}});

    ModelPredictor predictor(model);
    for (Split s : eval_splits) {
      const auto& samples = eval_sets[s];
      if (samples.empty()) {
        std::cerr << fmt::format("note: {} is empty or missing, not scored\n",
                                 split_name(s));
        continue;
      }
      Accuracy acc = evaluate(predictor, samples, tc.jobs);
      report.rows.push_back(make_row("scratch", samples,
                                     config.scale_embedding, s, seed, acc,
                                     fingerprint));
    }
    std::cerr << fmt::format("seed {}: {} epochs, best valid {:.4f}\n", seed,
                             history.epochs.size(),
                             history.best_valid_accuracy);
  }
  write_report(out / "report.csv", report);
  std::cout << format_report_table(report);

  json resolved{{"subcommand", "train"},
                {"data", data.generic_string()},
                {"model", config_json(config)},
                {"vocab_size", vocab.size()},
                {"fingerprint", fingerprint},
                {"train",
                 {{"batch_size", a.train.batch_size},
                  {"epochs", a.train.epochs},
                  {"learning_rate_start", a.train.learning_rate_start},
                  {"learning_rate_end", a.train.learning_rate_end},
                  {"patience", a.train.patience},
                  {"jobs", a.train.jobs}}},
                {"train_samples", train.size()},
                {"valid_samples", valid.size()},
                {"eval_splits", a.eval_splits},
                {"runs", runs}};
  write_run_config(out / "run_config.json", resolved);
  return 0;
}

struct EvalArgs {
  std::string data;
  std::vector<std::string> checkpoints;
  bool oracle = false;
  std::string constant;
  std::vector<std::string> splits{"test_in", "test_ex"};
  std::string out;
  int jobs = 1;
};

int run_eval(const EvalArgs& a) {
  const int modes = (a.oracle ? 1 : 0) + (a.constant.empty() ? 0 : 1) +
                    (a.checkpoints.empty() ? 0 : 1);
  if (modes != 1) {
    throw Error(ErrorCode::kInvalidConfig,
                "give exactly one of --checkpoint, --oracle, --constant");
  }
  const fs::path data(a.data);
  EvalReport report;
  auto score = [&](const Predictor& p, const std::string& name, bool scale,
                   std::uint64_t seed, const std::string& fingerprint) {
    for (Split s : parse_splits(a.splits)) {
      std::vector<MstSample> samples = load_split(data, s, false);
      if (samples.empty()) {
        std::cerr << fmt::format("note: {} is empty or missing, not scored\n",
                                 split_name(s));
        continue;
      }
      report.rows.push_back(make_row(name, samples, scale, s, seed,
                                     evaluate(p, samples, a.jobs), fingerprint));
    }
  };
  if (a.oracle) {
    score(OraclePredictor(), "oracle", false, 0, "-");
  } else if (!a.constant.empty()) {
    score(ConstantPredictor(a.constant), "constant-" + a.constant, false, 0, "-");
  } else {
    for (const std::string& path : a.checkpoints) {
      ProbeModel model = load_checkpoint(path);
      score(ModelPredictor(model), "scratch", model.config().scale_embedding,
            model.seed(), config_fingerprint(model.config(), model.vocab()));
    }
  }
  if (!a.out.empty()) {
    write_report(a.out, report);
    json resolved{{"subcommand", "eval"},
                  {"data", data.generic_string()},
                  {"checkpoints", a.checkpoints},
                  {"oracle", a.oracle},
                  {"constant", a.constant},
                  {"splits", a.splits}};
    write_run_config(a.out + ".run_config.json", resolved);
  }
  std::cout << format_report_table(report);
  return 0;
}

int run_report(const std::vector<std::string>& files, const std::string& csv_out) {
  EvalReport merged;
  for (const std::string& f : files) {
    EvalReport r = read_report(f);
    merged.rows.insert(merged.rows.end(), r.rows.begin(), r.rows.end());
  }
  if (!csv_out.empty()) write_report(csv_out, merged);
  std::cout << format_report_table(merged);
  return 0;
}

int run_stats(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const std::string& in : inputs) {
    if (fs::is_directory(in)) {
      for (Split s : kAllSplits) {
        fs::path p = split_path(in, s);
        if (fs::exists(p)) files.push_back(p);
      }
    } else {
      files.emplace_back(in);
    }
  }
  std::cout << format_stats(dataset_stats(files));
  return 0;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kIncompatibleSet:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

}  // namespace
}  // namespace measkit

int main(int argc, char** argv) {
  using namespace measkit;
  CLI::App app{"measkit: measurement skill benchmarks and scratch-encoder probing"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate benchmark datasets");
  gen_cmd->add_option("--task", gen.tasks,
                      "comparison|argminmax|sorting|unitconversion|refrange "
                      "(comma-separated or repeated)")
      ->delimiter(',');
  gen_cmd->add_flag("--all", gen.all, "All five tasks");
  gen_cmd->add_option("--prompt-set", gen.prompt_sets,
                      "base|label|context|uom (comma-separated or repeated)")
      ->delimiter(',')
      ->capture_default_str();
  gen_cmd->add_option("--notation", gen.notations,
                      "decimal|scientific (comma-separated or repeated)")
      ->delimiter(',')
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Root seed")->capture_default_str();
  gen_cmd->add_option("--scale", gen.scale, "Fraction of reference counts")
      ->capture_default_str();
  gen_cmd->add_option("--list-length", gen.list_length, "List length (3-5)")
      ->capture_default_str();
  gen_cmd->add_option("--count", gen.counts,
                      "Per-split count override, e.g. train=20000 (comma-separated or repeated)");
  gen_cmd->add_option("--out", gen.out, "Output root (default $MEASKIT_OUT or ./out)");
  gen_cmd->add_option("--entities", gen.entities, "Entity CSV (entity,unit,low,high)");
  gen_cmd->add_option("--units", gen.units, "Unit inventory file");
  gen_cmd->add_option("--jobs", gen.jobs, "Worker threads (0 = all cores)");

  std::string convert_in, convert_out;
  CLI::App* convert_cmd =
      app.add_subcommand("convert", "Rewrite a dataset into prefix-free units");
  convert_cmd->add_option("--in", convert_in, "Dataset directory")->required();
  convert_cmd->add_option("--out", convert_out, "Output directory")->required();

  std::string si_text, si_in, si_out;
  int si_cap = kDefaultScaleCap;
  CLI::App* si_cmd = app.add_subcommand(
      "scale-index", "Dump tokens, numeric flags and scale indices");
  si_cmd->add_option("--text", si_text, "A single sentence");
  si_cmd->add_option("--in", si_in, "A .jsonl dataset file or one sentence per line");
  si_cmd->add_option("--out", si_out, "Output file (default stdout)");
  si_cmd->add_option("--cap", si_cap, "Index cap")->capture_default_str();

  TrainArgs train;
  CLI::App* train_cmd =
      app.add_subcommand("train", "Train the probe head per seed and evaluate");
  auto add_model_options = [](CLI::App* cmd, ModelArgs& m) {
    cmd->add_flag("--scale-embedding", m.scale_embedding, "Enable the scale table");
    cmd->add_option("--scale-cap", m.scale_cap, "Scale index cap")->capture_default_str();
    cmd->add_option("--layers", m.layers)->capture_default_str();
    cmd->add_option("--hidden", m.hidden)->capture_default_str();
    cmd->add_option("--heads", m.heads)->capture_default_str();
    cmd->add_option("--ffn", m.ffn)->capture_default_str();
    cmd->add_option("--max-len", m.max_len)->capture_default_str();
    cmd->add_flag("--base-size", m.base_size, "12 layers, 768 hidden, 12 heads");
    cmd->add_option("--init-std", m.init_std,
                    "Weight init std (0 = 0.02*sqrt(768/hidden))")
        ->capture_default_str();
    cmd->add_option("--units", m.units, "Unit inventory for the vocabulary");
    cmd->add_option("--entities", m.entities, "Entity CSV for the vocabulary");
  };
  train_cmd->add_option("--data", train.data, "Dataset directory")->required();
  train_cmd->add_option("--out", train.out, "Run directory (default $MEASKIT_OUT/runs)");
  train_cmd->add_option("--seeds", train.seeds, "Comma-separated seeds")
      ->capture_default_str();
  train_cmd->add_option("--eval-splits", train.eval_splits, "Splits to score")
      ->delimiter(',')
      ->capture_default_str();
  train_cmd->add_option("--batch-size", train.train.batch_size)->capture_default_str();
  train_cmd->add_option("--epochs", train.train.epochs)->capture_default_str();
  train_cmd->add_option("--lr", train.train.learning_rate_start)->capture_default_str();
  train_cmd->add_option("--lr-end", train.train.learning_rate_end)->capture_default_str();
  train_cmd->add_option("--patience", train.train.patience)->capture_default_str();
  train_cmd->add_option("--jobs", train.train.jobs,
                        "Worker threads; results do not depend on it")
      ->capture_default_str();
  add_model_options(train_cmd, train.model);

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score a dataset");
  eval_cmd->add_option("--data", eval.data, "Dataset directory")->required();
  eval_cmd->add_option("--checkpoint", eval.checkpoints, "Checkpoint (comma-separated or repeated)");
  eval_cmd->add_flag("--oracle", eval.oracle, "Use the exact oracle");
  eval_cmd->add_option("--constant", eval.constant, "Always predict this label");
  eval_cmd->add_option("--splits", eval.splits)
      ->delimiter(',')->capture_default_str();
  eval_cmd->add_option("--out", eval.out, "Report CSV path");
  eval_cmd->add_option("--jobs", eval.jobs)->capture_default_str();

  std::vector<std::string> report_files;
  std::string report_csv;
  CLI::App* report_cmd = app.add_subcommand("report", "Render report CSVs as a table");
  report_cmd->add_option("files", report_files, "Report CSV files")->required();
  report_cmd->add_option("--csv", report_csv, "Also write the merged CSV here");

  std::vector<std::string> stats_inputs;
  CLI::App* stats_cmd = app.add_subcommand("stats", "Label distribution per split");
  stats_cmd->add_option("inputs", stats_inputs, "Dataset directories or .jsonl files")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*convert_cmd) return run_convert(convert_in, convert_out);
    if (*si_cmd) return run_scale_index(si_text, si_in, si_out, si_cap);
    if (*train_cmd) return run_train(train);
    if (*eval_cmd) return run_eval(eval);
    if (*report_cmd) return run_report(report_files, report_csv);
    if (*stats_cmd) return run_stats(stats_inputs);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
