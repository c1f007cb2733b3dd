/*
 * Copyright 2026 The SSS Dialogue Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sss/checkpoint.hpp"
#include "sss/gradcheck_suite.hpp"
#include "sss/synthetic.hpp"
#include "sss/trainer.hpp"

using namespace sss;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ParseOptions parse_options(const DataConfig& data) {
  ParseOptions opt;
  opt.entity_window = data.entity_window;
  opt.window_unit = data.window_unit;
  return opt;
}

std::optional<EmbeddingProvider> maybe_embeddings(const std::string& path,
                                                  std::span<const CorpusRecord> records) {
  if (path.empty()) return std::nullopt;
  EmbeddingProvider provider = load_embeddings(path);
  check_embedding_refs(provider, records);
  return provider;
}

nlohmann::json metrics_json(const MetricsReport& r, std::size_t records) {
  return {{"records", records},
          {"bleu", r.bleu},
          {"rouge1", r.rouge.rouge1},
          {"rouge2", r.rouge.rouge2},
          {"rougeL", r.rouge.rougeL},
          {"exact_match", r.exact_match}};
}

int cmd_train(const std::string& config_path) {
  const RunConfig cfg = load_run_config(config_path);
  if (cfg.data.train.empty()) throw std::invalid_argument("config: data.train is required");
  const ParseOptions popt = parse_options(cfg.data);
  const auto train = load_corpus(cfg.data.train, popt);
  const auto valid = cfg.data.valid.empty() ? std::vector<CorpusRecord>{} : load_corpus(cfg.data.valid, popt);
  auto embeddings = maybe_embeddings(cfg.data.embeddings, train);
  if (embeddings && !valid.empty()) check_embedding_refs(*embeddings, valid);

  std::filesystem::create_directories(cfg.data.out_dir);
  const std::string out = cfg.data.out_dir;
  {
    std::ofstream dump(out + "/config.json");
    dump << dump_run_config(cfg) << '\n';
  }
  Model model = model_for_corpus(cfg.model, cfg.train, train, embeddings);
  std::printf("vocabulary %zu words, %zu parameter values\n", model.vocab.size(),
              model.store.total_values());
  std::ofstream log(out + "/train.log");
  TrainOptions opt;
  opt.on_epoch = [&](const EpochLog& l) {
    const std::string line = format_epoch(l);
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    log << line << '\n' << std::flush;
  };
  const TrainResult result = train_model(model, cfg.train, train, valid, opt);
  model.store = result.best;
  save_checkpoint(out + "/model.ckpt", model);
  std::printf("kept epoch %zu; checkpoint %s/model.ckpt (%.1fs)\n", result.best_epoch, out.c_str(),
              result.seconds);
  if (!valid.empty()) {
    const auto report = evaluate_model(model, valid);
    std::printf("validation %s\n", metrics_json(report, valid.size()).dump().c_str());
  }
  return 0;
}

Model open_checkpoint(const std::string& ckpt, const std::string& embeddings,
                      std::span<const CorpusRecord> records) {
  return load_checkpoint(ckpt, maybe_embeddings(embeddings, records));
}

int cmd_evaluate(const std::string& ckpt, const std::string& data, const std::string& embeddings,
                 bool no_copy) {
  const auto records = load_corpus(data);
  const Model model = open_checkpoint(ckpt, embeddings, records);
  StepOptions options;
  if (no_copy) options.force_p_gen = 1.0;
  const auto report = evaluate_model(model, records, options);
  std::printf("%s\n", metrics_json(report, records.size()).dump(2).c_str());
  return 0;
}

int cmd_decode(const std::string& ckpt, const std::string& data, const std::string& out,
               const std::string& embeddings) {
  const auto records = load_corpus(data);
  const Model model = open_checkpoint(ckpt, embeddings, records);
  write_generations(out, decode_corpus(model, records));
  std::printf("wrote %zu generations to %s\n", records.size(), out.c_str());
  return 0;
}

int cmd_gradcheck(const std::string& module) {
  const auto modules = module.empty() ? gradcheck_modules() : std::vector<std::string>{module};
  bool ok = true;
  for (const auto& name : modules) {
    const auto res = run_module_gradcheck(name);
    std::printf("%-7s %s max_rel_error=%.3e params=%zu time=%.2fs\n", name.c_str(),
                res.report.passed ? "PASS" : "FAIL", res.report.max_rel_error,
                res.report.params.size(), res.seconds);
    ok = ok && res.report.passed;
  }
  return ok ? 0 : 1;
}

int cmd_synth(const std::string& spec_path, const std::string& out, const std::string& config_out) {
  const SyntheticSpec spec = spec_path.empty() ? SyntheticSpec{} : parse_synthetic_spec(read_file(spec_path));
  const auto records = generate_synthetic(spec);
  save_corpus(out, records);
  std::printf("wrote %zu records to %s\n", records.size(), out.c_str());
  if (!config_out.empty()) {
    std::ofstream cfg(config_out);
    if (!cfg) throw std::runtime_error("cannot write '" + config_out + "'");
    cfg << dump_run_config(synthetic_run_config(spec)) << '\n';
    std::printf("wrote run config to %s\n", config_out.c_str());
  }
  return 0;
}

int cmd_ablation(const std::string& config_path, const std::string& out,
                 const std::vector<std::size_t>& hops, std::size_t epochs) {
  RunConfig cfg = load_run_config(config_path);
  if (epochs > 0) cfg.train.epochs = epochs;
  const ParseOptions popt = parse_options(cfg.data);
  const auto train = load_corpus(cfg.data.train, popt);
  const auto valid = load_corpus(cfg.data.valid, popt);
  AblationGrid grid;
  if (!hops.empty()) grid.hops = hops;
  const auto rows = run_ablation(cfg, grid, train, valid, [](const AblationRow& r) {
    std::printf("%s k=%zu EM=%.1f BLEU=%.2f\n", std::string(mode_name(r.mode)).c_str(), r.hops,
                r.metrics.exact_match, r.metrics.bleu);
    std::fflush(stdout);
  });
  std::ofstream report(out);
  if (!report) throw std::runtime_error("cannot write '" + out + "'");
  write_ablation_report(report, rows);
  std::printf("wrote %zu rows to %s\n", rows.size(), out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure-aware knowledge-grounded response generation"};
  app.require_subcommand(1);

  std::string config, ckpt, data, out, embeddings, module, spec, config_out;
  bool no_copy = false;
  std::vector<std::size_t> hops;
  std::size_t epochs = 0;

  auto* train = app.add_subcommand("train", "Train a model from a run config");
  train->add_option("--config", config, "Run config JSON")->required()->check(CLI::ExistingFile);

  auto* evaluate = app.add_subcommand("evaluate", "Score greedy generations on a corpus");
  evaluate->add_option("--ckpt", ckpt, "Checkpoint")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--data", data, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--embeddings", embeddings, "SSSEMB1 file for precomputed models");
  evaluate->add_flag("--no-copy", no_copy, "Pin p_gen to 1");

  auto* decode = app.add_subcommand("decode", "Write greedy generations, one per line");
  decode->add_option("--ckpt", ckpt, "Checkpoint")->required()->check(CLI::ExistingFile);
  decode->add_option("--data", data, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  decode->add_option("--out", out, "Generations file")->required();
  decode->add_option("--embeddings", embeddings, "SSSEMB1 file for precomputed models");

  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference gradient checks");
  gradcheck->add_option("--module", module, "One of gcn, mgcn, bilstm, model (default: all)")
      ->check(CLI::IsMember(gradcheck_modules()));

  auto* synth = app.add_subcommand("synth-data", "Generate a synthetic span-copy corpus");
  synth->add_option("--spec", spec, "Synthetic spec JSON (default settings when omitted)")
      ->check(CLI::ExistingFile);
  synth->add_option("--out", out, "Corpus JSONL")->required();
  synth->add_option("--config-out", config_out, "Also write a matching run config");

  auto* ablation = app.add_subcommand("ablation", "Train every encoder mode, hop count and graph subset");
  ablation->add_option("--config", config, "Run config JSON")->required()->check(CLI::ExistingFile);
  ablation->add_option("--out", out, "Markdown report")->required();
  ablation->add_option("--hops", hops, "Hop counts (default 1 2 3)");
  ablation->add_option("--epochs", epochs, "Override the epoch budget per cell");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*train) return cmd_train(config);
    if (*evaluate) return cmd_evaluate(ckpt, data, embeddings, no_copy);
    if (*decode) return cmd_decode(ckpt, data, out, embeddings);
    if (*gradcheck) return cmd_gradcheck(module);
    if (*synth) return cmd_synth(spec, out, config_out);
    if (*ablation) return cmd_ablation(config, out, hops, epochs);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
