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

#include "sss/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "sss/optimizer.hpp"

namespace sss {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string relations_label(const std::vector<RelationKind>& relations) {
  if (relations.empty()) return "-";
  std::string out;
  for (RelationKind k : relations) {
    if (!out.empty()) out += "+";
    out += relation_name(k);
  }
  return out;
}

}  // namespace

std::string format_epoch(const EpochLog& log) {
  std::string line = "epoch " + std::to_string(log.epoch) +
                     " train_loss=" + fixed(log.train_loss, 6) +
                     " train_acc=" + fixed(log.train_accuracy, 4);
  line += " valid_loss=" + (log.valid_loss ? fixed(*log.valid_loss, 6) : std::string("-"));
  line += " skipped=" + std::to_string(log.skipped_steps) + " time=" + fixed(log.seconds, 2) + "s";
  return line;
}

TeacherForcedStats teacher_forced_stats(const Model& model, std::span<const CorpusRecord> records,
                                        const StepOptions& options) {
  if (records.empty()) throw std::invalid_argument("teacher_forced_stats: no records");
  double loss = 0.0;
  std::size_t correct = 0, steps = 0;
  for (const auto& r : records) {
    Session s(model.store);
    const auto res = teacher_forced(s, model, prepare_example(model, r), options);
    loss += res.loss.item();
    correct += res.correct;
    steps += res.steps;
  }
  return {loss / static_cast<double>(records.size()),
          static_cast<double>(correct) / static_cast<double>(steps)};
}

TrainResult train_model(Model& model, const TrainConfig& cfg, std::span<const CorpusRecord> train,
                        std::span<const CorpusRecord> valid, const TrainOptions& options) {
  cfg.validate();
  if (train.empty()) throw std::invalid_argument("train_model: no training records");
  const auto start = Clock::now();
  Adam adam(model.store, {cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon, cfg.clip_norm});
  Rng rng(cfg.seed);
  std::vector<Example> examples;
  examples.reserve(train.size());
  for (const auto& r : train) examples.push_back(prepare_example(model, r));
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  double best_loss = 0.0;
  GradBuffer grads(model.store);
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto epoch_start = Clock::now();
    std::shuffle(order.begin(), order.end(), rng);
    EpochLog log;
    log.epoch = epoch;
    double loss_sum = 0.0;
    std::size_t correct = 0, steps = 0;
    for (std::size_t b = 0; b < order.size(); b += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), b + cfg.batch_size);
      grads.zero();
      for (std::size_t k = b; k < end; ++k) {
        Tape tape;
        Session s(model.store, &tape);
        const auto res = teacher_forced(s, model, examples[order[k]]);
        s.accumulate(backward(res.loss), grads);
        loss_sum += res.loss.item();
        correct += res.correct;
        steps += res.steps;
      }
      grads.scale(1.0 / static_cast<double>(end - b));
      if (!adam.step(model.store, grads).applied) ++log.skipped_steps;
    }
    log.train_loss = loss_sum / static_cast<double>(examples.size());
    log.train_accuracy = static_cast<double>(correct) / static_cast<double>(steps);
    if (!valid.empty()) log.valid_loss = teacher_forced_stats(model, valid).loss;
    log.seconds = seconds_since(epoch_start);
    result.log.push_back(log);
    if (options.on_epoch) options.on_epoch(log);

    const double score = log.valid_loss.value_or(0.0);
    if (result.best_epoch == 0 || !log.valid_loss || score < best_loss) {
      best_loss = score;
      result.best_epoch = epoch;
      result.best = model.store;
    }
    if (cfg.target_train_accuracy > 0.0 && log.train_accuracy >= cfg.target_train_accuracy) {
      result.reached_target = true;
      break;
    }
    if (options.time_budget_seconds > 0.0 && seconds_since(start) >= options.time_budget_seconds)
      break;
  }
  result.seconds = seconds_since(start);
  return result;
}

std::vector<TokenList> decode_corpus(const Model& model, std::span<const CorpusRecord> records) {
  std::vector<TokenList> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    Session s(model.store);
    out.push_back(greedy_response(s, model, prepare_example(model, r)));
  }
  return out;
}

MetricsReport score_generations(std::vector<TokenList> generations,
                                std::span<const CorpusRecord> records) {
  if (records.empty()) throw std::invalid_argument("score_generations: no records");
  if (generations.size() != records.size())
    throw std::invalid_argument("score_generations: generation and record counts differ");
  MetricsReport report;
  std::vector<TokenList> refs;
  std::size_t exact = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    refs.push_back(records[i].response_tokens);
    if (generations[i] == refs.back()) ++exact;
  }
  report.bleu = bleu4(generations, refs);
  report.rouge = rouge(generations, refs);
  report.exact_match = 100.0 * static_cast<double>(exact) / static_cast<double>(records.size());
  report.generations = std::move(generations);
  return report;
}

MetricsReport evaluate_model(const Model& model, std::span<const CorpusRecord> records,
                             const StepOptions& options) {
  if (records.empty()) throw std::invalid_argument("evaluate_model: no records");
  std::vector<TokenList> generations;
  generations.reserve(records.size());
  for (const auto& r : records) {
    Session s(model.store);
    generations.push_back(greedy_response(s, model, prepare_example(model, r), options));
  }
  return score_generations(std::move(generations), records);
}

void write_generations(const std::string& path, std::span<const TokenList> generations) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write generations file '" + path + "'");
  for (const auto& g : generations) {
    for (std::size_t i = 0; i < g.size(); ++i) out << (i ? " " : "") << g[i];
    out << '\n';
  }
}

Model model_for_corpus(const ModelConfig& cfg, const TrainConfig& train,
                       std::span<const CorpusRecord> records,
                       std::optional<EmbeddingProvider> precomputed) {
  return build_model(cfg, Vocabulary::build(records, train.max_vocab, train.min_count),
                     LabelVocab::build(records, train.max_labels), train.seed,
                     std::move(precomputed));
}

std::vector<std::vector<RelationKind>> all_relation_subsets() {
  std::vector<std::vector<RelationKind>> out;
  for (unsigned mask = 1; mask < 8; ++mask) {
    std::vector<RelationKind> subset;
    for (std::size_t k = 0; k < 3; ++k)
      if (mask & (1u << k)) subset.push_back(kAllRelations[k]);
    out.push_back(subset);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
  return out;
}

std::vector<AblationRow> run_ablation(const RunConfig& base, const AblationGrid& grid,
                                      std::span<const CorpusRecord> train,
                                      std::span<const CorpusRecord> valid,
                                      const std::function<void(const AblationRow&)>& on_row) {
  if (valid.empty()) throw std::invalid_argument("run_ablation: validation records required");
  const auto subsets = grid.relation_subsets.empty() ? all_relation_subsets() : grid.relation_subsets;
  std::vector<AblationRow> rows;
  auto run_cell = [&](EncoderMode mode, std::size_t hops, const std::vector<RelationKind>& rel) {
    ModelConfig cfg = base.model;
    cfg.encoder.mode = mode;
    if (uses_structure(mode)) {
      cfg.encoder.hops = hops;
      cfg.encoder.relations = rel;
    }
    Model model = model_for_corpus(cfg, base.train, train);
    const auto result = train_model(model, base.train, train, valid);
    model.store = result.best;
    AblationRow row;
    row.mode = mode;
    if (uses_structure(mode)) {
      row.relations = rel;
      row.hops = hops;
    }
    row.best_valid_loss = result.log[result.best_epoch - 1].valid_loss.value_or(0.0);
    row.metrics = evaluate_model(model, valid);
    if (on_row) on_row(row);
    rows.push_back(std::move(row));
  };
  for (EncoderMode mode : grid.modes) {
    if (!uses_structure(mode)) {
      run_cell(mode, 0, {});
      continue;
    }
    for (const auto& rel : subsets)
      for (std::size_t k : grid.hops) run_cell(mode, k, rel);
  }
  return rows;
}

void write_ablation_report(std::ostream& out, std::span<const AblationRow> rows) {
  out << "| Model | Graphs | k | BLEU | ROUGE-1 | ROUGE-2 | ROUGE-L | EM | valid loss |\n";
  out << "|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    out << "| " << mode_name(r.mode) << " | " << relations_label(r.relations) << " | "
        << (r.hops ? std::to_string(r.hops) : std::string("-")) << " | " << fixed(r.metrics.bleu, 2)
        << " | " << fixed(r.metrics.rouge.rouge1, 2) << " | " << fixed(r.metrics.rouge.rouge2, 2)
        << " | " << fixed(r.metrics.rouge.rougeL, 2) << " | " << fixed(r.metrics.exact_match, 1)
        << " | " << fixed(r.best_valid_loss, 4) << " |\n";
  }
}

}  // namespace sss
