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

#ifndef SSS_TRAINER_HPP
#define SSS_TRAINER_HPP

#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sss/config.hpp"
#include "sss/metrics.hpp"
#include "sss/model.hpp"

namespace sss {

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  /// Teacher-forced token accuracy accumulated while training the epoch.
  double train_accuracy = 0.0;
  std::optional<double> valid_loss;
  std::size_t skipped_steps = 0;
  double seconds = 0.0;
};

std::string format_epoch(const EpochLog& log);

struct TrainOptions {
  std::function<void(const EpochLog&)> on_epoch;
  /// Stops after the epoch during which this wall-clock budget runs out
  /// (0 disables).
  double time_budget_seconds = 0.0;
};

struct TrainResult {
  /// Parameters of the epoch with the least validation loss, or of the
  /// last epoch without validation data.
  ParamStore best;
  std::size_t best_epoch = 0;
  std::vector<EpochLog> log;
  bool reached_target = false;
  double seconds = 0.0;
};

/// Mini-batch Adam on the teacher-forced loss; batch gradients are averaged
/// in a fixed example order. `model.store` ends at the last epoch's values.
TrainResult train_model(Model& model, const TrainConfig& cfg, std::span<const CorpusRecord> train,
                        std::span<const CorpusRecord> valid, const TrainOptions& options = {});

struct TeacherForcedStats {
  double loss = 0.0;  ///< mean per-record loss
  double accuracy = 0.0;
};

TeacherForcedStats teacher_forced_stats(const Model& model, std::span<const CorpusRecord> records,
                                        const StepOptions& options = {});

struct MetricsReport {
  double bleu = 0.0;
  RougeScores rouge;
  double exact_match = 0.0;  ///< percent of responses reproduced exactly
  std::vector<TokenList> generations;
};

/// Metrics of `generations` against the records' responses.
MetricsReport score_generations(std::vector<TokenList> generations,
                                std::span<const CorpusRecord> records);

MetricsReport evaluate_model(const Model& model, std::span<const CorpusRecord> records,
                             const StepOptions& options = {});

std::vector<TokenList> decode_corpus(const Model& model, std::span<const CorpusRecord> records);
void write_generations(const std::string& path, std::span<const TokenList> generations);

/// Vocabularies from the training records per the config.
Model model_for_corpus(const ModelConfig& cfg, const TrainConfig& train,
                       std::span<const CorpusRecord> records,
                       std::optional<EmbeddingProvider> precomputed = std::nullopt);

struct AblationRow {
  EncoderMode mode = EncoderMode::sem;
  /// Empty for modes without structure.
  std::vector<RelationKind> relations;
  std::size_t hops = 0;
  MetricsReport metrics;
  double best_valid_loss = 0.0;
};

struct AblationGrid {
  std::vector<EncoderMode> modes = {EncoderMode::sem, EncoderMode::sem_seq, EncoderMode::seq_gcn,
                                    EncoderMode::str_lstm, EncoderMode::par_gcn_lstm};
  std::vector<std::size_t> hops = {1, 2, 3};
  /// Defaults to every nonempty subset of the three relation kinds.
  std::vector<std::vector<RelationKind>> relation_subsets;
};

std::vector<std::vector<RelationKind>> all_relation_subsets();

/// Trains and evaluates one model per grid cell. Modes without structure
/// run once.
std::vector<AblationRow> run_ablation(const RunConfig& base, const AblationGrid& grid,
                                      std::span<const CorpusRecord> train,
                                      std::span<const CorpusRecord> valid,
                                      const std::function<void(const AblationRow&)>& on_row = {});

/// Markdown table: Model | Graphs | k | BLEU | ROUGE-1 | ROUGE-2 | ROUGE-L | EM.
void write_ablation_report(std::ostream& out, std::span<const AblationRow> rows);

}  // namespace sss

#endif  // SSS_TRAINER_HPP
