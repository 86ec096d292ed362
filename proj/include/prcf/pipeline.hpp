#pragma once

#include "prcf/autoencoder.hpp"
#include "prcf/forest.hpp"

#include <functional>
#include <iosfwd>
#include <map>

namespace prcf {

// Confusion-matrix metrics with +1 as the positive class. Any 0/0 ratio is
// defined as 0 and sets zero_division so reports can flag the condition.
struct MetricSet {
    double recall = 0.0;
    double specificity = 0.0;
    double precision = 0.0;
    double accuracy = 0.0;
    double f1 = 0.0;
    bool zero_division = false;
};

MetricSet compute_metrics(const std::vector<int>& predicted, const std::vector<int>& actual);

// Everything the composed filter-then-forest training run produces.
struct AEPipelineModel {
    AutoencoderModel autoencoder;
    PRCForest forest;
    std::vector<std::size_t> flagged_rows;   // indices into d_train
    AETrainReport report;                    // with threshold and flags filled in
};

// Initializes and trains the reconstruction filter on d_train, fits the
// error threshold, drops flagged rows, and bags a forest on the survivors.
// Seeds are taken from ae_config.seed and forest_params.master_seed as given.
AEPipelineModel train_ae_prc_rf(const Dataset& d_train, const AEConfig& ae_config,
                                const ForestParams& forest_params, std::size_t n_threads = 1);

// Algorithm tags accepted by the benchmark.
extern const char* const kAlgorithmForest;      // "prc-rf"
extern const char* const kAlgorithmAEForest;    // "ae-prc-rf"

struct RepetitionResult {
    std::size_t repetition = 0;     // 0-based
    std::uint64_t split_seed = 0;
    std::map<std::string, MetricSet> metrics;   // per algorithm
};

struct BenchmarkReport {
    std::string dataset_name;
    DatasetSummary summary;
    std::vector<std::string> algorithms;
    std::uint64_t master_seed = 0;
    std::size_t repetitions_requested = 0;
    std::vector<RepetitionResult> repetitions;  // completed repetitions only
    std::map<std::string, MetricSet> means;     // arithmetic means per algorithm
    std::vector<std::string> warnings;          // one entry per excluded repetition
};

// Repeated-split evaluation protocol: repetition r splits d with seed
// derive_seed(master, 2r) (master = split_template.seed) and trains every
// algorithm on the identical training partition; model streams come from
// derive_seed(master, 2r + 1), split further into salt 0 (autoencoder) and
// salt 1 (forest). A repetition whose training throws is excluded with a
// warning; more than 10% failures abort the run.
BenchmarkReport run_benchmark(const Dataset& d, const std::vector<std::string>& algorithms,
                              std::size_t repetitions, const SplitSpec& split_template,
                              const AEConfig& ae_config, const ForestParams& forest_params,
                              std::size_t n_threads = 1);

// Test seam: identical protocol, but the per-repetition trainer is supplied
// by the caller. The production trainer trains and evaluates both
// algorithms; tests substitute failing trainers to exercise the exclusion
// policy deterministically.
using RepetitionTrainer = std::function<std::map<std::string, MetricSet>(
    std::size_t repetition, std::uint64_t model_seed, const Dataset& train, const Dataset& test)>;
BenchmarkReport run_benchmark_with_trainer(const Dataset& d,
                                           const std::vector<std::string>& algorithms,
                                           std::size_t repetitions,
                                           const SplitSpec& split_template,
                                           const RepetitionTrainer& trainer);

// Human-readable aligned table (metrics at 4 decimal places) and delimited
// records (algorithm, repetition, five metrics, seed); mean rows use the
// literal repetition tag "mean".
void write_benchmark_text(std::ostream& out, const BenchmarkReport& report);
void write_benchmark_csv(std::ostream& out, const BenchmarkReport& report);

} // namespace prcf
