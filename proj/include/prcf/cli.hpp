#pragma once

#include "prcf/pipeline.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace prcf {

// Everything the command-line surface can configure. Numeric ranges are
// validated by the owning library types when the commands run.
struct RunConfig {
    std::string subcommand;

    // input
    std::string data_path;
    std::string target_column = "target";
    std::string positive_label = "+1";
    std::string delimiter = ",";

    // splitting (benchmark)
    double test_fraction = 0.3;
    bool stratified = true;

    // forest
    std::size_t n_trees = 100;
    std::size_t max_depth = 10;
    std::size_t min_leaf = 5;
    std::size_t n_features = 0;   // 0 resolves to floor(sqrt(feature count))

    // autoencoder
    bool use_ae = false;
    std::vector<std::size_t> ae_widths;   // empty resolves to the default taper
    std::size_t ae_epochs = 100;
    std::size_t ae_batch = 32;
    double ae_lr = 1e-3;
    double ae_quantile = 0.95;
    std::string ae_population = "majority";
    std::string ae_optimizer = "adam";

    // benchmark
    std::size_t repetitions = 100;
    std::string algorithms = "prc-rf,ae-prc-rf";

    // io
    std::string model_path;
    std::string out_path;
    std::size_t threads = 1;
    std::uint64_t seed = 0;
    int verbosity = 0;
};

// Commands return the process exit status: 0 exactly when the requested
// artifact was fully written (or, for inspect, the summary printed).
// Diagnostics go to err. Every command derives component randomness from
// config.seed alone: salt 0 feeds the autoencoder, salt 1 the forest, and
// the benchmark hands the seed to run_benchmark as the master seed.
int cmd_inspect(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_train(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_predict(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_filter(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_benchmark(const RunConfig& config, std::ostream& out, std::ostream& err);

// Full argv-level entry point (flag parsing, help, config files); main() is
// a thin wrapper around this so tests can drive the real surface.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace prcf
