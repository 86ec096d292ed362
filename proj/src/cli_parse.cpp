#include "prcf/cli.hpp"

#include <CLI11.hpp>

#include <ostream>

namespace prcf {
namespace {

void add_input_flags(CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--data", c.data_path, "Input CSV file")->required();
    cmd->add_option("--target", c.target_column, "Name of the label column")
        ->capture_default_str();
    cmd->add_option("--positive-label", c.positive_label,
                    "Label value mapped to the positive class (+1)")
        ->capture_default_str();
    cmd->add_option("--delimiter", c.delimiter, "Field delimiter (single character)")
        ->capture_default_str();
}

void add_forest_flags(CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--n-trees", c.n_trees, "Number of trees in the forest")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-depth", c.max_depth, "Maximum tree depth (root has depth 1)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--min-leaf", c.min_leaf, "Minimum rows per leaf")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--n-features", c.n_features,
                    "Features drawn per split; 0 means floor(sqrt(total features))")
        ->capture_default_str();
}

void add_ae_flags(CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--ae-widths", c.ae_widths,
                    "Encoder widths from input to bottleneck, comma separated "
                    "(default: input, half, quarter)")
        ->delimiter(',');
    cmd->add_option("--ae-epochs", c.ae_epochs, "Autoencoder training epochs")
        ->capture_default_str();
    cmd->add_option("--ae-lr", c.ae_lr, "Autoencoder learning rate")
        ->capture_default_str();
    cmd->add_option("--ae-batch", c.ae_batch, "Autoencoder mini-batch size")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--ae-quantile", c.ae_quantile,
                    "Reconstruction-error quantile used as the filter threshold")
        ->capture_default_str();
    cmd->add_option("--ae-population", c.ae_population,
                    "Rows the filter is fitted on: all or majority")
        ->capture_default_str()
        ->check(CLI::IsMember({"all", "majority"}));
    cmd->add_option("--ae-optimizer", c.ae_optimizer, "Optimizer: sgd or adam")
        ->capture_default_str()
        ->check(CLI::IsMember({"sgd", "adam"}));
}

void add_run_flags(CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--seed", c.seed,
                    "Master random seed; every random choice derives from it")
        ->capture_default_str();
    cmd->add_option("--threads", c.threads, "Worker threads for tree building")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_flag("-v,--verbose", c.verbosity, "Increase output detail");
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Precision-recall-curve random forests with an autoencoder "
                 "outlier filter"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "Read option defaults from an INI-style file whose sections "
                   "name subcommands (e.g. [train]); command-line flags "
                   "override it");

    CLI::App* inspect = app.add_subcommand(
        "inspect", "Print a one-line dataset summary");
    add_input_flags(inspect, c);

    CLI::App* train = app.add_subcommand(
        "train", "Train a forest (optionally behind the autoencoder filter) "
                 "and write it to --out");
    add_input_flags(train, c);
    add_forest_flags(train, c);
    train->add_flag("--ae", c.use_ae,
                    "Filter training rows with the autoencoder first");
    add_ae_flags(train, c);
    train->add_option("--out", c.out_path, "Path for the serialized model")
        ->required();
    add_run_flags(train, c);

    CLI::App* predict = app.add_subcommand(
        "predict", "Score a feature CSV with a saved model");
    predict->add_option("--model", c.model_path, "Serialized forest to load")
        ->required();
    predict->add_option("--data", c.data_path, "Feature CSV file")->required();
    predict->add_option("--target", c.target_column,
                        "Label column to ignore if present in the file")
        ->capture_default_str();
    predict->add_option("--delimiter", c.delimiter,
                        "Field delimiter (single character)")
        ->capture_default_str();
    predict->add_option("--out", c.out_path, "Path for the prediction CSV")
        ->required();

    CLI::App* filter = app.add_subcommand(
        "filter", "Drop high-reconstruction-error rows and write the cleaned CSV");
    add_input_flags(filter, c);
    add_ae_flags(filter, c);
    filter->add_option("--out", c.out_path, "Path for the cleaned CSV")
        ->required();
    add_run_flags(filter, c);

    CLI::App* benchmark = app.add_subcommand(
        "benchmark", "Repeated-split evaluation; writes a text report and a CSV");
    add_input_flags(benchmark, c);
    add_forest_flags(benchmark, c);
    add_ae_flags(benchmark, c);
    benchmark->add_option("--repetitions", c.repetitions,
                          "Number of train/test repetitions")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    benchmark->add_option("--algorithms", c.algorithms,
                          "Comma-separated algorithms to run (prc-rf, ae-prc-rf)")
        ->capture_default_str();
    benchmark->add_option("--test-fraction", c.test_fraction,
                          "Fraction of rows held out per repetition")
        ->capture_default_str();
    benchmark->add_flag_callback(
        "--no-stratified", [&c]() { c.stratified = false; },
        "Split without preserving class proportions");
    benchmark->add_option("--out", c.out_path, "Path for the text report; the "
                          "CSV lands next to it with a .csv suffix")
        ->required();
    add_run_flags(benchmark, c);

    // Top-level options (--config) stay reachable after the subcommand name.
    for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    if (inspect->parsed()) {
        c.subcommand = "inspect";
        return cmd_inspect(c, out, err);
    }
    if (train->parsed()) {
        c.subcommand = "train";
        return cmd_train(c, out, err);
    }
    if (predict->parsed()) {
        c.subcommand = "predict";
        return cmd_predict(c, out, err);
    }
    if (filter->parsed()) {
        c.subcommand = "filter";
        return cmd_filter(c, out, err);
    }
    c.subcommand = "benchmark";
    return cmd_benchmark(c, out, err);
}

} // namespace prcf
