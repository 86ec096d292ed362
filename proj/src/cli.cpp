#include "prcf/cli.hpp"

#include "prcf/autoencoder.hpp"
#include "prcf/dataset.hpp"
#include "prcf/forest.hpp"
#include "prcf/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace prcf {
namespace {

char delimiter_char(const RunConfig& config) {
    if (config.delimiter.size() != 1)
        throw std::runtime_error("--delimiter must be a single character, got '" +
                                 config.delimiter + "'");
    return config.delimiter[0];
}

Dataset load_input(const RunConfig& config) {
    if (config.data_path.empty())
        throw std::runtime_error("--data is required");
    return load_csv(config.data_path, config.target_column, config.positive_label,
                    delimiter_char(config));
}

void require_out(const RunConfig& config) {
    if (config.out_path.empty())
        throw std::runtime_error("--out is required");
}

ForestParams forest_params_from(const RunConfig& config) {
    ForestParams fp;
    fp.n_trees = config.n_trees;
    fp.tree_params.max_depth = config.max_depth;
    fp.tree_params.min_leaf_size = config.min_leaf;
    fp.tree_params.n_features_per_split = config.n_features;
    fp.master_seed = derive_seed(config.seed, 1);
    return fp;
}

AEConfig ae_config_from(const RunConfig& config) {
    AEConfig ae;
    ae.layer_widths = config.ae_widths;
    ae.epochs = config.ae_epochs;
    ae.batch_size = config.ae_batch;
    ae.learning_rate = config.ae_lr;
    ae.filter_quantile = config.ae_quantile;
    ae.optimizer = optimizer_from_string(config.ae_optimizer);
    ae.training_population = population_from_string(config.ae_population);
    ae.seed = derive_seed(config.seed, 0);
    return ae;
}

// Writes content through a closed-and-checked stream so exit status 0 really
// means the artifact landed on disk.
void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    f << content;
    f.close();
    if (!f)
        throw std::runtime_error("failed writing '" + path + "'");
}

int guarded(const RunConfig& config, std::ostream& out, std::ostream& err,
            int (*body)(const RunConfig&, std::ostream&, std::ostream&)) {
    try {
        return body(config, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int inspect_body(const RunConfig& config, std::ostream& out, std::ostream&) {
    const Dataset d = load_input(config);
    const DatasetSummary s = summarize(d);
    out << "dataset " << d.name << " observations " << s.n_observations
        << " minority_fraction " << format_fixed(s.minority_fraction, 4)
        << " features " << s.n_features << "\n";
    return 0;
}

int train_body(const RunConfig& config, std::ostream& out, std::ostream&) {
    require_out(config);
    const Dataset d = load_input(config);
    const ForestParams fp = forest_params_from(config);

    if (config.use_ae) {
        const AEPipelineModel model =
            train_ae_prc_rf(d, ae_config_from(config), fp, config.threads);
        out << "autoencoder filter: threshold "
            << format_double(model.autoencoder.threshold) << " flagged "
            << model.flagged_rows.size() << " of " << d.n_rows() << " rows\n";
        const std::string ae_path = config.out_path + ".ae";
        save_autoencoder(model.autoencoder, ae_path);
        save_forest(model.forest, config.out_path);
        out << "trained " << kAlgorithmAEForest << ": trees "
            << model.forest.params.n_trees << " features " << d.n_features()
            << " training_rows " << (d.n_rows() - model.flagged_rows.size()) << "\n";
        out << "autoencoder written: " << ae_path << "\n";
    } else {
        const PRCForest forest = build_forest(d, fp, config.threads);
        save_forest(forest, config.out_path);
        out << "trained " << kAlgorithmForest << ": trees " << forest.params.n_trees
            << " features " << d.n_features() << "\n";
    }
    out << "model written: " << config.out_path << "\n";
    return 0;
}

// Reorders the file's columns to the model's feature order. A column named
// target_column that the model does not use is skipped, so labeled files can
// be fed to predict directly. Any other name mismatch is a schema error.
Matrix align_features(const std::vector<std::string>& file_names,
                      const Matrix& file_values,
                      const std::vector<std::string>& model_names,
                      const std::string& target_column) {
    const bool model_uses_target =
        std::find(model_names.begin(), model_names.end(), target_column) !=
        model_names.end();

    std::vector<std::size_t> source(model_names.size());
    std::vector<bool> used(file_names.size(), false);
    for (std::size_t m = 0; m < model_names.size(); ++m) {
        auto it = std::find(file_names.begin(), file_names.end(), model_names[m]);
        if (it == file_names.end())
            throw std::runtime_error("feature file is missing column '" +
                                     model_names[m] + "' required by the model");
        source[m] = static_cast<std::size_t>(it - file_names.begin());
        used[source[m]] = true;
    }
    std::size_t extra = 0;
    std::string extra_name;
    for (std::size_t c = 0; c < file_names.size(); ++c) {
        if (used[c])
            continue;
        if (!model_uses_target && file_names[c] == target_column)
            continue;   // label column riding along with a feature file
        ++extra;
        extra_name = file_names[c];
    }
    if (extra > 0)
        throw std::runtime_error(
            "feature file has " + std::to_string(extra) +
            " column(s) unknown to the model, e.g. '" + extra_name + "'");

    Matrix aligned(file_values.rows(), model_names.size());
    for (std::size_t r = 0; r < file_values.rows(); ++r)
        for (std::size_t m = 0; m < model_names.size(); ++m)
            aligned(r, m) = file_values(r, source[m]);
    return aligned;
}

int predict_body(const RunConfig& config, std::ostream& out, std::ostream&) {
    require_out(config);
    if (config.model_path.empty())
        throw std::runtime_error("--model is required");
    if (config.data_path.empty())
        throw std::runtime_error("--data is required");

    const PRCForest forest = load_forest(config.model_path);
    const bool model_uses_target =
        std::find(forest.feature_names.begin(), forest.feature_names.end(),
                  config.target_column) != forest.feature_names.end();
    const auto [file_names, file_values] =
        load_feature_csv(config.data_path, delimiter_char(config),
                         model_uses_target ? std::string() : config.target_column);
    const Matrix aligned =
        align_features(file_names, file_values, forest.feature_names,
                       config.target_column);

    std::ostringstream body;
    body << "row,predicted_label,positive_vote_fraction\n";
    for (std::size_t i = 0; i < aligned.rows(); ++i) {
        const ForestPrediction p = predict_forest(forest, aligned.row(i));
        body << i << ',' << p.label << ','
             << format_fixed(p.positive_vote_fraction, 6) << '\n';
    }
    write_file(config.out_path, body.str());
    out << "predictions written: " << config.out_path << " rows " << aligned.rows()
        << "\n";
    return 0;
}

int filter_body(const RunConfig& config, std::ostream& out, std::ostream&) {
    require_out(config);
    const Dataset d = load_input(config);

    AutoencoderModel model = ae_init(ae_config_from(config), d.n_features());
    ae_train(model, d);
    fit_threshold(model, d);
    const FilterResult result = filter_dataset(model, d);

    save_csv(result.kept, config.out_path, config.target_column,
             delimiter_char(config));
    std::ostringstream flagged;
    for (std::size_t idx : result.flagged_rows)
        flagged << idx << '\n';
    const std::string flagged_path = config.out_path + ".flagged";
    write_file(flagged_path, flagged.str());

    out << "flagged " << result.flagged_rows.size() << " of " << d.n_rows()
        << " rows; threshold " << format_double(model.threshold) << "\n";
    out << "cleaned dataset written: " << config.out_path << "\n";
    out << "flagged indices written: " << flagged_path << "\n";
    return 0;
}

std::vector<std::string> split_algorithms(const std::string& spec) {
    std::vector<std::string> names;
    std::string current;
    std::istringstream in(spec);
    while (std::getline(in, current, ','))
        if (!current.empty())
            names.push_back(current);
    if (names.empty())
        throw std::runtime_error("--algorithms must name at least one algorithm");
    return names;
}

int benchmark_body(const RunConfig& config, std::ostream& out, std::ostream& err) {
    require_out(config);
    const Dataset d = load_input(config);

    SplitSpec split;
    split.test_fraction = config.test_fraction;
    split.stratified = config.stratified;
    split.seed = config.seed;   // run_benchmark re-derives per repetition

    const BenchmarkReport report = run_benchmark(
        d, split_algorithms(config.algorithms), config.repetitions, split,
        ae_config_from(config), forest_params_from(config), config.threads);

    for (const std::string& w : report.warnings)
        err << "warning: " << w << "\n";

    std::ostringstream text;
    write_benchmark_text(text, report);
    write_file(config.out_path, text.str());

    std::ostringstream csv;
    write_benchmark_csv(csv, report);
    write_file(config.out_path + ".csv", csv.str());

    out << text.str();
    out << "report written: " << config.out_path << "\n";
    out << "csv written: " << config.out_path << ".csv\n";
    return 0;
}

} // namespace

int cmd_inspect(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(config, out, err, inspect_body);
}

int cmd_train(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(config, out, err, train_body);
}

int cmd_predict(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(config, out, err, predict_body);
}

int cmd_filter(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(config, out, err, filter_body);
}

int cmd_benchmark(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(config, out, err, benchmark_body);
}

} // namespace prcf
