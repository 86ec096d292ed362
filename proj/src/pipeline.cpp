#include "prcf/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

namespace prcf {

const char* const kAlgorithmForest = "prc-rf";
const char* const kAlgorithmAEForest = "ae-prc-rf";

MetricSet compute_metrics(const std::vector<int>& predicted, const std::vector<int>& actual) {
    if (predicted.size() != actual.size())
        throw std::runtime_error("compute_metrics: predicted has " +
                                 std::to_string(predicted.size()) + " entries, actual has " +
                                 std::to_string(actual.size()));
    if (predicted.empty())
        throw std::runtime_error("compute_metrics: empty input");

    double tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        bool pred_pos = predicted[i] > 0;
        bool act_pos = actual[i] > 0;
        if (pred_pos && act_pos) ++tp;
        else if (pred_pos && !act_pos) ++fp;
        else if (!pred_pos && !act_pos) ++tn;
        else ++fn;
    }

    MetricSet m;
    auto ratio = [&m](double num, double den) {
        if (den == 0.0) {
            m.zero_division = true;
            return 0.0;
        }
        return num / den;
    };
    m.recall = ratio(tp, tp + fn);
    m.specificity = ratio(tn, tn + fp);
    m.precision = ratio(tp, tp + fp);
    m.accuracy = (tp + tn) / static_cast<double>(predicted.size());
    m.f1 = harmonic_mean(m.recall, m.precision);
    return m;
}

AEPipelineModel train_ae_prc_rf(const Dataset& d_train, const AEConfig& ae_config,
                                const ForestParams& forest_params, std::size_t n_threads) {
    AEPipelineModel result;
    result.autoencoder = ae_init(ae_config, d_train.n_features());
    result.report = ae_train(result.autoencoder, d_train);
    result.report.threshold = fit_threshold(result.autoencoder, d_train);
    FilterResult filtered = filter_dataset(result.autoencoder, d_train);
    result.flagged_rows = filtered.flagged_rows;
    result.report.flagged_rows = filtered.flagged_rows;
    result.forest = build_forest(filtered.kept, forest_params, n_threads);
    return result;
}

namespace {

std::vector<std::string> normalize_algorithms(const std::vector<std::string>& algorithms) {
    std::vector<std::string> out;
    for (const char* known : {kAlgorithmForest, kAlgorithmAEForest})
        if (std::find(algorithms.begin(), algorithms.end(), known) != algorithms.end())
            out.push_back(known);
    std::set<std::string> known(out.begin(), out.end());
    for (const auto& a : algorithms)
        if (!known.count(a))
            throw std::runtime_error("unknown algorithm '" + a + "' (expected " +
                                     std::string(kAlgorithmForest) + " or " + kAlgorithmAEForest +
                                     ")");
    if (out.empty())
        throw std::runtime_error("no algorithms requested");
    return out;
}

std::vector<int> predict_labels(const PRCForest& forest, const Dataset& d) {
    std::vector<int> labels(d.n_rows());
    for (std::size_t r = 0; r < d.n_rows(); ++r)
        labels[r] = predict_forest(forest, d.features.row(r)).label;
    return labels;
}

} // namespace

BenchmarkReport run_benchmark_with_trainer(const Dataset& d,
                                           const std::vector<std::string>& algorithms,
                                           std::size_t repetitions,
                                           const SplitSpec& split_template,
                                           const RepetitionTrainer& trainer) {
    if (repetitions == 0)
        throw std::runtime_error("run_benchmark: repetitions must be at least 1");

    BenchmarkReport report;
    report.dataset_name = d.name;
    report.summary = summarize(d);
    report.algorithms = normalize_algorithms(algorithms);
    report.master_seed = split_template.seed;
    report.repetitions_requested = repetitions;

    for (std::size_t r = 0; r < repetitions; ++r) {
        RepetitionResult rep;
        rep.repetition = r;
        rep.split_seed = derive_seed(report.master_seed, 2 * r);
        std::uint64_t model_seed = derive_seed(report.master_seed, 2 * r + 1);
        try {
            SplitSpec split = split_template;
            split.seed = rep.split_seed;
            auto [train, test] = train_test_split(d, split);
            rep.metrics = trainer(r, model_seed, train, test);
            report.repetitions.push_back(std::move(rep));
        } catch (const std::exception& e) {
            report.warnings.push_back("repetition " + std::to_string(r) +
                                      " failed and was excluded: " + e.what());
        }
    }

    std::size_t failures = repetitions - report.repetitions.size();
    if (failures * 10 > repetitions)
        throw std::runtime_error("benchmark aborted: " + std::to_string(failures) + " of " +
                                 std::to_string(repetitions) + " repetitions failed (" +
                                 (report.warnings.empty() ? std::string("no detail")
                                                          : report.warnings.front()) +
                                 ")");

    for (const auto& algorithm : report.algorithms) {
        MetricSet mean;
        for (const auto& rep : report.repetitions) {
            const MetricSet& m = rep.metrics.at(algorithm);
            mean.recall += m.recall;
            mean.specificity += m.specificity;
            mean.precision += m.precision;
            mean.accuracy += m.accuracy;
            mean.f1 += m.f1;
            mean.zero_division = mean.zero_division || m.zero_division;
        }
        auto n = static_cast<double>(report.repetitions.size());
        if (n > 0) {
            mean.recall /= n;
            mean.specificity /= n;
            mean.precision /= n;
            mean.accuracy /= n;
            mean.f1 /= n;
        }
        report.means[algorithm] = mean;
    }
    return report;
}

BenchmarkReport run_benchmark(const Dataset& d, const std::vector<std::string>& algorithms,
                              std::size_t repetitions, const SplitSpec& split_template,
                              const AEConfig& ae_config, const ForestParams& forest_params,
                              std::size_t n_threads) {
    auto algos = normalize_algorithms(algorithms);
    RepetitionTrainer trainer = [&](std::size_t, std::uint64_t model_seed, const Dataset& train,
                                    const Dataset& test) {
        std::map<std::string, MetricSet> metrics;
        for (const auto& algorithm : algos) {
            ForestParams fp = forest_params;
            fp.master_seed = derive_seed(model_seed, 1);
            PRCForest forest;
            if (algorithm == kAlgorithmAEForest) {
                AEConfig ac = ae_config;
                ac.seed = derive_seed(model_seed, 0);
                forest = train_ae_prc_rf(train, ac, fp, n_threads).forest;
            } else {
                forest = build_forest(train, fp, n_threads);
            }
            metrics[algorithm] = compute_metrics(predict_labels(forest, test), test.labels);
        }
        return metrics;
    };
    return run_benchmark_with_trainer(d, algos, repetitions, split_template, trainer);
}

namespace {

void write_metric_row(std::ostream& out, const std::string& label, const MetricSet& m,
                      const std::vector<std::size_t>& widths) {
    std::string cells[6] = {label, format_fixed(m.recall, 4), format_fixed(m.specificity, 4),
                            format_fixed(m.precision, 4), format_fixed(m.accuracy, 4),
                            format_fixed(m.f1, 4)};
    for (int c = 0; c < 6; ++c) {
        std::string cell = cells[c];
        if (cell.size() < widths[static_cast<std::size_t>(c)])
            cell.append(widths[static_cast<std::size_t>(c)] - cell.size(), ' ');
        out << cell << (c + 1 < 6 ? "  " : "");
    }
    out << '\n';
}

} // namespace

void write_benchmark_text(std::ostream& out, const BenchmarkReport& report) {
    out << "dataset " << report.dataset_name << "  observations " << report.summary.n_observations
        << "  minority_fraction " << format_fixed(report.summary.minority_fraction, 4)
        << "  features " << report.summary.n_features << '\n';
    out << "repetitions " << report.repetitions.size() << " of " << report.repetitions_requested
        << "  master_seed " << report.master_seed << '\n';
    out << '\n';

    std::vector<std::size_t> widths = {10, 7, 11, 9, 8, 8};
    for (const auto& a : report.algorithms) widths[0] = std::max(widths[0], a.size());
    const char* headers[6] = {"algorithm", "recall", "specificity", "precision", "accuracy",
                              "f1_score"};
    for (int c = 0; c < 6; ++c) {
        std::string cell = headers[c];
        if (cell.size() < widths[static_cast<std::size_t>(c)])
            cell.append(widths[static_cast<std::size_t>(c)] - cell.size(), ' ');
        out << cell << (c + 1 < 6 ? "  " : "");
    }
    out << '\n';
    for (const auto& algorithm : report.algorithms)
        write_metric_row(out, algorithm, report.means.at(algorithm), widths);

    bool any_zero_division = false;
    for (const auto& [name, mean] : report.means) any_zero_division |= mean.zero_division;
    if (any_zero_division)
        out << "\nnote: at least one repetition hit a 0/0 metric ratio, reported as 0\n";
    if (!report.warnings.empty()) {
        out << '\n';
        for (const auto& w : report.warnings) out << "warning: " << w << '\n';
    }
}

void write_benchmark_csv(std::ostream& out, const BenchmarkReport& report) {
    out << "algorithm,repetition,recall,specificity,precision,accuracy,f1,seed\n";
    for (const auto& rep : report.repetitions) {
        for (const auto& algorithm : report.algorithms) {
            const MetricSet& m = rep.metrics.at(algorithm);
            out << algorithm << ',' << rep.repetition << ',' << format_double(m.recall) << ','
                << format_double(m.specificity) << ',' << format_double(m.precision) << ','
                << format_double(m.accuracy) << ',' << format_double(m.f1) << ','
                << rep.split_seed << '\n';
        }
    }
    for (const auto& algorithm : report.algorithms) {
        const MetricSet& m = report.means.at(algorithm);
        out << algorithm << ",mean," << format_double(m.recall) << ','
            << format_double(m.specificity) << ',' << format_double(m.precision) << ','
            << format_double(m.accuracy) << ',' << format_double(m.f1) << ','
            << report.master_seed << '\n';
    }
}

} // namespace prcf
