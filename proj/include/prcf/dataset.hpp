#pragma once

#include "prcf/common.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace prcf {

// Labeled tabular dataset. Labels are +1 (positive / event class) and -1.
struct Dataset {
    std::string name;
    std::vector<std::string> feature_names;
    Matrix features;            // n_rows x n_features
    std::vector<int> labels;    // one of {-1, +1} per row

    std::size_t n_rows() const { return features.rows(); }
    std::size_t n_features() const { return features.cols(); }
    std::size_t count_label(int label) const;
};

struct DatasetSummary {
    std::size_t n_observations = 0;
    double minority_fraction = 0.0;   // min(class counts) / n, always <= 0.5
    std::size_t n_features = 0;
};

// Per-column affine rescaling captured from a reference population.
struct MinMaxTable {
    std::vector<double> min;
    std::vector<double> max;
};

struct SplitSpec {
    double test_fraction = 0.3;   // in (0, 1)
    std::uint64_t seed = 0;
    bool stratified = true;
};

// Parses a delimited text file with a header row. Every non-target cell must
// be a finite number; the target cell equal to positive_label maps to +1,
// anything else to -1. Throws std::runtime_error with row/column context on
// malformed input, a missing target column, fewer than 2 data rows, or a
// single-class target.
Dataset load_csv(const std::string& path,
                 const std::string& target_column,
                 const std::string& positive_label,
                 char delimiter = ',',
                 const std::string& dataset_name = "");

// Feature-only variant: no target column is extracted. Used for prediction
// inputs. Requires at least 1 data row. A column named skip_column (if
// non-empty and present) is dropped before parsing, so labeled files can be
// read as feature tables.
std::pair<std::vector<std::string>, Matrix> load_feature_csv(const std::string& path,
                                                             char delimiter = ',',
                                                             const std::string& skip_column = "");

// Writes the dataset back out as CSV with labels rendered as +1 / -1 in a
// final column named target_column.
void save_csv(const Dataset& d, const std::string& path,
              const std::string& target_column = "target", char delimiter = ',');

DatasetSummary summarize(const Dataset& d);

// Rescales every column to [0, 1] by (x - min) / (max - min); constant
// columns map to 0. Returns the rescaled dataset and the captured table.
std::pair<Dataset, MinMaxTable> normalize_minmax(const Dataset& d);

// Applies a previously captured table; rows outside the captured range
// produce values outside [0, 1], which downstream consumers accept.
Matrix apply_minmax(const Matrix& features, const MinMaxTable& table);

// Deterministic random train/test partition. Stratified mode splits each
// class separately so both partitions keep both classes; throws if either
// partition (or either class within a stratified partition) would be empty.
std::pair<Dataset, Dataset> train_test_split(const Dataset& d, const SplitSpec& spec);

// Rows drawn with replacement, same size as the input, in draw order.
Dataset bootstrap_sample(const Dataset& d, std::uint64_t seed);

// Row subset in the given order. Indices must be in range.
Dataset take_rows(const Dataset& d, const std::vector<std::size_t>& indices);

} // namespace prcf
