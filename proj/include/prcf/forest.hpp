#pragma once

#include "prcf/tree.hpp"

#include <map>
#include <string>

namespace prcf {

struct ForestParams {
    std::size_t n_trees = 100;
    TreeParams tree_params;        // rng_seed ignored; per-tree seeds are derived
    std::uint64_t master_seed = 0;
};

struct ForestPrediction {
    int label = +1;                     // +1 iff positive_vote_fraction >= 0.5
    double positive_vote_fraction = 0.0;
};

struct PRCForest {
    std::vector<PRCTree> trees;
    ForestParams params;                 // with n_features_per_split resolved
    std::vector<std::string> feature_names;
};

// Bags n_trees trees, each on a bootstrap resample of d over the full
// feature set. Tree j derives its stream base as derive_seed(master_seed, j);
// its bootstrap uses salts 0x100 + attempt and its growth seed salt 0.
// Single-class bootstraps are redrawn with the next attempt salt, at most 10
// tries before the build fails. n_threads only distributes tree construction;
// results are keyed by tree index, so the model is independent of thread
// count and schedule.
PRCForest build_forest(const Dataset& d, const ForestParams& params, std::size_t n_threads = 1);

// Unweighted majority vote over the trees, ties to +1.
ForestPrediction predict_forest(const PRCForest& forest, std::span<const double> x);

// Per-feature sum over all split nodes of (node rows / root rows) * split
// auprc, normalized so the values add up to 1. Every feature appears in the
// map; a forest with no splits yields all zeros.
std::map<std::string, double> feature_importance(const PRCForest& forest);

// Lossless text round-trip; byte-identical on re-serialization.
void write_forest(std::ostream& out, const PRCForest& forest);
PRCForest read_forest(std::istream& in);

void save_forest(const PRCForest& forest, const std::string& path);
PRCForest load_forest(const std::string& path);

} // namespace prcf
