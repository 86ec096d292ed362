#include "prcf/forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace prcf {
namespace {

constexpr std::uint64_t kBootstrapSaltBase = 0x100;
constexpr std::size_t kMaxBootstrapAttempts = 10;

Dataset draw_training_sample(const Dataset& d, std::uint64_t tree_base, std::size_t tree_index) {
    for (std::size_t attempt = 0; attempt < kMaxBootstrapAttempts; ++attempt) {
        Dataset sample = bootstrap_sample(d, derive_seed(tree_base, kBootstrapSaltBase + attempt));
        std::size_t pos = sample.count_label(+1);
        if (pos > 0 && pos < sample.n_rows()) return sample;
    }
    throw std::runtime_error("build_forest: tree " + std::to_string(tree_index) + " drew " +
                             std::to_string(kMaxBootstrapAttempts) +
                             " single-class bootstrap samples; the dataset is too imbalanced "
                             "for bagging at this size");
}

void accumulate_importance(const PRCTreeNode& node, double root_rows,
                           std::vector<double>& weights) {
    if (node.is_leaf()) return;
    weights[node.split->feature_index] +=
        (static_cast<double>(node.n_rows) / root_rows) * node.split->auprc;
    accumulate_importance(*node.left, root_rows, weights);
    accumulate_importance(*node.right, root_rows, weights);
}

std::string next_line(std::istream& in, const std::string& expect) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("forest model corrupt: unexpected end of input, expected " +
                                 expect);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

} // namespace

PRCForest build_forest(const Dataset& d, const ForestParams& params, std::size_t n_threads) {
    if (params.n_trees == 0)
        throw std::runtime_error("build_forest: n_trees must be at least 1");
    if (d.n_rows() == 0)
        throw std::runtime_error("build_forest: empty dataset");
    if (d.count_label(+1) == 0 || d.count_label(+1) == d.n_rows())
        throw std::runtime_error("build_forest: training data has a single class");

    PRCForest forest;
    forest.params = params;
    forest.feature_names = d.feature_names;
    if (params.tree_params.n_features_per_split == 0) {
        auto k = static_cast<std::size_t>(
            std::floor(std::sqrt(static_cast<double>(d.n_features()))));
        forest.params.tree_params.n_features_per_split = std::max<std::size_t>(1, k);
    }
    if (forest.params.tree_params.n_features_per_split > d.n_features())
        throw std::runtime_error("build_forest: n_features_per_split " +
                                 std::to_string(forest.params.tree_params.n_features_per_split) +
                                 " exceeds the " + std::to_string(d.n_features()) +
                                 " available features");

    std::vector<std::size_t> pool(d.n_features());
    for (std::size_t f = 0; f < d.n_features(); ++f) pool[f] = f;

    forest.trees.resize(params.n_trees);
    parallel_for(params.n_trees, n_threads, [&](std::size_t j) {
        std::uint64_t tree_base = derive_seed(params.master_seed, j);
        Dataset sample = draw_training_sample(d, tree_base, j);
        TreeParams tp = forest.params.tree_params;
        tp.rng_seed = derive_seed(tree_base, 0);
        forest.trees[j] = build_tree(sample, pool, tp);
    });
    return forest;
}

ForestPrediction predict_forest(const PRCForest& forest, std::span<const double> x) {
    if (forest.trees.empty())
        throw std::runtime_error("predict_forest: forest has no trees");
    std::size_t positive_votes = 0;
    for (const auto& tree : forest.trees)
        positive_votes += (predict_tree(tree, x).label > 0);
    ForestPrediction p;
    p.positive_vote_fraction =
        static_cast<double>(positive_votes) / static_cast<double>(forest.trees.size());
    p.label = (2 * positive_votes >= forest.trees.size()) ? +1 : -1;
    return p;
}

std::map<std::string, double> feature_importance(const PRCForest& forest) {
    std::vector<double> weights(forest.feature_names.size(), 0.0);
    for (const auto& tree : forest.trees)
        accumulate_importance(tree.root, static_cast<double>(tree.root.n_rows), weights);
    double total = 0.0;
    for (double w : weights) total += w;
    std::map<std::string, double> importance;
    for (std::size_t f = 0; f < forest.feature_names.size(); ++f)
        importance[forest.feature_names[f]] = total > 0.0 ? weights[f] / total : 0.0;
    return importance;
}

void write_forest(std::ostream& out, const PRCForest& forest) {
    out << "prcf_forest_v1\n";
    out << "n_trees " << forest.trees.size() << " n_features " << forest.feature_names.size()
        << " master_seed " << forest.params.master_seed << '\n';
    out << "tree_params max_depth " << forest.params.tree_params.max_depth << " min_leaf_size "
        << forest.params.tree_params.min_leaf_size << " n_features_per_split "
        << forest.params.tree_params.n_features_per_split << '\n';
    for (std::size_t f = 0; f < forest.feature_names.size(); ++f)
        out << "feature " << f << ' ' << quote_string(forest.feature_names[f]) << '\n';
    for (std::size_t j = 0; j < forest.trees.size(); ++j) {
        out << "tree " << j << '\n';
        write_tree(out, forest.trees[j]);
    }
    out << "end_forest\n";
}

PRCForest read_forest(std::istream& in) {
    if (next_line(in, "header") != "prcf_forest_v1")
        throw std::runtime_error("forest model corrupt: missing prcf_forest_v1 header");
    PRCForest forest;
    std::size_t n_trees = 0, n_features = 0;
    {
        std::istringstream ls(next_line(in, "counts"));
        std::string t0, t1, t2;
        ls >> t0 >> n_trees >> t1 >> n_features >> t2 >> forest.params.master_seed;
        if (!ls || t0 != "n_trees" || t1 != "n_features" || t2 != "master_seed")
            throw std::runtime_error("forest model corrupt: malformed counts line");
    }
    {
        std::istringstream ls(next_line(in, "tree_params"));
        std::string t0, t1, t2, t3;
        ls >> t0 >> t1 >> forest.params.tree_params.max_depth >> t2 >>
            forest.params.tree_params.min_leaf_size >> t3 >>
            forest.params.tree_params.n_features_per_split;
        if (!ls || t0 != "tree_params")
            throw std::runtime_error("forest model corrupt: malformed tree_params line");
    }
    forest.params.n_trees = n_trees;
    forest.feature_names.resize(n_features);
    for (std::size_t f = 0; f < n_features; ++f) {
        std::istringstream ls(next_line(in, "feature name"));
        std::string tag;
        std::size_t index = 0;
        ls >> tag >> index;
        if (!ls || tag != "feature" || index != f)
            throw std::runtime_error("forest model corrupt: malformed feature line " +
                                     std::to_string(f));
        forest.feature_names[f] = read_quoted_string(ls, "feature name");
    }
    forest.trees.reserve(n_trees);
    for (std::size_t j = 0; j < n_trees; ++j) {
        std::istringstream ls(next_line(in, "tree marker"));
        std::string tag;
        std::size_t index = 0;
        ls >> tag >> index;
        if (!ls || tag != "tree" || index != j)
            throw std::runtime_error("forest model corrupt: malformed tree marker " +
                                     std::to_string(j));
        forest.trees.push_back(read_tree(in));
        if (forest.trees.back().n_features != n_features ||
            forest.trees.back().feature_names != forest.feature_names)
            throw std::runtime_error("forest model corrupt: tree " + std::to_string(j) +
                                     " disagrees with the forest feature table");
    }
    if (next_line(in, "end_forest") != "end_forest")
        throw std::runtime_error("forest model corrupt: missing end_forest marker");
    return forest;
}

void save_forest(const PRCForest& forest, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write file '" + path + "'");
    write_forest(out, forest);
    if (!out)
        throw std::runtime_error("write failed for '" + path + "'");
}

PRCForest load_forest(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open file '" + path + "'");
    return read_forest(in);
}

} // namespace prcf
