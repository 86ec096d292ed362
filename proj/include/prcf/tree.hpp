#pragma once

#include "prcf/prc_core.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>

namespace prcf {

struct TreeParams {
    std::size_t max_depth = 10;          // root sits at depth 1
    std::size_t min_leaf_size = 5;       // splits creating a smaller child are rejected
    std::size_t n_features_per_split = 0; // 0 resolves to floor(sqrt(F)), at least 1
    std::uint64_t rng_seed = 0;
};

struct PRCTreeNode {
    double neg_fraction = 0.0;   // fraction of training rows at this node labeled -1
    double pos_fraction = 0.0;   // fraction labeled +1; the two sum to 1
    int label = +1;              // majority label, ties resolve to +1
    std::size_t n_rows = 0;      // training rows that reached this node
    std::size_t depth = 1;
    std::optional<SplitCandidate> split;
    std::unique_ptr<PRCTreeNode> left;   // rows with value <= threshold
    std::unique_ptr<PRCTreeNode> right;  // rows with value > threshold

    bool is_leaf() const { return !split.has_value(); }
};

struct TreePrediction {
    int label = +1;
    double positive_fraction = 0.0;   // pos_fraction of the reached leaf
};

struct PRCTree {
    PRCTreeNode root;
    TreeParams params;            // with n_features_per_split resolved
    std::size_t n_features = 0;   // expected input width
    std::size_t n_leaves = 0;
    std::vector<std::string> feature_names;   // captured from the training data
};

// Grows a tree on d restricted to feature_pool. Each split scores a random
// subset of n_features_per_split pool features by area under their PR curve
// (ties to the lowest index) and thresholds the winner at the curve entry
// with the best harmonic mean of recall and precision (ties to the smallest
// threshold). A node becomes a leaf when it is pure, its depth reaches
// max_depth, it has fewer than 2 * min_leaf_size rows, no candidate scores
// above zero, or the chosen threshold would starve a child.
//
// All randomness stems from params.rng_seed: the root stream seed is
// derive_seed(seed, 1), children derive theirs with salts 0 (left) and
// 1 (right), and each node draws its feature subset from a generator seeded
// with derive_seed(node_seed, 2). Tree shape is therefore a pure function of
// (data, pool, params).
PRCTree build_tree(const Dataset& d, const std::vector<std::size_t>& feature_pool,
                   const TreeParams& params);

// Routes x through split nodes (<= threshold goes left). Throws if x has the
// wrong width.
TreePrediction predict_tree(const PRCTree& tree, std::span<const double> x);

// Lossless text round-trip. Numbers use shortest round-trip formatting, so
// re-serializing the read model is byte-identical.
void write_tree(std::ostream& out, const PRCTree& tree);
PRCTree read_tree(std::istream& in);

} // namespace prcf
