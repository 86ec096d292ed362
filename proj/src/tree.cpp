#include "prcf/tree.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace prcf {
namespace {

std::size_t resolve_features_per_split(std::size_t requested, std::size_t pool_size) {
    if (requested == 0) {
        auto k = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(pool_size))));
        return std::max<std::size_t>(1, k);
    }
    return requested;
}

// Partial Fisher-Yates over a copy of the pool; result sorted ascending so
// downstream tie-breaking never depends on draw order.
std::vector<std::size_t> sample_features(const std::vector<std::size_t>& pool, std::size_t k,
                                         std::uint64_t seed) {
    if (k >= pool.size()) return pool;
    std::vector<std::size_t> scratch = pool;
    Rng rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(bounded(rng, scratch.size() - i));
        std::swap(scratch[i], scratch[j]);
    }
    scratch.resize(k);
    std::sort(scratch.begin(), scratch.end());
    return scratch;
}

struct BestFeature {
    std::size_t feature = 0;
    double auprc = 0.0;
    PRCurve curve;
};

// Scores candidates over the node's row subset; ascending candidate order
// plus strict improvement keeps the lowest index on ties.
std::optional<BestFeature> best_node_feature(const Dataset& d,
                                             const std::vector<std::uint32_t>& rows,
                                             const std::vector<std::size_t>& candidates,
                                             const std::vector<int>& node_labels) {
    std::vector<double> column(rows.size());
    std::optional<BestFeature> best;
    for (std::size_t f : candidates) {
        for (std::size_t i = 0; i < rows.size(); ++i) column[i] = d.features(rows[i], f);
        PRCurve curve = compute_pr_curve(column, node_labels);
        double area = auprc_recall_ordered(curve);
        if (area > 0.0 && (!best || area > best->auprc)) {
            best = BestFeature{f, area, std::move(curve)};
        }
    }
    return best;
}

struct TreeBuilder {
    const Dataset& d;
    const std::vector<std::size_t>& pool;
    const TreeParams& params;
    std::size_t n_leaves = 0;

    void build(PRCTreeNode& node, std::vector<std::uint32_t> rows, std::size_t depth,
               std::uint64_t node_seed) {
        const std::size_t n = rows.size();
        std::size_t pos = 0;
        for (std::uint32_t r : rows) pos += (d.labels[r] > 0);

        node.depth = depth;
        node.n_rows = n;
        node.pos_fraction = static_cast<double>(pos) / static_cast<double>(n);
        node.neg_fraction = static_cast<double>(n - pos) / static_cast<double>(n);
        node.label = (2 * pos >= n) ? +1 : -1;

        bool pure = (pos == 0 || pos == n);
        if (pure || depth >= params.max_depth || n < 2 * params.min_leaf_size) {
            ++n_leaves;
            return;
        }

        auto candidates = sample_features(pool, params.n_features_per_split,
                                          derive_seed(node_seed, 2));
        std::vector<int> node_labels(n);
        for (std::size_t i = 0; i < n; ++i) node_labels[i] = d.labels[rows[i]];
        auto best = best_node_feature(d, rows, candidates, node_labels);
        if (!best) {
            ++n_leaves;
            return;
        }
        auto [threshold, f1] = select_threshold(best->curve);

        std::vector<std::uint32_t> left_rows, right_rows;
        for (std::uint32_t r : rows)
            (d.features(r, best->feature) <= threshold ? left_rows : right_rows).push_back(r);
        if (left_rows.size() < params.min_leaf_size || right_rows.size() < params.min_leaf_size) {
            ++n_leaves;
            return;
        }

        node.split = SplitCandidate{best->feature, threshold, best->auprc, f1};
        rows.clear();
        rows.shrink_to_fit();
        node.left = std::make_unique<PRCTreeNode>();
        node.right = std::make_unique<PRCTreeNode>();
        build(*node.left, std::move(left_rows), depth + 1, derive_seed(node_seed, 0));
        build(*node.right, std::move(right_rows), depth + 1, derive_seed(node_seed, 1));
    }
};

} // namespace

PRCTree build_tree(const Dataset& d, const std::vector<std::size_t>& feature_pool,
                   const TreeParams& params) {
    if (d.n_rows() == 0)
        throw std::runtime_error("build_tree: empty dataset");
    if (feature_pool.empty())
        throw std::runtime_error("build_tree: empty feature pool");
    for (std::size_t f : feature_pool)
        if (f >= d.n_features())
            throw std::runtime_error("build_tree: pool feature index " + std::to_string(f) +
                                     " out of range");
    if (params.max_depth < 1)
        throw std::runtime_error("build_tree: max_depth must be at least 1");
    if (params.min_leaf_size < 1)
        throw std::runtime_error("build_tree: min_leaf_size must be at least 1");
    if (params.n_features_per_split > feature_pool.size())
        throw std::runtime_error("build_tree: n_features_per_split " +
                                 std::to_string(params.n_features_per_split) +
                                 " exceeds pool size " + std::to_string(feature_pool.size()));

    PRCTree tree;
    tree.params = params;
    tree.params.n_features_per_split =
        resolve_features_per_split(params.n_features_per_split, feature_pool.size());
    tree.n_features = d.n_features();
    tree.feature_names = d.feature_names;

    std::vector<std::uint32_t> rows(d.n_rows());
    for (std::size_t r = 0; r < d.n_rows(); ++r) rows[r] = static_cast<std::uint32_t>(r);

    TreeBuilder builder{d, feature_pool, tree.params};
    builder.build(tree.root, std::move(rows), 1, derive_seed(params.rng_seed, 1));
    tree.n_leaves = builder.n_leaves;
    return tree;
}

TreePrediction predict_tree(const PRCTree& tree, std::span<const double> x) {
    if (x.size() != tree.n_features)
        throw std::runtime_error("predict_tree: expected " + std::to_string(tree.n_features) +
                                 " features, got " + std::to_string(x.size()));
    const PRCTreeNode* node = &tree.root;
    while (!node->is_leaf())
        node = (x[node->split->feature_index] <= node->split->threshold) ? node->left.get()
                                                                         : node->right.get();
    return {node->label, node->pos_fraction};
}

namespace {

void write_node(std::ostream& out, const PRCTreeNode& node,
                const std::vector<std::string>& names) {
    out << "node " << node.depth << ' ' << node.n_rows << ' '
        << format_double(node.neg_fraction) << ' ' << format_double(node.pos_fraction) << ' '
        << node.label;
    if (node.is_leaf()) {
        out << " leaf\n";
        return;
    }
    out << " split " << node.split->feature_index << ' '
        << quote_string(names.at(node.split->feature_index)) << ' '
        << format_double(node.split->threshold) << ' ' << format_double(node.split->auprc) << ' '
        << format_double(node.split->f1) << '\n';
    write_node(out, *node.left, names);
    write_node(out, *node.right, names);
}

std::size_t count_nodes(const PRCTreeNode& node) {
    return node.is_leaf() ? 1 : 1 + count_nodes(*node.left) + count_nodes(*node.right);
}

[[noreturn]] void corrupt(const std::string& detail) {
    throw std::runtime_error("tree model corrupt: " + detail);
}

std::string next_line(std::istream& in, const std::string& expect) {
    std::string line;
    if (!std::getline(in, line)) corrupt("unexpected end of input, expected " + expect);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

void read_node(std::istream& in, PRCTreeNode& node, const std::vector<std::string>& names,
               std::size_t& seen, std::size_t limit) {
    if (++seen > limit) corrupt("more node lines than declared");
    std::istringstream ls(next_line(in, "a node line"));
    std::string tag, kind, neg, pos, threshold, auprc, f1;
    long long label = 0;
    ls >> tag >> node.depth >> node.n_rows >> neg >> pos >> label >> kind;
    if (!ls || tag != "node") corrupt("malformed node line");
    node.neg_fraction = parse_double(neg, "node neg_fraction");
    node.pos_fraction = parse_double(pos, "node pos_fraction");
    if (label != 1 && label != -1) corrupt("node label must be +1 or -1");
    node.label = static_cast<int>(label);
    if (std::abs(node.neg_fraction + node.pos_fraction - 1.0) > 1e-9)
        corrupt("node score components do not sum to 1");
    if (kind == "leaf") return;
    if (kind != "split") corrupt("node kind must be 'leaf' or 'split'");
    SplitCandidate split;
    ls >> split.feature_index;
    if (!ls) corrupt("malformed split fields");
    if (split.feature_index >= names.size()) corrupt("split feature index out of range");
    std::string name = read_quoted_string(ls, "split feature name");
    if (name != names[split.feature_index])
        corrupt("split feature name '" + name + "' disagrees with the feature table");
    ls >> threshold >> auprc >> f1;
    if (!ls) corrupt("malformed split fields");
    split.threshold = parse_double(threshold, "split threshold");
    split.auprc = parse_double(auprc, "split auprc");
    split.f1 = parse_double(f1, "split f1");
    node.split = split;
    node.left = std::make_unique<PRCTreeNode>();
    node.right = std::make_unique<PRCTreeNode>();
    read_node(in, *node.left, names, seen, limit);
    read_node(in, *node.right, names, seen, limit);
}

} // namespace

void write_tree(std::ostream& out, const PRCTree& tree) {
    if (tree.feature_names.size() != tree.n_features)
        throw std::runtime_error("write_tree: feature name count disagrees with n_features");
    out << "prcf_tree_v1\n";
    out << "params max_depth " << tree.params.max_depth << " min_leaf_size "
        << tree.params.min_leaf_size << " n_features_per_split "
        << tree.params.n_features_per_split << " rng_seed " << tree.params.rng_seed << '\n';
    out << "n_features " << tree.n_features << '\n';
    for (std::size_t f = 0; f < tree.n_features; ++f)
        out << "feature " << f << ' ' << quote_string(tree.feature_names[f]) << '\n';
    out << "n_leaves " << tree.n_leaves << '\n';
    out << "nodes " << count_nodes(tree.root) << '\n';
    write_node(out, tree.root, tree.feature_names);
    out << "end\n";
}

PRCTree read_tree(std::istream& in) {
    if (next_line(in, "header") != "prcf_tree_v1") corrupt("missing prcf_tree_v1 header");
    PRCTree tree;
    {
        std::istringstream ls(next_line(in, "params"));
        std::string t0, t1, t2, t3, t4;
        ls >> t0 >> t1 >> tree.params.max_depth >> t2 >> tree.params.min_leaf_size >> t3 >>
            tree.params.n_features_per_split >> t4 >> tree.params.rng_seed;
        if (!ls || t0 != "params") corrupt("malformed params line");
    }
    std::size_t declared_nodes = 0;
    {
        std::istringstream ls(next_line(in, "n_features"));
        std::string tag;
        ls >> tag >> tree.n_features;
        if (!ls || tag != "n_features") corrupt("malformed n_features line");
    }
    tree.feature_names.resize(tree.n_features);
    for (std::size_t f = 0; f < tree.n_features; ++f) {
        std::istringstream ls(next_line(in, "feature name"));
        std::string tag;
        std::size_t index = 0;
        ls >> tag >> index;
        if (!ls || tag != "feature" || index != f) corrupt("malformed feature line");
        tree.feature_names[f] = read_quoted_string(ls, "feature name");
    }
    {
        std::istringstream ls(next_line(in, "n_leaves"));
        std::string tag;
        ls >> tag >> tree.n_leaves;
        if (!ls || tag != "n_leaves") corrupt("malformed n_leaves line");
    }
    {
        std::istringstream ls(next_line(in, "nodes"));
        std::string tag;
        ls >> tag >> declared_nodes;
        if (!ls || tag != "nodes") corrupt("malformed nodes line");
    }
    std::size_t seen = 0;
    read_node(in, tree.root, tree.feature_names, seen, declared_nodes);
    if (seen != declared_nodes) corrupt("node count mismatch");
    if (next_line(in, "end") != "end") corrupt("missing end marker");
    return tree;
}

} // namespace prcf
