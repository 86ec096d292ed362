#include "prcf/synthetic.hpp"

namespace prcf {
namespace {

std::vector<std::string> numbered_names(std::size_t n) {
    std::vector<std::string> names(n);
    for (std::size_t f = 0; f < n; ++f) names[f] = "x" + std::to_string(f + 1);
    return names;
}

// Exact-count positive assignment: a seeded shuffle of the row indices takes
// the first n_positive rows as the +1 class.
std::vector<int> exact_count_labels(std::size_t n_rows, std::size_t n_positive,
                                    std::uint64_t seed) {
    std::vector<std::size_t> order(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) order[i] = i;
    Rng rng(seed);
    shuffle_inplace(order, rng);
    std::vector<int> labels(n_rows, -1);
    for (std::size_t i = 0; i < n_positive; ++i) labels[order[i]] = +1;
    return labels;
}

Dataset make_shifted_normal(const std::string& name, std::size_t n_rows, std::size_t n_features,
                            std::size_t n_positive, std::size_t n_informative, double shift,
                            std::uint64_t seed) {
    Dataset d;
    d.name = name;
    d.feature_names = numbered_names(n_features);
    d.labels = exact_count_labels(n_rows, n_positive, derive_seed(seed, 1));
    d.features = Matrix(n_rows, n_features);
    Rng rng(derive_seed(seed, 2));
    for (std::size_t r = 0; r < n_rows; ++r) {
        double offset = d.labels[r] > 0 ? shift : 0.0;
        for (std::size_t c = 0; c < n_features; ++c)
            d.features(r, c) = normal01(rng) + (c < n_informative ? offset : 0.0);
    }
    return d;
}

} // namespace

Dataset make_cluster_outliers(std::size_t n_cluster, std::size_t n_outliers,
                              std::size_t n_features, std::uint64_t seed) {
    if (n_features < 2)
        throw std::runtime_error("make_cluster_outliers: need at least 2 features");
    Dataset d;
    d.name = "cluster_outliers";
    d.feature_names = numbered_names(n_features);
    d.features = Matrix(n_cluster + n_outliers, n_features);
    d.labels.resize(n_cluster + n_outliers);

    Rng rng(seed);
    for (std::size_t r = 0; r < n_cluster; ++r) {
        for (std::size_t c = 0; c < n_features; ++c)
            d.features(r, c) = uniform_in(rng, 0.45, 0.55);
        d.labels[r] = (d.features(r, 0) + d.features(r, 1) > 1.0) ? +1 : -1;
    }
    for (std::size_t r = n_cluster; r < n_cluster + n_outliers; ++r) {
        for (std::size_t c = 0; c < n_features; ++c) {
            bool low_side = uniform01(rng) < 0.5;
            d.features(r, c) =
                low_side ? uniform_in(rng, 0.0, 0.08) : uniform_in(rng, 0.92, 1.0);
        }
        d.labels[r] = (r % 2 == 0) ? +1 : -1;
    }
    return d;
}

Dataset make_credit_surrogate(std::uint64_t seed) {
    return make_shifted_normal("credit_default", 30000, 23, 1110, 8, 1.0, seed);
}

Dataset make_distress_surrogate(std::uint64_t seed) {
    return make_shifted_normal("financial_distress", 3672, 83, 808, 12, 1.2, seed);
}

} // namespace prcf
