#pragma once

#include "prcf/dataset.hpp"

namespace prcf {

// Anomaly-detection testbed: n_cluster rows drawn uniformly from the tight
// cube [0.45, 0.55]^d (labels mixed by a simple in-cluster rule so both
// classes survive filtering) followed by n_outliers rows whose coordinates
// sit near the far edges of [0, 1]^d, labels alternating. Outliers occupy
// the trailing indices, which filtering tests rely on.
Dataset make_cluster_outliers(std::size_t n_cluster, std::size_t n_outliers,
                              std::size_t n_features, std::uint64_t seed);

// Class-imbalanced tabular surrogates shaped like the published benchmark
// summaries. Rows mix a handful of informative columns (class-conditional
// mean shift on standard normals) with pure noise columns; the positive set
// is an exact-count random subset, so the minority fraction is exact.

// 30,000 rows, 23 features, 1,110 positives (3.7%).
Dataset make_credit_surrogate(std::uint64_t seed);

// 3,672 rows, 83 features, 808 positives (22.0%).
Dataset make_distress_surrogate(std::uint64_t seed);

// Fixed seeds used by the dataset generator tool so every build reproduces
// byte-identical files.
constexpr std::uint64_t kCreditSeed = 20240501;
constexpr std::uint64_t kDistressSeed = 20240502;
constexpr std::uint64_t kClusterSeed = 20240503;

} // namespace prcf
