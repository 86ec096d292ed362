#pragma once

#include "prcf/dataset.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace prcf {

// Precision-recall curve of a single feature against the labels. One entry
// per unique feature value, thresholds ascending. Entry j describes the
// predictor "positive iff value <= thresholds[j]", except where that rule's
// precision fell strictly below the baseline positive rate; such entries are
// replaced by the complementary rule "positive iff value > thresholds[j]"
// (recall becomes 1 - recall, precision is recomputed over the complement).
// The final entry always equals (recall 1, precision = baseline).
struct PRCurve {
    std::vector<double> thresholds;
    std::vector<double> recall;
    std::vector<double> precision;
    double baseline = 0.0;
    std::size_t total_positives = 0;
    std::size_t total_negatives = 0;

    std::size_t size() const { return thresholds.size(); }
};

// (feature index, threshold) pair chosen for a tree split, with the scores
// that selected it. auprc is the recall-ordered area (see
// auprc_recall_ordered), always in (0, 1].
struct SplitCandidate {
    std::size_t feature_index = 0;
    double threshold = 0.0;
    double auprc = 0.0;
    double f1 = 0.0;
};

// Fraction of positive labels. Requires a non-empty vector; single-class
// inputs are allowed here (the curve construction rejects them itself).
double compute_baseline(const std::vector<int>& labels);

// Builds the per-unique-value curve described on PRCurve. Requires values
// and labels of equal nonzero length and both classes present.
PRCurve compute_pr_curve(const std::vector<double>& values, const std::vector<int>& labels);

// Trapezoidal area in curve order: recall[0] * (1 + precision[0]) / 2 plus
// sum_j (recall[j] - recall[j-1]) * (precision[j] + precision[j-1]) / 2.
// The accumulation is taken literally, so flipped entries contribute
// negative recall increments: the total can exceed 1 (observed up to ~1.13)
// or go negative on strongly reversed features (observed down to ~ -0.8).
// A sanity check rejects non-finite results and magnitudes of 2 or more,
// which cannot arise from a well-formed curve.
double auprc_trapezoid(const PRCurve& curve);

// Trapezoidal area with the curve entries first sorted by (recall ascending,
// precision descending), so every increment is non-negative and the result
// lies in [0, 1]. The order depends only on the point values: a feature and
// its negation trace complementary splits with equal point sets and
// therefore score identically, which the raw curve-order accumulation above
// does not guarantee.
double auprc_recall_ordered(const PRCurve& curve);

// 2rp / (r + p), or 0 when both arguments are 0.
double harmonic_mean(double r, double p);

// Scores each candidate feature by auprc_recall_ordered of its curve and
// returns the best one; ties break toward the lowest feature index. The
// orientation-independent score is used so that equally informative features
// rank equally whether their positive class sits at low or high values.
// Empty result means every candidate scored 0 (the caller's node is
// unsplittable).
std::optional<std::pair<std::size_t, double>> select_feature(
    const Dataset& d, const std::vector<std::size_t>& candidate_features);

// Picks the curve entry with the highest harmonic mean of recall and
// precision; ties break toward the smallest threshold. The returned
// threshold is always a member of curve.thresholds.
std::pair<double, double> select_threshold(const PRCurve& curve);

// Aligned three-column dump (threshold, recall, precision) for debugging.
void print_curve(std::ostream& out, const PRCurve& curve);

} // namespace prcf
