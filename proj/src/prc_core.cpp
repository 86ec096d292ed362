#include "prcf/prc_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <ostream>

namespace prcf {

double compute_baseline(const std::vector<int>& labels) {
    if (labels.empty())
        throw std::runtime_error("compute_baseline: no labels");
    std::size_t pos = 0;
    for (int y : labels) pos += (y > 0);
    return static_cast<double>(pos) / static_cast<double>(labels.size());
}

PRCurve compute_pr_curve(const std::vector<double>& values, const std::vector<int>& labels) {
    if (values.size() != labels.size() || values.empty())
        throw std::runtime_error("compute_pr_curve: values and labels must have equal nonzero length");

    const std::size_t n = values.size();
    std::size_t total_pos = 0;
    for (int y : labels) total_pos += (y > 0);
    if (total_pos == 0 || total_pos == n)
        throw std::runtime_error("compute_pr_curve: labels contain a single class");
    const std::size_t total_neg = n - total_pos;
    const double baseline = static_cast<double>(total_pos) / static_cast<double>(n);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    PRCurve curve;
    curve.baseline = baseline;
    curve.total_positives = total_pos;
    curve.total_negatives = total_neg;

    // One pass over the sorted rows; emit an entry when the value changes.
    std::size_t prefix_pos = 0;
    std::size_t i = 0;
    while (i < n) {
        double v = values[order[i]];
        std::size_t j = i;
        while (j < n && values[order[j]] == v) {
            prefix_pos += (labels[order[j]] > 0);
            ++j;
        }
        const std::size_t prefix_n = j;
        double rec = static_cast<double>(prefix_pos) / static_cast<double>(total_pos);
        double prec = static_cast<double>(prefix_pos) / static_cast<double>(prefix_n);
        if (prec < baseline) {
            // The "<= v" rule underperforms guessing; report the
            // complementary "> v" rule for this threshold instead.
            rec = 1.0 - rec;
            std::size_t suffix_n = n - prefix_n;
            prec = suffix_n > 0
                       ? static_cast<double>(total_pos - prefix_pos) / static_cast<double>(suffix_n)
                       : baseline;
        }
        curve.thresholds.push_back(v);
        curve.recall.push_back(rec);
        curve.precision.push_back(prec);
        i = j;
    }
    return curve;
}

double auprc_trapezoid(const PRCurve& curve) {
    if (curve.size() == 0)
        throw std::runtime_error("auprc_trapezoid: empty curve");
    double area = curve.recall[0] * (1.0 + curve.precision[0]) / 2.0;
    for (std::size_t j = 1; j < curve.size(); ++j)
        area += (curve.recall[j] - curve.recall[j - 1]) *
                (curve.precision[j] + curve.precision[j - 1]) / 2.0;
    // Sanity band, not a clamp. The signed accumulation over flipped entries
    // legitimately leaves [0, 1] in both directions (observed range roughly
    // -0.8 to 1.13); a magnitude of 2 or a non-finite value cannot come from
    // a well-formed curve.
    if (!(std::isfinite(area) && area > -2.0 && area < 2.0))
        throw std::logic_error("auprc_trapezoid: area " + format_double(area) +
                               " outside the sanity band (-2, 2)");
    return area;
}

double auprc_recall_ordered(const PRCurve& curve) {
    if (curve.size() == 0)
        throw std::runtime_error("auprc_recall_ordered: empty curve");
    // The order must be a function of the point values alone so that curves
    // with equal point sets (e.g. a feature and its negation) score equally;
    // ties in recall take the higher precision first (upper staircase).
    std::vector<std::size_t> order(curve.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (curve.recall[a] != curve.recall[b]) return curve.recall[a] < curve.recall[b];
        return curve.precision[a] > curve.precision[b];
    });
    double area = curve.recall[order[0]] * (1.0 + curve.precision[order[0]]) / 2.0;
    for (std::size_t j = 1; j < curve.size(); ++j)
        area += (curve.recall[order[j]] - curve.recall[order[j - 1]]) *
                (curve.precision[order[j]] + curve.precision[order[j - 1]]) / 2.0;
    if (!(area >= 0.0 && area <= 1.0 + 1e-12))
        throw std::logic_error("auprc_recall_ordered: area " + format_double(area) +
                               " outside [0, 1]");
    return area;
}

double harmonic_mean(double r, double p) {
    if (r == 0.0 && p == 0.0) return 0.0;
    return 2.0 * r * p / (r + p);
}

std::optional<std::pair<std::size_t, double>> select_feature(
    const Dataset& d, const std::vector<std::size_t>& candidate_features) {
    if (candidate_features.empty())
        throw std::runtime_error("select_feature: no candidate features");

    // Ascending candidate order makes the strict comparison below resolve
    // score ties toward the lowest feature index.
    std::vector<std::size_t> candidates = candidate_features;
    std::sort(candidates.begin(), candidates.end());

    std::vector<double> column(d.n_rows());
    std::optional<std::pair<std::size_t, double>> best;
    for (std::size_t f : candidates) {
        if (f >= d.n_features())
            throw std::runtime_error("select_feature: candidate index " + std::to_string(f) +
                                     " out of range");
        for (std::size_t r = 0; r < d.n_rows(); ++r) column[r] = d.features(r, f);
        double area = auprc_recall_ordered(compute_pr_curve(column, d.labels));
        if (area > 0.0 && (!best || area > best->second)) best = {f, area};
    }
    return best;
}

std::pair<double, double> select_threshold(const PRCurve& curve) {
    if (curve.size() == 0)
        throw std::runtime_error("select_threshold: empty curve");
    // Thresholds ascend, so keeping the first strict maximum resolves ties
    // toward the smallest threshold.
    std::size_t best = 0;
    double best_score = harmonic_mean(curve.recall[0], curve.precision[0]);
    for (std::size_t j = 1; j < curve.size(); ++j) {
        double score = harmonic_mean(curve.recall[j], curve.precision[j]);
        if (score > best_score) {
            best_score = score;
            best = j;
        }
    }
    return {curve.thresholds[best], best_score};
}

void print_curve(std::ostream& out, const PRCurve& curve) {
    auto pad = [](std::string s, std::size_t width) {
        if (s.size() < width) s.insert(0, width - s.size(), ' ');
        return s;
    };
    std::size_t w0 = 9, w1 = 6, w2 = 9;
    std::vector<std::array<std::string, 3>> cells;
    cells.reserve(curve.size());
    for (std::size_t j = 0; j < curve.size(); ++j) {
        cells.push_back({format_double(curve.thresholds[j]), format_double(curve.recall[j]),
                         format_double(curve.precision[j])});
        w0 = std::max(w0, cells.back()[0].size());
        w1 = std::max(w1, cells.back()[1].size());
        w2 = std::max(w2, cells.back()[2].size());
    }
    out << pad("threshold", w0) << "  " << pad("recall", w1) << "  " << pad("precision", w2)
        << '\n';
    for (const auto& row : cells)
        out << pad(row[0], w0) << "  " << pad(row[1], w1) << "  " << pad(row[2], w2) << '\n';
    out << "baseline " << format_double(curve.baseline) << "  positives "
        << curve.total_positives << "  negatives " << curve.total_negatives << '\n';
}

} // namespace prcf
