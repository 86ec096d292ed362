#include "prcf/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace prcf {
namespace {

std::string file_stem(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string base = (slash == std::string::npos) ? path : path.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    return (dot == std::string::npos || dot == 0) ? base : base.substr(0, dot);
}

std::string strip_quotes(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        return s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == delimiter) {
            cells.push_back(cell);
            cell.clear();
        } else {
            cell.push_back(c);
        }
    }
    cells.push_back(cell);
    for (auto& c : cells) {
        while (!c.empty() && (c.back() == '\r' || c.back() == ' ' || c.back() == '\t')) c.pop_back();
        std::size_t start = 0;
        while (start < c.size() && (c[start] == ' ' || c[start] == '\t')) ++start;
        c = strip_quotes(c.substr(start));
    }
    return cells;
}

struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

RawTable read_table(const std::string& path, char delimiter) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open file '" + path + "'");
    RawTable t;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("file '" + path + "' is empty");
    t.header = split_line(line, delimiter);
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto cells = split_line(line, delimiter);
        if (cells.size() != t.header.size())
            throw std::runtime_error("file '" + path + "', data row " +
                                     std::to_string(t.rows.size() + 1) + ": expected " +
                                     std::to_string(t.header.size()) + " cells, got " +
                                     std::to_string(cells.size()));
        t.rows.push_back(std::move(cells));
    }
    return t;
}

void check_distinct_names(const std::vector<std::string>& names, const std::string& path) {
    auto sorted = names;
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end())
        throw std::runtime_error("file '" + path + "': duplicate column name '" + *dup + "'");
}

} // namespace

std::size_t Dataset::count_label(int label) const {
    std::size_t n = 0;
    for (int y : labels)
        if (y == label) ++n;
    return n;
}

Dataset load_csv(const std::string& path, const std::string& target_column,
                 const std::string& positive_label, char delimiter,
                 const std::string& dataset_name) {
    RawTable t = read_table(path, delimiter);
    check_distinct_names(t.header, path);

    std::size_t target_idx = t.header.size();
    for (std::size_t c = 0; c < t.header.size(); ++c)
        if (t.header[c] == target_column) target_idx = c;
    if (target_idx == t.header.size())
        throw std::runtime_error("file '" + path + "': no column named '" + target_column + "'");
    if (t.rows.size() < 2)
        throw std::runtime_error("file '" + path + "': need at least 2 data rows, got " +
                                 std::to_string(t.rows.size()));

    Dataset d;
    d.name = dataset_name.empty() ? file_stem(path) : dataset_name;
    for (std::size_t c = 0; c < t.header.size(); ++c)
        if (c != target_idx) d.feature_names.push_back(t.header[c]);

    d.features = Matrix(t.rows.size(), d.feature_names.size());
    d.labels.resize(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        std::size_t out = 0;
        for (std::size_t c = 0; c < t.header.size(); ++c) {
            if (c == target_idx) {
                d.labels[r] = (t.rows[r][c] == positive_label) ? +1 : -1;
                continue;
            }
            d.features(r, out++) = parse_double(
                t.rows[r][c],
                "file '" + path + "', data row " + std::to_string(r + 1) +
                    ", column '" + t.header[c] + "'");
        }
    }

    std::size_t pos = d.count_label(+1);
    if (pos == 0 || pos == d.n_rows())
        throw std::runtime_error("file '" + path + "': target column '" + target_column +
                                 "' has a single class (positives: " + std::to_string(pos) +
                                 " of " + std::to_string(d.n_rows()) + ")");
    return d;
}

std::pair<std::vector<std::string>, Matrix> load_feature_csv(const std::string& path,
                                                             char delimiter,
                                                             const std::string& skip_column) {
    RawTable t = read_table(path, delimiter);
    check_distinct_names(t.header, path);
    if (t.rows.empty())
        throw std::runtime_error("file '" + path + "': no data rows");

    std::vector<std::size_t> cols;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < t.header.size(); ++c) {
        if (!skip_column.empty() && t.header[c] == skip_column)
            continue;
        cols.push_back(c);
        names.push_back(t.header[c]);
    }
    if (cols.empty())
        throw std::runtime_error("file '" + path + "': no feature columns");

    Matrix m(t.rows.size(), cols.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            m(r, c) = parse_double(t.rows[r][cols[c]],
                                   "file '" + path + "', data row " + std::to_string(r + 1) +
                                       ", column '" + names[c] + "'");
    return {names, std::move(m)};
}

void save_csv(const Dataset& d, const std::string& path, const std::string& target_column,
              char delimiter) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write file '" + path + "'");
    for (const auto& name : d.feature_names) out << name << delimiter;
    out << target_column << '\n';
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
        for (std::size_t c = 0; c < d.n_features(); ++c)
            out << format_double(d.features(r, c)) << delimiter;
        out << (d.labels[r] > 0 ? "+1" : "-1") << '\n';
    }
    if (!out)
        throw std::runtime_error("write failed for '" + path + "'");
}

DatasetSummary summarize(const Dataset& d) {
    DatasetSummary s;
    s.n_observations = d.n_rows();
    s.n_features = d.n_features();
    std::size_t pos = d.count_label(+1);
    std::size_t minority = std::min(pos, d.n_rows() - pos);
    s.minority_fraction = d.n_rows() ? static_cast<double>(minority) / static_cast<double>(d.n_rows()) : 0.0;
    return s;
}

std::pair<Dataset, MinMaxTable> normalize_minmax(const Dataset& d) {
    MinMaxTable table;
    table.min.resize(d.n_features());
    table.max.resize(d.n_features());
    for (std::size_t c = 0; c < d.n_features(); ++c) {
        double lo = d.features(0, c), hi = d.features(0, c);
        for (std::size_t r = 1; r < d.n_rows(); ++r) {
            lo = std::min(lo, d.features(r, c));
            hi = std::max(hi, d.features(r, c));
        }
        table.min[c] = lo;
        table.max[c] = hi;
    }
    Dataset out = d;
    out.features = apply_minmax(d.features, table);
    return {std::move(out), std::move(table)};
}

Matrix apply_minmax(const Matrix& features, const MinMaxTable& table) {
    if (features.cols() != table.min.size())
        throw std::runtime_error("min/max table has " + std::to_string(table.min.size()) +
                                 " columns, features have " + std::to_string(features.cols()));
    Matrix out(features.rows(), features.cols());
    for (std::size_t c = 0; c < features.cols(); ++c) {
        double range = table.max[c] - table.min[c];
        for (std::size_t r = 0; r < features.rows(); ++r)
            out(r, c) = range > 0.0 ? (features(r, c) - table.min[c]) / range : 0.0;
    }
    return out;
}

Dataset take_rows(const Dataset& d, const std::vector<std::size_t>& indices) {
    Dataset out;
    out.name = d.name;
    out.feature_names = d.feature_names;
    out.features = Matrix(indices.size(), d.n_features());
    out.labels.resize(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        std::size_t r = indices[i];
        for (std::size_t c = 0; c < d.n_features(); ++c) out.features(i, c) = d.features(r, c);
        out.labels[i] = d.labels[r];
    }
    return out;
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& d, const SplitSpec& spec) {
    if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0))
        throw std::runtime_error("test_fraction must lie in (0, 1), got " +
                                 format_double(spec.test_fraction));
    Rng rng(spec.seed);
    std::vector<std::size_t> test_idx, train_idx;

    auto split_group = [&](std::vector<std::size_t>& group, const std::string& what) {
        std::size_t n = group.size();
        auto n_test = static_cast<std::size_t>(std::floor(spec.test_fraction * static_cast<double>(n) + 0.5));
        if (n_test == 0 || n_test == n)
            throw std::runtime_error("test_fraction " + format_double(spec.test_fraction) +
                                     " leaves an empty partition for " + what + " (" +
                                     std::to_string(n) + " rows)");
        shuffle_inplace(group, rng);
        test_idx.insert(test_idx.end(), group.begin(), group.begin() + static_cast<std::ptrdiff_t>(n_test));
        train_idx.insert(train_idx.end(), group.begin() + static_cast<std::ptrdiff_t>(n_test), group.end());
    };

    if (spec.stratified) {
        std::vector<std::size_t> pos, neg;
        for (std::size_t r = 0; r < d.n_rows(); ++r)
            (d.labels[r] > 0 ? pos : neg).push_back(r);
        split_group(pos, "the positive class");
        split_group(neg, "the negative class");
    } else {
        std::vector<std::size_t> all(d.n_rows());
        for (std::size_t r = 0; r < d.n_rows(); ++r) all[r] = r;
        split_group(all, "the dataset");
    }

    std::sort(test_idx.begin(), test_idx.end());
    std::sort(train_idx.begin(), train_idx.end());
    return {take_rows(d, train_idx), take_rows(d, test_idx)};
}

Dataset bootstrap_sample(const Dataset& d, std::uint64_t seed) {
    if (d.n_rows() == 0)
        throw std::runtime_error("cannot bootstrap an empty dataset");
    Rng rng(seed);
    std::vector<std::size_t> indices(d.n_rows());
    for (auto& idx : indices) idx = static_cast<std::size_t>(bounded(rng, d.n_rows()));
    return take_rows(d, indices);
}

} // namespace prcf
