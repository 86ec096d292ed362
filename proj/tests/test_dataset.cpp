#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "prcf/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <string>

using namespace prcf;

namespace {

// Minimal scoped temp file. Tests write inputs here so no fixture files are
// needed.
struct TempCsv {
    std::string path;
    explicit TempCsv(const std::string& content, const char* name) {
        path = std::string("prcf_test_") + name + ".csv";
        std::ofstream f(path, std::ios::binary);
        f << content;
    }
    ~TempCsv() { std::remove(path.c_str()); }
};

Dataset tiny_dataset() {
    Dataset d;
    d.name = "tiny";
    d.feature_names = {"a", "b"};
    d.features = Matrix(4, 2);
    for (std::size_t r = 0; r < 4; ++r) {
        d.features(r, 0) = static_cast<double>(r);
        d.features(r, 1) = 10.0 - static_cast<double>(r);
    }
    d.labels = {+1, +1, -1, -1};
    return d;
}

} // namespace

TEST_CASE("load_csv maps the positive label and parses numbers") {
    TempCsv f("x,y,cls\n1,2,yes\n3,4,no\n5,6.5,yes\n", "load");
    const Dataset d = load_csv(f.path, "cls", "yes");
    CHECK(d.n_rows() == 3);
    CHECK(d.n_features() == 2);
    CHECK(d.feature_names == std::vector<std::string>{"x", "y"});
    CHECK(d.labels == std::vector<int>{+1, -1, +1});
    CHECK(d.features(2, 1) == 6.5);
    CHECK(d.count_label(+1) == 2);
    CHECK(d.count_label(-1) == 1);
    CHECK(d.name == "prcf_test_load");
}

TEST_CASE("load_csv accepts a target column in any position") {
    TempCsv f("cls,x\n+1,1\n-1,2\n", "target_first");
    const Dataset d = load_csv(f.path, "cls", "+1");
    CHECK(d.n_features() == 1);
    CHECK(d.feature_names == std::vector<std::string>{"x"});
    CHECK(d.labels == std::vector<int>{+1, -1});
}

TEST_CASE("load_csv reports row and column context on bad numbers") {
    TempCsv f("x,cls\n1,+1\noops,-1\n", "badnum");
    try {
        load_csv(f.path, "cls", "+1");
        FAIL("expected a parse error");
    } catch (const std::exception& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 2") != std::string::npos);
        CHECK(msg.find("'x'") != std::string::npos);
    }
}

TEST_CASE("load_csv rejects structural problems") {
    TempCsv missing("x,y\n1,2\n3,4\n", "missing_target");
    CHECK_THROWS(load_csv(missing.path, "cls", "+1"));

    TempCsv ragged("x,cls\n1,+1,9\n2,-1\n", "ragged");
    CHECK_THROWS(load_csv(ragged.path, "cls", "+1"));

    TempCsv single("x,cls\n1,+1\n", "one_row");
    CHECK_THROWS(load_csv(single.path, "cls", "+1"));

    TempCsv oneclass("x,cls\n1,+1\n2,+1\n", "one_class");
    CHECK_THROWS(load_csv(oneclass.path, "cls", "+1"));

    TempCsv dup("x,x,cls\n1,2,+1\n3,4,-1\n", "dup_names");
    CHECK_THROWS(load_csv(dup.path, "cls", "+1"));

    CHECK_THROWS(load_csv("no_such_file.csv", "cls", "+1"));
}

TEST_CASE("load_csv honors a custom delimiter") {
    TempCsv f("x;cls\n1.5;+1\n2.5;-1\n", "semicolon");
    const Dataset d = load_csv(f.path, "cls", "+1", ';');
    CHECK(d.features(0, 0) == 1.5);
    CHECK(d.labels == std::vector<int>{+1, -1});
}

TEST_CASE("load_feature_csv reads all columns and can skip one") {
    TempCsv f("x,y,cls\n1,2,9\n3,4,8\n", "features");
    auto [names, values] = load_feature_csv(f.path);
    CHECK(names == std::vector<std::string>{"x", "y", "cls"});
    CHECK(values.rows() == 2);
    CHECK(values(0, 2) == 9.0);

    auto [names2, values2] = load_feature_csv(f.path, ',', "cls");
    CHECK(names2 == std::vector<std::string>{"x", "y"});
    CHECK(values2.cols() == 2);
    CHECK(values2(1, 1) == 4.0);
}

TEST_CASE("save_csv then load_csv round-trips values and labels") {
    const Dataset d = tiny_dataset();
    TempCsv f("", "roundtrip");
    save_csv(d, f.path, "target");
    const Dataset back = load_csv(f.path, "target", "+1");
    CHECK(back.n_rows() == d.n_rows());
    CHECK(back.feature_names == d.feature_names);
    CHECK(back.labels == d.labels);
    for (std::size_t r = 0; r < d.n_rows(); ++r)
        for (std::size_t c = 0; c < d.n_features(); ++c)
            CHECK(back.features(r, c) == d.features(r, c));
}

TEST_CASE("summarize reports the minority fraction to both sides") {
    Dataset d = tiny_dataset();
    DatasetSummary s = summarize(d);
    CHECK(s.n_observations == 4);
    CHECK(s.n_features == 2);
    CHECK(s.minority_fraction == 0.5);

    d.labels = {+1, -1, -1, -1};
    CHECK(summarize(d).minority_fraction == 0.25);
    d.labels = {+1, +1, +1, -1};
    CHECK(summarize(d).minority_fraction == 0.25);
}

TEST_CASE("normalize_minmax rescales to [0,1] and its table reapplies") {
    Dataset d;
    d.name = "norm";
    d.feature_names = {"a", "b"};
    d.features = Matrix(3, 2);
    d.features(0, 0) = -1;
    d.features(1, 0) = 0;
    d.features(2, 0) = 3;
    d.features(0, 1) = 7;   // constant column
    d.features(1, 1) = 7;
    d.features(2, 1) = 7;
    d.labels = {+1, -1, +1};

    auto [scaled, table] = normalize_minmax(d);
    CHECK(scaled.features(0, 0) == 0.0);
    CHECK(scaled.features(1, 0) == 0.25);
    CHECK(scaled.features(2, 0) == 1.0);
    CHECK(scaled.features(0, 1) == 0.0);   // constant maps to 0
    CHECK(scaled.features(2, 1) == 0.0);

    Matrix fresh(1, 2);
    fresh(0, 0) = 5.0;   // outside the captured range: (5 - -1) / 4 = 1.5
    fresh(0, 1) = 7.0;
    const Matrix applied = apply_minmax(fresh, table);
    CHECK(applied(0, 0) == 1.5);
    CHECK(applied(0, 1) == 0.0);
}

TEST_CASE("stratified split keeps class proportions and uses every row once") {
    Dataset d;
    d.name = "split";
    d.feature_names = {"v"};
    d.features = Matrix(10, 1);
    for (std::size_t r = 0; r < 10; ++r) d.features(r, 0) = static_cast<double>(r);
    d.labels = {+1, +1, +1, +1, -1, -1, -1, -1, -1, -1};

    SplitSpec spec;
    spec.test_fraction = 0.3;
    spec.seed = 5;
    spec.stratified = true;
    auto [train, test] = train_test_split(d, spec);

    // Per class: 4 positives -> floor(4*0.3+0.5) = 1 test; 6 negatives -> 2.
    CHECK(test.n_rows() == 3);
    CHECK(train.n_rows() == 7);
    CHECK(test.count_label(+1) == 1);
    CHECK(test.count_label(-1) == 2);

    std::multiset<double> all;
    for (std::size_t r = 0; r < train.n_rows(); ++r) all.insert(train.features(r, 0));
    for (std::size_t r = 0; r < test.n_rows(); ++r) all.insert(test.features(r, 0));
    CHECK(all.size() == 10);
    CHECK(std::set<double>(all.begin(), all.end()).size() == 10);
}

TEST_CASE("split is deterministic in the seed and varies across seeds") {
    Dataset d;
    d.name = "det";
    d.feature_names = {"v"};
    d.features = Matrix(40, 1);
    for (std::size_t r = 0; r < 40; ++r) d.features(r, 0) = static_cast<double>(r);
    d.labels.assign(40, -1);
    for (std::size_t r = 0; r < 12; ++r) d.labels[r] = +1;

    SplitSpec spec;
    spec.test_fraction = 0.25;
    spec.seed = 77;
    auto [tr1, te1] = train_test_split(d, spec);
    auto [tr2, te2] = train_test_split(d, spec);
    CHECK(te1.features.data() == te2.features.data());

    spec.seed = 78;
    auto [tr3, te3] = train_test_split(d, spec);
    CHECK(te1.features.data() != te3.features.data());
}

TEST_CASE("split rejects empty partitions") {
    Dataset d = tiny_dataset();
    SplitSpec spec;
    spec.test_fraction = 0.05;   // rounds to zero test rows per class
    spec.seed = 1;
    CHECK_THROWS(train_test_split(d, spec));
}

TEST_CASE("bootstrap_sample draws with replacement, deterministically") {
    Dataset d;
    d.name = "boot";
    d.feature_names = {"v"};
    d.features = Matrix(100, 1);
    for (std::size_t r = 0; r < 100; ++r) d.features(r, 0) = static_cast<double>(r);
    d.labels.assign(100, -1);
    for (std::size_t r = 0; r < 30; ++r) d.labels[r] = +1;

    const Dataset b1 = bootstrap_sample(d, 11);
    const Dataset b2 = bootstrap_sample(d, 11);
    CHECK(b1.n_rows() == 100);
    CHECK(b1.features.data() == b2.features.data());

    // Distinct-row fraction concentrates near 1 - 1/e ~ 0.632.
    double distinct_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Dataset b = bootstrap_sample(d, seed);
        std::set<double> rows;
        for (std::size_t r = 0; r < b.n_rows(); ++r) rows.insert(b.features(r, 0));
        distinct_sum += static_cast<double>(rows.size()) / 100.0;
    }
    const double mean_distinct = distinct_sum / 50.0;
    CHECK(mean_distinct > 0.582);
    CHECK(mean_distinct < 0.682);
}

TEST_CASE("take_rows preserves order and duplicates") {
    const Dataset d = tiny_dataset();
    const Dataset sub = take_rows(d, {2, 0, 2});
    CHECK(sub.n_rows() == 3);
    CHECK(sub.features(0, 0) == 2.0);
    CHECK(sub.features(1, 0) == 0.0);
    CHECK(sub.features(2, 0) == 2.0);
    CHECK(sub.labels == std::vector<int>{-1, +1, -1});
}
