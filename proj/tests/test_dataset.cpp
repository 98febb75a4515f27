#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "relnet/dataset.hpp"
#include "relnet/rng.hpp"

using namespace relnet;

namespace {

std::string write_file(const std::string& name, const std::string& content) {
    const auto dir = std::filesystem::temp_directory_path() / "relnet_dataset_tests";
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path.string();
}

RawDataset csv(const std::string& name, const std::string& content) {
    return load_dataset(write_file(name, content), DataFormat::csv,
                        ClassPosition::last_column);
}

RawDataset libsvm(const std::string& name, const std::string& content) {
    return load_dataset(write_file(name, content), DataFormat::libsvm,
                        ClassPosition::libsvm_leading);
}

} // namespace

TEST_CASE("csv loads with and without a header") {
    const RawDataset with_header =
        csv("header.csv", "f1,f2,label\n1.5,2.5,a\n3.5, 4.5 ,b\n");
    CHECK(with_header.n_instances() == 2);
    CHECK(with_header.n_attributes == 2);
    CHECK(with_header.instances[0] == std::vector<double>{1.5, 2.5});
    CHECK(with_header.instances[1] == std::vector<double>{3.5, 4.5}); // fields trimmed
    CHECK(with_header.labels == std::vector<std::string>{"a", "b"});

    const RawDataset headerless = csv("plain.csv", "1,2,x\n3,4,y\n");
    CHECK(headerless.n_instances() == 2);
    CHECK(headerless.labels[0] == "x");
}

TEST_CASE("csv rejects malformed shapes with file and line context") {
    CHECK_THROWS_AS(csv("empty.csv", ""), DataError);
    CHECK_THROWS_AS(csv("onecol.csv", "1\n2\n"), DataError);
    try {
        csv("ragged.csv", "1,2,a\n1,2,3,b\n");
        FAIL("ragged row accepted");
    } catch (const DataError& e) {
        // diagnostics carry path:line context
        CHECK(std::string(e.what()).find("ragged.csv:2") != std::string::npos);
    }
    CHECK_THROWS_AS(csv("badnum.csv", "1,2,a\n1,zap,b\n"), DataError);
    CHECK_THROWS_AS(csv("nonfinite.csv", "1,2,a\ninf,3,b\n"), DataError);
    CHECK_THROWS_AS(
        csv("threelabels.csv", "1,2,a\n3,4,b\n5,6,c\n"),
        DataError); // more than two classes
    CHECK_THROWS_AS(load_dataset(write_file("pos.csv", "1,2,a\n"), DataFormat::csv,
                                 ClassPosition::libsvm_leading),
                    std::invalid_argument);
}

TEST_CASE("libsvm parses sparse rows against the maximum index") {
    const RawDataset raw = libsvm("ok.libsvm",
                                  "+1 1:0.5 3:2.5\n"
                                  "-1 2:1.25\n"
                                  "+1 1:1 2:2 4:4\n");
    CHECK(raw.n_attributes == 4);
    CHECK(raw.instances[0] == std::vector<double>{0.5, 0.0, 2.5, 0.0});
    CHECK(raw.instances[1] == std::vector<double>{0.0, 1.25, 0.0, 0.0});
    CHECK(raw.instances[2] == std::vector<double>{1.0, 2.0, 0.0, 4.0});
    CHECK(raw.labels == std::vector<std::string>{"+1", "-1", "+1"});
}

TEST_CASE("libsvm rejects malformed rows") {
    CHECK_THROWS_AS(libsvm("dec.libsvm", "+1 2:1 1:2\n"), DataError); // not increasing
    CHECK_THROWS_AS(libsvm("dup.libsvm", "+1 2:1 2:2\n"), DataError);
    CHECK_THROWS_AS(libsvm("zero.libsvm", "+1 0:1\n"), DataError); // 1-based
    CHECK_THROWS_AS(libsvm("nopair.libsvm", "+1 7\n"), DataError);
    CHECK_THROWS_AS(libsvm("labelonly.libsvm", "+1\n-1\n"), DataError);
    CHECK_THROWS_AS(load_dataset(write_file("fmt.libsvm", "+1 1:1\n"), DataFormat::libsvm,
                                 ClassPosition::last_column),
                    std::invalid_argument);
}

TEST_CASE("prediction instances accept optional labels") {
    const std::string path3 = write_file("inst3.csv", "1,2,3\n4,5,6\n");
    const auto bare = load_instances(path3, DataFormat::csv, 3);
    REQUIRE(bare.size() == 2);
    CHECK(bare[1] == std::vector<double>{4.0, 5.0, 6.0});

    const std::string path_labeled = write_file("inst3l.csv", "1,2,3,yes\n4,5,6,no\n");
    const auto labeled = load_instances(path_labeled, DataFormat::csv, 3);
    CHECK(labeled[0] == std::vector<double>{1.0, 2.0, 3.0});

    CHECK_THROWS_AS(load_instances(path3, DataFormat::csv, 5), DataError);

    const std::string sparse = write_file("inst.libsvm", "? 1:9 2:8\n");
    const auto from_sparse = load_instances(sparse, DataFormat::libsvm, 3);
    CHECK(from_sparse[0] == std::vector<double>{9.0, 8.0, 0.0});
    CHECK_THROWS_AS(load_instances(sparse, DataFormat::libsvm, 1), DataError);
}

TEST_CASE("class mapping picks the majority label for class 1") {
    RawDataset raw;
    raw.n_attributes = 1;
    for (int i = 0; i < 5; ++i) {
        raw.instances.push_back({double(i)});
        raw.labels.push_back(i < 3 ? "yes" : "no");
    }
    const ClassMap cmap = map_classes(raw);
    CHECK(cmap.label_for_one == "yes");
    CHECK(cmap.label_for_zero == "no");
    CHECK(cmap.count_one == 3);
    CHECK(cmap.count_total == 5);
    CHECK(cmap.theta == 3.0 / 5.0); // exact count ratio
    CHECK_FALSE(cmap.single_label);
}

TEST_CASE("class tie breaks to the byte-lexicographically larger label") {
    RawDataset raw;
    raw.n_attributes = 1;
    raw.instances = {{1}, {2}, {3}, {4}};
    raw.labels = {"a", "b", "a", "b"};
    CHECK(map_classes(raw).label_for_one == "b");

    raw.labels = {"10", "9", "10", "9"}; // byte order, not numeric order
    CHECK(map_classes(raw).label_for_one == "9");
}

TEST_CASE("single-label data maps to class 1 with theta 1") {
    RawDataset raw;
    raw.n_attributes = 1;
    raw.instances = {{1}, {2}};
    raw.labels = {"only", "only"};
    const ClassMap cmap = map_classes(raw);
    CHECK(cmap.single_label);
    CHECK(cmap.label_for_one == "only");
    CHECK(cmap.theta == 1.0);
}

TEST_CASE("average ranks handle ties by run means") {
    const std::vector<double> plain = {10, 20, 30};
    CHECK(average_ranks(plain) == std::vector<double>{1, 2, 3});

    const std::vector<double> tied = {5, 5, 7};
    CHECK(average_ranks(tied) == std::vector<double>{1.5, 1.5, 3});

    const std::vector<double> constant = {4, 4, 4, 4};
    CHECK(average_ranks(constant) == std::vector<double>{2.5, 2.5, 2.5, 2.5});

    const std::vector<double> mixed = {3, 1, 3, 2};
    CHECK(average_ranks(mixed) == std::vector<double>{3.5, 1, 3.5, 2});
}

TEST_CASE("rank correlation matches frozen and structural values") {
    const std::vector<double> rising = {2, 4, 6};
    const std::vector<double> late = {0, 0, 1};
    // value computed independently from the average-rank Pearson formula
    CHECK(spearman(rising, late) == doctest::Approx(0.8660254037844387).epsilon(1e-12));

    const std::vector<double> a = {1, 2, 3, 4};
    const std::vector<double> up = {10, 20, 30, 40};
    const std::vector<double> down = {8, 6, 4, 2};
    CHECK(spearman(a, up) == doctest::Approx(1.0));
    CHECK(spearman(a, down) == doctest::Approx(-1.0));

    const std::vector<double> constant = {5, 5, 5, 5};
    CHECK(spearman(a, constant) == 0.0);
    CHECK(spearman(constant, a) == 0.0);
}

TEST_CASE("fit_transform normalizes, flips and freezes the mapping") {
    RawDataset raw;
    raw.n_attributes = 3;
    // attr 0 rises with class 1, attr 1 falls with class 1, attr 2 constant
    raw.instances = {{0.0, 9.0, 4.0}, {2.0, 8.0, 4.0}, {8.0, 2.0, 4.0}, {10.0, 1.0, 4.0}};
    raw.labels = {"n", "n", "y", "y"};
    const ClassMap cmap = map_classes(raw); // tie -> "y" (byte order)
    REQUIRE(cmap.label_for_one == "y");

    auto [spec, data] = fit_transform(raw, cmap);
    REQUIRE(spec.n_attributes() == 3);
    CHECK_FALSE(spec.attributes[0].flip);
    CHECK(spec.attributes[1].flip);
    CHECK(spec.attributes[1].r_s < 0);
    CHECK(spec.attributes[2].r_s == 0.0);
    CHECK_FALSE(spec.attributes[2].flip);

    CHECK(data.theta == cmap.theta);
    CHECK(data.y01 == std::vector<std::uint8_t>{0, 0, 1, 1});

    // endpoints land exactly on 0/1; constant columns sit at 0.5
    CHECK(data.node_reliability_vectors[0][0] == 0.0);
    CHECK(data.node_reliability_vectors[3][0] == 1.0);
    CHECK(data.node_reliability_vectors[0][1] == 0.0); // 9 is max, flipped to 0
    CHECK(data.node_reliability_vectors[3][1] == 1.0); // 1 is min, flipped to 1
    for (int i = 0; i < 4; ++i) CHECK(data.node_reliability_vectors[i][2] == 0.5);

    // frozen replay: apply_transform reproduces the fitted vectors bit for bit
    for (int i = 0; i < raw.n_instances(); ++i)
        CHECK(apply_transform(spec, raw.instances[i]) == data.node_reliability_vectors[i]);
}

TEST_CASE("apply_transform clamps out-of-range values") {
    RawDataset raw;
    raw.n_attributes = 1;
    raw.instances = {{0.0}, {10.0}, {2.0}, {8.0}};
    raw.labels = {"n", "y", "n", "y"};
    auto [spec, data] = fit_transform(raw, map_classes(raw));

    CHECK(apply_transform(spec, std::vector<double>{-5.0})[0] == 0.0);
    CHECK(apply_transform(spec, std::vector<double>{15.0})[0] == 1.0);
    CHECK(apply_transform(spec, std::vector<double>{5.0})[0] == 0.5);
    CHECK_THROWS_AS(apply_transform(spec, std::vector<double>{1.0, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("transformed columns never correlate negatively with the class") {
    // randomized but seeded data; the fitted transform must orient every
    // attribute non-negatively with y01
    rng::Stream stream(8080);
    RawDataset raw;
    raw.n_attributes = 5;
    for (int i = 0; i < 60; ++i) {
        std::vector<double> row(5);
        for (double& v : row) v = stream.u01() * 10 - 5;
        raw.instances.push_back(std::move(row));
        raw.labels.push_back(stream.u01() < 0.45 ? "p" : "q");
    }
    auto [spec, data] = fit_transform(raw, map_classes(raw));
    std::vector<double> y(data.y01.begin(), data.y01.end());
    for (int a = 0; a < 5; ++a) {
        std::vector<double> column;
        for (const auto& v : data.node_reliability_vectors) column.push_back(v[a]);
        CHECK(spearman(column, y) >= 0.0);
    }
}
