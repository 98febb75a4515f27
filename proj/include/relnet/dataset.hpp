#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace relnet {

// File or schema problem in user-supplied data; message carries the
// path/line context.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class DataFormat { csv, libsvm };
enum class ClassPosition { last_column, libsvm_leading };

struct RawDataset {
    std::vector<std::vector<double>> instances;
    std::vector<std::string> labels; // original label tokens, one per instance
    int n_attributes = 0;

    int n_instances() const { return static_cast<int>(instances.size()); }
};

// Label -> {0,1} mapping. The majority label maps to class 1; theta is the
// exact class-1 count ratio.
struct ClassMap {
    std::string label_for_one;
    std::string label_for_zero;
    long long count_one = 0;
    long long count_total = 0;
    double theta = 0.0;
    bool single_label = false;
};

struct AttributeTransform {
    double min = 0.0;
    double max = 0.0;
    bool flip = false; // true when the rank correlation with the class is negative
    double r_s = 0.0;  // recorded rank correlation, [-1,1]
};

struct TransformSpec {
    std::vector<AttributeTransform> attributes;
    ClassMap class_map;

    int n_attributes() const { return static_cast<int>(attributes.size()); }
};

struct TransformedDataset {
    std::vector<std::vector<double>> node_reliability_vectors;
    std::vector<std::uint8_t> y01;
    double theta = 0.0;

    int n_instances() const { return static_cast<int>(node_reliability_vectors.size()); }
    int n_attributes() const {
        return node_reliability_vectors.empty()
                   ? 0
                   : static_cast<int>(node_reliability_vectors.front().size());
    }
};

// CSV: comma separated, optional header (detected by a non-numeric
// attribute field in the first row), class label in the last column.
// LIBSVM: "<label> <idx>:<val> ..." with 1-based strictly increasing
// indices; absent indices are 0; attribute count is the maximum index seen.
RawDataset load_dataset(const std::string& path, DataFormat format,
                        ClassPosition class_position);

// Label-only variant for prediction inputs: CSV rows may carry
// n_attributes values or n_attributes+1 (trailing label ignored); LIBSVM
// keeps its leading label token, ignored. Indices beyond n_attributes are
// an error.
std::vector<std::vector<double>> load_instances(const std::string& path, DataFormat format,
                                                int n_attributes);

// Majority label -> class 1. Exact tie: the byte-lexicographically larger
// label maps to 1. A single-label dataset maps it to 1 with theta = 1 and
// sets the single_label warning flag (also reported on stderr).
ClassMap map_classes(const RawDataset& raw);

// Average ranks (1-based, ties get the mean rank of their run).
std::vector<double> average_ranks(std::span<const double> values);

// Rank correlation: Pearson correlation of the average-rank vectors.
// Returns 0 when either side is constant.
double spearman(std::span<const double> a, std::span<const double> b);

// Per attribute: min/max over instances and the rank correlation against
// the {0,1} class; negatively correlated attributes are flipped so every
// transformed column aligns non-negatively with class 1. Constant columns
// map to 0.5.
std::pair<TransformSpec, TransformedDataset> fit_transform(const RawDataset& raw,
                                                           const ClassMap& cmap);

// Apply a frozen spec to one instance; out-of-range values clamp to [0,1].
std::vector<double> apply_transform(const TransformSpec& spec,
                                    std::span<const double> instance);

} // namespace relnet
