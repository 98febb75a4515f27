#include "relnet/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>

namespace relnet {

namespace {

std::string_view trim(std::string_view sv) {
    while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t')) sv.remove_prefix(1);
    while (!sv.empty() && (sv.back() == ' ' || sv.back() == '\t' || sv.back() == '\r'))
        sv.remove_suffix(1);
    return sv;
}

bool parse_double(std::string_view sv, double& out) {
    sv = trim(sv);
    if (sv.empty()) return false;
    const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), out);
    return ec == std::errc() && ptr == sv.data() + sv.size() && std::isfinite(out);
}

bool parse_int(std::string_view sv, int& out) {
    sv = trim(sv);
    if (sv.empty()) return false;
    const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), out);
    return ec == std::errc() && ptr == sv.data() + sv.size();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

[[noreturn]] void fail(const std::string& path, int line_no, const std::string& msg) {
    throw DataError(path + ":" + std::to_string(line_no) + ": " + msg);
}

struct SparseRow {
    std::string label;
    std::vector<std::pair<int, double>> entries;
};

// One pass over a LIBSVM file: sparse rows plus the maximum feature index.
std::pair<std::vector<SparseRow>, int> read_libsvm_rows(const std::string& path,
                                                        std::ifstream& in) {
    std::vector<SparseRow> rows;
    int max_index = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view stripped = trim(line);
        if (stripped.empty()) continue;
        const auto tokens = split_ws(stripped);
        SparseRow row;
        row.label = std::string(tokens.front());
        int prev_index = 0;
        for (std::size_t t = 1; t < tokens.size(); ++t) {
            const std::string_view tok = tokens[t];
            const std::size_t colon = tok.find(':');
            if (colon == std::string_view::npos)
                fail(path, line_no, "expected index:value, got '" + std::string(tok) + "'");
            int index = 0;
            double value = 0.0;
            if (!parse_int(tok.substr(0, colon), index) || index < 1)
                fail(path, line_no, "bad feature index in '" + std::string(tok) + "'");
            if (!parse_double(tok.substr(colon + 1), value))
                fail(path, line_no, "bad feature value in '" + std::string(tok) + "'");
            if (index <= prev_index)
                fail(path, line_no, "feature indices must be strictly increasing");
            prev_index = index;
            row.entries.push_back({index, value});
            max_index = std::max(max_index, index);
        }
        rows.push_back(std::move(row));
    }
    return {std::move(rows), max_index};
}

std::vector<double> densify(const SparseRow& row, int n_attributes) {
    std::vector<double> values(n_attributes, 0.0);
    for (const auto& [index, value] : row.entries) values[index - 1] = value;
    return values;
}

void check_label_count(const std::string& path, const std::vector<std::string>& labels) {
    std::vector<std::string> distinct;
    for (const auto& label : labels)
        if (std::find(distinct.begin(), distinct.end(), label) == distinct.end()) {
            distinct.push_back(label);
            if (distinct.size() > 2) {
                std::string msg = "more than two classes:";
                for (const auto& d : distinct) msg += " '" + d + "'";
                throw DataError(path + ": " + msg);
            }
        }
}

RawDataset load_csv(const std::string& path, std::ifstream& in) {
    RawDataset raw;
    std::string line;
    int line_no = 0;
    int n_columns = -1;
    bool first_content_row = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(trim(line), ',');
        if (fields.size() < 2) fail(path, line_no, "need at least one attribute and a label");

        if (first_content_row) {
            first_content_row = false;
            // header iff any attribute field (all but the label column) is
            // non-numeric
            bool header = false;
            double ignored;
            for (std::size_t j = 0; j + 1 < fields.size(); ++j)
                if (!parse_double(fields[j], ignored)) header = true;
            if (header) {
                n_columns = static_cast<int>(fields.size());
                continue;
            }
        }
        if (n_columns < 0) n_columns = static_cast<int>(fields.size());
        if (static_cast<int>(fields.size()) != n_columns)
            fail(path, line_no,
                 "expected " + std::to_string(n_columns) + " columns, got " +
                     std::to_string(fields.size()));

        std::vector<double> values(fields.size() - 1);
        for (std::size_t j = 0; j + 1 < fields.size(); ++j)
            if (!parse_double(fields[j], values[j]))
                fail(path, line_no, "bad numeric value '" + std::string(trim(fields[j])) + "'");
        raw.instances.push_back(std::move(values));
        raw.labels.push_back(std::string(trim(fields.back())));
    }
    if (raw.instances.empty()) throw DataError(path + ": no instances");
    raw.n_attributes = static_cast<int>(raw.instances.front().size());
    return raw;
}

} // namespace

RawDataset load_dataset(const std::string& path, DataFormat format,
                        ClassPosition class_position) {
    if ((format == DataFormat::csv && class_position != ClassPosition::last_column) ||
        (format == DataFormat::libsvm && class_position != ClassPosition::libsvm_leading))
        throw std::invalid_argument("load_dataset: class position does not match format");

    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open file");

    RawDataset raw;
    if (format == DataFormat::csv) {
        raw = load_csv(path, in);
    } else {
        auto [rows, max_index] = read_libsvm_rows(path, in);
        if (rows.empty()) throw DataError(path + ": no instances");
        if (max_index == 0) throw DataError(path + ": no attribute values found");
        raw.n_attributes = max_index;
        raw.instances.reserve(rows.size());
        raw.labels.reserve(rows.size());
        for (const auto& row : rows) {
            raw.instances.push_back(densify(row, max_index));
            raw.labels.push_back(row.label);
        }
    }
    check_label_count(path, raw.labels);
    return raw;
}

std::vector<std::vector<double>> load_instances(const std::string& path, DataFormat format,
                                                int n_attributes) {
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open file");

    std::vector<std::vector<double>> instances;
    if (format == DataFormat::libsvm) {
        auto [rows, max_index] = read_libsvm_rows(path, in);
        if (max_index > n_attributes)
            throw DataError(path + ": feature index " + std::to_string(max_index) +
                            " exceeds the model's " + std::to_string(n_attributes) +
                            " attributes");
        instances.reserve(rows.size());
        for (const auto& row : rows) instances.push_back(densify(row, n_attributes));
    } else {
        std::string line;
        int line_no = 0;
        bool first_content_row = true;
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty()) continue;
            const auto fields = split(trim(line), ',');
            const int cols = static_cast<int>(fields.size());
            if (first_content_row) {
                first_content_row = false;
                bool header = false;
                double ignored;
                for (int j = 0; j < std::min(cols, n_attributes); ++j)
                    if (!parse_double(fields[j], ignored)) header = true;
                if (header) continue;
            }
            if (cols != n_attributes && cols != n_attributes + 1)
                fail(path, line_no,
                     "expected " + std::to_string(n_attributes) + " attribute values, got " +
                         std::to_string(cols) + " columns");
            std::vector<double> values(n_attributes);
            for (int j = 0; j < n_attributes; ++j)
                if (!parse_double(fields[j], values[j]))
                    fail(path, line_no,
                         "bad numeric value '" + std::string(trim(fields[j])) + "'");
            instances.push_back(std::move(values));
        }
    }
    if (instances.empty()) throw DataError(path + ": no instances");
    return instances;
}

ClassMap map_classes(const RawDataset& raw) {
    if (raw.instances.empty()) throw std::invalid_argument("map_classes: empty dataset");

    std::vector<std::pair<std::string, long long>> counts;
    for (const auto& label : raw.labels) {
        auto it = std::find_if(counts.begin(), counts.end(),
                               [&](const auto& c) { return c.first == label; });
        if (it == counts.end())
            counts.push_back({label, 1});
        else
            ++it->second;
    }

    ClassMap cmap;
    cmap.count_total = static_cast<long long>(raw.labels.size());
    if (counts.size() == 1) {
        cmap.label_for_one = counts.front().first;
        cmap.count_one = counts.front().second;
        cmap.theta = 1.0;
        cmap.single_label = true;
        std::cerr << "warning: dataset contains a single class label '" << cmap.label_for_one
                  << "'; theta = 1\n";
        return cmap;
    }

    auto& a = counts[0];
    auto& b = counts[1];
    // majority -> 1; exact tie -> byte-lexicographically larger label
    const bool a_is_one = a.second != b.second ? a.second > b.second : a.first > b.first;
    const auto& one = a_is_one ? a : b;
    const auto& zero = a_is_one ? b : a;
    cmap.label_for_one = one.first;
    cmap.label_for_zero = zero.first;
    cmap.count_one = one.second;
    cmap.theta = static_cast<double>(cmap.count_one) / static_cast<double>(cmap.count_total);
    return cmap;
}

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("spearman: size mismatch");
    if (a.size() < 2) return 0.0;
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    const double n = static_cast<double>(a.size());
    const double mean = (n + 1.0) / 2.0; // both rank vectors share this mean
    double cov = 0.0;
    double var_a = 0.0;
    double var_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = ra[i] - mean;
        const double db = rb[i] - mean;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0) return 0.0;
    return cov / std::sqrt(var_a * var_b);
}

namespace {

// shared by fit_transform and apply_transform so replaying training data is
// bit-exact
double transform_value(const AttributeTransform& at, double x) {
    if (at.max == at.min) return 0.5;
    const double t = (x - at.min) / (at.max - at.min);
    return at.flip ? 1.0 - t : t;
}

} // namespace

std::pair<TransformSpec, TransformedDataset> fit_transform(const RawDataset& raw,
                                                           const ClassMap& cmap) {
    if (raw.instances.empty()) throw std::invalid_argument("fit_transform: empty dataset");

    const int n_inst = raw.n_instances();
    const int n_attr = raw.n_attributes;

    TransformedDataset out;
    out.theta = cmap.theta;
    out.y01.resize(n_inst);
    std::vector<double> y_values(n_inst);
    for (int i = 0; i < n_inst; ++i) {
        out.y01[i] = raw.labels[i] == cmap.label_for_one ? 1 : 0;
        y_values[i] = out.y01[i];
    }

    TransformSpec spec;
    spec.class_map = cmap;
    spec.attributes.resize(n_attr);
    out.node_reliability_vectors.assign(n_inst, std::vector<double>(n_attr, 0.0));

    std::vector<double> column(n_inst);
    for (int j = 0; j < n_attr; ++j) {
        for (int i = 0; i < n_inst; ++i) column[i] = raw.instances[i][j];
        AttributeTransform& at = spec.attributes[j];
        const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
        at.min = *lo;
        at.max = *hi;
        at.r_s = spearman(column, y_values);
        at.flip = at.r_s < 0.0;
        for (int i = 0; i < n_inst; ++i)
            out.node_reliability_vectors[i][j] = transform_value(at, column[i]);
    }
    return {std::move(spec), std::move(out)};
}

std::vector<double> apply_transform(const TransformSpec& spec,
                                    std::span<const double> instance) {
    if (instance.size() != static_cast<std::size_t>(spec.n_attributes()))
        throw std::invalid_argument("apply_transform: expected " +
                                    std::to_string(spec.n_attributes()) + " values, got " +
                                    std::to_string(instance.size()));
    std::vector<double> result(instance.size());
    for (std::size_t j = 0; j < instance.size(); ++j)
        result[j] = std::clamp(transform_value(spec.attributes[j], instance[j]), 0.0, 1.0);
    return result;
}

} // namespace relnet
