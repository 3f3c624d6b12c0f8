#include "ssm/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ssm/errors.hpp"
#include "ssm/rng.hpp"

namespace ssm {

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_value(const std::string& field, std::size_t row, std::size_t col) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &used);
    } catch (const std::exception&) {
        throw ValidationError("dataset row " + std::to_string(row) + ", col " +
                              std::to_string(col) + ": '" + field + "' is not a number");
    }
    if (used != field.size())
        throw ValidationError("dataset row " + std::to_string(row) + ", col " +
                              std::to_string(col) + ": trailing characters in '" + field + "'");
    return v;
}

double box_muller(RngStream& rng) {
    const double u1 = 1.0 - rng.next_uniform();
    const double u2 = rng.next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace

Dataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset file '" + path + "'");

    std::string header;
    if (!std::getline(in, header))
        throw ValidationError("dataset file '" + path + "' is empty");
    const std::vector<std::string> cols = split_commas(header);
    bool labeled = !cols.empty() && cols.back() == "label";
    const std::size_t dim = labeled ? cols.size() - 1 : cols.size();
    if (dim == 0) throw ValidationError("dataset file '" + path + "' has no value columns");
    for (std::size_t c = 0; c < dim; ++c)
        if (cols[c] != "v" + std::to_string(c))
            throw ValidationError("dataset header column " + std::to_string(c) + " is '" +
                                  cols[c] + "', expected 'v" + std::to_string(c) + "'");

    std::vector<double> values;
    std::vector<int> labels;
    std::size_t row = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_commas(line);
        if (fields.size() != cols.size())
            throw ValidationError("dataset row " + std::to_string(row) + " has " +
                                  std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(cols.size()));
        for (std::size_t c = 0; c < dim; ++c) {
            const double v = parse_value(fields[c], row, c);
            if (!(v >= 0.0 && v <= 1.0))
                throw ValidationError("dataset row " + std::to_string(row) + ", col " +
                                      std::to_string(c) + ": value " + fields[c] +
                                      " outside [0,1]");
            values.push_back(v);
        }
        if (labeled) {
            const double lv = parse_value(fields[dim], row, dim);
            const int label = static_cast<int>(lv);
            if (static_cast<double>(label) != lv || label < 0)
                throw ValidationError("dataset row " + std::to_string(row) +
                                      ": label must be a non-negative integer");
            labels.push_back(label);
        }
        ++row;
    }

    Dataset ds;
    ds.examples = Matrix(row, dim);
    for (std::size_t r = 0; r < row; ++r)
        for (std::size_t c = 0; c < dim; ++c) ds.examples(r, c) = values[r * dim + c];
    ds.labels = std::move(labels);
    return ds;
}

void save_dataset_csv(const std::string& path, const Dataset& ds) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write dataset file '" + path + "'");
    for (std::size_t c = 0; c < ds.examples.cols(); ++c) {
        if (c > 0) out << ",";
        out << "v" << c;
    }
    if (ds.has_labels()) out << ",label";
    out << "\n";

    char buf[64];
    for (std::size_t r = 0; r < ds.examples.rows(); ++r) {
        for (std::size_t c = 0; c < ds.examples.cols(); ++c) {
            if (c > 0) out << ",";
            std::snprintf(buf, sizeof(buf), "%.17g", ds.examples(r, c));
            out << buf;
        }
        if (ds.has_labels()) out << "," << ds.labels[r];
        out << "\n";
    }
    if (!out) throw IoError("failed writing dataset file '" + path + "'");
}

Dataset make_bars_stripes(std::size_t rows, std::size_t cols) {
    if (rows < 1 || cols < 1) throw ValidationError("bars-stripes needs rows and cols >= 1");
    if (rows > 16 || cols > 16) throw ValidationError("bars-stripes limited to 16 rows or cols");
    const std::size_t n_bars = std::size_t{1} << rows;
    const std::size_t n_stripes = std::size_t{1} << cols;

    Dataset ds;
    ds.examples = Matrix(n_bars + n_stripes, rows * cols);
    ds.labels.reserve(n_bars + n_stripes);
    for (std::size_t b = 0; b < n_bars; ++b) {
        for (std::size_t i = 0; i < rows; ++i) {
            const double on = (b >> i) & 1u ? 1.0 : 0.0;
            for (std::size_t j = 0; j < cols; ++j) ds.examples(b, i * cols + j) = on;
        }
        ds.labels.push_back(0);
    }
    for (std::size_t s = 0; s < n_stripes; ++s) {
        const std::size_t r = n_bars + s;
        for (std::size_t j = 0; j < cols; ++j) {
            const double on = (s >> j) & 1u ? 1.0 : 0.0;
            for (std::size_t i = 0; i < rows; ++i) ds.examples(r, i * cols + j) = on;
        }
        ds.labels.push_back(1);
    }
    return ds;
}

Dataset make_blobs(std::size_t per_class, std::size_t dim, double sep_sigmas, double sigma,
                   std::uint64_t seed) {
    if (per_class < 1 || dim < 1) throw ValidationError("blobs need per_class and dim >= 1");
    if (!(sigma > 0.0) || !(sep_sigmas >= 0.0))
        throw ValidationError("blobs need sigma > 0 and sep_sigmas >= 0");

    RngStream rng(seed);
    Dataset ds;
    ds.examples = Matrix(2 * per_class, dim);
    ds.labels.reserve(2 * per_class);
    for (int cls = 0; cls < 2; ++cls) {
        const double center = 0.5 + (cls == 0 ? -1.0 : 1.0) * sep_sigmas * sigma / 2.0;
        for (std::size_t n = 0; n < per_class; ++n) {
            const std::size_t r = static_cast<std::size_t>(cls) * per_class + n;
            for (std::size_t d = 0; d < dim; ++d) {
                const double v = center + sigma * box_muller(rng);
                ds.examples(r, d) = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
            }
            ds.labels.push_back(cls);
        }
    }
    return ds;
}

}  // namespace ssm
