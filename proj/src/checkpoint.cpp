#include "ssm/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ssm/errors.hpp"

namespace ssm {

namespace {

constexpr const char* kMagic = "ssm-checkpoint v1";

void write_matrix_rows(std::ofstream& out, const Matrix& m) {
    char buf[64];
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c > 0) out << " ";
            std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
            out << buf;
        }
        out << "\n";
    }
}

void write_vector(std::ofstream& out, const Vector& v) {
    char buf[64];
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out << " ";
        std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
        out << buf;
    }
    out << "\n";
}

std::string next_line(std::ifstream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line))
        throw ValidationError("checkpoint '" + path + "' ends prematurely");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::string expect_key(const std::string& line, const std::string& key, const std::string& path) {
    const std::string prefix = key + "=";
    if (line.rfind(prefix, 0) != 0)
        throw ValidationError("checkpoint '" + path + "': expected '" + key + "=', got '" +
                              line + "'");
    return line.substr(prefix.size());
}

std::vector<double> parse_row(const std::string& line, std::size_t expected,
                              const std::string& path) {
    std::istringstream ss(line);
    std::vector<double> out;
    double v = 0.0;
    while (ss >> v) out.push_back(v);
    if (out.size() != expected)
        throw ValidationError("checkpoint '" + path + "': row holds " +
                              std::to_string(out.size()) + " values, expected " +
                              std::to_string(expected));
    return out;
}

}  // namespace

void save_checkpoint(const std::string& path, const SsmNetwork& net, std::uint64_t seed) {
    net.validate();
    std::ofstream out(path);
    if (!out) throw IoError("cannot write checkpoint '" + path + "'");

    char buf[64];
    out << kMagic << "\n";
    out << "num_visible=" << net.num_visible() << "\n";
    out << "num_hidden=" << net.num_hidden() << "\n";
    out << "num_outputs=" << net.num_outputs() << "\n";
    std::snprintf(buf, sizeof(buf), "%.17g", net.p);
    out << "p=" << buf << "\n";
    out << "seed=" << seed << "\n";
    out << "W\n";
    write_matrix_rows(out, net.weights);
    out << "b_hidden\n";
    write_vector(out, net.bias_hidden);
    out << "b_visible\n";
    write_vector(out, net.bias_visible);
    out << "W_out\n";
    write_matrix_rows(out, net.readout);
    if (!out) throw IoError("failed writing checkpoint '" + path + "'");
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open checkpoint '" + path + "'");

    if (next_line(in, path) != kMagic)
        throw ValidationError("checkpoint '" + path + "' has an unrecognized format line");

    const auto read_count = [&](const char* key) {
        const std::string v = expect_key(next_line(in, path), key, path);
        const long long n = std::stoll(v);
        if (n < 1)
            throw ValidationError("checkpoint '" + path + "': " + key + " must be >= 1");
        return static_cast<std::size_t>(n);
    };
    const std::size_t n_vis = read_count("num_visible");
    const std::size_t n_hid = read_count("num_hidden");
    const std::size_t n_out = read_count("num_outputs");

    LoadedCheckpoint ck;
    ck.network.p = std::stod(expect_key(next_line(in, path), "p", path));
    ck.seed = std::stoull(expect_key(next_line(in, path), "seed", path));

    const auto read_matrix = [&](const char* name, std::size_t rows, std::size_t cols) {
        if (next_line(in, path) != name)
            throw ValidationError("checkpoint '" + path + "': expected section '" + name + "'");
        Matrix m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            const std::vector<double> row = parse_row(next_line(in, path), cols, path);
            for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c];
        }
        return m;
    };
    const auto read_vec = [&](const char* name, std::size_t len) {
        if (next_line(in, path) != name)
            throw ValidationError("checkpoint '" + path + "': expected section '" + name + "'");
        return parse_row(next_line(in, path), len, path);
    };

    ck.network.weights = read_matrix("W", n_vis, n_hid);
    ck.network.bias_hidden = read_vec("b_hidden", n_hid);
    ck.network.bias_visible = read_vec("b_visible", n_vis);
    ck.network.readout = read_matrix("W_out", n_hid, n_out);
    ck.network.validate();
    return ck;
}

}  // namespace ssm
