#include "lapdict/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

namespace lapdict {

namespace {

void write_u64(std::ostream& out, std::uint64_t v) {
    std::array<char, 8> b;
    for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b.data(), 8);
}

void write_u32(std::ostream& out, std::uint32_t v) {
    std::array<char, 4> b;
    for (int i = 0; i < 4; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b.data(), 4);
}

void write_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    write_u64(out, bits);
}

std::uint64_t read_u64(std::istream& in) {
    std::array<unsigned char, 8> b;
    in.read(reinterpret_cast<char*>(b.data()), 8);
    if (!in) throw IoError("unexpected end of file");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
    return v;
}

std::uint32_t read_u32(std::istream& in) {
    std::array<unsigned char, 4> b;
    in.read(reinterpret_cast<char*>(b.data()), 4);
    if (!in) throw IoError("unexpected end of file");
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
    return v;
}

double read_f64(std::istream& in) {
    const std::uint64_t bits = read_u64(in);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

void expect_magic(std::istream& in, const char* magic, const char* what) {
    std::array<char, 4> got{};
    in.read(got.data(), 4);
    if (!in || std::memcmp(got.data(), magic, 4) != 0)
        throw IoError(std::string("bad magic for ") + what);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    return in;
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 40> buf;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void save_dataset(const std::filesystem::path& path, const LabeledDataset& ds) {
    auto out = open_out(path);
    out.write("LDS1", 4);
    write_u64(out, static_cast<std::uint64_t>(ds.signals.rows()));
    write_u64(out, static_cast<std::uint64_t>(ds.signals.cols()));
    write_u64(out, ds.class_count());
    for (Eigen::Index r = 0; r < ds.signals.rows(); ++r) {
        for (Eigen::Index c = 0; c < ds.signals.cols(); ++c) write_f64(out, ds.signals(r, c));
    }
    for (const auto l : ds.labels) write_u32(out, l);
    if (!out) throw IoError("write failure: " + path.string());
}

LabeledDataset load_dataset(const std::filesystem::path& path) {
    auto in = open_in(path);
    expect_magic(in, "LDS1", path.string().c_str());
    const auto rows = static_cast<Eigen::Index>(read_u64(in));
    const auto cols = static_cast<Eigen::Index>(read_u64(in));
    read_u64(in);  // class count, recoverable from the labels
    LabeledDataset ds;
    ds.signals.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) ds.signals(r, c) = read_f64(in);
    }
    ds.labels.resize(static_cast<std::size_t>(cols));
    for (auto& l : ds.labels) l = read_u32(in);

    // layout metadata is not part of the container; square signal counts are
    // interpreted as vectorized square matrices
    const auto m = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(rows))));
    if (m * m == rows && m > 1) {
        ds.layout = SignalLayout::VectorizedLaplacian;
        ds.signal_rows = static_cast<int>(m);
        ds.signal_cols = static_cast<int>(m);
    } else {
        ds.layout = SignalLayout::GraphSignal;
        ds.signal_rows = static_cast<int>(rows);
        ds.signal_cols = 1;
    }
    return ds;
}

void export_dataset_csv(const std::filesystem::path& path, const LabeledDataset& ds) {
    auto out = open_out(path);
    for (Eigen::Index c = 0; c < ds.signals.cols(); ++c) {
        for (Eigen::Index r = 0; r < ds.signals.rows(); ++r) {
            out << format_double(ds.signals(r, c)) << ',';
        }
        out << ds.labels[static_cast<std::size_t>(c)] << '\n';
    }
    if (!out) throw IoError("write failure: " + path.string());
}

void save_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
    auto out = open_out(path);
    out.write("LDM1", 4);
    write_u64(out, static_cast<std::uint64_t>(m.rows()));
    write_u64(out, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) write_f64(out, m(r, c));
    }
    if (!out) throw IoError("write failure: " + path.string());
}

Eigen::MatrixXd load_matrix(const std::filesystem::path& path) {
    auto in = open_in(path);
    expect_magic(in, "LDM1", path.string().c_str());
    const auto rows = static_cast<Eigen::Index>(read_u64(in));
    const auto cols = static_cast<Eigen::Index>(read_u64(in));
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = read_f64(in);
    }
    return m;
}

void save_report_json(const std::filesystem::path& path, const ClassifierReport& report) {
    nlohmann::ordered_json j;
    j["accuracy"] = report.accuracy;
    j["confusion"] = report.confusion;
    j["precision"] = report.precision;
    j["recall"] = report.recall;
    if (!report.config_echo.empty()) j["config"] = nlohmann::json::parse(report.config_echo);
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failure: " + path.string());
}

void save_report_csv(const std::filesystem::path& path, const ClassifierReport& report) {
    auto out = open_out(path);
    out << "metric,class,value\n";
    out << "accuracy,," << format_double(report.accuracy) << '\n';
    for (std::size_t c = 0; c < report.precision.size(); ++c) {
        out << "precision," << c << ',' << format_double(report.precision[c]) << '\n';
        out << "recall," << c << ',' << format_double(report.recall[c]) << '\n';
    }
    for (std::size_t t = 0; t < report.confusion.size(); ++t) {
        for (std::size_t p = 0; p < report.confusion[t].size(); ++p) {
            out << "confusion_" << t << '_' << p << ",," << report.confusion[t][p] << '\n';
        }
    }
    if (!out) throw IoError("write failure: " + path.string());
}

}  // namespace lapdict
