#include "gembed/io.hpp"

#include "gembed/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gembed {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    return out;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> read_nonempty_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (!t.empty()) lines.push_back(t);
    }
    return lines;
}

} // namespace

void atomic_write_text(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw invalid_input("cannot open file for writing: " + tmp.string());
        out << content;
        if (!out) throw invalid_input("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw invalid_input("rename failed for: " + path);
    }
}

PointCloud read_points_csv(const std::string& path) {
    const auto lines = read_nonempty_lines(path);
    if (lines.empty()) throw invalid_input("empty point cloud file: " + path);

    const auto first = split_csv_line(lines[0]);
    const bool has_header = std::any_of(first.begin(), first.end(), [&](const std::string& c) {
        double v;
        return !parse_double(c, v);
    });
    const bool has_label_col = has_header && !first.empty() && first.back() == "label";

    PointCloud cloud;
    const std::size_t start = has_header ? 1 : 0;
    const std::size_t rows = lines.size() - start;
    if (rows == 0) throw invalid_input("point cloud file has no data rows: " + path);

    const std::size_t n_cols = split_csv_line(lines[start]).size();
    const std::size_t n_feat = has_label_col ? n_cols - 1 : n_cols;
    if (n_feat == 0) throw invalid_input("point cloud file has no feature columns: " + path);

    cloud.points.resize(static_cast<Index>(rows), static_cast<Index>(n_feat));
    if (has_label_col) cloud.labels.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto cells = split_csv_line(lines[start + r]);
        if (cells.size() != n_cols)
            throw invalid_input("ragged CSV row in: " + path);
        for (std::size_t c = 0; c < n_feat; ++c) {
            double v;
            if (!parse_double(cells[c], v))
                throw invalid_input("non-numeric feature in: " + path);
            cloud.points(static_cast<Index>(r), static_cast<Index>(c)) = v;
        }
        if (has_label_col) {
            double v;
            if (!parse_double(cells.back(), v))
                throw invalid_input("non-numeric label in: " + path);
            cloud.labels[r] = static_cast<int>(std::lround(v));
        }
    }
    return cloud;
}

void write_points_csv(const std::string& path, const PointCloud& cloud) {
    std::ostringstream out;
    for (Index c = 0; c < cloud.dim(); ++c) out << (c ? "," : "") << "x" << c;
    if (cloud.has_labels()) out << ",label";
    out << "\n";
    for (Index r = 0; r < cloud.size(); ++r) {
        for (Index c = 0; c < cloud.dim(); ++c)
            out << (c ? "," : "") << format_double(cloud.points(r, c));
        if (cloud.has_labels()) out << "," << cloud.labels[static_cast<std::size_t>(r)];
        out << "\n";
    }
    atomic_write_text(path, out.str());
}

Mat read_matrix_csv(const std::string& path) {
    auto lines = read_nonempty_lines(path);
    if (lines.empty()) throw invalid_input("empty matrix file: " + path);

    // A single leading non-numeric line is treated as a header and skipped.
    std::size_t start = 0;
    {
        const auto cells = split_csv_line(lines[0]);
        double v;
        if (std::any_of(cells.begin(), cells.end(),
                        [&](const std::string& c) { return !parse_double(c, v); }))
            start = 1;
    }
    if (start >= lines.size()) throw invalid_input("matrix file has no data rows: " + path);

    const std::size_t rows = lines.size() - start;
    const std::size_t cols = split_csv_line(lines[start]).size();
    Mat m(static_cast<Index>(rows), static_cast<Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        const auto cells = split_csv_line(lines[start + r]);
        if (cells.size() != cols) throw invalid_input("ragged CSV row in: " + path);
        for (std::size_t c = 0; c < cols; ++c) {
            double v;
            if (!parse_double(cells[c], v))
                throw invalid_input("non-numeric value in: " + path);
            m(static_cast<Index>(r), static_cast<Index>(c)) = v;
        }
    }
    return m;
}

void write_matrix_csv(const std::string& path, const Mat& m) {
    std::ostringstream out;
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) out << (c ? "," : "") << format_double(m(r, c));
        out << "\n";
    }
    atomic_write_text(path, out.str());
}

void write_embedding_csv(const std::string& path, const Mat& embedding) {
    std::ostringstream out;
    for (Index c = 0; c < embedding.cols(); ++c) out << (c ? "," : "") << "e" << c;
    out << "\n";
    for (Index r = 0; r < embedding.rows(); ++r) {
        for (Index c = 0; c < embedding.cols(); ++c)
            out << (c ? "," : "") << format_double(embedding(r, c));
        out << "\n";
    }
    atomic_write_text(path, out.str());
}

Mat read_embedding_csv(const std::string& path) { return read_matrix_csv(path); }

std::vector<int> read_labels_csv(const std::string& path) {
    const auto lines = read_nonempty_lines(path);
    if (lines.empty()) throw invalid_input("empty labels file: " + path);

    const auto header = split_csv_line(lines[0]);
    double v;
    const bool has_header = std::any_of(header.begin(), header.end(),
                                        [&](const std::string& c) { return !parse_double(c, v); });
    if (has_header && header.size() > 1) {
        // Points CSV with a label column.
        if (header.back() != "label")
            throw invalid_input("labels file has no `label` column: " + path);
        const PointCloud cloud = read_points_csv(path);
        return cloud.labels;
    }

    std::vector<int> labels;
    labels.reserve(lines.size());
    for (std::size_t r = has_header ? 1 : 0; r < lines.size(); ++r) {
        const auto cells = split_csv_line(lines[r]);
        double val;
        if (!parse_double(cells.back(), val))
            throw invalid_input("non-numeric label in: " + path);
        labels.push_back(static_cast<int>(std::lround(val)));
    }
    return labels;
}

SparseGraph read_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open file: " + path);
    Index n = 0, e = 0;
    if (!(in >> n >> e)) throw invalid_input("edge list missing `N E` header: " + path);
    std::vector<Eigen::Triplet<double>> edges;
    edges.reserve(static_cast<std::size_t>(e));
    for (Index t = 0; t < e; ++t) {
        Index i = 0, j = 0;
        double w = 0.0;
        if (!(in >> i >> j >> w)) throw invalid_input("truncated edge list: " + path);
        edges.emplace_back(i, j, w);
    }
    return graph_from_edges(n, edges);
}

void write_edge_list(const std::string& path, const SparseGraph& graph) {
    std::ostringstream out;
    out << graph.n_vertices() << " " << graph.n_edges() << "\n";
    for (Index r = 0; r < graph.adjacency.outerSize(); ++r)
        for (SpMat::InnerIterator it(graph.adjacency, r); it; ++it)
            if (it.row() < it.col())
                out << it.row() << " " << it.col() << " " << format_double(it.value()) << "\n";
    atomic_write_text(path, out.str());
}

} // namespace gembed
