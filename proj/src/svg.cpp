#include "gembed/svg.hpp"

#include "gembed/errors.hpp"
#include "gembed/io.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace gembed {

namespace {

constexpr int kCanvas = 800;
constexpr int kMargin = 20;

constexpr const char* kPalette[16] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
    "#8c6d31", "#843c39", "#7b4173", "#3182bd",
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace

bool plot_svg(const Mat& embedding, const std::vector<int>& labels, const std::string& path) {
    if (embedding.cols() != 2)
        throw invalid_parameter("plot_svg: only 2-dimensional embeddings are supported");
    if (!labels.empty() && static_cast<Index>(labels.size()) != embedding.rows())
        throw invalid_parameter("plot_svg: label count mismatch");

    const double min_x = embedding.col(0).minCoeff();
    const double max_x = embedding.col(0).maxCoeff();
    const double min_y = embedding.col(1).minCoeff();
    const double max_y = embedding.col(1).maxCoeff();
    const double span_x = max_x > min_x ? max_x - min_x : 1.0;
    const double span_y = max_y > min_y ? max_y - min_y : 1.0;
    const double usable = kCanvas - 2 * kMargin;

    bool wrapped = false;
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kCanvas << " "
        << kCanvas << "\" width=\"" << kCanvas << "\" height=\"" << kCanvas << "\">\n";
    for (Index i = 0; i < embedding.rows(); ++i) {
        const double px = kMargin + usable * (embedding(i, 0) - min_x) / span_x;
        // SVG y grows downward.
        const double py = kCanvas - kMargin - usable * (embedding(i, 1) - min_y) / span_y;
        int color = 0;
        if (!labels.empty() && labels[static_cast<std::size_t>(i)] >= 0) {
            const int label = labels[static_cast<std::size_t>(i)];
            if (label >= 16) wrapped = true;
            color = label % 16;
        }
        out << "<circle cx=\"" << fmt(px) << "\" cy=\"" << fmt(py)
            << "\" r=\"2\" fill=\"" << kPalette[color] << "\"/>\n";
    }
    out << "</svg>\n";
    atomic_write_text(path, out.str());
    return wrapped;
}

} // namespace gembed
