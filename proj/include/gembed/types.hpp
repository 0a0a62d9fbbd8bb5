#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

namespace gembed {

using Index = Eigen::Index;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Label id marking a point with no class.
inline constexpr int kUnlabeled = -1;

// N x K feature matrix plus optional dense class ids (empty when absent).
struct PointCloud {
    Mat points;
    std::vector<int> labels;

    Index size() const { return points.rows(); }
    Index dim() const { return points.cols(); }
    bool has_labels() const { return !labels.empty(); }
};

} // namespace gembed
