#pragma once

#include "gembed/graph.hpp"
#include "gembed/types.hpp"

#include <string>
#include <vector>

namespace gembed {

// Point cloud CSV: one row per point, feature columns, and a final integer
// label column when a header names it `label`. Files without a header are
// read as all-features.
PointCloud read_points_csv(const std::string& path);
void write_points_csv(const std::string& path, const PointCloud& cloud);

// Headerless numeric matrix (a leading non-numeric line is skipped).
Mat read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Mat& m);

// Embedding CSV with header e0,e1[,e2,...].
void write_embedding_csv(const std::string& path, const Mat& embedding);
Mat read_embedding_csv(const std::string& path);

// Label column: single-column CSV, or the label column of a points CSV.
std::vector<int> read_labels_csv(const std::string& path);

// Edge list: header line `N E`, then `i j w` per undirected edge (0-based,
// each edge once).
SparseGraph read_edge_list(const std::string& path);
void write_edge_list(const std::string& path, const SparseGraph& graph);

// All writers go through a temp file + rename so outputs are never partial.
void atomic_write_text(const std::string& path, const std::string& content);

} // namespace gembed
