#pragma once

#include "gembed/types.hpp"

#include <string>
#include <vector>

namespace gembed {

// Deterministic scatter plot of a 2D embedding: fixed 800x800 viewbox, radius
// 2 circles in input order, one palette color per class (16 colors, wrapping
// with a warning flag for more). Unlabeled inputs share the first color.
// Returns true when the palette wrapped.
bool plot_svg(const Mat& embedding, const std::vector<int>& labels, const std::string& path);

} // namespace gembed
