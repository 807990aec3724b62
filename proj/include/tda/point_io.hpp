#pragma once

#include <string>

#include "tda/samplers.hpp"

namespace tda {

enum class PointFormat { Csv, Json };

// CSV: one point per row, decimal floats, no header unless skip_header.
// JSON: array of arrays of numbers.  Rows must have uniform dimension.
PointCloud load_point_cloud(const std::string& path, PointFormat format,
                            bool skip_header = false);

void save_point_cloud(const std::string& path, const PointCloud& points,
                      PointFormat format);

} // namespace tda
