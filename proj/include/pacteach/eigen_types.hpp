#pragma once

#include <Eigen/Dense>

namespace pacteach {

// Row-major storage: the hot loops walk one concept row at a time
// (per-example keep probabilities, similarity reductions), so keep
// each row contiguous.
using ArrayXXd = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ArrayXXi = Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Eigen::ArrayXd;
using Eigen::ArrayXi;
using Eigen::Index;

}  // namespace pacteach
