#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace relcomp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// n x d matrix of observations, one row per observation. Row-major so that
/// each observation is contiguous.
using Sample = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using VectorRef = Eigen::Ref<const Vector>;

/// Maps a point x to grad_x log p(x). Output length must equal input length.
using ScoreFunction = std::function<Vector(const VectorRef&)>;

/// Throws InvalidArgument if any entry of `sample` is not finite.
void require_finite(const Sample& sample, const std::string& what);

/// Rows [begin, begin + count) as a new sample.
Sample take_rows(const Sample& sample, std::size_t begin, std::size_t count);

/// Vertical concatenation; all inputs must share the column count.
Sample stack_rows(const std::vector<const Sample*>& parts);

}  // namespace relcomp
