#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <string>

#include "minresmon/errors.hpp"

namespace minresmon {

using Vector = Eigen::VectorXd;
using SparseMat = Eigen::SparseMatrix<double>;

/// Throws InputError if any entry of v is NaN or infinite.
inline void require_finite(const Vector& v, const std::string& name)
{
    if (!v.allFinite())
        throw InputError("vector '" + name + "' contains non-finite entries");
}

} // namespace minresmon
