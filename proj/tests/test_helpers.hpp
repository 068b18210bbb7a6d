#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <unistd.h>

#include <Eigen/Dense>

#include "minresmon/operators.hpp"
#include "minresmon/rng.hpp"
#include "minresmon/types.hpp"

namespace testhelp {

using Eigen::MatrixXd;

inline MatrixXd dense(const minresmon::SparseMat& m) { return MatrixXd(m); }

/// Materializes an operator column by column through its apply.
inline MatrixXd dense_operator(const minresmon::SaddleOperator& op)
{
    const int n = op.dim();
    MatrixXd out(n, n);
    minresmon::Vector e = minresmon::Vector::Zero(n);
    minresmon::Vector col(n);
    for (int j = 0; j < n; ++j) {
        e[j] = 1.0;
        op.apply_into(e, col);
        out.col(j) = col;
        e[j] = 0.0;
    }
    return out;
}

/// Dense LU solve, the direct oracle for small systems.
inline minresmon::Vector direct_solve(const MatrixXd& K, const minresmon::Vector& f)
{
    return K.partialPivLu().solve(f);
}

inline minresmon::Vector random_vector(minresmon::Rng& rng, int n)
{
    minresmon::Vector v(n);
    for (int i = 0; i < n; ++i)
        v[i] = rng.normal();
    return v;
}

/// Dense SPD matrix R^T R + n I as a sparse block.
inline minresmon::SparseMat random_spd(minresmon::Rng& rng, int n)
{
    MatrixXd r(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            r(i, j) = rng.normal();
    const MatrixXd spd = r.transpose() * r + static_cast<double>(n) * MatrixXd::Identity(n, n);
    return spd.sparseView();
}

/// Self-removing scratch directory for file round-trip tests.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag)
    {
        path = std::filesystem::temp_directory_path() /
               ("minresmon_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }

    ~TempDir() { std::filesystem::remove_all(path); }

    std::filesystem::path file(const std::string& name) const { return path / name; }
};

inline void write_text(const std::filesystem::path& p, const std::string& content)
{
    std::ofstream out(p);
    out << content;
}

inline std::string read_text(const std::filesystem::path& p)
{
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace testhelp
