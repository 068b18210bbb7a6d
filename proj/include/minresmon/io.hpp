#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "minresmon/partition.hpp"
#include "minresmon/solver.hpp"
#include "minresmon/types.hpp"
#include "minresmon/verify.hpp"

namespace minresmon {

/// Matrix Market coordinate format, real field, general or symmetric
/// (symmetric files are expanded to full storage). File indices are 1-based.
/// Malformed content raises ParseError with the offending line number;
/// array/complex/pattern files are rejected as unsupported.
SparseMat read_matrix_market(const std::filesystem::path& path);

/// Writes coordinate real general, entries in column-major order, values in
/// round-trip precision. Output is byte-deterministic.
void write_matrix_market(const SparseMat& mat, const std::filesystem::path& path);

/// Vectors travel as n-by-1 coordinate files; absent entries are zeros.
Vector read_vector_market(const std::filesystem::path& path);
void write_vector_market(const Vector& v, const std::filesystem::path& path);

/// Text partition format, one block per line: `<label> <spec>` where spec is
/// a comma-separated list of 0-based indices and/or half-open `a:b` ranges.
/// Blocks must tile {0..n-1} with n inferred from the largest index.
BlockPartition read_partition(const std::filesystem::path& path);
void write_partition(const BlockPartition& part, const std::filesystem::path& path);

/// CSV with header `iter,eta,eta_rel,eta_<label>...,mu_<label>...` and one
/// row per iteration including j = 0. Values carry round-trip precision.
void write_convergence_csv(const ConvergenceHistory& history, const std::filesystem::path& path);

/// Reads the CSV back; the termination reason is not stored in the file and
/// comes back as Running.
ConvergenceHistory read_convergence_csv(const std::filesystem::path& path);

/// Rowwise oracle comparison: progressive and explicit block norms with
/// absolute and relative deviations.
void write_oracle_report_csv(const OracleReport& report, const std::vector<std::string>& labels,
                             const std::filesystem::path& path);

} // namespace minresmon
