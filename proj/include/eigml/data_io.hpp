#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "eigml/kernel_ridge.hpp"
#include "eigml/mf_sgd.hpp"
#include "eigml/types.hpp"

namespace eigml::io {

// CSV dialect: comma separated, '.' decimal point, no quoting, optional
// trailing newline. Blank lines are not allowed inside the data.

/// Reads a `user,item,value` file. Ratings keep file order.
std::vector<Rating> load_ratings(const std::filesystem::path& path);
void save_ratings(const std::filesystem::path& path, const std::vector<Rating>& ratings);

/// Headerless rectangular numeric CSV. An empty file yields a 0 x 0 matrix.
Matrix load_matrix(const std::filesystem::path& path);
/// Headerless single-column numeric CSV.
Vector load_vector(const std::filesystem::path& path);

/// Values are written in shortest round-trip form, so reading back is exact.
void save_matrix(const std::filesystem::path& path, const Matrix& m);
void save_vector(const std::filesystem::path& path, const Vector& v);

enum class ModelKind { kernel_ridge, mf_sgd };

inline constexpr int kArchiveVersion = 1;

std::string to_string(ModelKind kind);

/// Model archives are JSON documents:
///   {"format": "eigml-model", "kind": "...", "version": 1, "payload": {...}}
/// where the payload maps each field name to a typed array. Doubles are
/// emitted in shortest round-trip decimal form, so loading is bit-exact.
void save_model(const KernelRidgeModel& model, const std::filesystem::path& path);
void save_model(const MatrixFactorizationSGD& model, const std::filesystem::path& path);

/// Kind recorded in an archive, after the format/version checks.
ModelKind archive_kind(const std::filesystem::path& path);

/// Both loaders throw FormatError on a version or kind mismatch.
KernelRidgeModel load_kernel_ridge(const std::filesystem::path& path);
MatrixFactorizationSGD load_mf(const std::filesystem::path& path);

}  // namespace eigml::io
