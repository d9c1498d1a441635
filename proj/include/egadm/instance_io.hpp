#pragma once

#include <filesystem>
#include <stdexcept>

#include "egadm/basis_pursuit.hpp"
#include "egadm/fused_logistic.hpp"

// On-disk instance layout, one directory per instance:
//   meta.json     kind, dimensions, seed, format_version (+ intercept for fused)
//   A.mtx         Matrix Market "array real general", column-major
//   b.txt         right-hand side (labels for fused), one value per line
//   xhat.txt      planted coefficients, one value per line
//   labels.txt    fused only, same content as b.txt
//   pattern.json  fused only, generator name and parameters
// Reals are written with 17 significant digits.

namespace egadm::io {

inline constexpr int kFormatVersion = 1;

class InstanceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InstanceKind { BasisPursuit, FusedLogistic };

void write_matrix_market(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_market(const std::filesystem::path& path);

void write_vector(const std::filesystem::path& path, const Vector& v);
Vector read_vector(const std::filesystem::path& path);

void write_instance(const std::filesystem::path& dir,
                    const bp::BasisPursuitInstance& inst);
void write_instance(const std::filesystem::path& dir,
                    const fused::FusedLogisticInstance& inst);

InstanceKind detect_kind(const std::filesystem::path& dir);
bp::BasisPursuitInstance read_bp_instance(const std::filesystem::path& dir);
fused::FusedLogisticInstance read_fused_instance(
    const std::filesystem::path& dir);

}  // namespace egadm::io
