#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <variant>

#include "chaoskit/grid_kernel.hpp"

namespace chaoskit {

/// Kernel file contents:
///   {"model": "classical"|"free", "p": int, "m": int, "mode": "exact"|"float",
///    "coeffs": [...], "scale_sq": optional}
/// Coefficients are row-major; exact mode takes strings "num/den" (or
/// integers), float mode takes numbers. The optional scale_sq (same encoding)
/// stands for the factor sqrt(scale_sq) applied to every coefficient.
template <ChaosScalar T>
struct KernelDocument {
  Model model;
  ScaledKernel<T> kernel;
};

using AnyKernelDocument = std::variant<KernelDocument<Rational>, KernelDocument<double>>;

/// Throws InputError on malformed input.
AnyKernelDocument parse_kernel_json(const nlohmann::json& doc);
AnyKernelDocument read_kernel_file(const std::string& path);

template <ChaosScalar T>
nlohmann::json kernel_to_json(const ScaledKernel<T>& f, Model model);

/// JSON encoding of one scalar: string for exact mode, number for float.
template <ChaosScalar T>
nlohmann::json scalar_to_json(const T& value);

}  // namespace chaoskit
