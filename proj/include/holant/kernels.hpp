#pragma once

#include <complex>

namespace holant::kernels {

enum class Path { Scalar, Avx2 };

// Fastest path supported by the running CPU.
Path best_path();
const char* path_name(Path p);

// In place: applies the row-major 2x2 matrix m to leg `leg` (0 = most
// significant bit) of a table of 2^arity complex values.
void apply_leg(std::complex<double>* v, int arity, int leg, const std::complex<double> m[4], Path p);
void apply_leg_scalar(std::complex<double>* v, int arity, int leg, const std::complex<double> m[4]);
void apply_leg_avx2(std::complex<double>* v, int arity, int leg, const std::complex<double> m[4]);

}  // namespace holant::kernels
