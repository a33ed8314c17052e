#pragma once

#include <complex>
#include <cstddef>

namespace torus::kernels {

// Product of the complex numbers re[k] + i*im[k].
using ComplexProductFn = std::complex<double> (*)(const double* re, const double* im, std::size_t n);
// Sum of (are[k] + i*aim[k]) * (bre[k] + i*bim[k]).
using ComplexDotFn = std::complex<double> (*)(const double* are, const double* aim, const double* bre,
                                              const double* bim, std::size_t n);

namespace scalar {
std::complex<double> complex_product(const double* re, const double* im, std::size_t n);
std::complex<double> complex_dot(const double* are, const double* aim, const double* bre, const double* bim,
                                 std::size_t n);
}  // namespace scalar

namespace avx2 {
bool available();
std::complex<double> complex_product(const double* re, const double* im, std::size_t n);
std::complex<double> complex_dot(const double* are, const double* aim, const double* bre, const double* bim,
                                 std::size_t n);
}  // namespace avx2

// Selected once from the CPU; TORUS_SCALAR=1 forces the scalar kernels.
std::complex<double> complex_product(const double* re, const double* im, std::size_t n);
std::complex<double> complex_dot(const double* are, const double* aim, const double* bre, const double* bim,
                                 std::size_t n);
const char* active_variant();

}  // namespace torus::kernels
