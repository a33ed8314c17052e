#include "torus/kernels.hpp"

namespace torus::kernels::scalar {

std::complex<double> complex_product(const double* re, const double* im, std::size_t n) {
    double pr = 1.0, pi = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double r = pr * re[k] - pi * im[k];
        pi = pr * im[k] + pi * re[k];
        pr = r;
    }
    return {pr, pi};
}

std::complex<double> complex_dot(const double* are, const double* aim, const double* bre, const double* bim,
                                 std::size_t n) {
    double sr = 0.0, si = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sr += are[k] * bre[k] - aim[k] * bim[k];
        si += are[k] * bim[k] + aim[k] * bre[k];
    }
    return {sr, si};
}

}  // namespace torus::kernels::scalar
