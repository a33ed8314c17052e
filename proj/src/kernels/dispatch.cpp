#include "torus/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace torus::kernels {

namespace {

struct Table {
    ComplexProductFn product;
    ComplexDotFn dot;
    const char* name;
};

Table pick() {
    const char* force = std::getenv("TORUS_SCALAR");
    bool scalar_only = force && std::strcmp(force, "0") != 0;
    if (!scalar_only && avx2::available()) return {avx2::complex_product, avx2::complex_dot, "avx2"};
    return {scalar::complex_product, scalar::complex_dot, "scalar"};
}

const Table& table() {
    static const Table t = pick();
    return t;
}

}  // namespace

std::complex<double> complex_product(const double* re, const double* im, std::size_t n) {
    return table().product(re, im, n);
}

std::complex<double> complex_dot(const double* are, const double* aim, const double* bre, const double* bim,
                                 std::size_t n) {
    return table().dot(are, aim, bre, bim, n);
}

const char* active_variant() { return table().name; }

}  // namespace torus::kernels
