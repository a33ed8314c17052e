#pragma once

#include <complex>
#include <vector>

namespace torus {

// Determinant of a row-major n x n complex matrix by LU with partial pivoting.
std::complex<double> det_lu(std::vector<std::complex<double>> a, int n);

// c[a][b] = (1/(N0 N1)) sum_{x,y} f[x][y] exp(-2 pi i (a x/N0 + b y/N1)), row-major.
std::vector<std::complex<double>> inverse_dft2(const std::vector<std::complex<double>>& f, int N0, int N1);

}  // namespace torus
