#pragma once

#include "torus/kasteleyn.hpp"
#include "torus/lattice.hpp"

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace torus {

struct PrecisionInsufficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arguments of the unit parameters, q_m = exp(2 pi i u_m).
struct UnitArgPair {
    double u0 = 0;
    double u1 = 0;
    std::complex<double> q0() const;
    std::complex<double> q1() const;
};

// One diagonal entry of the Kasteleyn operator in the exponential bases.
struct SpectralPoint {
    int k0 = 0;  // 0 <= k0 < x0/2
    int k1 = 0;  // 0 <= k1 < y1
    double z0 = 0;
    double z1 = 0;
    std::complex<double> lambda;
};

SpectralPoint spectral_point(const Lattice& L, const UnitArgPair& u, int k0, int k1);
std::complex<double> lambda_K(const SpectralPoint& point, const Lattice& L, const UnitArgPair& u);

// The area-many eigenvalues of K K* + K* K over the quasiperiodic exponentials.
std::vector<double> eigenvalues_M(const Lattice& L, const UnitArgPair& u);
double eigenvalue_M(double z0, double z1);

std::complex<double> det_KE(const Lattice& L, const UnitArgPair& u);
std::complex<double> rho1(const Lattice& L);
std::complex<double> rho2(const Lattice& L, double u1);
std::complex<double> rho(const Lattice& L, double u1);

std::complex<double> p_LE(const Lattice& L, const UnitArgPair& u);
std::complex<double> P_LE(const Lattice& L, const UnitArgPair& u);
// rho * det_KE, the determinant in the domain basis of the spectral normalization.
std::complex<double> det_KD(const Lattice& L, const UnitArgPair& u);

// Unit factor between det_KD and the determinant of build_kasteleyn(L) at the same q:
// det_numeric(build_kasteleyn(L), q0, q1) = combinatorial_gauge(L, u) * det_KD(L, u).
// It is 1 for even y1 and -q1^{-1} or q1^{-1} for odd y1, by the residue of x0 mod 4.
std::complex<double> combinatorial_gauge(const Lattice& L, const UnitArgPair& u);
std::complex<double> det_combinatorial_closed(const Lattice& L, const UnitArgPair& u);

std::complex<double> mu1(const Lattice& L, int n, std::complex<double> q1);

struct ProductResidual {
    double scaling = 0;  // p_{nL}(n u) against the product over shifted arguments
    double domain = 0;   // the same for the domain determinants with the mu1 factor
    double max() const { return scaling > domain ? scaling : domain; }
};
ProductResidual product_formula_check(const Lattice& L, int n, const UnitArgPair& u);

// Laurent polynomial of build_kasteleyn(L) from the closed-form product, evaluated and
// transformed in multiprecision. No matrix is built.
LaurentPoly2 det_laurent_spectral(const Lattice& L, double tol = 1e-6);

// Tilings of the m x n rectangle (m even) from the cosine double product.
BigInt rectangle_count(int m, int n);

// One line per grid point: u0,u1,re/im of det_KD, det_KE and rho.
std::string spectral_csv(const Lattice& L, int grid0, int grid1);

}  // namespace torus
