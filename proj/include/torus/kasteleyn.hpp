#pragma once

#include "torus/lattice.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace torus {

using BigInt = boost::multiprecision::cpp_int;

struct ResidualTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InconsistentSigns : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PatternViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sparse Laurent polynomial in q0, q1 with big-integer coefficients.
class LaurentPoly2 {
public:
    using Exp = std::pair<int, int>;

    LaurentPoly2() = default;
    static LaurentPoly2 monomial(int i, int j, BigInt c = 1);

    const std::map<Exp, BigInt>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    BigInt coeff(int i, int j) const;
    void add_term(int i, int j, const BigInt& c);

    LaurentPoly2 operator+(const LaurentPoly2& o) const;
    LaurentPoly2 operator-(const LaurentPoly2& o) const;
    LaurentPoly2 operator*(const LaurentPoly2& o) const;
    LaurentPoly2 operator-() const;
    bool operator==(const LaurentPoly2& o) const { return terms_ == o.terms_; }

    // Exact evaluation at q0, q1 in {+1,-1}.
    BigInt eval_signs(int s0, int s1) const;
    std::complex<double> eval(std::complex<double> q0, std::complex<double> q1) const;
    BigInt abs_sum() const;

    std::string to_text() const;
    std::string to_json() const;
    static LaurentPoly2 from_json(const std::string& s);
    // Parses the text form written by to_text.
    static LaurentPoly2 parse(const std::string& s);

private:
    std::map<Exp, BigInt> terms_;
};

struct Monomial {
    int sign = 1;
    int e0 = 0;
    int e1 = 0;
};

struct KasteleynMatrix {
    Lattice lattice;
    int m = 0;
    // entries[b][w]: sum of the monomials of all edges from black b to white w
    // (a single monomial except on thin tori with double edges).
    std::vector<std::vector<std::vector<Monomial>>> entries;

    std::complex<double> entry_value(int b, int w, std::complex<double> q0, std::complex<double> q1) const;
    std::vector<std::complex<double>> dense(std::complex<double> q0, std::complex<double> q1) const;
    LaurentPoly2 entry_poly(int b, int w) const;
};

KasteleynMatrix build_kasteleyn(const Lattice& L);

std::complex<double> det_numeric(const KasteleynMatrix& K, std::complex<double> q0, std::complex<double> q1);

// Exponent box used for the Fourier recovery.
std::pair<int, int> exponent_bounds(const Lattice& L);

// Inverse discrete Fourier transform on a (2B0+1)x(2B1+1) grid of unit-circle points.
// `values` holds f(q0_a, q1_b) at q0_a = exp(2 pi i a/N0), q1_b = exp(2 pi i b/N1), row-major in a.
LaurentPoly2 recover_from_grid(const std::vector<std::complex<double>>& values, int B0, int B1, double tol = 1e-6);

LaurentPoly2 det_laurent(const KasteleynMatrix& K);        // Fourier route
LaurentPoly2 det_laurent_exact(const KasteleynMatrix& K);  // fraction-free elimination

std::pair<int, int> flux_to_exponents(const Lattice& L, const Flux& phi);
Flux exponents_to_flux(const Lattice& L, int i0, int i1);

std::map<Flux, BigInt> count_by_flux_via_det(const Lattice& L, const LaurentPoly2& p);
std::map<Flux, BigInt> count_by_flux_via_det(const Lattice& L);

struct SignPattern {
    // Sign per class (i0 mod 2, i1 mod 2) in the order ee, eo, oe, oo; 0 if absent.
    std::array<int, 4> sign{0, 0, 0, 0};
    int odd_class = -1;
};
SignPattern sign_pattern_check(const LaurentPoly2& p);

struct CornerWeights {
    // Weights of p(1,1), p(1,-1), p(-1,1), p(-1,-1), each +-1/2.
    std::array<int, 4> twice{0, 0, 0, 0};
};
CornerWeights corner_weights(const LaurentPoly2& p);
BigInt total_from_corners(const LaurentPoly2& p);

}  // namespace torus
