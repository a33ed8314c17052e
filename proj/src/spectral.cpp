#include "torus/spectral.hpp"

#include "torus/kernels.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace torus {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
using cd = std::complex<double>;

double frac(double x) { return x - std::floor(x); }

i64 mod(i64 a, i64 m) { return mod_floor(a, m); }

}  // namespace

cd UnitArgPair::q0() const { return std::polar(1.0, kTwoPi * u0); }
cd UnitArgPair::q1() const { return std::polar(1.0, kTwoPi * u1); }

SpectralPoint spectral_point(const Lattice& L, const UnitArgPair& u, int k0, int k1) {
    SpectralPoint s;
    s.k0 = k0;
    s.k1 = k1;
    const double x0 = static_cast<double>(L.x0), x1 = static_cast<double>(L.x1), y1 = static_cast<double>(L.y1);
    s.z0 = (k0 - u.u1) / x0;
    s.z1 = ((u.u0 + k1) * x0 + (u.u1 - k0) * x1) / (x0 * y1);
    s.lambda = lambda_K(s, L, u);
    return s;
}

cd lambda_K(const SpectralPoint& point, const Lattice& L, const UnitArgPair& u) {
    const double x0 = static_cast<double>(L.x0), x1 = static_cast<double>(L.x1), y1 = static_cast<double>(L.y1);
    double a = kTwoPi * ((u.u0 + point.k1) * x0 + (u.u1 - point.k0) * x1) / (x0 * y1);
    double b = kTwoPi * (point.k0 - u.u1) / x0;
    return {2 * std::cos(a), 2 * std::sin(b)};
}

double eigenvalue_M(double z0, double z1) {
    double s = std::sin(kTwoPi * z0), c = std::cos(kTwoPi * z1);
    return 4 * (s * s + c * c);
}

std::vector<double> eigenvalues_M(const Lattice& L, const UnitArgPair& u) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(L.area()));
    for (int k0 = 0; k0 < L.x0; ++k0)
        for (int k1 = 0; k1 < L.y1; ++k1) {
            SpectralPoint s = spectral_point(L, u, k0, k1);
            out.push_back(eigenvalue_M(s.z0, s.z1));
        }
    return out;
}

cd det_KE(const Lattice& L, const UnitArgPair& u) {
    std::vector<double> re, im;
    for (int k0 = 0; 2 * k0 < L.x0; ++k0)
        for (int k1 = 0; k1 < L.y1; ++k1) {
            cd l = spectral_point(L, u, k0, k1).lambda;
            re.push_back(l.real());
            im.push_back(l.imag());
        }
    return kernels::complex_product(re.data(), im.data(), re.size());
}

cd rho1(const Lattice& L) {
    if (L.y1 % 2 == 0) return (L.x0 % 4 == 0 && L.y1 % 4 == 2) ? cd(-1, 0) : cd(1, 0);
    const i64 r8 = L.x0 % 8;
    const bool y1mod1 = L.y1 % 4 == 1;
    if (r8 == 2) return {1, 0};
    if (r8 == 6) return {-1, 0};
    if (r8 == 0) return y1mod1 ? cd(0, 1) : cd(0, -1);
    return y1mod1 ? cd(0, -1) : cd(0, 1);
}

cd rho2(const Lattice& L, double u1) {
    if (L.y1 % 2 == 0) return {1, 0};
    return std::polar(1.0, std::numbers::pi * frac(u1));
}

cd rho(const Lattice& L, double u1) { return rho1(L) * rho2(L, u1); }

cd p_LE(const Lattice& L, const UnitArgPair& u) { return det_KE(L, u); }

// Both are functions of q, so the product is taken at the reduced arguments that fix
// the branch of rho2.
cd P_LE(const Lattice& L, const UnitArgPair& u) {
    UnitArgPair r{frac(u.u0), frac(u.u1)};
    return det_KE(L, r) * rho2(L, r.u1);
}

cd det_KD(const Lattice& L, const UnitArgPair& u) { return rho1(L) * P_LE(L, u); }

cd combinatorial_gauge(const Lattice& L, const UnitArgPair& u) {
    if (L.y1 % 2 == 0) return {1, 0};
    double sign = (L.x0 % 4 == 0) ? -1.0 : 1.0;
    return sign * std::polar(1.0, -kTwoPi * u.u1);
}

cd det_combinatorial_closed(const Lattice& L, const UnitArgPair& u) {
    return combinatorial_gauge(L, u) * det_KD(L, u);
}

cd mu1(const Lattice& L, int n, cd q1) {
    if (L.y1 % 2 == 0) return {1, 0};
    int e = (n % 2 == 0) ? n * n / 2 : n * (n - 1) / 2;
    return std::pow(q1, -e);
}

ProductResidual product_formula_check(const Lattice& L, int n, const UnitArgPair& u) {
    ProductResidual res;
    if (n == 1) return res;
    const Lattice big = L.scaled(n);
    auto rel = [](cd a, cd b) { return std::abs(a - b) / std::max(std::abs(a), 1e-300); };

    cd lhs = p_LE(big, {n * u.u0, n * u.u1});
    cd rhs = 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rhs *= p_LE(L, {u.u0 + double(i) / n, u.u1 - double(j) / n});
    res.scaling = rel(lhs, rhs);

    cd dl = det_KD(big, {n * u.u0, n * u.u1});
    cd dr = mu1(L, n, u.q1());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dr *= det_KD(L, {u.u0 + double(i) / n, u.u1 - double(j) / n});
    res.domain = rel(dl, dr);
    return res;
}

namespace {

using Real = boost::multiprecision::cpp_bin_float_50;

struct Cx {
    Real re, im;
    Cx operator*(const Cx& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    Cx operator+(const Cx& o) const { return {re + o.re, im + o.im}; }
};

const Real& two_pi() {
    static const Real v = 2 * boost::math::constants::pi<Real>();
    return v;
}

// exp(2 pi i num/den) with num reduced into [0, den).
Cx unit(i64 num, i64 den) {
    Real t = two_pi() * Real(mod(num, den)) / Real(den);
    return {cos(t), sin(t)};
}

}  // namespace

LaurentPoly2 det_laurent_spectral(const Lattice& L, double tol) {
    auto [B0, B1] = exponent_bounds(L);
    const int N0 = 2 * B0 + 1, N1 = 2 * B1 + 1;
    const i64 x0 = L.x0, x1 = L.x1, y1 = L.y1;

    // Unit prefactor as an exact fourth root of unity times exp(-pi i u1) for odd y1.
    cd r1 = rho1(L);
    int quarter = r1.real() > 0.5 ? 0 : r1.imag() > 0.5 ? 1 : r1.real() < -0.5 ? 2 : 3;
    if (y1 % 2 == 1 && x0 % 4 == 0) quarter += 2;

    std::vector<Cx> values(static_cast<std::size_t>(N0 * N1));
    const i64 den_cos = i64(N0) * N1 * x0 * y1;
    const i64 den_sin = i64(N1) * x0;
    for (int a = 0; a < N0; ++a)
        for (int b = 0; b < N1; ++b) {
            Cx prod = unit(quarter, 4);
            if (y1 % 2 == 1) prod = prod * unit(-b, 2 * N1);
            for (i64 k0 = 0; 2 * k0 < x0; ++k0)
                for (i64 k1 = 0; k1 < y1; ++k1) {
                    i64 cnum = (a + k1 * N0) * x0 * N1 + (b - k0 * N1) * x1 * N0;
                    i64 snum = k0 * N1 - b;
                    Cx c = unit(cnum, den_cos), s = unit(snum, den_sin);
                    prod = prod * Cx{2 * c.re, 2 * s.im};
                }
            values[static_cast<std::size_t>(a * N1 + b)] = prod;
        }

    std::vector<Cx> tw0(N0), tw1(N1);
    for (int k = 0; k < N0; ++k) tw0[k] = unit(-k, N0);
    for (int k = 0; k < N1; ++k) tw1[k] = unit(-k, N1);

    std::vector<Cx> partial(static_cast<std::size_t>(N0 * N1), Cx{0, 0});
    for (int a = 0; a < N0; ++a)
        for (int j = 0; j < N1; ++j) {
            Cx acc{0, 0};
            for (int b = 0; b < N1; ++b)
                acc = acc + values[static_cast<std::size_t>(a * N1 + b)] * tw1[(j * b) % N1];
            partial[static_cast<std::size_t>(a * N1 + j)] = acc;
        }

    LaurentPoly2 p;
    const Real scale = Real(N0) * Real(N1);
    double worst = 0;
    for (int i = 0; i < N0; ++i)
        for (int j = 0; j < N1; ++j) {
            Cx acc{0, 0};
            for (int a = 0; a < N0; ++a) acc = acc + partial[static_cast<std::size_t>(a * N1 + j)] * tw0[(i * a) % N0];
            Real re = acc.re / scale, im = acc.im / scale;
            Real r = round(re);
            worst = std::max({worst, static_cast<double>(abs(re - r)), static_cast<double>(abs(im))});
            BigInt c = r.convert_to<BigInt>();
            if (c != 0) p.add_term(i <= B0 ? i : i - N0, j <= B1 ? j : j - N1, c);
        }
    if (worst > tol) throw ResidualTooLarge("spectral recovery residual " + std::to_string(worst));
    return p;
}

namespace {

template <class F>
bool rectangle_attempt(int m, int n, BigInt& out) {
    const F pi = boost::math::constants::pi<F>();
    F prod = 1;
    for (int k = 1; k <= m / 2; ++k)
        for (int l = 1; l <= n; ++l) {
            F a = cos(F(k) * pi / F(m + 1)), b = cos(F(l) * pi / F(n + 1));
            prod *= 2 * sqrt(a * a + b * b);
        }
    F r = round(prod);
    // Each factor carries a few ulps of error; the bound is deliberately generous.
    F bound = abs(prod) * F(16 * (m / 2 * n + 1)) * std::numeric_limits<F>::epsilon();
    if (abs(prod - r) + bound >= F(0.25)) return false;
    out = r.template convert_to<BigInt>();
    return true;
}

}  // namespace

BigInt rectangle_count(int m, int n) {
    if (m < 1 || n < 1 || m % 2 != 0) throw std::invalid_argument("rectangle_count needs even m >= 2 and n >= 1");
    using boost::multiprecision::cpp_bin_float_100;
    using boost::multiprecision::number;
    using boost::multiprecision::backends::cpp_bin_float;
    BigInt out;
    if (rectangle_attempt<Real>(m, n, out)) return out;
    if (rectangle_attempt<cpp_bin_float_100>(m, n, out)) return out;
    if (rectangle_attempt<number<cpp_bin_float<300>>>(m, n, out)) return out;
    throw PrecisionInsufficient("rectangle product could not be rounded with certainty");
}

std::string spectral_csv(const Lattice& L, int grid0, int grid1) {
    std::ostringstream out;
    out.precision(17);
    out << "u0,u1,det_kd_re,det_kd_im,det_ke_re,det_ke_im,rho_re,rho_im\n";
    for (int a = 0; a < grid0; ++a)
        for (int b = 0; b < grid1; ++b) {
            UnitArgPair u{double(a) / grid0, double(b) / grid1};
            cd ke = det_KE(L, u), r = rho(L, u.u1), kd = r * ke;
            out << u.u0 << ',' << u.u1 << ',' << kd.real() << ',' << kd.imag() << ',' << ke.real() << ','
                << ke.imag() << ',' << r.real() << ',' << r.imag() << '\n';
        }
    return out.str();
}

}  // namespace torus
