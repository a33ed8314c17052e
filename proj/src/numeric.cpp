#include "torus/numeric.hpp"

#include "torus/kernels.hpp"

#include <cmath>
#include <numbers>

namespace torus {

std::complex<double> det_lu(std::vector<std::complex<double>> a, int n) {
    std::complex<double> det = 1.0;
    auto at = [&](int r, int c) -> std::complex<double>& { return a[static_cast<std::size_t>(r * n + c)]; };
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int r = k + 1; r < n; ++r)
            if (std::abs(at(r, k)) > std::abs(at(piv, k))) piv = r;
        if (at(piv, k) == 0.0) return 0.0;
        if (piv != k) {
            for (int c = 0; c < n; ++c) std::swap(at(k, c), at(piv, c));
            det = -det;
        }
        det *= at(k, k);
        for (int r = k + 1; r < n; ++r) {
            std::complex<double> f = at(r, k) / at(k, k);
            if (f == 0.0) continue;
            for (int c = k + 1; c < n; ++c) at(r, c) -= f * at(k, c);
        }
    }
    return det;
}

namespace {

// Twiddles exp(-2 pi i k/N) for k in [0, N), split into real and imaginary parts.
void twiddles(int N, std::vector<double>& re, std::vector<double>& im) {
    re.resize(static_cast<std::size_t>(N));
    im.resize(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) {
        double t = -2.0 * std::numbers::pi * k / N;
        re[static_cast<std::size_t>(k)] = std::cos(t);
        im[static_cast<std::size_t>(k)] = std::sin(t);
    }
}

}  // namespace

std::vector<std::complex<double>> inverse_dft2(const std::vector<std::complex<double>>& f, int N0, int N1) {
    std::vector<double> w0r, w0i, w1r, w1i;
    twiddles(N0, w0r, w0i);
    twiddles(N1, w1r, w1i);
    // Transform along the second index, then along the first; rows of exponents are
    // gathered so that each coefficient is one dot product.
    std::vector<double> rowr(static_cast<std::size_t>(std::max(N0, N1))), rowi(rowr.size());
    std::vector<double> fr(static_cast<std::size_t>(N1)), fi(static_cast<std::size_t>(N1));
    std::vector<std::complex<double>> g(f.size());
    for (int x = 0; x < N0; ++x) {
        for (int y = 0; y < N1; ++y) {
            fr[static_cast<std::size_t>(y)] = f[static_cast<std::size_t>(x * N1 + y)].real();
            fi[static_cast<std::size_t>(y)] = f[static_cast<std::size_t>(x * N1 + y)].imag();
        }
        for (int b = 0; b < N1; ++b) {
            for (int y = 0; y < N1; ++y) {
                std::size_t k = static_cast<std::size_t>((static_cast<long long>(b) * y) % N1);
                rowr[static_cast<std::size_t>(y)] = w1r[k];
                rowi[static_cast<std::size_t>(y)] = w1i[k];
            }
            g[static_cast<std::size_t>(x * N1 + b)] =
                kernels::complex_dot(fr.data(), fi.data(), rowr.data(), rowi.data(), static_cast<std::size_t>(N1));
        }
    }
    std::vector<std::complex<double>> out(f.size());
    std::vector<double> gr(static_cast<std::size_t>(N0)), gi(static_cast<std::size_t>(N0));
    const double scale = 1.0 / (static_cast<double>(N0) * N1);
    for (int b = 0; b < N1; ++b) {
        for (int x = 0; x < N0; ++x) {
            gr[static_cast<std::size_t>(x)] = g[static_cast<std::size_t>(x * N1 + b)].real();
            gi[static_cast<std::size_t>(x)] = g[static_cast<std::size_t>(x * N1 + b)].imag();
        }
        for (int a = 0; a < N0; ++a) {
            for (int x = 0; x < N0; ++x) {
                std::size_t k = static_cast<std::size_t>((static_cast<long long>(a) * x) % N0);
                rowr[static_cast<std::size_t>(x)] = w0r[k];
                rowi[static_cast<std::size_t>(x)] = w0i[k];
            }
            out[static_cast<std::size_t>(a * N1 + b)] =
                scale * kernels::complex_dot(gr.data(), gi.data(), rowr.data(), rowi.data(), static_cast<std::size_t>(N0));
        }
    }
    return out;
}

}  // namespace torus
