#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "torus/kasteleyn.hpp"
#include "torus/spectral.hpp"
#include "torus/tilings.hpp"
#include "torus/verify.hpp"

#include <numeric>
#include <set>
#include <sstream>

using namespace torus;

namespace {

// Entries as printed, rows black 1..14, columns white 1..14. "r" is 1/(q0 q1).
const char* kFig14[14][14] = {
    {"-1", "0", "0", "0", "0", "0", "q1^-1", "0", "q0", "0", "0", "0", "0", "1"},
    {"1", "-1", "0", "0", "0", "0", "0", "1", "0", "q0", "0", "0", "0", "0"},
    {"0", "1", "-1", "0", "0", "0", "0", "0", "1", "0", "q0", "0", "0", "0"},
    {"0", "0", "1", "-1", "0", "0", "0", "0", "0", "1", "0", "q0", "0", "0"},
    {"0", "0", "0", "1", "-1", "0", "0", "0", "0", "0", "1", "0", "q0", "0"},
    {"0", "0", "0", "0", "1", "-1", "0", "0", "0", "0", "0", "1", "0", "q0q1"},
    {"0", "0", "0", "0", "0", "1", "-1", "q0q1", "0", "0", "0", "0", "1", "0"},
    {"1", "0", "0", "0", "0", "r", "0", "-1", "0", "0", "0", "0", "0", "1"},
    {"0", "1", "0", "0", "0", "0", "r", "1", "-1", "0", "0", "0", "0", "0"},
    {"q0^-1", "0", "1", "0", "0", "0", "0", "0", "1", "-1", "0", "0", "0", "0"},
    {"0", "q0^-1", "0", "1", "0", "0", "0", "0", "0", "1", "-1", "0", "0", "0"},
    {"0", "0", "q0^-1", "0", "1", "0", "0", "0", "0", "0", "1", "-1", "0", "0"},
    {"0", "0", "0", "q0^-1", "0", "1", "0", "0", "0", "0", "0", "1", "-1", "0"},
    {"0", "0", "0", "0", "q0^-1", "0", "1", "0", "0", "0", "0", "0", "1", "-q1"},
};

LaurentPoly2 fig_entry(const std::string& s) {
    if (s == "0") return {};
    if (s == "1") return LaurentPoly2::monomial(0, 0);
    if (s == "-1") return LaurentPoly2::monomial(0, 0, -1);
    if (s == "q0") return LaurentPoly2::monomial(1, 0);
    if (s == "q0^-1") return LaurentPoly2::monomial(-1, 0);
    if (s == "q1^-1") return LaurentPoly2::monomial(0, -1);
    if (s == "-q1") return LaurentPoly2::monomial(0, 1, -1);
    if (s == "q0q1") return LaurentPoly2::monomial(1, 1);
    if (s == "r") return LaurentPoly2::monomial(-1, -1);
    throw std::logic_error("unknown entry " + s);
}

int permutation_parity(std::vector<int> p) {
    int sign = 1;
    for (std::size_t i = 0; i < p.size(); ++i)
        while (p[i] != static_cast<int>(i)) {
            std::swap(p[i], p[static_cast<std::size_t>(p[i])]);
            sign = -sign;
        }
    return sign;
}

// The determinant term of a tiling: sign and q-exponents (needs single-edge entries).
std::tuple<int, int, int> tiling_term(const KasteleynMatrix& K, const Tiling& t) {
    FundamentalDomain D(t.lattice);
    std::vector<int> perm(static_cast<std::size_t>(K.m));
    int sign = 1, e0 = 0, e1 = 0;
    for (int b = 0; b < K.m; ++b) {
        i64 cell = D.black_cell[static_cast<std::size_t>(b)];
        int w = D.index_of(t.partner(cell));
        perm[static_cast<std::size_t>(b)] = w;
        const auto& entry = K.entries[static_cast<std::size_t>(b)][static_cast<std::size_t>(w)];
        REQUIRE(entry.size() == 1);
        sign *= entry[0].sign;
        e0 += entry[0].e0;
        e1 += entry[0].e1;
    }
    return {sign * permutation_parity(perm), e0, e1};
}

}  // namespace

TEST_CASE("Kasteleyn signs") {
    CHECK(kasteleyn_sign({0, 0}, Dir::N) == 1);
    CHECK(kasteleyn_sign({0, 0}, Dir::S) == 1);
    CHECK(kasteleyn_sign({0, 0}, Dir::E) == -1);   // black on the left
    CHECK(kasteleyn_sign({1, 0}, Dir::W) == -1);   // the same edge seen from the white square
    CHECK(kasteleyn_sign({0, 1}, Dir::E) == 1);    // white (0,1) to black (1,1)
    CHECK(kasteleyn_sign({1, 1}, Dir::W) == 1);
}

TEST_CASE("matrix of the (14,0),(4,2) torus matches the printed figure") {
    KasteleynMatrix K = build_kasteleyn(Lattice(14, 4, 2));
    REQUIRE(K.m == 14);
    for (int b = 0; b < 14; ++b)
        for (int w = 0; w < 14; ++w) {
            CAPTURE(b + 1);
            CAPTURE(w + 1);
            CHECK(K.entry_poly(b, w) == fig_entry(kFig14[b][w]));
        }
}

TEST_CASE("entries at q=1 reproduce the adjacency of the dual graph") {
    for (const Lattice& L : {Lattice(4, 0, 4), Lattice(6, 3, 3), Lattice(2, 1, 1), Lattice(8, 2, 2)}) {
        KasteleynMatrix K = build_kasteleyn(L);
        FundamentalDomain D(L);
        for (int b = 0; b < K.m; ++b) {
            std::map<int, int> expect;
            Vec2 p = L.cell_pos(D.black_cell[static_cast<std::size_t>(b)]);
            for (Dir d : kDirs) ++expect[D.index_of(L.cell(p + offset(d)))];
            for (int w = 0; w < K.m; ++w) {
                int n = static_cast<int>(K.entries[static_cast<std::size_t>(b)][static_cast<std::size_t>(w)].size());
                CHECK(n == (expect.count(w) ? expect[w] : 0));
                for (const Monomial& mono : K.entries[static_cast<std::size_t>(b)][static_cast<std::size_t>(w)]) {
                    CHECK(std::abs(mono.e0) <= 1);
                    CHECK(std::abs(mono.e1) <= 1);
                }
            }
        }
    }
}

TEST_CASE("T_2 determinant equals the printed polynomial") {
    KasteleynMatrix K = build_kasteleyn(Lattice(4, 0, 4));
    LaurentPoly2 p = det_laurent(K);
    CHECK(p == printed_t2_polynomial());
    CHECK(det_laurent_exact(K) == p);
    CHECK(p.to_text() ==
          "132 - 32*q0 - 32*q0^-1 - 32*q1 - 32*q1^-1 - 2*q0*q1 - 2*q0^-1*q1 - 2*q0*q1^-1 - 2*q0^-1*q1^-1 + q0^2 + "
          "q0^-2 + q1^2 + q1^-2");
}

TEST_CASE("every T_2 tiling contributes its flux monomial with the coefficient sign") {
    const Lattice L(4, 0, 4);
    KasteleynMatrix K = build_kasteleyn(L);
    LaurentPoly2 p = det_laurent(K);
    std::vector<Tiling> ts = enumerate_tilings(L);
    for (const Tiling& t : ts) {
        auto [sign, e0, e1] = tiling_term(K, t);
        auto [i0, i1] = flux_to_exponents(L, flux_of_tiling(t));
        CHECK(e0 == i0);
        CHECK(e1 == i1);
        CHECK(sign == (p.coeff(i0, i1) < 0 ? -1 : 1));
    }
    // Flip-related tilings carry equal total sign.
    for (const Tiling& t : ts)
        for (const FlipSite& s : find_flips(t))
            CHECK(std::get<0>(tiling_term(K, t)) == std::get<0>(tiling_term(K, apply_flip(t, s))));
}

TEST_CASE("Fourier and exact determinants agree") {
    for (const Lattice& L : {Lattice(2, 1, 1), Lattice(6, 2, 4), Lattice(8, 3, 3), Lattice(2, 0, 6), Lattice(6, 3, 5),
                             Lattice(4, 1, 3), Lattice(12, 1, 3), Lattice(6, 0, 6), Lattice(4, 2, 8)}) {
        CAPTURE(L.to_string());
        KasteleynMatrix K = build_kasteleyn(L);
        LaurentPoly2 exact = det_laurent_exact(K);
        CHECK(det_laurent(K) == exact);
        CHECK(det_laurent_spectral(L) == exact);
    }
}

TEST_CASE("coefficients count tilings per flux") {
    for (const Lattice& L : {Lattice(2, 1, 1), Lattice(4, 0, 4), Lattice(6, 1, 3), Lattice(4, 2, 4), Lattice(10, 3, 1)}) {
        CAPTURE(L.to_string());
        std::map<Flux, BigInt> enumerated;
        for (const auto& [phi, n] : tilings_by_flux(L)) enumerated[phi] = n;
        CHECK(count_by_flux_via_det(L) == enumerated);
        LaurentPoly2 p = det_laurent(build_kasteleyn(L));
        auto [B0, B1] = exponent_bounds(L);
        for (const auto& [e, c] : p.terms()) {
            CHECK(std::abs(e.first) <= B0);
            CHECK(std::abs(e.second) <= B1);
            CHECK(exponents_to_flux(L, e.first, e.second).in_q());
        }
    }
}

TEST_CASE("flux and exponents correspond bijectively") {
    for (const Lattice& L : valid_lattices(36)) {
        if (L.area() % 5 != 0 && L.area() != 36) continue;
        std::set<std::pair<int, int>> images;
        for (const Flux& phi : flux_candidates(L)) {
            auto e = flux_to_exponents(L, phi);
            CHECK(exponents_to_flux(L, e.first, e.second) == phi);
            images.insert(e);
        }
        CHECK(images.size() == flux_candidates(L).size());
    }
    const Lattice T2(4, 0, 4);
    CHECK(flux_to_exponents(T2, flux_from_cartesian(T2, {Rat(1, 4), Rat(0)})) == std::pair{1, 0});
    CHECK(flux_to_exponents(T2, flux_from_cartesian(T2, {Rat(0), Rat(0)})) == std::pair{0, 0});
}

TEST_CASE("corner evaluation and sign pattern") {
    LaurentPoly2 p = printed_t2_polynomial();
    CHECK(p.eval_signs(1, 1) == 0);
    CHECK(p.eval_signs(-1, 1) == 144);
    CHECK(p.eval_signs(1, -1) == 144);
    CHECK(p.eval_signs(-1, -1) == 256);
    CHECK(total_from_corners(p) == 272);
    CornerWeights w = corner_weights(p);
    CHECK(w.twice == std::array<int, 4>{-1, 1, 1, 1});
    SignPattern sp = sign_pattern_check(p);
    CHECK(sp.odd_class == 0);
    CHECK(sp.sign[0] == 1);

    CHECK(total_from_corners(LaurentPoly2::monomial(3, -1, -7)) == 7);
    CHECK_NOTHROW(sign_pattern_check(LaurentPoly2::monomial(0, 0, 5)));

    LaurentPoly2 bad = LaurentPoly2::monomial(0, 0, 1) + LaurentPoly2::monomial(2, 0, -1);
    CHECK_THROWS_AS(sign_pattern_check(bad), PatternViolation);
    LaurentPoly2 even = LaurentPoly2::monomial(0, 0, 1) + LaurentPoly2::monomial(1, 0, 1) +
                        LaurentPoly2::monomial(0, 1, 1) + LaurentPoly2::monomial(1, 1, 1);
    CHECK_THROWS_AS(total_from_corners(even), InconsistentSigns);

    for (const Lattice& L : {Lattice(2, 1, 1), Lattice(6, 2, 4), Lattice(8, 3, 3), Lattice(2, 0, 6), Lattice(6, 3, 5)}) {
        LaurentPoly2 q = det_laurent(build_kasteleyn(L));
        CHECK_NOTHROW(sign_pattern_check(q));
        CHECK(total_from_corners(q) == q.abs_sum());
    }
}

TEST_CASE("polynomial serialization") {
    LaurentPoly2 p = printed_t2_polynomial();
    CHECK(LaurentPoly2::from_json(p.to_json()) == p);
    CHECK(LaurentPoly2::parse(p.to_text()) == p);
    LaurentPoly2 big = LaurentPoly2::monomial(-3, 2, BigInt("123456789012345678901234567890"));
    CHECK(LaurentPoly2::from_json(big.to_json()) == big);
    CHECK(LaurentPoly2::parse(big.to_text()) == big);
    CHECK((p - p).is_zero());
    CHECK((p * LaurentPoly2::monomial(0, 0, 2)) == p + p);
}

TEST_CASE("residual check rejects noisy grids") {
    std::vector<std::complex<double>> values(9, {0.3, 0.0});
    CHECK_THROWS_AS(recover_from_grid(values, 1, 1), ResidualTooLarge);
}
