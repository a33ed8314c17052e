#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "torus/lattice.hpp"
#include "torus/tilings.hpp"

#include <set>

using namespace torus;

namespace {

// Canonical basis re-derived from lattice membership in a window.
Lattice brute_canonical(Vec2 u, Vec2 w) {
    i64 det = u.x * w.y - u.y * w.x;
    auto member = [&](Vec2 p) {
        // p = a u + b w with integer a, b
        i64 an = p.x * w.y - p.y * w.x, bn = u.x * p.y - u.y * p.x;
        return an % det == 0 && bn % det == 0;
    };
    i64 x0 = 0, y1 = 0, x1 = 0;
    for (i64 x = 1; x <= 64 && !x0; ++x)
        if (member({x, 0})) x0 = x;
    for (i64 y = 1; y <= 64 && !y1; ++y)
        for (i64 x = 0; x < x0 && !y1; ++x)
            if (member({x, y})) {
                y1 = y;
                x1 = x;
            }
    return Lattice(x0, x1, y1);
}

}  // namespace

TEST_CASE("canonical basis") {
    CHECK(normalize_basis({4, 0}, {0, 4}) == Lattice(4, 0, 4));
    CHECK(normalize_basis({14, 0}, {4, 2}) == Lattice(14, 4, 2));
    CHECK(normalize_basis({3, 3}, {8, 0}) == Lattice(8, 3, 3));
    CHECK(normalize_basis({2, 2}, {6, -2}) == brute_canonical({2, 2}, {6, -2}));
    CHECK_THROWS_AS(normalize_basis({1, 0}, {0, 2}), NotValidLattice);
    CHECK_THROWS_AS(normalize_basis({2, 2}, {4, 4}), NotValidLattice);
    CHECK_THROWS_AS(Lattice(3, 1, 1), NotValidLattice);
    CHECK_THROWS_AS(Lattice(4, 1, 2), NotValidLattice);
    CHECK_THROWS_AS(Lattice(4, 4, 2), NotValidLattice);
}

TEST_CASE("canonical basis is idempotent and keeps the covolume") {
    int checked = 0;
    for (i64 a = -8; a <= 8; a += 1)
        for (i64 b = -8; b <= 8; b += 2)
            for (i64 c = -8; c <= 8; c += 3)
                for (i64 d = -8; d <= 8; d += 2) {
                    Vec2 u{a, a % 2 == 0 ? b : b + 1}, w{c, (c % 2 == 0) ? d : d + 1};
                    i64 det = u.x * w.y - u.y * w.x;
                    if (det == 0) continue;
                    Lattice L = normalize_basis(u, w);
                    CHECK(L.area() == (det < 0 ? -det : det));
                    CHECK(normalize_basis(L.v0(), L.v1()) == L);
                    CHECK(normalize_basis(L.v1(), L.v0()) == L);
                    if (L.x0 <= 32 && L.y1 <= 32) CHECK(brute_canonical(u, w) == L);
                    ++checked;
                }
    CHECK(checked > 500);
}

TEST_CASE("dual basis") {
    auto [p0, p1] = dual_basis(Lattice(2, 0, 2));
    CHECK(p0 == RatVec{Rat(1, 4), Rat(0)});
    CHECK(p1 == RatVec{Rat(0), Rat(1, 4)});
    // The solution of the 2x2 system for (14,0),(4,2).
    auto [q0, q1] = dual_basis(Lattice(14, 4, 2));
    CHECK(q0 == RatVec{Rat(1, 28), Rat(-1, 14)});
    CHECK(q1 == RatVec{Rat(0), Rat(1, 4)});
    for (const Lattice& L : valid_lattices(30)) {
        auto [f0, f1] = dual_basis(L);
        auto pair = [](const RatVec& f, Vec2 v) { return f.x * v.x + f.y * v.y; };
        CHECK(pair(f0, L.v0()) == Rat(1, 2));
        CHECK(pair(f0, L.v1()) == Rat(0));
        CHECK(pair(f1, L.v0()) == Rat(0));
        CHECK(pair(f1, L.v1()) == Rat(1, 2));
    }
}

TEST_CASE("membership in the affine dual lattice") {
    for (const Lattice& L : valid_lattices(24)) CHECK(l_sharp_membership(L, {Rat(1, 2), Rat(0)}));
    CHECK(l_sharp_membership(Lattice(2, 0, 2), {Rat(0), Rat(0)}));
    CHECK_FALSE(l_sharp_membership(Lattice(2, 0, 2), {Rat(1, 3), Rat(0)}));
    CHECK_FALSE(l_sharp_membership(Lattice(2, 1, 1), {Rat(0), Rat(0)}));
}

TEST_CASE("flux candidates") {
    const Lattice T2(4, 0, 4);
    std::vector<Flux> c = flux_candidates(T2);
    CHECK(c.size() == 13);
    for (const Lattice& L : valid_lattices(36)) {
        std::vector<Flux> cand = flux_candidates(L);
        std::set<Flux> s(cand.begin(), cand.end());
        for (const RatVec& p : {RatVec{Rat(1, 2), Rat(0)}, RatVec{Rat(-1, 2), Rat(0)}, RatVec{Rat(0), Rat(1, 2)},
                                RatVec{Rat(0), Rat(-1, 2)}})
            CHECK(s.count(flux_from_cartesian(L, p)) == 1);
        for (const Flux& f : cand) {
            CHECK(f.in_q());
            CHECK(l_sharp_membership(L, f.cartesian()));
        }
    }
    // The (2,0),(1,1) torus: candidates are exactly the realized fluxes.
    const Lattice L(2, 1, 1);
    std::set<Flux> realized;
    for (const auto& [f, n] : tilings_by_flux(L)) realized.insert(f);
    std::vector<Flux> cand = flux_candidates(L);
    CHECK(realized == std::set<Flux>(cand.begin(), cand.end()));
}

TEST_CASE("candidates only get denser under scaling") {
    for (const Lattice& L : {Lattice(2, 0, 2), Lattice(2, 1, 1), Lattice(4, 2, 2), Lattice(6, 1, 3)})
        for (i64 n = 1; n <= 3; ++n) {
            std::set<RatVec, bool (*)(const RatVec&, const RatVec&)> big(
                [](const RatVec& a, const RatVec& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
            for (const Flux& f : flux_candidates(L.scaled(n))) big.insert(f.cartesian());
            for (const Flux& f : flux_candidates(L)) CHECK(big.count(f.cartesian()) == 1);
        }
}

TEST_CASE("fundamental domain numbering") {
    for (const Lattice& L : {Lattice(4, 0, 4), Lattice(14, 4, 2), Lattice(8, 3, 3), Lattice(2, 1, 1)}) {
        FundamentalDomain D(L);
        CHECK(static_cast<i64>(D.squares.size()) == L.area());
        CHECK(static_cast<i64>(D.black_cell.size()) == L.area() / 2);
        CHECK(static_cast<i64>(D.white_cell.size()) == L.area() / 2);
        CHECK(D.squares[0].color == Color::black);
        CHECK(D.squares[0].index == 0);
        int line_starts = 0;
        for (std::size_t i = 0; i < D.black_cell.size(); ++i) {
            Vec2 b = L.cell_pos(D.black_cell[i]);
            Vec2 w = L.cell_pos(D.white_cell[i]);
            CHECK(L.cell(b + Vec2{1, 0}) == D.white_cell[i]);
            if (w != b + Vec2{1, 0}) {
                CHECK(w + L.v0() == b + Vec2{1, 0});
                ++line_starts;
            }
        }
        CHECK(line_starts == L.y1 / 2);
    }
}

TEST_CASE("reduction and serialization") {
    const Lattice L(8, 3, 3);
    Vec2 shift;
    Vec2 r = L.reduce({-5, 7}, &shift);
    CHECK(r.x >= 0);
    CHECK(r.x < 8);
    CHECK(r.y >= 0);
    CHECK(r.y < 3);
    CHECK(r + L.v0() * shift.x + L.v1() * shift.y == Vec2{-5, 7});
    CHECK(L.contains({11, 3}));
    CHECK_FALSE(L.contains({1, 3}));
    CHECK(Lattice::parse("8,3,3") == L);
    CHECK(Lattice::parse(L.to_string()) == L);
    CHECK(Lattice::from_json(L.to_json()) == L);
    CHECK_THROWS_AS(Lattice::parse("8,3"), NotValidLattice);
    CHECK_THROWS_AS(Lattice::parse("8,x,3"), NotValidLattice);
    CHECK_THROWS_AS(Lattice::parse("7,3,3"), NotValidLattice);
}

TEST_CASE("valid lattice listing") {
    std::vector<Lattice> all = valid_lattices(36);
    CHECK(all.size() == 277);
    std::set<Lattice> seen(all.begin(), all.end());
    CHECK(seen.size() == all.size());
    for (const Lattice& L : all) {
        CHECK(L.x0 % 2 == 0);
        CHECK((L.x1 - L.y1) % 2 == 0);
        CHECK(L.x1 < L.x0);
    }
}
