#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace torus {

using i64 = std::int64_t;
using Rat = boost::rational<i64>;

struct Vec2 {
    i64 x = 0;
    i64 y = 0;
    auto operator<=>(const Vec2&) const = default;
    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(i64 k) const { return {x * k, y * k}; }
};

struct RatVec {
    Rat x{0};
    Rat y{0};
    bool operator==(const RatVec&) const = default;
};

inline i64 linf(Vec2 v) { return std::max(v.x < 0 ? -v.x : v.x, v.y < 0 ? -v.y : v.y); }
inline i64 floor_div(i64 a, i64 b) {
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}
inline i64 mod_floor(i64 a, i64 b) { return a - b * floor_div(a, b); }

struct NotValidLattice : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Color { black, white };

// Canonical basis v0=(x0,0), v1=(x1,y1) with x0 even, 0<=x1<x0, x1=y1 mod 2.
struct Lattice {
    i64 x0 = 0;
    i64 x1 = 0;
    i64 y1 = 0;

    Lattice() = default;
    Lattice(i64 x0_, i64 x1_, i64 y1_);

    auto operator<=>(const Lattice&) const = default;

    i64 area() const { return x0 * y1; }
    i64 squares() const { return area(); }
    i64 dominoes() const { return area() / 2; }
    Vec2 v0() const { return {x0, 0}; }
    Vec2 v1() const { return {x1, y1}; }
    bool contains(Vec2 p) const;
    Lattice scaled(i64 n) const { return Lattice(n * x0, n * x1, n * y1); }

    // Reduces p into [0,x0)x[0,y1); the lattice coordinates of the shift go to *shift.
    Vec2 reduce(Vec2 p, Vec2* shift = nullptr) const;
    // Cell id of the unit square with lower-left corner p, after reduction.
    i64 cell(Vec2 p) const {
        Vec2 r = reduce(p);
        return r.y * x0 + r.x;
    }
    Vec2 cell_pos(i64 id) const { return {id % x0, id / x0}; }

    std::string to_string() const;
    static Lattice parse(const std::string& s);
    std::string to_json() const;
    static Lattice from_json(const std::string& s);
};

inline Color color_of(Vec2 square) { return ((square.x + square.y) % 2 == 0) ? Color::black : Color::white; }
inline bool is_black(Vec2 square) { return ((square.x + square.y) & 1) == 0; }

Lattice normalize_basis(Vec2 u, Vec2 w);

// Dual basis with <phi_i, v_j> = delta_ij / 2.
std::pair<RatVec, RatVec> dual_basis(const Lattice& L);

struct Flux {
    i64 two_a0 = 0;  // 2 <phi, v0>
    i64 two_a1 = 0;  // 2 <phi, v1>
    Lattice lattice;

    auto operator<=>(const Flux& o) const {
        if (auto c = two_a0 <=> o.two_a0; c != 0) return c;
        return two_a1 <=> o.two_a1;
    }
    bool operator==(const Flux& o) const { return two_a0 == o.two_a0 && two_a1 == o.two_a1; }

    RatVec cartesian() const;
    // 4<phi, a v0 + b v1>, always an integer.
    i64 four_pair(i64 a, i64 b) const { return 2 * (a * two_a0 + b * two_a1); }
    i64 four_pair(Vec2 v) const;
    // Twice the L1 norm of the Cartesian form, scaled by the area, i.e. |phi|_1 <= 1/2 iff l1_scaled() <= area.
    i64 l1_scaled() const;
    bool in_q() const { return l1_scaled() <= lattice.area(); }
    bool on_boundary() const { return l1_scaled() == lattice.area(); }
    std::string to_string() const;
};

Flux flux_from_cartesian(const Lattice& L, const RatVec& p);
bool l_sharp_membership(const Lattice& L, const RatVec& p);
std::vector<Flux> flux_candidates(const Lattice& L);

// All valid lattices of area at most max_area, ordered by (area, x0, x1).
std::vector<Lattice> valid_lattices(i64 max_area);

struct FundamentalDomain {
    struct Square {
        Vec2 pos;
        Color color;
        int index;  // zero based, per color
    };
    Lattice lattice;
    std::vector<Square> squares;     // by cell id
    std::vector<i64> black_cell;     // black index -> cell id
    std::vector<i64> white_cell;     // white index -> cell id

    explicit FundamentalDomain(const Lattice& L);
    int index_of(i64 cell) const { return squares[static_cast<std::size_t>(cell)].index; }
};

}  // namespace torus
