#include "torus/lattice.hpp"

#include <json.hpp>

#include <cstdlib>
#include <numeric>
#include <sstream>

namespace torus {

namespace {

i64 iabs(i64 a) { return a < 0 ? -a : a; }

bool same_parity(Vec2 v) { return ((v.x - v.y) & 1) == 0; }

// Extended gcd returning g >= 0 with s*a + t*b = g.
i64 ext_gcd(i64 a, i64 b, i64& s, i64& t) {
    i64 old_r = a, r = b, old_s = 1, cs = 0, old_t = 0, ct = 1;
    while (r != 0) {
        i64 q = old_r / r;
        i64 tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * cs;
        old_s = cs;
        cs = tmp;
        tmp = old_t - q * ct;
        old_t = ct;
        ct = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    s = old_s;
    t = old_t;
    return old_r;
}

std::string rat_str(const Rat& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace

Lattice::Lattice(i64 x0_, i64 x1_, i64 y1_) : x0(x0_), x1(x1_), y1(y1_) {
    if (x0 <= 0 || y1 <= 0) throw NotValidLattice("x0 and y1 must be positive");
    if (x0 % 2 != 0) throw NotValidLattice("x0 must be even");
    if (x1 < 0 || x1 >= x0) throw NotValidLattice("x1 must lie in [0, x0)");
    if (((x1 - y1) & 1) != 0) throw NotValidLattice("x1 and y1 must share parity");
}

bool Lattice::contains(Vec2 p) const {
    if (mod_floor(p.y, y1) != 0) return false;
    i64 b = p.y / y1;
    return mod_floor(p.x - b * x1, x0) == 0;
}

Vec2 Lattice::reduce(Vec2 p, Vec2* shift) const {
    i64 b = floor_div(p.y, y1);
    i64 x = p.x - b * x1;
    i64 a = floor_div(x, x0);
    if (shift) *shift = {a, b};
    return {x - a * x0, p.y - b * y1};
}

std::string Lattice::to_string() const {
    return std::to_string(x0) + "," + std::to_string(x1) + "," + std::to_string(y1);
}

Lattice Lattice::parse(const std::string& s) {
    std::vector<i64> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw NotValidLattice("empty field in lattice spec '" + s + "'");
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            throw NotValidLattice("bad integer in lattice spec '" + s + "'");
        }
        if (used != item.size()) throw NotValidLattice("bad integer in lattice spec '" + s + "'");
        parts.push_back(v);
    }
    if (parts.size() != 3) throw NotValidLattice("lattice spec must be x0,x1,y1");
    return Lattice(parts[0], parts[1], parts[2]);
}

std::string Lattice::to_json() const {
    nlohmann::json j{{"x0", x0}, {"x1", x1}, {"y1", y1}};
    return j.dump();
}

Lattice Lattice::from_json(const std::string& s) {
    auto j = nlohmann::json::parse(s);
    return Lattice(j.at("x0").get<i64>(), j.at("x1").get<i64>(), j.at("y1").get<i64>());
}

Lattice normalize_basis(Vec2 u, Vec2 w) {
    if (!same_parity(u) || !same_parity(w)) throw NotValidLattice("basis vectors need same-parity coordinates");
    i64 det = u.x * w.y - u.y * w.x;
    if (det == 0) throw NotValidLattice("basis vectors are dependent");
    i64 s = 0, t = 0;
    i64 g = ext_gcd(u.y, w.y, s, t);
    Vec2 top = u * s + w * t;  // (X, g)
    Vec2 flat = w * (u.y / g) - u * (w.y / g);
    i64 x0 = iabs(flat.x);
    i64 x1 = mod_floor(top.x, x0);
    return Lattice(x0, x1, g);
}

std::pair<RatVec, RatVec> dual_basis(const Lattice& L) {
    // v0=(a,b), v1=(c,d): phi0 = (d,-c)/(2 det), phi1 = (-b,a)/(2 det)
    i64 a = L.x0, b = 0, c = L.x1, d = L.y1;
    i64 twodet = 2 * (a * d - b * c);
    RatVec p0{Rat(d, twodet), Rat(-c, twodet)};
    RatVec p1{Rat(-b, twodet), Rat(a, twodet)};
    return {p0, p1};
}

RatVec Flux::cartesian() const {
    i64 A = lattice.area();
    return {Rat(two_a0 * lattice.y1, 2 * A), Rat(two_a1 * lattice.x0 - two_a0 * lattice.x1, 2 * A)};
}

i64 Flux::four_pair(Vec2 v) const {
    Vec2 coords;
    Vec2 r = lattice.reduce(v, &coords);
    if (r.x != 0 || r.y != 0) throw std::invalid_argument("vector is not in the lattice");
    return four_pair(coords.x, coords.y);
}

i64 Flux::l1_scaled() const {
    return iabs(two_a0 * lattice.y1) + iabs(two_a1 * lattice.x0 - two_a0 * lattice.x1);
}

std::string Flux::to_string() const {
    RatVec c = cartesian();
    return "(" + rat_str(c.x) + "," + rat_str(c.y) + ")";
}

Flux flux_from_cartesian(const Lattice& L, const RatVec& p) {
    Rat a0 = p.x * L.x0 * 2;
    Rat a1 = (p.x * L.x1 + p.y * L.y1) * 2;
    if (a0.denominator() != 1 || a1.denominator() != 1)
        throw std::invalid_argument("point is not in the half-dual lattice");
    return Flux{a0.numerator(), a1.numerator(), L};
}

bool l_sharp_membership(const Lattice& L, const RatVec& p) {
    Rat a0 = p.x * L.x0 * 2;
    Rat a1 = (p.x * L.x1 + p.y * L.y1) * 2;
    if (a0.denominator() != 1 || a1.denominator() != 1) return false;
    // L# = L* + (1/2,0): doubled pairings congruent to those of (1/2,0), i.e. (x0, x1) mod 2.
    return mod_floor(a0.numerator() - L.x0, 2) == 0 && mod_floor(a1.numerator() - L.x1, 2) == 0;
}

std::vector<Flux> flux_candidates(const Lattice& L) {
    std::vector<Flux> out;
    const i64 A = L.area();
    for (i64 t0 = -L.x0; t0 <= L.x0; t0 += 2) {
        i64 rest = A - iabs(t0 * L.y1);
        if (rest < 0) continue;
        i64 lo = -floor_div(rest - t0 * L.x1, L.x0);
        i64 hi = floor_div(rest + t0 * L.x1, L.x0);
        for (i64 t1 = lo; t1 <= hi; ++t1) {
            if (mod_floor(t1 - L.x1, 2) != 0) continue;
            Flux f{t0, t1, L};
            if (f.in_q()) out.push_back(f);
        }
    }
    return out;
}

std::vector<Lattice> valid_lattices(i64 max_area) {
    std::vector<Lattice> out;
    for (i64 A = 2; A <= max_area; A += 2)
        for (i64 x0 = 2; x0 <= A; x0 += 2) {
            if (A % x0 != 0) continue;
            i64 y1 = A / x0;
            for (i64 x1 = 0; x1 < x0; ++x1)
                if (((x1 - y1) & 1) == 0) out.emplace_back(x0, x1, y1);
        }
    return out;
}

FundamentalDomain::FundamentalDomain(const Lattice& L) : lattice(L) {
    squares.resize(static_cast<std::size_t>(L.area()));
    for (i64 j = 0; j < L.y1; ++j)
        for (i64 i = 0; i < L.x0; ++i) {
            Vec2 p{i, j};
            squares[static_cast<std::size_t>(j * L.x0 + i)] = {p, color_of(p), -1};
        }
    // Each black square shares its number with the white square to its right;
    // on rows starting with a white square that one wraps to the last black.
    for (i64 j = 0; j < L.y1; ++j)
        for (i64 i = (j % 2 == 0 ? 0 : 1); i < L.x0; i += 2) {
            int n = static_cast<int>(black_cell.size());
            i64 b = j * L.x0 + i;
            i64 w = j * L.x0 + (i + 1) % L.x0;
            squares[static_cast<std::size_t>(b)].index = n;
            squares[static_cast<std::size_t>(w)].index = n;
            black_cell.push_back(b);
            white_cell.push_back(w);
        }
}

}  // namespace torus
