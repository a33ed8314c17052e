#include "torus/height.hpp"

#include <json.hpp>

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>
#include <map>

namespace torus {

int phi_prescription(i64 x, i64 y) {
    bool xo = (x & 1) != 0, yo = (y & 1) != 0;
    if (!xo && !yo) return 0;
    if (!xo && yo) return 1;
    if (xo && yo) return 2;
    return 3;
}

int edge_orientation(Vec2 p, Vec2 q) {
    Vec2 d = q - p;
    if (d.y == 0) {
        Vec2 left = d.x > 0 ? p : q;
        int s = is_black(left) ? -1 : 1;  // left end is the lower-left corner of the square above
        return d.x > 0 ? s : -s;
    }
    Vec2 low = d.y > 0 ? p : q;
    int s = is_black(low) ? 1 : -1;  // square to the right of the edge
    return d.y > 0 ? s : -s;
}

namespace {

constexpr Vec2 kSteps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

bool same_parity(Vec2 v) { return ((v.x - v.y) & 1) == 0; }

// forward: distance from 0 to v along oriented edges; otherwise from v to 0.
i64 bfs_distance(Vec2 v, bool forward) {
    const i64 R = linf(v) + 2;
    const i64 side = 2 * R + 1;
    std::vector<i64> dist(static_cast<std::size_t>(side * side), -1);
    auto id = [&](Vec2 p) { return static_cast<std::size_t>((p.y + R) * side + (p.x + R)); };
    std::deque<Vec2> queue{{0, 0}};
    dist[id({0, 0})] = 0;
    while (!queue.empty()) {
        Vec2 p = queue.front();
        queue.pop_front();
        if (p == v) return dist[id(p)];
        for (Vec2 s : kSteps) {
            Vec2 q = p + s;
            if (linf(q) > R) continue;
            int o = forward ? edge_orientation(p, q) : edge_orientation(q, p);
            if (o != 1 || dist[id(q)] >= 0) continue;
            dist[id(q)] = dist[id(p)] + 1;
            queue.push_back(q);
        }
    }
    throw std::logic_error("search window too small");
}

}  // namespace

i64 hmax_plane(Vec2 v) {
    if (same_parity(v)) return 2 * linf(v);
    i64 best = std::numeric_limits<i64>::max();
    for (Vec2 s : kSteps) {
        Vec2 u = v + s;
        if (edge_orientation(u, v) == 1) best = std::min(best, 2 * linf(u));
    }
    return best + 1;
}

i64 hmin_plane(Vec2 v) {
    if (same_parity(v)) return -2 * linf(v);
    i64 best = std::numeric_limits<i64>::max();
    for (Vec2 s : kSteps) {
        Vec2 w = v + s;
        if (edge_orientation(v, w) == 1) best = std::min(best, 2 * linf(w));
    }
    return -(best + 1);
}

i64 hmax_plane_bfs(Vec2 v) { return bfs_distance(v, true); }
i64 hmin_plane_bfs(Vec2 v) { return -bfs_distance(v, false); }

i64 HeightField::at(Vec2 p) const {
    Vec2 shift;
    Vec2 r = lattice.reduce(p, &shift);
    return base[static_cast<std::size_t>(r.y * lattice.x0 + r.x)] + shift.x * quasi0 + shift.y * quasi1;
}

std::string HeightField::to_json() const {
    nlohmann::json grid = nlohmann::json::array();
    for (i64 j = 0; j < lattice.y1; ++j) {
        nlohmann::json row = nlohmann::json::array();
        for (i64 i = 0; i < lattice.x0; ++i) row.push_back(base[static_cast<std::size_t>(j * lattice.x0 + i)]);
        grid.push_back(row);
    }
    nlohmann::json j{{"lattice", lattice.to_string()}, {"heights", grid}, {"quasi0", quasi0}, {"quasi1", quasi1}};
    return j.dump();
}

namespace {

// Height change along the unit edge p -> q for tiling t.
i64 height_step(const Tiling& t, Vec2 p, Vec2 q) {
    Vec2 d = q - p;
    bool crossed;
    if (d.y == 0) {
        Vec2 left = d.x > 0 ? p : q;
        crossed = t.at(left) == Dir::S;
    } else {
        Vec2 low = d.y > 0 ? p : q;
        crossed = t.at(low) == Dir::W;
    }
    int o = edge_orientation(p, q);
    return crossed ? -3 * o : o;
}

}  // namespace

HeightField height_from_tiling(const Tiling& t) {
    const Lattice& L = t.lattice;
    // The box [0, x0+x1] x [0, y1] holds 0, v0 and v1; heights there follow from a spanning tree.
    const i64 W = L.x0 + L.x1 + 1, H = L.y1 + 1;
    std::vector<i64> box(static_cast<std::size_t>(W * H));
    auto at = [&](i64 x, i64 y) -> i64& { return box[static_cast<std::size_t>(y * W + x)]; };
    at(0, 0) = 0;
    for (i64 x = 0; x + 1 < W; ++x) at(x + 1, 0) = at(x, 0) + height_step(t, {x, 0}, {x + 1, 0});
    for (i64 x = 0; x < W; ++x)
        for (i64 y = 0; y + 1 < H; ++y) at(x, y + 1) = at(x, y) + height_step(t, {x, y}, {x, y + 1});
    HeightField h{L, std::vector<i64>(static_cast<std::size_t>(L.area())), at(L.x0, 0), at(L.x1, L.y1)};
    for (i64 j = 0; j < L.y1; ++j)
        for (i64 i = 0; i < L.x0; ++i) h.base[static_cast<std::size_t>(j * L.x0 + i)] = at(i, j);
    return h;
}

Tiling tiling_from_height(const HeightField& h) {
    const Lattice& L = h.lattice;
    Tiling t{L, std::vector<Dir>(static_cast<std::size_t>(L.area()))};
    for (i64 c = 0; c < L.area(); ++c) {
        Vec2 p = L.cell_pos(c);
        // corners of the square
        Vec2 ll = p, lr = p + Vec2{1, 0}, ul = p + Vec2{0, 1}, ur = p + Vec2{1, 1};
        struct Side {
            Vec2 a, b;
            Dir d;
        } sides[4] = {{ul, ur, Dir::N}, {lr, ur, Dir::E}, {ll, lr, Dir::S}, {ll, ul, Dir::W}};
        int found = 0;
        for (const Side& s : sides) {
            i64 dh = h.at(s.b) - h.at(s.a);
            int o = edge_orientation(s.a, s.b);
            if (dh == o) continue;
            if (dh != -3 * o) throw InvalidTiling("height step is neither +-1 nor -+3");
            t.match[static_cast<std::size_t>(c)] = s.d;
            ++found;
        }
        if (found != 1) throw InvalidTiling("square without exactly one crossed side");
    }
    t.validate();
    return t;
}

HeightField pointwise_min(const HeightField& a, const HeightField& b) {
    if (a.lattice != b.lattice || a.quasi0 != b.quasi0 || a.quasi1 != b.quasi1)
        throw std::invalid_argument("height fields with different flux");
    HeightField m = a;
    for (std::size_t i = 0; i < m.base.size(); ++i) m.base[i] = std::min(a.base[i], b.base[i]);
    return m;
}

Flux flux_of_tiling(const Tiling& t) { return height_from_tiling(t).flux(); }

Flux flux_by_crossings(const Tiling& t) {
    const Lattice& L = t.lattice;
    // A crossed edge contributes +1 when the domino raises the height by 3 along the path.
    auto count = [&](const std::vector<Vec2>& path) {
        i64 n = 0;
        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            i64 step = height_step(t, path[k], path[k + 1]);
            if (step == 3) ++n;
            if (step == -3) --n;
        }
        return n;
    };
    std::vector<Vec2> straight, up_right, right_up;
    for (i64 x = 0; x <= L.x0; ++x) straight.push_back({x, 0});
    for (i64 y = 0; y <= L.y1; ++y) up_right.push_back({0, y});
    for (i64 x = 1; x <= L.x1; ++x) up_right.push_back({x, L.y1});
    for (i64 x = 0; x <= L.x1; ++x) right_up.push_back({x, 0});
    for (i64 y = 1; y <= L.y1; ++y) right_up.push_back({L.x1, y});
    return Flux{2 * count(straight), count(up_right) + count(right_up), L};
}

i64 toroidal_hmax(const Lattice& L, const Flux& phi, Vec2 w) {
    if (!phi.in_q()) throw FluxOutsideQ("flux outside the diamond Q");
    const i64 R = linf(w) + 4 * L.area();
    i64 best = std::numeric_limits<i64>::max(), best_norm = 0;
    for (i64 b = -(R / L.y1); b <= R / L.y1; ++b) {
        i64 xoff = b * L.x1;
        for (i64 a = floor_div(-R - xoff, L.x0); a * L.x0 + xoff <= R; ++a) {
            Vec2 v{a * L.x0 + xoff, b * L.y1};
            if (linf(v) > R) continue;
            i64 val = phi.four_pair(a, b) + hmax_plane(w - v);
            if (val < best || (val == best && linf(v) < best_norm)) {
                best = val;
                best_norm = linf(v);
            }
        }
    }
    if (best_norm >= R - std::max(L.x0, L.y1)) throw std::logic_error("toroidal hmax minimum reached the window edge");
    return best;
}

}  // namespace torus
