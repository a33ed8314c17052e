#include "torus/tilings.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace torus {

i64 default_area_cap() {
    if (const char* env = std::getenv("TORUS_AREA_CAP")) {
        char* end = nullptr;
        long long v = std::strtoll(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return 40;
}

void for_each_matching(const Adjacency& adj, const std::function<void(const std::vector<Dir>&)>& visit) {
    const int n = static_cast<int>(adj.size());
    if (n % 2 != 0) return;
    std::vector<Dir> match(static_cast<std::size_t>(n), Dir::N);
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    std::function<void(int)> rec = [&](int from) {
        while (from < n && used[static_cast<std::size_t>(from)]) ++from;
        if (from == n) {
            visit(match);
            return;
        }
        used[static_cast<std::size_t>(from)] = 1;
        for (auto [u, d] : adj[static_cast<std::size_t>(from)]) {
            if (used[static_cast<std::size_t>(u)]) continue;
            used[static_cast<std::size_t>(u)] = 1;
            match[static_cast<std::size_t>(from)] = d;
            match[static_cast<std::size_t>(u)] = opposite(d);
            rec(from + 1);
            used[static_cast<std::size_t>(u)] = 0;
        }
        used[static_cast<std::size_t>(from)] = 0;
    };
    rec(0);
}

Adjacency torus_adjacency(const Lattice& L) {
    Adjacency adj(static_cast<std::size_t>(L.area()));
    for (i64 c = 0; c < L.area(); ++c) {
        Vec2 p = L.cell_pos(c);
        for (Dir d : kDirs) adj[static_cast<std::size_t>(c)].push_back({static_cast<int>(L.cell(p + offset(d))), d});
    }
    return adj;
}

Adjacency rectangle_adjacency(int width, int height) {
    Adjacency adj(static_cast<std::size_t>(width * height));
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            for (Dir d : kDirs) {
                Vec2 q = Vec2{x, y} + offset(d);
                if (q.x < 0 || q.y < 0 || q.x >= width || q.y >= height) continue;
                adj[static_cast<std::size_t>(y * width + x)].push_back({static_cast<int>(q.y * width + q.x), d});
            }
    return adj;
}

std::vector<Tiling> enumerate_tilings(const Lattice& L, i64 area_cap) {
    if (L.area() > area_cap)
        throw AreaCapExceeded("area " + std::to_string(L.area()) + " exceeds the cap " + std::to_string(area_cap));
    std::vector<Tiling> out;
    for_each_matching(torus_adjacency(L), [&](const std::vector<Dir>& m) { out.push_back(Tiling{L, m}); });
    return out;
}

std::map<Flux, i64> census(const std::vector<Tiling>& tilings) {
    std::map<Flux, i64> out;
    for (const Tiling& t : tilings) ++out[flux_of_tiling(t)];
    return out;
}

std::map<Flux, i64> tilings_by_flux(const Lattice& L, i64 area_cap) { return census(enumerate_tilings(L, area_cap)); }

namespace {

struct Window {
    i64 ll, lr, ul, ur;
};

Window window_at(const Lattice& L, i64 cell) {
    Vec2 p = L.cell_pos(cell);
    return {cell, L.cell(p + Vec2{1, 0}), L.cell(p + Vec2{0, 1}), L.cell(p + Vec2{1, 1})};
}

bool distinct(const Window& w) {
    i64 a[4] = {w.ll, w.lr, w.ul, w.ur};
    std::sort(a, a + 4);
    return a[0] != a[1] && a[1] != a[2] && a[2] != a[3];
}

}  // namespace

std::vector<FlipSite> find_flips(const Tiling& t) {
    std::vector<FlipSite> out;
    const Lattice& L = t.lattice;
    for (i64 c = 0; c < L.area(); ++c) {
        Window w = window_at(L, c);
        if (!distinct(w)) continue;
        auto m = [&](i64 cell) { return t.match[static_cast<std::size_t>(cell)]; };
        if (m(w.ll) == Dir::E && m(w.ul) == Dir::E) out.push_back({c, true});
        if (m(w.ll) == Dir::N && m(w.lr) == Dir::N) out.push_back({c, false});
    }
    return out;
}

Tiling apply_flip(const Tiling& t, const FlipSite& site) {
    const Lattice& L = t.lattice;
    if (site.cell < 0 || site.cell >= L.area()) throw InvalidFlipSite("cell out of range");
    Window w = window_at(L, site.cell);
    if (!distinct(w)) throw InvalidFlipSite("window squares are not distinct");
    Tiling out = t;
    auto m = [&](i64 cell) -> Dir& { return out.match[static_cast<std::size_t>(cell)]; };
    if (site.horizontal_pair) {
        if (m(w.ll) != Dir::E || m(w.ul) != Dir::E) throw InvalidFlipSite("no horizontal pair at site");
        m(w.ll) = Dir::N;
        m(w.ul) = Dir::S;
        m(w.lr) = Dir::N;
        m(w.ur) = Dir::S;
    } else {
        if (m(w.ll) != Dir::N || m(w.lr) != Dir::N) throw InvalidFlipSite("no vertical pair at site");
        m(w.ll) = Dir::E;
        m(w.lr) = Dir::W;
        m(w.ul) = Dir::E;
        m(w.ur) = Dir::W;
    }
    return out;
}

FlipGraph flip_graph(const std::vector<Tiling>& same_flux) {
    FlipGraph g;
    g.nodes = same_flux;
    std::unordered_map<std::string, int> index;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) index[g.nodes[i].serialize()] = static_cast<int>(i);
    std::vector<int> parent(g.nodes.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> root = [&](int a) { return parent[static_cast<std::size_t>(a)] == a ? a : parent[static_cast<std::size_t>(a)] = root(parent[static_cast<std::size_t>(a)]); };
    std::vector<int> degree(g.nodes.size(), 0);
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        for (const FlipSite& s : find_flips(g.nodes[i])) {
            auto it = index.find(apply_flip(g.nodes[i], s).serialize());
            if (it == index.end()) throw std::logic_error("flip left the flux class");
            int j = it->second;
            ++degree[i];
            if (j > static_cast<int>(i)) {
                g.edges.push_back({static_cast<int>(i), j});
                parent[static_cast<std::size_t>(root(j))] = root(static_cast<int>(i));
            }
        }
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        if (degree[i] == 0) g.isolated.push_back(static_cast<int>(i));
        if (root(static_cast<int>(i)) == static_cast<int>(i)) ++g.components;
    }
    g.connected = g.components <= 1;
    return g;
}

FlipGraph flip_graph(const Lattice& L, const Flux& phi, i64 area_cap) {
    std::vector<Tiling> nodes;
    for (Tiling& t : enumerate_tilings(L, area_cap))
        if (flux_of_tiling(t) == phi) nodes.push_back(std::move(t));
    return flip_graph(nodes);
}

Tiling brick_wall(const Lattice& L, Brick which) {
    // Direction taken by every black square.
    Dir d = which == Brick::N ? Dir::E : which == Brick::S ? Dir::W : which == Brick::E ? Dir::S : Dir::N;
    Tiling t{L, std::vector<Dir>(static_cast<std::size_t>(L.area()))};
    for (i64 c = 0; c < L.area(); ++c)
        t.match[static_cast<std::size_t>(c)] = is_black(L.cell_pos(c)) ? d : opposite(d);
    return t;
}

Flux brick_flux(const Lattice& L, Brick which) {
    switch (which) {
        case Brick::E: return flux_from_cartesian(L, {Rat(1, 2), Rat(0)});
        case Brick::N: return flux_from_cartesian(L, {Rat(0), Rat(1, 2)});
        case Brick::W: return flux_from_cartesian(L, {Rat(-1, 2), Rat(0)});
        case Brick::S: return flux_from_cartesian(L, {Rat(0), Rat(-1, 2)});
    }
    return {};
}

std::vector<int> boundary_sides(const Flux& phi) {
    std::vector<int> out;
    if (!phi.on_boundary()) return out;
    const Lattice& L = phi.lattice;
    i64 X = phi.two_a0 * L.y1, Y = phi.two_a1 * L.x0 - phi.two_a0 * L.x1;
    if (X >= 0 && Y >= 0) out.push_back(1);
    if (X <= 0 && Y >= 0) out.push_back(2);
    if (X <= 0 && Y <= 0) out.push_back(3);
    if (X >= 0 && Y <= 0) out.push_back(4);
    return out;
}

namespace {

i64 gcd_abs(i64 a, i64 b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

// Staircase class of a black square for side k, and its two possible partner directions.
struct StairRule {
    Dir vert, hor;
};
StairRule stair_rule(int k) {
    switch (k) {
        case 1: return {Dir::S, Dir::E};
        case 2: return {Dir::N, Dir::E};
        case 3: return {Dir::N, Dir::W};
        default: return {Dir::S, Dir::W};
    }
}

int stair_class(int k, Vec2 black, int c) {
    // Odd sides follow the diagonals j-i, even sides the antidiagonals i+j.
    i64 key = (k % 2 == 1) ? black.y - black.x : black.x + black.y;
    return static_cast<int>(mod_floor(key / 2, c));
}

}  // namespace

StaircaseClasses boundary_structure(const Lattice& L, int k) {
    if (k < 1 || k > 4) throw std::invalid_argument("staircase type must be 1..4");
    StaircaseClasses s;
    s.lattice = L;
    s.k = k;
    s.c = static_cast<int>((k % 2 == 1 ? gcd_abs(L.x0, L.y1 - L.x1) : gcd_abs(L.x0, L.y1 + L.x1)) / 2);
    for (int i = 0; i < s.c; ++i) {
        s.classes.push_back({i, true});
        s.classes.push_back({i, false});
    }
    return s;
}

Tiling StaircaseClasses::realize(const std::vector<bool>& vert) const {
    if (static_cast<int>(vert.size()) != c) throw std::invalid_argument("one flag per staircase class");
    StairRule rule = stair_rule(k);
    Tiling t{lattice, std::vector<Dir>(static_cast<std::size_t>(lattice.area()))};
    for (i64 cell = 0; cell < lattice.area(); ++cell) {
        Vec2 p = lattice.cell_pos(cell);
        if (!is_black(p)) continue;
        Dir d = vert[static_cast<std::size_t>(stair_class(k, p, c))] ? rule.vert : rule.hor;
        t.match[static_cast<std::size_t>(cell)] = d;
        t.match[static_cast<std::size_t>(lattice.cell(p + offset(d)))] = opposite(d);
    }
    t.validate();
    return t;
}

std::vector<Tiling> StaircaseClasses::all_tilings() const {
    std::vector<Tiling> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << c); ++mask) {
        std::vector<bool> vert(static_cast<std::size_t>(c));
        for (int i = 0; i < c; ++i) vert[static_cast<std::size_t>(i)] = (mask >> i) & 1;
        out.push_back(realize(vert));
    }
    return out;
}

Classification classify_torus_tiling(const Tiling& t) {
    Classification out;
    if (!find_flips(t).empty()) {
        out.admits_flip = true;
        return out;
    }
    for (int k = 1; k <= 4; ++k) {
        StairRule rule = stair_rule(k);
        bool all = true;
        for (i64 c = 0; c < t.lattice.area() && all; ++c) {
            Vec2 p = t.lattice.cell_pos(c);
            if (!is_black(p)) continue;
            Dir d = t.match[static_cast<std::size_t>(c)];
            all = d == rule.vert || d == rule.hor;
        }
        if (all) out.staircase_types.push_back(k);
    }
    return out;
}

CycleSet cycle_decompose(const Tiling& t0, const Tiling& t1) {
    if (t0.lattice != t1.lattice) throw std::invalid_argument("tilings of different tori");
    const Lattice& L = t0.lattice;
    CycleSet out;
    std::vector<char> seen(static_cast<std::size_t>(L.area()), 0);
    for (i64 start = 0; start < L.area(); ++start) {
        if (seen[static_cast<std::size_t>(start)]) continue;
        Cycle cyc;
        Vec2 p = L.cell_pos(start);
        i64 cell = start;
        bool use0 = true;
        do {
            const Tiling& t = use0 ? t0 : t1;
            Dir d = t.match[static_cast<std::size_t>(cell)];
            seen[static_cast<std::size_t>(cell)] = 1;
            cyc.squares.push_back(p);
            cyc.cells.push_back(cell);
            cyc.steps.push_back(d);
            p = p + offset(d);
            cell = L.cell(p);
            use0 = !use0;
        } while (!(cell == start && use0));
        cyc.displacement = p - L.cell_pos(start);
        if (cyc.steps.size() == 2 && cyc.steps[0] == opposite(cyc.steps[1]) && cyc.displacement == Vec2{})
            cyc.kind = Cycle::Kind::trivial;
        else
            cyc.kind = cyc.displacement == Vec2{} ? Cycle::Kind::closed : Cycle::Kind::open;
        if (cyc.kind == Cycle::Kind::open) {
            Vec2 v = cyc.displacement;
            if (v.y < 0 || (v.y == 0 && v.x < 0)) v = -v;
            if (out.parameter && *out.parameter != v) throw std::logic_error("open cycles with different parameters");
            out.parameter = v;
        }
        out.cycles.push_back(std::move(cyc));
    }
    return out;
}

Tiling cycle_flip(const Tiling& t0, const Tiling& t1, const Cycle& c) {
    Tiling out = t0;
    for (i64 cell : c.cells) out.match[static_cast<std::size_t>(cell)] = t1.match[static_cast<std::size_t>(cell)];
    out.validate();
    return out;
}

int quasicycle_sign(const Cycle& c) {
    if (c.kind != Cycle::Kind::open) throw std::invalid_argument("quasicycle sign needs an open cycle");
    const std::size_t T = c.steps.size();
    int s = ((T / 2 + 1) % 2 == 0) ? 1 : -1;
    for (std::size_t k = 0; k < T; ++k) s *= kasteleyn_sign(c.squares[k], c.steps[k]);
    return s;
}

std::string render_svg(const Tiling& t, int scale) {
    const Lattice& L = t.lattice;
    const int pad = scale;
    const i64 W = L.x0 * scale, H = L.y1 * scale;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W + 2 * pad << "\" height=\"" << H + 2 * pad
       << "\">\n";
    os << "<defs><clipPath id=\"fd\"><rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << W << "\" height=\""
       << H << "\"/></clipPath></defs>\n";
    os << "<g clip-path=\"url(#fd)\">\n";
    // y grows downward in SVG, so row j sits at H - (j+1)*scale.
    auto rect = [&](Vec2 a, Vec2 b, bool vertical) {
        i64 x = std::min(a.x, b.x), y = std::max(a.y, b.y);
        i64 w = vertical ? 1 : 2, h = vertical ? 2 : 1;
        os << "<rect x=\"" << pad + x * scale + 2 << "\" y=\"" << pad + H - (y + 1) * scale + 2 << "\" width=\""
           << w * scale - 4 << "\" height=\"" << h * scale - 4 << "\" rx=\"" << scale / 4 << "\" fill=\""
           << (vertical ? "#9ecae1" : "#fdae6b") << "\" stroke=\"#333\"/>\n";
    };
    for (i64 c = 0; c < L.area(); ++c) {
        Vec2 p = L.cell_pos(c);
        if (!is_black(p)) continue;
        Dir d = t.match[static_cast<std::size_t>(c)];
        Vec2 q = p + offset(d);
        rect(p, q, !horizontal(d));
        Vec2 r = L.reduce(q);
        if (r != q) rect(r, r + offset(opposite(d)), !horizontal(d));
    }
    os << "</g>\n";
    os << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << W << "\" height=\"" << H
       << "\" fill=\"none\" stroke=\"#000\" stroke-width=\"2\"/>\n</svg>\n";
    return os.str();
}

std::string census_json(const std::map<Flux, i64>& c) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [f, n] : c) arr.push_back({{"flux", f.to_string()}, {"two_a0", f.two_a0}, {"two_a1", f.two_a1}, {"count", n}});
    return arr.dump();
}

}  // namespace torus
