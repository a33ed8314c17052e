#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "torus/height.hpp"
#include "torus/tilings.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

using namespace torus;

namespace {

const Lattice kT2(4, 0, 4);

const std::vector<Tiling>& t2_tilings() {
    static const std::vector<Tiling> all = enumerate_tilings(kT2);
    return all;
}

Flux cart(const Lattice& L, Rat x, Rat y) { return flux_from_cartesian(L, {x, y}); }

i64 binom(int n, int k) {
    i64 r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

TEST_CASE("enumeration counts") {
    CHECK(t2_tilings().size() == 272);
    for (const Tiling& t : t2_tilings()) t.validate();
    std::set<Tiling> distinct(t2_tilings().begin(), t2_tilings().end());
    CHECK(distinct.size() == 272);
    CHECK(std::is_sorted(t2_tilings().begin(), t2_tilings().end()));

    int rect = 0;
    for_each_matching(rectangle_adjacency(2, 3), [&](const std::vector<Dir>&) { ++rect; });
    CHECK(rect == 3);
    int rect44 = 0;
    for_each_matching(rectangle_adjacency(4, 4), [&](const std::vector<Dir>&) { ++rect44; });
    CHECK(rect44 == 36);

    // The thin torus keeps both dominoes of a doubled edge apart.
    CHECK(enumerate_tilings(Lattice(2, 1, 1)).size() == 4);
    CHECK(enumerate_tilings(Lattice(2, 0, 2)).size() == 8);
    CHECK_THROWS_AS(enumerate_tilings(Lattice(8, 0, 8), 40), AreaCapExceeded);
}

TEST_CASE("T_2 census") {
    std::map<Flux, i64> c = tilings_by_flux(kT2);
    CHECK(c.size() == 13);
    const Rat h(1, 2), q(1, 4);
    CHECK(c[cart(kT2, 0, 0)] == 132);
    for (auto [x, y] : std::vector<std::pair<Rat, Rat>>{{q, 0}, {-q, 0}, {0, q}, {0, -q}}) CHECK(c[cart(kT2, x, y)] == 32);
    for (auto [x, y] : std::vector<std::pair<Rat, Rat>>{{q, q}, {q, -q}, {-q, q}, {-q, -q}}) CHECK(c[cart(kT2, x, y)] == 2);
    for (auto [x, y] : std::vector<std::pair<Rat, Rat>>{{h, 0}, {-h, 0}, {0, h}, {0, -h}}) CHECK(c[cart(kT2, x, y)] == 1);
    CHECK(census(t2_tilings()) == c);
    std::string js = census_json(c);
    CHECK(js.find("132") != std::string::npos);
}

TEST_CASE("brick walls are the only tilings at the axis extremes") {
    for (const Lattice& L : valid_lattices(24)) {
        std::map<Flux, i64> c = tilings_by_flux(L);
        i64 total = 0;
        for (const auto& [f, n] : c) total += n;
        CHECK(total == static_cast<i64>(enumerate_tilings(L).size()));
        for (Brick b : {Brick::E, Brick::N, Brick::W, Brick::S}) {
            Tiling w = brick_wall(L, b);
            w.validate();
            CHECK(flux_of_tiling(w) == brick_flux(L, b));
            CHECK(c[brick_flux(L, b)] == 1);
        }
    }
}

TEST_CASE("flips") {
    for (Brick b : {Brick::E, Brick::N, Brick::W, Brick::S}) CHECK(find_flips(brick_wall(kT2, b)).empty());
    int flips = 0;
    for (const Tiling& t : t2_tilings()) {
        HeightField h0 = height_from_tiling(t);
        for (const FlipSite& s : find_flips(t)) {
            Tiling u = apply_flip(t, s);
            u.validate();
            CHECK(flux_of_tiling(u) == flux_of_tiling(t));
            std::vector<FlipSite> back = find_flips(u);
            FlipSite inverse{s.cell, !s.horizontal_pair};
            CHECK(std::find(back.begin(), back.end(), inverse) != back.end());
            CHECK(apply_flip(u, inverse) == t);
            // The height moves by 4 at the centre of the window and nowhere else, up to
            // the constant that keeps the origin at height 0.
            HeightField h1 = height_from_tiling(u);
            Vec2 centre = kT2.cell_pos(s.cell) + Vec2{1, 1};
            Vec2 away = centre + Vec2{1, 0};
            i64 shift = h1.at(away) - h0.at(away);
            int changed = 0;
            for (i64 x = 0; x < 4; ++x)
                for (i64 y = 0; y < 4; ++y) {
                    i64 d = h1.at({x, y}) - h0.at({x, y}) - shift;
                    if (d == 0) continue;
                    ++changed;
                    CHECK((d == 4 || d == -4));
                    CHECK(kT2.cell({x, y}) == kT2.cell(centre));
                }
            CHECK(changed == 1);
            ++flips;
        }
    }
    CHECK(flips > 0);
    const Tiling& t = t2_tilings().front();
    std::vector<FlipSite> sites = find_flips(t);
    for (i64 c = 0; c < 16; ++c)
        for (bool hp : {false, true}) {
            FlipSite s{c, hp};
            if (std::find(sites.begin(), sites.end(), s) == sites.end())
                CHECK_THROWS_AS(apply_flip(t, s), InvalidFlipSite);
        }
}

TEST_CASE("flip graphs") {
    FlipGraph g = flip_graph(kT2, cart(kT2, 0, 0));
    CHECK(g.nodes.size() == 132);
    CHECK(g.connected);
    CHECK(g.components == 1);
    FlipGraph d = flip_graph(kT2, cart(kT2, Rat(1, 4), Rat(1, 4)));
    CHECK(d.nodes.size() == 2);
    CHECK(d.edges.empty());
    CHECK(d.isolated.size() == 2);
    for (Brick b : {Brick::E, Brick::N}) {
        FlipGraph w = flip_graph(kT2, brick_flux(kT2, b));
        CHECK(w.nodes.size() == 1);
        CHECK(w.edges.empty());
        CHECK(w.isolated.size() == 1);
    }
    for (const Lattice& L : valid_lattices(20))
        for (const auto& [f, n] : tilings_by_flux(L)) {
            FlipGraph fg = flip_graph(L, f);
            CHECK(static_cast<i64>(fg.nodes.size()) == n);
            if (f.on_boundary())
                CHECK(fg.edges.empty());
            else
                CHECK(fg.connected);
        }
}

TEST_CASE("boundary structure") {
    StaircaseClasses s1 = boundary_structure(kT2, 1);
    CHECK(s1.c == 2);
    CHECK(s1.classes.size() == 4);
    std::map<Flux, int> along;
    for (const Tiling& t : s1.all_tilings()) {
        t.validate();
        Flux f = flux_of_tiling(t);
        CHECK(f.on_boundary());
        std::vector<int> sides = boundary_sides(f);
        CHECK(std::find(sides.begin(), sides.end(), 1) != sides.end());
        CHECK(find_flips(t).empty());
        ++along[f];
    }
    std::vector<int> counts;
    for (const auto& [f, n] : along) counts.push_back(n);
    CHECK(counts == std::vector<int>{1, 2, 1});

    for (const Lattice& L : valid_lattices(30)) {
        std::map<Flux, i64> c = tilings_by_flux(L);
        int c1 = boundary_structure(L, 1).c, c2 = boundary_structure(L, 2).c;
        CHECK(boundary_structure(L, 3).c == c1);
        CHECK(boundary_structure(L, 4).c == c2);
        i64 total = 0;
        for (const auto& [f, n] : c)
            if (f.on_boundary()) total += n;
        CHECK(total == 2 * ((i64{1} << c1) + (i64{1} << c2) - 2));
        for (int k = 1; k <= 4; ++k) {
            StaircaseClasses s = boundary_structure(L, k);
            std::map<Flux, int> per;
            for (const Tiling& t : s.all_tilings()) ++per[flux_of_tiling(t)];
            CHECK(static_cast<int>(per.size()) == s.c + 1);
            std::vector<int> got;
            for (const auto& [f, n] : per) {
                got.push_back(n);
                CHECK(c[f] == n);
            }
            std::vector<int> want;
            for (int i = 0; i <= s.c; ++i) want.push_back(static_cast<int>(binom(s.c, i)));
            std::sort(got.begin(), got.end());
            std::sort(want.begin(), want.end());
            CHECK(got == want);
        }
    }
    int total = 0;
    for (int k = 1; k <= 4; ++k) total += static_cast<int>(boundary_structure(kT2, k).all_tilings().size());
    // Brick walls sit on two sides each.
    CHECK(total - 4 == 12);
}

TEST_CASE("classification") {
    for (const Tiling& t : t2_tilings()) {
        Classification c = classify_torus_tiling(t);
        Flux f = flux_of_tiling(t);
        CHECK(c.admits_flip == !find_flips(t).empty());
        CHECK(c.admits_flip == !f.on_boundary());
        if (!c.admits_flip) CHECK(c.staircase_types == boundary_sides(f));
        if (f.two_a0 == 0 && f.two_a1 == 0) CHECK(c.admits_flip);
    }
    Classification b = classify_torus_tiling(brick_wall(kT2, Brick::E));
    CHECK_FALSE(b.admits_flip);
    CHECK(b.staircase_types.size() == 2);
}

TEST_CASE("cycle decomposition") {
    const std::vector<Tiling>& all = t2_tilings();
    CycleSet same = cycle_decompose(all[5], all[5]);
    for (const Cycle& c : same.cycles) CHECK(c.kind == Cycle::Kind::trivial);
    CHECK_FALSE(same.parameter.has_value());

    std::mt19937 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (int trial = 0; trial < 400; ++trial) {
        const Tiling& a = all[pick(rng)];
        const Tiling& b = all[pick(rng)];
        CycleSet cs = cycle_decompose(a, b);
        std::size_t covered = 0;
        bool open = false;
        for (const Cycle& c : cs.cycles) {
            covered += c.cells.size();
            if (c.kind == Cycle::Kind::open) {
                open = true;
                CHECK(c.displacement != Vec2{});
                CHECK(kT2.contains(c.displacement));
                CHECK((c.displacement == *cs.parameter || c.displacement == -*cs.parameter));
                int s = quasicycle_sign(c);
                CHECK((s == 1 || s == -1));
            }
        }
        CHECK(covered == 16);
        CHECK(open == cs.parameter.has_value());
        if (flux_of_tiling(a) != flux_of_tiling(b)) CHECK(open);
        Tiling t = a;
        for (const Cycle& c : cs.cycles) t = cycle_flip(t, b, c);
        CHECK(t == b);
    }
}

TEST_CASE("serialization and rendering") {
    const Tiling& t = t2_tilings()[17];
    CHECK(Tiling::parse(kT2, t.serialize()) == t);
    CHECK(Tiling::parse(kT2, t.serialize()).hash() == t.hash());
    CHECK_THROWS_AS(Tiling::parse(kT2, "NNNN"), InvalidTiling);
    Tiling broken = t;
    broken.match[0] = broken.match[0] == Dir::N ? Dir::E : Dir::N;
    CHECK_THROWS_AS(broken.validate(), InvalidTiling);
    std::string svg = render_svg(t);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(render_svg(t) == svg);
}
