#pragma once

#include "torus/height.hpp"
#include "torus/lattice.hpp"
#include "torus/tiling.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace torus {

struct AreaCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidFlipSite : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Default 40, overridden by the TORUS_AREA_CAP environment variable.
i64 default_area_cap();

// Perfect matchings of a small graph given by ordered adjacency lists of (neighbour, direction).
// The visitor receives, for each vertex, the direction of its partner.
using Adjacency = std::vector<std::vector<std::pair<int, Dir>>>;
void for_each_matching(const Adjacency& adj, const std::function<void(const std::vector<Dir>&)>& visit);
Adjacency torus_adjacency(const Lattice& L);
Adjacency rectangle_adjacency(int width, int height);

std::vector<Tiling> enumerate_tilings(const Lattice& L, i64 area_cap = default_area_cap());
std::map<Flux, i64> census(const std::vector<Tiling>& tilings);
std::map<Flux, i64> tilings_by_flux(const Lattice& L, i64 area_cap = default_area_cap());

// A 2x2 window with lower-left square `cell`, currently covered by two horizontal
// dominoes (horizontal_pair) or two vertical ones.
struct FlipSite {
    i64 cell = 0;
    bool horizontal_pair = false;
    auto operator<=>(const FlipSite&) const = default;
};
std::vector<FlipSite> find_flips(const Tiling& t);
Tiling apply_flip(const Tiling& t, const FlipSite& site);

struct FlipGraph {
    std::vector<Tiling> nodes;
    std::vector<std::pair<int, int>> edges;
    bool connected = true;
    std::vector<int> isolated;
    int components = 0;
};
FlipGraph flip_graph(const std::vector<Tiling>& same_flux);
FlipGraph flip_graph(const Lattice& L, const Flux& phi, i64 area_cap = default_area_cap());

enum class Brick { E, N, W, S };
Tiling brick_wall(const Lattice& L, Brick which);
Flux brick_flux(const Lattice& L, Brick which);

// Side k of the diamond Q holding the flux, 1..4 counterclockwise from the first quadrant.
std::vector<int> boundary_sides(const Flux& phi);

struct StaircaseClasses {
    struct Entry {
        int cls;
        bool vert;
    };
    Lattice lattice;
    int k = 1;
    int c = 0;  // number of vertical classes, equal to the number of horizontal ones
    std::vector<Entry> classes;  // each class in both realizations; stairflip swaps the tag

    // Tiling in which the classes flagged in vert use vertical dominoes, the rest horizontal.
    Tiling realize(const std::vector<bool>& vert) const;
    // All 2^c tilings with flux on side k.
    std::vector<Tiling> all_tilings() const;
};
StaircaseClasses boundary_structure(const Lattice& L, int k);

struct Classification {
    bool admits_flip = false;
    std::vector<int> staircase_types;  // ascending; two entries for brick walls
};
Classification classify_torus_tiling(const Tiling& t);

struct Cycle {
    enum class Kind { trivial, closed, open };
    Kind kind = Kind::trivial;
    std::vector<Vec2> squares;  // lifted positions along one period
    std::vector<Dir> steps;     // steps[k] leads from squares[k] to the next square
    Vec2 displacement;          // element of L; zero unless open
    std::vector<i64> cells;
};
struct CycleSet {
    std::vector<Cycle> cycles;
    std::optional<Vec2> parameter;  // normalized: y > 0, or y == 0 and x > 0
};
CycleSet cycle_decompose(const Tiling& t0, const Tiling& t1);
// t0 with the dominoes on cycle c replaced by those of t1.
Tiling cycle_flip(const Tiling& t0, const Tiling& t1, const Cycle& c);
int quasicycle_sign(const Cycle& c);

std::string render_svg(const Tiling& t, int scale = 24);
std::string census_json(const std::map<Flux, i64>& c);

}  // namespace torus
