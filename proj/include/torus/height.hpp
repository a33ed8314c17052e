#pragma once

#include "torus/lattice.hpp"
#include "torus/tiling.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace torus {

struct FluxOutsideQ : std::domain_error {
    using std::domain_error::domain_error;
};

int phi_prescription(i64 x, i64 y);

// +1 if the unit edge from p to q (adjacent vertices) follows the orientation
// (clockwise around black squares), -1 otherwise.
int edge_orientation(Vec2 p, Vec2 q);

i64 hmax_plane(Vec2 v);
i64 hmin_plane(Vec2 v);
// Plain breadth-first search over oriented edge paths; the reference for the two above.
i64 hmax_plane_bfs(Vec2 v);
i64 hmin_plane_bfs(Vec2 v);

struct HeightField {
    Lattice lattice;
    std::vector<i64> base;  // by vertex id j*x0+i on the fundamental domain
    i64 quasi0 = 0;
    i64 quasi1 = 0;

    i64 at(Vec2 p) const;
    Flux flux() const { return Flux{quasi0 / 2, quasi1 / 2, lattice}; }
    std::string to_json() const;
};

HeightField height_from_tiling(const Tiling& t);
// Inverse of height_from_tiling; throws InvalidTiling when h is not a height function.
Tiling tiling_from_height(const HeightField& h);
HeightField pointwise_min(const HeightField& a, const HeightField& b);

Flux flux_of_tiling(const Tiling& t);
// Independent route: signed counts of dominoes crossed by the straight path to v0
// and by the two L-shaped paths to v1, the latter averaged.
Flux flux_by_crossings(const Tiling& t);

i64 toroidal_hmax(const Lattice& L, const Flux& phi, Vec2 w);

}  // namespace torus
