#pragma once

#include "torus/lattice.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace torus {

enum class Dir : std::uint8_t { N = 0, E = 1, S = 2, W = 3 };

inline constexpr std::array<Dir, 4> kDirs{Dir::N, Dir::E, Dir::S, Dir::W};

inline Vec2 offset(Dir d) {
    switch (d) {
        case Dir::N: return {0, 1};
        case Dir::E: return {1, 0};
        case Dir::S: return {0, -1};
        case Dir::W: return {-1, 0};
    }
    return {0, 0};
}
inline Dir opposite(Dir d) { return static_cast<Dir>((static_cast<int>(d) + 2) % 4); }
inline bool horizontal(Dir d) { return d == Dir::E || d == Dir::W; }
char dir_char(Dir d);
Dir dir_from_char(char c);

struct InvalidTiling : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A perfect matching of the torus squares. Each square stores the direction of its
// partner, so the two dominoes of a double edge on a thin torus stay distinct.
struct Tiling {
    Lattice lattice;
    std::vector<Dir> match;  // indexed by cell id

    bool operator==(const Tiling& o) const { return lattice == o.lattice && match == o.match; }
    bool operator<(const Tiling& o) const { return match < o.match; }

    i64 partner(i64 cell) const {
        Vec2 p = lattice.cell_pos(cell);
        return lattice.cell(p + offset(match[static_cast<std::size_t>(cell)]));
    }
    Dir at(Vec2 square) const { return match[static_cast<std::size_t>(lattice.cell(square))]; }

    void validate() const;
    std::string serialize() const;
    static Tiling parse(const Lattice& L, const std::string& s);
    std::uint64_t hash() const;
};

// Kasteleyn sign of the edge leaving square sq in direction d: -1 exactly on
// horizontal edges with the black square on the left.
int kasteleyn_sign(Vec2 sq, Dir d);

}  // namespace torus
