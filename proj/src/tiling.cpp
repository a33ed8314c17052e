#include "torus/tiling.hpp"

namespace torus {

char dir_char(Dir d) {
    static constexpr char names[] = {'N', 'E', 'S', 'W'};
    return names[static_cast<int>(d)];
}

Dir dir_from_char(char c) {
    switch (c) {
        case 'N': return Dir::N;
        case 'E': return Dir::E;
        case 'S': return Dir::S;
        case 'W': return Dir::W;
        default: throw InvalidTiling(std::string("bad direction '") + c + "'");
    }
}

void Tiling::validate() const {
    if (static_cast<i64>(match.size()) != lattice.area()) throw InvalidTiling("wrong number of squares");
    for (i64 c = 0; c < lattice.area(); ++c) {
        Dir d = match[static_cast<std::size_t>(c)];
        i64 p = partner(c);
        if (match[static_cast<std::size_t>(p)] != opposite(d)) throw InvalidTiling("matching is not involutive");
    }
}

std::string Tiling::serialize() const {
    std::string s;
    s.reserve(match.size());
    for (Dir d : match) s.push_back(dir_char(d));
    return s;
}

Tiling Tiling::parse(const Lattice& L, const std::string& s) {
    Tiling t{L, {}};
    for (char c : s) t.match.push_back(dir_from_char(c));
    t.validate();
    return t;
}

std::uint64_t Tiling::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (Dir d : match) {
        h ^= static_cast<std::uint64_t>(d);
        h *= 1099511628211ULL;
    }
    return h;
}

int kasteleyn_sign(Vec2 sq, Dir d) {
    if (!horizontal(d)) return 1;
    Vec2 left = d == Dir::E ? sq : sq + offset(d);
    return is_black(left) ? -1 : 1;
}

}  // namespace torus
