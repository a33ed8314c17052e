#include "torus/kasteleyn.hpp"

#include "torus/height.hpp"
#include "torus/numeric.hpp"
#include "torus/tiling.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <regex>
#include <sstream>

namespace torus {

LaurentPoly2 LaurentPoly2::monomial(int i, int j, BigInt c) {
    LaurentPoly2 p;
    p.add_term(i, j, c);
    return p;
}

BigInt LaurentPoly2::coeff(int i, int j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? BigInt(0) : it->second;
}

void LaurentPoly2::add_term(int i, int j, const BigInt& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.try_emplace({i, j}, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

LaurentPoly2 LaurentPoly2::operator+(const LaurentPoly2& o) const {
    LaurentPoly2 r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e.first, e.second, c);
    return r;
}

LaurentPoly2 LaurentPoly2::operator-() const {
    LaurentPoly2 r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

LaurentPoly2 LaurentPoly2::operator-(const LaurentPoly2& o) const { return *this + (-o); }

LaurentPoly2 LaurentPoly2::operator*(const LaurentPoly2& o) const {
    LaurentPoly2 r;
    for (const auto& [e, c] : terms_)
        for (const auto& [f, d] : o.terms_) r.add_term(e.first + f.first, e.second + f.second, c * d);
    return r;
}

BigInt LaurentPoly2::eval_signs(int s0, int s1) const {
    BigInt total = 0;
    for (const auto& [e, c] : terms_) {
        bool neg = (s0 < 0 && (e.first & 1)) != (s1 < 0 && (e.second & 1));
        total += neg ? BigInt(-c) : c;
    }
    return total;
}

std::complex<double> LaurentPoly2::eval(std::complex<double> q0, std::complex<double> q1) const {
    std::complex<double> total = 0;
    for (const auto& [e, c] : terms_) total += c.convert_to<double>() * std::pow(q0, e.first) * std::pow(q1, e.second);
    return total;
}

BigInt LaurentPoly2::abs_sum() const {
    BigInt s = 0;
    for (const auto& [e, c] : terms_) s += abs(c);
    return s;
}

namespace {

// Constant first, then by total degree; within a degree mixed terms precede pure powers.
auto print_key(const LaurentPoly2::Exp& e) {
    int i = e.first, j = e.second;
    return std::make_tuple(std::abs(i) + std::abs(j), std::max(std::abs(i), std::abs(j)), -std::abs(i), -j, -i);
}

std::string power(const char* var, int e) {
    if (e == 1) return var;
    return std::string(var) + "^" + std::to_string(e);
}

}  // namespace

std::string LaurentPoly2::to_text() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<Exp, BigInt>> v(terms_.begin(), terms_.end());
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return print_key(a.first) < print_key(b.first); });
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : v) {
        BigInt a = abs(c);
        if (first)
            os << (c < 0 ? "-" : "");
        else
            os << (c < 0 ? " - " : " + ");
        first = false;
        std::vector<std::string> parts;
        if (a != 1 || (e.first == 0 && e.second == 0)) parts.push_back(a.str());
        if (e.first != 0) parts.push_back(power("q0", e.first));
        if (e.second != 0) parts.push_back(power("q1", e.second));
        for (std::size_t k = 0; k < parts.size(); ++k) os << (k ? "*" : "") << parts[k];
    }
    return os.str();
}

LaurentPoly2 LaurentPoly2::parse(const std::string& s) {
    LaurentPoly2 p;
    std::string t;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
    if (t == "0") return p;
    std::size_t pos = 0;
    static const std::regex factor(R"(^(q0|q1)(\^(-?\d+))?)");
    while (pos < t.size()) {
        int sign = 1;
        if (t[pos] == '+' || t[pos] == '-') {
            sign = t[pos] == '-' ? -1 : 1;
            ++pos;
        }
        BigInt c = 1;
        std::size_t digits = pos;
        while (digits < t.size() && std::isdigit(static_cast<unsigned char>(t[digits]))) ++digits;
        if (digits > pos) {
            c = BigInt(t.substr(pos, digits - pos));
            pos = digits;
            if (pos < t.size() && t[pos] == '*') ++pos;
        }
        int e0 = 0, e1 = 0;
        std::smatch m;
        std::string rest = t.substr(pos);
        while (std::regex_search(rest, m, factor)) {
            int e = m[3].matched ? std::stoi(m[3].str()) : 1;
            (m[1].str() == "q0" ? e0 : e1) += e;
            pos += static_cast<std::size_t>(m.length(0));
            if (pos < t.size() && t[pos] == '*') ++pos;
            rest = t.substr(pos);
        }
        if (pos < t.size() && t[pos] != '+' && t[pos] != '-') throw std::invalid_argument("cannot parse polynomial '" + s + "'");
        p.add_term(e0, e1, sign * c);
    }
    return p;
}

std::string LaurentPoly2::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [e, c] : terms_) arr.push_back({{"i", e.first}, {"j", e.second}, {"c", c.str()}});
    return nlohmann::json{{"terms", arr}}.dump();
}

LaurentPoly2 LaurentPoly2::from_json(const std::string& s) {
    LaurentPoly2 p;
    auto j = nlohmann::json::parse(s);
    for (const auto& t : j.at("terms")) p.add_term(t.at("i").get<int>(), t.at("j").get<int>(), BigInt(t.at("c").get<std::string>()));
    return p;
}

std::complex<double> KasteleynMatrix::entry_value(int b, int w, std::complex<double> q0, std::complex<double> q1) const {
    std::complex<double> v = 0;
    for (const Monomial& mo : entries[static_cast<std::size_t>(b)][static_cast<std::size_t>(w)])
        v += static_cast<double>(mo.sign) * std::pow(q0, mo.e0) * std::pow(q1, mo.e1);
    return v;
}

std::vector<std::complex<double>> KasteleynMatrix::dense(std::complex<double> q0, std::complex<double> q1) const {
    std::vector<std::complex<double>> a(static_cast<std::size_t>(m * m));
    for (int b = 0; b < m; ++b)
        for (int w = 0; w < m; ++w) a[static_cast<std::size_t>(b * m + w)] = entry_value(b, w, q0, q1);
    return a;
}

LaurentPoly2 KasteleynMatrix::entry_poly(int b, int w) const {
    LaurentPoly2 p;
    for (const Monomial& mo : entries[static_cast<std::size_t>(b)][static_cast<std::size_t>(w)]) p.add_term(mo.e0, mo.e1, mo.sign);
    return p;
}

namespace {

// Primal edge key: lower/left endpoint reduced mod L plus orientation flag.
struct EdgeKey {
    Vec2 v;
    bool horiz;
    auto operator<=>(const EdgeKey&) const = default;
};

EdgeKey edge_key(const Lattice& L, Vec2 v, bool horiz) { return {L.reduce(v), horiz}; }

}  // namespace

KasteleynMatrix build_kasteleyn(const Lattice& L) {
    FundamentalDomain fd(L);
    KasteleynMatrix K;
    K.lattice = L;
    K.m = static_cast<int>(L.dominoes());
    K.entries.assign(static_cast<std::size_t>(K.m), std::vector<std::vector<Monomial>>(static_cast<std::size_t>(K.m)));

    // Exponent shifts for crossing the two reference paths: the straight path to v0
    // and the path up the left side then right to v1. A crossing that raises the
    // height by 3 along the path contributes +1.
    std::map<EdgeKey, std::pair<int, int>> shift;
    auto mark = [&](Vec2 from, Vec2 to, int which) {
        bool horiz = from.y == to.y;
        Vec2 low = horiz ? (from.x < to.x ? from : to) : (from.y < to.y ? from : to);
        int o = edge_orientation(from, to);
        int e = o == -1 ? 1 : -1;  // crossing changes the height by -3*o
        auto& s = shift[edge_key(L, low, horiz)];
        (which == 0 ? s.first : s.second) += e;
    };
    for (i64 x = 0; x < L.x0; ++x) mark({x, 0}, {x + 1, 0}, 0);
    for (i64 y = 0; y < L.y1; ++y) mark({0, y}, {0, y + 1}, 1);
    for (i64 x = 0; x < L.x1; ++x) mark({x, L.y1}, {x + 1, L.y1}, 1);

    for (int b = 0; b < K.m; ++b) {
        i64 cell = fd.black_cell[static_cast<std::size_t>(b)];
        Vec2 p = L.cell_pos(cell);
        for (Dir d : kDirs) {
            Vec2 q = p + offset(d);
            int w = fd.index_of(L.cell(q));
            EdgeKey key{};
            switch (d) {
                case Dir::N: key = edge_key(L, p + Vec2{0, 1}, true); break;
                case Dir::S: key = edge_key(L, p, true); break;
                case Dir::E: key = edge_key(L, p + Vec2{1, 0}, false); break;
                case Dir::W: key = edge_key(L, p, false); break;
            }
            Monomial mo{kasteleyn_sign(p, d), 0, 0};
            if (auto it = shift.find(key); it != shift.end()) {
                mo.e0 = it->second.first;
                mo.e1 = it->second.second;
            }
            K.entries[static_cast<std::size_t>(b)][static_cast<std::size_t>(w)].push_back(mo);
        }
    }
    return K;
}

std::complex<double> det_numeric(const KasteleynMatrix& K, std::complex<double> q0, std::complex<double> q1) {
    return det_lu(K.dense(q0, q1), K.m);
}

std::pair<int, int> exponent_bounds(const Lattice& L) {
    int B0 = static_cast<int>((L.x0 + 1) / 2);
    int B1 = static_cast<int>((L.x1 + L.y1 + 1) / 2 + 1);
    return {B0, B1};
}

LaurentPoly2 recover_from_grid(const std::vector<std::complex<double>>& values, int B0, int B1, double tol) {
    const int N0 = 2 * B0 + 1, N1 = 2 * B1 + 1;
    std::vector<std::complex<double>> coef = inverse_dft2(values, N0, N1);
    LaurentPoly2 p;
    double worst = 0;
    for (int a = 0; a < N0; ++a)
        for (int b = 0; b < N1; ++b) {
            std::complex<double> c = coef[static_cast<std::size_t>(a * N1 + b)];
            double r = std::round(c.real());
            worst = std::max({worst, std::abs(c.real() - r), std::abs(c.imag())});
            int i = a <= B0 ? a : a - N0;
            int j = b <= B1 ? b : b - N1;
            if (r != 0) p.add_term(i, j, BigInt(static_cast<long long>(r)));
        }
    if (worst >= tol) throw ResidualTooLarge("rounding residual " + std::to_string(worst));
    return p;
}

LaurentPoly2 det_laurent(const KasteleynMatrix& K) {
    auto [B0, B1] = exponent_bounds(K.lattice);
    const int N0 = 2 * B0 + 1, N1 = 2 * B1 + 1;
    std::vector<std::complex<double>> values(static_cast<std::size_t>(N0 * N1));
    for (int a = 0; a < N0; ++a)
        for (int b = 0; b < N1; ++b) {
            std::complex<double> q0 = std::polar(1.0, 2 * std::numbers::pi * a / N0);
            std::complex<double> q1 = std::polar(1.0, 2 * std::numbers::pi * b / N1);
            values[static_cast<std::size_t>(a * N1 + b)] = det_numeric(K, q0, q1);
        }
    return recover_from_grid(values, B0, B1);
}

namespace {

// Sorted sparse polynomial used inside the elimination.
struct Term {
    int i, j;
    BigInt c;
};
using Poly = std::vector<Term>;  // ascending (i, j)

bool key_less(const Term& a, const Term& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; }

Poly mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    int imin = a.front().i + b.front().i, imax = a.back().i + b.back().i;
    int jmin = INT32_MAX, jmax = INT32_MIN;
    int ja0 = INT32_MAX, ja1 = INT32_MIN, jb0 = INT32_MAX, jb1 = INT32_MIN;
    for (const Term& t : a) ja0 = std::min(ja0, t.j), ja1 = std::max(ja1, t.j);
    for (const Term& t : b) jb0 = std::min(jb0, t.j), jb1 = std::max(jb1, t.j);
    jmin = ja0 + jb0;
    jmax = ja1 + jb1;
    const int W = jmax - jmin + 1;
    std::vector<BigInt> acc(static_cast<std::size_t>((imax - imin + 1) * W));
    std::vector<char> touched(acc.size(), 0);
    for (const Term& s : a)
        for (const Term& t : b) {
            std::size_t k = static_cast<std::size_t>((s.i + t.i - imin) * W + (s.j + t.j - jmin));
            acc[k] += s.c * t.c;
            touched[k] = 1;
        }
    Poly out;
    for (std::size_t k = 0; k < acc.size(); ++k)
        if (touched[k] && acc[k] != 0)
            out.push_back({static_cast<int>(k / static_cast<std::size_t>(W)) + imin, static_cast<int>(k % static_cast<std::size_t>(W)) + jmin, std::move(acc[k])});
    return out;
}

// a - b
Poly sub(const Poly& a, const Poly& b) {
    Poly out;
    out.reserve(a.size() + b.size());
    std::size_t x = 0, y = 0;
    while (x < a.size() || y < b.size()) {
        if (y == b.size() || (x < a.size() && key_less(a[x], b[y]))) {
            out.push_back(a[x++]);
        } else if (x == a.size() || key_less(b[y], a[x])) {
            out.push_back({b[y].i, b[y].j, -b[y].c});
            ++y;
        } else {
            BigInt c = a[x].c - b[y].c;
            if (c != 0) out.push_back({a[x].i, a[x].j, std::move(c)});
            ++x;
            ++y;
        }
    }
    return out;
}

Poly exact_div(Poly r, const Poly& d) {
    if (d.empty()) throw std::domain_error("division by zero polynomial");
    const Term& lead = d.back();
    Poly q;
    while (!r.empty()) {
        const Term& top = r.back();
        BigInt rem;
        BigInt c;
        boost::multiprecision::divide_qr(top.c, lead.c, c, rem);
        if (rem != 0) throw std::logic_error("inexact polynomial division");
        Term t{top.i - lead.i, top.j - lead.j, c};
        Poly td;
        td.reserve(d.size());
        for (const Term& s : d) td.push_back({s.i + t.i, s.j + t.j, s.c * t.c});
        r = sub(r, td);
        q.push_back(std::move(t));
    }
    std::reverse(q.begin(), q.end());
    return q;
}

}  // namespace

LaurentPoly2 det_laurent_exact(const KasteleynMatrix& K) {
    const int m = K.m;
    std::vector<std::vector<Poly>> M(static_cast<std::size_t>(m), std::vector<Poly>(static_cast<std::size_t>(m)));
    int shift0 = 0, shift1 = 0;
    for (int r = 0; r < m; ++r) {
        // Multiply the row by the monomial that clears its negative exponents.
        int lo0 = 0, lo1 = 0;
        for (int c = 0; c < m; ++c)
            for (const Monomial& mo : K.entries[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) {
                lo0 = std::min(lo0, mo.e0);
                lo1 = std::min(lo1, mo.e1);
            }
        shift0 += lo0;
        shift1 += lo1;
        for (int c = 0; c < m; ++c) {
            LaurentPoly2 e = K.entry_poly(r, c);
            Poly& p = M[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            for (const auto& [ex, co] : e.terms()) p.push_back({ex.first - lo0, ex.second - lo1, co});
        }
    }
    int sign = 1;
    Poly prev{{0, 0, BigInt(1)}};
    for (int k = 0; k < m; ++k) {
        auto row = [&](int i) -> std::vector<Poly>& { return M[static_cast<std::size_t>(i)]; };
        if (row(k)[static_cast<std::size_t>(k)].empty()) {
            int piv = -1;
            for (int i = k + 1; i < m && piv < 0; ++i)
                if (!row(i)[static_cast<std::size_t>(k)].empty()) piv = i;
            if (piv < 0) return {};
            std::swap(M[static_cast<std::size_t>(k)], M[static_cast<std::size_t>(piv)]);
            sign = -sign;
        }
        const Poly& pk = row(k)[static_cast<std::size_t>(k)];
        for (int i = k + 1; i < m; ++i) {
            const Poly& ik = row(i)[static_cast<std::size_t>(k)];
            for (int j = k + 1; j < m; ++j) {
                Poly num = sub(mul(pk, row(i)[static_cast<std::size_t>(j)]), mul(ik, row(k)[static_cast<std::size_t>(j)]));
                row(i)[static_cast<std::size_t>(j)] = num.empty() ? Poly{} : exact_div(std::move(num), prev);
            }
        }
        prev = pk;
        for (int i = k + 1; i < m; ++i) row(i)[static_cast<std::size_t>(k)].clear();
    }
    LaurentPoly2 out;
    for (const Term& t : M[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(m - 1)])
        out.add_term(t.i + shift0, t.j + shift1, sign * t.c);
    return out;
}

std::pair<int, int> flux_to_exponents(const Lattice& L, const Flux& phi) {
    int odd = static_cast<int>(L.y1 & 1);
    return {static_cast<int>(phi.two_a0 / 2), static_cast<int>((phi.two_a1 - odd) / 2)};
}

Flux exponents_to_flux(const Lattice& L, int i0, int i1) {
    return Flux{2 * static_cast<i64>(i0), 2 * static_cast<i64>(i1) + (L.y1 & 1), L};
}

std::map<Flux, BigInt> count_by_flux_via_det(const Lattice& L, const LaurentPoly2& p) {
    std::map<Flux, BigInt> out;
    for (const auto& [e, c] : p.terms()) out[exponents_to_flux(L, e.first, e.second)] = abs(c);
    return out;
}

std::map<Flux, BigInt> count_by_flux_via_det(const Lattice& L) {
    KasteleynMatrix K = build_kasteleyn(L);
    try {
        return count_by_flux_via_det(L, det_laurent(K));
    } catch (const ResidualTooLarge&) {
        return count_by_flux_via_det(L, det_laurent_exact(K));
    }
}

SignPattern sign_pattern_check(const LaurentPoly2& p) {
    SignPattern sp;
    std::array<LaurentPoly2::Exp, 4> witness{};
    for (const auto& [e, c] : p.terms()) {
        int cls = 2 * (e.first & 1) + (e.second & 1);
        int s = c < 0 ? -1 : 1;
        if (sp.sign[static_cast<std::size_t>(cls)] == 0) {
            sp.sign[static_cast<std::size_t>(cls)] = s;
            witness[static_cast<std::size_t>(cls)] = e;
        } else if (sp.sign[static_cast<std::size_t>(cls)] != s) {
            auto w = witness[static_cast<std::size_t>(cls)];
            throw PatternViolation("monomials (" + std::to_string(w.first) + "," + std::to_string(w.second) + ") and (" +
                                   std::to_string(e.first) + "," + std::to_string(e.second) +
                                   ") differ by an even vector but carry opposite signs");
        }
    }
    int present = 0, prod = 1;
    for (int s : sp.sign)
        if (s != 0) {
            ++present;
            prod *= s;
        }
    if (present == 4) {
        if (prod != -1) throw PatternViolation("the four parity classes do not have a single odd sign");
        for (int c = 0; c < 4; ++c) {
            int same = 0;
            for (int d = 0; d < 4; ++d) same += sp.sign[static_cast<std::size_t>(d)] == sp.sign[static_cast<std::size_t>(c)];
            if (same == 1) sp.odd_class = c;
        }
    }
    return sp;
}

CornerWeights corner_weights(const LaurentPoly2& p) {
    SignPattern sp;
    try {
        sp = sign_pattern_check(p);
    } catch (const PatternViolation& e) {
        throw InconsistentSigns(e.what());
    }
    // Fill absent classes so that the signs have product -1; any filling is exact
    // for the classes that are present.
    std::array<int, 4> s = sp.sign;
    int prod = 1, missing = 0;
    for (int v : s) {
        if (v == 0)
            ++missing;
        else
            prod *= v;
    }
    for (std::size_t c = 0; c < 4; ++c)
        if (s[c] == 0) {
            --missing;
            s[c] = missing == 0 ? -prod : 1;
            prod *= s[c];
        }
    // Corner order (1,1), (1,-1), (-1,1), (-1,-1) against classes ee, eo, oe, oo.
    static constexpr int A[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};
    CornerWeights w;
    for (int r = 0; r < 4; ++r) {
        int acc = 0;
        for (int c = 0; c < 4; ++c) acc += A[r][c] * s[static_cast<std::size_t>(c)];
        if (acc != 2 && acc != -2) throw InconsistentSigns("sign classes do not follow the odd-one-out pattern");
        w.twice[static_cast<std::size_t>(r)] = acc / 2;
    }
    return w;
}

BigInt total_from_corners(const LaurentPoly2& p) {
    CornerWeights w = corner_weights(p);
    static constexpr int corners[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    BigInt twice = 0;
    for (int k = 0; k < 4; ++k) twice += w.twice[static_cast<std::size_t>(k)] * p.eval_signs(corners[k][0], corners[k][1]);
    return twice / 2;
}

}  // namespace torus
