#include "torus/height.hpp"
#include "torus/kasteleyn.hpp"
#include "torus/kernels.hpp"
#include "torus/lattice.hpp"
#include "torus/spectral.hpp"
#include "torus/tilings.hpp"
#include "torus/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace torus;

namespace {

// Usage errors that surface after CLI11 has accepted the command line.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt5(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5f", x);
    return buf;
}

Rat parse_rat(const std::string& s) {
    try {
        std::size_t slash = s.find('/');
        std::size_t used = 0;
        if (slash == std::string::npos) {
            long long v = std::stoll(s, &used);
            if (used != s.size()) throw UsageError("bad number '" + s + "'");
            return Rat(v);
        }
        std::string a = s.substr(0, slash), b = s.substr(slash + 1);
        long long n = std::stoll(a, &used);
        if (used != a.size()) throw UsageError("bad number '" + s + "'");
        long long d = std::stoll(b, &used);
        if (used != b.size() || d == 0) throw UsageError("bad number '" + s + "'");
        return Rat(n, d);
    } catch (const std::logic_error&) {
        throw UsageError("bad number '" + s + "'");
    }
}

Flux parse_flux(const Lattice& L, const std::string& s) {
    std::string body = s;
    if (!body.empty() && body.front() == '(' && body.back() == ')') body = body.substr(1, body.size() - 2);
    std::size_t comma = body.find(',');
    if (comma == std::string::npos) throw UsageError("flux must be written x,y");
    RatVec p{parse_rat(body.substr(0, comma)), parse_rat(body.substr(comma + 1))};
    if (!l_sharp_membership(L, p)) throw UsageError("flux " + s + " is not a flux value of this torus");
    return flux_from_cartesian(L, p);
}

double ratio(const BigInt& a, const BigInt& b) {
    using R = boost::multiprecision::cpp_bin_float_50;
    return static_cast<double>(R(a) / R(b));
}

std::map<Flux, BigInt> census_any(const Lattice& L, i64 cap) {
    if (L.area() <= cap) {
        std::map<Flux, BigInt> out;
        for (const auto& [phi, n] : tilings_by_flux(L, cap)) out[phi] = n;
        return out;
    }
    return count_by_flux_via_det(L, det_laurent_spectral(L));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact enumeration, classification and counting of domino tilings of tori"};
    app.require_subcommand(1);
    i64 cap = default_area_cap();
    app.add_option("--cap", cap, "area cap for brute-force enumeration (default 40 or TORUS_AREA_CAP)");

    std::string lattice_spec, format = "text", flux_spec, out_path = "tiling.svg", method = "auto";
    int index = 0, n = 2, samples = 50, m_rect = 0, n_rect = 0, csv_grid = 0;
    std::uint32_t seed = 1;
    i64 max_area = 36;
    bool list = false;
    auto lattice_opt = [&](CLI::App* sub) {
        sub->add_option("lattice", lattice_spec, "torus as x0,x1,y1 with basis (x0,0),(x1,y1)")->required();
    };

    auto* enumerate = app.add_subcommand("enumerate", "count all tilings, optionally listing them");
    lattice_opt(enumerate);
    enumerate->add_flag("--list", list, "print every tiling as a row-major string over NESW");
    enumerate->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    auto* flux_table = app.add_subcommand("flux-table", "tilings per flux value with proportions");
    lattice_opt(flux_table);
    flux_table->add_option("--format", format)->check(CLI::IsMember({"text", "json", "csv"}));

    auto* polynomial = app.add_subcommand("polynomial", "the Kasteleyn determinant as a Laurent polynomial");
    lattice_opt(polynomial);
    polynomial->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
    polynomial->add_option("--method", method, "auto, dft, exact or spectral")
        ->check(CLI::IsMember({"auto", "dft", "exact", "spectral"}));

    auto* flips = app.add_subcommand("flip-graph", "flip connectivity of one flux class");
    lattice_opt(flips);
    flips->add_option("--flux", flux_spec, "Cartesian flux such as 0,0 or 1/4,1/4")->required();
    flips->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    auto* boundary = app.add_subcommand("boundary", "staircase classes on the four sides of the flux diamond");
    lattice_opt(boundary);

    auto* spectral = app.add_subcommand("spectral-check", "closed-form determinant identities at random points");
    lattice_opt(spectral);
    spectral->add_option("--samples", samples);
    spectral->add_option("--seed", seed);
    spectral->add_option("--csv", csv_grid, "instead print a CSV sweep over an N x N grid of arguments");

    auto* product = app.add_subcommand("product-formula", "uniform scaling product formula residuals");
    lattice_opt(product);
    product->add_option("--n", n)->check(CLI::Range(1, 4));
    product->add_option("--samples", samples);
    product->add_option("--seed", seed);

    auto* rectangle = app.add_subcommand("rectangle", "tilings of the planar M x N rectangle");
    rectangle->add_option("M", m_rect)->required();
    rectangle->add_option("N", n_rect)->required();

    auto* render = app.add_subcommand("render", "draw one enumerated tiling as SVG");
    lattice_opt(render);
    render->add_option("--index", index)->required();
    render->add_option("--out", out_path);

    auto* verify = app.add_subcommand("verify-all", "run the full acceptance suite");
    verify->add_option("--max-area", max_area, "lattice sweep bound")->check(CLI::Range(2, 64));
    verify->add_option("--seed", seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::ostream& out = std::cout;
    try {
        if (*rectangle) {
            if (m_rect < 1 || n_rect < 1) throw UsageError("rectangle sides must be positive");
            // The closed form wants an even first side; the count is symmetric.
            if (m_rect % 2 != 0) std::swap(m_rect, n_rect);
            if (m_rect % 2 != 0) {
                out << 0 << "\n";
                return 0;
            }
            out << rectangle_count(m_rect, n_rect) << "\n";
            return 0;
        }
        if (*verify) {
            VerifyOptions opt;
            opt.max_area = max_area;
            if (verify->count("--seed")) opt.seed = seed;
            opt.on_result = [&](const CriterionResult& r) { out << format_result(r) << std::endl; };
            bool all = true;
            for (const auto& r : run_acceptance(opt)) all = all && r.pass;
            return all ? 0 : 1;
        }

        const Lattice L = Lattice::parse(lattice_spec);

        if (*enumerate) {
            std::vector<Tiling> ts = enumerate_tilings(L, cap);
            if (format == "json") {
                nlohmann::json j{{"lattice", nlohmann::json::parse(L.to_json())}, {"count", ts.size()}};
                if (list) {
                    j["tilings"] = nlohmann::json::array();
                    for (const Tiling& t : ts) j["tilings"].push_back(t.serialize());
                }
                out << j.dump() << "\n";
            } else {
                out << ts.size() << "\n";
                if (list)
                    for (const Tiling& t : ts) out << t.serialize() << "\n";
            }
        } else if (*flux_table) {
            std::map<Flux, BigInt> c = census_any(L, cap);
            BigInt total = 0;
            for (const auto& [phi, k] : c) total += k;
            if (format == "json") {
                nlohmann::json arr = nlohmann::json::array();
                for (const auto& [phi, k] : c)
                    arr.push_back({{"flux", phi.to_string()}, {"count", k.str()}, {"proportion", fmt5(ratio(k, total))}});
                out << nlohmann::json{{"lattice", L.to_string()}, {"total", total.str()}, {"fluxes", arr}}.dump() << "\n";
            } else {
                const char sep = format == "csv" ? ',' : '\t';
                out << "flux" << sep << "count" << sep << "proportion\n";
                for (const auto& [phi, k] : c)
                    out << (format == "csv" ? "\"" + phi.to_string() + "\"" : phi.to_string()) << sep << k << sep
                        << fmt5(ratio(k, total)) << "\n";
                out << "total" << sep << total << sep << fmt5(1.0) << "\n";
            }
        } else if (*polynomial) {
            LaurentPoly2 p;
            if (method == "spectral" || (method == "auto" && L.area() > cap)) {
                p = det_laurent_spectral(L);
            } else {
                KasteleynMatrix K = build_kasteleyn(L);
                if (method == "exact") {
                    p = det_laurent_exact(K);
                } else {
                    try {
                        p = det_laurent(K);
                    } catch (const ResidualTooLarge&) {
                        if (method == "dft") throw;
                        p = det_laurent_exact(K);
                    }
                }
            }
            out << (format == "json" ? p.to_json() : p.to_text()) << "\n";
        } else if (*flips) {
            Flux phi = parse_flux(L, flux_spec);
            FlipGraph g = flip_graph(L, phi, cap);
            if (format == "json") {
                out << nlohmann::json{{"flux", phi.to_string()},
                                      {"boundary", phi.on_boundary()},
                                      {"nodes", g.nodes.size()},
                                      {"edges", g.edges.size()},
                                      {"components", g.components},
                                      {"connected", g.connected},
                                      {"isolated", g.isolated.size()}}
                           .dump()
                    << "\n";
            } else {
                out << "flux " << phi.to_string() << (phi.on_boundary() ? " (boundary)" : " (interior)") << "\n"
                    << "nodes " << g.nodes.size() << "\nedges " << g.edges.size() << "\ncomponents " << g.components
                    << "\nconnected " << (g.connected ? "yes" : "no") << "\nisolated " << g.isolated.size() << "\n";
            }
        } else if (*boundary) {
            i64 total = 0;
            for (int k = 1; k <= 4; ++k) {
                StaircaseClasses s = boundary_structure(L, k);
                out << "side " << k << ": c=" << s.c << " counts";
                BigInt b = 1;
                for (int i = 0; i <= s.c; ++i) {
                    out << " " << b;
                    b = b * (s.c - i) / (i + 1);
                }
                out << "\n";
                total += i64{1} << s.c;
            }
            // Each brick wall sits on two sides.
            out << "boundary tilings " << total - 4 << "\n";
        } else if (*spectral) {
            if (csv_grid > 0) {
                out << spectral_csv(L, csv_grid, csv_grid);
                return 0;
            }
            std::mt19937 rng(seed);
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            KasteleynMatrix K = build_kasteleyn(L);
            double w_eig = 0, w_id = 0, w_per = 0;
            int stated = 0;
            for (int t = 0; t < samples; ++t) {
                UnitArgPair u{unif(rng), unif(rng)};
                std::complex<double> d = det_numeric(K, u.q0(), u.q1());
                double prod = 1;
                for (double e : eigenvalues_M(L, u)) prod *= e;
                w_eig = std::max(w_eig, std::abs(prod - std::pow(std::abs(d), 4)) / prod);
                w_id = std::max(w_id, std::abs(d - combinatorial_gauge(L, u) * det_KD(L, u)) / std::abs(d));
                std::complex<double> p = p_LE(L, u);
                w_per = std::max({w_per, std::abs(p_LE(L, {u.u0 + 1, u.u1}) - p) / std::abs(p),
                                  std::abs(p_LE(L, {u.u0, u.u1 + 1}) - (L.y1 % 2 ? -1.0 : 1.0) * p) / std::abs(p)});
                if (L.y1 % 2 == 0) {
                    double re = d.real(), slack = 1e-9 * std::abs(d);
                    if (L.y1 % 4 == 0 ? re <= slack : re >= -slack) ++stated;
                }
            }
            const double tol = 1e-9;
            bool ok = w_eig < tol && w_id < tol && w_per < tol;
            out << "kernels " << kernels::active_variant() << "\n"
                << "rho1 " << rho1(L) << "\n"
                << "eigenvalue product residual " << w_eig << "\n"
                << "determinant identity residual " << w_id << "\n"
                << "periodicity residual " << w_per << "\n";
            if (L.y1 % 2 == 0) {
                out << "stated sign corollary holds at " << stated << " of " << samples << " points\n";
                ok = ok && stated == samples;
            }
            out << (ok ? "ok" : "FAILED") << "\n";
            return ok ? 0 : 1;
        } else if (*product) {
            std::mt19937 rng(seed);
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            ProductResidual worst;
            for (int t = 0; t < samples; ++t) {
                ProductResidual r = product_formula_check(L, n, {unif(rng), unif(rng)});
                worst.scaling = std::max(worst.scaling, r.scaling);
                worst.domain = std::max(worst.domain, r.domain);
            }
            out << "scaling residual " << worst.scaling << "\ndomain residual " << worst.domain << "\n"
                << "mu1 " << (L.y1 % 2 == 0 ? "1" : "power of q1") << "\n";
            bool ok = worst.max() < 1e-9;
            out << (ok ? "ok" : "FAILED") << "\n";
            return ok ? 0 : 1;
        } else if (*render) {
            std::vector<Tiling> ts = enumerate_tilings(L, cap);
            if (index < 0 || index >= static_cast<int>(ts.size()))
                throw UsageError("index out of range, there are " + std::to_string(ts.size()) + " tilings");
            std::ofstream f(out_path);
            if (!f) throw UsageError("cannot write " + out_path);
            f << render_svg(ts[static_cast<std::size_t>(index)]);
            out << "wrote " << out_path << "\n";
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NotValidLattice& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const AreaCapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
