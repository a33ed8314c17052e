#pragma once

#include "torus/kasteleyn.hpp"
#include "torus/lattice.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace torus {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

struct VerifyOptions {
    i64 max_area = 36;  // lattice sweep bound; at most 64
    std::uint32_t seed = 20240613;
    int sign_pairs = 1000;       // sampled T_2 pairs for the quasicycle law
    int spectral_samples = 50;   // random unit points per lattice
    // Called with each finished criterion, so long runs can stream their report.
    std::function<void(const CriterionResult&)> on_result;
};

// The T_2 determinant in its published form.
LaurentPoly2 printed_t2_polynomial();

// Tilings of the planar width x height board by a broken-profile transfer matrix.
BigInt rectangle_transfer_count(int width, int height);

std::vector<CriterionResult> run_acceptance(const VerifyOptions& opt);
std::string format_result(const CriterionResult& r);

}  // namespace torus
