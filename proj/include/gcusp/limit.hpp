#pragma once

#include "gcusp/cusp_groups.hpp"

#include <vector>

namespace gcusp {

// Diagonalizable family lambda_0 = 1/m, lambda_i = lambda_0 / kappa_i with kappa
// fixed, and its limit lambda = 0 (same kappa, type 0).
BlownUpWeylPoint limit_family_point(const Vec& kappa, double m);
BlownUpWeylPoint limit_point(const Vec& kappa);

struct LimitRow {
    double m;
    double generator_distance;  // max entry of G_i(m) - G_i(limit) over the basis
    double invariant_distance;
};

std::vector<LimitRow> limit_demo(const Vec& kappa, const std::vector<double>& ms);

}  // namespace gcusp
