#pragma once

#include "gcusp/cubic.hpp"
#include "gcusp/cusp_groups.hpp"

namespace gcusp {

// h(v) = hessian(v,v)/2 + cubic(v) + O(|v|^4).
struct HeightJet {
    Mat hessian;
    CubicPoly cubic;
};

// Conormal w with w.x = det(u_1, ..., u_{n-1}, x) for the orbit tangents
// u_i at the basepoint, signed so that the height is positive near 0.
Vec height_conormal(const MarkedCusp& c);

double height_at(const MarkedCusp& c, const Vec& v);

// Exact series coefficients: hessian_ij = w G_i G_j b, cubic = w G^3 b / 6.
HeightJet algebraic_jet(const MarkedCusp& c);

// Least-squares polynomial fit of height_at on a small symmetric sample ball.
// Throws NumericalError when the fit residual is too large.
struct JetFitOptions {
    double radius = 1e-2;
    int degree = 5;
    int oversample = 5;
    unsigned long long seed = 0x5eedULL;
};
HeightJet fit_jet(const MarkedCusp& c, const JetFitOptions& options = {});

// Central second differences of height_at.
Mat finite_difference_hessian(const MarkedCusp& c, double step = 1e-3);

}  // namespace gcusp
