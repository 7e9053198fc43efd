#pragma once

#include "gcusp/cubic.hpp"
#include "gcusp/cusp_groups.hpp"
#include "gcusp/height.hpp"
#include "gcusp/invariants.hpp"

#include <vector>

namespace gcusp {

enum class ShapeRoute { Fit, Algebraic };

// [J] = [q + c] from the 3-jet of the height function, scaled so det q = 1.
ShapeInvariant shape_invariant(const MarkedCusp& c, ShapeRoute route = ShapeRoute::Fit);

// Closed form (<Mv,Mv> + <Mv,kappa>^2) + (-lambda_0 <Mv,kappa>^3 + sum lambda_i (Mv)_i^3)/3
// for the effective marking M, normalized the same way.
ShapeInvariant theta_shape(const MarkedCusp& c);

// (1/2) sum psi_i x_i^2 + (1/6) sum psi_i x_i^3 for x with sum psi_i x_i = 0.
double J_psi_eval(const PsiParameter& psi, const Vec& x);

// q = beta, c = (1/3) sum xi^3 / (beta*(xi) + varpi) over nonzero weights.
ShapeInvariant cubic_from_weights(const WeightData& w);

// Vector v such that the q-radial part of c is q(x,x) q(v,x).
Vec radial_projection(const Mat& q, const CubicPoly& c);

// ||radial_projection|| of the cusp's shape invariant is at most tol.
bool is_affine_sphere(const MarkedCusp& c, double tol = 1e-8);

// Parameter-side predicate: lambda_0 = lambda_1 = ... = lambda_{n-1}.
bool has_equal_lambdas(const BlownUpWeylPoint& p, double tol = 1e-12);

// Affine normal of the graph y = q(x) + c(x) at 0, as (height, V) components:
// (1, -pi_q(c)/2).
Vec affine_normal_at_base(const Mat& q, const CubicPoly& c);

struct SphereMaxima {
    std::vector<Vec> points;  // q(x, x) = 1
    std::vector<double> values;
    bool degenerate = false;  // c vanishes: every point is critical
};

struct MaximaOptions {
    int restarts = -1;  // default 100 + 20 (dim)
    unsigned long long seed = 0x6d61ULL;
    double dedup_tol = 1e-6;
};

// All local maxima of c restricted to {q = 1}: multi-start projected ascent,
// Newton polish on the Lagrange system, classification by the projected
// Hessian. Throws NumericalError when no restart converges.
SphereMaxima sphere_local_maxima(const Mat& q, const CubicPoly& c, const MaximaOptions& options = {});

// The maxima with c > tol * max|c|; for non-diagonalizable shapes these are
// the ones that encode weights (negative local maxima also occur).
SphereMaxima positive_maxima(const SphereMaxima& all, const CubicPoly& c, double tol = 1e-8);

// Canonical cusp with shape invariant J. Refuses n = 2 and rejects shapes
// whose maxima match neither the orthogonal nor the obtuse pattern.
MarkedCusp recover_cusp_from_shape(const ShapeInvariant& j);

}  // namespace gcusp
