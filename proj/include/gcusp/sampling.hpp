#pragma once

#include "gcusp/cusp_groups.hpp"

#include <random>

namespace gcusp {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);
Vec random_vector(Rng& rng, int dim, double scale = 1.0);

// Random point of the blown-up chamber with the requested type (t < 0 picks
// one uniformly). Diagonalizable samples keep lambda_0 in [0.3, 2].
BlownUpWeylPoint random_params(Rng& rng, int n, int type = -1);

// Marking with |det| = 1, condition number at most about 10, random sign.
Mat random_marking(Rng& rng, int dim);

MarkedCusp random_cusp(Rng& rng, int n, int type = -1);

// Affine (n+1)x(n+1) map with well-conditioned linear part.
Mat random_affine(Rng& rng, int n);
// Upper-triangular affine map (preserves triangular generators).
Mat random_borel(Rng& rng, int n);

// Random orthogonal matrix (Haar via QR with sign fix).
Mat random_orthogonal(Rng& rng, int dim);

}  // namespace gcusp
