#pragma once

#include "gcusp/linalg.hpp"

#include <optional>
#include <vector>

namespace gcusp {

// Diagonal parameter psi = (psi_1..psi_n) of the translation group Tr(psi).
// Ordered: psi_1 >= ... >= psi_n >= 0.  Unordered: positives precede zeros.
enum class PsiOrdering { Ordered, Unordered };

struct PsiParameter {
    int n = 0;
    Vec psi;
    PsiOrdering ordering = PsiOrdering::Unordered;

    int type() const;          // number of positive entries
    int unipotent_rank() const;  // u = n-1-r
    int diagonal_rank() const;   // r = min(t, n-1)
    void validate() const;       // throws ValidationError
};

// (lambda, kappa) in the blown-up Weyl chamber (lambda ascending, kappa in
// [0,1], lambda_0 = lambda_i kappa_i) or in the diagonalizable chart where
// all lambda are positive and need not be ordered.
enum class Flavor { BlownUpWeyl, Diagonal };

struct BlownUpWeylPoint {
    int n = 0;
    Vec lambda;  // lambda_0 .. lambda_{n-1}
    Vec kappa;   // kappa_1 .. kappa_{n-1}
    Flavor flavor = Flavor::BlownUpWeyl;

    // kappa_i = lambda_0 / lambda_i, and 0 where lambda_i = 0.
    static BlownUpWeylPoint from_lambda(const Vec& lambda, Flavor flavor = Flavor::BlownUpWeyl);

    int type() const;
    void validate() const;
};

// True when x counts as nonzero relative to the largest entry of the vector.
bool is_nonzero_entry(double x, double largest);

class MarkedCusp {
public:
    // A cusp given only by commuting Lie-algebra generators and a basepoint in
    // homogeneous coordinates (last entry 1).
    static MarkedCusp from_generators(std::vector<Mat> generators, Vec basepoint);

    int n() const { return n_; }
    int dim() const { return n_ - 1; }
    const std::vector<Mat>& generators() const { return generators_; }
    const Vec& basepoint() const { return basepoint_; }
    const std::optional<BlownUpWeylPoint>& params() const { return params_; }
    const Mat& marking() const { return marking_; }
    bool orthonormalized() const { return orthonormalized_; }
    double rescale() const { return rescale_; }
    const Mat& frame() const { return frame_; }

    // The marking actually composed with Phi: S^{-1} B for the orthonormalized
    // variant, B otherwise.
    Mat effective_marking() const;

    Mat lie_algebra(const Vec& v) const;
    Mat holonomy(const Vec& v) const;
    int type() const;

private:
    friend MarkedCusp build_marked_cusp(const BlownUpWeylPoint&, const Mat&, bool);
    friend MarkedCusp conjugated(const MarkedCusp&, const Mat&);

    int n_ = 0;
    std::vector<Mat> generators_;
    Vec basepoint_;
    std::optional<BlownUpWeylPoint> params_;
    Mat marking_;
    bool orthonormalized_ = false;
    double rescale_ = 1.0;
    Mat frame_;
};

Mat lie_algebra_zeta(const PsiParameter& psi, const Vec& v);
Mat lie_algebra_phi(const BlownUpWeylPoint& p, const Vec& v);

// Phi o B (or the orthonormalized variant). A marking with |det B| != 1 is
// divided by s = |det B|^{1/(n-1)} and lambda multiplied by s.
MarkedCusp build_marked_cusp(const BlownUpWeylPoint& p, const Mat& b, bool orthonormalized = false);

// zeta_psi o B with the basepoint e_1 + ... + e_t + e_{n+1}.
MarkedCusp build_psi_cusp(const PsiParameter& psi, const Mat& b);

// P rho P^{-1} for an affine P, with the basepoint carried along.
MarkedCusp conjugated(const MarkedCusp& c, const Mat& p);

Mat preferred_sqrt(const Vec& kappa);

PsiParameter lambda_to_psi(const BlownUpWeylPoint& p);
BlownUpWeylPoint psi_to_lambda(const PsiParameter& psi);

struct DiagConjugator {
    Mat q;       // Q Phi(v) Q^{-1} = zeta_psi(frak_f v)
    Mat frak_f;  // lambda_0^2 diag(lambda_1..lambda_{n-1})
    PsiParameter psi;
};
DiagConjugator diag_conjugator(const BlownUpWeylPoint& p);

// Affine coordinates of rho(v) b.
Vec orbit_point(const MarkedCusp& c, const Vec& v);

// Height of the boundary over x (first orbit coordinate); requires 1 + lambda_i x_i > 0.
double hypersurface_F(const BlownUpWeylPoint& p, const Vec& x);

// Common fixed point of the holonomy (least squares); throws NumericalError
// when the system is ill-conditioned.
Vec radial_center(const MarkedCusp& c);
Vec radial_flow(const MarkedCusp& c, double t, const Vec& x);

}  // namespace gcusp
