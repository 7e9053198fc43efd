#pragma once

#include "gcusp/cusp_groups.hpp"

#include <functional>
#include <vector>

namespace gcusp {

// Affine Lie-algebra weights: n+1 covectors on R^{n-1}, one of them the zero
// weight of the translation line.
struct CharacterData {
    std::vector<Vec> weights;

    // chi(v) = sum_i exp(xi_i(v)).
    double evaluate(const Vec& v) const;
};

struct CompleteInvariant {
    CharacterData character;
    Mat metric;  // unimodular, positive definite
};

// Linear-part weights and unimodular metric.
struct WeightData {
    std::vector<Vec> weights;
    Mat metric;

    // Dual pairing <a, b> = a^T metric^{-1} b.
    double pairing(const Vec& a, const Vec& b) const;
    // Negated mean of the off-diagonal pairings.
    double varpi() const;
    // Largest deviation of an off-diagonal pairing from -varpi().
    double residual() const;
};

// Reads weights off the diagonals of triangular generators and cross-checks
// them against power sums of trace(rho(k v)). Throws ValidationError for
// non-triangular generators and NumericalError when the cross-check fails.
CharacterData weights_of(const MarkedCusp& c);

enum class MetricRoute { Jet, FiniteDifference, Fit };
Mat horosphere_metric(const MarkedCusp& c, MetricRoute route = MetricRoute::Jet);

// Closed form: unimodular representative of M^T (I + kappa kappa^T) M with M
// the effective marking.
Mat canonical_metric(const MarkedCusp& c);

CompleteInvariant complete_invariant(const MarkedCusp& c);

// Weights sorted lexicographically by coordinates rounded to 1e-12.
std::vector<Vec> canonical_order(std::vector<Vec> weights);

// Bottleneck distance between two weight multisets under the best matching.
double multiset_distance(const std::vector<Vec>& a, const std::vector<Vec>& b);

double invariant_distance(const CompleteInvariant& a, const CompleteInvariant& b);
bool are_equivalent(const CompleteInvariant& a, const CompleteInvariant& b, double tol);
bool are_conjugate(const MarkedCusp& a, const MarkedCusp& b, double tol = 1e-8);

// The ordered parameter psi of the translation group Tr(psi) conjugate to a
// cusp with invariant eta.
PsiParameter recover_psi_from_invariant(const CompleteInvariant& eta);

WeightData weight_data(const MarkedCusp& c);
// Same as weight_data but the metric comes from the closed form.
WeightData canonical_weight_data(const MarkedCusp& c);

// Closed-form varpi = lambda_0^2 varkappa^{2-n}, varkappa = (1+|kappa|^2)^{1/(n-1)}.
double varpi_closed_form(const BlownUpWeylPoint& p);
// Same, times |det M|^{2/(n-1)} for the effective marking M (which is not
// unimodular in the orthonormalized variant).
double varpi_closed_form(const MarkedCusp& c);

// Canonical cusp Phi o B realizing the weight data; throws ValidationError
// when the weights equation fails.
MarkedCusp realize_weight_data(const WeightData& w);

// xi_i = A^T v_i and metric A^T A (unimodular).
WeightData frame_to_weight_data(const Mat& a, const std::vector<Vec>& vs);

CharacterData projectivize_character(const MarkedCusp& c);
Vec middle_weight(const std::vector<Vec>& weights);
CharacterData affine_from_projective(const CharacterData& shifted);

int stratum_dim(int n, int t);

// Checks the weights equation against a supplied closed form for varpi.
// Returns the largest discrepancy; used by the verification battery.
double weights_equation_defect(const MarkedCusp& c,
                               const std::function<double(const MarkedCusp&)>& varpi_formula);

}  // namespace gcusp
