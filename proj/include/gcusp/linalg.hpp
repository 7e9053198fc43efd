#pragma once

#include <Eigen/Dense>

#include <vector>

namespace gcusp {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Matrix exponential by scaling and squaring of a degree-18 Taylor
// polynomial. Throws ValidationError for non-square input and NumericalError
// when the result leaves the representable range.
Mat expm(const Mat& m);

// f_k(s,t) = sum_{j>=k} s^{j-k} t^j / j!  for k in {0,1,2}.
double f_k(int k, double s, double t);

// Boundary-graph helpers, analytic at l = 0:
//   h(l,x) = log(1+l x)/l,  g(l,x) = (l x - log(1+l x))/l^2.
// Both require 1 + l x > 0.
double h_fn(double l, double x);
double g_fn(double l, double x);

// Power sums p_1..p_m of a multiset to its elementary symmetric values e_1..e_m.
std::vector<double> newton_to_elementary(const std::vector<double>& power_sums);

// Upper-triangular A with positive diagonal and A^T A = q. Throws
// ValidationError naming the failing pivot when q is not positive definite.
Mat cholesky_upper(const Mat& q);

double symmetry_residual(const Mat& q);
bool is_positive_definite(const Mat& q);

// det(q)^{-1/dim} q, the unimodular representative of the ray through q.
Mat unimodular(const Mat& q);

// Relative comparison above magnitude 1, absolute below.
bool approx_equal(double a, double b, double tol = 1e-9);
double scaled_diff(double a, double b);
double max_scaled_diff(const Mat& a, const Mat& b);

bool is_upper_triangular(const Mat& m, double tol = 0.0);

}  // namespace gcusp
