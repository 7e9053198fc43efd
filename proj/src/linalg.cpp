#include "gcusp/linalg.hpp"

#include "gcusp/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace gcusp {

namespace {

constexpr int kTaylorOrder = 18;
constexpr double kSeriesThreshold = 1e-4;
constexpr int kSeriesTerms = 6;

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

Mat expm(const Mat& m) {
    if (m.rows() != m.cols()) throw ValidationError("expm: matrix is not square");
    if (!m.allFinite()) throw ValidationError("expm: non-finite input");
    const Eigen::Index dim = m.rows();
    if (dim == 0) return m;

    const double norm = m.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const Mat x = m / std::ldexp(1.0, squarings);

    // Horner evaluation of sum_{k<=N} x^k/k!.
    const Mat id = Mat::Identity(dim, dim);
    Mat result = id;
    for (int k = kTaylorOrder; k >= 1; --k) result = id + (x * result) / static_cast<double>(k);
    for (int i = 0; i < squarings; ++i) result = result * result;

    if (!result.allFinite()) throw NumericalError("expm: result overflowed the double range");
    return result;
}

double f_k(int k, double s, double t) {
    if (k < 0 || k > 2) throw ValidationError("f_k: k must be 0, 1 or 2");
    const double st = s * t;
    if (k == 0) return std::exp(st);
    if (std::abs(st) < kSeriesThreshold) {
        // t^k * sum_j (st)^j / (j+k)!
        double sum = 0.0;
        double pw = 1.0;
        for (int j = 0; j < kSeriesTerms; ++j) {
            sum += pw / factorial(j + k);
            pw *= st;
        }
        return std::pow(t, k) * sum;
    }
    if (k == 1) return std::expm1(st) / s;
    return (std::expm1(st) - st) / (s * s);
}

double h_fn(double l, double x) {
    const double lx = l * x;
    if (!(1.0 + lx > 0.0)) throw ValidationError("h(l,x) requires 1 + l*x > 0");
    if (std::abs(lx) < kSeriesThreshold) {
        double sum = 0.0;
        double pw = 1.0;
        for (int j = 0; j < kSeriesTerms; ++j) {
            sum += pw / (j + 1);
            pw *= -lx;
        }
        return x * sum;
    }
    return std::log1p(lx) / l;
}

double g_fn(double l, double x) {
    const double lx = l * x;
    if (!(1.0 + lx > 0.0)) throw ValidationError("g(l,x) requires 1 + l*x > 0");
    if (std::abs(lx) < kSeriesThreshold) {
        double sum = 0.0;
        double pw = 1.0;
        for (int j = 0; j < kSeriesTerms; ++j) {
            sum += pw / (j + 2);
            pw *= -lx;
        }
        return x * x * sum;
    }
    return (lx - std::log1p(lx)) / (l * l);
}

std::vector<double> newton_to_elementary(const std::vector<double>& p) {
    const std::size_t m = p.size();
    std::vector<double> e(m + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t k = 1; k <= m; ++k) {
        double acc = 0.0;
        double sign = 1.0;
        for (std::size_t i = 1; i <= k; ++i) {
            acc += sign * e[k - i] * p[i - 1];
            sign = -sign;
        }
        e[k] = acc / static_cast<double>(k);
    }
    return {e.begin() + 1, e.end()};
}

Mat cholesky_upper(const Mat& q) {
    if (q.rows() != q.cols()) throw ValidationError("cholesky_upper: matrix is not square");
    const Eigen::Index n = q.rows();
    Mat a = Mat::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = q(j, j);
        for (Eigen::Index k = 0; k < j; ++k) d -= a(k, j) * a(k, j);
        if (!(d > 0.0)) {
            throw ValidationError("cholesky_upper: not positive definite (pivot " +
                                  std::to_string(j) + ")");
        }
        a(j, j) = std::sqrt(d);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = q(j, i);
            for (Eigen::Index k = 0; k < j; ++k) s -= a(k, j) * a(k, i);
            a(j, i) = s / a(j, j);
        }
    }
    return a;
}

double symmetry_residual(const Mat& q) {
    if (q.size() == 0) return 0.0;
    return (q - q.transpose()).cwiseAbs().maxCoeff();
}

bool is_positive_definite(const Mat& q) {
    if (q.rows() != q.cols() || q.rows() == 0) return false;
    if (symmetry_residual(q) > 1e-12 * std::max(1.0, q.cwiseAbs().maxCoeff())) return false;
    Eigen::SelfAdjointEigenSolver<Mat> es(q, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() > 0.0;
}

Mat unimodular(const Mat& q) {
    const double det = q.determinant();
    if (!(det > 0.0)) throw ValidationError("unimodular: form has non-positive determinant");
    return q / std::pow(det, 1.0 / static_cast<double>(q.rows()));
}

double scaled_diff(double a, double b) {
    const double mag = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) / std::max(1.0, mag);
}

bool approx_equal(double a, double b, double tol) { return scaled_diff(a, b) <= tol; }

double max_scaled_diff(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) worst = std::max(worst, scaled_diff(a(i, j), b(i, j)));
    return worst;
}

bool is_upper_triangular(const Mat& m, double tol) {
    for (Eigen::Index i = 1; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < std::min(i, m.cols()); ++j)
            if (std::abs(m(i, j)) > tol) return false;
    return true;
}

}  // namespace gcusp
