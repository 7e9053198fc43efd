#include "gcusp/shape.hpp"

#include "gcusp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace gcusp {

namespace {

constexpr double kOrthogonalTol = 1e-6;

struct Candidate {
    Vec y;
    double value;
};

// Ascent plus Newton polish for p(y) = c(y) on the Euclidean unit sphere.
bool polish(const CubicPoly& p, Vec& y) {
    const int m = static_cast<int>(y.size());
    double step = 0.5;
    for (int it = 0; it < 800; ++it) {
        const Vec g = p.gradient(y);
        const Vec pg = g - y * y.dot(g);
        if (pg.norm() < 1e-7) break;
        const double f0 = p(y);
        bool moved = false;
        for (int k = 0; k < 40; ++k) {
            const Vec trial = (y + step * pg).normalized();
            if (p(trial) > f0) {
                y = trial;
                step = std::min(step * 2.0, 4.0);
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    // Newton on grad p(y) = 2 mu y, |y|^2 = 1.
    double mu = 1.5 * p(y);
    for (int it = 0; it < 50; ++it) {
        Vec f(m + 1);
        f.head(m) = p.gradient(y) - 2.0 * mu * y;
        f(m) = y.squaredNorm() - 1.0;
        if (f.norm() < 1e-14) break;
        Mat jac = Mat::Zero(m + 1, m + 1);
        jac.topLeftCorner(m, m) = p.hessian(y) - 2.0 * mu * Mat::Identity(m, m);
        jac.topRightCorner(m, 1) = -2.0 * y;
        jac.bottomLeftCorner(1, m) = 2.0 * y.transpose();
        const Vec d = jac.fullPivLu().solve(-f);
        if (!d.allFinite()) return false;
        y += d.head(m);
        mu += d(m);
    }
    y.normalize();
    const Vec g = p.gradient(y);
    return (g - y * y.dot(g)).norm() < 1e-9 * std::max(1.0, g.norm());
}

bool is_local_max(const CubicPoly& p, const Vec& y, double scale) {
    const int m = static_cast<int>(y.size());
    if (m == 1) return true;
    const double mu2 = y.dot(p.gradient(y));  // 2 mu
    const Mat lag = p.hessian(y) - mu2 * Mat::Identity(m, m);
    // Orthonormal basis of the tangent space.
    Eigen::HouseholderQR<Mat> qr(y);
    const Mat basis = (qr.householderQ() * Mat::Identity(m, m)).rightCols(m - 1);
    const Mat proj = basis.transpose() * lag * basis;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (proj + proj.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff() < -1e-4 * scale;
}

ShapeInvariant jet_to_shape(const HeightJet& jet) { return ShapeInvariant::normalized(0.5 * jet.hessian, jet.cubic); }

}  // namespace

ShapeInvariant shape_invariant(const MarkedCusp& c, ShapeRoute route) {
    return jet_to_shape(route == ShapeRoute::Fit ? fit_jet(c) : algebraic_jet(c));
}

ShapeInvariant theta_shape(const MarkedCusp& c) {
    if (!c.params()) throw ValidationError("theta: needs a canonical cusp");
    const BlownUpWeylPoint& p = *c.params();
    const Mat mk = c.effective_marking();
    const int m = c.dim();
    const Mat q = mk.transpose() * (Mat::Identity(m, m) + p.kappa * p.kappa.transpose()) * mk;
    std::vector<Vec> forms{mk.transpose() * p.kappa};
    std::vector<double> weights{-p.lambda(0) / 3.0};
    for (int i = 0; i < m; ++i) {
        forms.push_back(mk.row(i).transpose());
        weights.push_back(p.lambda(i + 1) / 3.0);
    }
    return ShapeInvariant::normalized(q, CubicPoly::sum_of_cubes(forms, weights));
}

double J_psi_eval(const PsiParameter& psi, const Vec& x) {
    if (x.size() != psi.n) throw ValidationError("J_psi: x must have n entries");
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff() * psi.psi.cwiseAbs().maxCoeff());
    if (std::abs(psi.psi.dot(x)) > 1e-9 * scale) throw ValidationError("J_psi: x is not in the kernel of psi");
    const Vec x2 = x.cwiseProduct(x);
    return 0.5 * psi.psi.dot(x2) + psi.psi.dot(x2.cwiseProduct(x)) / 6.0;
}

ShapeInvariant cubic_from_weights(const WeightData& w) {
    const int m = static_cast<int>(w.metric.rows());
    const Mat beta = unimodular(0.5 * (w.metric + w.metric.transpose()));
    const WeightData wd{w.weights, beta};
    const double varpi = wd.varpi();
    double scale = 1.0;
    for (const Vec& xi : w.weights) scale = std::max(scale, xi.squaredNorm());
    std::vector<Vec> forms;
    std::vector<double> coeffs;
    for (const Vec& xi : w.weights) {
        if (xi.cwiseAbs().maxCoeff() <= 1e-12 * std::sqrt(scale)) continue;
        const double a = wd.pairing(xi, xi) + varpi;
        if (!(a > 1e-12 * scale)) throw ValidationError("cubic from weights: nonzero weight with vanishing norm");
        forms.push_back(xi);
        coeffs.push_back(1.0 / (3.0 * a));
    }
    const CubicPoly c = forms.empty() ? CubicPoly(m) : CubicPoly::sum_of_cubes(forms, coeffs);
    return ShapeInvariant::normalized(beta, c);
}

Vec radial_projection(const Mat& q, const CubicPoly& c) {
    const int m = static_cast<int>(q.rows());
    // Isometry x = A^{-1} y from the standard form to q.
    const Mat a = cholesky_upper(0.5 * (q + q.transpose()));
    const Mat ainv = a.inverse();
    const CubicPoly p = c.compose(ainv);
    // (2m+4)^{-1} grad(Laplacian p) = 6/(2m+4) sum_a t(a,a,.).
    Vec u = Vec::Zero(m);
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i) u(k) += p.t(i, i, k);
    u *= 6.0 / (2.0 * m + 4.0);
    return ainv * u;
}

bool has_equal_lambdas(const BlownUpWeylPoint& p, double tol) {
    const double scale = std::max(1.0, p.lambda.cwiseAbs().maxCoeff());
    return (p.lambda.maxCoeff() - p.lambda.minCoeff()) <= tol * scale;
}

bool is_affine_sphere(const MarkedCusp& c, double tol) {
    const ShapeInvariant j = shape_invariant(c, ShapeRoute::Algebraic);
    return radial_projection(j.q, j.c).norm() <= tol;
}

Vec affine_normal_at_base(const Mat& q, const CubicPoly& c) {
    const Vec pi = radial_projection(q, c);
    Vec out(pi.size() + 1);
    out(0) = 1.0;
    out.tail(pi.size()) = -0.5 * pi;
    return out;
}

SphereMaxima sphere_local_maxima(const Mat& q, const CubicPoly& c, const MaximaOptions& options) {
    const int m = static_cast<int>(q.rows());
    if (c.dim() != m) throw ValidationError("maxima: dimension mismatch between q and c");
    const Mat a = cholesky_upper(0.5 * (q + q.transpose()));
    const Mat ainv = a.inverse();
    const CubicPoly p = c.compose(ainv);

    SphereMaxima out;
    if (p.max_abs_coeff() <= 1e-14) {
        out.degenerate = true;
        return out;
    }
    const int restarts = options.restarts > 0 ? options.restarts : 100 + 20 * m;
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> g(0.0, 1.0);

    std::vector<Candidate> found;
    int converged = 0;
    for (int r = 0; r < restarts; ++r) {
        Vec y(m);
        for (int i = 0; i < m; ++i) y(i) = g(rng);
        if (y.norm() == 0.0) continue;
        y.normalize();
        if (!polish(p, y)) continue;
        ++converged;
        if (!is_local_max(p, y, p.max_abs_coeff())) continue;
        bool dup = false;
        for (const Candidate& f : found) dup = dup || (f.y - y).norm() <= options.dedup_tol;
        if (!dup) found.push_back({y, p(y)});
    }
    if (converged == 0) throw NumericalError("maxima: optimizer did not converge from any restart");

    std::sort(found.begin(), found.end(), [](const Candidate& x, const Candidate& y) {
        if (std::abs(x.value - y.value) > 1e-12) return x.value < y.value;
        for (Eigen::Index i = 0; i < x.y.size(); ++i)
            if (x.y(i) != y.y(i)) return x.y(i) < y.y(i);
        return false;
    });
    for (const Candidate& f : found) {
        out.points.push_back(ainv * f.y);
        out.values.push_back(f.value);
    }
    return out;
}

SphereMaxima positive_maxima(const SphereMaxima& all, const CubicPoly& c, double tol) {
    SphereMaxima out;
    out.degenerate = all.degenerate;
    for (std::size_t i = 0; i < all.points.size(); ++i)
        if (all.values[i] > tol * c.max_abs_coeff()) {
            out.points.push_back(all.points[i]);
            out.values.push_back(all.values[i]);
        }
    return out;
}

MarkedCusp recover_cusp_from_shape(const ShapeInvariant& j_in) {
    const int m = static_cast<int>(j_in.q.rows());
    const int n = m + 1;
    if (n < 3) throw ValidationError("recover from shape: n = 2 is not supported");
    if (j_in.c.dim() != m) throw ValidationError("recover from shape: dimension mismatch");
    const ShapeInvariant j = ShapeInvariant::normalized(j_in.q, j_in.c);
    const Mat& q = j.q;

    WeightData w;
    w.metric = q;
    if (j.c.max_abs_coeff() <= 1e-12) {
        w.weights.assign(static_cast<std::size_t>(n), Vec::Zero(m));
        return realize_weight_data(w);
    }

    const SphereMaxima mx = sphere_local_maxima(q, j.c);
    const int k = static_cast<int>(mx.points.size());
    bool all_negative = true;
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
            all_negative = all_negative &&
                           mx.points[static_cast<std::size_t>(a)].dot(q * mx.points[static_cast<std::size_t>(b)]) < -kOrthogonalTol;
    // Non-diagonalizable shapes can also carry negative maxima; only the
    // positive ones encode weights.
    std::vector<std::size_t> positive;
    for (int a = 0; a < k; ++a)
        if (mx.values[static_cast<std::size_t>(a)] > 1e-8 * j.c.max_abs_coeff()) positive.push_back(static_cast<std::size_t>(a));
    double max_abs_alpha = 0.0;
    for (std::size_t a = 0; a < positive.size(); ++a)
        for (std::size_t b = a + 1; b < positive.size(); ++b)
            max_abs_alpha = std::max(max_abs_alpha, std::abs(mx.points[positive[a]].dot(q * mx.points[positive[b]])));
    const int kp = static_cast<int>(positive.size());

    if (!(k == n && all_negative) && kp >= 1 && kp <= n - 1 && max_abs_alpha <= kOrthogonalTol) {
        // Non-diagonalizable: maxima v_i with c(v_i) = lambda_i / 3.
        // Symmetric orthonormalization removes the optimizer's residual overlap,
        // which would otherwise read as a tiny positive varpi.
        Mat vs(m, kp);
        for (int a = 0; a < kp; ++a) vs.col(a) = mx.points[positive[static_cast<std::size_t>(a)]];
        Eigen::SelfAdjointEigenSolver<Mat> es(vs.transpose() * q * vs);
        vs = vs * es.operatorInverseSqrt();
        for (int a = 0; a < kp; ++a)
            w.weights.push_back(3.0 * mx.values[positive[static_cast<std::size_t>(a)]] * (q * vs.col(a)));
        while (static_cast<int>(w.weights.size()) < n) w.weights.push_back(Vec::Zero(m));
    } else if (k == n && all_negative) {
        // Diagonalizable: rho_i = psi_i / s from the pairwise products.
        Mat alpha(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                alpha(a, b) = mx.points[static_cast<std::size_t>(a)].dot(q * mx.points[static_cast<std::size_t>(b)]);
        Vec rho(n);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            int cnt = 0;
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b) {
                    if (a == i || b == i) continue;
                    const double r = -alpha(i, a) * alpha(i, b) / alpha(a, b);
                    acc += r / (1.0 + r);
                    ++cnt;
                }
            rho(i) = acc / cnt;
        }
        if (std::abs(rho.sum() - 1.0) > 1e-6) throw ValidationError("recover from shape: maxima are not in the obtuse pattern");
        std::vector<Vec> unit;
        for (int i = 0; i < n; ++i)
            unit.push_back(std::sqrt((1.0 - rho(i)) / rho(i)) * (q * mx.points[static_cast<std::size_t>(i)]));
        // Weights gamma * unit with varpi = gamma^2; the cubic is linear in gamma.
        const WeightData probe{unit, q};
        const double vp = probe.varpi();
        std::vector<double> coeffs;
        for (const Vec& xi : unit) coeffs.push_back(1.0 / (3.0 * (probe.pairing(xi, xi) + vp)));
        const CubicPoly c1 = CubicPoly::sum_of_cubes(unit, coeffs);
        double num = 0.0;
        double den = 0.0;
        const auto target = j.c.monomials();
        for (const auto& [e, coeff] : c1.monomials()) {
            const auto it = target.find(e);
            num += coeff * (it == target.end() ? 0.0 : it->second);
            den += coeff * coeff;
        }
        const double gamma = num / den;
        if (!(gamma > 0.0)) throw ValidationError("recover from shape: inconsistent cubic scale");
        for (const Vec& xi : unit) w.weights.push_back(gamma * xi);
    } else {
        throw ValidationError("recover from shape: " + std::to_string(k) +
                              " maxima match neither the orthogonal nor the obtuse pattern");
    }

    const MarkedCusp out = realize_weight_data(w);
    const double err = shape_distance(theta_shape(out), j);
    if (err > 1e-5 * std::max(1.0, j.c.max_abs_coeff()))
        throw ValidationError("recover from shape: reconstruction misses J by " + std::to_string(err));
    return out;
}

}  // namespace gcusp
