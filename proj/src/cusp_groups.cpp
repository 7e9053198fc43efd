#include "gcusp/cusp_groups.hpp"

#include "gcusp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace gcusp {

namespace {

constexpr double kTypeThreshold = 1e-10;
constexpr double kChamberTol = 1e-12;
constexpr double kCommuteTol = 1e-9;

void require_finite(const Vec& v, const char* what) {
    if (!v.allFinite()) throw ValidationError(std::string(what) + ": non-finite entries");
}

bool is_affine_matrix(const Mat& g, bool lie_algebra) {
    const Eigen::Index last = g.rows() - 1;
    for (Eigen::Index j = 0; j < last; ++j)
        if (g(last, j) != 0.0) return false;
    return g(last, last) == (lie_algebra ? 0.0 : 1.0);
}

}  // namespace

bool is_nonzero_entry(double x, double largest) {
    return x > kTypeThreshold * std::max(1.0, largest);
}

int PsiParameter::type() const {
    const double largest = psi.size() ? psi.maxCoeff() : 0.0;
    int t = 0;
    for (Eigen::Index i = 0; i < psi.size(); ++i)
        if (is_nonzero_entry(psi(i), largest)) ++t;
    return t;
}

int PsiParameter::diagonal_rank() const { return std::min(type(), n - 1); }
int PsiParameter::unipotent_rank() const { return n - 1 - diagonal_rank(); }

void PsiParameter::validate() const {
    if (n < 2) throw ValidationError("psi: n must be at least 2");
    if (psi.size() != n) throw ValidationError("psi: expected " + std::to_string(n) + " entries");
    require_finite(psi, "psi");
    if (psi.minCoeff() < 0.0) throw ValidationError("psi: entries must be non-negative");
    const int t = type();
    const double largest = psi.maxCoeff();
    if (ordering == PsiOrdering::Ordered) {
        for (int i = 1; i < n; ++i)
            if (psi(i) > psi(i - 1)) throw ValidationError("psi: ordered flavor must be non-increasing");
    }
    for (int i = 0; i < n; ++i) {
        const bool positive = is_nonzero_entry(psi(i), largest);
        if (positive != (i < t)) throw ValidationError("psi: positive entries must precede zeros");
    }
}

BlownUpWeylPoint BlownUpWeylPoint::from_lambda(const Vec& lambda, Flavor flavor) {
    BlownUpWeylPoint p;
    p.n = static_cast<int>(lambda.size());
    p.lambda = lambda;
    p.flavor = flavor;
    p.kappa = Vec::Zero(std::max(0, p.n - 1));
    const double largest = lambda.size() ? lambda.maxCoeff() : 0.0;
    for (int i = 1; i < p.n; ++i)
        if (is_nonzero_entry(lambda(i), largest)) p.kappa(i - 1) = lambda(0) / lambda(i);
    return p;
}

int BlownUpWeylPoint::type() const {
    const double largest = lambda.maxCoeff();
    if (is_nonzero_entry(lambda(0), largest)) return n;
    int t = 0;
    for (int i = 1; i < n; ++i)
        if (is_nonzero_entry(lambda(i), largest)) ++t;
    return t;
}

void BlownUpWeylPoint::validate() const {
    if (n < 2) throw ValidationError("n: must be at least 2");
    if (lambda.size() != n) throw ValidationError("lambda: expected " + std::to_string(n) + " entries");
    if (kappa.size() != n - 1) throw ValidationError("kappa: expected " + std::to_string(n - 1) + " entries");
    require_finite(lambda, "lambda");
    require_finite(kappa, "kappa");
    if (flavor == Flavor::BlownUpWeyl) {
        if (lambda(0) < 0.0) throw ValidationError("lambda: lambda_0 must be non-negative");
        for (int i = 1; i < n; ++i)
            if (lambda(i) < lambda(i - 1)) throw ValidationError("lambda: entries must be non-decreasing");
        for (int i = 0; i < n - 1; ++i)
            if (kappa(i) < 0.0 || kappa(i) > 1.0) throw ValidationError("kappa: entries must lie in [0,1]");
    } else {
        for (int i = 0; i < n; ++i)
            if (!(lambda(i) > 0.0)) throw ValidationError("lambda: diagonal flavor needs all entries positive");
    }
    for (int i = 1; i < n; ++i) {
        const double resid = std::abs(lambda(0) - lambda(i) * kappa(i - 1));
        if (resid > kChamberTol * std::max(1.0, std::abs(lambda(0))))
            throw ValidationError("kappa: lambda_0 = lambda_i kappa_i violated at index " + std::to_string(i));
    }
}

Mat lie_algebra_zeta(const PsiParameter& psi, const Vec& v) {
    psi.validate();
    const int n = psi.n;
    if (v.size() != n - 1) throw ValidationError("v: expected " + std::to_string(n - 1) + " entries");
    const int t = psi.type();
    const int r = psi.diagonal_rank();
    const int u = psi.unipotent_rank();
    Mat f = Mat::Zero(n + 1, n + 1);
    const double psi_t = t > 0 ? psi.psi(t - 1) : 0.0;
    double psi_minus = 0.0;
    for (int i = 0; i < n - 1; ++i) psi_minus -= psi.psi(i) * v(i);
    for (int i = 0; i < r; ++i) f(i, i) = psi_t * v(i);
    if (t == n) {
        f(n - 1, n - 1) = psi_minus;
    } else {
        // Unipotent block on indices r..n.
        for (int j = 0; j < u; ++j) {
            f(r, r + 1 + j) = v(r + j);
            f(r + 1 + j, n) = v(r + j);
        }
        f(r, n) = psi_minus;
    }
    return f;
}

Mat lie_algebra_phi(const BlownUpWeylPoint& p, const Vec& v) {
    const int n = p.n;
    if (v.size() != n - 1) throw ValidationError("v: expected " + std::to_string(n - 1) + " entries");
    Mat m = Mat::Zero(n + 1, n + 1);
    const double k = v.dot(p.kappa);
    m(0, 0) = -p.lambda(0) * k;
    for (int j = 1; j < n; ++j) {
        m(0, j) = v(j - 1) + k * p.kappa(j - 1);
        m(j, j) = p.lambda(j) * v(j - 1);
        m(j, n) = v(j - 1);
    }
    return m;
}

Mat preferred_sqrt(const Vec& kappa) {
    const Eigen::Index m = kappa.size();
    const double alpha = kappa.squaredNorm();
    // (sqrt(1+a)-1)/a written without cancellation.
    const double coeff = 1.0 / (std::sqrt(1.0 + alpha) + 1.0);
    return Mat::Identity(m, m) + coeff * kappa * kappa.transpose();
}

Mat MarkedCusp::effective_marking() const {
    if (orthonormalized_ && params_) {
        return preferred_sqrt(params_->kappa).llt().solve(marking_);
    }
    return marking_;
}

Mat MarkedCusp::lie_algebra(const Vec& v) const {
    if (v.size() != dim()) throw ValidationError("v: expected " + std::to_string(dim()) + " entries");
    Mat g = Mat::Zero(n_ + 1, n_ + 1);
    for (int i = 0; i < dim(); ++i) g += v(i) * generators_[static_cast<std::size_t>(i)];
    return g;
}

Mat MarkedCusp::holonomy(const Vec& v) const { return expm(lie_algebra(v)); }

int MarkedCusp::type() const {
    if (params_) return params_->type();
    double largest = 0.0;
    for (const Mat& g : generators_) {
        if (!is_upper_triangular(g, 1e-12)) throw ValidationError("cusp type needs triangular generators");
        largest = std::max(largest, g.diagonal().cwiseAbs().maxCoeff());
    }
    int t = 0;
    for (int j = 0; j < n_; ++j) {
        double norm = 0.0;
        for (const Mat& g : generators_) norm = std::max(norm, std::abs(g(j, j)));
        if (is_nonzero_entry(norm, largest)) ++t;
    }
    return t;
}

MarkedCusp MarkedCusp::from_generators(std::vector<Mat> generators, Vec basepoint) {
    if (generators.empty()) throw ValidationError("generators: need at least one");
    const Eigen::Index size = generators.front().rows();
    const int n = static_cast<int>(size) - 1;
    if (static_cast<int>(generators.size()) != n - 1)
        throw ValidationError("generators: expected " + std::to_string(n - 1) + " matrices of size " +
                              std::to_string(size));
    for (const Mat& g : generators) {
        if (g.rows() != size || g.cols() != size) throw ValidationError("generators: size mismatch");
        if (!g.allFinite()) throw ValidationError("generators: non-finite entries");
        if (!is_affine_matrix(g, true)) throw ValidationError("generators: last row must vanish");
    }
    double scale = 1.0;
    for (const Mat& g : generators) scale = std::max(scale, g.norm());
    for (std::size_t i = 0; i < generators.size(); ++i)
        for (std::size_t j = i + 1; j < generators.size(); ++j) {
            const Mat c = generators[i] * generators[j] - generators[j] * generators[i];
            if (c.norm() > kCommuteTol * scale * scale)
                throw ValidationError("generators: matrices " + std::to_string(i) + " and " +
                                      std::to_string(j) + " do not commute");
        }
    if (basepoint.size() != size) throw ValidationError("basepoint: wrong length");
    if (basepoint(n) != 1.0) throw ValidationError("basepoint: last homogeneous coordinate must be 1");

    MarkedCusp c;
    c.n_ = n;
    c.generators_ = std::move(generators);
    c.basepoint_ = std::move(basepoint);
    c.marking_ = Mat::Identity(n - 1, n - 1);
    c.frame_ = Mat::Identity(n + 1, n + 1);
    return c;
}

MarkedCusp build_marked_cusp(const BlownUpWeylPoint& p_in, const Mat& b, bool orthonormalized) {
    p_in.validate();
    const int n = p_in.n;
    const int m = n - 1;
    if (b.rows() != m || b.cols() != m) throw ValidationError("B: expected a square matrix of size " + std::to_string(m));
    if (!b.allFinite()) throw ValidationError("B: non-finite entries");
    const double det = b.determinant();
    const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    if (std::abs(det) <= 1e-12 * std::pow(scale, m)) throw ValidationError("B: singular marking");

    MarkedCusp c;
    c.n_ = n;
    c.params_ = p_in;
    c.marking_ = b;
    c.orthonormalized_ = orthonormalized;
    const double ad = std::abs(det);
    if (std::abs(ad - 1.0) > 1e-12) {
        // phi_lambda(s w) is conjugate to phi_{s lambda}(w) by a diagonal matrix.
        const double s = std::pow(ad, 1.0 / m);
        c.marking_ = b / s;
        c.params_->lambda *= s;
        c.rescale_ = s;
    }
    c.frame_ = Mat::Identity(n + 1, n + 1);
    c.basepoint_ = Vec::Unit(n + 1, n);
    const Mat e = c.effective_marking();
    for (int i = 0; i < m; ++i) c.generators_.push_back(lie_algebra_phi(*c.params_, e.col(i)));
    return c;
}

MarkedCusp build_psi_cusp(const PsiParameter& psi, const Mat& b) {
    psi.validate();
    const int n = psi.n;
    const int m = n - 1;
    if (b.rows() != m || b.cols() != m) throw ValidationError("B: expected a square matrix of size " + std::to_string(m));
    std::vector<Mat> gens;
    for (int i = 0; i < m; ++i) gens.push_back(lie_algebra_zeta(psi, b.col(i)));
    Vec base = Vec::Zero(n + 1);
    const int t = psi.type();
    for (int i = 0; i < t; ++i) base(i) = 1.0;
    base(n) = 1.0;
    return MarkedCusp::from_generators(std::move(gens), std::move(base));
}

MarkedCusp conjugated(const MarkedCusp& c, const Mat& p) {
    const int n = c.n();
    if (p.rows() != n + 1 || p.cols() != n + 1) throw ValidationError("conjugator: wrong size");
    if (!is_affine_matrix(p, false)) throw ValidationError("conjugator: must be affine (last row e_n)");
    Eigen::PartialPivLU<Mat> lu(p);
    if (std::abs(lu.determinant()) < 1e-12) throw ValidationError("conjugator: singular");
    const Mat pinv = lu.inverse();
    MarkedCusp out = c;
    for (Mat& g : out.generators_) g = p * g * pinv;
    out.basepoint_ = p * c.basepoint_;
    out.basepoint_(n) = 1.0;
    out.frame_ = p * c.frame_;
    return out;
}

PsiParameter lambda_to_psi(const BlownUpWeylPoint& p) {
    p.validate();
    PsiParameter out;
    out.n = p.n;
    out.psi = Vec::Zero(p.n);
    if (p.type() == p.n) {
        // Diagonal chart: psi_i = lambda_i^{-2}, last slot lambda_0^{-2}.
        for (int i = 1; i < p.n; ++i) out.psi(i - 1) = 1.0 / (p.lambda(i) * p.lambda(i));
        out.psi(p.n - 1) = 1.0 / (p.lambda(0) * p.lambda(0));
        out.ordering = PsiOrdering::Unordered;
        return out;
    }
    std::vector<double> pos;
    const double largest = p.lambda.maxCoeff();
    for (int i = 1; i < p.n; ++i)
        if (is_nonzero_entry(p.lambda(i), largest)) pos.push_back(p.lambda(i));
    std::sort(pos.begin(), pos.end());
    for (std::size_t i = 0; i < pos.size(); ++i) out.psi(static_cast<Eigen::Index>(i)) = 1.0 / (pos[i] * pos[i]);
    out.ordering = PsiOrdering::Ordered;
    return out;
}

BlownUpWeylPoint psi_to_lambda(const PsiParameter& psi) {
    psi.validate();
    const int n = psi.n;
    const int t = psi.type();
    std::vector<double> lam;
    for (int i = 0; i < t; ++i) lam.push_back(1.0 / std::sqrt(psi.psi(i)));
    std::sort(lam.begin(), lam.end());
    Vec lambda = Vec::Zero(n);
    if (t == n) {
        for (int i = 0; i < n; ++i) lambda(i) = lam[static_cast<std::size_t>(i)];
    } else {
        for (int i = 0; i < t; ++i) lambda(n - t + i) = lam[static_cast<std::size_t>(i)];
    }
    BlownUpWeylPoint p = BlownUpWeylPoint::from_lambda(lambda, Flavor::BlownUpWeyl);
    p.validate();
    return p;
}

DiagConjugator diag_conjugator(const BlownUpWeylPoint& p) {
    p.validate();
    const int n = p.n;
    for (int i = 0; i < n; ++i)
        if (!(p.lambda(i) > 0.0)) throw ValidationError("diag_conjugator: all lambda must be positive");
    Mat pm = Mat::Zero(n + 1, n + 1);
    pm(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        pm(0, i) = -1.0 / p.lambda(i);
        pm(i, i) = 1.0;
        pm(i, n) = 1.0 / p.lambda(i);
    }
    pm(0, n) = 1.0 / (p.lambda(0) * p.lambda(0));
    pm(n, n) = 1.0;
    // Coordinate cycle moving the lambda_0 eigenline to the last linear slot.
    Mat cycle = Mat::Zero(n + 1, n + 1);
    for (int i = 1; i < n; ++i) cycle(i - 1, i) = 1.0;
    cycle(n - 1, 0) = 1.0;
    cycle(n, n) = 1.0;

    DiagConjugator out;
    out.q = cycle * pm;
    out.frak_f = Mat::Zero(n - 1, n - 1);
    const double l02 = p.lambda(0) * p.lambda(0);
    for (int i = 1; i < n; ++i) out.frak_f(i - 1, i - 1) = l02 * p.lambda(i);
    out.psi = lambda_to_psi(p);
    return out;
}

Vec orbit_point(const MarkedCusp& c, const Vec& v) {
    const Vec x = c.holonomy(v) * c.basepoint();
    return x.head(c.n()) / x(c.n());
}

double hypersurface_F(const BlownUpWeylPoint& p, const Vec& x) {
    if (x.size() != p.n - 1) throw ValidationError("x: expected " + std::to_string(p.n - 1) + " entries");
    double u = 0.0;
    double g = 0.0;
    for (int i = 1; i < p.n; ++i) {
        const double l = p.lambda(i);
        const double xi = x(i - 1);
        if (!(1.0 + l * xi > 0.0))
            throw ValidationError("x: 1 + lambda_i x_i must be positive at index " + std::to_string(i));
        u -= p.kappa(i - 1) * h_fn(l, xi);
        g += g_fn(l, xi);
    }
    return f_k(2, p.lambda(0), u) + g;
}

Vec radial_center(const MarkedCusp& c) {
    const int n = c.n();
    const int m = c.dim();
    Mat a = Mat::Zero(n * m, n);
    Vec rhs = Vec::Zero(n * m);
    for (int i = 0; i < m; ++i) {
        const Mat g = c.holonomy(Vec::Unit(m, i));
        a.block(i * n, 0, n, n) = g.topLeftCorner(n, n) - Mat::Identity(n, n);
        rhs.segment(i * n, n) = -g.topRightCorner(n, 1);
    }
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec sv = svd.singularValues();
    if (sv(0) == 0.0 || sv(sv.size() - 1) < 1e-10 * sv(0))
        throw NumericalError("radial center: ill-conditioned fixed-point system (lambda_0 near 0?)");
    const Vec x = svd.solve(rhs);
    const double resid = (a * x - rhs).norm();
    if (resid > 1e-8 * std::max(1.0, rhs.norm()))
        throw NumericalError("radial center: no common fixed point (residual " + std::to_string(resid) + ")");
    return x;
}

Vec radial_flow(const MarkedCusp& c, double t, const Vec& x) {
    const int n = c.n();
    if (x.size() != n) throw ValidationError("x: expected " + std::to_string(n) + " entries");
    if (t == 0.0) return x;
    if (c.type() < n) {
        if (!c.params()) throw ValidationError("radial flow of a non-diagonalizable cusp needs the canonical frame");
        const Vec dir = c.frame().topLeftCorner(n, n).col(0);
        return x - t * dir;
    }
    const Vec center = radial_center(c);
    return std::exp(-t) * (x - center) + center;
}

}  // namespace gcusp
