#include "gcusp/cubic.hpp"

#include "gcusp/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace gcusp {

CubicPoly::CubicPoly(int dim) : dim_(dim), data_(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}

void CubicPoly::add_symmetrized(int a, int b, int k, double value) {
    std::array<int, 3> idx{a, b, k};
    std::sort(idx.begin(), idx.end());
    std::vector<std::array<int, 3>> perms;
    do {
        perms.push_back(idx);
    } while (std::next_permutation(idx.begin(), idx.end()));
    for (const auto& p : perms) data_[index(p[0], p[1], p[2])] += value / static_cast<double>(perms.size());
}

CubicPoly CubicPoly::from_monomials(int dim, const std::map<Exponent, double>& coeffs) {
    CubicPoly c(dim);
    for (const auto& [e, value] : coeffs) {
        if (static_cast<int>(e.size()) != dim) throw ValidationError("cubic: exponent has wrong length");
        std::vector<int> vars;
        for (int i = 0; i < dim; ++i) {
            if (e[static_cast<std::size_t>(i)] < 0) throw ValidationError("cubic: negative exponent");
            for (int r = 0; r < e[static_cast<std::size_t>(i)]; ++r) vars.push_back(i);
        }
        if (vars.size() != 3) throw ValidationError("cubic: monomial is not of degree 3");
        c.add_symmetrized(vars[0], vars[1], vars[2], value);
    }
    return c;
}

CubicPoly CubicPoly::from_tensor(int dim, const std::vector<double>& entries) {
    CubicPoly c(dim);
    if (entries.size() != c.data_.size()) throw ValidationError("cubic: tensor has wrong size");
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            for (int k = 0; k < dim; ++k) c.add_symmetrized(a, b, k, entries[c.index(a, b, k)]);
    return c;
}

CubicPoly CubicPoly::sum_of_cubes(const std::vector<Vec>& forms, const std::vector<double>& weights) {
    if (forms.empty()) throw ValidationError("cubic: need at least one linear form");
    const int dim = static_cast<int>(forms.front().size());
    CubicPoly c(dim);
    for (std::size_t f = 0; f < forms.size(); ++f) {
        const Vec& x = forms[f];
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b)
                for (int k = 0; k < dim; ++k) c.data_[c.index(a, b, k)] += weights[f] * x(a) * x(b) * x(k);
    }
    return c;
}

std::map<CubicPoly::Exponent, double> CubicPoly::monomials() const {
    std::map<Exponent, double> out;
    for (int a = 0; a < dim_; ++a)
        for (int b = a; b < dim_; ++b)
            for (int k = b; k < dim_; ++k) {
                Exponent e(static_cast<std::size_t>(dim_), 0);
                ++e[static_cast<std::size_t>(a)];
                ++e[static_cast<std::size_t>(b)];
                ++e[static_cast<std::size_t>(k)];
                const int mult = (a == b && b == k) ? 1 : (a == b || b == k) ? 3 : 6;
                out[e] = mult * t(a, b, k);
            }
    return out;
}

Mat CubicPoly::contract(const Vec& x) const {
    Mat m = Mat::Zero(dim_, dim_);
    for (int a = 0; a < dim_; ++a)
        for (int b = 0; b < dim_; ++b)
            for (int k = 0; k < dim_; ++k) m(b, k) += t(a, b, k) * x(a);
    return m;
}

double CubicPoly::operator()(const Vec& x) const { return x.dot(contract(x) * x); }

Vec CubicPoly::gradient(const Vec& x) const { return 3.0 * contract(x) * x; }

Mat CubicPoly::hessian(const Vec& x) const { return 6.0 * contract(x); }

CubicPoly CubicPoly::compose(const Mat& a) const {
    if (a.rows() != dim_) throw ValidationError("cubic: composition size mismatch");
    const int m = static_cast<int>(a.cols());
    // Contract one index at a time.
    std::vector<double> s1(static_cast<std::size_t>(m) * dim_ * dim_, 0.0);
    for (int p = 0; p < m; ++p)
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j)
                for (int k = 0; k < dim_; ++k)
                    s1[(static_cast<std::size_t>(p) * dim_ + j) * dim_ + k] += a(i, p) * t(i, j, k);
    std::vector<double> s2(static_cast<std::size_t>(m) * m * dim_, 0.0);
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q)
            for (int j = 0; j < dim_; ++j)
                for (int k = 0; k < dim_; ++k)
                    s2[(static_cast<std::size_t>(p) * m + q) * dim_ + k] +=
                        a(j, q) * s1[(static_cast<std::size_t>(p) * dim_ + j) * dim_ + k];
    CubicPoly out(m);
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q)
            for (int r = 0; r < m; ++r) {
                double acc = 0.0;
                for (int k = 0; k < dim_; ++k) acc += a(k, r) * s2[(static_cast<std::size_t>(p) * m + q) * dim_ + k];
                out.data_[out.index(p, q, r)] = acc;
            }
    return out;
}

CubicPoly CubicPoly::operator*(double s) const {
    CubicPoly out = *this;
    for (double& d : out.data_) d *= s;
    return out;
}

CubicPoly CubicPoly::operator+(const CubicPoly& o) const {
    if (o.dim_ != dim_) throw ValidationError("cubic: dimension mismatch");
    CubicPoly out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += o.data_[i];
    return out;
}

CubicPoly CubicPoly::operator-(const CubicPoly& o) const { return *this + o * -1.0; }

double CubicPoly::max_abs_coeff() const {
    double m = 0.0;
    for (double d : data_) m = std::max(m, std::abs(d));
    return m;
}

ShapeInvariant ShapeInvariant::normalized(const Mat& q, const CubicPoly& c) {
    if (!is_positive_definite(0.5 * (q + q.transpose())))
        throw NumericalError("shape: quadratic part is not positive definite");
    const double det = q.determinant();
    const double s = std::pow(det, -1.0 / static_cast<double>(q.rows()));
    return ShapeInvariant{0.5 * (q + q.transpose()) * s, c * s};
}

double shape_distance(const ShapeInvariant& a, const ShapeInvariant& b) {
    if (a.q.rows() != b.q.rows()) return std::numeric_limits<double>::infinity();
    const double dq = (a.q - b.q).cwiseAbs().maxCoeff();
    const double dc = (a.c - b.c).max_abs_coeff();
    return std::max(dq, dc);
}

}  // namespace gcusp
