#include "gcusp/height.hpp"

#include "gcusp/errors.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <random>

namespace gcusp {

namespace {

std::vector<Vec> tangents(const MarkedCusp& c) {
    std::vector<Vec> u;
    for (const Mat& g : c.generators()) u.push_back((g * c.basepoint()).head(c.n()));
    return u;
}

Vec raw_conormal(const MarkedCusp& c) {
    const int n = c.n();
    const std::vector<Vec> u = tangents(c);
    Mat frame(n, n);
    for (int i = 0; i < n - 1; ++i) frame.col(i) = u[static_cast<std::size_t>(i)];
    Vec w(n);
    for (int k = 0; k < n; ++k) {
        frame.col(n - 1) = Vec::Unit(n, k);
        w(k) = frame.determinant();
    }
    double scale = 1.0;
    for (const Vec& ui : u) scale *= std::max(ui.norm(), 1e-300);
    if (w.norm() <= 1e-12 * scale) throw NumericalError("height: orbit tangents at the basepoint are degenerate");
    return w;
}

Mat raw_hessian(const MarkedCusp& c, const Vec& w) {
    const int m = c.dim();
    const auto& g = c.generators();
    const Vec& b = c.basepoint();
    Mat h(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            h(i, j) = w.dot((g[static_cast<std::size_t>(i)] * (g[static_cast<std::size_t>(j)] * b)).head(c.n()));
    return 0.5 * (h + h.transpose());
}

std::vector<std::vector<int>> exponents_up_to(int dim, int degree) {
    std::vector<std::vector<int>> out;
    std::vector<int> e(static_cast<std::size_t>(dim), 0);
    // Enumerate all exponent vectors with total degree in [1, degree].
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == dim) {
            int total = 0;
            for (int x : e) total += x;
            if (total >= 1) out.push_back(e);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            e[static_cast<std::size_t>(pos)] = k;
            rec(pos + 1, left - k);
        }
        e[static_cast<std::size_t>(pos)] = 0;
    };
    rec(0, degree);
    return out;
}

}  // namespace

Vec height_conormal(const MarkedCusp& c) {
    Vec w = raw_conormal(c);
    if (raw_hessian(c, w).trace() < 0.0) w = -w;
    return w;
}

double height_at(const MarkedCusp& c, const Vec& v) {
    const Vec w = height_conormal(c);
    const Vec moved = (c.holonomy(v) * c.basepoint() - c.basepoint()).head(c.n());
    return w.dot(moved);
}

HeightJet algebraic_jet(const MarkedCusp& c) {
    const int m = c.dim();
    const Vec w = height_conormal(c);
    const auto& g = c.generators();
    const Vec& b = c.basepoint();
    std::vector<double> t(static_cast<std::size_t>(m) * m * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const Vec gjb = g[static_cast<std::size_t>(j)] * b;
            const Vec gijb = g[static_cast<std::size_t>(i)] * gjb;
            for (int k = 0; k < m; ++k) {
                const Vec gkijb = g[static_cast<std::size_t>(k)] * gijb;
                t[(static_cast<std::size_t>(i) * m + j) * m + k] = w.dot(gkijb.head(c.n())) / 6.0;
            }
        }
    return HeightJet{raw_hessian(c, w), CubicPoly::from_tensor(m, t)};
}

HeightJet fit_jet(const MarkedCusp& c, const JetFitOptions& options) {
    const int m = c.dim();
    const int n = c.n();
    const Vec w = height_conormal(c);
    const auto exps = exponents_up_to(m, options.degree);
    const int unknowns = static_cast<int>(exps.size());
    const int pairs = (options.oversample * unknowns + 1) / 2;
    const double rho = options.radius;

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Mat design(2 * pairs, unknowns);
    Vec rhs(2 * pairs);
    for (int s = 0; s < pairs; ++s) {
        Vec dir(m);
        for (int i = 0; i < m; ++i) dir(i) = gauss(rng);
        dir.normalize();
        const Vec u = dir * std::pow(unit(rng), 1.0 / m);
        for (int sign = 0; sign < 2; ++sign) {
            const Vec us = sign == 0 ? u : Vec(-u);
            const int row = 2 * s + sign;
            for (int k = 0; k < unknowns; ++k) {
                double mono = 1.0;
                for (int i = 0; i < m; ++i) mono *= std::pow(us(i), exps[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]);
                design(row, k) = mono;
            }
            const Vec moved = (c.holonomy(rho * us) * c.basepoint() - c.basepoint()).head(n);
            rhs(row) = w.dot(moved);
        }
    }
    const Vec coef = design.colPivHouseholderQr().solve(rhs);
    const double resid = (design * coef - rhs).cwiseAbs().maxCoeff();
    const double size = rhs.cwiseAbs().maxCoeff();
    if (!(resid <= 1e-6 * size)) throw NumericalError("jet fit: residual above threshold");

    Mat h = Mat::Zero(m, m);
    std::map<CubicPoly::Exponent, double> cubic;
    for (int k = 0; k < unknowns; ++k) {
        const auto& e = exps[static_cast<std::size_t>(k)];
        int total = 0;
        for (int x : e) total += x;
        if (total == 2) {
            std::vector<int> idx;
            for (int i = 0; i < m; ++i)
                for (int r = 0; r < e[static_cast<std::size_t>(i)]; ++r) idx.push_back(i);
            const double value = coef(k) / (rho * rho);
            if (idx[0] == idx[1]) {
                h(idx[0], idx[0]) = 2.0 * value;
            } else {
                h(idx[0], idx[1]) = value;
                h(idx[1], idx[0]) = value;
            }
        } else if (total == 3) {
            cubic[e] = coef(k) / (rho * rho * rho);
        }
    }
    return HeightJet{h, CubicPoly::from_monomials(m, cubic)};
}

Mat finite_difference_hessian(const MarkedCusp& c, double step) {
    const int m = c.dim();
    auto h = [&](const Vec& v) { return height_at(c, v); };
    Mat out(m, m);
    for (int i = 0; i < m; ++i) {
        const Vec ei = Vec::Unit(m, i) * step;
        out(i, i) = (h(ei) - 2.0 * h(Vec::Zero(m)) + h(-ei)) / (step * step);
        for (int j = 0; j < i; ++j) {
            const Vec ej = Vec::Unit(m, j) * step;
            const double v = (h(ei + ej) - h(ei - ej) - h(ej - ei) + h(-ei - ej)) / (4.0 * step * step);
            out(i, j) = v;
            out(j, i) = v;
        }
    }
    return out;
}

}  // namespace gcusp
