#include "gcusp/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace gcusp {

double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vec random_vector(Rng& rng, int dim, double scale) {
    std::normal_distribution<double> d(0.0, scale);
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = d(rng);
    return v;
}

BlownUpWeylPoint random_params(Rng& rng, int n, int type) {
    if (type < 0) type = static_cast<int>(rng() % static_cast<unsigned>(n + 1));
    Vec lambda = Vec::Zero(n);
    Vec kappa = Vec::Zero(n - 1);
    if (type == n) {
        lambda(0) = uniform(rng, 0.3, 2.0);
        std::vector<double> rest;
        for (int i = 1; i < n; ++i) rest.push_back(lambda(0) * uniform(rng, 1.0, 3.0));
        std::sort(rest.begin(), rest.end());
        for (int i = 1; i < n; ++i) {
            lambda(i) = rest[static_cast<std::size_t>(i - 1)];
            kappa(i - 1) = lambda(0) / lambda(i);
        }
    } else {
        std::vector<double> pos;
        for (int i = 0; i < type; ++i) pos.push_back(uniform(rng, 0.3, 3.0));
        std::sort(pos.begin(), pos.end());
        const int zeros = n - 1 - type;
        for (int i = 0; i < type; ++i) lambda(1 + zeros + i) = pos[static_cast<std::size_t>(i)];
        for (int i = 0; i < zeros; ++i) kappa(i) = uniform(rng, 0.0, 1.0);
    }
    BlownUpWeylPoint p;
    p.n = n;
    p.lambda = lambda;
    p.kappa = kappa;
    p.flavor = Flavor::BlownUpWeyl;
    return p;
}

Mat random_orthogonal(Rng& rng, int dim) {
    Mat g(dim, dim);
    for (int j = 0; j < dim; ++j) g.col(j) = random_vector(rng, dim);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(dim, dim);
    const Mat r = qr.matrixQR();
    for (int j = 0; j < dim; ++j)
        if (r(j, j) < 0.0) q.col(j) *= -1.0;
    return q;
}

Mat random_marking(Rng& rng, int dim) {
    const Mat u = random_orthogonal(rng, dim);
    const Mat v = random_orthogonal(rng, dim);
    Vec s(dim);
    for (int i = 0; i < dim; ++i) s(i) = std::exp(uniform(rng, -1.1, 1.1));
    Mat b = u * s.asDiagonal() * v.transpose();
    b /= std::pow(std::abs(b.determinant()), 1.0 / dim);
    return b;
}

MarkedCusp random_cusp(Rng& rng, int n, int type) {
    const BlownUpWeylPoint p = random_params(rng, n, type);
    const Mat b = random_marking(rng, n - 1);
    const bool orth = (rng() % 2) == 0;
    return build_marked_cusp(p, b, orth);
}

Mat random_affine(Rng& rng, int n) {
    Mat p = Mat::Identity(n + 1, n + 1);
    const Mat u = random_orthogonal(rng, n);
    const Mat v = random_orthogonal(rng, n);
    Vec s(n);
    for (int i = 0; i < n; ++i) s(i) = std::exp(uniform(rng, -1.0, 1.0));
    p.topLeftCorner(n, n) = u * s.asDiagonal() * v.transpose();
    p.topRightCorner(n, 1) = random_vector(rng, n);
    return p;
}

Mat random_borel(Rng& rng, int n) {
    Mat p = Mat::Identity(n + 1, n + 1);
    for (int i = 0; i < n; ++i) {
        p(i, i) = std::exp(uniform(rng, -0.7, 0.7)) * ((rng() % 2) ? 1.0 : -1.0);
        for (int j = i + 1; j <= n; ++j) p(i, j) = uniform(rng, -1.0, 1.0);
    }
    return p;
}

}  // namespace gcusp
