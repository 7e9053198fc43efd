#include "gcusp/limit.hpp"

#include "gcusp/errors.hpp"
#include "gcusp/invariants.hpp"

#include <algorithm>

namespace gcusp {

namespace {

void check_kappa(const Vec& kappa) {
    if (kappa.size() < 1) throw ValidationError("kappa: need at least one entry");
    for (Eigen::Index i = 0; i < kappa.size(); ++i)
        if (!(kappa(i) > 0.0 && kappa(i) <= 1.0)) throw ValidationError("kappa: entries must lie in (0,1]");
}

}  // namespace

BlownUpWeylPoint limit_family_point(const Vec& kappa, double m) {
    check_kappa(kappa);
    if (!(m > 0.0)) throw ValidationError("m: must be positive");
    const int n = static_cast<int>(kappa.size()) + 1;
    BlownUpWeylPoint p;
    p.n = n;
    p.lambda = Vec(n);
    p.lambda(0) = 1.0 / m;
    for (int i = 1; i < n; ++i) p.lambda(i) = p.lambda(0) / kappa(i - 1);
    p.kappa = kappa;
    const bool ascending = std::is_sorted(p.lambda.data(), p.lambda.data() + n);
    p.flavor = ascending ? Flavor::BlownUpWeyl : Flavor::Diagonal;
    p.validate();
    return p;
}

BlownUpWeylPoint limit_point(const Vec& kappa) {
    check_kappa(kappa);
    BlownUpWeylPoint p;
    p.n = static_cast<int>(kappa.size()) + 1;
    p.lambda = Vec::Zero(p.n);
    p.kappa = kappa;
    p.validate();
    return p;
}

std::vector<LimitRow> limit_demo(const Vec& kappa, const std::vector<double>& ms) {
    const int m = static_cast<int>(kappa.size());
    const Mat id = Mat::Identity(m, m);
    const MarkedCusp limit = build_marked_cusp(limit_point(kappa), id);
    const CompleteInvariant eta_limit = complete_invariant(limit);
    std::vector<LimitRow> rows;
    for (double mm : ms) {
        const MarkedCusp c = build_marked_cusp(limit_family_point(kappa, mm), id);
        double gd = 0.0;
        for (int i = 0; i < m; ++i)
            gd = std::max(gd, (c.generators()[static_cast<std::size_t>(i)] - limit.generators()[static_cast<std::size_t>(i)])
                                  .cwiseAbs()
                                  .maxCoeff());
        rows.push_back({mm, gd, invariant_distance(complete_invariant(c), eta_limit)});
    }
    return rows;
}

}  // namespace gcusp
