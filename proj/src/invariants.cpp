#include "gcusp/invariants.hpp"

#include "gcusp/errors.hpp"
#include "gcusp/height.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace gcusp {

namespace {

constexpr double kNewtonTol = 1e-7;

double entry_scale(const std::vector<Vec>& ws) {
    double s = 1.0;
    for (const Vec& w : ws) s = std::max(s, w.cwiseAbs().maxCoeff());
    return s;
}

// Probe directions for the Newton cross-check: fixed, spread out, scaled so
// every weight stays of order one.
std::vector<Vec> newton_probes(int m, double weight_scale) {
    std::mt19937_64 rng(0xC0FFEEULL);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Vec> out;
    for (int k = 0; k < 3; ++k) {
        Vec v(m);
        for (int i = 0; i < m; ++i) v(i) = g(rng);
        out.push_back(v / (v.norm() * weight_scale * std::sqrt(static_cast<double>(m))));
    }
    return out;
}

void newton_cross_check(const MarkedCusp& c, const std::vector<Vec>& weights) {
    const int n = c.n();
    for (const Vec& v : newton_probes(c.dim(), entry_scale(weights))) {
        std::vector<double> p(static_cast<std::size_t>(n + 1));
        for (int k = 1; k <= n + 1; ++k) p[static_cast<std::size_t>(k - 1)] = c.holonomy(k * v).trace();
        const std::vector<double> from_traces = newton_to_elementary(p);
        // Elementary symmetric values of exp(xi_j(v)) by direct expansion.
        std::vector<double> e(static_cast<std::size_t>(n + 2), 0.0);
        e[0] = 1.0;
        for (const Vec& w : weights) {
            const double mu = std::exp(w.dot(v));
            for (int k = n + 1; k >= 1; --k) e[static_cast<std::size_t>(k)] += mu * e[static_cast<std::size_t>(k - 1)];
        }
        for (int k = 0; k <= n; ++k) {
            const double a = from_traces[static_cast<std::size_t>(k)];
            const double b = e[static_cast<std::size_t>(k + 1)];
            if (std::abs(a - b) > kNewtonTol * std::max(1.0, std::abs(b)))
                throw NumericalError("weights: characteristic polynomial cross-check failed at e_" + std::to_string(k + 1));
        }
    }
}

std::vector<Vec> linear_weights(const CharacterData& ch) {
    // Drop one zero weight (the translation line).
    std::vector<Vec> ws = ch.weights;
    auto it = std::min_element(ws.begin(), ws.end(), [](const Vec& a, const Vec& b) { return a.norm() < b.norm(); });
    ws.erase(it);
    return ws;
}

double bottleneck_bruteforce(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    std::vector<int> perm(a.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double worst = 0.0;
        for (std::size_t i = 0; i < a.size() && worst < best; ++i)
            worst = std::max(worst, (a[i] - b[static_cast<std::size_t>(perm[i])]).cwiseAbs().maxCoeff());
        best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

double bottleneck_greedy(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    std::vector<bool> used(b.size(), false);
    double worst = 0.0;
    for (const Vec& x : a) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double d = (x - b[j]).cwiseAbs().maxCoeff();
            if (d < best) {
                best = d;
                arg = j;
            }
        }
        used[arg] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

double CharacterData::evaluate(const Vec& v) const {
    double s = 0.0;
    for (const Vec& w : weights) s += std::exp(w.dot(v));
    return s;
}

double WeightData::pairing(const Vec& a, const Vec& b) const { return a.dot(metric.ldlt().solve(b)); }

double WeightData::varpi() const {
    const std::size_t k = weights.size();
    if (k < 2) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (i != j) sum += pairing(weights[i], weights[j]);
    return -sum / static_cast<double>(k * (k - 1));
}

double WeightData::residual() const {
    const double vp = varpi();
    double worst = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
        for (std::size_t j = 0; j < weights.size(); ++j)
            if (i != j) worst = std::max(worst, std::abs(pairing(weights[i], weights[j]) + vp));
    return worst;
}

CharacterData weights_of(const MarkedCusp& c) {
    const int n = c.n();
    for (const Mat& g : c.generators())
        if (!is_upper_triangular(g, 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff())))
            throw ValidationError("weights: generators must be upper triangular");
    CharacterData ch;
    for (int j = 0; j <= n; ++j) {
        Vec w(c.dim());
        for (int i = 0; i < c.dim(); ++i) w(i) = c.generators()[static_cast<std::size_t>(i)](j, j);
        ch.weights.push_back(w);
    }
    newton_cross_check(c, ch.weights);
    return ch;
}

Mat horosphere_metric(const MarkedCusp& c, MetricRoute route) {
    Mat h;
    switch (route) {
        case MetricRoute::Jet: h = algebraic_jet(c).hessian; break;
        case MetricRoute::FiniteDifference: h = finite_difference_hessian(c); break;
        case MetricRoute::Fit: h = fit_jet(c).hessian; break;
    }
    h = 0.5 * (h + h.transpose());
    if (!is_positive_definite(h)) throw ValidationError("metric: height Hessian is not positive definite");
    return unimodular(h);
}

Mat canonical_metric(const MarkedCusp& c) {
    if (!c.params()) throw ValidationError("metric: closed form needs a canonical cusp");
    const Vec& k = c.params()->kappa;
    const Mat e = c.effective_marking();
    const Mat base = Mat::Identity(k.size(), k.size()) + k * k.transpose();
    return unimodular(e.transpose() * base * e);
}

CompleteInvariant complete_invariant(const MarkedCusp& c) {
    CompleteInvariant eta;
    eta.character = weights_of(c);
    eta.character.weights = canonical_order(eta.character.weights);
    eta.metric = horosphere_metric(c, MetricRoute::Jet);
    return eta;
}

std::vector<Vec> canonical_order(std::vector<Vec> weights) {
    auto key = [](const Vec& v) {
        std::vector<double> k(static_cast<std::size_t>(v.size()));
        for (Eigen::Index i = 0; i < v.size(); ++i) k[static_cast<std::size_t>(i)] = std::round(v(i) * 1e12) / 1e12;
        return k;
    };
    std::stable_sort(weights.begin(), weights.end(), [&](const Vec& a, const Vec& b) { return key(a) < key(b); });
    return weights;
}

double multiset_distance(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    if (a.empty()) return 0.0;
    if (a.front().size() != b.front().size()) return std::numeric_limits<double>::infinity();
    const double greedy = bottleneck_greedy(a, b);
    if (a.size() > 8) return greedy;
    // Greedy can be fooled by near-ties; the exact matching settles them.
    return std::min(greedy, bottleneck_bruteforce(a, b));
}

double invariant_distance(const CompleteInvariant& a, const CompleteInvariant& b) {
    if (a.metric.rows() != b.metric.rows()) return std::numeric_limits<double>::infinity();
    const double scale = std::max(entry_scale(a.character.weights), entry_scale(b.character.weights));
    const double dw = multiset_distance(a.character.weights, b.character.weights) / scale;
    return std::max(dw, max_scaled_diff(a.metric, b.metric));
}

bool are_equivalent(const CompleteInvariant& a, const CompleteInvariant& b, double tol) {
    return invariant_distance(a, b) <= tol;
}

bool are_conjugate(const MarkedCusp& a, const MarkedCusp& b, double tol) {
    if (a.n() != b.n()) return false;
    return are_equivalent(complete_invariant(a), complete_invariant(b), tol);
}

PsiParameter recover_psi_from_invariant(const CompleteInvariant& eta) {
    const int n = static_cast<int>(eta.metric.rows()) + 1;
    if (n < 3) throw ValidationError("recover psi: needs n >= 3");
    if (static_cast<int>(eta.character.weights.size()) != n + 1)
        throw ValidationError("recover psi: expected n+1 weights");
    const std::vector<Vec> lin = linear_weights(eta.character);
    const double scale = entry_scale(lin);
    std::vector<Vec> nonzero;
    for (const Vec& w : lin)
        if (w.cwiseAbs().maxCoeff() > 1e-10 * scale) nonzero.push_back(w);
    const int t = static_cast<int>(nonzero.size());

    PsiParameter out;
    out.n = n;
    out.ordering = PsiOrdering::Ordered;
    out.psi = Vec::Zero(n);
    if (t == 0) return out;

    if (t == n) {
        // The weights satisfy sum psi_i xi_i = 0; maximal minors give psi.
        Mat w(n - 1, n);
        for (int j = 0; j < n; ++j) w.col(j) = nonzero[static_cast<std::size_t>(j)];
        Vec minors(n);
        for (int j = 0; j < n; ++j) {
            Mat sub(n - 1, n - 1);
            int col = 0;
            for (int k = 0; k < n; ++k)
                if (k != j) sub.col(col++) = w.col(k);
            minors(j) = std::abs(sub.determinant());
        }
        const double smallest = minors.minCoeff();
        if (!(smallest > 0.0)) throw NumericalError("recover psi: degenerate weight configuration");
        Vec psi = minors / std::pow(smallest, static_cast<double>(n - 2) / static_cast<double>(n - 1));
        std::sort(psi.data(), psi.data() + n, std::greater<double>());
        out.psi = psi;
        return out;
    }

    // With x_i = log psi_i and y_i = log beta*(xi_i):
    //   y = -x + e v(x),  v(x) = (x_1 + ... + x_{t-1} + (t + n) x_t) / (n - 1).
    // The matrix -I + e v^T is singular only for t = 0.
    // Sorting y ascending pairs it with psi non-increasing.
    const Mat binv = eta.metric.inverse();
    std::vector<double> y;
    for (const Vec& w : nonzero) y.push_back(std::log(w.dot(binv * w)));
    std::sort(y.begin(), y.end());
    const Vec yv = Eigen::Map<Vec>(y.data(), t);
    Vec v = Vec::Constant(t, 1.0 / (n - 1));
    v(t - 1) = static_cast<double>(t + n) / (n - 1);
    const Mat a = -Mat::Identity(t, t) + Vec::Ones(t) * v.transpose();
    Eigen::FullPivLU<Mat> lu(a);
    if (!lu.isInvertible()) throw NumericalError("recover psi: singular log system");
    const Vec x = lu.solve(yv);
    for (int i = 0; i < t; ++i) out.psi(i) = std::exp(x(i));
    return out;
}

WeightData weight_data(const MarkedCusp& c) {
    const CharacterData ch = weights_of(c);
    WeightData w;
    w.weights.assign(ch.weights.begin(), ch.weights.begin() + c.n());
    w.metric = horosphere_metric(c, MetricRoute::Jet);
    return w;
}

WeightData canonical_weight_data(const MarkedCusp& c) {
    WeightData w = weight_data(c);
    w.metric = canonical_metric(c);
    return w;
}

double varpi_closed_form(const BlownUpWeylPoint& p) {
    const double varkappa = std::pow(1.0 + p.kappa.squaredNorm(), 1.0 / (p.n - 1));
    return p.lambda(0) * p.lambda(0) * std::pow(varkappa, 2.0 - p.n);
}

double varpi_closed_form(const MarkedCusp& c) {
    if (!c.params()) throw ValidationError("varpi: needs a canonical cusp");
    const double det = std::abs(c.effective_marking().determinant());
    return varpi_closed_form(*c.params()) * std::pow(det, 2.0 / c.dim());
}

MarkedCusp realize_weight_data(const WeightData& w) {
    const int n = static_cast<int>(w.weights.size());
    const int m = n - 1;
    if (n < 2 || w.metric.rows() != m || w.metric.cols() != m) throw ValidationError("weight data: size mismatch");
    if (!is_positive_definite(0.5 * (w.metric + w.metric.transpose())))
        throw ValidationError("weight data: metric is not positive definite");
    const Mat beta = unimodular(0.5 * (w.metric + w.metric.transpose()));
    const WeightData wd{w.weights, beta};
    const double scale = std::max(1.0, entry_scale(w.weights) * entry_scale(w.weights));
    const double resid = wd.residual();
    if (resid > 1e-8 * scale)
        throw ValidationError("weight data: weights equation residual " + std::to_string(resid) + " too large");
    const double varpi = wd.varpi();
    const Mat binv = beta.inverse();

    if (varpi > 1e-9 * scale) {
        std::vector<std::pair<double, Vec>> items;
        double s = 0.0;
        for (const Vec& xi : w.weights) {
            const double a = xi.dot(binv * xi) + varpi;
            if (!(a > 0.0)) throw ValidationError("weight data: non-positive norm in the diagonal case");
            items.emplace_back(a, xi);
            s += 1.0 / a;
        }
        std::sort(items.begin(), items.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        if (std::abs(varpi * s - 1.0) > 1e-6) throw ValidationError("weight data: varpi inconsistent with the weights");
        const double varkappa = std::pow(items.front().first * s, 1.0 / m);
        Vec lambda(n);
        for (int i = 0; i < n; ++i) lambda(i) = std::sqrt(items[static_cast<std::size_t>(i)].first / varkappa);
        BlownUpWeylPoint p = BlownUpWeylPoint::from_lambda(lambda, Flavor::BlownUpWeyl);
        Mat b(m, m);
        for (int i = 1; i < n; ++i) b.row(i - 1) = items[static_cast<std::size_t>(i)].second.transpose() / lambda(i);
        return build_marked_cusp(p, b, false);
    }

    // Non-diagonalizable: nonzero weights are pairwise beta*-orthogonal.
    std::vector<std::pair<double, Vec>> pos;
    for (const Vec& xi : w.weights) {
        const double a = xi.dot(binv * xi);
        if (a > 1e-18 * scale) pos.emplace_back(std::sqrt(a), xi);
    }
    std::sort(pos.begin(), pos.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    const int t = static_cast<int>(pos.size());
    if (t > m) throw ValidationError("weight data: too many nonzero weights for a non-diagonalizable cusp");
    const int u = m - t;
    std::vector<Vec> rows;
    for (const auto& [l, xi] : pos) rows.push_back(xi / l);
    // Complete to a beta*-orthonormal set of rows.
    std::vector<Vec> extra;
    for (int k = 0; k < m && static_cast<int>(extra.size()) < u; ++k) {
        Vec cand = beta.col(k);
        for (const Vec& r : rows) cand -= r * r.dot(binv * cand);
        for (const Vec& r : extra) cand -= r * r.dot(binv * cand);
        const double nn = cand.dot(binv * cand);
        if (nn > 1e-12) extra.push_back(cand / std::sqrt(nn));
    }
    if (static_cast<int>(extra.size()) != u) throw NumericalError("weight data: could not complete the frame");
    Mat b(m, m);
    Vec lambda = Vec::Zero(n);
    for (int i = 0; i < u; ++i) b.row(i) = extra[static_cast<std::size_t>(i)].transpose();
    for (int i = 0; i < t; ++i) {
        b.row(u + i) = rows[static_cast<std::size_t>(i)].transpose();
        lambda(1 + u + i) = pos[static_cast<std::size_t>(i)].first;
    }
    BlownUpWeylPoint p = BlownUpWeylPoint::from_lambda(lambda, Flavor::BlownUpWeyl);
    return build_marked_cusp(p, b, false);
}

WeightData frame_to_weight_data(const Mat& a, const std::vector<Vec>& vs) {
    const int m = static_cast<int>(a.rows());
    if (a.cols() != m) throw ValidationError("frame: A must be square");
    if (static_cast<int>(vs.size()) != m + 1) throw ValidationError("frame: expected n = dim + 1 vectors");
    double sum = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            sum += vs[i].dot(vs[j]);
            ++count;
        }
    const double varpi = -sum / count;
    double worst = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j) worst = std::max(worst, std::abs(vs[i].dot(vs[j]) + varpi));
    if (worst > 1e-8 || varpi < -1e-8) throw ValidationError("frame: pairwise products are not a common -varpi <= 0");
    WeightData w;
    for (const Vec& v : vs) w.weights.push_back(a.transpose() * v);
    const Mat beta = a.transpose() * a;
    const double det = beta.determinant();
    w.metric = unimodular(beta);
    // Rescale the weights with the metric so the pairings are unchanged.
    const double s = std::pow(det, -1.0 / (2.0 * m));
    for (Vec& x : w.weights) x *= s;
    return w;
}

CharacterData projectivize_character(const MarkedCusp& c) {
    CharacterData ch = weights_of(c);
    Vec mean = Vec::Zero(c.dim());
    for (const Vec& w : ch.weights) mean += w;
    mean /= static_cast<double>(ch.weights.size());
    for (Vec& w : ch.weights) w -= mean;
    return ch;
}

Vec middle_weight(const std::vector<Vec>& weights) {
    if (weights.empty()) throw ValidationError("middle weight: empty set");
    const int m = static_cast<int>(weights.front().size());
    const double scale = entry_scale(weights);
    const double tol = 1e-9 * scale;

    std::vector<Vec> probes;
    std::mt19937_64 rng(0x3EA1ULL);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int k = 0; k < 256; ++k) {
        Vec v(m);
        for (int i = 0; i < m; ++i) v(i) = g(rng);
        probes.push_back(v / v.norm());
    }
    for (int mask = 0; mask < (1 << m); ++mask) {
        Vec v(m);
        for (int i = 0; i < m; ++i) v(i) = (mask >> i) & 1 ? 1.0 : -1.0;
        probes.push_back(v / std::sqrt(static_cast<double>(m)));
    }

    std::vector<Vec> survivors;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        bool ok = true;
        for (const Vec& v : probes) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < weights.size(); ++j)
                if (j != i) best = std::max(best, weights[j].dot(v));
            if (weights[i].dot(v) > best + tol) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        bool dup = false;
        for (const Vec& s : survivors) dup = dup || (s - weights[i]).cwiseAbs().maxCoeff() <= 1e-8 * scale;
        if (!dup) survivors.push_back(weights[i]);
    }
    if (survivors.empty()) throw NumericalError("middle weight: none found");
    if (survivors.size() > 1) throw NumericalError("middle weight: tie between distinct candidates");
    return survivors.front();
}

CharacterData affine_from_projective(const CharacterData& shifted) {
    const Vec mid = middle_weight(shifted.weights);
    CharacterData out = shifted;
    for (Vec& w : out.weights) w -= mid;
    return out;
}

int stratum_dim(int n, int t) {
    if (n < 2) throw ValidationError("stratum_dim: n must be at least 2");
    if (t < 0 || t > n) throw ValidationError("stratum_dim: t must lie in [0, n]");
    if (t == n) return n * n - n;
    const int u = n - 1 - t;
    return t + (n - 1) * (n - 1) - 1 - u * (u - 1) / 2;
}

double weights_equation_defect(const MarkedCusp& c,
                               const std::function<double(const MarkedCusp&)>& varpi_formula) {
    if (!c.params()) throw ValidationError("weights equation: needs a canonical cusp");
    const WeightData w = weight_data(c);
    return std::max(w.residual(), std::abs(w.varpi() - varpi_formula(c)));
}

}  // namespace gcusp
