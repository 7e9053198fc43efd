#include "gcusp/cusp_groups.hpp"
#include "gcusp/errors.hpp"
#include "gcusp/sampling.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace gcusp;
using Catch::Approx;

namespace {

BlownUpWeylPoint point(std::initializer_list<double> lambda, std::initializer_list<double> kappa) {
    BlownUpWeylPoint p;
    p.n = static_cast<int>(lambda.size());
    p.lambda = Eigen::Map<const Vec>(lambda.begin(), static_cast<Eigen::Index>(lambda.size()));
    p.kappa = Eigen::Map<const Vec>(kappa.begin(), static_cast<Eigen::Index>(kappa.size()));
    return p;
}

PsiParameter psi_of(std::initializer_list<double> values) {
    PsiParameter p;
    p.n = static_cast<int>(values.size());
    p.psi = Eigen::Map<const Vec>(values.begin(), static_cast<Eigen::Index>(values.size()));
    return p;
}

Vec vec(std::initializer_list<double> v) {
    return Eigen::Map<const Vec>(v.begin(), static_cast<Eigen::Index>(v.size()));
}

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("zeta generator block shapes", "[cusp_groups]") {
    SECTION("type 0 is strictly upper triangular") {
        const Mat f = lie_algebra_zeta(psi_of({0, 0, 0}), vec({1, 2}));
        Mat expected = Mat::Zero(4, 4);
        expected(0, 1) = 1;
        expected(0, 2) = 2;
        expected(1, 3) = 1;
        expected(2, 3) = 2;
        CHECK(f == expected);
    }
    SECTION("type 1 in dimension 3") {
        const Mat f = lie_algebra_zeta(psi_of({1, 0, 0}), vec({1, 1}));
        Mat expected = Mat::Zero(4, 4);
        expected(0, 0) = 1;
        expected(1, 2) = 1;
        expected(2, 3) = 1;
        expected(1, 3) = -1;
        CHECK(f == expected);
    }
    SECTION("type n-1") {
        const Mat f = lie_algebra_zeta(psi_of({2, 1, 0}), vec({1, 3}));
        Mat expected = Mat::Zero(4, 4);
        expected(0, 0) = 1;
        expected(1, 1) = 3;
        expected(2, 3) = -5;
        CHECK(f == expected);
    }
    SECTION("diagonalizable type") {
        const Mat f = lie_algebra_zeta(psi_of({1, 1, 1}), vec({1, -1}));
        Mat expected = Mat::Zero(4, 4);
        expected(0, 0) = 1;
        expected(1, 1) = -1;
        CHECK(f == expected);
    }
    SECTION("rejects zeros before positives") {
        CHECK_THROWS_AS(lie_algebra_zeta(psi_of({0, 1, 0}), vec({1, 1})), ValidationError);
    }
}

TEST_CASE("zeta scaling identity", "[cusp_groups][property]") {
    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 3);
        const int t = static_cast<int>(rng() % (n + 1));
        PsiParameter psi;
        psi.n = n;
        psi.psi = Vec::Zero(n);
        for (int i = 0; i < t; ++i) psi.psi(i) = uniform(rng, 0.2, 3.0);
        const double s = uniform(rng, 0.1, 5.0);
        PsiParameter scaled = psi;
        scaled.psi *= s;
        const Vec v = random_vector(rng, n - 1);
        Vec w = v;
        w.head(psi.diagonal_rank()) *= s;
        CHECK(max_abs(lie_algebra_zeta(scaled, v) - lie_algebra_zeta(psi, w)) <= 1e-14 * (1.0 + max_abs(lie_algebra_zeta(psi, w))));
    }
}

TEST_CASE("phi generator entries", "[cusp_groups]") {
    const Mat f = lie_algebra_phi(point({0, 1, 2}, {0, 0}), vec({3, 5}));
    Mat expected = Mat::Zero(4, 4);
    expected.row(0) << 0, 3, 5, 0;
    expected.row(1) << 0, 3, 0, 3;
    expected.row(2) << 0, 0, 10, 5;
    CHECK(f == expected);

    CHECK(lie_algebra_phi(point({0, 0, 0}, {0, 0}), vec({0, 0})) == Mat::Zero(4, 4));

    const Mat g = lie_algebra_phi(point({1, 1, 1}, {1, 1}), vec({1, 0}));
    CHECK(g(0, 0) == -1.0);
    CHECK(g(0, 1) == 2.0);
    CHECK(g(0, 2) == 1.0);
}

TEST_CASE("parameter validation", "[cusp_groups]") {
    CHECK_NOTHROW(point({0, 1, 2}, {0, 0}).validate());
    CHECK_THROWS_AS(point({0, 2, 1}, {0, 0}).validate(), ValidationError);
    CHECK_THROWS_AS(point({1, 1, 2}, {1, 0.4}).validate(), ValidationError);
    CHECK_THROWS_AS(point({0, 1, 2}, {0}).validate(), ValidationError);
    try {
        point({0, 1, 2}, {0}).validate();
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("kappa") != std::string::npos);
    }
    auto d = point({2, 1, 4}, {2, 0.5});
    d.flavor = Flavor::Diagonal;
    CHECK_NOTHROW(d.validate());
    CHECK(d.type() == 3);
    CHECK(point({0, 0, 2}, {0.3, 0}).type() == 1);
}

TEST_CASE("preferred square root", "[cusp_groups]") {
    CHECK(preferred_sqrt(vec({0, 0})) == Mat::Identity(2, 2));
    const Mat s = preferred_sqrt(vec({1, 0}));
    CHECK(s(0, 0) == Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(s(1, 1) == 1.0);
    CHECK(s(0, 1) == 0.0);
    Rng rng(22);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec k = random_vector(rng, 1 + static_cast<int>(rng() % 4));
        const Mat sq = preferred_sqrt(k);
        const Mat target = Mat::Identity(k.size(), k.size()) + k * k.transpose();
        CHECK(max_abs(sq * sq - target) <= 1e-12 * max_abs(target));
        CHECK(is_positive_definite(sq));
    }
}

TEST_CASE("build_marked_cusp", "[cusp_groups]") {
    SECTION("standard cusp is unipotent") {
        const MarkedCusp c = build_marked_cusp(point({0, 0, 0}, {0, 0}), Mat::Identity(2, 2));
        for (const Mat& g : c.generators()) CHECK(max_abs(g * g * g * g) == 0.0);
        CHECK(c.type() == 0);
    }
    SECTION("orientation-reversing marking is kept") {
        Mat b = Mat::Identity(2, 2);
        b(1, 1) = -1;
        const MarkedCusp c = build_marked_cusp(point({0, 1, 2}, {0, 0}), b);
        CHECK(c.marking() == b);
        CHECK(c.rescale() == 1.0);
    }
    SECTION("non-unimodular marking is normalized") {
        const MarkedCusp c = build_marked_cusp(point({0, 1, 2}, {0, 0}), 2.0 * Mat::Identity(2, 2));
        CHECK(max_abs(c.marking() - Mat::Identity(2, 2)) < 1e-15);
        CHECK(c.rescale() == Approx(2.0));
        CHECK(c.params()->lambda(2) == Approx(4.0));
        // Same diagonal weights as the unnormalized marking.
        const Mat g = c.generators()[1];
        CHECK(g(2, 2) == Approx(4.0));
    }
    SECTION("singular marking") {
        CHECK_THROWS_AS(build_marked_cusp(point({0, 1, 2}, {0, 0}), Mat::Zero(2, 2)), ValidationError);
    }
}

TEST_CASE("generators commute and are triangular", "[cusp_groups][property]") {
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 3);
        const MarkedCusp c = random_cusp(rng, n);
        const Vec v = random_vector(rng, n - 1);
        const Vec w = random_vector(rng, n - 1);
        const Mat a = c.holonomy(v);
        const Mat b = c.holonomy(w);
        CHECK(max_abs(a * b - b * a) <= 1e-9 * std::max(1.0, max_abs(a) * max_abs(b)));
        for (const Mat& g : c.generators()) CHECK(is_upper_triangular(g));
    }
}

TEST_CASE("lambda and psi dictionary", "[cusp_groups]") {
    PsiParameter psi = lambda_to_psi(point({0, 0, 2}, {0, 0}));
    CHECK(psi.psi(0) == Approx(0.25));
    CHECK(psi.psi(1) == 0.0);
    CHECK(psi.psi(2) == 0.0);

    psi = lambda_to_psi(point({1, 1, 1}, {1, 1}));
    CHECK(psi.psi == vec({1, 1, 1}));

    auto d = point({1, 2, 2}, {0.5, 0.5});
    psi = lambda_to_psi(d);
    CHECK(psi.psi(0) == Approx(0.25));
    CHECK(psi.psi(1) == Approx(0.25));
    CHECK(psi.psi(2) == Approx(1.0));

    Rng rng(24);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 3);
        const BlownUpWeylPoint p = random_params(rng, n);
        const BlownUpWeylPoint back = psi_to_lambda(lambda_to_psi(p));
        CHECK(max_abs(back.lambda - p.lambda) <= 1e-12 * max_abs(p.lambda) + 1e-300);
        // kappa is only determined where lambda_i > 0.
        for (int i = 1; i < n; ++i)
            if (p.lambda(i) > 0.0) CHECK(back.kappa(i - 1) == Approx(p.kappa(i - 1)).epsilon(1e-12));
    }
}

TEST_CASE("diagonal conjugator", "[cusp_groups]") {
    auto check_at = [](const BlownUpWeylPoint& p, const Vec& v) {
        const DiagConjugator dc = diag_conjugator(p);
        const Mat lhs = dc.q * expm(lie_algebra_phi(p, v)) * dc.q.inverse();
        const Mat rhs = expm(lie_algebra_zeta(dc.psi, dc.frak_f * v));
        return max_abs(lhs - rhs);
    };
    CHECK(check_at(point({1, 1, 1}, {1, 1}), vec({1, 0})) <= 1e-8);
    auto p = point({1, 2, 2}, {0.5, 0.5});
    CHECK(check_at(p, vec({1, -1})) <= 1e-8);
    CHECK(diag_conjugator(point({1, 1, 1, 1}, {1, 1, 1})).frak_f == Mat::Identity(3, 3));

    Rng rng(25);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 3);
        const BlownUpWeylPoint q = random_params(rng, n, n);
        CHECK(check_at(q, random_vector(rng, n - 1, 0.5)) <= 1e-8);
    }
    CHECK_THROWS_AS(diag_conjugator(point({0, 1, 2}, {0, 0})), ValidationError);
}

TEST_CASE("orbit map and boundary graph", "[cusp_groups]") {
    const MarkedCusp std_cusp = build_marked_cusp(point({0, 0, 0}, {0, 0}), Mat::Identity(2, 2));
    const Vec v = vec({0.4, -1.3});
    const Vec x = orbit_point(std_cusp, v);
    CHECK(x(0) == Approx(v.squaredNorm() / 2.0).epsilon(1e-15));
    CHECK(x(1) == Approx(0.4));
    CHECK(x(2) == Approx(-1.3));
    CHECK(orbit_point(std_cusp, vec({0, 0})) == Vec::Zero(3));

    CHECK(hypersurface_F(point({0, 0, 0}, {0, 0}), vec({1, 2})) == Approx(2.5));
    CHECK(hypersurface_F(point({0, 0, 1}, {0, 0}), vec({0, std::exp(1.0) - 1.0})) ==
          Approx(std::exp(1.0) - 2.0).epsilon(1e-14));
    CHECK(hypersurface_F(point({1, 1, 1}, {1, 1}), vec({0, 0})) == 0.0);
    CHECK_THROWS_AS(hypersurface_F(point({0, 0, 1}, {0, 0}), vec({0, -1.0})), ValidationError);
}

TEST_CASE("orbit points lie on the graph of F", "[cusp_groups][property]") {
    Rng rng(26);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 3);
        const BlownUpWeylPoint p = random_params(rng, n);
        const MarkedCusp c = build_marked_cusp(p, Mat::Identity(n - 1, n - 1));
        const Vec v = random_vector(rng, n - 1, 0.7);
        const Vec x = orbit_point(c, v);
        const double f = hypersurface_F(p, x.tail(n - 1));
        CHECK(std::abs(x(0) - f) <= 1e-9 * std::max(1.0, std::abs(f)));
    }
}

TEST_CASE("orbit map is equivariant", "[cusp_groups][property]") {
    Rng rng(27);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 3);
        const MarkedCusp c = random_cusp(rng, n);
        const Vec v = random_vector(rng, n - 1, 0.5);
        const Vec w = random_vector(rng, n - 1, 0.5);
        Vec hw(n + 1);
        hw << orbit_point(c, w), 1.0;
        const Vec lhs = orbit_point(c, v + w);
        const Vec rhs = (c.holonomy(v) * hw).head(n);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, rhs.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("conjugation carries the basepoint", "[cusp_groups]") {
    Rng rng(28);
    const MarkedCusp c = random_cusp(rng, 4);
    const Mat p = random_affine(rng, 4);
    const MarkedCusp d = conjugated(c, p);
    const Vec v = random_vector(rng, 3, 0.5);
    Vec hx(5);
    hx << orbit_point(c, v), 1.0;
    const Vec expected = (p * hx).head(4);
    CHECK((orbit_point(d, v) - expected).norm() <= 1e-10 * std::max(1.0, expected.norm()));
    Mat bad = p;
    bad(4, 0) = 1.0;
    CHECK_THROWS_AS(conjugated(c, bad), ValidationError);
}

TEST_CASE("diagonalizable family converges to its boundary limit", "[cusp_groups][property]") {
    const Vec kappa = vec({1.0, 0.5});
    const MarkedCusp limit = build_marked_cusp(point({0, 0, 0}, {1.0, 0.5}), Mat::Identity(2, 2));
    const Vec v = vec({0.7, -0.4});
    double prev = 0.0;
    for (double l0 : {1e-1, 1e-2, 1e-3}) {
        BlownUpWeylPoint p = point({l0, l0 / kappa(0), l0 / kappa(1)}, {1.0, 0.5});
        p.flavor = Flavor::Diagonal;
        const MarkedCusp c = build_marked_cusp(p, Mat::Identity(2, 2));
        const double dist = max_abs(c.holonomy(v) - limit.holonomy(v));
        CHECK(dist <= 10.0 * l0);
        if (prev > 0.0) CHECK(prev / dist == Approx(10.0).epsilon(0.1));
        prev = dist;
    }
}

TEST_CASE("radial flow", "[cusp_groups]") {
    SECTION("non-diagonalizable translation") {
        const MarkedCusp c = build_marked_cusp(point({0, 1, 2}, {0, 0}), Mat::Identity(2, 2));
        const Vec x = vec({0.3, 0.2, -0.1});
        const Vec y = radial_flow(c, 0.75, x);
        CHECK(y == vec({0.3 - 0.75, 0.2, -0.1}));
        CHECK(radial_flow(c, 0.0, x) == x);
    }
    SECTION("diagonalizable center") {
        const MarkedCusp c = build_marked_cusp(point({1, 1, 1}, {1, 1}), Mat::Identity(2, 2));
        const Vec center = radial_center(c);
        CHECK((center - vec({-3, -1, -1})).norm() <= 1e-10);
        const Vec b = Vec::Zero(3);
        for (double t : {-0.1, -0.5, -2.0}) {
            const Vec y = radial_flow(c, t, b);
            CHECK(y(0) > hypersurface_F(*c.params(), y.tail(2)));
        }
    }
    SECTION("ill-conditioned center is reported") {
        BlownUpWeylPoint p = point({1e-14, 1e-14, 1e-14}, {1, 1});
        const MarkedCusp c = build_marked_cusp(p, Mat::Identity(2, 2));
        CHECK_THROWS_AS(radial_center(c), NumericalError);
    }
}
