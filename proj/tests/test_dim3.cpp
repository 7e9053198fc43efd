#include "gcusp/dim3.hpp"
#include "gcusp/errors.hpp"
#include "gcusp/sampling.hpp"
#include "gcusp/shape.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace gcusp;
using Catch::Approx;

namespace {

Vec vec(std::initializer_list<double> v) {
    return Eigen::Map<const Vec>(v.begin(), static_cast<Eigen::Index>(v.size()));
}

CubicPoly mono(double a, double b, double d, double e) {
    return CubicPoly::from_monomials(2, {{{3, 0}, a}, {{2, 1}, b}, {{1, 2}, d}, {{0, 3}, e}});
}

Mat rotation(double phi) {
    Mat r(2, 2);
    r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    return r;
}

bool close(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("harmonic and radial decomposition", "[dim3]") {
    Cubic2D x = decompose_cubic_2d(mono(1, 0, 0, 0));
    CHECK(close(x.h, 0.25, 1e-15));
    CHECK(close(x.r, 0.75, 1e-15));
    x = decompose_cubic_2d(mono(1, 0, -3, 0));
    CHECK(close(x.h, 1.0, 1e-15));
    CHECK(close(x.r, 0.0, 1e-15));
    x = decompose_cubic_2d(mono(1, 0, 1, 0));
    CHECK(close(x.h, 0.0, 1e-15));
    CHECK(close(x.r, 1.0, 1e-15));
    CHECK_THROWS_AS(decompose_cubic_2d(CubicPoly(3)), ValidationError);

    Rng rng(71);
    for (int s = 0; s < 50; ++s) {
        const CubicPoly c = mono(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
        CHECK((decompose_cubic_2d(c).to_cubic() - c).max_abs_coeff() <= 1e-12);
        // Harmonic part is Laplacian-free; radial part is |z|^2 times linear.
        const Cubic2D hr = decompose_cubic_2d(c);
        CHECK(radial_projection(Mat::Identity(2, 2), Cubic2D{hr.h, 0.0}.to_cubic()).norm() <= 1e-12);
    }
}

TEST_CASE("w to matrix", "[dim3]") {
    CHECK(w_to_matrix(Complex(0, 1)).isApprox(Mat::Identity(2, 2)));
    Mat e(2, 2);
    e << std::pow(2.0, -0.5), 0, 0, std::sqrt(2.0);
    CHECK(w_to_matrix(Complex(0, 2)).isApprox(e));
    e << 1, -1, 0, 1;
    CHECK(w_to_matrix(Complex(1, 1)).isApprox(e));
    CHECK_THROWS_AS(w_to_matrix(Complex(1, 0)), ValidationError);

    Rng rng(73);
    for (int s = 0; s < 20; ++s) {
        const Complex w(uniform(rng, -2, 2), uniform(rng, 0.1, 3));
        const Mat a = w_to_matrix(w);
        CHECK(a.determinant() == Approx(1.0).epsilon(1e-14));
        CHECK(a(1, 0) == 0.0);
        const Complex image = (a(0, 0) * w + a(0, 1)) / (a(1, 0) * w + a(1, 1));
        CHECK(close(image, Complex(0, 1), 1e-12));
    }
}

TEST_CASE("coordinates of shapes", "[dim3]") {
    const CuspCoords3D std_coords = coords_from_shape(ShapeInvariant{Mat::Identity(2, 2), CubicPoly(2)});
    CHECK(close(std_coords.w, Complex(0, 1), 1e-15));
    CHECK(std::abs(std_coords.h) == 0.0);
    CHECK(std::abs(std_coords.r) == 0.0);

    // q = I, 3c = v1^3 + 2 v2^3.
    const CuspCoords3D x = coords_from_shape(ShapeInvariant{Mat::Identity(2, 2), mono(1.0 / 3, 0, 0, 2.0 / 3)});
    CHECK(close(x.w, Complex(0, 1), 1e-15));
    CHECK(close(12.0 * x.h, Complex(1, 2), 1e-14));
    CHECK(close(12.0 * x.r, 3.0 * Complex(1, -2), 1e-14));
    CHECK(std::abs(x.r) == Approx(3.0 * std::abs(x.h)));
    CHECK(classify_stratum_3d(x.h, x.r) == 2);

    CHECK_THROWS_AS(coords_from_shape(ShapeInvariant{Mat::Identity(2, 2), mono(1, 0, 1, 0)}), ValidationError);

    Rng rng(79);
    for (int s = 0; s < 50; ++s) {
        const Complex h(uniform(rng, -1, 1), uniform(rng, -1, 1));
        const double phase = uniform(rng, 0, 6.283185307179586);
        const Complex r = std::polar(uniform(rng, 0, 3 * std::abs(h)), phase);
        const CuspCoords3D in{Complex(uniform(rng, -2, 2), uniform(rng, 0.2, 3)), h, r};
        const CuspCoords3D out = coords_from_shape(shape_from_coords(in));
        CHECK(close(in.w, out.w, 1e-8));
        CHECK(close(in.h, out.h, 1e-8));
        CHECK(close(in.r, out.r, 1e-8));
    }
}

TEST_CASE("three-dimensional cusps fill the cone", "[dim3][property]") {
    Rng rng(83);
    for (int s = 0; s < 200; ++s) {
        const MarkedCusp c = random_cusp(rng, 3);
        const ShapeInvariant j = shape_invariant(c, ShapeRoute::Algebraic);
        const CuspCoords3D x = coords_from_shape(j);
        const double gap = 3.0 * std::abs(x.h) - std::abs(x.r);
        INFO("t=" << c.type() << " gap=" << gap);
        CHECK(gap >= -1e-8);
        CHECK((std::abs(gap) <= 1e-6) == (c.type() < 3));
        CHECK(classify_stratum_3d(x.h, x.r) == c.type());
        // The metric part is the conformal structure of w.
        const Mat a = w_to_matrix(x.w);
        CHECK((a.transpose() * a - j.q).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("radial part vanishes exactly on affine spheres", "[dim3][property]") {
    Rng rng(89);
    for (int s = 0; s < 60; ++s) {
        BlownUpWeylPoint p = s % 4 == 0 ? BlownUpWeylPoint::from_lambda(Vec::Constant(3, uniform(rng, 0.3, 2.0)))
                                        : random_params(rng, 3);
        const MarkedCusp c = build_marked_cusp(p, random_marking(rng, 2));
        const CuspCoords3D x = coords_from_shape(shape_invariant(c, ShapeRoute::Algebraic));
        CHECK((std::abs(x.r) <= 1e-9) == is_affine_sphere(c));
    }
}

TEST_CASE("rotation acts on h and r", "[dim3][property]") {
    Rng rng(97);
    for (int s = 0; s < 30; ++s) {
        const Complex h(uniform(rng, -1, 1), uniform(rng, -1, 1));
        const Complex r = std::polar(uniform(rng, 0, 3 * std::abs(h)), uniform(rng, 0, 6.3));
        const double phi = uniform(rng, 0, 6.3);
        const Complex omega = std::polar(1.0, phi);
        const Cubic2D rotated = decompose_cubic_2d(Cubic2D{h, r}.to_cubic().compose(rotation(phi)));
        CHECK(close(rotated.h, omega * omega * omega * h, 1e-12));
        CHECK(close(rotated.r, omega * r, 1e-12));
        CHECK(classify_stratum_3d(rotated.h, rotated.r) == classify_stratum_3d(h, r));
    }
}

TEST_CASE("stratum classification", "[dim3]") {
    CHECK(classify_stratum_3d(0.0, 0.0) == 0);
    const Cubic2D cube = decompose_cubic_2d(mono(1, 0, 0, 0));
    CHECK(classify_stratum_3d(cube.h, cube.r) == 1);
    // (x + 2y)^3 is also a cube.
    const Cubic2D cube2 = decompose_cubic_2d(mono(1, 6, 12, 8));
    CHECK(classify_stratum_3d(cube2.h, cube2.r) == 1);
    CHECK(classify_stratum_3d(1.0, 0.5) == 3);
    CHECK_THROWS_AS(classify_stratum_3d(0.1, 1.0), ValidationError);
    CHECK(hessian_covariant(mono(1, 0, 0, 0)).norm() == 0.0);
}

TEST_CASE("surface table", "[dim3]") {
    CHECK(surface_height_3d(vec({0, 0, 0}), 1, 1) == Approx(1.0));
    CHECK(surface_height_3d(vec({0, 0, 1}), 0, std::exp(1.0) - 1) == Approx(std::exp(1.0) - 2.0));
    CHECK_THROWS_AS(surface_height_3d(vec({0, 0, 1}), 0, -1.5), ValidationError);

    // The t = 0 row is the graph of F; other types are taken from F directly.
    Rng rng(101);
    for (int s = 0; s < 20; ++s) {
        const double x1 = uniform(rng, -0.5, 0.5), x2 = uniform(rng, -0.5, 0.5);
        CHECK(surface_height_3d(vec({0, 0, 0}), x1, x2) ==
              Approx(hypersurface_F(BlownUpWeylPoint::from_lambda(vec({0, 0, 0})), vec({x1, x2}))).margin(1e-14));
        const Vec l2 = vec({0, 0.7, 1.3});
        CHECK(surface_height_3d(l2, x1, x2) == hypersurface_F(BlownUpWeylPoint::from_lambda(l2), vec({x1, x2})));
        for (const Vec& l : {vec({0, 0, 1.3}), vec({0.5, 1.0, 2.0})})
            CHECK(surface_height_3d(l, x1, x2) == hypersurface_F(BlownUpWeylPoint::from_lambda(l), vec({x1, x2})));
    }

    // The tabulated t = 1 row is not the graph of F: at (0, e - 1) with
    // lambda_2 = 1 the row gives 1 while F gives e - 2.
    const double x2 = std::exp(1.0) - 1;
    CHECK(surface_table_row(1, vec({0, 0, 1}), 0, x2) == Approx(1.0));
    CHECK(hypersurface_F(BlownUpWeylPoint::from_lambda(vec({0, 0, 1})), vec({0, x2})) == Approx(std::exp(1.0) - 2));
    // The tabulated t = 3 row sums where F multiplies; the two differ already in
    // the x1 x2 term, by lambda_0^2 x1 x2 / (lambda_1 lambda_2).
    const Vec l3 = vec({0.5, 1.0, 2.0});
    const double f = hypersurface_F(BlownUpWeylPoint::from_lambda(l3), vec({0.3, 0.2}));
    CHECK(std::abs(surface_table_row(3, l3, 0.3, 0.2) - f) > 1e-4);
    const double e = 1e-3;
    const double small = surface_table_row(3, l3, e, e) - hypersurface_F(BlownUpWeylPoint::from_lambda(l3), vec({e, e}));
    CHECK(small == Approx(-0.25 * e * e / 2.0).epsilon(1e-2));
}

TEST_CASE("mesh export", "[dim3]") {
    const auto dir = std::filesystem::temp_directory_path() / "gcusp_mesh_test";
    std::filesystem::create_directories(dir);
    const BlownUpWeylPoint flat = BlownUpWeylPoint::from_lambda(vec({0, 0, 0}));
    const Mesh m2 = sample_mesh(flat, 2, 2);
    REQUIRE(m2.vertices.size() == 4);
    for (const auto& v : m2.vertices) CHECK(v[2] == Approx(0.5 * (v[0] * v[0] + v[1] * v[1])));

    const BlownUpWeylPoint p = BlownUpWeylPoint::from_lambda(vec({0.5, 1.0, 2.0}));
    const Mesh mesh = sample_mesh(p, 7, 5);
    CHECK(mesh.vertices.size() == 35u);
    CHECK(mesh.faces.size() == 2u * 6 * 4);
    const std::string csv = (dir / "m.csv").string();
    const std::string obj = (dir / "m.obj").string();
    write_mesh_csv(mesh, csv);
    write_mesh_obj(mesh, obj);
    const auto rows = read_mesh_csv(csv);
    REQUIRE(rows.size() == mesh.vertices.size());
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i] == mesh.vertices[i]);

    std::ifstream in(obj);
    int v = 0, f = 0;
    std::string tag;
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("v ", 0) == 0) ++v;
        if (line.rfind("f ", 0) == 0) ++f;
    }
    CHECK(v == 35);
    CHECK(f == 48);

    CHECK_THROWS_AS(write_mesh_csv(mesh, "/nonexistent-dir/x.csv"), IoError);
    CHECK_THROWS_AS(sample_mesh(BlownUpWeylPoint::from_lambda(vec({0, 0, 0, 0})), 3, 3), ValidationError);
    std::filesystem::remove_all(dir);
}
