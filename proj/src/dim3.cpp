#include "gcusp/dim3.hpp"

#include "gcusp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gcusp {

namespace {

struct Coeffs {
    double a, b, d, e;  // x^3, x^2 y, x y^2, y^3
};

Coeffs coeffs_of(const CubicPoly& c) {
    if (c.dim() != 2) throw ValidationError("binary cubic expected, got dimension " + std::to_string(c.dim()));
    auto m = c.monomials();
    auto get = [&](int i, int j) {
        auto it = m.find({i, j});
        return it == m.end() ? 0.0 : it->second;
    };
    return {get(3, 0), get(2, 1), get(1, 2), get(0, 3)};
}

std::string format17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

CubicPoly Cubic2D::to_cubic() const {
    const double h1 = h.real(), h2 = h.imag(), r1 = r.real(), r2 = r.imag();
    return CubicPoly::from_monomials(
        2, {{{3, 0}, h1 + r1}, {{2, 1}, -3.0 * h2 - r2}, {{1, 2}, -3.0 * h1 + r1}, {{0, 3}, h2 - r2}});
}

Cubic2D decompose_cubic_2d(const CubicPoly& c) {
    const Coeffs k = coeffs_of(c);
    return {Complex((k.a - k.d) / 4.0, (k.e - k.b) / 4.0), Complex((3.0 * k.a + k.d) / 4.0, (-k.b - 3.0 * k.e) / 4.0)};
}

Mat w_to_matrix(Complex w) {
    if (!(w.imag() > 0.0)) throw ValidationError("w: imaginary part must be positive");
    const double a = 1.0 / std::sqrt(w.imag());
    Mat m(2, 2);
    m << a, -a * w.real(), 0.0, 1.0 / a;
    return m;
}

CuspCoords3D coords_from_shape(const ShapeInvariant& j_in, double cone_tol) {
    if (j_in.q.rows() != 2) throw ValidationError("coords: shape must live on R^2 (n = 3)");
    const ShapeInvariant j = ShapeInvariant::normalized(j_in.q, j_in.c);
    const Mat a = cholesky_upper(j.q);
    const Complex w(-a(0, 1) / a(0, 0), 1.0 / (a(0, 0) * a(0, 0)));
    const Cubic2D hr = decompose_cubic_2d(j.c.compose(a.inverse()));
    if (std::abs(hr.r) > 3.0 * std::abs(hr.h) + cone_tol)
        throw ValidationError("coords: |r| > 3|h|, shape is not realized by a cusp");
    return {w, hr.h, hr.r};
}

ShapeInvariant shape_from_coords(const CuspCoords3D& x) {
    const Mat a = w_to_matrix(x.w);
    return ShapeInvariant::normalized(a.transpose() * a, Cubic2D{x.h, x.r}.to_cubic().compose(a));
}

Vec hessian_covariant(const CubicPoly& c) {
    const Coeffs k = coeffs_of(c);
    Vec out(3);
    out << 12.0 * k.a * k.d - 4.0 * k.b * k.b, 36.0 * k.a * k.e - 4.0 * k.b * k.d, 12.0 * k.b * k.e - 4.0 * k.d * k.d;
    return out;
}

int classify_stratum_3d(Complex h, Complex r, double tol) {
    const double ah = std::abs(h), ar = std::abs(r);
    if (ar > 3.0 * ah + tol) throw ValidationError("stratum: (h, r) outside the cone |r| <= 3|h|");
    if (ah <= 1e-10 && ar <= 1e-10) return 0;
    if (3.0 * ah - ar > tol) return 3;
    const CubicPoly c = Cubic2D{h, r}.to_cubic();
    const double s = c.max_abs_coeff();
    return hessian_covariant(c).cwiseAbs().maxCoeff() <= tol * s * s ? 1 : 2;
}

double surface_table_row(int t, const Vec& lambda, double x1, double x2) {
    if (lambda.size() != 3) throw ValidationError("lambda: expected 3 entries");
    const double l0 = lambda(0), l1 = lambda(1), l2 = lambda(2);
    auto need = [](double l, double x, const char* name) {
        if (!(1.0 + l * x > 0.0)) throw ValidationError(std::string("x: 1 + lambda x must be positive for ") + name);
    };
    switch (t) {
        case 0:
            return 0.5 * (x1 * x1 + x2 * x2);
        case 1:
            need(l2, x2, "x2");
            return 0.5 * x1 * x1 + std::log1p(l2 * x2) / (l2 * l2);
        case 2:
            need(l1, x1, "x1");
            need(l2, x2, "x2");
            return 0.5 * (x1 + x2) - std::log1p(l1 * x1) / (l1 * l1) + std::log1p(l2 * x2) / (l2 * l2);
        case 3: {
            need(l1, x1, "x1");
            need(l2, x2, "x2");
            const double k1 = l0 / l1, k2 = l0 / l2;
            return x1 / l1 + x2 / l2 +
                   (-2.0 + std::pow(1.0 + l1 * x1, -k1 * k1) + std::pow(1.0 + l2 * x2, -k2 * k2)) / (l0 * l0);
        }
        default:
            throw ValidationError("table row: t must be in 0..3");
    }
}

double surface_height_3d(const Vec& lambda, double x1, double x2) {
    if (lambda.size() != 3) throw ValidationError("lambda: expected 3 entries");
    int t = 0;
    const double big = lambda.cwiseAbs().maxCoeff();
    for (int i = 0; i < 3; ++i) t += is_nonzero_entry(lambda(i), big) ? 1 : 0;
    if (t > 0) {
        const BlownUpWeylPoint p = BlownUpWeylPoint::from_lambda(lambda);
        Vec x(2);
        x << x1, x2;
        return hypersurface_F(p, x);
    }
    return surface_table_row(t, lambda, x1, x2);
}

Mesh sample_mesh(const BlownUpWeylPoint& p, int g1, int g2, double extent) {
    if (p.n != 3) throw ValidationError("mesh: only n = 3 surfaces live in R^3");
    if (g1 < 2 || g2 < 2) throw ValidationError("grid: need at least 2 points per axis");
    if (!(extent > 0.0)) throw ValidationError("mesh: extent must be positive");
    p.validate();
    Mesh mesh;
    mesh.g1 = g1;
    mesh.g2 = g2;
    double lo[2], hi[2];
    for (int i = 0; i < 2; ++i) {
        const double l = p.lambda(i + 1);
        lo[i] = l > 0.0 ? std::max(-extent, -0.9 / l) : -extent;
        hi[i] = extent;
    }
    for (int i = 0; i < g1; ++i)
        for (int j = 0; j < g2; ++j) {
            Vec x(2);
            x << lo[0] + (hi[0] - lo[0]) * i / (g1 - 1), lo[1] + (hi[1] - lo[1]) * j / (g2 - 1);
            mesh.vertices.push_back({x(0), x(1), hypersurface_F(p, x)});
        }
    for (int i = 0; i + 1 < g1; ++i)
        for (int j = 0; j + 1 < g2; ++j) {
            const int v00 = i * g2 + j, v01 = v00 + 1, v10 = v00 + g2, v11 = v10 + 1;
            mesh.faces.push_back({v00, v10, v11});
            mesh.faces.push_back({v00, v11, v01});
        }
    return mesh;
}

void write_mesh_csv(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "x1,x2,y\n";
    for (const auto& v : mesh.vertices) out << format17(v[0]) << ',' << format17(v[1]) << ',' << format17(v[2]) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

void write_mesh_obj(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    for (const auto& v : mesh.vertices) out << "v " << format17(v[0]) << ' ' << format17(v[1]) << ' ' << format17(v[2]) << '\n';
    for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
    if (!out) throw IoError("write failed: " + path);
}

std::vector<std::array<double, 3>> read_mesh_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "x1,x2,y") throw IoError(path + ": missing header x1,x2,y");
    std::vector<std::array<double, 3>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<double, 3> row{};
        std::istringstream ss(line);
        std::string cell;
        for (int k = 0; k < 3; ++k) {
            if (!std::getline(ss, cell, ',')) throw IoError(path + ": short row");
            row[static_cast<std::size_t>(k)] = std::strtod(cell.c_str(), nullptr);
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace gcusp
