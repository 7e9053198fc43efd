#pragma once

#include "gcusp/cubic.hpp"
#include "gcusp/cusp_groups.hpp"

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace gcusp {

using Complex = std::complex<double>;

// Binary cubic Re(h z^3 + r z |z|^2) with z = x + i y.
struct Cubic2D {
    Complex h;
    Complex r;

    CubicPoly to_cubic() const;
};

struct CuspCoords3D {
    Complex w;  // Im w > 0
    Complex h;
    Complex r;
};

Cubic2D decompose_cubic_2d(const CubicPoly& c);

// Upper-triangular A in SL(2,R) with positive diagonal sending w to i.
Mat w_to_matrix(Complex w);

// Inverse pair: J = [A_w^T A_w + Re(h z^3 + r z|z|^2) o A_w].
CuspCoords3D coords_from_shape(const ShapeInvariant& j, double cone_tol = 1e-8);
ShapeInvariant shape_from_coords(const CuspCoords3D& x);

// Hessian covariant (x^2, xy, y^2 coefficients) of a binary cubic; vanishes
// exactly on cubes of linear forms.
Vec hessian_covariant(const CubicPoly& c);

// 0: cone point, 3: interior of |r| <= 3|h|, 1: cube of a linear form, 2: rest of the boundary.
int classify_stratum_3d(Complex h, Complex r, double tol = 1e-8);

// Closed-form surface table, row t, evaluated literally.
double surface_table_row(int t, const Vec& lambda, double x1, double x2);

// Flat table row for t = 0, hypersurface_F otherwise (the table rows for
// t > 0 are not graphs of F).
double surface_height_3d(const Vec& lambda, double x1, double x2);

struct Mesh {
    int g1 = 0;
    int g2 = 0;
    std::vector<std::array<double, 3>> vertices;  // x1, x2, y; x2 varies fastest
    std::vector<std::array<int, 3>> faces;        // 0-based
};

// Samples hypersurface_F on a g1 x g2 grid over [-extent, extent]^2, clipped
// so that 1 + lambda_i x_i stays positive.
Mesh sample_mesh(const BlownUpWeylPoint& p, int g1, int g2, double extent = 1.0);

void write_mesh_csv(const Mesh& mesh, const std::string& path);
void write_mesh_obj(const Mesh& mesh, const std::string& path);
std::vector<std::array<double, 3>> read_mesh_csv(const std::string& path);

}  // namespace gcusp
