#pragma once

#include "gcusp/linalg.hpp"

#include <map>
#include <vector>

namespace gcusp {

// Homogeneous cubic on R^m stored as a fully symmetric tensor:
// c(x) = sum_{a,b,k} t(a,b,k) x_a x_b x_k.
class CubicPoly {
public:
    using Exponent = std::vector<int>;

    CubicPoly() = default;
    explicit CubicPoly(int dim);

    static CubicPoly from_monomials(int dim, const std::map<Exponent, double>& coeffs);
    // Symmetrizes an arbitrary dim^3 tensor given in row-major (a, b, k) order.
    static CubicPoly from_tensor(int dim, const std::vector<double>& entries);
    // sum_i w_i <xi_i, x>^3
    static CubicPoly sum_of_cubes(const std::vector<Vec>& forms, const std::vector<double>& weights);

    int dim() const { return dim_; }
    double t(int a, int b, int k) const { return data_[index(a, b, k)]; }

    // Coefficients of the distinct monomials x^e, |e| = 3.
    std::map<Exponent, double> monomials() const;

    double operator()(const Vec& x) const;
    Vec gradient(const Vec& x) const;
    Mat hessian(const Vec& x) const;
    // Matrix t(x, ., .).
    Mat contract(const Vec& x) const;

    // (c o A)(x) = c(A x).
    CubicPoly compose(const Mat& a) const;

    CubicPoly operator*(double s) const;
    CubicPoly operator+(const CubicPoly& o) const;
    CubicPoly operator-(const CubicPoly& o) const;
    double max_abs_coeff() const;

private:
    std::size_t index(int a, int b, int k) const {
        return (static_cast<std::size_t>(a) * dim_ + b) * dim_ + k;
    }
    void add_symmetrized(int a, int b, int k, double value);

    int dim_ = 0;
    std::vector<double> data_;
};

// Representative of the projective class [q + c] with det q = 1.
struct ShapeInvariant {
    Mat q;
    CubicPoly c;

    // Scales the pair (q, c) by det(q)^{-1/m}.
    static ShapeInvariant normalized(const Mat& q, const CubicPoly& c);
};

// Largest coefficient difference between two shapes (q entries and cubic tensor).
double shape_distance(const ShapeInvariant& a, const ShapeInvariant& b);

}  // namespace gcusp
