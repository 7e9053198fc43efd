#include "gcusp/io.hpp"

#include "gcusp/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gcusp {

namespace {

double number_at(const Json& j, const std::string& path) {
    if (!j.is_number()) throw ValidationError(path + ": expected a number");
    return j.get<double>();
}

Vec vector_at(const Json& j, const std::string& path) {
    if (!j.is_array()) throw ValidationError(path + ": expected an array of numbers");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = number_at(j[i], path + "[" + std::to_string(i) + "]");
    return v;
}

Mat matrix_at(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ValidationError(path + ": expected a non-empty array of rows");
    const std::size_t rows = j.size();
    const Vec first = vector_at(j[0], path + "[0]");
    Mat m(static_cast<Eigen::Index>(rows), first.size());
    for (std::size_t i = 0; i < rows; ++i) {
        const Vec row = vector_at(j[i], path + "[" + std::to_string(i) + "]");
        if (row.size() != first.size()) throw ValidationError(path + ": ragged rows");
        m.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    return m;
}

const Json& field(const Json& j, const char* name) {
    if (!j.is_object()) throw ValidationError("document: expected a JSON object");
    auto it = j.find(name);
    if (it == j.end()) throw ValidationError(std::string(name) + ": missing field");
    return *it;
}

Json vec_json(const Vec& v, bool canonical) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(canonical ? canonical_number(v(i)) : v(i));
    return a;
}

Json mat_json(const Mat& m, bool canonical) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i).transpose(), canonical));
    return a;
}

std::string exponent_key(const CubicPoly::Exponent& e) {
    std::string s = "(";
    for (std::size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::to_string(e[i]);
    return s + ")";
}

CubicPoly::Exponent parse_exponent(const std::string& key, int dim) {
    if (key.size() < 2 || key.front() != '(' || key.back() != ')')
        throw ValidationError("c: monomial key " + key + " must look like (a,b,...)");
    CubicPoly::Exponent e;
    std::stringstream ss(key.substr(1, key.size() - 2));
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            e.push_back(std::stoi(part));
        } catch (const std::exception&) {
            throw ValidationError("c: bad exponent in " + key);
        }
    }
    int total = 0;
    for (int x : e) total += x < 0 ? 100 : x;
    if (static_cast<int>(e.size()) != dim || total != 3)
        throw ValidationError("c: " + key + " is not a degree-3 monomial in " + std::to_string(dim) + " variables");
    return e;
}

}  // namespace

CuspSpec cusp_spec_from_json(const Json& j) {
    CuspSpec s;
    const Json& nj = field(j, "n");
    if (!nj.is_number_integer()) throw ValidationError("n: expected an integer");
    s.params.n = nj.get<int>();
    if (s.params.n < 2) throw ValidationError("n: must be at least 2");
    s.params.lambda = vector_at(field(j, "lambda"), "lambda");
    s.params.kappa = vector_at(field(j, "kappa"), "kappa");
    if (s.params.lambda.size() != s.params.n)
        throw ValidationError("lambda: expected " + std::to_string(s.params.n) + " entries");
    if (s.params.kappa.size() != s.params.n - 1)
        throw ValidationError("kappa: expected " + std::to_string(s.params.n - 1) + " entries");
    if (auto it = j.find("flavor"); it != j.end()) {
        if (*it == "diagonal")
            s.params.flavor = Flavor::Diagonal;
        else if (*it == "blown_up_weyl")
            s.params.flavor = Flavor::BlownUpWeyl;
        else
            throw ValidationError("flavor: expected \"blown_up_weyl\" or \"diagonal\"");
    }
    if (auto it = j.find("B"); it != j.end()) {
        s.marking = matrix_at(*it, "B");
        if (s.marking.rows() != s.params.n - 1 || s.marking.cols() != s.params.n - 1)
            throw ValidationError("B: expected a " + std::to_string(s.params.n - 1) + "x" + std::to_string(s.params.n - 1) +
                                  " matrix");
    } else {
        s.marking = Mat::Identity(s.params.n - 1, s.params.n - 1);
    }
    if (auto it = j.find("orthonormalized"); it != j.end()) {
        if (!it->is_boolean()) throw ValidationError("orthonormalized: expected a boolean");
        s.orthonormalized = it->get<bool>();
    }
    s.params.validate();
    return s;
}

MarkedCusp build_from_json(const Json& j) {
    const CuspSpec s = cusp_spec_from_json(j);
    return build_marked_cusp(s.params, s.marking, s.orthonormalized);
}

Json cusp_to_json(const MarkedCusp& c) {
    if (!c.params()) throw ValidationError("cusp: only canonical cusps have a parameter file");
    const BlownUpWeylPoint& p = *c.params();
    Json j;
    j["n"] = p.n;
    j["lambda"] = vec_json(p.lambda, false);
    j["kappa"] = vec_json(p.kappa, false);
    j["B"] = mat_json(c.marking(), false);
    j["orthonormalized"] = c.orthonormalized();
    j["flavor"] = p.flavor == Flavor::Diagonal ? "diagonal" : "blown_up_weyl";
    j["type"] = c.type();
    if (c.rescale() != 1.0) j["rescaled"] = c.rescale();
    return j;
}

double canonical_number(double x) {
    const double r = std::round(x * 1e12) / 1e12;
    return r == 0.0 ? 0.0 : r;
}

Json weight_data_to_json(const WeightData& w, int type) {
    Json j;
    Json ws = Json::array();
    for (const Vec& xi : canonical_order(w.weights)) ws.push_back(vec_json(xi, true));
    j["weights"] = ws;
    j["beta"] = mat_json(w.metric, true);
    j["varpi"] = canonical_number(w.varpi());
    j["type"] = type;
    return j;
}

WeightData weight_data_from_json(const Json& j) {
    WeightData w;
    w.metric = matrix_at(field(j, "beta"), "beta");
    const Json& ws = field(j, "weights");
    if (!ws.is_array()) throw ValidationError("weights: expected an array of covectors");
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const Vec xi = vector_at(ws[i], "weights[" + std::to_string(i) + "]");
        if (xi.size() != w.metric.rows())
            throw ValidationError("weights[" + std::to_string(i) + "]: length must match beta");
        w.weights.push_back(xi);
    }
    if (w.metric.rows() != w.metric.cols()) throw ValidationError("beta: must be square");
    if (static_cast<Eigen::Index>(w.weights.size()) != w.metric.rows() + 1)
        throw ValidationError("weights: expected " + std::to_string(w.metric.rows() + 1) + " covectors");
    return w;
}

Json shape_to_json(const ShapeInvariant& s) {
    Json j;
    j["q"] = mat_json(s.q, true);
    Json c = Json::object();
    for (const auto& [e, v] : s.c.monomials()) c[exponent_key(e)] = canonical_number(v);
    j["c"] = c;
    return j;
}

ShapeInvariant shape_from_json(const Json& j) {
    ShapeInvariant s;
    s.q = matrix_at(field(j, "q"), "q");
    if (s.q.rows() != s.q.cols()) throw ValidationError("q: must be square");
    const int m = static_cast<int>(s.q.rows());
    const Json& c = field(j, "c");
    if (!c.is_object()) throw ValidationError("c: expected an object of monomial coefficients");
    std::map<CubicPoly::Exponent, double> coeffs;
    for (auto it = c.begin(); it != c.end(); ++it) coeffs[parse_exponent(it.key(), m)] = number_at(it.value(), "c" + it.key());
    s.c = CubicPoly::from_monomials(m, coeffs);
    if (!is_positive_definite(s.q)) throw ValidationError("q: must be positive definite");
    return s;
}

Json coords3d_to_json(const CuspCoords3D& x) {
    Json j;
    j["w"] = {canonical_number(x.w.real()), canonical_number(x.w.imag())};
    j["h"] = {canonical_number(x.h.real()), canonical_number(x.h.imag())};
    j["r"] = {canonical_number(x.r.real()), canonical_number(x.r.imag())};
    return j;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError(path + ": malformed JSON (" + e.what() + ")");
    }
}

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace gcusp
