#include "gcusp/dim3.hpp"
#include "gcusp/errors.hpp"
#include "gcusp/invariants.hpp"
#include "gcusp/io.hpp"
#include "gcusp/limit.hpp"
#include "gcusp/shape.hpp"
#include "gcusp/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

using namespace gcusp;

namespace {

void emit(const std::string& text, const std::string& out) {
    if (out.empty())
        std::cout << text;
    else
        write_text_file(out, text);
}

std::vector<int> parse_dims(const std::string& s) {
    std::vector<int> dims;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            dims.push_back(std::stoi(part));
        } catch (const std::exception&) {
            throw ValidationError("dims: expected a comma-separated list of integers");
        }
    }
    if (dims.empty()) throw ValidationError("dims: empty list");
    return dims;
}

std::pair<int, int> parse_grid(const std::string& s) {
    const auto x = s.find('x');
    try {
        if (x == std::string::npos) throw std::invalid_argument("no x");
        std::size_t used1 = 0, used2 = 0;
        const int g1 = std::stoi(s.substr(0, x), &used1);
        const int g2 = std::stoi(s.substr(x + 1), &used2);
        if (used1 != x || used2 != s.size() - x - 1) throw std::invalid_argument("trailing");
        return {g1, g2};
    } catch (const std::exception&) {
        throw ValidationError("grid: expected g1xg2, e.g. 20x20");
    }
}

Vec parse_reals(const std::string& s, const char* name) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            v.push_back(std::stod(part));
        } catch (const std::exception&) {
            throw ValidationError(std::string(name) + ": expected comma-separated reals");
        }
    }
    return Eigen::Map<Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Json invariants_json(const MarkedCusp& c) {
    Json j;
    const CompleteInvariant eta = complete_invariant(c);
    Json chi = Json::array();
    for (const Vec& w : eta.character.weights) {
        Json row = Json::array();
        for (Eigen::Index i = 0; i < w.size(); ++i) row.push_back(canonical_number(w(i)));
        chi.push_back(row);
    }
    Json beta = Json::array();
    for (Eigen::Index i = 0; i < eta.metric.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < eta.metric.cols(); ++k) row.push_back(canonical_number(eta.metric(i, k)));
        beta.push_back(row);
    }
    j["eta"] = {{"character_weights", chi}, {"beta", beta}};

    const WeightData nu = weight_data(c);
    j["nu"] = weight_data_to_json(nu, c.type());

    const ShapeInvariant shape = shape_invariant(c, ShapeRoute::Fit);
    const ShapeInvariant from_weights = cubic_from_weights(nu);
    j["J"] = shape_to_json(shape);
    j["J"]["weights_route_residual"] = canonical_number(shape_distance(shape, from_weights));

    if (c.n() == 3) {
        j["whr"] = coords3d_to_json(coords_from_shape(shape_invariant(c, ShapeRoute::Algebraic)));
    } else {
        j["whr"] = {{"skipped", "n != 3"}};
    }
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized cusp toolkit: build cusps, compute invariants, recover parameters"};
    app.require_subcommand(1);

    double tol = 1e-8;
    std::uint64_t seed = 20240611;
    int samples = 40;
    std::string out;
    std::string grid = "20x20";
    std::string dims = "3,4,5";

    std::string build_in;
    auto* build = app.add_subcommand("build", "Canonical cusp file from a parameter file");
    build->add_option("params", build_in, "Parameter JSON")->required();
    build->add_option("--out", out, "Output path (default stdout)");

    std::string inv_in;
    auto* inv = app.add_subcommand("invariants", "eta, weight data, shape and (for n = 3) (w, h, r)");
    inv->add_option("cusp", inv_in, "Cusp or parameter JSON")->required();
    inv->add_option("--out", out, "Output path");

    std::string conj_a, conj_b;
    auto* conj = app.add_subcommand("conjugate", "Decide whether two cusps are conjugate");
    conj->add_option("a", conj_a, "First cusp JSON")->required();
    conj->add_option("b", conj_b, "Second cusp JSON")->required();
    conj->add_option("--tol", tol, "Invariant distance tolerance");
    conj->add_option("--out", out, "Output path");

    std::string rec_in;
    auto* rec = app.add_subcommand("recover", "Canonical cusp from weight data or a shape invariant");
    rec->add_option("invariant", rec_in, "Weight-data JSON (weights, beta) or shape JSON (q, c)")->required();
    rec->add_option("--out", out, "Output path");

    bool inject = false;
    auto* ver = app.add_subcommand("verify", "Run the verification battery");
    ver->add_option("--seed", seed, "Random seed");
    ver->add_option("--samples", samples, "Random cusps per dimension");
    ver->add_option("--dims", dims, "Comma-separated dimensions n");
    ver->add_option("--tol", tol, "Tolerance for the exact identities");
    ver->add_option("--out", out, "Output path");
    ver->add_flag("--inject-varpi-sign-error", inject, "Mutation test: negate the varpi closed form");

    std::string mesh_in, obj_out;
    double extent = 1.0;
    auto* mesh = app.add_subcommand("mesh", "Sample the boundary surface of a 3-dimensional cusp");
    mesh->add_option("params", mesh_in, "Parameter JSON with n = 3")->required();
    mesh->add_option("--grid", grid, "Grid size g1xg2");
    mesh->add_option("--extent", extent, "Half-width of the sampled square");
    mesh->add_option("--out", out, "CSV output path (default stdout)");
    mesh->add_option("--obj", obj_out, "Optional OBJ output path");

    std::string kappa_in = "1,1";
    double m_max = 10000;
    auto* lim = app.add_subcommand("limit-demo", "Diagonalizable cusps converging to a cusp of smaller type");
    lim->add_option("--kappa", kappa_in, "Comma-separated kappa in (0,1]");
    lim->add_option("--m-max", m_max, "Largest m (decades from 10)");
    lim->add_option("--out", out, "Output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*build) {
            emit(dump_canonical(cusp_to_json(build_from_json(read_json_file(build_in)))), out);
        } else if (*inv) {
            emit(dump_canonical(invariants_json(build_from_json(read_json_file(inv_in)))), out);
        } else if (*conj) {
            const MarkedCusp a = build_from_json(read_json_file(conj_a));
            const MarkedCusp b = build_from_json(read_json_file(conj_b));
            const double d = invariant_distance(complete_invariant(a), complete_invariant(b));
            Json j;
            j["conjugate"] = d <= tol;
            j["distance"] = d;
            emit(dump_canonical(j), out);
        } else if (*rec) {
            const Json j = read_json_file(rec_in);
            MarkedCusp c = j.contains("weights") ? realize_weight_data(weight_data_from_json(j))
                                                 : recover_cusp_from_shape(shape_from_json(j));
            Json r = cusp_to_json(c);
            if (j.contains("weights")) {
                const PsiParameter psi = recover_psi_from_invariant(complete_invariant(c));
                Json p = Json::array();
                for (Eigen::Index i = 0; i < psi.psi.size(); ++i) p.push_back(canonical_number(psi.psi(i)));
                r["psi"] = p;
            }
            emit(dump_canonical(r), out);
        } else if (*ver) {
            VerifyOptions o;
            o.seed = seed;
            o.samples = samples;
            o.dims = parse_dims(dims);
            o.tol = tol;
            o.inject_varpi_sign_error = inject;
            const VerificationReport rep = run_verification(o);
            emit(dump_canonical(rep.to_json()), out);
            for (const CheckResult& c : rep.checks)
                std::fprintf(stderr, "%-24s %-8s residual=%.3e tol=%.1e\n", c.name.c_str(),
                             c.informational ? "reported" : (c.passed ? "pass" : "FAIL"), c.max_residual, c.tolerance);
            return rep.passed() ? 0 : 2;
        } else if (*mesh) {
            const auto [g1, g2] = parse_grid(grid);
            const CuspSpec spec = cusp_spec_from_json(read_json_file(mesh_in));
            const Mesh m = sample_mesh(spec.params, g1, g2, extent);
            if (out.empty()) {
                std::printf("x1,x2,y\n");
                for (const auto& v : m.vertices) std::printf("%.17g,%.17g,%.17g\n", v[0], v[1], v[2]);
            } else {
                write_mesh_csv(m, out);
            }
            if (!obj_out.empty()) write_mesh_obj(m, obj_out);
        } else if (*lim) {
            const Vec kappa = parse_reals(kappa_in, "kappa");
            if (!(m_max >= 10)) throw ValidationError("m-max: must be at least 10");
            std::vector<double> ms;
            for (double m = 10; m <= m_max * (1 + 1e-12); m *= 10) ms.push_back(m);
            Json rows = Json::array();
            for (const LimitRow& r : limit_demo(kappa, ms))
                rows.push_back({{"m", r.m}, {"generator_distance", r.generator_distance}, {"invariant_distance", r.invariant_distance}});
            Json j;
            j["rows"] = rows;
            j["limit_type"] = build_marked_cusp(limit_point(kappa), Mat::Identity(kappa.size(), kappa.size())).type();
            emit(dump_canonical(j), out);
        }
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 2;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 3;
    }
    return 0;
}
