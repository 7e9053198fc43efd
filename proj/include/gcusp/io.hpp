#pragma once

#include "gcusp/cubic.hpp"
#include "gcusp/cusp_groups.hpp"
#include "gcusp/dim3.hpp"
#include "gcusp/invariants.hpp"

#include <json.hpp>

#include <string>

namespace gcusp {

using Json = nlohmann::json;

// Parameter file: {"n", "lambda", "kappa", "B", "orthonormalized"} plus an
// optional "flavor" ("blown_up_weyl" or "diagonal"). Errors name the field.
struct CuspSpec {
    BlownUpWeylPoint params;
    Mat marking;
    bool orthonormalized = false;
};

CuspSpec cusp_spec_from_json(const Json& j);
MarkedCusp build_from_json(const Json& j);

// Canonical cusp file: normalized marking and lambda at full precision, so
// feeding it back to build reproduces it exactly. Adds "rescaled" when the
// input marking was not unimodular.
Json cusp_to_json(const MarkedCusp& c);

// Rounds to the nearest multiple of 1e-12 and clears negative zero.
double canonical_number(double x);

// {"weights", "beta", "varpi", "type"}; weights in canonical order.
Json weight_data_to_json(const WeightData& w, int type);
WeightData weight_data_from_json(const Json& j);

// {"q", "c": {"(a,b,...)": coefficient}}.
Json shape_to_json(const ShapeInvariant& s);
ShapeInvariant shape_from_json(const Json& j);

Json coords3d_to_json(const CuspCoords3D& x);

Json read_json_file(const std::string& path);
// Sorted keys, two-space indent, trailing newline.
std::string dump_canonical(const Json& j);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace gcusp
