#include "gcusp/errors.hpp"
#include "gcusp/io.hpp"
#include "gcusp/sampling.hpp"
#include "gcusp/shape.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>

using namespace gcusp;
using Catch::Approx;

namespace {

Json params_json(int n, std::vector<double> lambda, std::vector<double> kappa) {
    Json j;
    j["n"] = n;
    j["lambda"] = lambda;
    j["kappa"] = kappa;
    return j;
}

std::string error_of(const Json& j) {
    try {
        build_from_json(j);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("parameter files round trip exactly", "[io][property]") {
    Rng rng(301);
    for (int s = 0; s < 60; ++s) {
        const MarkedCusp c = random_cusp(rng, 3 + s % 4);
        Json j = cusp_to_json(c);
        j.erase("rescaled");
        const Json again = cusp_to_json(build_from_json(Json::parse(j.dump())));
        INFO(j.dump());
        CHECK(again == j);
    }
}

TEST_CASE("missing B defaults to the identity", "[io]") {
    const MarkedCusp c = build_from_json(params_json(3, {0.5, 1, 2}, {0.5, 0.25}));
    CHECK(c.marking() == Mat::Identity(2, 2));
    const Json j = cusp_to_json(c);
    CHECK(j["type"] == 3);
    CHECK(j["flavor"] == "blown_up_weyl");
    CHECK_FALSE(j.contains("rescaled"));
}

TEST_CASE("non-unimodular marking is rescaled and recorded", "[io]") {
    Json j = params_json(3, {0, 1, 2}, {0, 0});
    j["B"] = {{2.0, 0.0}, {0.0, 1.0}};
    const Json out = cusp_to_json(build_from_json(j));
    REQUIRE(out.contains("rescaled"));
    CHECK(out["rescaled"].get<double>() == Approx(std::sqrt(2.0)));
}

TEST_CASE("validation errors name the field", "[io]") {
    Json j = params_json(3, {0.5, 1, 2}, {0.5, 0.25});
    j["kappa"] = {1, "x"};
    CHECK_THAT(error_of(j), Catch::Matchers::ContainsSubstring("kappa"));
    j["kappa"] = {1};
    CHECK_THAT(error_of(j), Catch::Matchers::ContainsSubstring("kappa: expected 2 entries"));
    j = params_json(3, {0.5, 1}, {0.5, 0.25});
    CHECK_THAT(error_of(j), Catch::Matchers::ContainsSubstring("lambda"));
    j = params_json(3, {0.5, 1, 2}, {0.5, 0.25});
    j["B"] = {{1, 0}};
    CHECK_THAT(error_of(j), Catch::Matchers::ContainsSubstring("B"));
    j = params_json(3, {0.5, 1, 2}, {0.5, 0.25});
    j["flavor"] = "weird";
    CHECK_THAT(error_of(j), Catch::Matchers::ContainsSubstring("flavor"));
    j = params_json(3, {0.5, 1, 2}, {0.5, 0.25});
    j.erase("n");
    CHECK_THAT(error_of(j), Catch::Matchers::ContainsSubstring("n: missing"));
    CHECK_THROWS_AS(build_from_json(Json::array()), ValidationError);
}

TEST_CASE("canonical numbers", "[io]") {
    CHECK(canonical_number(0.1 + 0.2) == 0.3);
    CHECK(canonical_number(1e-13) == 0.0);
    CHECK_FALSE(std::signbit(canonical_number(-1e-14)));
    CHECK(canonical_number(-2.5) == -2.5);
    CHECK(dump_canonical(Json{{"b", 1}, {"a", 2}}) == "{\n  \"a\": 2,\n  \"b\": 1\n}\n");
}

TEST_CASE("weight data and shape documents round trip", "[io][property]") {
    Rng rng(302);
    for (int s = 0; s < 30; ++s) {
        const MarkedCusp c = random_cusp(rng, 3 + s % 3);
        const WeightData w = weight_data(c);
        const Json wj = weight_data_to_json(w, c.type());
        CHECK(wj["type"] == c.type());
        CHECK(are_conjugate(c, realize_weight_data(weight_data_from_json(wj)), 1e-6));

        const ShapeInvariant j = theta_shape(c);
        const ShapeInvariant back = shape_from_json(Json::parse(shape_to_json(j).dump()));
        CHECK(shape_distance(j, back) <= 1e-11);
    }
}

TEST_CASE("malformed invariant documents are rejected", "[io]") {
    CHECK_THROWS_AS(shape_from_json(Json{{"q", {{1, 0}, {0, 1}}}, {"c", {{"(2,0)", 1.0}}}}), ValidationError);
    CHECK_THROWS_AS(shape_from_json(Json{{"q", {{1, 0}, {0, -1}}}, {"c", Json::object()}}), ValidationError);
    CHECK_THROWS_AS(weight_data_from_json(Json{{"beta", {{1, 0}, {0, 1}}}, {"weights", {{1, 0}}}}), ValidationError);
}

TEST_CASE("file errors", "[io]") {
    CHECK_THROWS_AS(read_json_file("/nonexistent/gcusp.json"), IoError);
    const auto path = std::filesystem::temp_directory_path() / "gcusp_io_bad.json";
    write_text_file(path.string(), "{\"n\": 3,");
    CHECK_THROWS_AS(read_json_file(path.string()), ValidationError);
    CHECK_THROWS_AS(write_text_file("/nonexistent/dir/out.json", "x"), IoError);
}
