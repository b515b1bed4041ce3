#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bogo/config.hpp"
#include "bogo/errors.hpp"

using namespace bogo;
using nlohmann::json;

namespace {

std::string model_field(const json& cfg)
{
    try {
        build_model(cfg);
    } catch (const UsageError& e) {
        return e.field;
    }
    return "";
}

std::string asympt_field(const json& cfg)
{
    try {
        complete_asympt_config(cfg);
    } catch (const UsageError& e) {
        return e.field;
    }
    return "";
}

}  // namespace

TEST_CASE("model defaults are listed")
{
    const json c = complete_model_config({{"model", "torus"}, {"m", 1.0}});
    CHECK(c["n"] == 1);
    CHECK(c["cutoff"] == 32);
    CHECK(c["q_plus"] == 0.0);
    CHECK(c.contains("g_plus"));
    const json d = complete_model_config({{"model", "dirac_circle"}, {"m", 2.0}});
    CHECK(d["antiperiodic"] == false);
    CHECK(d["shift"] == 0.0);
    // completion is idempotent
    CHECK(complete_model_config(c) == c);
}

TEST_CASE("models build")
{
    const auto t = build_model({{"model", "torus"}, {"m", 1.0}, {"a", 2.0}, {"b", 1.0}, {"cutoff", 64}});
    CHECK(t.plus.size() == 129);
    CHECK(t.overlap.is_identity);
    CHECK(natural_flavor(t) == Flavor::bose);

    const auto d = build_model({{"model", "dirac_circle"}, {"m", 1.0}, {"shift", 0.5}, {"cutoff", 8}});
    CHECK(natural_flavor(d) == Flavor::fermi);

    const auto s = build_model(
        {{"model", "schrodinger_circle"}, {"m", 2.0}, {"v_plus", {0.0, {1.0, 0.0}}}, {"cutoff", 8}});
    CHECK(s.plus.values[0] < 0);

    const auto c = build_model({{"model", "constant_shift"}, {"m", 1.0}, {"M_sq", 0.5}, {"cutoff", 4}});
    for (Index i = 0; i < c.plus.size(); ++i) CHECK(c.plus.values[i] - c.minus.values[i] == doctest::Approx(0.5));
}

TEST_CASE("model errors name the field")
{
    CHECK(model_field({{"model", "torus"}}) == "m");
    CHECK(model_field({{"m", 1.0}}) == "model");
    CHECK(model_field({{"model", "sphere"}, {"m", 1.0}}) == "model");
    CHECK(model_field({{"model", "torus"}, {"m", 1.0}, {"colour", 1}}) == "colour");
    CHECK(model_field({{"model", "torus"}, {"m", -1.0}}) == "m");
    CHECK(model_field({{"model", "torus"}, {"m", 1.0}, {"cutoff", 1.5}}) == "cutoff");
    CHECK(model_field({{"model", "torus"}, {"m", 1.0}, {"n", 2}, {"g_plus", 1.0}}) == "g_plus");
    CHECK(model_field({{"model", "torus"}, {"m", 1.0}, {"n", 2}, {"g_plus", {{1, 0}, {0, 1}}}, {"g_minus", {{1, 0}}}}) ==
          "g_minus");
    CHECK(model_field({{"model", "schrodinger_circle"}, {"m", 1.0}, {"v_plus", {{0.0, 1.0}}}}).rfind("v_plus", 0) ==
          0);
    CHECK(model_field({{"model", "dirac_circle"}, {"m", 1.0}, {"antiperiodic", "yes"}}) == "antiperiodic");
}

TEST_CASE("asympt configuration")
{
    const json c = complete_asympt_config({{"geometry", {{"g_plus", 4}, {"g_minus", 1}}}});
    CHECK(c["geometry"]["n"] == 1);
    CHECK(c["geometry"]["volume"] == doctest::Approx(2 * M_PI));
    CHECK(c["geometry"]["fiber_dim"] == 1);
    CHECK(c["geometry"]["dirac_fiber_dim"] == 2);
    const json e = complete_asympt_config({{"expansion", json::object()}});
    CHECK(e["expansion"]["f"] == "exp");
    CHECK(e["expansion"]["K"] == 2);
    CHECK(e["expansion"]["eps"].size() == 3);

    CHECK(asympt_field(json::object()) == "geometry");
    CHECK(asympt_field({{"geometry", {{"g_plus", 4}}}}) == "geometry.g_minus");
    CHECK(asympt_field({{"geometry", {{"g_plus", -4}, {"g_minus", 1}}}}) == "geometry.g_plus");
    CHECK(asympt_field({{"family", {{"kind", "other"}}}}) == "family.kind");
    CHECK(asympt_field({{"family", {{"kind", "dirac_shift"}, {"q", 0.5}}}}) == "family.q");
    CHECK(asympt_field({{"expansion", {{"h", "exp"}}}}) == "expansion.h");
    CHECK(asympt_field({{"expansion", {{"K", 9}}}}) == "expansion.K");
    CHECK(asympt_field({{"expansion", {{"eps", {0.1, -0.1}}}}}).rfind("expansion.eps", 0) == 0);
}

TEST_CASE("asympt results")
{
    const json r = run_asympt({{"geometry", {{"g_plus", 4}, {"g_minus", 1}}}});
    CHECK(r["c0"]["kernel_integral"].get<double>() == doctest::Approx(M_PI / 4 - 0.5).epsilon(1e-10));
    CHECK(r["c0"]["relative_gap"].get<double>() <= 1e-10);
    CHECK(r["d0"]["relative_gap"].get<double>() <= 1e-10);
    CHECK(r["c1"]["unsupported"] == true);
    CHECK(r["d1"]["unsupported"] == true);
    CHECK_FALSE(r.contains("expansion"));

    const json eq = run_asympt({{"geometry", {{"g_plus", 2}, {"g_minus", 2}}}});
    CHECK(eq["c0"]["kernel_integral"] == 0.0);
    CHECK(eq["c0"]["relative_gap"] == 0.0);

    const json d = run_asympt({{"family", {{"kind", "dirac_shift"}}}});
    CHECK(d["d1"]["value"].get<double>() == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(d["c1"]["unsupported"] == true);
    CHECK(d["c1"]["reason"].is_string());
    const json s = run_asympt({{"family", {{"kind", "constant_shift"}}}});
    CHECK(s["c1"]["value"] == 0.0);
    CHECK(s["d1"]["unsupported"] == true);

    const json x = run_asympt({{"expansion", {{"h", "bump_nu2"}}}});
    CHECK(x["expansion"]["case"] == "positive_integer");
    CHECK(x["expansion"]["residual_diagnostics"]["worst_ratio_error"].get<double>() <= 0.1);
}

TEST_CASE("beta and route lists")
{
    CHECK(parse_betas("0.5,1,2") == std::vector<double>{0.5, 1, 2});
    CHECK(parse_betas("1e-2") == std::vector<double>{0.01});
    CHECK_THROWS_AS(parse_betas("0.5,x"), UsageError);
    CHECK_THROWS_AS(parse_betas("1,-2"), UsageError);
    CHECK_THROWS_AS(parse_betas("1.5abc"), UsageError);
    CHECK_THROWS_AS(parse_betas(""), UsageError);
    CHECK(parse_routes("spectral") == std::vector<Route>{Route::spectral});
    CHECK(parse_routes("both") == std::vector<Route>{Route::spectral, Route::heat});
    CHECK_THROWS_AS(parse_routes("fast"), UsageError);
}
