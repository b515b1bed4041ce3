#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "bogo/errors.hpp"
#include "bogo/serialize.hpp"

using namespace bogo;
using nlohmann::json;

namespace {

MatrixXd scalar(double v) { return MatrixXd::Constant(1, 1, v); }

std::string temp_path(const char* name)
{
    return (std::filesystem::temp_directory_path() / name).string();
}

void same_pair(const OperatorPair& a, const OperatorPair& b)
{
    CHECK(a.plus.kind == b.plus.kind);
    CHECK(a.plus.values == b.plus.values);
    CHECK(a.minus.values == b.minus.values);
    CHECK(a.plus.fiber_dim == b.plus.fiber_dim);
    CHECK(a.m == b.m);
    CHECK(a.overlap.is_identity == b.overlap.is_identity);
    CHECK(MatrixXd(a.overlap.entries) == MatrixXd(b.overlap.entries));
    CHECK(a.omega_plus == b.omega_plus);
}

std::string field_of(const json& doc)
{
    try {
        pair_from_json(doc);
    } catch (const UsageError& e) {
        return e.field;
    }
    return "";
}

}  // namespace

TEST_CASE("pair round trip is lossless")
{
    const double m = 0.1 + 0.2;  // not representable in short decimal
    for (const auto& p : {build_torus_pair(1, scalar(4), scalar(1), 0.3, 0, 7, m),
                          build_schrodinger_circle_pair({0.0, {0.4, 0.1}}, {0.2}, 9, 1.0),
                          build_dirac_circle_pair(1, 1, 0.7, true, 5, m)}) {
        const auto q = pair_from_json(to_json(p));
        same_pair(p, q);
        // a second dump is byte-identical
        CHECK(to_json(q).dump() == to_json(p).dump());
    }
}

TEST_CASE("file round trip")
{
    const auto p = build_torus_pair(1, scalar(4), scalar(1), 0, 0, 64, 1.0);
    const auto path = temp_path("bogo_pair_roundtrip.json");
    save_pair(p, path);
    const auto q = load_pair(path);
    same_pair(p, q);
    REQUIRE(q.geometry);
    CHECK(q.geometry->g_plus(0, 0) == 4.0);
    REQUIRE(q.family);
    CHECK(q.family->cutoff == 64);
    std::remove(path.c_str());
}

TEST_CASE("permutation overlaps are stored sparsely")
{
    MatrixXd g(2, 2);
    g << 3, 0, 0, 1;
    const auto p = build_torus_pair(2, g, MatrixXd::Identity(2, 2), 0, 0, 3, 1.0);
    const json j = to_json(p);
    CHECK(j["overlap"].contains("sparse"));
    same_pair(p, pair_from_json(j));
}

TEST_CASE("malformed documents name the field")
{
    const json good = to_json(build_torus_pair(1, scalar(1), scalar(1), 0, 0, 2, 1.0));
    json d = good;
    d.erase("m");
    CHECK(field_of(d) == "m");
    d = good;
    d["values_plus"][1] = "x";
    CHECK(field_of(d).rfind("values_plus", 0) == 0);
    d = good;
    d["format"] = "something else";
    CHECK(field_of(d) == "format");
    d = good;
    d["m"] = -1;
    CHECK(field_of(d) == "m");
}

TEST_CASE("geometry documents")
{
    const json j = {{"g_plus", 4}, {"g_minus", 1}, {"volume", 6.0}, {"fiber_dim", 2}};
    const auto g = geometry_from_json(j);
    CHECK(g.n == 1);
    CHECK(g.fiber_dim == 2);
    CHECK(g.vielbein_plus(0, 0) == doctest::Approx(2.0));
    const auto back = geometry_from_json(to_json(g));
    CHECK(back.g_plus == g.g_plus);
    CHECK(back.volume == g.volume);
    json bad = j;
    bad.erase("volume");
    try {
        geometry_from_json(bad);
        FAIL("expected a usage error");
    } catch (const UsageError& e) {
        CHECK(e.field == "geometry.volume");
    }
}

TEST_CASE("config files allow comments")
{
    const auto path = temp_path("bogo_comment.json");
    write_text_file(path, "{\n  // mass\n  \"m\": 1.5 /* inline */\n}\n");
    CHECK(read_json_file(path)["m"] == 1.5);
    write_text_file(path, "{ \"m\": }");
    CHECK_THROWS_AS(read_json_file(path), UsageError);
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_json_file(temp_path("bogo_missing_file.json")), UsageError);
}

TEST_CASE("validation report")
{
    const auto r = validate(build_schrodinger_circle_pair({0.0, 1.0}, {0.0}, 16, 2.0));
    const json j = to_json(r);
    CHECK(j["ok"] == r.ok);
    CHECK(j.contains("worst_interior_row_deviation"));
}
