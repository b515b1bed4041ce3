#include "bogo/config.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>

#include "bogo/asymptotics.hpp"
#include "bogo/errors.hpp"
#include "bogo/serialize.hpp"

namespace bogo {

using nlohmann::json;

namespace {

std::string join(const std::string& where, const std::string& key)
{
    return where.empty() ? key : where + "." + key;
}

void require_object(const json& j, const std::string& where)
{
    if (!j.is_object()) throw UsageError(where, "expected an object");
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where)
{
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) throw UsageError(join(where, key), "unknown field");
}

// Copies cfg[key] into out after checking its type, or the default when absent.
double number(const json& cfg, json& out, const std::string& key, const std::string& where,
              std::optional<double> fallback = std::nullopt)
{
    if (!cfg.contains(key)) {
        if (!fallback) throw UsageError(join(where, key), "missing field");
        out[key] = *fallback;
        return *fallback;
    }
    const json& v = cfg.at(key);
    if (!v.is_number()) throw UsageError(join(where, key), "expected a number");
    out[key] = v;
    return v.get<double>();
}

int integer(const json& cfg, json& out, const std::string& key, const std::string& where,
            std::optional<int> fallback = std::nullopt)
{
    if (!cfg.contains(key)) {
        if (!fallback) throw UsageError(join(where, key), "missing field");
        out[key] = *fallback;
        return *fallback;
    }
    const json& v = cfg.at(key);
    if (!v.is_number_integer()) throw UsageError(join(where, key), "expected an integer");
    out[key] = v;
    return v.get<int>();
}

bool boolean(const json& cfg, json& out, const std::string& key, const std::string& where, bool fallback)
{
    if (!cfg.contains(key)) {
        out[key] = fallback;
        return fallback;
    }
    const json& v = cfg.at(key);
    if (!v.is_boolean()) throw UsageError(join(where, key), "expected true or false");
    out[key] = v;
    return v.get<bool>();
}

std::string text(const json& cfg, json& out, const std::string& key, const std::string& where,
                 std::optional<std::string> fallback = std::nullopt)
{
    if (!cfg.contains(key)) {
        if (!fallback) throw UsageError(join(where, key), "missing field");
        out[key] = *fallback;
        return *fallback;
    }
    const json& v = cfg.at(key);
    if (!v.is_string()) throw UsageError(join(where, key), "expected a string");
    out[key] = v;
    return v.get<std::string>();
}

void positive(double v, const std::string& path)
{
    if (!(v > 0) || !std::isfinite(v)) throw UsageError(path, "must be positive");
}

void in_range(int v, int lo, int hi, const std::string& path)
{
    if (v < lo || v > hi)
        throw UsageError(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

// A number, a 1x1 scalar, or an n x n array of rows.
MatrixXd metric(const json& v, int n, const std::string& path)
{
    MatrixXd g(n, n);
    if (v.is_number()) {
        if (n != 1) throw UsageError(path, "expected an " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
        g(0, 0) = v.get<double>();
        return g;
    }
    if (!v.is_array() || static_cast<int>(v.size()) != n)
        throw UsageError(path, "expected " + std::to_string(n) + " rows");
    for (int i = 0; i < n; ++i) {
        const json& row = v[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw UsageError(path + "[" + std::to_string(i) + "]", "expected " + std::to_string(n) + " entries");
        for (int k = 0; k < n; ++k) {
            if (!row[static_cast<std::size_t>(k)].is_number())
                throw UsageError(path + "[" + std::to_string(i) + "]", "expected numbers");
            g(i, k) = row[static_cast<std::size_t>(k)].get<double>();
        }
    }
    return g;
}

// Entries are real numbers or [re, im] pairs; v_0 must be real.
FourierPotential potential(const json& v, const std::string& path)
{
    if (!v.is_array()) throw UsageError(path, "expected an array of Fourier coefficients");
    FourierPotential out;
    for (std::size_t p = 0; p < v.size(); ++p) {
        const std::string at = path + "[" + std::to_string(p) + "]";
        const json& c = v[p];
        if (c.is_number()) {
            out.emplace_back(c.get<double>(), 0.0);
        } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
            out.emplace_back(c[0].get<double>(), c[1].get<double>());
        } else {
            throw UsageError(at, "expected a number or [re, im]");
        }
        if (p == 0 && out[0].imag() != 0) throw UsageError(at, "the mean must be real");
    }
    if (out.empty()) out.emplace_back(0.0, 0.0);
    return out;
}

// Model parameters are checked here once so build_model can trust them.
json complete_model(const json& cfg)
{
    require_object(cfg, "");
    json out = json::object();
    const std::string model = text(cfg, out, "model", "");
    const double m = number(cfg, out, "m", "");
    positive(m, "m");
    const int cutoff = integer(cfg, out, "cutoff", "", 32);

    if (model == "torus") {
        reject_unknown(cfg, {"model", "m", "cutoff", "n", "a", "b", "g_plus", "g_minus", "q_plus", "q_minus"}, "");
        const int n = integer(cfg, out, "n", "", 1);
        in_range(n, 1, 3, "n");
        in_range(cutoff, 1, n == 1 ? 100000 : n == 2 ? 200 : 24, "cutoff");
        const bool scales = cfg.contains("a") || cfg.contains("b");
        const bool metrics = cfg.contains("g_plus") || cfg.contains("g_minus");
        if (scales && metrics) throw UsageError("a", "give either a, b or g_plus, g_minus");
        if (scales) {
            if (n != 1) throw UsageError("a", "scales a, b are only accepted for n = 1");
            positive(number(cfg, out, "a", "", 1.0), "a");
            positive(number(cfg, out, "b", "", 1.0), "b");
        } else {
            for (const char* key : {"g_plus", "g_minus"}) {
                if (cfg.contains(key)) {
                    metric(cfg.at(key), n, key);
                    out[key] = cfg.at(key);
                } else if (n == 1) {
                    out[key] = 1.0;
                } else {
                    out[key] = json::array();
                    for (int i = 0; i < n; ++i) {
                        json row = json::array();
                        for (int k = 0; k < n; ++k) row.push_back(i == k ? 1.0 : 0.0);
                        out[key].push_back(row);
                    }
                }
            }
        }
        number(cfg, out, "q_plus", "", 0.0);
        number(cfg, out, "q_minus", "", 0.0);
    } else if (model == "schrodinger_circle") {
        reject_unknown(cfg, {"model", "m", "cutoff", "v_plus", "v_minus"}, "");
        in_range(cutoff, 1, 2000, "cutoff");
        for (const char* key : {"v_plus", "v_minus"}) {
            if (cfg.contains(key)) {
                potential(cfg.at(key), key);
                out[key] = cfg.at(key);
            } else {
                out[key] = json::array({0.0});
            }
        }
    } else if (model == "dirac_circle") {
        reject_unknown(cfg, {"model", "m", "cutoff", "a", "b", "shift", "antiperiodic"}, "");
        in_range(cutoff, 1, 100000, "cutoff");
        positive(number(cfg, out, "a", "", 1.0), "a");
        positive(number(cfg, out, "b", "", 1.0), "b");
        number(cfg, out, "shift", "", 0.0);
        boolean(cfg, out, "antiperiodic", "", false);
    } else if (model == "constant_shift") {
        reject_unknown(cfg, {"model", "m", "cutoff", "a", "q", "M_sq"}, "");
        in_range(cutoff, 1, 100000, "cutoff");
        positive(number(cfg, out, "a", "", 1.0), "a");
        number(cfg, out, "q", "", 0.0);
        number(cfg, out, "M_sq", "", 1.0);
    } else {
        throw UsageError("model", "expected torus, schrodinger_circle, dirac_circle or constant_shift");
    }
    return out;
}

MatrixXd scalar(double v) { return MatrixXd::Constant(1, 1, v); }

}  // namespace

json complete_model_config(const json& cfg) { return complete_model(cfg); }

OperatorPair build_model(const json& raw)
{
    const json c = complete_model(raw);
    const std::string model = c["model"];
    const double m = c["m"];
    const int cutoff = c["cutoff"];
    try {
        if (model == "torus") {
            const int n = c["n"];
            MatrixXd gp, gm;
            if (c.contains("a")) {
                const double a = c["a"], b = c["b"];
                gp = scalar(a * a);
                gm = scalar(b * b);
            } else {
                gp = metric(c["g_plus"], n, "g_plus");
                gm = metric(c["g_minus"], n, "g_minus");
            }
            return build_torus_pair(n, gp, gm, c["q_plus"], c["q_minus"], cutoff, m);
        }
        if (model == "schrodinger_circle")
            return build_schrodinger_circle_pair(potential(c["v_plus"], "v_plus"), potential(c["v_minus"], "v_minus"),
                                                 cutoff, m);
        if (model == "dirac_circle")
            return build_dirac_circle_pair(c["a"], c["b"], c["shift"], c["antiperiodic"], cutoff, m);
        const double a = c["a"];
        const auto base = build_torus_pair(1, scalar(a * a), scalar(a * a), c["q"], c["q"], cutoff, m);
        return constant_shift_pair(base.minus, c["M_sq"], m, base.family);
    } catch (const DomainError& e) {
        // e.g. lambda + m^2 <= 0 for a deep potential
        throw UsageError(model, e.what());
    }
}

// ---- asymptotic coefficient runs ----

namespace {

json complete_geometry(const json& cfg)
{
    const std::string where = "geometry";
    require_object(cfg, where);
    reject_unknown(cfg, {"n", "g_plus", "g_minus", "volume", "fiber_dim", "dirac_fiber_dim"}, where);
    json out = json::object();
    const int n = integer(cfg, out, "n", where, 1);
    in_range(n, 1, 2, join(where, "n"));
    for (const char* key : {"g_plus", "g_minus"}) {
        if (!cfg.contains(key)) throw UsageError(join(where, key), "missing field");
        const MatrixXd g = metric(cfg.at(key), n, join(where, key));
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (g + g.transpose()));
        if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * g.cwiseAbs().maxCoeff() ||
            !(es.eigenvalues().minCoeff() > 0))
            throw UsageError(join(where, key), "must be symmetric positive definite");
        out[key] = cfg.at(key);
    }
    positive(number(cfg, out, "volume", where, std::pow(2 * M_PI, n)), join(where, "volume"));
    in_range(integer(cfg, out, "fiber_dim", where, 1), 1, 64, join(where, "fiber_dim"));
    in_range(integer(cfg, out, "dirac_fiber_dim", where, 2), 1, 64, join(where, "dirac_fiber_dim"));
    return out;
}

json complete_family(const json& cfg)
{
    const std::string where = "family";
    require_object(cfg, where);
    reject_unknown(cfg, {"kind", "scale", "M_sq", "m", "q", "antiperiodic"}, where);
    json out = json::object();
    const std::string kind = text(cfg, out, "kind", where);
    if (kind != "constant_shift" && kind != "dirac_shift")
        throw UsageError(join(where, "kind"), "expected constant_shift or dirac_shift");
    positive(number(cfg, out, "scale", where, 1.0), join(where, "scale"));
    number(cfg, out, "M_sq", where, 1.0);
    positive(number(cfg, out, "m", where, 1.0), join(where, "m"));
    const double q = number(cfg, out, "q", where, 0.0);
    if (kind == "dirac_shift" && q != 0) throw UsageError(join(where, "q"), "the Dirac shift has no base potential");
    boolean(cfg, out, "antiperiodic", where, false);
    return out;
}

void test_function(const std::string& name, MellinKind kind, const std::string& path)
{
    const auto& all = registered_test_functions();
    const auto it = std::find_if(all.begin(), all.end(), [&](const TestFunction& t) { return t.name == name; });
    if (it == all.end()) throw UsageError(path, "unknown test function '" + name + "'");
    if (it->kind != kind)
        throw UsageError(path, std::string("'") + name + "' is not an " + (kind == MellinKind::f_type ? "f" : "h") +
                                   "-type function");
}

json complete_expansion(const json& cfg)
{
    const std::string where = "expansion";
    require_object(cfg, where);
    reject_unknown(cfg, {"f", "h", "K", "eps"}, where);
    json out = json::object();
    const std::string f = text(cfg, out, "f", where, std::string("exp"));
    const std::string h = text(cfg, out, "h", where, std::string("bump_nu1.5"));
    test_function(f, MellinKind::f_type, join(where, "f"));
    test_function(h, MellinKind::h_type, join(where, "h"));
    in_range(integer(cfg, out, "K", where, 2), 1, 4, join(where, "K"));
    if (cfg.contains("eps")) {
        const json& e = cfg.at("eps");
        if (!e.is_array() || e.size() < 2) throw UsageError(join(where, "eps"), "expected at least two values");
        for (std::size_t i = 0; i < e.size(); ++i)
            if (!e[i].is_number() || !(e[i].get<double>() > 0) || !(e[i].get<double>() < 1))
                throw UsageError(join(where, "eps") + "[" + std::to_string(i) + "]", "expected a number in (0, 1)");
        out["eps"] = e;
    } else {
        out["eps"] = json::array({0.1, 0.05, 0.025});
    }
    return out;
}

double gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

json unsupported(const std::string& reason) { return json{{"unsupported", true}, {"reason", reason}}; }

}  // namespace

json complete_asympt_config(const json& cfg)
{
    require_object(cfg, "");
    reject_unknown(cfg, {"geometry", "family", "expansion"}, "");
    if (cfg.empty()) throw UsageError("geometry", "give at least one of geometry, family, expansion");
    json out = json::object();
    if (cfg.contains("geometry")) out["geometry"] = complete_geometry(cfg.at("geometry"));
    if (cfg.contains("family")) out["family"] = complete_family(cfg.at("family"));
    if (cfg.contains("expansion")) out["expansion"] = complete_expansion(cfg.at("expansion"));
    return out;
}

json run_asympt(const json& raw)
{
    const json c = complete_asympt_config(raw);
    json out = json::object();
    out["config"] = c;

    if (c.contains("geometry")) {
        const json& g = c["geometry"];
        const int n = g["n"];
        const MatrixXd gp = metric(g["g_plus"], n, "geometry.g_plus");
        const MatrixXd gm = metric(g["g_minus"], n, "geometry.g_minus");
        const auto bose = make_geometry(gp, gm, g["volume"], g["fiber_dim"]);
        const auto fermi = make_geometry(gp, gm, g["volume"], g["dirac_fiber_dim"]);
        const double c0 = c0_coefficient_b(bose), vb = V_b(bose);
        const double d0 = d0_coefficient_f(fermi), vf = V_f(fermi);
        // equal metrics give exact zeros; the gap is then reported as 0
        out["c0"] = {{"kernel_integral", c0}, {"momentum_integral", vb},
                     {"relative_gap", vb == 0 && c0 == 0 ? 0.0 : gap(c0, vb)}};
        out["d0"] = {{"kernel_integral", d0}, {"momentum_integral", vf},
                     {"relative_gap", vf == 0 && d0 == 0 ? 0.0 : gap(d0, vf)}};
    }

    if (c.contains("family")) {
        const json& f = c["family"];
        const auto kind = f["kind"] == "constant_shift" ? ShiftFamily::Kind::constant_shift
                                                        : ShiftFamily::Kind::dirac_shift;
        const auto fam = circle_shift_family(kind, f["scale"], f["M_sq"], f["m"], f["q"], f["antiperiodic"]);
        try {
            out["c1"] = {{"value", c1_coefficient_b(fam)}};
        } catch (const UnsupportedError& e) {
            out["c1"] = unsupported(e.what());
        }
        try {
            out["d1"] = {{"value", d1_coefficient_f(fam)}};
        } catch (const UnsupportedError& e) {
            out["d1"] = unsupported(e.what());
        }
    } else {
        out["c1"] = unsupported("no shift family given; c1 is only available for the constant shift");
        out["d1"] = unsupported("no shift family given; d1 is only available for the Dirac shift");
    }

    if (c.contains("expansion")) {
        const json& e = c["expansion"];
        const auto& f = find_test_function(e["f"]);
        const auto& h = find_test_function(e["h"]);
        const auto F = f.transform(), H = h.transform();
        const int K = e["K"];
        const auto diag = lemma_residuals(f.value, h.value, F, H, K, e["eps"].get<std::vector<double>>());
        out["expansion"] = to_json(lemma_expand(F, H, K), diag);
    }
    return out;
}

std::vector<double> parse_betas(const std::string& list)
{
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw UsageError("betas", "not a number: '" + item + "'");
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
        if (used != item.size()) throw UsageError("betas", "not a number: '" + item + "'");
        if (!(v > 0) || !std::isfinite(v)) throw UsageError("betas", "values must be positive");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("betas", "empty list");
    return out;
}

std::vector<Route> parse_routes(const std::string& s)
{
    if (s == "spectral") return {Route::spectral};
    if (s == "heat") return {Route::heat};
    if (s == "both") return {Route::spectral, Route::heat};
    throw UsageError("route", "expected spectral, heat or both");
}

Flavor natural_flavor(const OperatorPair& pair) { return pair.is_dirac() ? Flavor::fermi : Flavor::bose; }

}  // namespace bogo
