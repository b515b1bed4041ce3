// Command-line front end. Exit codes: 0 success, 1 numeric failure, 2 usage error.
// The thread count for sweeps comes from BOGO_THREADS.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bogo/bogolyubov.hpp"
#include "bogo/config.hpp"
#include "bogo/errors.hpp"
#include "bogo/serialize.hpp"
#include "bogo/specfun.hpp"
#include "bogo/verify.hpp"

using namespace bogo;
using nlohmann::json;

namespace {

constexpr int exit_numeric = 1;
constexpr int exit_usage = 2;

void emit(const std::string& text, const std::string& out)
{
    if (out.empty() || out == "-")
        std::cout << text;
    else
        write_text_file(out, text);
}

bool ends_with(const std::string& s, const std::string& tail)
{
    return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

struct ModelArgs {
    std::string config, out;
    bool print_config = false;
};

int cmd_model(const ModelArgs& a)
{
    const json cfg = read_json_file(a.config);
    if (a.print_config) {
        std::cout << complete_model_config(cfg).dump(2) << "\n";
        return 0;
    }
    if (a.out.empty()) throw UsageError("out", "an output path is required");
    const OperatorPair pair = build_model(cfg);
    save_pair(pair, a.out);
    const auto report = validate(pair);
    json summary = {{"modes_plus", pair.plus.size()},
                    {"modes_minus", pair.minus.size()},
                    {"identity_overlap", pair.overlap.is_identity},
                    {"validation", to_json(report)}};
    std::cout << summary.dump(2) << "\n";
    return report.ok ? 0 : exit_numeric;
}

struct SweepArgs {
    std::string pair, betas, route = "spectral", flavor, out, format;
};

int cmd_sweep(const SweepArgs& a)
{
    const OperatorPair pair = load_pair(a.pair);
    const auto betas = parse_betas(a.betas);
    const auto routes = parse_routes(a.route);
    Flavor flavor = natural_flavor(pair);
    if (a.flavor == "bose")
        flavor = Flavor::bose;
    else if (a.flavor == "fermi")
        flavor = Flavor::fermi;
    else if (!a.flavor.empty())
        throw UsageError("flavor", "expected bose or fermi");
    if (flavor == Flavor::fermi && !pair.is_dirac())
        throw UsageError("flavor", "the fermionic invariant needs a Dirac pair");

    const auto sweep = run_sweep(pair, flavor, betas, routes, default_thread_count());
    std::string format = a.format;
    if (format.empty()) format = ends_with(a.out, ".json") ? "json" : "csv";
    if (format == "csv")
        emit(sweep_csv(sweep), a.out);
    else if (format == "json")
        emit(sweep_json(sweep).dump(2) + "\n", a.out);
    else
        throw UsageError("format", "expected csv or json");
    for (const auto& r : sweep.records)
        if (!r.ok) std::cerr << "beta " << r.beta << " (" << to_string(r.route) << "): " << r.message << "\n";
    return sweep.ok() ? 0 : exit_numeric;
}

struct AsymptArgs {
    std::string config, out;
    bool print_config = false;
};

int cmd_asympt(const AsymptArgs& a)
{
    const json cfg = read_json_file(a.config);
    if (a.print_config) {
        std::cout << complete_asympt_config(cfg).dump(2) << "\n";
        return 0;
    }
    emit(run_asympt(cfg).dump(2) + "\n", a.out);
    return 0;
}

struct VerifyArgs {
    std::string level = "quick", out, only;
    std::vector<std::string> faults;
    bool timing = false;
};

int cmd_verify(const VerifyArgs& a)
{
    const VerifyLevel level = parse_level(a.level);
    std::vector<int> only;
    std::stringstream ids(a.only);
    for (std::string id; std::getline(ids, id, ',');) {
        std::size_t used = 0;
        int c = 0;
        try {
            c = std::stoi(id, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != id.size() || c < 1 || c > 12) throw UsageError("only", "criterion ids are 1..12");
        only.push_back(c);
    }
    for (const auto& f : a.faults) {
        // k:factor multiplies B_{2k}
        const auto colon = f.find(':');
        int k = 0;
        double factor = 0;
        try {
            if (colon == std::string::npos) throw std::invalid_argument(f);
            k = std::stoi(f.substr(0, colon));
            factor = std::stod(f.substr(colon + 1));
        } catch (const std::exception&) {
            throw UsageError("inject-fault", "expected k:factor, got '" + f + "'");
        }
        if (k < 1) throw UsageError("inject-fault", "k must be >= 1");
        inject_bernoulli_fault(k, factor);
    }
    const auto report = run_verification(level, only, default_thread_count());
    clear_bernoulli_faults();
    for (const auto& r : report.results) std::cout << summary_line(r) << "\n";
    std::cout << (report.passed() ? "all criteria passed" : "some criteria failed") << "\n";
    if (!a.out.empty()) write_text_file(a.out, to_json(report, a.timing).dump(2) + "\n");
    return report.passed() ? 0 : exit_numeric;
}

struct KernelArgs {
    std::string kind = "bose", out;
    double t_min = 0.01, t_max = 100;
    int points = 200;
};

int cmd_kernel(const KernelArgs& a)
{
    KernelKind kind;
    if (a.kind == "bose")
        kind = KernelKind::bose;
    else if (a.kind == "fermi")
        kind = KernelKind::fermi;
    else if (a.kind == "zero")
        kind = KernelKind::zero;
    else
        throw UsageError("kind", "expected bose, fermi or zero");
    if (!(a.t_min > 0) || !(a.t_max > a.t_min)) throw UsageError("t-min", "need 0 < t-min < t-max");
    if (a.points < 2) throw UsageError("points", "need at least 2 points");

    std::ostringstream os;
    os << "t,h\n";
    char buf[64];
    for (int i = 0; i < a.points; ++i) {
        const double t = a.t_min * std::pow(a.t_max / a.t_min, double(i) / (a.points - 1));
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", t, eval_h(kind, t));
        os << buf;
    }
    emit(os.str(), a.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bogolyubov invariants of operator pairs"};
    app.require_subcommand(1);

    ModelArgs model;
    auto* m = app.add_subcommand("model", "build an operator pair from a model config");
    m->add_option("--config", model.config, "model config (JSON, comments allowed)")->required();
    m->add_option("--out", model.out, "pair file to write");
    m->add_flag("--print-config", model.print_config, "print the completed config and exit");

    SweepArgs sweep;
    auto* s = app.add_subcommand("sweep", "B(beta) over a list of betas");
    s->add_option("pair", sweep.pair, "pair file")->required();
    s->add_option("--betas", sweep.betas, "comma-separated betas")->required();
    s->add_option("--route", sweep.route, "spectral, heat or both");
    s->add_option("--flavor", sweep.flavor, "bose or fermi (default from the pair)");
    s->add_option("--out", sweep.out, "output file (stdout if absent)");
    s->add_option("--format", sweep.format, "csv or json (default from the file extension)");

    AsymptArgs asympt;
    auto* a = app.add_subcommand("asympt", "leading coefficients and expansion diagnostics");
    a->add_option("--config", asympt.config, "asymptotics config")->required();
    a->add_option("--out", asympt.out, "report file (stdout if absent)");
    a->add_flag("--print-config", asympt.print_config, "print the completed config and exit");

    VerifyArgs verify;
    auto* v = app.add_subcommand("verify", "run the acceptance criteria");
    v->add_option("--level", verify.level, "quick or full");
    v->add_option("--out", verify.out, "JSON summary file");
    v->add_option("--only", verify.only, "comma-separated criterion ids");
    v->add_option("--inject-fault", verify.faults, "k:factor, multiply B_2k by factor");
    v->add_flag("--timing", verify.timing, "include run times in the JSON summary");

    KernelArgs kernel;
    auto* k = app.add_subcommand("kernel", "(t, h(t)) table on a log grid");
    k->add_option("--kind", kernel.kind, "bose, fermi or zero");
    k->add_option("--t-min", kernel.t_min);
    k->add_option("--t-max", kernel.t_max);
    k->add_option("--points", kernel.points);
    k->add_option("--out", kernel.out, "output file (stdout if absent)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (*m) return cmd_model(model);
        if (*s) return cmd_sweep(sweep);
        if (*a) return cmd_asympt(asympt);
        if (*v) return cmd_verify(verify);
        if (*k) return cmd_kernel(kernel);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return exit_numeric;
    }
    return exit_usage;
}
