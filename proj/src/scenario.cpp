#include "deco/scenario.hpp"

#include "deco/bounds.hpp"
#include "deco/decoherence.hpp"
#include "deco/envmodels.hpp"
#include "deco/errors.hpp"
#include "deco/io.hpp"
#include "deco/kernels.hpp"
#include "deco/oracle.hpp"
#include "deco/parallel.hpp"
#include "deco/version.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace deco {

namespace {

using json = nlohmann::ordered_json;

struct scenario_error : std::invalid_argument {
    scenario_error(const std::string& pointer, const std::string& msg)
        : std::invalid_argument(pointer + ": " + msg) {}
};

const json* find_at(const json& root, const std::string& pointer) {
    json::json_pointer p(pointer);
    if (!root.contains(p)) return nullptr;
    return &root.at(p);
}

const json& need(const json& root, const std::string& pointer) {
    const json* j = find_at(root, pointer);
    if (!j) throw scenario_error(pointer, "required field is missing");
    return *j;
}

double need_number(const json& root, const std::string& pointer) {
    const json& j = need(root, pointer);
    if (!j.is_number()) throw scenario_error(pointer, "expected a number");
    return j.get<double>();
}

double number_or(const json& root, const std::string& pointer, double fallback) {
    const json* j = find_at(root, pointer);
    if (!j) return fallback;
    if (!j->is_number()) throw scenario_error(pointer, "expected a number");
    return j->get<double>();
}

std::string need_string(const json& root, const std::string& pointer) {
    const json& j = need(root, pointer);
    if (!j.is_string()) throw scenario_error(pointer, "expected a string");
    return j.get<std::string>();
}

std::vector<double> make_grid(const json& root, const std::string& pointer) {
    const json& g = need(root, pointer);
    double start = need_number(root, pointer + "/start");
    double stop = need_number(root, pointer + "/stop");
    const json& jc = need(root, pointer + "/count");
    if (!jc.is_number_integer() || jc.get<long long>() < 1)
        throw scenario_error(pointer + "/count", "expected a positive integer");
    long long count = jc.get<long long>();
    if (count > 1'000'000) throw scenario_error(pointer + "/count", "grid too large");
    std::string spacing = g.contains("spacing") ? g.at("spacing").get<std::string>() : "linear";
    if (spacing != "linear" && spacing != "log")
        throw scenario_error(pointer + "/spacing", "expected \"linear\" or \"log\"");
    if (stop < start) throw scenario_error(pointer + "/stop", "stop must be >= start");
    if (spacing == "log" && start <= 0.0)
        throw scenario_error(pointer + "/start", "log spacing requires start > 0");

    std::vector<double> ts;
    ts.reserve(count);
    if (count == 1) {
        ts.push_back(start);
        return ts;
    }
    for (long long i = 0; i < count; ++i) {
        double u = static_cast<double>(i) / (count - 1);
        if (spacing == "linear")
            ts.push_back(start + u * (stop - start));
        else
            ts.push_back(start * std::exp(u * std::log(stop / start)));
    }
    return ts;
}

spectral_measure parse_measure(const json& root, const std::string& pointer) {
    const json& j = need(root, pointer);
    try {
        return io::measure_from_json(j);
    } catch (const std::exception& e) {
        throw scenario_error(pointer, e.what());
    }
}

reference_state parse_reference(const json& root, const std::string& pointer) {
    const json* j = find_at(root, pointer);
    if (!j) return reference_state::vacuum();
    try {
        return io::reference_from_json(*j);
    } catch (const std::exception& e) {
        throw scenario_error(pointer, e.what());
    }
}

quad_options parse_quad_options(const json& root) {
    quad_options q;
    q.rel_tol = number_or(root, "/tolerances/quad_rel", 1e-9);
    double budget = number_or(root, "/tolerances/quad_budget", 1e6);
    if (q.rel_tol <= 0.0) throw scenario_error("/tolerances/quad_rel", "must be positive");
    if (budget < 100) throw scenario_error("/tolerances/quad_budget", "must be at least 100");
    q.max_evals = static_cast<std::size_t>(budget);
    return q;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
}

struct command_context {
    const json& scenario;
    quad_options quad;
    double compare_tol;
    std::uint64_t seed;
    bool seed_provided;
    std::filesystem::path out;
    json& outcome; // filled by the command
};

// ---- classify ------------------------------------------------------------

int cmd_classify(command_context& ctx) {
    auto m = parse_measure(ctx.scenario, "/measure");
    auto rep = moments(m);
    ctx.outcome["moments"] = {{"m0", io::moment_to_json(rep.m0)},
                              {"m1", io::moment_to_json(rep.m1)},
                              {"m2", io::moment_to_json(rep.m2)}};
    ctx.outcome["coupling_ok"] = validate_coupling(m);
    ctx.outcome["ir_class"] = to_string(classify_ir(m));
    return 0;
}

// ---- curve ---------------------------------------------------------------

int cmd_curve(command_context& ctx) {
    auto m = parse_measure(ctx.scenario, "/measure");
    double alpha = need_number(ctx.scenario, "/alpha");
    double beta = need_number(ctx.scenario, "/beta");
    auto ref = parse_reference(ctx.scenario, "/reference");
    auto times = make_grid(ctx.scenario, "/grid");
    if (!validate_coupling(m))
        throw scenario_error("/measure", "coupling constraint 2*sqrt(m1) <= 1 violated");

    auto c = curve(m, alpha, beta, ref, times, ctx.quad);

    std::ostringstream csv;
    io::write_curve_csv(csv, c);
    write_text(ctx.out / "curve.csv", csv.str());
    write_text(ctx.out / "curve.json", io::curve_to_json(c).dump(2) + "\n");
    ctx.outcome["samples"] = c.times.size();
    ctx.outcome["files"] = {"curve.csv", "curve.json"};
    return 0;
}

// ---- recurrence ----------------------------------------------------------

int cmd_recurrence(command_context& ctx) {
    auto m = parse_measure(ctx.scenario, "/measure");
    if (m.kind() != spectral_measure::kind_t::discrete)
        throw scenario_error("/measure", "recurrence scan requires a discrete measure");
    double horizon = need_number(ctx.scenario, "/horizon");
    double threshold = need_number(ctx.scenario, "/threshold");
    auto found = recurrence_scan(m, horizon, threshold);
    ctx.outcome["recurrences"] = found;
    json rec;
    rec["measure"] = io::measure_to_json(m);
    rec["horizon"] = horizon;
    rec["threshold"] = threshold;
    rec["recurrences"] = found;
    write_text(ctx.out / "recurrence.json", rec.dump(2) + "\n");
    ctx.outcome["files"] = {"recurrence.json"};
    return 0;
}

// ---- fourier -------------------------------------------------------------

int cmd_fourier(command_context& ctx) {
    const json& je = need(ctx.scenario, "/environment");
    fourier_environment env = [&]() {
        try {
            return io::environment_from_json(je);
        } catch (const std::exception& e) {
            throw scenario_error("/environment", e.what());
        }
    }();
    auto svals = make_grid(ctx.scenario, "/grid");

    decoherence_curve c; // reused container: the s-grid plays the role of t
    c.times = svals;
    c.psi.resize(svals.size());
    c.phi.resize(svals.size());
    c.chi.resize(svals.size());
    c.params.measure_id = env.describe();
    c.params.reference_id = "fourier";
    parallel_for(svals.size(), [&](std::size_t i) {
        cplx v = chi_fourier(env, svals[i], 0, ctx.quad);
        c.chi[i] = v;
        c.psi[i] = svals[i] * svals[i]; // envelope argument of the commuting model
        c.phi[i] = -std::arg(v);
    });

    std::ostringstream csv;
    io::write_curve_csv(csv, c, "s");
    write_text(ctx.out / "fourier.csv", csv.str());
    write_text(ctx.out / "fourier.json", io::curve_to_json(c).dump(2) + "\n");
    ctx.outcome["files"] = {"fourier.csv", "fourier.json"};

    if (ctx.scenario.contains("gamma")) {
        double gamma = need_number(ctx.scenario, "/gamma");
        auto fit = decay_fit(env, gamma, svals, ctx.quad);
        ctx.outcome["decay_fit"] = {{"gamma", gamma},
                                    {"c_gamma", fit.c_gamma},
                                    {"argmax_s", fit.argmax_s},
                                    {"growing", fit.growing}};
    }
    return 0;
}

// ---- oracle --------------------------------------------------------------

truncated_model parse_model(const json& root) {
    const json& jm = need(root, "/model");
    truncated_model model;
    {
        const json& jl = need(root, "/model/f_eigenvalues");
        if (!jl.is_array() || jl.size() < 2)
            throw scenario_error("/model/f_eigenvalues", "expected an array of length >= 2");
        model.f_eigenvalues.resize(jl.size());
        for (std::size_t i = 0; i < jl.size(); ++i) model.f_eigenvalues(i) = jl[i].get<double>();
    }
    const json& jmodes = need(root, "/model/modes");
    if (!jmodes.is_array() || jmodes.empty() || jmodes.size() > 2)
        throw scenario_error("/model/modes", "expected an array of 1 or 2 modes");
    for (std::size_t k = 0; k < jmodes.size(); ++k) {
        std::string base = "/model/modes/" + std::to_string(k);
        model.modes.push_back(
            {need_number(root, base + "/frequency"), need_number(root, base + "/coupling")});
    }
    const json& jn = need(root, "/model/fock_cutoff");
    if (!jn.is_number_integer() || jn.get<int>() < 2)
        throw scenario_error("/model/fock_cutoff", "expected an integer >= 2");
    model.fock_cutoff = jn.get<int>();

    bool velocity = jm.contains("velocity_preset") && jm.at("velocity_preset").get<bool>();
    if (velocity) {
        model.hs_eigenvalues = 0.5 * model.f_eigenvalues.array().square();
    } else {
        const json& je = need(root, "/model/hs_eigenvalues");
        if (!je.is_array() || je.size() != static_cast<std::size_t>(model.f_eigenvalues.size()))
            throw scenario_error("/model/hs_eigenvalues", "length must match f_eigenvalues");
        model.hs_eigenvalues.resize(je.size());
        for (std::size_t i = 0; i < je.size(); ++i) model.hs_eigenvalues(i) = je[i].get<double>();
    }
    try {
        model.validate();
    } catch (const std::exception& e) {
        throw scenario_error("/model", e.what());
    }
    return model;
}

int cmd_oracle(command_context& ctx) {
    auto model = parse_model(ctx.scenario);
    auto ref = parse_reference(ctx.scenario, "/reference");
    auto times = make_grid(ctx.scenario, "/grid");
    const int d = model.system_dim();

    Eigen::MatrixXcd rho0;
    if (const json* jr = find_at(ctx.scenario, "/rho0")) {
        if (!jr->is_array() || jr->size() != static_cast<std::size_t>(d))
            throw scenario_error("/rho0", "expected a d x d real matrix");
        rho0.resize(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) rho0(i, j) = (*jr)[i][j].get<double>();
    } else {
        rho0 = Eigen::MatrixXcd::Constant(d, d, 1.0 / d); // uniform superposition
    }

    auto rhos = evolve_reduced(model, rho0, ref, times);

    double max_dev = 0.0;
    std::vector<double> dev(times.size(), 0.0);
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (i == j || std::abs(rho0(i, j)) < 1e-14) continue;
                cplx pred = analytic_offdiag_factor(model, i, j, ref, times[k], ctx.quad) *
                            rho0(i, j);
                dev[k] = std::max(dev[k], std::abs(rhos[k](i, j) - pred));
            }
        max_dev = std::max(max_dev, dev[k]);
    }

    fock_space fock(static_cast<int>(model.modes.size()), model.fock_cutoff);
    Eigen::MatrixXcd omega = environment_state(ref, model, fock);
    double top_mass = 0.0;
    for (Eigen::Index i = 0; i < fock.dim(); ++i)
        for (int kmode = 0; kmode < fock.n_modes(); ++kmode)
            if (fock.occupation(i, kmode) == fock.cutoff() - 1)
                top_mass += omega(i, i).real();

    // Truncation gate actually applied by environment_state.
    double max_shift = 0.0;
    for (int i = 0; i < d; ++i) {
        double shift = 0.0;
        for (const auto& md : model.modes) {
            double c = model.f_eigenvalues(i) * md.g / md.omega;
            shift += c * c;
        }
        max_shift = std::max(max_shift, shift);
    }
    double max_zeta_sq = 0.0;
    for (const auto& c : ref.components())
        max_zeta_sq = std::max(max_zeta_sq, std::norm(c.zeta));
    double gate_value = max_shift + max_zeta_sq * model.coupling_norm_sq();

    json report;
    report["times"] = times;
    report["deviation"] = dev;
    report["max_deviation"] = max_dev;
    report["tolerance"] = ctx.compare_tol;
    report["truncation"] = {{"fock_cutoff", model.fock_cutoff},
                            {"top_level_mass", top_mass},
                            {"gate_value", gate_value},
                            {"gate_limit", model.fock_cutoff / 4.0}};
    write_text(ctx.out / "oracle_report.json", report.dump(2) + "\n");

    ctx.outcome["max_deviation"] = max_dev;
    ctx.outcome["tolerance"] = ctx.compare_tol;
    ctx.outcome["files"] = {"oracle_report.json"};
    if (max_dev > ctx.compare_tol) {
        ctx.outcome["failure"] = "oracle deviation beyond tolerance";
        return 2;
    }
    return 0;
}

// ---- bound ---------------------------------------------------------------

int cmd_bound(command_context& ctx) {
    if (!ctx.seed_provided)
        throw scenario_error("/seed", "randomized bound runs require an explicit seed");
    need(ctx.scenario, "/bound");
    int d = static_cast<int>(number_or(ctx.scenario, "/bound/dimension", 20));
    int pairs = static_cast<int>(number_or(ctx.scenario, "/bound/pairs", 5));
    if (d < 2) throw scenario_error("/bound/dimension", "dimension must be >= 2");
    if (pairs < 1) throw scenario_error("/bound/pairs", "pairs must be >= 1");

    auto parse_interval = [&](const std::string& ptr) {
        const json& ji = need(ctx.scenario, ptr);
        if (!ji.is_array() || ji.size() != 2)
            throw scenario_error(ptr, "expected [lo, hi]");
        return interval{ji[0].get<double>(), ji[1].get<double>()};
    };
    interval d1 = parse_interval("/bound/delta1");
    interval d2 = parse_interval("/bound/delta2");

    std::string kind = need_string(ctx.scenario, "/bound/kernel");
    std::unique_ptr<dephasing_kernel> kernel;
    if (kind == "vanhove") {
        auto m = parse_measure(ctx.scenario, "/measure");
        kernel = std::make_unique<vanhove_kernel>(m, parse_reference(ctx.scenario, "/reference"),
                                                  ctx.quad);
    } else if (kind == "gaussian") {
        kernel = std::make_unique<gaussian_kernel>(number_or(ctx.scenario, "/bound/mean", 0.0),
                                                   number_or(ctx.scenario, "/bound/sigma", 1.0));
    } else {
        throw scenario_error("/bound/kernel", "expected \"vanhove\" or \"gaussian\"");
    }
    auto times = make_grid(ctx.scenario, "/grid");

    std::mt19937_64 rng(ctx.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(std::min(d1.lo, d2.lo), std::max(d1.hi, d2.hi));

    json pair_results = json::array();
    double worst_margin = -std::numeric_limits<double>::infinity();
    for (int p = 0; p < pairs; ++p) {
        sector_spec spec;
        spec.delta1 = d1;
        spec.delta2 = d2;
        spec.f_eigenvalues.resize(d);
        spec.hs_eigenvalues.resize(d);
        for (int i = 0; i < d; ++i) {
            spec.f_eigenvalues(i) = unif(rng);
            spec.hs_eigenvalues(i) = gauss(rng);
        }
        Eigen::MatrixXcd a(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) a(i, j) = cplx(gauss(rng), gauss(rng));
        a /= operator_norm(a);

        auto rep = verify_bound(a, spec, *kernel, times); // throws bound_violation
        worst_margin = std::max(worst_margin, rep.max_margin);
        pair_results.push_back({{"max_margin", rep.max_margin},
                                {"fit_const", rep.fit_const},
                                {"fit_gamma", rep.fit_gamma}});
        if (p == 0) {
            std::ostringstream csv;
            io::write_bound_csv(csv, rep);
            write_text(ctx.out / "bound.csv", csv.str());
            write_text(ctx.out / "bound.json", io::bound_to_json(rep).dump(2) + "\n");
        }
    }
    ctx.outcome["pairs"] = pair_results;
    ctx.outcome["worst_margin"] = worst_margin;
    ctx.outcome["violations"] = 0;
    ctx.outcome["files"] = {"bound.csv", "bound.json"};
    return 0;
}

const std::set<std::string> known_commands = {"classify", "curve", "recurrence",
                                              "fourier", "oracle", "bound"};

} // namespace

void validate_scenario(const json& scenario) {
    if (!scenario.is_object()) throw scenario_error("", "scenario must be a JSON object");
    std::string cmd = need_string(scenario, "/command");
    if (!known_commands.count(cmd))
        throw scenario_error("/command", "unknown command: " + cmd);
    // Structural validation per command (parsing without execution).
    if (cmd == "classify") parse_measure(scenario, "/measure");
    if (cmd == "curve") {
        parse_measure(scenario, "/measure");
        need_number(scenario, "/alpha");
        need_number(scenario, "/beta");
        parse_reference(scenario, "/reference");
        make_grid(scenario, "/grid");
    }
    if (cmd == "recurrence") {
        parse_measure(scenario, "/measure");
        need_number(scenario, "/horizon");
        need_number(scenario, "/threshold");
    }
    if (cmd == "fourier") {
        const json& je = need(scenario, "/environment");
        try {
            io::environment_from_json(je);
        } catch (const std::exception& e) {
            throw scenario_error("/environment", e.what());
        }
        make_grid(scenario, "/grid");
    }
    if (cmd == "oracle") {
        parse_model(scenario);
        parse_reference(scenario, "/reference");
        make_grid(scenario, "/grid");
    }
    if (cmd == "bound") {
        need(scenario, "/bound");
        need_string(scenario, "/bound/kernel");
        make_grid(scenario, "/grid");
    }
    parse_quad_options(scenario);
}

int run_scenario(const json& scenario, const run_options& opt, std::ostream& diag) {
    std::error_code ec;
    std::filesystem::create_directories(opt.out_dir, ec);
    if (ec) {
        diag << "cannot create output directory " << opt.out_dir << ": " << ec.message()
             << "\n";
        return 1;
    }
    if (opt.threads > 0) set_max_threads(opt.threads);

    json summary;
    summary["version"] = version;
    summary["parameters"] = scenario;
    json outcome;
    int code = 0;
    std::string cmd;

    try {
        validate_scenario(scenario);
        cmd = scenario.at("command").get<std::string>();
        summary["command"] = cmd;

        std::uint64_t seed = 0;
        if (opt.seed) {
            seed = *opt.seed;
        } else if (scenario.contains("seed")) {
            if (!scenario.at("seed").is_number_unsigned() &&
                !scenario.at("seed").is_number_integer())
                throw scenario_error("/seed", "expected an unsigned integer");
            seed = scenario.at("seed").get<std::uint64_t>();
        }
        summary["seed"] = seed;

        bool seed_provided = opt.seed.has_value() || scenario.contains("seed");
        command_context ctx{scenario, parse_quad_options(scenario),
                            opt.tolerance ? *opt.tolerance
                                          : number_or(scenario, "/tolerances/compare", 1e-6),
                            seed, seed_provided, opt.out_dir, outcome};

        if (cmd == "classify") code = cmd_classify(ctx);
        else if (cmd == "curve") code = cmd_curve(ctx);
        else if (cmd == "recurrence") code = cmd_recurrence(ctx);
        else if (cmd == "fourier") code = cmd_fourier(ctx);
        else if (cmd == "oracle") code = cmd_oracle(ctx);
        else if (cmd == "bound") code = cmd_bound(ctx);

        outcome["status"] = code == 0 ? "ok" : "assertion_failed";
    } catch (const bound_violation& e) {
        outcome["status"] = "assertion_failed";
        outcome["error"] = e.what();
        code = 2;
    } catch (const quadrature_error& e) {
        outcome["status"] = "input_error";
        outcome["error"] = e.what();
        code = 1;
    } catch (const inconclusive_classification& e) {
        outcome["status"] = "input_error";
        outcome["error"] = e.what();
        code = 1;
    } catch (const truncation_error& e) {
        outcome["status"] = "input_error";
        outcome["error"] = e.what();
        code = 1;
    } catch (const std::invalid_argument& e) {
        outcome["status"] = "input_error";
        outcome["error"] = e.what();
        code = 1;
    } catch (const json::exception& e) {
        outcome["status"] = "input_error";
        outcome["error"] = e.what();
        code = 1;
    } catch (const std::exception& e) {
        outcome["status"] = "error";
        outcome["error"] = e.what();
        code = 1;
    }

    summary["outcome"] = outcome;
    if (code != 0 && outcome.contains("error"))
        diag << "error: " << outcome["error"].get<std::string>() << "\n";
    try {
        write_text(opt.out_dir / "summary.json", summary.dump(2) + "\n");
    } catch (const std::exception& e) {
        diag << e.what() << "\n";
        return 1;
    }
    return code;
}

} // namespace deco
