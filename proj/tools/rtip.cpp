#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rtip/errors.hpp"
#include "rtip/io.hpp"
#include "rtip/models.hpp"
#include "rtip/monotone.hpp"
#include "rtip/tipping.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitUndetermined = 3;
constexpr int kExitIntegrator = 4;
constexpr int kExitHypothesis = 5;

struct Settings {
    std::string model;
    std::string path;
    std::string out_dir = "out";
    std::string format = "csv";
    int jobs = 1;
    std::uint64_t seed = 0;

    double rate = 1.0;
    std::vector<double> rates;
    double lo = 0.0, hi = 0.0;
    bool have_lo = false, have_hi = false;
    double win_u = 0.0, win_v = 0.0;
    bool have_u = false, have_v = false;
    int grid = 15;
    std::string kind;

    double sh_lo = 0, sh_hi = 0, sh_center = 0, sh_width = 0;
    bool have_sh_lo = false, have_sh_hi = false, have_sh_center = false,
         have_sh_width = false;
    double sg_u = 0, sg_v = 0, sg_m = 10.0, sg_eta = 0.1;
    bool have_sg_u = false, have_sg_v = false, have_sg_m = false, have_sg_eta = false;
    std::vector<double> a_coeffs, b_coeffs;

    rtip::PullbackConfig pb;
};

json load_config(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw rtip::ConfigError("cannot open config file " + file);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw rtip::ConfigError("config " + file + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw rtip::ConfigError("config root must be a JSON object");
    return j;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok)
            throw rtip::ConfigError("unknown config key '" + it.key() + "' in " + where);
    }
}

double num_at(const json& j, const char* key) {
    if (!j.at(key).is_number())
        throw rtip::ConfigError(std::string("config key '") + key + "' must be a number");
    return j.at(key).get<double>();
}

// Fill settings from the config document wherever the flag was not given.
void merge_config(Settings& st, const json& cfg, const CLI::App& app) {
    check_keys(cfg,
               {"model", "path", "out_dir", "format", "jobs", "seed", "rate", "rates",
                "lo", "hi", "u", "v", "grid", "kind", "shift", "sigma", "a", "b",
                "eps_track", "t_settle", "s_offset", "eps_lambda", "tolerances"},
               "the top level");

    auto unset = [&](const char* flag) {
        const CLI::Option* o = app.get_option_no_throw(flag);
        if (o != nullptr && o->count() > 0) return false;
        for (const CLI::App* sub : app.get_subcommands()) {
            const CLI::Option* so = sub->get_option_no_throw(flag);
            if (so != nullptr && so->count() > 0) return false;
        }
        return true;
    };
    auto take_str = [&](const char* flag, const char* key, std::string& var) {
        if (cfg.contains(key) && unset(flag)) {
            if (!cfg.at(key).is_string())
                throw rtip::ConfigError(std::string("config key '") + key +
                                        "' must be a string");
            var = cfg.at(key).get<std::string>();
        }
    };
    auto take_num = [&](const char* flag, const char* key, double& var, bool* have = nullptr) {
        if (cfg.contains(key) && unset(flag)) {
            var = num_at(cfg, key);
            if (have) *have = true;
        }
    };
    auto take_vec = [&](const char* flag, const char* key, std::vector<double>& var) {
        if (cfg.contains(key) && unset(flag)) {
            if (!cfg.at(key).is_array())
                throw rtip::ConfigError(std::string("config key '") + key +
                                        "' must be an array of numbers");
            var.clear();
            for (const auto& e : cfg.at(key)) {
                if (!e.is_number())
                    throw rtip::ConfigError(std::string("config key '") + key +
                                            "' must be an array of numbers");
                var.push_back(e.get<double>());
            }
        }
    };

    take_str("--model", "model", st.model);
    take_str("--path", "path", st.path);
    take_str("--out-dir", "out_dir", st.out_dir);
    take_str("--format", "format", st.format);
    take_str("--kind", "kind", st.kind);
    if (st.format != "csv" && st.format != "json" && st.format != "svg")
        throw rtip::ConfigError("format must be csv, json, or svg");
    if (cfg.contains("jobs") && unset("--jobs")) {
        if (!cfg.at("jobs").is_number_integer())
            throw rtip::ConfigError("config key 'jobs' must be an integer");
        st.jobs = cfg.at("jobs").get<int>();
    }
    if (cfg.contains("seed") && unset("--seed")) {
        if (!cfg.at("seed").is_number_unsigned() && !cfg.at("seed").is_number_integer())
            throw rtip::ConfigError("config key 'seed' must be an integer");
        st.seed = cfg.at("seed").get<std::uint64_t>();
    }
    if (cfg.contains("grid") && unset("--grid")) {
        if (!cfg.at("grid").is_number_integer())
            throw rtip::ConfigError("config key 'grid' must be an integer");
        st.grid = cfg.at("grid").get<int>();
    }
    take_num("--rate", "rate", st.rate);
    take_vec("--rates", "rates", st.rates);
    take_num("--lo", "lo", st.lo, &st.have_lo);
    take_num("--hi", "hi", st.hi, &st.have_hi);
    take_num("--u", "u", st.win_u, &st.have_u);
    take_num("--v", "v", st.win_v, &st.have_v);
    take_vec("--a", "a", st.a_coeffs);
    take_vec("--b", "b", st.b_coeffs);
    take_num("--eps-track", "eps_track", st.pb.eps_track);
    take_num("--t-settle", "t_settle", st.pb.t_settle);
    take_num("--s-offset", "s_offset", st.pb.s_offset);
    take_num("--eps-lambda", "eps_lambda", st.pb.eps_lambda);

    if (cfg.contains("shift")) {
        const json& sh = cfg.at("shift");
        if (!sh.is_object()) throw rtip::ConfigError("config key 'shift' must be an object");
        check_keys(sh, {"lambda_minus", "lambda_plus", "center", "width"}, "'shift'");
        if (sh.contains("lambda_minus") && unset("--shift-lo")) {
            st.sh_lo = num_at(sh, "lambda_minus");
            st.have_sh_lo = true;
        }
        if (sh.contains("lambda_plus") && unset("--shift-hi")) {
            st.sh_hi = num_at(sh, "lambda_plus");
            st.have_sh_hi = true;
        }
        if (sh.contains("center") && unset("--shift-center")) {
            st.sh_center = num_at(sh, "center");
            st.have_sh_center = true;
        }
        if (sh.contains("width") && unset("--shift-width")) {
            st.sh_width = num_at(sh, "width");
            st.have_sh_width = true;
        }
    }
    if (cfg.contains("sigma")) {
        const json& sg = cfg.at("sigma");
        if (!sg.is_object()) throw rtip::ConfigError("config key 'sigma' must be an object");
        check_keys(sg, {"u", "v", "m", "eta"}, "'sigma'");
        if (sg.contains("u") && unset("--sigma-u")) {
            st.sg_u = num_at(sg, "u");
            st.have_sg_u = true;
        }
        if (sg.contains("v") && unset("--sigma-v")) {
            st.sg_v = num_at(sg, "v");
            st.have_sg_v = true;
        }
        if (sg.contains("m") && unset("--sigma-m")) {
            st.sg_m = num_at(sg, "m");
            st.have_sg_m = true;
        }
        if (sg.contains("eta") && unset("--sigma-eta")) {
            st.sg_eta = num_at(sg, "eta");
            st.have_sg_eta = true;
        }
    }
    if (cfg.contains("tolerances")) {
        const json& tl = cfg.at("tolerances");
        if (!tl.is_object())
            throw rtip::ConfigError("config key 'tolerances' must be an object");
        check_keys(tl, {"rel", "abs"}, "'tolerances'");
        if (tl.contains("rel") && unset("--rtol"))
            st.pb.integrator.tol.rel = num_at(tl, "rel");
        if (tl.contains("abs") && unset("--atol"))
            st.pb.integrator.tol.abs = num_at(tl, "abs");
    }
}

bool wants_sigma(const Settings& st) {
    return st.have_sg_u || st.have_sg_v || st.have_sg_m || st.have_sg_eta;
}

rtip::ModelSpec build_model(const Settings& st) {
    if (st.model.empty())
        throw rtip::ConfigError("a model is required (--model or 'model' in the config)");

    auto with_overrides = [&](const rtip::ShiftSpec& d) {
        return rtip::tanh_shift(st.have_sh_lo ? st.sh_lo : d.lambda_minus,
                                st.have_sh_hi ? st.sh_hi : d.lambda_plus,
                                st.have_sh_center ? st.sh_center : d.center,
                                st.have_sh_width ? st.sh_width : d.width);
    };

    if (st.model == "monotone-cubic") {
        rtip::Polynomial a{st.a_coeffs.empty() ? std::vector<double>{0.0, 0.5}
                                               : st.a_coeffs};
        rtip::Polynomial b{st.b_coeffs.empty() ? std::vector<double>{0.0, 1.0}
                                               : st.b_coeffs};
        rtip::ShiftSpec d;
        d.lambda_minus = 0.0;
        d.lambda_plus = 1.0;
        d.center = 0.0;
        d.width = 1.0;
        return rtip::monotone_cubic(a, b, with_overrides(d));
    }
    if (!st.a_coeffs.empty() || !st.b_coeffs.empty())
        throw rtip::ConfigError("--a/--b apply only to the monotone-cubic model");
    rtip::ModelSpec m = rtip::make_model(st.model);
    if (st.have_sh_lo || st.have_sh_hi || st.have_sh_center || st.have_sh_width)
        m.default_shift = with_overrides(m.default_shift.spec());
    return m;
}

rtip::ParameterShift effective_shift(const rtip::ModelSpec& model, const Settings& st) {
    rtip::ParameterShift s = model.default_shift;
    if (wants_sigma(st)) {
        if (!st.have_sg_u || !st.have_sg_v)
            throw rtip::ConfigError("a reparametrization needs at least sigma u and v");
        s = rtip::compose(s, rtip::build_reparametrization(st.sg_u, st.sg_v, st.sg_m,
                                                           st.sg_eta));
    }
    return s;
}

void write_json_doc(const Settings& st, const std::string& name,
                    const rtip::ordered_json& j) {
    rtip::write_file(fs::path(st.out_dir) / name, j.dump(2) + "\n");
}

int run_simulate(const Settings& st) {
    rtip::ModelSpec model = build_model(st);
    rtip::ParameterShift shift = effective_shift(model, st);
    rtip::TippingProblem problem = rtip::make_problem(model, shift, st.path);
    rtip::TippingVerdict verdict = rtip::classify_rate(problem, st.rate, st.pb);
    rtip::Trajectory traj = rtip::pullback_attractor(problem, st.rate, st.pb);

    write_json_doc(st, "verdict.json", rtip::verdict_json(verdict));
    rtip::write_file(fs::path(st.out_dir) / "trajectory.csv",
                     rtip::trajectory_csv(traj, &shift));
    for (const auto& p : problem.stable_paths)
        rtip::write_file(fs::path(st.out_dir) / ("path_" + p.id + ".csv"),
                         rtip::path_csv(p));
    rtip::write_file(fs::path(st.out_dir) / "phase.svg",
                     rtip::phase_svg(problem.stable_paths, &traj));
    if (st.format == "json") {
        write_json_doc(st, "trajectory.json", rtip::trajectory_json(traj));
        rtip::ordered_json paths = rtip::ordered_json::array();
        for (const auto& p : problem.stable_paths) paths.push_back(rtip::path_json(p));
        rtip::ordered_json doc;
        doc["paths"] = std::move(paths);
        write_json_doc(st, "paths.json", doc);
    }

    std::cout << "outcome=" << rtip::to_string(verdict.outcome);
    if (verdict.outcome == rtip::TippingOutcome::TipsToEquilibrium)
        std::cout << " destination=" << verdict.destination;
    std::cout << " rate=" << rtip::fmt17(st.rate)
              << " eps_track=" << rtip::fmt17(verdict.eps_track) << "\n";
    return verdict.outcome == rtip::TippingOutcome::Undetermined ? kExitUndetermined
                                                                 : kExitOk;
}

int run_sweep(const Settings& st) {
    if (st.rates.empty())
        throw rtip::ConfigError("sweep needs --rates (or 'rates' in the config)");
    rtip::ModelSpec model = build_model(st);
    rtip::ParameterShift shift = effective_shift(model, st);
    rtip::TippingProblem problem = rtip::make_problem(model, shift, st.path);
    auto entries = rtip::sweep_rates(problem, st.rates, st.pb, st.jobs);

    rtip::write_file(fs::path(st.out_dir) / "sweep.csv", rtip::sweep_csv(entries));
    write_json_doc(st, "sweep.json", rtip::sweep_json(entries));
    if (st.format == "svg")
        rtip::write_file(fs::path(st.out_dir) / "phase.svg",
                         rtip::phase_svg(problem.stable_paths, nullptr));

    bool undetermined = false;
    for (const auto& e : entries) {
        std::cout << "rate=" << rtip::fmt17(e.rate) << " outcome="
                  << rtip::to_string(e.verdict.outcome);
        if (e.verdict.outcome == rtip::TippingOutcome::TipsToEquilibrium)
            std::cout << " destination=" << e.verdict.destination;
        std::cout << "\n";
        undetermined =
            undetermined || e.verdict.outcome == rtip::TippingOutcome::Undetermined;
    }
    return undetermined ? kExitUndetermined : kExitOk;
}

int run_critical_rate(const Settings& st) {
    if (!st.have_lo || !st.have_hi)
        throw rtip::ConfigError("critical-rate needs --lo and --hi (or config lo/hi)");
    rtip::ModelSpec model = build_model(st);
    rtip::ParameterShift shift = effective_shift(model, st);
    rtip::TippingProblem problem = rtip::make_problem(model, shift, st.path);
    rtip::CriticalRateResult res = rtip::critical_rate(problem, st.lo, st.hi, st.pb);
    write_json_doc(st, "critical_rate.json", rtip::critical_rate_json(res));
    std::cout << "bracket=[" << rtip::fmt17(res.lo) << ", " << rtip::fmt17(res.hi)
              << "] lo=" << rtip::to_string(res.verdict_lo.outcome)
              << " hi=" << rtip::to_string(res.verdict_hi.outcome)
              << " evaluations=" << res.evaluations << "\n";
    return kExitOk;
}

int run_report(const Settings& st) {
    if (st.kind.empty())
        throw rtip::ConfigError("report needs --kind (fbs-check, monotone-check, "
                                "fis-verify, or force-tipping)");
    rtip::ModelSpec model = build_model(st);
    rtip::ParameterShift shift = effective_shift(model, st);

    if (st.kind == "fbs-check") {
        rtip::FbsReport rep = rtip::fbs_check(model, shift, st.path, st.grid, st.pb);
        write_json_doc(st, "fbs.json", rtip::fbs_json(rep));
        if (st.format == "csv")
            rtip::write_file(fs::path(st.out_dir) / "fbs.csv", rtip::fbs_csv(rep));
        std::cout << "forward_basin_stable=" << (rep.forward_basin_stable() ? "true" : "false")
                  << " pairs=" << rep.pairs << " violations=" << rep.violations.size()
                  << "\n";
        return kExitOk;
    }

    if (st.kind == "monotone-check") {
        std::string tracked_id = st.path.empty() ? model.default_path_id : st.path;
        std::string saddle_id, other_id;
        for (const auto& e : model.equilibria) {
            if (!e.stable && saddle_id.empty()) saddle_id = e.id;
            if (e.stable && e.id != tracked_id && other_id.empty()) other_id = e.id;
        }
        if (saddle_id.empty())
            throw rtip::ConfigError("model '" + model.name + "' has no unstable branch");

        rtip::EquilibriumPath tracked = rtip::continue_named_path(model, shift, tracked_id);
        rtip::EquilibriumPath saddle = rtip::continue_named_path(model, shift, saddle_id);

        const int n = model.field.dim;
        rtip::Vec lo(n, std::numeric_limits<double>::infinity());
        rtip::Vec hi(n, -std::numeric_limits<double>::infinity());
        auto absorb = [&](const rtip::EquilibriumPath& p) {
            for (const auto& smp : p.samples)
                for (int i = 0; i < n; ++i) {
                    lo[i] = std::min(lo[i], smp.x[i]);
                    hi[i] = std::max(hi[i], smp.x[i]);
                }
        };
        absorb(tracked);
        absorb(saddle);
        for (int i = 0; i < n; ++i) {
            double pad = 0.1 * (hi[i] - lo[i]) + 1e-6;
            lo[i] -= pad;
            hi[i] += pad;
        }
        rtip::MonotoneCheck mc = rtip::check_monotone(
            model.field, lo, hi, {shift.lambda_minus(), shift.lambda_plus()});

        rtip::ordered_json doc;
        doc["model"] = model.name;
        doc["tracked"] = tracked_id;
        doc["saddle"] = saddle_id;
        doc["cooperative"] = rtip::monotone_check_json(mc);
        if (!mc.monotone) {
            doc["guarantee"] = nullptr;
            doc["no_tipping"] = nullptr;
        } else {
            try {
                doc["guarantee"] = rtip::guarantee_json(
                    rtip::guaranteed_tipping_scan(model.field, shift, tracked, saddle));
            } catch (const rtip::HypothesisFailed& e) {
                rtip::ordered_json g;
                g["finding"] = "HypothesisFailed";
                g["detail"] = e.what();
                doc["guarantee"] = std::move(g);
            }
            if (other_id.empty()) {
                doc["no_tipping"] = nullptr;
            } else {
                rtip::EquilibriumPath other =
                    rtip::continue_named_path(model, shift, other_id);
                try {
                    rtip::NoTippingCertificate cert = rtip::no_tipping_check(
                        model.field, shift, tracked, saddle, other);
                    rtip::ordered_json nt = rtip::no_tipping_json(cert);
                    nt["certified"] = true;
                    doc["no_tipping"] = std::move(nt);
                } catch (const rtip::Error& e) {
                    rtip::ordered_json nt;
                    nt["certified"] = false;
                    nt["reason"] = e.what();
                    doc["no_tipping"] = std::move(nt);
                }
            }
        }
        write_json_doc(st, "monotone_check.json", doc);
        std::cout << "cooperative=" << (mc.monotone ? "true" : "false") << "\n";
        return kExitOk;
    }

    if (st.kind == "fis-verify") {
        if (model.name != "monotone-cubic")
            throw rtip::ConfigError(
                "fis-verify has a box construction only for monotone-cubic");
        std::string id = st.path.empty() ? model.default_path_id : st.path;
        rtip::FisBoxGrid boxes = rtip::build_fis_boxes_cubic(model, shift, id);
        rtip::EquilibriumPath path = rtip::continue_named_path(model, shift, id);
        rtip::FisOptions fopts;
        fopts.seed = st.pb.seed;
        fopts.t_settle = st.pb.t_settle;
        rtip::FISCertificate cert =
            rtip::verify_fis(model.field, shift, path, boxes, model.monotone, fopts);
        write_json_doc(st, "fis.json", rtip::fis_json(cert));
        rtip::write_file(fs::path(st.out_dir) / "boxes.csv", rtip::boxes_csv(boxes));
        std::cout << "fis_holds=" << (cert.holds ? "true" : "false") << " boxes="
                  << cert.boxes << "\n";
        return cert.holds ? kExitOk : kExitUndetermined;
    }

    if (st.kind == "force-tipping") {
        if (!st.have_u || !st.have_v)
            throw rtip::ConfigError("force-tipping needs --u and --v (or config u/v)");
        if (wants_sigma(st))
            throw rtip::ConfigError(
                "force-tipping searches reparametrizations itself; do not pass sigma");
        rtip::ForcedTippingResult res =
            rtip::force_tipping(model, model.default_shift, st.path, st.win_u, st.win_v,
                                st.pb);
        write_json_doc(st, "force.json", rtip::force_json(res));
        if (res.found) {
            rtip::ParameterShift forced = rtip::compose(
                model.default_shift,
                rtip::build_reparametrization(res.sigma.u, res.sigma.v, res.sigma.m,
                                              res.sigma.eta));
            rtip::TippingProblem fp = rtip::make_problem(model, forced, st.path);
            rtip::Trajectory traj = rtip::pullback_attractor(fp, res.rate, st.pb);
            rtip::write_file(fs::path(st.out_dir) / "trajectory.csv",
                             rtip::trajectory_csv(traj, &forced));
        }
        if (res.found)
            std::cout << "found=true m=" << rtip::fmt17(res.sigma.m)
                      << " eta=" << rtip::fmt17(res.sigma.eta)
                      << " outcome=" << rtip::to_string(res.verdict.outcome) << "\n";
        else
            std::cout << "found=false attempts=" << res.attempts.size() << "\n";
        return res.found ? kExitOk : kExitUndetermined;
    }

    throw rtip::ConfigError("unknown report kind '" + st.kind + "'");
}

}  // namespace

int main(int argc, char** argv) {
    Settings st;
    std::string config_file;

    CLI::App app{"rate-induced tipping toolkit: pullback attractors, tracking "
                 "verdicts, forcing and exclusion certificates"};
    app.require_subcommand(1);

    app.add_option("--model,-m", st.model,
                   "model name (lorenz63, homoclinic2d, monotone-cubic, saddle-node-1d)");
    app.add_option("--config,-c", config_file, "JSON config file");
    app.add_option("--path,-p", st.path, "tracked branch id (default: model's default)");
    app.add_option("--out-dir,-o", st.out_dir, "artifact directory")->capture_default_str();
    app.add_option("--format,-f", st.format, "artifact format")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    app.add_option("--jobs,-j", st.jobs, "worker threads for sweeps")->capture_default_str();
    app.add_option("--seed", st.seed, "seed for sampling-based certificates")->capture_default_str();
    app.add_option("--shift-lo", st.sh_lo, "shift limit at s -> -inf")
        ->each([&st](const std::string&) { st.have_sh_lo = true; });
    app.add_option("--shift-hi", st.sh_hi, "shift limit at s -> +inf")
        ->each([&st](const std::string&) { st.have_sh_hi = true; });
    app.add_option("--shift-center", st.sh_center, "shift center")
        ->each([&st](const std::string&) { st.have_sh_center = true; });
    app.add_option("--shift-width", st.sh_width, "shift width")
        ->each([&st](const std::string&) { st.have_sh_width = true; });
    app.add_option("--sigma-u", st.sg_u, "reparametrization window start")
        ->each([&st](const std::string&) { st.have_sg_u = true; });
    app.add_option("--sigma-v", st.sg_v, "reparametrization window end")
        ->each([&st](const std::string&) { st.have_sg_v = true; });
    app.add_option("--sigma-m", st.sg_m, "reparametrization fast slope")
        ->capture_default_str()
        ->each([&st](const std::string&) { st.have_sg_m = true; });
    app.add_option("--sigma-eta", st.sg_eta, "reparametrization ramp width")
        ->capture_default_str()
        ->each([&st](const std::string&) { st.have_sg_eta = true; });
    app.add_option("--a", st.a_coeffs, "cubic coefficient map a (ascending powers)")
        ->delimiter(',');
    app.add_option("--b", st.b_coeffs, "cubic coefficient map b (ascending powers)")
        ->delimiter(',');
    app.add_option("--eps-track", st.pb.eps_track, "tracking resolution (0 = auto)")->capture_default_str();
    app.add_option("--t-settle", st.pb.t_settle, "frozen settling horizon")->capture_default_str();
    app.add_option("--s-offset", st.pb.s_offset, "extra s beyond saturation")->capture_default_str();
    app.add_option("--eps-lambda", st.pb.eps_lambda, "shift saturation tolerance")->capture_default_str();
    app.add_option("--rtol", st.pb.integrator.tol.rel, "relative tolerance")->capture_default_str();
    app.add_option("--atol", st.pb.integrator.tol.abs, "absolute tolerance")->capture_default_str();

    CLI::App* sim = app.add_subcommand("simulate", "classify one rate and record the run");
    sim->add_option("--rate,--r,-r", st.rate, "sweep rate")->capture_default_str();
    CLI::App* swp = app.add_subcommand("sweep", "classify a list of rates");
    swp->add_option("--rates", st.rates, "comma-separated rates")->delimiter(',');
    CLI::App* crit = app.add_subcommand("critical-rate",
                                        "bisect the tracking boundary in [lo, hi]");
    crit->add_option("--lo", st.lo, "tracking-side rate")->each([&](const std::string&) {
        st.have_lo = true;
    });
    crit->add_option("--hi", st.hi, "non-tracking-side rate")->each([&](const std::string&) {
        st.have_hi = true;
    });
    CLI::App* rep = app.add_subcommand("report", "certificate and scan reports");
    rep->add_option("--kind,-k", st.kind,
                    "fbs-check | monotone-check | fis-verify | force-tipping");
    rep->add_option("--grid", st.grid, "grid points for fbs-check")->capture_default_str();
    rep->add_option("--u", st.win_u, "forcing window start")->each([&](const std::string&) {
        st.have_u = true;
    });
    rep->add_option("--v", st.win_v, "forcing window end")->each([&](const std::string&) {
        st.have_v = true;
    });
    for (CLI::App* sub : {sim, swp, crit, rep}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (!config_file.empty()) merge_config(st, load_config(config_file), app);
        st.pb.seed = st.seed;

        if (sim->parsed()) return run_simulate(st);
        if (swp->parsed()) return run_sweep(st);
        if (crit->parsed()) return run_critical_rate(st);
        return run_report(st);
    } catch (const rtip::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const rtip::SameVerdict& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const rtip::InvalidInterval& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const rtip::DegenerateWindow& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const rtip::ParameterRegimeViolation& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const rtip::HypothesisNotMet& e) {
        std::cerr << "hypothesis not met: " << e.what() << "\n";
        return kExitHypothesis;
    } catch (const rtip::HypothesisFailed& e) {
        std::cerr << "hypothesis failed: " << e.what() << "\n";
        return kExitHypothesis;
    } catch (const rtip::StepSizeUnderflow& e) {
        std::cerr << "integrator failure: " << e.what() << "\n";
        return kExitIntegrator;
    } catch (const rtip::NonFiniteState& e) {
        std::cerr << "integrator failure: " << e.what() << "\n";
        return kExitIntegrator;
    } catch (const rtip::NoConvergence& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitIntegrator;
    } catch (const rtip::ConvergenceFailure& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitIntegrator;
    } catch (const rtip::BranchLost& e) {
        std::cerr << "continuation failure: " << e.what() << "\n";
        return kExitIntegrator;
    } catch (const rtip::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
