#include "ww/cli.hpp"

#include "ww/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace ww {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json field_json(const Field& f)
{
    json re = json::array(), im = json::array();
    for (const auto& c : f.coeffs()) {
        re.push_back(c.real());
        im.push_back(c.imag());
    }
    return {{"coeffs_re", re}, {"coeffs_im", im}};
}

Field field_from(const Grid& g, const json& j, const char* name)
{
    const auto& re = j.at("coeffs_re");
    const auto& im = j.at("coeffs_im");
    if (static_cast<int>(re.size()) != g.n || static_cast<int>(im.size()) != g.n)
        throw InvalidInput(std::string("checkpoint field ") + name + " does not match the grid size");
    std::vector<cplx> c(g.n);
    for (int k = 0; k < g.n; ++k) c[k] = cplx(re[k].get<double>(), im[k].get<double>());
    return Field::from_coeffs(g, std::move(c));
}

void write_text(const fs::path& p, const std::string& s)
{
    std::ofstream f(p, std::ios::binary);
    if (!f) throw InvalidInput("cannot write '" + p.string() + "'");
    f << s;
}

fs::path out_dir(const RunConfig& cfg)
{
    fs::path d(cfg.out_dir);
    fs::create_directories(d);
    return d;
}

int numerical_exit(StopReason r)
{
    switch (r) {
    case StopReason::Completed:
    case StopReason::ResolutionLost: return kExitOk;
    default: return kExitNumerical;
    }
}

void say(bool quiet, const std::string& msg)
{
    if (!quiet) std::cout << msg << '\n';
}

}  // namespace

std::string format_real(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string checkpoint_to_json(const WaveState& s, long step)
{
    json j;
    j["format"] = "wwave-checkpoint";
    j["version"] = 1;
    j["t"] = s.t;
    j["step"] = step;
    j["mode"] = s.is_line() ? "line" : "disc";
    j["g"] = s.mode.g;
    j["grid"] = {{"n", s.grid().n}, {"offset", s.grid().offset}, {"cutoff", s.grid().cutoff}};
    json labels = json::array();
    for (const auto& l : s.labels) labels.push_back({{"alpha", l.alpha}, {"h", l.h}});
    j["labels"] = labels;
    j["Z"] = field_json(s.Z);
    j["Ztbar"] = field_json(s.Ztbar);
    return j.dump(1);
}

Checkpoint checkpoint_from_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("checkpoint is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("format") != "wwave-checkpoint") throw InvalidInput("not a wwave checkpoint");
        const auto& gj = j.at("grid");
        const Grid g = Grid::make(gj.at("n").get<int>(), gj.at("offset").get<double>(), gj.at("cutoff").get<int>());
        Checkpoint c;
        c.step = j.at("step").get<long>();
        c.state.t = j.at("t").get<double>();
        const std::string mode = j.at("mode").get<std::string>();
        if (mode == "line")
            c.state.mode = ModeTag::line(j.at("g").get<double>());
        else if (mode == "disc")
            c.state.mode = ModeTag::disc();
        else
            throw InvalidInput("checkpoint mode must be disc or line");
        c.state.Z = field_from(g, j.at("Z"), "Z");
        c.state.Ztbar = field_from(g, j.at("Ztbar"), "Ztbar");
        for (const auto& l : j.at("labels")) c.state.labels.push_back({l.at("alpha").get<double>(), l.at("h").get<double>()});
        return c;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed checkpoint: ") + e.what());
    }
}

void save_checkpoint(const std::string& path, const WaveState& s, long step)
{
    write_text(path, checkpoint_to_json(s, step));
}

Checkpoint load_checkpoint(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidInput("cannot open checkpoint '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return checkpoint_from_json(ss.str());
}

std::string csv_header(bool pinch)
{
    std::string h = "t,dt,E1,E2,E3,Ea,E,Ecal,blowup_B,holo_residual";
    if (pinch) h += ",d_pinch";
    return h + ",stop_reason\n";
}

std::string csv_row(const EnergyReport& e, double dt, const double* d_pinch, const std::string& stop)
{
    std::string r;
    for (double x : {e.t, dt, e.E1, e.E2, e.E3, e.Ea, e.E, e.Ecal, e.blowup_B, e.holo_residual}) {
        r += format_real(x);
        r += ',';
    }
    if (d_pinch) r += format_real(*d_pinch) + ',';
    return r + stop + '\n';
}

double pinch_distance(const WaveState& s)
{
    if (s.labels.size() < 2) throw InvalidInput("pinch distance needs two tracked labels");
    return std::abs(interface_at(s, s.labels[0].h) - interface_at(s, s.labels[1].h));
}

WaveState initial_state(const RunConfig& cfg, long* step0)
{
    if (step0) *step0 = 0;
    const Grid g = cfg.grid();
    switch (cfg.init) {
    case InitKind::Trivial: return disc_trivial(g, cfg.vel);
    case InitKind::Smooth: return disc_smooth(g, cfg.R, cfg.delta, cfg.m, cfg.vel_modes);
    case InitKind::Crest: return disc_crest_pinch(g, cfg.crest).state;
    case InitKind::LineWave: return line_wave(g, cfg.g, cfg.a, cfg.k, cfg.vel);
    case InitKind::Random: return random_smooth_disc(g, cfg.seed);
    case InitKind::Checkpoint: {
        Checkpoint c = load_checkpoint(cfg.checkpoint_in);
        if (step0) *step0 = c.step;
        return c.state;
    }
    }
    throw InvalidInput("unknown initial state");
}

int cmd_simulate(const RunConfig& cfg, bool quiet)
{
    if (cfg.checkpoint_every % cfg.output_every != 0)
        throw ConfigError(0, "checkpoint.every", "must be a multiple of output.every");
    long step0 = 0;
    const WaveState s0 = initial_state(cfg, &step0);
    const std::string why = validate(s0);
    if (!why.empty()) throw InvalidInput("invalid initial state: " + why);
    const fs::path dir = out_dir(cfg);
    const bool pinch = s0.labels.size() >= 2;
    StepControl ctrl = cfg.ctrl;
    ctrl.observe_every = cfg.output_every;

    std::vector<EnergyReport> reps;
    std::vector<double> dts, ds;
    auto obs = [&](const WaveState& s, long step, double dt) {
        const EnergyReport e = energy_report(s);
        const double d = pinch ? pinch_distance(s) : 0.0;
        reps.push_back(e);
        dts.push_back(dt);
        ds.push_back(d);
        if (cfg.checkpoint_every > 0 && step > 0 && step % cfg.checkpoint_every == 0)
            save_checkpoint((dir / ("checkpoint_" + std::to_string(step) + ".json")).string(), s, step);
    };
    const EvolveResult r = evolve(s0, ctrl, obs, step0);
    std::string csv = csv_header(pinch);
    for (size_t k = 0; k < reps.size(); ++k) {
        const bool last = k + 1 == reps.size();
        csv += csv_row(reps[k], dts[k], pinch ? &ds[k] : nullptr, last ? to_string(r.reason) : "");
    }
    write_text(dir / "timeseries.csv", csv);
    save_checkpoint((dir / "final.json").string(), r.state, r.steps);
    say(quiet, "simulate: " + to_string(r.reason) + " at t=" + format_real(r.state.t) + " after " +
                   std::to_string(r.steps) + " steps");
    return numerical_exit(r.reason);
}

int cmd_verify(const RunConfig& cfg, bool quiet)
{
    const WaveState s = initial_state(cfg);
    const double tol = cfg.verify_tol > 0.0 ? cfg.verify_tol : identity_tolerance(s.grid().n);
    std::map<int, WaveState> ladder;
    if (cfg.verify_refinement && cfg.init != InitKind::Checkpoint) {
        RunConfig c = cfg;
        for (int m = std::max(32, s.grid().n / 4); m <= s.grid().n; m *= 2) {
            c.n_grid = m;
            ladder.emplace(m, initial_state(c));
        }
    }
    set_hilbert_corruption(cfg.hilbert_corruption);
    json report;
    bool ok = true;
    try {
        if (cfg.verify_identities) {
            const auto res = run_identity_suite(s, "config", tol);
            json arr = json::array();
            for (const auto& r : res) {
                arr.push_back({{"name", r.name}, {"max_abs_gap", r.max_abs_gap}, {"rel_gap", r.rel_gap},
                               {"tol", r.tol}, {"passed", r.passed}, {"n", r.n}, {"state", r.state}});
                say(quiet, (r.passed ? "pass " : "FAIL ") + r.name + " rel_gap=" + format_real(r.rel_gap));
            }
            ok = ok && all_passed(res);
            report["identities"] = arr;
        }
        if (!ladder.empty()) {
            std::vector<int> sizes;
            for (const auto& [m, st] : ladder) sizes.push_back(m);
            const auto rows = refinement_check([&](int m) { return ladder.at(m); }, sizes);
            json arr = json::array();
            for (const auto& row : rows) {
                arr.push_back({{"name", row.name}, {"n", row.n}, {"gap", row.gap}, {"decays", row.decays}});
                if (!row.decays) say(quiet, "FAIL refinement " + row.name);
                ok = ok && row.decays;
            }
            report["refinement"] = arr;
        }
    } catch (...) {
        set_hilbert_corruption(0.0);
        throw;
    }
    set_hilbert_corruption(0.0);
    report["passed"] = ok;
    write_text(out_dir(cfg) / "verify.json", report.dump(1));
    say(quiet, ok ? "verify: all identities within tolerance" : "verify: failures above");
    return ok ? kExitOk : kExitVerify;
}

int cmd_scale_check(const RunConfig& cfg, bool quiet)
{
    if (cfg.mode != Mode::Line) throw ConfigError(0, "mode", "scale-check is supported in line mode only");
    const WaveState s = initial_state(cfg);
    std::vector<ScalingParams> list = cfg.scale_list;
    if (list.empty()) list = {{2, 1, 0.5}, {2, 1, 1.0}, {1, 2, 0.0}};
    json arr = json::array();
    bool ok = true;
    for (const auto& p : list) {
        json item = {{"p", p.p}, {"q", p.q}, {"s", p.s}};
        const ScaledState sc = scale_state(s, p);
        if (sc.lossy) {
            item["lossy"] = true;
            say(quiet, "FAIL lam=" + format_real(p.lam()) + " s=" + format_real(p.s) + ": lossy dilation");
            ok = false;
            arr.push_back(item);
            continue;
        }
        item["lossy"] = false;
        auto dump = [](const std::vector<CovarianceGap>& gaps) {
            json a = json::array();
            for (const auto& g : gaps)
                a.push_back({{"name", g.name}, {"lhs", g.lhs}, {"rhs", g.rhs}, {"relgap", g.relgap}});
            return a;
        };
        const auto g0 = check_covariance(s, p);
        item["t0"] = dump(g0);
        bool pass = max_relgap(g0) <= 1e-5;
        if (cfg.scale_time > 0.0) {
            const auto gt = check_time_covariance(s, p, cfg.scale_time, cfg.ctrl);
            item["t"] = dump(gt);
            pass = pass && max_relgap(gt) <= 1e-3;
        }
        item["passed"] = pass;
        say(quiet, std::string(pass ? "pass" : "FAIL") + " lam=" + format_real(p.lam()) + " s=" + format_real(p.s) +
                       " max relgap t=0 " + format_real(max_relgap(g0)));
        ok = ok && pass;
        arr.push_back(item);
    }
    write_text(out_dir(cfg) / "scale_check.json", json{{"checks", arr}, {"passed", ok}}.dump(1));
    return ok ? kExitOk : kExitVerify;
}

int cmd_pinch(const RunConfig& cfg, bool quiet)
{
    if (cfg.init != InitKind::Crest) throw ConfigError(0, "init.kind", "pinch needs init.kind = crest");
    const PinchReport rep = pinch_experiment(cfg.grid(), cfg.crest, cfg.ctrl);
    const fs::path dir = out_dir(cfg);
    std::string csv = csv_header(true);
    for (size_t k = 0; k < rep.rows.size(); ++k) {
        const auto& row = rep.rows[k];
        csv += csv_row(row.e, row.dt, &row.d, k + 1 == rep.rows.size() ? to_string(rep.reason) : "");
    }
    write_text(dir / "pinch.csv", csv);
    json j = {{"d", rep.d},
              {"v", rep.v},
              {"Ecal0", rep.E0},
              {"fitted_c", rep.fitted_c},
              {"bracket_lower", rep.t_lower},
              {"bracket_upper", rep.t_upper},
              {"t_stop", rep.t_stop},
              {"stop_reason", to_string(rep.reason)},
              {"max_relative_deviation", rep.max_dev},
              {"B_eventually_increasing", rep.B_eventually_increasing}};
    write_text(dir / "pinch.json", j.dump(1));
    say(quiet, "pinch: stop " + to_string(rep.reason) + " at t=" + format_real(rep.t_stop) + ", bracket [" +
                   format_real(rep.t_lower) + ", " + format_real(rep.t_upper) + "], max |d - (d0 - v t)|/d0 = " +
                   format_real(rep.max_dev));
    return rep.reason == StopReason::Completed || rep.reason == StopReason::ResolutionLost ||
                   rep.reason == StopReason::BlowupDetected
               ? kExitOk
               : kExitNumerical;
}

int run_cli(int argc, char** argv)
{
    CLI::App app{"Water waves with angled crests: simulation and verification"};
    app.require_subcommand(1);
    std::string config_path, out;
    long long seed = -1;
    bool quiet = false;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key = value configuration file");
        sub->add_option("--out", out, "output directory");
        sub->add_option("--seed", seed, "seed for randomized states");
        sub->add_flag("--quiet", quiet, "suppress progress output");
    };
    CLI::App* sim = app.add_subcommand("simulate", "evolve a state and write timeseries.csv and checkpoints");
    CLI::App* ver = app.add_subcommand("verify", "run the identity suite");
    CLI::App* sca = app.add_subcommand("scale-check", "check energy covariance under the scaling family");
    CLI::App* pin = app.add_subcommand("pinch", "run the crest pinch experiment");
    for (auto* s : {sim, ver, sca, pin}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        std::string text;
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw ConfigError(0, "", "cannot open '" + config_path + "'");
            std::stringstream ss;
            ss << f.rdbuf();
            text = ss.str();
        }
        RunConfig cfg = parse_config(text);
        if (ver->parsed() && config_path.empty()) cfg.init = InitKind::Random;
        if (!out.empty()) cfg.out_dir = out;
        if (seed >= 0) cfg.seed = static_cast<unsigned long long>(seed);
        cfg.check();
        if (sim->parsed()) return cmd_simulate(cfg, quiet);
        if (ver->parsed()) return cmd_verify(cfg, quiet);
        if (sca->parsed()) return cmd_scale_check(cfg, quiet);
        return cmd_pinch(cfg, quiet);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ModelError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace ww
