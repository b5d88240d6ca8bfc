// One line per primary criterion; exit status is nonzero if any line fails.
#include "ww/energies.hpp"
#include "ww/initialdata.hpp"
#include "ww/scaling.hpp"
#include "ww/verify.hpp"

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace ww;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...)
{
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

WaveState rotational(int n, double eps)
{
    Grid g = Grid::make(n);
    WaveState s;
    s.Z = Field::mode(g, 1);
    s.Ztbar = Field::mode(g, 1, -eps);
    return s;
}

WaveState smooth_disc(int n) { return disc_smooth(n, 1.0, 0.05, 3, {{1, cplx(0.05)}, {2, cplx(0.02)}}); }

Field analytic(const Grid& g, int which)
{
    switch (which) {
    case 0: return Field::from_function(g, [](double a) { return cplx(std::exp(std::cos(a)), 0.0); });
    case 1: return Field::from_function(g, [](double a) { return 1.0 / (1.3 - std::polar(1.0, a)); });
    case 2: return Field::from_function(g, [](double a) { return cplx(std::sin(3 * a), std::cos(2 * a)) / (2.0 + std::cos(a)); });
    case 3: return Field::from_function(g, [](double a) { return std::exp(0.5 * std::polar(1.0, -a)); });
    default: return Field::from_function(g, [](double a) { return cplx(1.0 / (1.1 + std::sin(a)), 0.0); });
    }
}

// (1/8pi) int |f(a) - f(b)|^2 / sin^2((a - b)/2) db by the shifted trapezoid rule.
double kernel_oracle(const std::function<cplx(double)>& f, double a, int m)
{
    const double h = kTwoPi / m;
    const cplx fa = f(a);
    double s = 0.0;
    for (int k = 0; k < m; ++k) {
        const double b = a + (k + 0.5) * h;
        const double sn = std::sin((a - b) / 2);
        s += std::norm(fa - f(b)) / (sn * sn);
    }
    return s * h / (8.0 * kPi);
}

double max_gap(const Field& a, const Field& b)
{
    double e = 0.0;
    for (int j = 0; j < a.size(); ++j) e = std::max(e, std::abs(a[j] - b[j]));
    return e;
}

Verdict multipliers()
{
    Grid g = Grid::make(256);
    double e = 0.0;
    for (int m = -g.cutoff; m <= g.cutoff; ++m) {
        const Field f = Field::mode(g, m);
        const double s = m > 0 ? 1.0 : (m < 0 ? -1.0 : 0.0);
        e = std::max(e, max_gap(apply_multiplier(Mult::HilbertDisc, f), s * f));
        e = std::max(e, max_gap(apply_multiplier(Mult::HilbertLine, f), -s * f));
        e = std::max(e, max_gap(apply_multiplier(Mult::AbsD, f), double(std::abs(m)) * f));
    }
    return {e <= 1e-12, fmt("max node error %.3g (tol 1e-12)", e)};
}

Verdict hhalf()
{
    double worst = 0.0, worst_ratio = 1e300;
    bool ok = true;
    for (int w = 0; w < 5; ++w) {
        double gap[2];
        for (int r = 0; r < 2; ++r) {
            const Field f = analytic(Grid::make(256 << r), w);
            const double a = norm(Norm::Hhalf, f);
            gap[r] = std::abs(a - hhalf_quadrature(f)) / a;
        }
        const bool improves = gap[1] <= gap[0] / 8 || gap[1] < 1e-13;
        ok = ok && gap[0] <= 1e-6 && improves;
        worst = std::max(worst, gap[0]);
        if (gap[1] >= 1e-13) worst_ratio = std::min(worst_ratio, gap[0] / gap[1]);
    }
    return {ok, fmt("max rel gap %.3g at n=256, min improvement %s", worst,
                    worst_ratio > 1e299 ? "to roundoff" : fmt("%.3gx", worst_ratio).c_str())};
}

Verdict a_formula()
{
    double gap = 0.0, minA = 1e300;
    for (const WaveState& s : {smooth_disc(256), random_smooth_disc(256, 1), random_smooth_disc(256, 2),
                               line_wave(256, 1.0, 0.05, 2, cplx(0.0, 0.02))}) {
        double raw = 0.0;
        const Field A = compute_A(s, &raw);
        const Field q = sine_kernel_energy(conj(s.Ztbar)) + cplx(s.mode.g);
        gap = std::max(gap, max_gap(A, q) / norm(Norm::Linf, A));
        minA = std::min(minA, raw);
    }

    // independent oracle for A on the rotational state and on the smooth disc
    const double eps = 0.1;
    const auto zt_rot = [&](double b) { return -eps * std::polar(1.0, -b); };
    double oracle = 0.0;
    for (double a : {0.0, 1.0, 2.5, 4.0}) oracle = std::max(oracle, std::abs(kernel_oracle(zt_rot, a, 512) - eps * eps));
    const Field A0 = compute_A(rotational(256, eps));
    double closed = 0.0;
    for (int j = 0; j < A0.size(); ++j) closed = std::max(closed, std::abs(A0[j] - cplx(eps * eps)));

    const WaveState sd = smooth_disc(256);
    const Field zt = conj(sd.Ztbar), As = compute_A(sd);
    double smooth_oracle = 0.0;
    for (int j : {0, 37, 128, 201}) {
        const double o = kernel_oracle([&](double b) { return interpolate(zt, b); }, sd.grid().node(j), 512);
        smooth_oracle = std::max(smooth_oracle, std::abs(As[j].real() - o) / std::abs(o));
    }

    const bool ok = gap <= 1e-8 && minA >= -1e-10 && oracle <= 1e-14 && closed <= 1e-14 && smooth_oracle <= 1e-8;
    return {ok, fmt("commutator vs quadrature %.3g, min A %.3g, oracle eps^2 gap %.3g, A0 - eps^2 %.3g, "
                    "smooth oracle %.3g",
                    gap, minA, oracle, closed, smooth_oracle)};
}

Verdict identities()
{
    bool ok = true;
    double worst = 0.0;
    std::string failed;
    auto run = [&](const WaveState& s, const std::string& label) {
        for (const auto& r : run_identity_suite(s, label, 1e-8)) {
            worst = std::max(worst, r.rel_gap);
            if (!r.passed) {
                ok = false;
                failed += " " + label + ":" + r.name;
            }
        }
    };
    run(rotational(256, 0.1), "rotational");
    bool decays = true;
    for (unsigned long long seed : {1ULL, 2ULL, 3ULL}) {
        run(random_smooth_disc(256, seed), "random" + std::to_string(seed));
        for (const auto& r : refinement_check([&](int n) { return random_smooth_disc(n, seed); }, {64, 128, 256}))
            if (!r.decays) {
                decays = false;
                failed += " refine" + std::to_string(seed) + ":" + r.name;
            }
    }
    return {ok && decays, fmt("%d identities x 4 states, max rel gap %.3g, refinement %s%s", kIdentityCount, worst,
                              decays ? "decays" : "stalls", failed.c_str())};
}

Verdict trivial()
{
    const cplx c(0.3, -0.2);
    StepControl ctl;
    ctl.t_final = 1.0;
    const EvolveResult r = evolve(disc_trivial(64, c), ctl, nullptr);
    double e = 0.0;
    for (int j = 0; j < 64; ++j) e = std::max(e, std::abs(r.state.Z[j] - (std::polar(1.0, r.state.grid().node(j)) + c)));

    Grid g = Grid::make(64);
    WaveState rest;
    rest.mode = ModeTag::line(1.0);
    rest.Z = Field::constant(g, 0.0);
    rest.Ztbar = Field::constant(g, 0.0);
    const EvolveResult q = evolve(rest, ctl, nullptr);
    const double drift = norm(Norm::Linf, q.state.Z) + norm(Norm::Linf, q.state.Ztbar);
    const bool ok = r.reason == StopReason::Completed && q.reason == StopReason::Completed && e <= 1e-10 &&
                    drift <= 1e-12;
    return {ok, fmt("translation error %.3g at T=1, rest line drift %.3g", e, drift)};
}

double state_gap(const WaveState& a, const WaveState& b)
{
    return norm(Norm::L2, a.Z - b.Z) + norm(Norm::L2, a.Ztbar - b.Ztbar);
}

Verdict rk4_order()
{
    const WaveState s0 = smooth_disc(128);
    std::vector<WaveState> r;
    for (double dt : {0.05, 0.025, 0.0125}) r.push_back(integrate_fixed(s0, dt, static_cast<int>(std::lround(0.5 / dt))));
    const double ratio = state_gap(r[0], r[1]) / state_gap(r[1], r[2]);
    return {std::abs(ratio - 16.0) <= 0.3 * 16.0, fmt("self-convergence factor %.4g", ratio)};
}

Verdict scaling()
{
    const WaveState s = line_wave(64, 1.0, 0.05, 2, cplx(0.0, 0.02));
    StepControl c;
    c.dt_max = 0.005;
    double g0 = 0.0, gt = 0.0;
    for (const ScalingParams& p : {ScalingParams{2, 1, 0.5}, ScalingParams{2, 1, 1.0}, ScalingParams{1, 2, 0.0}}) {
        g0 = std::max(g0, max_relgap(check_covariance(s, p)));
        gt = std::max(gt, max_relgap(check_time_covariance(s, p, 0.2, c)));
    }
    return {g0 <= 1e-5 && gt <= 1e-3, fmt("t=0 max rel gap %.3g (incl. blow-up functional), t=0.2 max rel gap %.3g", g0, gt)};
}

Verdict apriori()
{
    struct Case {
        const char* name;
        std::function<WaveState(int)> make;
        double T;
    };
    const std::vector<Case> cases = {
        {"line", [](int n) { return line_wave(n, 1.0, 0.05, 1, cplx(0.0, 0.02)); }, 2.0},
        {"rotational", [](int n) { return rotational(n, 0.1); }, 2.0},
        {"smooth", [](int n) { return smooth_disc(n); }, 1.0},
    };
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        const AprioriFit base = monitor_apriori(sample_trajectory(c.make(128), 0.01, c.T, 2));
        const AprioriFit fine_n = monitor_apriori(sample_trajectory(c.make(256), 0.01, c.T, 2));
        const AprioriFit fine_t = monitor_apriori(sample_trajectory(c.make(128), 0.005, c.T, 4));
        double var = 0.0, env = 0.0;
        bool finite = true;
        for (const auto& f : {base, fine_n, fine_t}) {
            finite = finite && std::isfinite(f.fitted_c);
            var = std::max(var, std::abs(f.fitted_c - base.fitted_c) / base.fitted_c);
            env = std::max(env, f.envelope_ratio);
        }
        ok = ok && finite && var <= 0.2 && env <= 1.01;
        detail += fmt("%s c=%.4g var %.2g%% env %.4f; ", c.name, base.fitted_c, 100 * var, env);
    }
    detail.resize(detail.size() - 2);
    return {ok, detail};
}

Verdict rigidity()
{
    const CrestData cd = disc_crest_pinch(2048, CrestSpec{});
    StepControl c;
    c.t_final = 0.2;
    c.dt_init = 1.0;
    c.dt_max = 1.0;
    c.observe_every = 5;
    std::vector<WaveState> traj;
    const EvolveResult r = evolve(cd.state, c, [&](const WaveState& s, long, double) { traj.push_back(s); });
    const RigidityTrace tr = rigidity_track(traj);
    const bool ok = r.reason == StopReason::Completed && tr.crest_inv_ok && tr.crest_ztt_ok && tr.velocity_ok && tr.angle_ok;
    return {ok, fmt("tol %.3g: |1/Z_a| %.3g, |Z_tt| %.3g, velocity drift %.3g rel (tol 1e-3), angle |r-1| %.3g; "
                    "reached t=%.3g",
                    tr.tol_crest, tr.max_inv_zap, tr.max_ztt, tr.max_zt_drift, tr.max_angle_dev, r.state.t)};
}

Verdict pinch()
{
    CrestSpec sp;
    StepControl c;
    c.t_final = 100.0;
    c.dt_init = 1.0;
    c.dt_max = 1.0;
    const PinchReport a = pinch_experiment(2048, sp, c);
    sp.eps *= 2.0;
    const PinchReport b = pinch_experiment(2048, sp, c);

    const bool stopped = a.reason == StopReason::ResolutionLost || a.reason == StopReason::BlowupDetected;
    const double dv = a.d / a.v;
    const double rl = b.t_lower / a.t_lower, ru = (b.d / b.v) / dv;
    const bool halves = std::abs(rl - 0.5) <= 0.025 && std::abs(ru - 0.5) <= 0.025;
    const bool ok = a.max_dev <= 0.01 && a.B_eventually_increasing && stopped && a.t_stop <= 1.1 * dv && halves;
    return {ok, fmt("d(t) max dev %.3g (tol 0.01), B increasing %s, stop %s at %.4g (1.1 d/v = %.4g), "
                    "2eps ratios c/sqrt(E) %.4g d/v %.4g",
                    a.max_dev, a.B_eventually_increasing ? "yes" : "no", to_string(a.reason).c_str(), a.t_stop,
                    1.1 * dv, rl, ru)};
}

}  // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"multiplier exactness", multipliers},
        {"hhalf identity", hhalf},
        {"A formula and nonnegativity", a_formula},
        {"identity suite", identities},
        {"trivial dynamics", trivial},
        {"integrator order", rk4_order},
        {"scaling covariance", scaling},
        {"a-priori inequality", apriori},
        {"rigidity", rigidity},
        {"pinch experiment", pinch},
    };
    int failed = 0, k = 0;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = fn();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s [%d] %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", ++k, name, v.detail.c_str(), sec);
        std::fflush(stdout);
        if (!v.pass) ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
