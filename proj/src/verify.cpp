#include "ww/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ww {

namespace {

const cplx I(0.0, 1.0);

double linf(const Field& f) { return norm(Norm::Linf, f); }

// ref: size of the ingredients, a floor for the scale when both sides vanish.
IdentityResult compare(const std::string& name, const Field& lhs, const Field& rhs, double tol,
                       double ref = 0.0)
{
    IdentityResult r;
    r.name = name;
    r.tol = tol;
    r.max_abs_gap = linf(lhs - rhs);
    const double scale = std::max({linf(lhs), linf(rhs), ref});
    r.rel_gap = scale > 0.0 ? r.max_abs_gap / scale : r.max_abs_gap;
    return r;
}

IdentityResult compare_scalar(const std::string& name, cplx lhs, cplx rhs, double tol, double ref = 0.0)
{
    IdentityResult r;
    r.name = name;
    r.tol = tol;
    r.max_abs_gap = std::abs(lhs - rhs);
    const double scale = std::max({std::abs(lhs), std::abs(rhs), ref});
    r.rel_gap = scale > 0.0 ? r.max_abs_gap / scale : r.max_abs_gap;
    return r;
}

Field b2(const Field& f1, const Field& f2, const Field& g)
{
    return bracket(2, {f1, f2}, g, BracketMethod::Multiplier);
}

Field b1(const Field& f, const Field& g) { return bracket(1, {f}, g, BracketMethod::Multiplier); }

WaveState with_node_labels(const WaveState& s)
{
    WaveState o = s;
    o.labels.clear();
    for (int j = 0; j < s.grid().n; ++j) {
        const double a = s.grid().node(j);
        o.labels.push_back({a, a});
    }
    return o;
}

// Values of f(state) at the labels of the state.
using Probe = std::function<Field(const WaveState&, const DerivedFields&)>;

std::vector<cplx> at_labels(const WaveState& s, const Probe& p)
{
    const DerivedFields d = derive(s);
    const Field f = p(s, d);
    std::vector<cplx> out(s.labels.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = interpolate(f, s.labels[i].h);
    return out;
}

// Centered difference along the label flow, Richardson-extrapolated.
std::vector<Field> label_fd(const WaveState& s, const std::vector<Probe>& probes, double delta)
{
    const WaveState s0 = with_node_labels(s);
    std::vector<std::vector<cplx>> d1(probes.size()), d2(probes.size());
    for (int pass = 0; pass < 2; ++pass) {
        const double dl = pass == 0 ? delta : 0.5 * delta;
        const WaveState sp = rk4_step(s0, dl, 0.0);
        const WaveState sm = rk4_step(s0, -dl, 0.0);
        for (size_t k = 0; k < probes.size(); ++k) {
            const auto fp = at_labels(sp, probes[k]);
            const auto fm = at_labels(sm, probes[k]);
            auto& out = pass == 0 ? d1[k] : d2[k];
            out.resize(fp.size());
            for (size_t i = 0; i < fp.size(); ++i) out[i] = (fp[i] - fm[i]) / (2.0 * dl);
        }
    }
    std::vector<Field> res;
    for (size_t k = 0; k < probes.size(); ++k) {
        std::vector<cplx> v(d1[k].size());
        for (size_t i = 0; i < v.size(); ++i) v[i] = (4.0 * d2[k][i] - d1[k][i]) / 3.0;
        res.emplace_back(s.grid(), std::move(v));
    }
    return res;
}

cplx integral(const Field& f) { return kTwoPi * mean(f); }

}  // namespace

Field material_derivative_A(const WaveState& s, const DerivedFields& d)
{
    // A = sigma Im [Zt; Ztbar_a] (+ g); D_t [f; g] = [D_t f; g] + [f; D_t^* g] - [b, f; g].
    const Field Ztt = conj(d.Zttbar);
    const Field D = b1(Ztt, d.Ztbar_ap) + b1(d.Zt, deriv(d.Zttbar)) - b2(d.b, d.Zt, d.Ztbar_ap);
    (void)s;
    return im(D);
}

std::vector<IdentityResult> run_identity_suite(const WaveState& s, const std::string& descriptor,
                                               double tol)
{
    std::vector<IdentityResult> out;
    const DerivedFields d = derive(s);
    const ModeTag& M = s.mode;
    const double sigma = s.is_line() ? -1.0 : 1.0;
    const double g = s.is_line() ? M.g : 0.0;
    auto H = [&](const Field& f) { return hilbert_tilde(M, f); };

    {
        const Field f = filter(d.Zt * d.invZap, 0.0);
        const Field lhs = H(H(f)) + H(re(f)) + H(I * im(f));
        const Field rhs = (f - mean(f)) + I * im(H(f)) + re(H(f));
        out.push_back(compare("hilbert_algebra", lhs, rhs, tol, linf(f)));
    }
    {
        const Field Am = d.A - cplx(g);
        out.push_back(compare("a_commutator_vs_quadrature", Am, sine_kernel_energy(d.Zt), tol));
    }
    {
        const Field f = d.Zt * d.Ztbar_ap;
        const Field rhs = sigma * (-I * f + I * (re(f) + H(re(f))));
        out.push_back(compare("a_real_form", d.A - cplx(g), rhs, tol));
    }
    {
        IdentityResult r;
        r.name = "a_nonnegative";
        r.tol = tol;
        r.max_abs_gap = std::max(0.0, -d.A_min_raw);
        const double scale = std::max(linf(d.A), 1e-300);
        r.rel_gap = r.max_abs_gap / scale;
        out.push_back(r);
    }
    {
        const cplx c = s.is_line() ? cplx(0.0) : mean(d.Zt);
        const Field F = (d.Zt - c) * d.invZap;
        const Field rhs = d.DapZt + (d.Zt - c) * deriv(d.invZap) - I * (deriv(im(F)) + H(deriv(im(F))));
        out.push_back(compare("bap_formula", d.bap, rhs, tol));
    }
    {
        const Field lhs = re(d.omega * deriv(d.invZap));
        const Field rhs = deriv(Field::constant(s.grid(), 1.0) / abs(d.Zap));
        out.push_back(compare("real_imag_theta", lhs, rhs, tol, linf(deriv(d.invZap))));
    }
    {
        const double delta = 1e-3;
        const std::vector<Probe> probes = {
            [](const WaveState&, const DerivedFields& e) { return e.invZap; },
            [](const WaveState& w, const DerivedFields&) { return w.Ztbar; },
            [](const WaveState&, const DerivedFields& e) { return e.A; },
        };
        const auto fd = label_fd(s, probes, delta);
        const Field DtA = material_derivative_A(s, d);
        IdentityResult r = compare("material_derivative_label_fd", fd[0], d.DtinvZap, tol);
        for (const auto& [lhs, rhs] : {std::pair{fd[1], d.Zttbar}, std::pair{fd[2], DtA}}) {
            IdentityResult q = compare(r.name, lhs, rhs, tol);
            if (q.rel_gap > r.rel_gap) r = q;
        }
        out.push_back(r);
    }
    {
        const double delta = 1e-3;
        const Field fields[2] = {d.invZap, s.Ztbar};
        const Field Dt[2] = {d.DtinvZap, d.Zttbar};
        auto value = [&](const WaveState& w, int k) {
            return k == 0 ? integral(derive(w).invZap) : integral(w.Ztbar);
        };
        IdentityResult r;
        for (int k = 0; k < 2; ++k) {
            cplx dd[2];
            for (int pass = 0; pass < 2; ++pass) {
                const double dl = pass == 0 ? delta : 0.5 * delta;
                dd[pass] = (value(rk4_step(s, dl, 0.0), k) - value(rk4_step(s, -dl, 0.0), k)) / (2.0 * dl);
            }
            const cplx lhs = (4.0 * dd[1] - dd[0]) / 3.0;
            const cplx rhs = integral(Dt[k] + d.bap * fields[k]);
            IdentityResult q = compare_scalar("dt_integral", lhs, rhs, tol);
            const double scale = kTwoPi * std::max(linf(Dt[k]), linf(d.bap * fields[k]));
            if (scale > 0.0) q.rel_gap = q.max_abs_gap / scale;
            if (k == 0 || q.rel_gap > r.rel_gap) r = q;
        }
        out.push_back(r);
    }
    {
        const Field& h = d.b;
        const Field& f = d.Zt;
        const Field& gg = d.invZap;
        const Field lhs = h * deriv(b1(f, gg));
        const Field rhs = b1(h * deriv(f), gg) + b1(f, deriv(h * gg)) - b2(h, f, gg);
        const double ref = linf(h) * (linf(deriv(f)) * linf(gg) + linf(f) * linf(deriv(gg)));
        out.push_back(compare("leibniz_order1", lhs, rhs, tol, ref));
    }
    {
        const Field& h = d.b;
        const Field& f1 = d.Zt;
        const Field& f2 = s.Ztbar;
        const Field& gg = d.invZap;
        const Field lhs = h * deriv(b2(f1, f2, gg));
        const Field rhs = b2(h * deriv(f1), f2, gg) + b2(f1, h * deriv(f2), gg) + b2(f1, f2, deriv(h * gg))
                          - 2.0 * bracket(3, {h, f1, f2}, gg, BracketMethod::Multiplier);
        const double ref = linf(h) * linf(deriv(f1)) * linf(deriv(f2)) * linf(gg);
        out.push_back(compare("leibniz_order2", lhs, rhs, tol, ref));
    }
    {
        const Field& f = d.Zt;
        const Field& gg = d.invZap;
        const Field lhs = commutator(f * f, deriv(gg)) - 2.0 * commutator(f, deriv(f * gg));
        const double ref = linf(f) * linf(deriv(f)) * linf(gg);
        out.push_back(compare("square_bracket", lhs, -b2(f, f, gg), tol, ref));
    }
    {
        const double a = norm(Norm::Hhalf, d.DapZtbar);
        const double b = hhalf_quadrature(d.DapZtbar);
        out.push_back(compare_scalar("hhalf", a, b, tol, norm(Norm::L2, d.DapZtbar)));
    }

    for (auto& r : out) {
        r.n = s.grid().n;
        r.state = descriptor;
        r.passed = std::isfinite(r.rel_gap) && r.rel_gap <= r.tol;
    }
    return out;
}

bool all_passed(const std::vector<IdentityResult>& r)
{
    return std::all_of(r.begin(), r.end(), [](const IdentityResult& x) { return x.passed; });
}

std::vector<RefinementRow> refinement_check(const std::function<WaveState(int)>& make,
                                            const std::vector<int>& sizes, double floor)
{
    std::vector<RefinementRow> rows;
    for (int n : sizes) {
        const auto res = run_identity_suite(make(n), "refinement");
        if (rows.empty())
            for (const auto& r : res) rows.push_back({r.name, {}, {}, true});
        for (size_t i = 0; i < res.size(); ++i) {
            rows[i].n.push_back(n);
            rows[i].gap.push_back(res[i].rel_gap);
        }
    }
    for (auto& row : rows)
        for (size_t k = 1; k < row.gap.size(); ++k)
            if (!(row.gap[k] <= floor || row.gap[k] * 8.0 <= row.gap[k - 1])) row.decays = false;
    return rows;
}

AprioriFit monitor_apriori(const std::vector<Sample>& traj)
{
    if (traj.size() < 3) throw InvalidInput("monitor_apriori needs at least 3 samples");
    AprioriFit fit;
    for (const auto& s : traj)
        if (!std::isfinite(s.Ea) || !std::isfinite(s.B)) fit.max_violation = std::numeric_limits<double>::infinity();
    std::vector<double> rate(traj.size(), 0.0);
    for (size_t k = 1; k + 1 < traj.size(); ++k) {
        const double h1 = traj[k].t - traj[k - 1].t, h2 = traj[k + 1].t - traj[k].t;
        const double dE = (-h2 / (h1 * (h1 + h2))) * traj[k - 1].Ea
                          + ((h2 - h1) / (h1 * h2)) * traj[k].Ea
                          + (h1 / (h2 * (h1 + h2))) * traj[k + 1].Ea;
        const double denom = traj[k].B * traj[k].Ea;
        if (denom > 0.0 && std::isfinite(dE)) {
            rate[k] = dE / denom;
            fit.fitted_c = std::max(fit.fitted_c, rate[k]);
        }
    }
    for (size_t k = 1; k + 1 < traj.size(); ++k)
        if (rate[k] < -fit.fitted_c && fit.fitted_c > 0.0) ++fit.fast_decrease;

    double intB = 0.0;
    const double E0 = traj[0].Ea;
    for (size_t k = 0; k < traj.size(); ++k) {
        if (k > 0) intB += 0.5 * (traj[k].B + traj[k - 1].B) * (traj[k].t - traj[k - 1].t);
        const double env = E0 * std::exp(fit.fitted_c * intB);
        const double ratio = env > 0.0 ? traj[k].Ea / env : (traj[k].Ea > 0.0 ? INFINITY : 1.0);
        fit.envelope_ratio = std::max(fit.envelope_ratio, ratio);
    }
    return fit;
}

std::vector<Sample> sample_trajectory(const WaveState& s0, double dt, double T, int every)
{
    std::vector<Sample> out;
    WaveState s = s0;
    auto push = [&]() {
        const EnergyReport e = energy_report(s);
        out.push_back({s.t, e.Ea, e.blowup_B});
    };
    push();
    const int steps = static_cast<int>(std::lround(T / dt));
    for (int k = 1; k <= steps; ++k) {
        s = rk4_step(s, dt);
        if (k % every == 0) push();
    }
    return out;
}

namespace {

double centered(double h)
{
    double r = std::remainder(h, kTwoPi);
    return r;
}

}  // namespace

RigidityPoint rigidity_point(const WaveState& s, const WaveState& s0)
{
    if (s.labels.size() < 2) throw InvalidInput("rigidity needs crest labels at 0 and pi");
    const DerivedFields d = derive(s);
    RigidityPoint p;
    p.t = s.t;
    const double h0 = s.labels[0].h, hp = s.labels[1].h;
    p.h0 = centered(h0);
    p.hpi = hp;
    p.inv_zap0 = std::abs(interpolate(d.invZap, h0));
    p.inv_zappi = std::abs(interpolate(d.invZap, hp));
    p.ztt0 = std::abs(interpolate(d.Zttbar, h0));
    p.zttpi = std::abs(interpolate(d.Zttbar, hp));
    p.zt0 = interpolate(d.Zt, h0);
    p.ztpi = interpolate(d.Zt, hp);
    p.d = std::abs(interpolate(s.Z, h0) - interpolate(s.Z, hp));
    if (s.labels.size() > 2) {
        const Label& in = s.labels.back();
        const cplx w = interpolate(d.omega, in.h);
        const cplx zap0 = interpolate(deriv(s0.Z), in.alpha);
        const cplx w0 = zap0 / std::abs(zap0);
        p.angle_ratio_dev = std::abs(w / w0 - 1.0);
    }
    return p;
}

RigidityTrace rigidity_track(const std::vector<WaveState>& traj)
{
    RigidityTrace tr;
    if (traj.empty()) return tr;
    const WaveState& s0 = traj.front();
    tr.tol_crest = 1e-3 * linf(conj(s0.Ztbar));
    for (const auto& s : traj) tr.points.push_back(rigidity_point(s, s0));
    const RigidityPoint& p0 = tr.points.front();
    for (const auto& p : tr.points) {
        tr.max_inv_zap = std::max({tr.max_inv_zap, p.inv_zap0, p.inv_zappi});
        tr.max_ztt = std::max({tr.max_ztt, p.ztt0, p.zttpi});
        tr.max_zt_drift = std::max({tr.max_zt_drift, std::abs(p.zt0 - p0.zt0) / std::max(std::abs(p0.zt0), 1e-300),
                                    std::abs(p.ztpi - p0.ztpi) / std::max(std::abs(p0.ztpi), 1e-300)});
        tr.max_angle_dev = std::max(tr.max_angle_dev, p.angle_ratio_dev);
    }
    tr.crest_inv_ok = tr.max_inv_zap <= tr.tol_crest;
    tr.crest_ztt_ok = tr.max_ztt <= tr.tol_crest;
    tr.velocity_ok = tr.max_zt_drift <= 1e-3;
    tr.angle_ok = tr.max_angle_dev <= 1e-2;
    return tr;
}

bool eventually_increasing(const std::vector<double>& t, const std::vector<double>& B)
{
    const size_t n = B.size();
    if (n < 4) return false;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (size_t k = n / 2; k < n; ++k) {
        if (!(B[k] > 0.0)) return false;
        const double y = std::log(B[k]);
        sx += t[k];
        sy += y;
        sxx += t[k] * t[k];
        sxy += t[k] * y;
        ++m;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    double first = 0.0, last = 0.0;
    for (size_t k = 0; k < n / 2; ++k) first = std::max(first, B[k]);
    for (size_t k = (3 * n) / 4; k < n; ++k) last = std::max(last, B[k]);
    return slope > 0.0 && last > first;
}

PinchReport pinch_experiment(int n, const CrestSpec& spec, const StepControl& ctrl, double fit_tail)
{
    return pinch_experiment(Grid::make(n), spec, ctrl, fit_tail);
}

PinchReport pinch_experiment(const Grid& g, const CrestSpec& spec, const StepControl& ctrl, double fit_tail)
{
    const CrestData cd = disc_crest_pinch(g, spec);
    PinchReport rep;
    rep.d = cd.d;
    rep.v = cd.v;
    const EnergyReport e0 = energy_report(cd.state);
    rep.E0 = e0.Ecal;
    auto obs = [&](const WaveState& s, long, double dt) {
        PinchRow row;
        row.t = s.t;
        row.dt = dt;
        row.e = energy_report(s);
        row.d = std::abs(interpolate(s.Z, s.labels[0].h) - interpolate(s.Z, s.labels[1].h));
        row.tail = resolution_tail(s);
        rep.rows.push_back(row);
    };
    const EvolveResult r = evolve(cd.state, ctrl, obs);
    rep.reason = r.reason;
    rep.t_stop = r.state.t;
    rep.t_upper = rep.v > 0.0 ? rep.d / rep.v : INFINITY;

    std::vector<Sample> traj;
    std::vector<double> ts, Bs;
    for (const auto& row : rep.rows) {
        if (row.tail <= ctrl.tail_threshold) {
            const double line = rep.d - rep.v * row.t;
            rep.max_dev = std::max(rep.max_dev, std::abs(row.d - line) / rep.d);
        }
        if (!ts.empty() && row.t <= ts.back()) continue;
        if (row.tail <= fit_tail) traj.push_back({row.t, row.e.Ea, row.e.blowup_B});
        ts.push_back(row.t);
        Bs.push_back(row.e.blowup_B);
    }
    if (traj.size() >= 3) rep.fitted_c = monitor_apriori(traj).fitted_c;
    rep.t_lower = rep.E0 > 0.0 ? rep.fitted_c / std::sqrt(rep.E0) : 0.0;
    rep.B_eventually_increasing = eventually_increasing(ts, Bs);
    return rep;
}

}  // namespace ww
