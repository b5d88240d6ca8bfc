#include "ww/stepper.hpp"

#include <algorithm>
#include <cmath>

namespace ww {

namespace {

double wrap(double a)
{
    double r = std::fmod(a, kTwoPi);
    return r < 0.0 ? r + kTwoPi : r;
}

std::vector<double> sample(const Field& b, const std::vector<double>& h)
{
    std::vector<double> v(h.size());
    for (size_t i = 0; i < h.size(); ++i) v[i] = interpolate(b, h[i]).real();
    return v;
}

WaveState axpy(const WaveState& s, double a, const Rhs& k)
{
    WaveState o;
    o.t = s.t + a;
    o.mode = s.mode;
    o.Z = s.Z + cplx(a) * k.dZ;
    o.Ztbar = s.Ztbar + cplx(a) * k.dZtbar;
    return o;
}

WaveState step_from(const WaveState& s, double dt, double eps, const Rhs& k1)
{
    std::vector<double> h0(s.labels.size());
    for (size_t i = 0; i < h0.size(); ++i) h0[i] = s.labels[i].h;
    auto shifted = [&](const std::vector<double>& l, double a) {
        std::vector<double> h(h0.size());
        for (size_t i = 0; i < h.size(); ++i) h[i] = h0[i] + a * l[i];
        return h;
    };

    const auto l1 = sample(k1.b, h0);
    const Rhs k2 = rhs(axpy(s, 0.5 * dt, k1), eps);
    const auto l2 = sample(k2.b, shifted(l1, 0.5 * dt));
    const Rhs k3 = rhs(axpy(s, 0.5 * dt, k2), eps);
    const auto l3 = sample(k3.b, shifted(l2, 0.5 * dt));
    const Rhs k4 = rhs(axpy(s, dt, k3), eps);
    const auto l4 = sample(k4.b, shifted(l3, dt));

    const cplx w1(dt / 6.0), w2(dt / 3.0);
    WaveState o;
    o.t = s.t + dt;
    o.mode = s.mode;
    o.Z = filter(s.Z + w1 * k1.dZ + w2 * k2.dZ + w2 * k3.dZ + w1 * k4.dZ, eps);
    o.Ztbar = filter(s.Ztbar + w1 * k1.dZtbar + w2 * k2.dZtbar + w2 * k3.dZtbar + w1 * k4.dZtbar, eps);
    o.labels = s.labels;
    for (size_t i = 0; i < h0.size(); ++i)
        o.labels[i].h = wrap(h0[i] + dt / 6.0 * (l1[i] + 2.0 * l2[i] + 2.0 * l3[i] + l4[i]));
    return o;
}

bool finite_state(const WaveState& s)
{
    for (const Field* f : {&s.Z, &s.Ztbar})
        for (const auto& z : f->values())
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

}  // namespace

void StepControl::check() const
{
    if (!(t_final > 0.0)) throw InvalidInput("t_final must be positive");
    if (!(cfl > 0.0)) throw InvalidInput("cfl must be positive");
    if (!(dt_min > 0.0 && dt_min <= dt_init && dt_init <= dt_max))
        throw InvalidInput("need 0 < dt_min <= dt_init <= dt_max");
    if (observe_every < 1) throw InvalidInput("observation cadence must be >= 1");
}

std::string to_string(StopReason r)
{
    switch (r) {
    case StopReason::Completed: return "completed";
    case StopReason::ResolutionLost: return "resolution_lost";
    case StopReason::BlowupDetected: return "blowup_detected";
    case StopReason::NearSingularNode: return "near_singular_node";
    case StopReason::DtUnderflow: return "dt_underflow";
    case StopReason::NegativeA: return "negative_A";
    }
    return "unknown";
}

WaveState rk4_step(const WaveState& s, double dt, double filter_eps)
{
    if (!(dt != 0.0) || !std::isfinite(dt)) throw InvalidInput("dt must be finite and nonzero");
    return step_from(s, dt, filter_eps, rhs(s, filter_eps));
}

std::vector<Label> advance_labels(const std::vector<Label>& labels, double dt, const Field& b)
{
    std::vector<Label> out = labels;
    auto f = [&](double h) { return interpolate(b, h).real(); };
    for (auto& l : out) {
        double k1 = f(l.h);
        double k2 = f(l.h + 0.5 * dt * k1);
        double k3 = f(l.h + 0.5 * dt * k2);
        double k4 = f(l.h + dt * k3);
        l.h = wrap(l.h + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    }
    return out;
}

double cfl_dt(const WaveState& s, const StepControl& c, const Rhs& k)
{
    const double h = s.grid().h();
    const double speed = std::max(norm(Norm::Linf, k.b), std::sqrt(k.A_max * h));
    if (!(speed > 0.0)) return c.dt_max;
    return std::min(c.dt_max, c.cfl * h / speed);
}

double resolution_tail(const WaveState& s) { return tail_fraction(s.Ztbar, s.grid().cutoff / 2); }

EvolveResult evolve(const WaveState& s0, const StepControl& ctrl, const Observer& obs, long step0)
{
    ctrl.check();
    EvolveResult r;
    r.state = s0;
    r.steps = step0;
    if (obs && step0 == 0) obs(r.state, 0, 0.0);
    bool observed_last = true;
    bool first = true;
    double last_dt = 0.0;
    while (r.state.t < ctrl.t_final) {
        Rhs k1;
        try {
            k1 = rhs(r.state, ctrl.filter_eps);
        } catch (const ModelError& e) {
            r.reason = e.kind == "negative_A" ? StopReason::NegativeA : StopReason::NearSingularNode;
            r.detail = e.what();
            break;
        } catch (const InvalidInput& e) {
            r.reason = StopReason::BlowupDetected;
            r.detail = e.what();
            break;
        }
        double dt = cfl_dt(r.state, ctrl, k1);
        if (first && step0 == 0) dt = std::min(dt, ctrl.dt_init);
        first = false;
        bool last = false;
        if (r.state.t + dt >= ctrl.t_final) {
            dt = ctrl.t_final - r.state.t;
            last = true;
        } else if (dt < ctrl.dt_min) {
            r.reason = StopReason::DtUnderflow;
            break;
        }
        WaveState next;
        try {
            next = step_from(r.state, dt, ctrl.filter_eps, k1);
        } catch (const ModelError& e) {
            r.reason = e.kind == "negative_A" ? StopReason::NegativeA : StopReason::NearSingularNode;
            r.detail = e.what();
            break;
        } catch (const InvalidInput& e) {
            r.reason = StopReason::BlowupDetected;
            r.detail = e.what();
            break;
        }
        if (!finite_state(next)) {
            r.reason = StopReason::BlowupDetected;
            break;
        }
        if (last) next.t = ctrl.t_final;
        r.state = std::move(next);
        ++r.steps;
        last_dt = dt;
        observed_last = false;
        const bool lost = resolution_tail(r.state) > ctrl.tail_threshold;
        if (obs && (r.steps % ctrl.observe_every == 0 || lost || last)) {
            observed_last = true;
            try {
                obs(r.state, r.steps, dt);
            } catch (const ModelError& e) {
                r.reason = e.kind == "negative_A" ? StopReason::NegativeA : StopReason::NearSingularNode;
                r.detail = e.what();
                break;
            }
        }
        if (lost) {
            r.reason = StopReason::ResolutionLost;
            break;
        }
    }
    if (obs && !observed_last) {
        try {
            obs(r.state, r.steps, last_dt);
        } catch (const ModelError&) {
        }
    }
    return r;
}

WaveState integrate_fixed(const WaveState& s0, double dt, int nsteps, double filter_eps)
{
    WaveState s = s0;
    const double t0 = s0.t;
    for (int i = 0; i < nsteps; ++i) {
        s = rk4_step(s, dt, filter_eps);
        s.t = t0 + (i + 1) * dt;
    }
    return s;
}

}  // namespace ww
