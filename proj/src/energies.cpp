#include "ww/energies.hpp"

#include <cmath>

namespace ww {

namespace {

const cplx I(0.0, 1.0);

bool bad(double x) { return !std::isfinite(x); }

struct Terms {
    double N = 0.0;  // |Ztbar_a|^2 (+ g for the line)
    double vel = 0.0;
    int cells = 1;
};

Terms base_terms(const WaveState& s, const DerivedFields& d)
{
    Terms t;
    t.cells = cell_multiplicity(s);
    t.vel = cell_l2_sq(d.Ztbar_ap, t.cells);
    t.N = t.vel + (s.is_line() ? s.mode.g : 0.0);
    return t;
}

void check(EnergyReport& r, double v, const char* name)
{
    if (bad(v) && !r.flagged) {
        r.flagged = true;
        r.flag_term = name;
    }
}

}  // namespace

double cell_l2_sq(const Field& f, int cells)
{
    double v = norm(Norm::L2, f);
    return v * v / cells;
}

double cell_hhalf_sq(const Field& f, int cells)
{
    double v = norm(Norm::Hhalf, f);
    return v * v / cells;
}

double combine_a(double e1, double e2) { return std::sqrt(e1 * e1 + e2); }
double combine_cubic(double e1, double e2, double e3)
{
    return std::cbrt(e1 * e1 * e1 + std::pow(e2, 1.5) + e3);
}

EnergyReport energy_report(const WaveState& s) { return energy_report(s, derive(s)); }

EnergyReport energy_report(const WaveState& s, const DerivedFields& d)
{
    EnergyReport r;
    r.t = s.t;
    const Terms T = base_terms(s, d);
    const Field sqrtA = sqrt_real(d.A);
    const Field Dap2 = d.invZap * deriv(d.DapZtbar);
    const Field DtDap2 = material_derivative_chain(s, d, Chain::DapZtbar2);
    const Field pinv = deriv(d.invZap);
    double l2a = 0.0, l2b = 0.0, hh = 0.0;
    if (s.is_line()) {
        l2a = cell_l2_sq(pinv, T.cells);
        r.E1 = T.N * l2a;
        const Field Dtp = dt_of_derivative(d, d.invZap, d.DtinvZap);
        l2b = cell_l2_sq(Dtp, T.cells);
        hh = cell_hhalf_sq(sqrtA * d.invZap * pinv, T.cells);
        r.E2 = T.N * (l2b + hh);
    } else {
        r.E1 = T.N * (cell_l2_sq(pinv, 1) + cell_l2_sq(d.invZap, 1));
        const Field pq = deriv(d.q);
        const Field Dtpq = dt_of_derivative(d, d.q, d.Dtq);
        r.E2 = T.N * (cell_l2_sq(Dtpq, 1) + cell_hhalf_sq(sqrtA * d.invZap * pq, 1));
    }
    r.E3 = T.N * (cell_l2_sq(DtDap2, T.cells) + cell_hhalf_sq(sqrtA * d.invZap * Dap2, T.cells));
    check(r, r.E1, "E1");
    check(r, r.E2, "E2");
    check(r, r.E3, "E3");
    r.Ea = combine_a(r.E1, r.E2);
    r.E = combine_cubic(r.E1, r.E2, r.E3);
    const EcalReport ec = ecal_report(s, d);
    r.Ecal = ec.ecal.total;
    check(r, r.Ecal, "Ecal");
    if (ec.ecal_b) {
        r.Ecal_b = ec.ecal_b->total;
        check(r, *r.Ecal_b, "Ecal_b");
    }
    r.blowup_B = blowup_functional(s, d);
    check(r, r.blowup_B, "blowup_B");
    r.holo_residual = holo_residual(s);
    return r;
}

double blowup_functional(const WaveState& s) { return blowup_functional(s, derive(s)); }

double blowup_functional(const WaveState& s, const DerivedFields& d)
{
    const int cells = cell_multiplicity(s);
    const double first = norm(Norm::Linf, d.DapZtbar) + std::sqrt(cell_hhalf_sq(d.DapZtbar, cells));
    const double vel = std::sqrt(cell_l2_sq(d.Ztbar_ap, cells));
    const double pinv = std::sqrt(cell_l2_sq(deriv(d.invZap), cells));
    if (s.is_line()) return first + (vel + std::sqrt(s.mode.g)) * pinv;
    return first + vel * (pinv + std::sqrt(cell_l2_sq(d.invZap, 1)));
}

EcalReport ecal_report(const WaveState& s) { return ecal_report(s, derive(s)); }

EcalReport ecal_report(const WaveState& s, const DerivedFields& d)
{
    EcalReport out;
    const Terms T = base_terms(s, d);
    const int c = T.cells;
    const double N = T.N;
    const Field Dap2 = d.invZap * deriv(d.DapZtbar);
    if (s.is_line()) {
        const Field pinv = deriv(d.invZap);
        const Field Dinv = d.invZap * pinv;
        EcalParts e;
        e.c1 = N * cell_l2_sq(pinv, c);
        e.c2 = N * cell_l2_sq(Dap2, c) + N * N * cell_hhalf_sq(Dinv, c);
        e.c3 = N * N * N * cell_l2_sq(d.invZap * deriv(Dinv), c)
               + N * N * cell_hhalf_sq(d.invZap * Dap2, c);
        e.total = combine_cubic(e.c1, e.c2, e.c3);
        out.ecal = e;

        const Field sqrtA = sqrt_real(d.A);
        const Field inv2 = d.invZap * d.invZap;
        const Field u = deriv(d.Ztbar_ap * inv2);
        EcalParts b;
        b.c1 = e.c1;
        b.c2 = N * (cell_l2_sq(u, c) + cell_hhalf_sq(sqrtA * d.invZap * pinv, c));
        b.c3 = N * (cell_l2_sq(deriv(d.A * inv2 * pinv), c) + cell_hhalf_sq(sqrtA * d.invZap * u, c));
        b.total = combine_cubic(b.c1, b.c2, b.c3);
        out.ecal_b = b;
    } else {
        const Field pq = deriv(d.q);
        const Field Dq = d.invZap * pq;
        EcalParts e;
        e.c1 = N * (cell_l2_sq(pq, 1) + cell_l2_sq(d.invZap, 1));
        e.c2 = N * cell_l2_sq(Dap2, 1) + N * N * cell_hhalf_sq(Dq, 1);
        e.c3 = N * N * N * cell_l2_sq(d.invZap * deriv(Dq), 1) + N * N * cell_hhalf_sq(d.q * Dap2, 1);
        e.total = combine_cubic(e.c1, e.c2, e.c3);
        out.ecal = e;
    }
    return out;
}

}  // namespace ww
