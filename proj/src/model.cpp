#include "ww/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ww {

namespace {

const cplx I(0.0, 1.0);

Field eia(const Grid& g)
{
    return Field::from_function(g, [](double a) { return std::polar(1.0, a); });
}

Field with_symbol(const Field& f, double sign, bool plus)
{
    // Full band, Nyquist dropped; sign=+1 is the disc symbol sgn(m).
    const int n = f.size();
    std::vector<cplx> c = f.coeffs();
    const double d = 1.0 + hilbert_corruption();
    for (int k = 0; k < n; ++k) {
        int m = index_mode(k, n);
        if (m == -n / 2)
            c[k] = 0.0;
        else if (m == 0)
            c[k] = plus ? c[k] : 0.0;
        else
            c[k] *= sign * d * (m > 0 ? 1.0 : -1.0);
    }
    return Field::from_coeffs(f.grid(), std::move(c));
}

double sign_of(const ModeTag& mode) { return mode.is_line() ? -1.0 : 1.0; }

}  // namespace

Field hilbert_tilde(const ModeTag& mode, const Field& f)
{
    return with_symbol(f, sign_of(mode), false);
}

Field hilbert_plus(const ModeTag& mode, const Field& f)
{
    return with_symbol(f, sign_of(mode), true);
}

Field project_holo(const ModeTag& mode, const Field& f)
{
    const int n = f.size();
    std::vector<cplx> c = f.coeffs();
    for (int k = 0; k < n; ++k) {
        const int m = index_mode(k, n);
        if (mode.is_line() ? m > 0 : m < 0) c[k] = 0.0;
    }
    return Field::from_coeffs(f.grid(), std::move(c));
}

Field compute_Zap(const WaveState& s)
{
    Field zap = deriv(s.Z);
    if (s.is_line()) zap = zap + cplx(1.0);
    for (const auto& z : zap.values())
        if (std::abs(z) < 1e-8) throw ModelError("near_singular_node", "|Z_a| < 1e-8 at a grid node");
    return zap;
}

Field compute_A(const WaveState& s, double* raw_min)
{
    check_finite(s.Ztbar);
    const Field Zt = conj(s.Ztbar);
    const Field Ztbar_ap = deriv(s.Ztbar);
    // [Zt, H] Ztbar_a with the tilde transform of the mode.
    Field comm = Zt * hilbert_tilde(s.mode, Ztbar_ap) - hilbert_tilde(s.mode, Zt * Ztbar_ap);
    Field A = s.is_line() ? map(comm, [g = s.mode.g](cplx z) { return cplx(g - z.imag(), 0.0); })
                          : im(comm);
    double amin = 0.0;
    bool first = true;
    for (const auto& z : A.values()) {
        amin = first ? z.real() : std::min(amin, z.real());
        first = false;
    }
    if (raw_min) *raw_min = amin;
    if (amin < -1e-8) throw ModelError("negative_A", "A below -1e-8");
    return map(A, [](cplx z) { return cplx(std::max(z.real(), 0.0), 0.0); });
}

std::pair<Field, Field> compute_b(const WaveState& s)
{
    const Field Zt = conj(s.Ztbar);
    const Field invZap = Field::constant(s.grid(), 1.0) / compute_Zap(s);
    Field F = s.is_line() ? Zt * invZap : (Zt - mean(Zt)) * invZap;
    Field b = s.is_line() ? re(F - hilbert_plus(s.mode, F))
                          : re(F - hilbert_tilde(s.mode, F));
    Field bap = re(deriv(b));
    return {b, bap};
}

Field compute_Zttbar(const WaveState& s)
{
    const Field invZap = Field::constant(s.grid(), 1.0) / compute_Zap(s);
    const Field A = compute_A(s);
    if (s.is_line()) return map(I * (A * invZap), [g = s.mode.g](cplx z) { return I * g - z; });
    return I * (A * invZap);
}

DerivedFields derive(const WaveState& s)
{
    DerivedFields d;
    const Grid& g = s.grid();
    d.Zap = compute_Zap(s);
    d.invZap = Field::constant(g, 1.0) / d.Zap;
    d.omega = map(d.Zap, [](cplx z) { return z / std::abs(z); });
    d.Zt = conj(s.Ztbar);
    d.Ztbar_ap = deriv(s.Ztbar);
    d.Zt_ap = conj(d.Ztbar_ap);
    Field F = s.is_line() ? d.Zt * d.invZap : (d.Zt - mean(d.Zt)) * d.invZap;
    d.b = s.is_line() ? re(F - hilbert_plus(s.mode, F)) : re(F - hilbert_tilde(s.mode, F));
    d.bap = re(deriv(d.b));
    d.A = compute_A(s, &d.A_min_raw);
    d.DapZtbar = d.invZap * d.Ztbar_ap;
    d.DapZt = d.invZap * d.Zt_ap;
    if (s.is_line())
        d.Zttbar = map(I * (d.A * d.invZap), [gr = s.mode.g](cplx z) { return I * gr - z; });
    else
        d.Zttbar = I * (d.A * d.invZap);
    d.DtinvZap = d.invZap * (d.bap - d.DapZt);
    if (!s.is_line()) {
        d.q = eia(g) * d.invZap;
        d.Dtq = d.q * (d.bap - d.DapZt + I * d.b);
    }
    return d;
}

Rhs rhs(const WaveState& s, double krasny_eps)
{
    check_finite(s.Z);
    check_finite(s.Ztbar);
    const DerivedFields d = derive(s);
    Rhs r;
    r.dZ = filter(project_holo(s.mode, d.Zt - d.b * d.Zap), krasny_eps);
    r.dZtbar = filter(project_holo(s.mode, d.Zttbar - d.b * d.Ztbar_ap), krasny_eps);
    r.b = d.b;
    r.A_max = norm(Norm::Linf, d.A);
    return r;
}

Field dt_of_derivative(const DerivedFields& d, const Field& f, const Field& Dtf)
{
    return deriv(Dtf) - d.bap * deriv(f);
}

Field material_derivative_chain(const WaveState& s, const DerivedFields& d, Chain which)
{
    switch (which) {
    case Chain::InvZap: return d.DtinvZap;
    case Chain::PapEiaOverZap:
        if (s.is_line()) throw InvalidInput("e^{ia}/Z_a chain is defined for the disc only");
        return dt_of_derivative(d, d.q, d.Dtq);
    case Chain::DapZtbar2: {
        Field Dap2 = d.invZap * deriv(d.DapZtbar);
        Field inner = d.invZap * deriv(d.Zttbar) - d.DapZt * d.DapZtbar;
        return d.invZap * deriv(inner) - d.DapZt * Dap2;
    }
    }
    return {};
}

Field material_derivative_chain(const WaveState& s, Chain which)
{
    return material_derivative_chain(s, derive(s), which);
}

cplx interface_at(const WaveState& s, double alpha)
{
    cplx z = interpolate(s.Z, alpha);
    return s.is_line() ? z + alpha : z;
}

double holo_residual(const WaveState& s)
{
    Field r = s.Ztbar - hilbert_plus(s.mode, s.Ztbar);
    return norm(Norm::L2, r) / std::max(1.0, norm(Norm::L2, s.Ztbar));
}

std::string validate(const WaveState& s)
{
    try {
        check_finite(s.Z);
        check_finite(s.Ztbar);
    } catch (const InvalidInput&) {
        return "non-finite samples";
    }
    if (s.Z.grid() != s.Ztbar.grid()) return "grid mismatch between Z and Ztbar";
    if (s.is_line() && s.mode.g < 0.0) return "negative gravity";
    if (holo_residual(s) > 1e-6) return "holomorphicity residual above 1e-6";
    Field zap = deriv(s.Z);
    if (s.is_line()) zap = zap + cplx(1.0);
    for (const auto& z : zap.values())
        if (!(std::abs(z) > 0.0)) return "Z_a vanishes at a grid node";
    if (s.is_line()) {
        if (norm(Norm::Linf, s.Z) >= kPi) return "line surrogate |W| reaches pi";
    } else {
        const cplx c = mean(s.Z);
        double turn = 0.0;
        const int n = s.Z.size();
        for (int j = 0; j < n; ++j)
            turn += std::arg((s.Z[(j + 1) % n] - c) / (s.Z[j] - c));
        if (std::lround(turn / kTwoPi) != 1) return "disc curve does not wind once about its mean";
    }
    return {};
}

int cell_multiplicity(const WaveState& s)
{
    if (!s.is_line()) return 1;
    const int n = s.Z.size();
    double cmax = 0.0;
    for (const Field* f : {&s.Z, &s.Ztbar})
        for (const auto& c : f->coeffs()) cmax = std::max(cmax, std::abs(c));
    int g = 0;
    for (const Field* f : {&s.Z, &s.Ztbar}) {
        const auto& c = f->coeffs();
        for (int k = 0; k < n; ++k) {
            int m = std::abs(index_mode(k, n));
            if (m != 0 && std::abs(c[k]) > 1e-10 * cmax) g = std::gcd(g, m);
        }
    }
    return g == 0 ? 1 : g;
}

}  // namespace ww
