#include "doctest.h"
#include "ww/model.hpp"
#include "ww/stepper.hpp"

#include <cmath>

using namespace ww;

namespace {

const cplx I(0.0, 1.0);

double max_gap(const Field& a, const std::function<cplx(double)>& ex)
{
    double e = 0.0;
    for (int j = 0; j < a.size(); ++j) e = std::max(e, std::abs(a[j] - ex(a.grid().node(j))));
    return e;
}

WaveState rotational(int n, double eps)
{
    Grid g = Grid::make(n);
    WaveState s;
    s.mode = ModeTag::disc();
    s.Z = Field::mode(g, 1);
    s.Ztbar = Field::mode(g, 1, -eps);
    return s;
}

WaveState smooth_disc(int n)
{
    Grid g = Grid::make(n);
    WaveState s;
    s.mode = ModeTag::disc();
    s.Z = Field::mode(g, 1) + Field::mode(g, 2, 0.08) + Field::mode(g, 3, cplx(0.0, 0.03));
    s.Ztbar = Field::mode(g, 0, 0.2) + Field::mode(g, 1, cplx(-0.1, 0.05)) + Field::mode(g, 2, 0.04);
    return s;
}

}  // namespace

TEST_CASE("rotational state closed forms")
{
    const double eps = 0.3;
    WaveState s = rotational(64, eps);
    CHECK(validate(s).empty());
    DerivedFields d = derive(s);
    CHECK(max_gap(d.b, [&](double a) { return 2 * eps * std::sin(2 * a); }) < 1e-13);
    CHECK(max_gap(d.A, [&](double) { return eps * eps; }) < 1e-13);
    CHECK(max_gap(d.Zttbar, [&](double a) { return eps * eps * std::polar(1.0, -a); }) < 1e-13);
    CHECK(max_gap(d.DtinvZap, [&](double a) {
              return -I * (2 * eps * std::polar(1.0, a) + eps * std::polar(1.0, -3 * a));
          }) < 1e-12);
    CHECK(max_gap(d.Dtq, [&](double a) { return -3.0 * I * eps * std::polar(1.0, 2 * a); }) < 1e-12);
    Field c = material_derivative_chain(s, d, Chain::PapEiaOverZap);
    CHECK(max_gap(c, [&](double a) { return 6.0 * eps * std::polar(1.0, 2 * a); }) < 1e-11);
}

TEST_CASE("constant velocity gives A = 0 and pure translation")
{
    Grid g = Grid::make(32);
    WaveState s;
    s.Z = Field::mode(g, 1);
    s.Ztbar = Field::constant(g, cplx(0.4, -0.2));
    Rhs r = rhs(s);
    CHECK(norm(Norm::Linf, r.b) < 1e-15);
    CHECK(max_gap(r.dZ, [](double) { return cplx(0.4, 0.2); }) < 1e-15);
    CHECK(norm(Norm::Linf, r.dZtbar) < 1e-15);
}

TEST_CASE("flat rest line is in hydrostatic balance")
{
    Grid g = Grid::make(32);
    WaveState s;
    s.mode = ModeTag::line(1.0);
    s.Z = Field::constant(g, 0.0);
    s.Ztbar = Field::constant(g, 0.0);
    Rhs r = rhs(s);
    CHECK(norm(Norm::Linf, r.dZ) == 0.0);
    CHECK(norm(Norm::Linf, r.dZtbar) < 1e-15);
    CHECK(max_gap(derive(s).A, [](double) { return 1.0; }) == 0.0);
}

TEST_CASE("A is real and nonnegative on a smooth state")
{
    WaveState s = smooth_disc(128);
    double raw = 0.0;
    Field A = compute_A(s, &raw);
    CHECK(raw > -1e-10);
    // quadrature form of A
    Field Zt = conj(s.Ztbar);
    Field q = sine_kernel_energy(Zt);
    CHECK(norm(Norm::Linf, A - q) / norm(Norm::Linf, A) < 1e-8);
}

TEST_CASE("material derivative of 1/Z_a against finite differences")
{
    WaveState s = smooth_disc(128);
    DerivedFields d = derive(s);
    const double dt = 1e-4;
    WaveState s1 = rk4_step(s, dt, 0.0), s2 = rk4_step(s1, dt, 0.0);
    Field f0 = d.invZap, f1 = derive(s1).invZap, f2 = derive(s2).invZap;
    Field dtf = (-3.0 * f0 + 4.0 * f1 - f2) * cplx(1.0 / (2 * dt));
    Field Dt = dtf + d.b * deriv(f0);
    CHECK(norm(Norm::Linf, Dt - d.DtinvZap) / norm(Norm::Linf, d.DtinvZap) < 1e-6);
}

TEST_CASE("validation and errors")
{
    WaveState s = rotational(32, 0.1);
    s.Ztbar = Field::mode(s.grid(), -1, 0.5);
    CHECK_FALSE(validate(s).empty());
    WaveState t = rotational(32, 0.1);
    t.Z = Field::mode(t.grid(), 2);
    CHECK_FALSE(validate(t).empty());
    WaveState w;
    w.mode = ModeTag::line(1.0);
    Grid g = Grid::make(32);
    w.Z = Field::mode(g, -1, 0.1);
    w.Ztbar = Field::constant(g, 0.0);
    CHECK(validate(w).empty());
    CHECK(cell_multiplicity(w) == 1);
    w.Z = Field::mode(g, -4, 0.1);
    CHECK(cell_multiplicity(w) == 4);
}
