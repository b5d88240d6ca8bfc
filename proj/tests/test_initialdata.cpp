#include "doctest.h"
#include "ww/energies.hpp"
#include "ww/initialdata.hpp"

#include <cmath>

using namespace ww;

namespace {

// Psi(w) = int_0^w c (1 - z^2)^{nu - 1} dz along the ray, composite Simpson.
cplx psi_ray(double nu, double c, cplx w, int panels = 20000)
{
    auto f = [&](double s) { return c * std::pow(1.0 - s * s * w * w, nu - 1.0) * w; };
    const double h = 1.0 / panels;
    cplx acc = f(0.0) + f(1.0);
    for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("crest data matches direct quadrature of the map")
{
    CrestSpec sp;
    sp.nu = 0.49;
    const CrestData cd = disc_crest_pinch(2048, sp);
    const double r = 1.0 - sp.rounding;
    for (double a : {0.3, 1.1, 2.0, 2.9}) {
        const cplx ref = psi_ray(sp.nu, cd.scale, std::polar(r, a));
        CHECK(std::abs(interpolate(cd.state.Z, a) - ref) < 1e-9);
    }
    CHECK(cd.scale == doctest::Approx(2.0 / std::beta(0.5, sp.nu)));
}

TEST_CASE("crest data symmetry, velocities and distances")
{
    CrestSpec sp;
    const CrestData cd = disc_crest_pinch(2048, sp);
    const WaveState& s = cd.state;
    CHECK(validate(s).empty());
    for (double a : {0.2, 0.9, 2.5}) {
        CHECK(std::abs(interpolate(s.Z, a) - std::conj(interpolate(s.Z, -a))) < 1e-12);
        CHECK(std::abs(std::conj(interpolate(s.Ztbar, a)) - interpolate(s.Ztbar, -a)) < 1e-12);
    }
    const cplx zt0 = std::conj(interpolate(s.Ztbar, 0.0)), ztpi = std::conj(interpolate(s.Ztbar, kPi));
    CHECK(zt0.real() < 0.0);
    CHECK(ztpi.real() > 0.0);
    CHECK(cd.v == doctest::Approx(std::abs(zt0 - ztpi)).epsilon(1e-12));
    CHECK(cd.d == doctest::Approx(std::abs(interpolate(s.Z, 0.0) - interpolate(s.Z, kPi))).epsilon(1e-12));
    CHECK(s.labels.size() == 2 + static_cast<size_t>(sp.ladder));
    CHECK(s.labels[0].alpha == 0.0);
    CHECK(s.labels[1].alpha == kPi);
    CHECK(crest_inverse_trace(sp, 0.0) == cplx(0.0));
    CHECK(std::abs(crest_inverse_trace(sp, kPi)) < 1e-10);
}

TEST_CASE("crest energies are finite and grid stable")
{
    const EnergyReport a = energy_report(disc_crest_pinch(2048, CrestSpec{}).state);
    const EnergyReport b = energy_report(disc_crest_pinch(4096, CrestSpec{}).state);
    CHECK(a.E > 0.0);
    CHECK(std::isfinite(a.Ecal));
    CHECK(std::abs(a.E - b.E) <= 0.02 * a.E);
    CHECK(std::abs(a.Ecal - b.Ecal) <= 0.02 * a.Ecal);
}

TEST_CASE("crest errors")
{
    CrestSpec sp;
    sp.taylor_terms = 64;
    CHECK_THROWS_AS(disc_crest_pinch(2048, sp), InvalidInput);
    CHECK_THROWS_AS(disc_crest_pinch(1024, CrestSpec{}), InvalidInput);
    CrestSpec cusp;
    cusp.nu = 0.0;
    CHECK_THROWS_AS(disc_crest_pinch(2048, cusp), InvalidInput);
}

TEST_CASE("line wave")
{
    const WaveState s = line_wave(64, 1.0, 0.05, 2);
    CHECK(validate(s).empty());
    CHECK(holo_residual(s) <= 1e-10);
    CHECK(energy_report(line_wave(64, 1.0, 0.0, 2)).Ecal == 0.0);
    CHECK_THROWS_AS(line_wave(64, 1.0, 0.2, 1), InvalidInput);
    CHECK_THROWS_AS(line_wave(64, -1.0, 0.01, 1), InvalidInput);
}

TEST_CASE("smooth and random discs")
{
    CHECK(validate(disc_smooth(64, 1.0, 0.05, 3, {{1, cplx(0.1)}})).empty());
    CHECK_THROWS_AS(disc_smooth(64, 1.0, 0.5, 3, {}), InvalidInput);
    CHECK_THROWS_AS(disc_smooth(64, 1.0, 0.05, 3, {{-1, cplx(0.1)}}), InvalidInput);
    const WaveState a = random_smooth_disc(64, 5), b = random_smooth_disc(64, 5), c = random_smooth_disc(64, 6);
    CHECK(a.Z.values() == b.Z.values());
    CHECK(a.Ztbar.values() == b.Ztbar.values());
    CHECK(norm(Norm::L2, a.Ztbar - c.Ztbar) > 1e-3);
    CHECK(validate(a).empty());
    const WaveState t = disc_trivial(32, cplx(0.1, 0.2));
    CHECK(energy_report(t).E == 0.0);
}
