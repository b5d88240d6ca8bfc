#include "doctest.h"
#include "ww/verify.hpp"

#include <cmath>

using namespace ww;

namespace {

WaveState rotational(int n, double eps)
{
    Grid g = Grid::make(n);
    WaveState s;
    s.Z = Field::mode(g, 1);
    s.Ztbar = Field::mode(g, 1, -eps);
    return s;
}

void require_all(const std::vector<IdentityResult>& res)
{
    CHECK(res.size() == static_cast<size_t>(kIdentityCount));
    for (const auto& r : res) {
        INFO(r.name, " rel_gap=", r.rel_gap);
        CHECK(r.passed);
    }
}

}  // namespace

TEST_CASE("identity suite on the rotational state")
{
    const auto res = run_identity_suite(rotational(256, 0.1), "rotational");
    require_all(res);
    CHECK(res.front().n == 256);
    CHECK(res.front().state == "rotational");
}

TEST_CASE("identity suite on random smooth states")
{
    for (unsigned long long seed : {1ULL, 2ULL, 3ULL}) require_all(run_identity_suite(random_smooth_disc(256, seed), "random"));
    require_all(run_identity_suite(line_wave(256, 1.0, 0.05, 2, cplx(0.0, 0.02)), "line"));
}

TEST_CASE("trivial states give vanishing gaps")
{
    for (const auto& r : run_identity_suite(disc_trivial(64, cplx(0.2, -0.1)), "trivial")) {
        INFO(r.name);
        CHECK(r.max_abs_gap <= (r.name == "material_derivative_label_fd" ? 1e-10 : 1e-12));
    }
}

TEST_CASE("material derivative of A on the rotational state")
{
    const double eps = 0.2;
    const WaveState s = rotational(64, eps);
    const Field DtA = material_derivative_A(s, derive(s));
    for (int j = 0; j < 64; ++j) {
        const double a = s.grid().node(j);
        CHECK(std::abs(DtA[j] - cplx(-2.0 * eps * eps * eps * std::cos(2.0 * a))) < 1e-13);
    }
}

TEST_CASE("gaps decay under refinement")
{
    const auto rows = refinement_check([](int n) { return random_smooth_disc(n, 2); }, {64, 128, 256});
    CHECK(rows.size() == static_cast<size_t>(kIdentityCount));
    for (const auto& r : rows) {
        INFO(r.name);
        CHECK(r.decays);
    }
}

TEST_CASE("corrupted hilbert symbol is caught")
{
    const WaveState s = random_smooth_disc(128, 1);
    set_hilbert_corruption(1e-4);
    const auto res = run_identity_suite(s, "corrupted");
    set_hilbert_corruption(0.0);
    CHECK_FALSE(all_passed(res));
}

TEST_CASE("monitor_apriori on synthetic data")
{
    std::vector<Sample> flat;
    for (int k = 0; k < 10; ++k) flat.push_back({0.1 * k, 0.0, 0.0});
    CHECK(monitor_apriori(flat).fitted_c == 0.0);

    std::vector<Sample> grow;
    for (int k = 0; k <= 200; ++k) {
        const double t = 0.01 * k;
        grow.push_back({t, std::exp(0.6 * t), 2.0});
    }
    const AprioriFit f = monitor_apriori(grow);
    CHECK(f.fitted_c == doctest::Approx(0.3).epsilon(1e-4));
    CHECK(f.envelope_ratio <= 1.0 + 1e-8);
    CHECK(f.max_violation == 0.0);
    CHECK(f.fast_decrease == 0);

    grow[5].Ea = NAN;
    CHECK(std::isinf(monitor_apriori(grow).max_violation));
    CHECK_THROWS_AS(monitor_apriori({{0, 1, 1}, {1, 1, 1}}), InvalidInput);
}

TEST_CASE("monitor_apriori along a smooth run is refinement stable")
{
    const WaveState s = rotational(64, 0.1);
    const double c1 = monitor_apriori(sample_trajectory(s, 0.01, 0.5, 2)).fitted_c;
    const double c2 = monitor_apriori(sample_trajectory(s, 0.005, 0.5, 4)).fitted_c;
    CHECK(c1 > 0.0);
    CHECK(std::abs(c1 - c2) <= 0.2 * c1);
}

TEST_CASE("eventually increasing")
{
    std::vector<double> t, up, down;
    for (int k = 0; k < 40; ++k) {
        t.push_back(k);
        up.push_back(1.0 + 0.01 * k * k);
        down.push_back(10.0 - 0.1 * k);
    }
    CHECK(eventually_increasing(t, up));
    CHECK_FALSE(eventually_increasing(t, down));
}

TEST_CASE("rigidity at t = 0 and for a resting crest")
{
    CrestSpec sp;
    const WaveState s0 = disc_crest_pinch(2048, sp).state;
    const RigidityTrace tr = rigidity_track({s0});
    CHECK(tr.velocity_ok);
    CHECK(tr.angle_ok);
    CHECK(tr.max_zt_drift == 0.0);
    CHECK(tr.tol_crest == doctest::Approx(1e-3 * sp.eps));
    CHECK(tr.points.front().d == doctest::Approx(disc_crest_pinch(2048, sp).d));

    sp.eps = 0.0;
    const WaveState r0 = disc_crest_pinch(2048, sp).state;
    const WaveState r1 = rk4_step(r0, 0.01);
    const RigidityTrace rest = rigidity_track({r0, r1});
    CHECK(rest.max_zt_drift == 0.0);
    CHECK(rest.points.back().d == doctest::Approx(rest.points.front().d).epsilon(1e-14));
}

TEST_CASE("pinch with zero velocity runs to the end")
{
    CrestSpec sp;
    sp.eps = 0.0;
    StepControl c;
    c.t_final = 0.02;
    const PinchReport rep = pinch_experiment(2048, sp, c);
    CHECK(rep.reason == StopReason::Completed);
    CHECK(rep.t_stop == 0.02);
    CHECK(rep.v == 0.0);
    CHECK(rep.max_dev <= 1e-12);
    for (const auto& row : rep.rows) CHECK(row.e.E == 0.0);
}
