#pragma once

#include "ww/energies.hpp"
#include "ww/initialdata.hpp"
#include "ww/stepper.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ww {

struct IdentityResult {
    std::string name;
    double max_abs_gap = 0.0;
    double rel_gap = 0.0;
    double tol = 0.0;
    bool passed = false;
    int n = 0;
    std::string state;
};

constexpr int kIdentityCount = 12;

std::vector<IdentityResult> run_identity_suite(const WaveState& s, const std::string& descriptor,
                                               double tol = 1e-8);
bool all_passed(const std::vector<IdentityResult>& r);

// D_t A from the bracket formula.
Field material_derivative_A(const WaveState& s, const DerivedFields& d);

struct RefinementRow {
    std::string name;
    std::vector<int> n;
    std::vector<double> gap;
    bool decays = false;  // >= factor 8 per doubling or at the floor
};

// Gaps of every identity for the same analytic state on each grid size.
std::vector<RefinementRow> refinement_check(const std::function<WaveState(int)>& make,
                                            const std::vector<int>& sizes, double floor = 1e-10);

struct Sample {
    double t = 0.0;
    double Ea = 0.0;
    double B = 0.0;
};

struct AprioriFit {
    double fitted_c = 0.0;
    double max_violation = 0.0;  // nonzero only for non-finite data
    double envelope_ratio = 0.0;  // max Ea / (Ea(0) exp(c int B))
    int fast_decrease = 0;        // samples where Ea falls faster than c B Ea
};

AprioriFit monitor_apriori(const std::vector<Sample>& traj);

// Fixed-step run with an energy sample every `every` steps.
std::vector<Sample> sample_trajectory(const WaveState& s0, double dt, double T, int every);

struct RigidityPoint {
    double t = 0.0;
    double h0 = 0.0, hpi = 0.0;
    double inv_zap0 = 0.0, inv_zappi = 0.0;
    double ztt0 = 0.0, zttpi = 0.0;
    cplx zt0, ztpi;
    double angle_ratio_dev = 0.0;  // |r - 1| at the innermost ladder label
    double d = 0.0;
};

struct RigidityTrace {
    std::vector<RigidityPoint> points;
    double tol_crest = 0.0;
    double max_inv_zap = 0.0, max_ztt = 0.0, max_angle_dev = 0.0;
    double max_zt_drift = 0.0;  // relative to the crest velocity at t = 0
    bool crest_inv_ok = false, crest_ztt_ok = false, angle_ok = false, velocity_ok = false;
};

RigidityPoint rigidity_point(const WaveState& s, const WaveState& s0);
RigidityTrace rigidity_track(const std::vector<WaveState>& traj);

struct PinchRow {
    double t = 0.0, dt = 0.0;
    EnergyReport e;
    double d = 0.0;
    double tail = 0.0;
};

struct PinchReport {
    double d = 0.0, v = 0.0;
    double E0 = 0.0;
    double fitted_c = 0.0;
    double t_lower = 0.0;  // c / sqrt(E(0))
    double t_upper = 0.0;  // d / v
    double t_stop = 0.0;
    StopReason reason = StopReason::Completed;
    double max_dev = 0.0;  // max |d(t) - (d - v t)| / d over the resolved window
    bool B_eventually_increasing = false;
    std::vector<PinchRow> rows;
};

// The Gronwall fit uses samples whose spectral tail stays below fit_tail.
PinchReport pinch_experiment(const Grid& g, const CrestSpec& spec, const StepControl& ctrl, double fit_tail = 1e-6);
PinchReport pinch_experiment(int n, const CrestSpec& spec, const StepControl& ctrl, double fit_tail = 1e-6);

bool eventually_increasing(const std::vector<double>& t, const std::vector<double>& B);

}  // namespace ww
