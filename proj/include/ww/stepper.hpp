#pragma once

#include "ww/model.hpp"

#include <functional>
#include <string>

namespace ww {

struct StepControl {
    double dt_init = 1e-3;
    double cfl = 0.5;
    double dt_max = 1e-2;
    double dt_min = 1e-10;
    double t_final = 1.0;
    double filter_eps = 1e-13;
    double tail_threshold = 1e-4;
    int observe_every = 1;

    void check() const;
};

enum class StopReason { Completed, ResolutionLost, BlowupDetected, NearSingularNode, DtUnderflow, NegativeA };
std::string to_string(StopReason r);

WaveState rk4_step(const WaveState& s, double dt, double filter_eps = 1e-13);

// RK4 for dh/dt = b(h) with b frozen over the step; positions wrap mod 2pi.
std::vector<Label> advance_labels(const std::vector<Label>& labels, double dt, const Field& b);

// cfl h / max(|b|, sqrt(|A| h)), capped by dt_max.
double cfl_dt(const WaveState& s, const StepControl& c, const Rhs& k);

// Spectral energy fraction of Ztbar above cutoff/2.
double resolution_tail(const WaveState& s);

using Observer = std::function<void(const WaveState&, long step, double dt)>;

struct EvolveResult {
    WaveState state;
    StopReason reason = StopReason::Completed;
    long steps = 0;
    std::string detail;
};

// Observer runs at step 0, every `observe_every` steps and at the final state.
EvolveResult evolve(const WaveState& s0, const StepControl& ctrl, const Observer& obs,
                    long step0 = 0);

WaveState integrate_fixed(const WaveState& s0, double dt, int nsteps, double filter_eps = 1e-13);

}  // namespace ww
