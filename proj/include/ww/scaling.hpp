#pragma once

#include "ww/energies.hpp"
#include "ww/stepper.hpp"

#include <string>
#include <vector>

namespace ww {

// lam = p / q with p, q powers of two.
struct ScalingParams {
    int p = 1, q = 1;
    double s = 0.0;

    double lam() const { return double(p) / q; }
    void check() const;
};

struct ScaledState {
    WaveState state;  // carries the scaled gravity in its mode tag
    bool lossy = false;
};

// Z -> Z(lam a)/lam, Zt -> lam^{s-1} Zt(lam a), g -> lam^{2s-1} g on a grid of size lam n.
ScaledState scale_state(const WaveState& s, const ScalingParams& prm);

struct CovarianceGap {
    std::string name;
    double lhs = 0.0;  // scaled-state value
    double rhs = 0.0;  // predicted power of lam times the original
    double relgap = 0.0;
};

std::vector<CovarianceGap> compare_reports(const EnergyReport& scaled, const EnergyReport& orig,
                                           const ScalingParams& prm);

// Energies E1, E2, E3, Ea, E, Ecal and the blow-up functional at t = 0.
std::vector<CovarianceGap> check_covariance(const WaveState& s, const ScalingParams& prm);

// Runs the original to lam^s t and the scaled state to t, then compares.
std::vector<CovarianceGap> check_time_covariance(const WaveState& s, const ScalingParams& prm,
                                                 double t, const StepControl& ctrl);

double max_relgap(const std::vector<CovarianceGap>& gaps);

}  // namespace ww
