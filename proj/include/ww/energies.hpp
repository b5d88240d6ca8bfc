#pragma once

#include "ww/model.hpp"

#include <optional>
#include <string>

namespace ww {

struct EnergyReport {
    double t = 0.0;
    double E1 = 0.0, E2 = 0.0, E3 = 0.0, Ea = 0.0, E = 0.0;
    double Ecal = 0.0;
    std::optional<double> Ecal_b;  // line only
    double blowup_B = 0.0;
    double holo_residual = 0.0;
    bool flagged = false;
    std::string flag_term;
};

struct EcalParts {
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, total = 0.0;
};

double combine_a(double e1, double e2);
double combine_cubic(double e1, double e2, double e3);

EnergyReport energy_report(const WaveState& s);
EnergyReport energy_report(const WaveState& s, const DerivedFields& d);
double blowup_functional(const WaveState& s);
double blowup_functional(const WaveState& s, const DerivedFields& d);

struct EcalReport {
    EcalParts ecal;                  // line boundary form or disc tilde form
    std::optional<EcalParts> ecal_b;  // line only
};
EcalReport ecal_report(const WaveState& s);
EcalReport ecal_report(const WaveState& s, const DerivedFields& d);

// Per-cell norms: squared norms are divided by the cell multiplicity.
double cell_l2_sq(const Field& f, int cells);
double cell_hhalf_sq(const Field& f, int cells);

}  // namespace ww
