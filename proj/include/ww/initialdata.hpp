#pragma once

#include "ww/model.hpp"

#include <vector>

namespace ww {

WaveState disc_trivial(int n, cplx c);
WaveState disc_trivial(const Grid& g, cplx c);

struct VelocityMode {
    int m = 0;  // Ztbar mode, m >= 0
    cplx amp;
};

// Z = R e^{ia} + delta e^{i m a}; Ztbar from the given modes.
WaveState disc_smooth(int n, double R, cplx delta, int m, const std::vector<VelocityMode>& vel);
WaveState disc_smooth(const Grid& g, double R, cplx delta, int m, const std::vector<VelocityMode>& vel);

struct CrestSpec {
    double nu = 0.3;
    double eps = 0.1;
    int taylor_terms = 256;
    double rounding = 0.04;  // boundary sampled on |z| = 1 - rounding
    int ladder = 6;          // labels approaching the crest at 0

    void check() const;
};

struct CrestData {
    WaveState state;
    double d = 0.0;  // |Z(0) - Z(pi)|
    double v = 0.0;  // |Zt(0) - Zt(pi)|
    int terms = 0;       // series terms actually used
    double tail = 0.0;   // neglected series mass at the crest
    double scale = 0.0;  // c in Psi_z = c (1 - z^2)^{nu - 1}
};

// Symmetric two-crest blob moving under Ubar = -eps z; labels at 0, pi and a ladder toward 0.
CrestData disc_crest_pinch(int n, const CrestSpec& spec);
CrestData disc_crest_pinch(const Grid& g, const CrestSpec& spec);

// Closed-form 1/(i z Psi_z) on the boundary; vanishes at the crests.
cplx crest_inverse_trace(const CrestSpec& spec, double alpha);

// W = a e^{-ika}, Ztbar = vel e^{-ika}.
WaveState line_wave(int n, double g, double a, int k, cplx vel = 0.0);
WaveState line_wave(const Grid& grid, double g, double a, int k, cplx vel = 0.0);

// Deterministic random band-limited disc state; seed selects the draw.
WaveState random_smooth_disc(int n, unsigned long long seed);
WaveState random_smooth_disc(const Grid& g, unsigned long long seed);

}  // namespace ww
