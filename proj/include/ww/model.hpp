#pragma once

#include "ww/spectral.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ww {

enum class Mode { Disc, Line };

struct ModeTag {
    Mode kind = Mode::Disc;
    double g = 0.0;  // gravity, line only

    static ModeTag disc() { return {Mode::Disc, 0.0}; }
    static ModeTag line(double g) { return {Mode::Line, g}; }
    bool is_line() const { return kind == Mode::Line; }
};

struct Label {
    double alpha = 0.0;  // Lagrangian label
    double h = 0.0;      // current conformal position h(alpha, t)
};

// Prognostic pair. In line mode Z holds W with Z(a) = a + W(a).
struct WaveState {
    double t = 0.0;
    ModeTag mode;
    Field Z;
    Field Ztbar;
    std::vector<Label> labels;

    const Grid& grid() const { return Z.grid(); }
    bool is_line() const { return mode.is_line(); }
};

struct ModelError : std::runtime_error {
    std::string kind;
    ModelError(std::string k, const std::string& msg) : std::runtime_error(msg), kind(std::move(k)) {}
};

struct DerivedFields {
    Field Zap, invZap, omega;
    Field Zt, Ztbar_ap, Zt_ap;
    Field b, bap;
    Field A;
    double A_min_raw = 0.0;
    Field DapZtbar, DapZt;
    Field Zttbar;
    Field DtinvZap;
    Field q, Dtq;  // q = e^{ia}/Z_a, disc only
};

// Full-band Hilbert transforms in the convention of the mode.
Field hilbert_tilde(const ModeTag& mode, const Field& f);
Field hilbert_plus(const ModeTag& mode, const Field& f);

// Keeps the modes of boundary values of holomorphic functions (m >= 0 disc, m <= 0 line).
Field project_holo(const ModeTag& mode, const Field& f);

Field compute_Zap(const WaveState& s);
Field compute_A(const WaveState& s, double* raw_min = nullptr);
std::pair<Field, Field> compute_b(const WaveState& s);
Field compute_Zttbar(const WaveState& s);
DerivedFields derive(const WaveState& s);

struct Rhs {
    Field dZ, dZtbar, b;
    double A_max = 0.0;
};
Rhs rhs(const WaveState& s, double krasny_eps = 1e-13);

enum class Chain { InvZap, PapEiaOverZap, DapZtbar2 };
Field material_derivative_chain(const WaveState& s, Chain which);
Field material_derivative_chain(const WaveState& s, const DerivedFields& d, Chain which);

// D_t(d f) from f and D_t f.
Field dt_of_derivative(const DerivedFields& d, const Field& f, const Field& Dtf);

// Position of the interface at a conformal coordinate (adds a for line mode).
cplx interface_at(const WaveState& s, double alpha);

double holo_residual(const WaveState& s);

// Empty string when every state invariant holds.
std::string validate(const WaveState& s);

// Number of identical cells of a line state in [0, 2pi); 1 for the disc.
int cell_multiplicity(const WaveState& s);

}  // namespace ww
