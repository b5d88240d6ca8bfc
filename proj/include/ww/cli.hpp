#pragma once

#include "ww/config.hpp"
#include "ww/energies.hpp"

#include <string>
#include <vector>

namespace ww {

enum ExitCode { kExitOk = 0, kExitConfig = 2, kExitVerify = 3, kExitNumerical = 4 };

struct Checkpoint {
    WaveState state;
    long step = 0;
};

std::string checkpoint_to_json(const WaveState& s, long step);
Checkpoint checkpoint_from_json(const std::string& text);
void save_checkpoint(const std::string& path, const WaveState& s, long step);
Checkpoint load_checkpoint(const std::string& path);

// Timeseries CSV: t, dt, E1, E2, E3, Ea, E, Ecal, blowup_B, holo_residual[, d_pinch], stop_reason.
std::string csv_header(bool pinch);
std::string csv_row(const EnergyReport& e, double dt, const double* d_pinch, const std::string& stop);
std::string format_real(double x);

// Pinch distance between the first two tracked labels.
double pinch_distance(const WaveState& s);

WaveState initial_state(const RunConfig& cfg, long* step0 = nullptr);

int cmd_simulate(const RunConfig& cfg, bool quiet);
int cmd_verify(const RunConfig& cfg, bool quiet);
int cmd_scale_check(const RunConfig& cfg, bool quiet);
int cmd_pinch(const RunConfig& cfg, bool quiet);

int run_cli(int argc, char** argv);

}  // namespace ww
