#pragma once

#include "ww/initialdata.hpp"
#include "ww/scaling.hpp"
#include "ww/stepper.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ww {

struct ConfigError : std::runtime_error {
    int line = 0;
    std::string key;
    ConfigError(int l, std::string k, const std::string& msg);
};

enum class InitKind { Trivial, Smooth, Crest, LineWave, Random, Checkpoint };

struct RunConfig {
    Mode mode = Mode::Disc;
    int n_grid = 256;
    double grid_offset = 0.5;
    double dealias_fraction = 1.0 / 3.0;
    StepControl ctrl;
    double g = 1.0;

    InitKind init = InitKind::Smooth;
    // smooth disc
    double R = 1.0;
    double delta = 0.05;
    int m = 3;
    std::vector<VelocityMode> vel_modes{{1, 0.05}, {2, 0.02}};
    // trivial disc and line wave velocity
    cplx vel = 0.0;
    // line wave
    double a = 0.05;
    int k = 2;
    // crest
    CrestSpec crest;
    unsigned long long seed = 1;
    std::string checkpoint_in;

    std::string out_dir = ".";
    int output_every = 1;
    int checkpoint_every = 0;

    bool verify_identities = true;
    bool verify_refinement = true;
    double verify_tol = 0.0;  // 0 selects the grid default
    double hilbert_corruption = 0.0;

    std::vector<ScalingParams> scale_list;
    double scale_time = 0.5;

    Grid grid() const;
    void check() const;
};

// Flat "key = value" text with # comments; unknown keys are rejected.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Registered identity tolerance for grid size n.
double identity_tolerance(int n);

}  // namespace ww
