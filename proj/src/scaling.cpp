#include "ww/scaling.hpp"

#include <algorithm>
#include <cmath>

namespace ww {

namespace {

bool pow2(int x) { return x > 0 && (x & (x - 1)) == 0; }

double relgap(double a, double b)
{
    const double d = std::abs(a - b);
    const double m = std::max(std::abs(a), std::abs(b));
    return m == 0.0 ? 0.0 : d / m;
}

Field dilate(const Field& f, const ScalingParams& prm, double amp, const Grid& g2, bool& lossy)
{
    const int n = f.size(), n2 = g2.n;
    const auto& c = f.coeffs();
    double cmax = 0.0;
    for (const auto& z : c) cmax = std::max(cmax, std::abs(z));
    std::vector<cplx> out(n2, 0.0);
    for (int k = 0; k < n; ++k) {
        const int m = index_mode(k, n);
        if (c[k] == 0.0) continue;
        const long long num = static_cast<long long>(m) * prm.p;
        const bool tiny = std::abs(c[k]) <= 1e-14 * cmax;
        if (num % prm.q != 0) {
            lossy = lossy || !tiny;
            continue;
        }
        const long long m2 = num / prm.q;
        if (m2 < -n2 / 2 || m2 >= n2 / 2) {
            lossy = lossy || !tiny;
            continue;
        }
        out[mode_index(static_cast<int>(m2), n2)] = amp * c[k];
    }
    return Field::from_coeffs(g2, std::move(out));
}

}  // namespace

void ScalingParams::check() const
{
    if (!pow2(p) || !pow2(q)) throw InvalidInput("scaling lambda must be p/q with p, q powers of two");
}

ScaledState scale_state(const WaveState& s, const ScalingParams& prm)
{
    prm.check();
    if (!s.is_line()) throw InvalidInput("scaling is supported in line mode only");
    const double lam = prm.lam();
    const long long n2 = static_cast<long long>(s.grid().n) * prm.p / prm.q;
    if (n2 < 16 || n2 > (1 << 24)) throw InvalidInput("scaled grid size out of range");
    const Grid g2 = Grid::make(static_cast<int>(n2), s.grid().offset);
    ScaledState out;
    out.state.t = s.t;
    out.state.mode = ModeTag::line(std::pow(lam, 2.0 * prm.s - 1.0) * s.mode.g);
    out.state.Z = dilate(s.Z, prm, 1.0 / lam, g2, out.lossy);
    out.state.Ztbar = dilate(s.Ztbar, prm, std::pow(lam, prm.s - 1.0), g2, out.lossy);
    out.state.labels = s.labels;
    for (auto& l : out.state.labels) {
        l.alpha /= lam;
        l.h /= lam;
    }
    return out;
}

std::vector<CovarianceGap> compare_reports(const EnergyReport& sc, const EnergyReport& o,
                                           const ScalingParams& prm)
{
    const double l2 = std::pow(prm.lam(), 2.0 * prm.s);
    std::vector<CovarianceGap> out;
    auto add = [&](const char* name, double lhs, double rhs) {
        out.push_back({name, lhs, rhs, relgap(lhs, rhs)});
    };
    add("E1", sc.E1, l2 * o.E1);
    add("E2", sc.E2, l2 * l2 * o.E2);
    add("E3", sc.E3, l2 * l2 * l2 * o.E3);
    add("Ea", sc.Ea, l2 * o.Ea);
    add("E", sc.E, l2 * o.E);
    add("Ecal", sc.Ecal, l2 * o.Ecal);
    add("blowup_B", sc.blowup_B, std::pow(prm.lam(), prm.s) * o.blowup_B);
    return out;
}

std::vector<CovarianceGap> check_covariance(const WaveState& s, const ScalingParams& prm)
{
    const ScaledState sc = scale_state(s, prm);
    if (sc.lossy) throw InvalidInput("scaled state is not representable on the dilated grid");
    return compare_reports(energy_report(sc.state), energy_report(s), prm);
}

std::vector<CovarianceGap> check_time_covariance(const WaveState& s, const ScalingParams& prm,
                                                 double t, const StepControl& ctrl)
{
    const ScaledState sc = scale_state(s, prm);
    if (sc.lossy) throw InvalidInput("scaled state is not representable on the dilated grid");
    const double ts = std::pow(prm.lam(), prm.s);
    StepControl c0 = ctrl, c1 = ctrl;
    c0.t_final = s.t + ts * t;
    c1.t_final = s.t + t;
    const EvolveResult r0 = evolve(s, c0, nullptr);
    const EvolveResult r1 = evolve(sc.state, c1, nullptr);
    if (r0.reason != StopReason::Completed || r1.reason != StopReason::Completed)
        throw InvalidInput("co-run trajectory stopped early: " + to_string(r0.reason) + "/" +
                           to_string(r1.reason));
    return compare_reports(energy_report(r1.state), energy_report(r0.state), prm);
}

double max_relgap(const std::vector<CovarianceGap>& gaps)
{
    double m = 0.0;
    for (const auto& g : gaps) m = std::max(m, g.relgap);
    return m;
}

}  // namespace ww
