#include "ww/initialdata.hpp"

#include <cmath>
#include <random>

namespace ww {

namespace {

WaveState make(ModeTag mode, Field Z, Field Ztbar)
{
    WaveState s;
    s.mode = mode;
    s.Z = std::move(Z);
    s.Ztbar = std::move(Ztbar);
    return s;
}

void require_valid(const WaveState& s)
{
    const std::string why = validate(s);
    if (!why.empty()) throw InvalidInput("invalid initial state: " + why);
}

// Portable uniform double in [-1, 1).
double uniform(std::mt19937_64& r) { return double(r() >> 11) * 0x1.0p-52 - 1.0; }

}  // namespace

WaveState disc_trivial(const Grid& g, cplx c)
{
    return make(ModeTag::disc(), Field::mode(g, 1), Field::constant(g, std::conj(c)));
}

WaveState disc_smooth(const Grid& g, double R, cplx delta, int m, const std::vector<VelocityMode>& vel)
{
    if (!(R > std::abs(m) * std::abs(delta))) throw InvalidInput("univalence margin violated: need R > m |delta|");
    const int n = g.n;
    std::vector<cplx> c(n, 0.0);
    for (const auto& v : vel) {
        if (v.m < 0) throw InvalidInput("velocity modes must be >= 0 in the disc");
        if (v.m > g.cutoff) throw InvalidInput("velocity mode above the grid cutoff");
        c[mode_index(v.m, n)] += v.amp;
    }
    WaveState s = make(ModeTag::disc(), Field::mode(g, 1, R) + Field::mode(g, m, delta),
                       Field::from_coeffs(g, std::move(c)));
    require_valid(s);
    return s;
}

void CrestSpec::check() const
{
    if (!(nu > 0.0 && nu < 0.5)) throw InvalidInput("crest angle nu must lie in (0, 1/2)");
    if (!(eps >= 0.0)) throw InvalidInput("crest eps must be nonnegative");
    if (taylor_terms < 64) throw InvalidInput("taylor_terms must be >= 64");
    if (!(rounding > 0.0 && rounding < 0.5)) throw InvalidInput("crest rounding must lie in (0, 1/2)");
    if (ladder < 0) throw InvalidInput("ladder must be >= 0");
}

CrestData disc_crest_pinch(const Grid& g, const CrestSpec& spec)
{
    spec.check();
    const int n = g.n;
    const double c = 2.0 / std::beta(0.5, spec.nu);
    const double r = 1.0 - spec.rounding;
    // term k of Psi(r) is c a_k r^{2k+1} / (2k+1)
    std::vector<double> terms;
    double a = 1.0, rk = r;
    for (int k = 0; k < spec.taylor_terms; ++k) {
        terms.push_back(c * a * rk / (2.0 * k + 1.0));
        a *= (k + 1.0 - spec.nu) / (k + 1.0);
        rk *= r * r;
    }
    double tail = 0.0;
    for (int k = spec.taylor_terms; k < spec.taylor_terms + 200000; ++k) {
        const double t = c * a * rk / (2.0 * k + 1.0);
        tail += t;
        if (t < 1e-18) break;
        a *= (k + 1.0 - spec.nu) / (k + 1.0);
        rk *= r * r;
    }
    if (tail > 1e-10) throw InvalidInput("crest series tail above 1e-10; increase taylor_terms");
    int K = spec.taylor_terms;
    while (K > 0 && terms[K - 1] < 1e-18) --K;
    if (2 * K - 1 > g.cutoff) throw InvalidInput("crest series exceeds the grid band; refine the grid");
    std::vector<cplx> coef(n, 0.0);
    for (int k = 0; k < K; ++k) coef[mode_index(2 * k + 1, n)] = terms[k];
    CrestData out;
    out.terms = K;
    out.tail = tail;
    out.scale = c;
    out.state = make(ModeTag::disc(), Field::from_coeffs(g, std::move(coef)), Field::mode(g, 1, -spec.eps));
    auto& L = out.state.labels;
    L.push_back({0.0, 0.0});
    L.push_back({kPi, kPi});
    for (int j = 1; j <= spec.ladder; ++j) {
        const double al = 0.25 * std::pow(0.5, j - 1);
        L.push_back({al, al});
    }
    require_valid(out.state);
    out.d = std::abs(interface_at(out.state, 0.0) - interface_at(out.state, kPi));
    out.v = 2.0 * spec.eps;
    return out;
}

cplx crest_inverse_trace(const CrestSpec& spec, double alpha)
{
    const double c = 2.0 / std::beta(0.5, spec.nu);
    const cplx z = std::polar(1.0, alpha);
    const cplx w = 1.0 - z * z;
    if (std::abs(w) == 0.0) return 0.0;
    return std::pow(w, 1.0 - spec.nu) / (cplx(0.0, c) * z);
}

WaveState line_wave(const Grid& g, double g0, double a, int k, cplx vel)
{
    if (k < 1) throw InvalidInput("line wave number must be >= 1");
    if (!(std::abs(a) * k < 0.2)) throw InvalidInput("graph margin violated: need |a| k < 0.2");
    if (g0 < 0.0) throw InvalidInput("gravity must be nonnegative");
    if (k > g.cutoff) throw InvalidInput("wave number above the grid cutoff");
    WaveState s = make(ModeTag::line(g0), Field::mode(g, -k, a), Field::mode(g, -k, vel));
    require_valid(s);
    return s;
}

WaveState random_smooth_disc(const Grid& g, unsigned long long seed)
{
    std::mt19937_64 r(seed);
    const int n = g.n;
    const int M = 8;
    std::vector<cplx> z(n, 0.0), v(n, 0.0);
    z[mode_index(1, n)] = 1.0;
    for (int m = 1; m <= M; ++m) {
        const double w = 0.3 * std::pow(0.5, m);
        z[mode_index(m + 1, n)] += w * cplx(uniform(r), uniform(r)) / double(m + 1);
    }
    for (int m = 0; m <= M; ++m) v[mode_index(m, n)] = 0.4 * std::pow(0.6, m) * cplx(uniform(r), uniform(r));
    WaveState s = make(ModeTag::disc(), Field::from_coeffs(g, std::move(z)),
                       Field::from_coeffs(g, std::move(v)));
    require_valid(s);
    return s;
}

WaveState disc_trivial(int n, cplx c) { return disc_trivial(Grid::make(n), c); }

WaveState disc_smooth(int n, double R, cplx delta, int m, const std::vector<VelocityMode>& vel)
{
    return disc_smooth(Grid::make(n), R, delta, m, vel);
}

CrestData disc_crest_pinch(int n, const CrestSpec& spec) { return disc_crest_pinch(Grid::make(n), spec); }

WaveState line_wave(int n, double g0, double a, int k, cplx vel) { return line_wave(Grid::make(n), g0, a, k, vel); }

WaveState random_smooth_disc(int n, unsigned long long seed) { return random_smooth_disc(Grid::make(n), seed); }

}  // namespace ww
