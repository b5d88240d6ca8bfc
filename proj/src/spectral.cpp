#include "ww/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace ww {

namespace {

std::atomic<double> g_hilbert_delta{0.0};

struct Plans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex g_plan_mutex;

const Plans& plans_for(int n)
{
    static std::map<int, Plans> cache;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto* a = fftw_alloc_complex(n);
    auto* b = fftw_alloc_complex(n);
    Plans p;
    p.fwd = fftw_plan_dft_1d(n, a, b, FFTW_FORWARD, FFTW_ESTIMATE);
    p.bwd = fftw_plan_dft_1d(n, a, b, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(a);
    fftw_free(b);
    return cache.emplace(n, p).first->second;
}

// e^{i m 2pi offset / n} for each storage index.
const std::vector<cplx>& phases_for(const Grid& g)
{
    static std::map<std::pair<int, double>, std::vector<cplx>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(g.n, g.offset);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<cplx> ph(g.n);
    for (int k = 0; k < g.n; ++k) {
        int m = index_mode(k, g.n);
        ph[k] = std::polar(1.0, kTwoPi * m * g.offset / g.n);
    }
    return cache.emplace(key, std::move(ph)).first->second;
}

void run_fft(int n, bool forward, const cplx* in, cplx* out)
{
    const Plans& p = plans_for(n);
    auto* a = fftw_alloc_complex(n);
    auto* b = fftw_alloc_complex(n);
    std::copy(in, in + n, reinterpret_cast<cplx*>(a));
    fftw_execute_dft(forward ? p.fwd : p.bwd, a, b);
    std::copy(reinterpret_cast<cplx*>(b), reinterpret_cast<cplx*>(b) + n, out);
    fftw_free(a);
    fftw_free(b);
}

std::vector<cplx> to_coeffs(const Grid& g, const std::vector<cplx>& v)
{
    std::vector<cplx> c(g.n);
    run_fft(g.n, true, v.data(), c.data());
    const auto& ph = phases_for(g);
    const double inv = 1.0 / g.n;
    for (int k = 0; k < g.n; ++k) c[k] *= std::conj(ph[k]) * inv;
    return c;
}

std::vector<cplx> to_values(const Grid& g, const std::vector<cplx>& c)
{
    std::vector<cplx> tmp(g.n), v(g.n);
    const auto& ph = phases_for(g);
    for (int k = 0; k < g.n; ++k) tmp[k] = c[k] * ph[k];
    run_fft(g.n, false, tmp.data(), v.data());
    return v;
}

// Applies a symbol over the full band; the Nyquist mode is dropped.
template <class Sym>
Field apply_symbol(const Field& f, Sym sym, int cutoff)
{
    const int n = f.size();
    std::vector<cplx> c = f.coeffs();
    for (int k = 0; k < n; ++k) {
        int m = index_mode(k, n);
        if (m == -n / 2 || std::abs(m) > cutoff)
            c[k] = 0.0;
        else
            c[k] *= sym(m);
    }
    return Field::from_coeffs(f.grid(), std::move(c));
}

double sgn(int m) { return m > 0 ? 1.0 : (m < 0 ? -1.0 : 0.0); }

cplx symbol(Mult kind, int m)
{
    const double d = 1.0 + g_hilbert_delta.load();
    switch (kind) {
    case Mult::HilbertDisc: return sgn(m) * d;
    case Mult::HilbertDiscPlus: return m == 0 ? 1.0 : sgn(m) * d;
    case Mult::HilbertLine: return -sgn(m) * d;
    case Mult::HilbertLinePlus: return m == 0 ? 1.0 : -sgn(m) * d;
    case Mult::AbsD: return std::abs(m);
    case Mult::AbsDHalf: return std::sqrt(static_cast<double>(std::abs(m)));
    case Mult::Deriv: return cplx(0.0, m);
    case Mult::ProjHolo: return m >= 0 ? 1.0 : 0.0;
    case Mult::ProjAnti: return m < 0 ? 1.0 : 0.0;
    }
    return 0.0;
}

Field hilbert_full(const Field& f)
{
    return apply_symbol(f, [](int m) { return symbol(Mult::HilbertDisc, m); },
                        f.size());
}

// Odd-offset kernel tables for the alternating-point rule.
struct Kernels {
    std::vector<double> cot, csc2, cos_csc3;
};

const Kernels& kernels_for(int n)
{
    static std::map<int, Kernels> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    Kernels k;
    k.cot.assign(n, 0.0);
    k.csc2.assign(n, 0.0);
    k.cos_csc3.assign(n, 0.0);
    const double h = kTwoPi / n;
    for (int d = 1; d < n; d += 2) {
        double s = std::sin(0.5 * d * h), c = std::cos(0.5 * d * h);
        k.cot[d] = c / s;
        k.csc2[d] = 1.0 / (s * s);
        k.cos_csc3[d] = c / (s * s * s);
    }
    return cache.emplace(n, std::move(k)).first->second;
}

Field bracket_quadrature(int order, const std::vector<Field>& fs, const Field& g)
{
    const int n = g.size();
    const Kernels& K = kernels_for(n);
    const double w = 2.0 * g.grid().h();
    const cplx I(0.0, 1.0);
    cplx pref;
    const std::vector<double>* ker;
    if (order == 1) {
        pref = 1.0 / (kTwoPi * I);
        ker = &K.cot;
    } else if (order == 2) {
        pref = -1.0 / (4.0 * kPi * I);
        ker = &K.csc2;
    } else {
        pref = 1.0 / (8.0 * kPi * I);
        ker = &K.cos_csc3;
    }
    const auto& gv = g.values();
    std::vector<cplx> out(n);
    for (int i = 0; i < n; ++i) {
        cplx acc = 0.0;
        for (int d = 1; d < n; d += 2) {
            int k = (i + d) % n;
            cplx prod = gv[k] * (*ker)[d];
            for (const auto& f : fs) prod *= f[i] - f[k];
            acc += prod;
        }
        out[i] = pref * w * acc;
    }
    return Field(g.grid(), std::move(out));
}

Field bracket2_mult(const Field& f1, const Field& f2, const Field& g)
{
    Field gp = deriv(g);
    return commutator(f2, deriv(f1) * g) + commutator(f1, deriv(f2) * g)
           - f1 * commutator(f2, gp) - f2 * commutator(f1, gp)
           + commutator(f1 * f2, gp);
}

Field bracket3_mult(const Field& f1, const Field& f2, const Field& f3, const Field& g)
{
    Field gp = deriv(g);
    Field s = bracket2_mult(f2, f3, deriv(f1) * g) + bracket2_mult(f1, f3, deriv(f2) * g)
              + bracket2_mult(f1, f2, deriv(f3) * g) - f2 * bracket2_mult(f1, f3, gp)
              - f3 * bracket2_mult(f1, f2, gp) + bracket2_mult(f1, f2 * f3, gp);
    return 0.5 * s;
}

template <class Op>
Field zip(const Field& a, const Field& b, Op op)
{
    check_same_grid(a, b);
    std::vector<cplx> v(a.size());
    for (int j = 0; j < a.size(); ++j) v[j] = op(a[j], b[j]);
    return Field(a.grid(), std::move(v));
}

}  // namespace

Grid Grid::make(int n, double offset, int cutoff)
{
    if (n < 16 || (n & (n - 1)) != 0)
        throw InvalidInput("grid size must be a power of two >= 16");
    if (!(offset > 0.0 && offset < 1.0)) throw InvalidInput("grid offset must lie in (0,1)");
    if (cutoff < 0) cutoff = n / 3;
    if (cutoff > n / 2) throw InvalidInput("cutoff exceeds n/2");
    return Grid{n, offset, cutoff};
}

Field::Field(const Grid& g, std::vector<cplx> values) : grid_(g), values_(std::move(values))
{
    if (static_cast<int>(values_.size()) != g.n) throw InvalidInput("field size mismatch");
}

Field Field::from_coeffs(const Grid& g, std::vector<cplx> coeffs)
{
    if (static_cast<int>(coeffs.size()) != g.n) throw InvalidInput("coefficient size mismatch");
    Field f(g, to_values(g, coeffs));
    f.coeffs_ = std::make_shared<const std::vector<cplx>>(std::move(coeffs));
    return f;
}

Field Field::constant(const Grid& g, cplx c) { return Field(g, std::vector<cplx>(g.n, c)); }

Field Field::from_function(const Grid& g, const std::function<cplx(double)>& f)
{
    std::vector<cplx> v(g.n);
    for (int j = 0; j < g.n; ++j) v[j] = f(g.node(j));
    return Field(g, std::move(v));
}

Field Field::mode(const Grid& g, int m, cplx amp)
{
    // phase reduced exactly mod n before scaling to keep large |m| accurate
    std::vector<cplx> v(g.n);
    const long long mm = m;
    for (int j = 0; j < g.n; ++j) {
        double turns = double((mm * j) % g.n) + mm * g.offset;
        v[j] = amp * std::polar(1.0, kTwoPi * turns / g.n);
    }
    return Field(g, std::move(v));
}

const std::vector<cplx>& Field::coeffs() const
{
    if (!coeffs_) coeffs_ = std::make_shared<const std::vector<cplx>>(to_coeffs(grid_, values_));
    return *coeffs_;
}

cplx Field::coeff(int m) const
{
    if (m < -grid_.n / 2 || m >= grid_.n / 2) return 0.0;
    return coeffs()[mode_index(m, grid_.n)];
}

void check_same_grid(const Field& a, const Field& b)
{
    if (a.grid() != b.grid()) throw InvalidInput("grid mismatch");
}

void check_finite(const Field& a)
{
    for (const auto& z : a.values())
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw InvalidInput("non-finite samples");
}

Field operator+(const Field& a, const Field& b) { return zip(a, b, std::plus<cplx>()); }
Field operator-(const Field& a, const Field& b) { return zip(a, b, std::minus<cplx>()); }
Field operator*(const Field& a, const Field& b) { return zip(a, b, std::multiplies<cplx>()); }
Field operator/(const Field& a, const Field& b) { return zip(a, b, std::divides<cplx>()); }
Field operator-(const Field& a) { return map(a, [](cplx z) { return -z; }); }
Field operator*(cplx s, const Field& a) { return map(a, [s](cplx z) { return s * z; }); }
Field operator*(const Field& a, cplx s) { return s * a; }
Field operator+(const Field& a, cplx s) { return map(a, [s](cplx z) { return z + s; }); }
Field operator-(const Field& a, cplx s) { return map(a, [s](cplx z) { return z - s; }); }
Field conj(const Field& a) { return map(a, [](cplx z) { return std::conj(z); }); }
Field re(const Field& a) { return map(a, [](cplx z) { return cplx(z.real(), 0.0); }); }
Field im(const Field& a) { return map(a, [](cplx z) { return cplx(z.imag(), 0.0); }); }
Field abs(const Field& a) { return map(a, [](cplx z) { return cplx(std::abs(z), 0.0); }); }
Field sqrt_real(const Field& a)
{
    return map(a, [](cplx z) { return cplx(std::sqrt(std::max(z.real(), 0.0)), 0.0); });
}

Field map(const Field& a, const std::function<cplx(cplx)>& f)
{
    std::vector<cplx> v(a.size());
    for (int j = 0; j < a.size(); ++j) v[j] = f(a[j]);
    return Field(a.grid(), std::move(v));
}

cplx mean(const Field& a) { return a.coeff(0); }

void set_hilbert_corruption(double delta) { g_hilbert_delta.store(delta); }
double hilbert_corruption() { return g_hilbert_delta.load(); }

Field apply_multiplier(Mult kind, const Field& f)
{
    check_finite(f);
    return apply_symbol(f, [kind](int m) { return symbol(kind, m); }, f.grid().cutoff);
}

Field deriv(const Field& f)
{
    return apply_symbol(f, [](int m) { return cplx(0.0, m); }, f.size());
}

Field filter(const Field& f, double eps)
{
    const int n = f.size();
    std::vector<cplx> c = f.coeffs();
    for (int k = 0; k < n; ++k) {
        int m = index_mode(k, n);
        if (m == -n / 2 || std::abs(m) > f.grid().cutoff || std::abs(c[k]) < eps) c[k] = 0.0;
    }
    return Field::from_coeffs(f.grid(), std::move(c));
}

Field commutator(const Field& f, const Field& g)
{
    check_same_grid(f, g);
    return f * hilbert_full(g) - hilbert_full(f * g);
}

Field bracket(int order, const std::vector<Field>& fs, const Field& g, BracketMethod method)
{
    if (order < 1 || order > 3) throw InvalidInput("bracket order must be 1, 2 or 3");
    if (static_cast<int>(fs.size()) != order) throw InvalidInput("bracket order/argument mismatch");
    for (const auto& f : fs) check_same_grid(f, g);
    if (method == BracketMethod::Quadrature) return bracket_quadrature(order, fs, g);
    if (order == 1) return commutator(fs[0], g);
    if (order == 2) return bracket2_mult(fs[0], fs[1], g);
    return bracket3_mult(fs[0], fs[1], fs[2], g);
}

Field sine_kernel_energy(const Field& f)
{
    const int n = f.size();
    const Kernels& K = kernels_for(n);
    const double w = 2.0 * f.grid().h() / (8.0 * kPi);
    std::vector<cplx> out(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int d = 1; d < n; d += 2) acc += std::norm(f[i] - f[(i + d) % n]) * K.csc2[d];
        out[i] = w * acc;
    }
    return Field(f.grid(), std::move(out));
}

double norm(Norm kind, const Field& f)
{
    check_finite(f);
    switch (kind) {
    case Norm::L2: {
        double s = 0.0;
        for (const auto& z : f.values()) s += std::norm(z);
        return std::sqrt(s * f.grid().h());
    }
    case Norm::Linf: {
        double s = 0.0;
        for (const auto& z : f.values()) s = std::max(s, std::abs(z));
        return s;
    }
    case Norm::Hhalf: {
        const auto& c = f.coeffs();
        double s = 0.0;
        for (int k = 0; k < f.size(); ++k) s += std::abs(index_mode(k, f.size())) * std::norm(c[k]);
        return std::sqrt(kTwoPi * s);
    }
    case Norm::LinfCapHhalf: return norm(Norm::Linf, f) + norm(Norm::Hhalf, f);
    }
    return 0.0;
}

double hhalf_quadrature(const Field& f)
{
    const Field e = sine_kernel_energy(f);
    double s = 0.0;
    for (const auto& z : e.values()) s += z.real();
    return std::sqrt(s * f.grid().h());
}

cplx interpolate(const Field& f, double alpha)
{
    const auto& c = f.coeffs();
    const int n = f.size();
    cplx s = 0.0;
    for (int k = 0; k < n; ++k) s += c[k] * std::polar(1.0, index_mode(k, n) * alpha);
    return s;
}

Resampled resample(const Field& f, int m)
{
    Grid g = Grid::make(m, f.grid().offset);
    const int n = f.size();
    const auto& c = f.coeffs();
    double cmax = 0.0;
    for (const auto& z : c) cmax = std::max(cmax, std::abs(z));
    std::vector<cplx> out(m, 0.0);
    bool lossy = false;
    for (int k = 0; k < n; ++k) {
        int md = index_mode(k, n);
        if (md >= -m / 2 && md < m / 2 && !(m < n && md == -m / 2))
            out[mode_index(md, m)] = c[k];
        else if (std::abs(c[k]) > 1e-14 * std::max(cmax, 1e-300))
            lossy = true;
    }
    return {Field::from_coeffs(g, std::move(out)), lossy};
}

double tail_fraction(const Field& f, int from)
{
    const auto& c = f.coeffs();
    double tot = 0.0, tail = 0.0;
    for (int k = 0; k < f.size(); ++k) {
        double e = std::norm(c[k]);
        tot += e;
        if (std::abs(index_mode(k, f.size())) > from) tail += e;
    }
    return tot > 0.0 ? tail / tot : 0.0;
}

}  // namespace ww
