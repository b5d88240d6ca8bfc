#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace ww {

using cplx = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Uniform periodic grid on [0, 2pi); node j sits at 2pi (j + offset) / n.
struct Grid {
    int n = 0;
    double offset = 0.5;
    int cutoff = 0;

    static Grid make(int n, double offset = 0.5, int cutoff = -1);
    double h() const { return kTwoPi / n; }
    double node(int j) const { return kTwoPi * (j + offset) / n; }
    bool operator==(const Grid& o) const
    {
        return n == o.n && offset == o.offset && cutoff == o.cutoff;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

// Storage index of mode m in [-n/2, n/2) and back (FFT ordering).
inline int mode_index(int m, int n) { return m >= 0 ? m : m + n; }
inline int index_mode(int k, int n) { return k < n / 2 ? k : k - n; }

// Nodal samples with a cached Fourier view f^(m) = (1/2pi) int f e^{-im a}.
class Field {
public:
    Field() = default;
    Field(const Grid& g, std::vector<cplx> values);

    static Field from_coeffs(const Grid& g, std::vector<cplx> coeffs);
    static Field constant(const Grid& g, cplx c);
    static Field from_function(const Grid& g, const std::function<cplx(double)>& f);
    static Field mode(const Grid& g, int m, cplx amp = 1.0);

    const Grid& grid() const { return grid_; }
    int size() const { return grid_.n; }
    const std::vector<cplx>& values() const { return values_; }
    const cplx& operator[](int j) const { return values_[j]; }
    const std::vector<cplx>& coeffs() const;
    cplx coeff(int m) const;
    bool has_coeffs() const { return static_cast<bool>(coeffs_); }

private:
    Grid grid_;
    std::vector<cplx> values_;
    mutable std::shared_ptr<const std::vector<cplx>> coeffs_;
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(const Field& a, const Field& b);
Field operator/(const Field& a, const Field& b);
Field operator-(const Field& a);
Field operator*(cplx s, const Field& a);
Field operator*(const Field& a, cplx s);
Field operator+(const Field& a, cplx s);
Field operator-(const Field& a, cplx s);
Field conj(const Field& a);
Field re(const Field& a);
Field im(const Field& a);
Field abs(const Field& a);
Field sqrt_real(const Field& a);
Field map(const Field& a, const std::function<cplx(cplx)>& f);
cplx mean(const Field& a);

void check_same_grid(const Field& a, const Field& b);
void check_finite(const Field& a);

enum class Mult {
    HilbertDisc,      // sgn(m), mean -> 0
    HilbertDiscPlus,  // sgn(m) + Av
    HilbertLine,      // -sgn(m), mean -> 0
    HilbertLinePlus,  // -sgn(m) + Av
    AbsD,             // |m|
    AbsDHalf,         // |m|^{1/2}
    Deriv,            // i m
    ProjHolo,         // keep m >= 0
    ProjAnti          // keep m < 0
};

Field apply_multiplier(Mult kind, const Field& f);
Field deriv(const Field& f);

// Negative-control hook: perturbs every Hilbert symbol by the given amount.
void set_hilbert_corruption(double delta);
double hilbert_corruption();

// Zero modes above the cutoff and coefficients below eps in modulus.
Field filter(const Field& f, double eps = 1e-13);

enum class BracketMethod { Multiplier, Quadrature };
Field bracket(int order, const std::vector<Field>& fs, const Field& g,
              BracketMethod method);

// Disc-convention commutator [f, H~] g = f H~g - H~(fg).
Field commutator(const Field& f, const Field& g);

// (1/8pi) int |f(a) - f(b)|^2 / sin^2((a-b)/2) db at every node.
Field sine_kernel_energy(const Field& f);

enum class Norm { L2, Linf, Hhalf, LinfCapHhalf };
double norm(Norm kind, const Field& f);
double hhalf_quadrature(const Field& f);

cplx interpolate(const Field& f, double alpha);
struct Resampled {
    Field field;
    bool lossy = false;
};
Resampled resample(const Field& f, int m);

// Sum of |f^(m)|^2 above `from` over the total.
double tail_fraction(const Field& f, int from);

}  // namespace ww
