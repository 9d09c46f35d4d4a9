#ifndef SIRWAVE_GREENS_HPP
#define SIRWAVE_GREENS_HPP

#include <vector>

#include "sirwave/profile.hpp"

namespace sirwave {

/// Bounded fundamental kernel of x''(t) - a x'(t+r) - b x(t+r) = f(t).
///
/// The kernel is represented exactly as a resolvent series: expanding
/// 1/Delta(z) around the no-delay characteristic Delta0(z) = z^2 - a z - b
/// gives a sum of rational terms whose inverse transforms are polynomials
/// times the two exponentials e^{lambda_-} / e^{lambda_+}, shifted by
/// multiples of r. The series converges geometrically for small a*r; all
/// cell moments, tail masses, and derivatives come out in closed form.
class GreenKernel {
public:
    GreenKernel() = default;
    GreenKernel(double a, double b, double r, const UniformGrid& sample_grid);

    double a_coef() const { return a_; }
    double b_coef() const { return b_; }
    double delay() const { return r_; }
    double lambda_plus() const { return lam_p_; }
    double lambda_minus() const { return lam_m_; }

    /// pointwise evaluation of G and G'
    double value(double xi) const;
    double deriv(double xi) const;

    /// exact integrals of G over intervals / tails
    double integral(double x0, double x1) const;
    double tail_right(double x) const;  // int_x^inf
    double tail_left(double x) const;   // int_-inf^x
    double mass() const { return -1.0 / b_; }  // exact at every truncation order

    /// Exact hat-basis quadrature weights on spacing h: W_q = int G(u) hat_q(u) du
    /// for u_q = q*h, q in [-span, span]. Nonpositive by the kernel sign
    /// (clamped at 0 so downstream maps stay order-preserving).
    struct Weights {
        double h = 0;
        int span = 0;                 // q ranges over [-span, span]
        std::vector<double> w;        // size 2*span+1
        double tail_pos = 0;          // int_{u > span*h} G
        double tail_neg = 0;          // int_{u < -span*h} G
    };
    Weights hat_weights(double h) const;

    /// samples on the construction grid (for CSV output and decay fitting)
    const UniformGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }

    /// fitted decay envelope |G| <= K e^{-alpha |xi|}; set by decay_fit
    double K = 0;
    double alpha = 0;

private:
    double a_ = 0, b_ = 0, r_ = 0;
    double lam_p_ = 0, lam_m_ = 0;
    int N_ = 0;
    // branch polynomials per series order: coefficient arrays in xi
    std::vector<std::vector<double>> Pm_;  // xi >= 0 branch, e^{lam_m xi}
    std::vector<std::vector<double>> Pp_;  // xi < 0 branch, e^{lam_p xi}
    UniformGrid grid_;
    std::vector<double> values_;

    double base_value(int n, double u) const;
    double base_deriv(int n, double u) const;
    double base_integral(int n, double x0, double x1) const;       // int K_n
    double base_integral_m1(int n, double x0, double x1) const;    // int u K_n
    double base_tail_right(int n, double x) const;
    double base_tail_left(int n, double x) const;
    friend class KernelBuilderTest;
};

/// Closed-form two-exponential kernel at r = 0.
double green_closed_form_r0(double a, double b, double xi);

/// Builds the kernel after checking the imaginary-axis certificate.
/// Throws NoCertificate if the certificate fails and QuadratureStalled if
/// the resolvent series cannot reach tolerance (delay too large).
GreenKernel green_numeric(double a, double b, double r, const UniformGrid& grid);

/// Least-squares decay fit over the tail region; the envelope is inflated to
/// cover every sample. Throws FitFailed with fewer than 16 tail samples.
void decay_fit(GreenKernel& k);

/// (G*h) on h's grid. Outside-grid contributions use the tail constants and
/// exact kernel tail masses. Quadrature: exact hat-basis weights on the
/// shared spacing, so the map h -> G*h is linear with sign-definite weights.
ProfileFun convolve(const GreenKernel& k, const ProfileFun& h);

/// x = G*f solving x'' - a x'(t+r) - b x(t+r) = f.
ProfileFun solve_linear_fde(double a, double b, double r, const ProfileFun& f);

/// sup interior defect |x''(t) - a x'(t+r) - b x(t+r) - f(t)| via high-order
/// finite differences (test oracle surface).
double fde_defect(double a, double b, double r, const ProfileFun& x, const ProfileFun& f);

/// Direct Fourier evaluation (truncated trapezoid + analytic -1/eta^2 tail
/// correction), used to cross-check the series construction.
double green_fourier_probe(double a, double b, double r, double xi,
                           double H = 0, double deta = 2e-3);

} // namespace sirwave

#endif
