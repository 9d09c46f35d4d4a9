#ifndef SIRWAVE_CHARROOTS_HPP
#define SIRWAVE_CHARROOTS_HPP

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "sirwave/params.hpp"

namespace sirwave {

/// lambda^2 - c lambda + q, one of the six front quadratics.
struct QuadraticChar {
    double c = 0;
    double q = 0;     // signed constant term
    int label = 0;    // 1..6
};

/// Delta(eta) = eta^2 - c eta e^{r eta} + q e^{r eta}; coincides with the
/// paired quadratic at r = 0.
struct ExpCharPolynomial {
    double c = 0;
    double q = 0;
    double r = 0;
    int label = 0;

    double eval(double eta) const;
    double deriv(double eta) const;
};

/// a z^2 - a z e^{rz} - b e^{rz}, the kernel-side characteristic family.
struct GeneralChar {
    double a = 0;   // nonzero
    double b = 0;   // > 0
    double r = 0;

    std::complex<double> eval(std::complex<double> z) const;
};

/// The six q-constants built from the model (same constant for P_i and
/// Delta_i, so they agree at r = 0).
std::array<QuadraticChar, 6> front_quadratics(const SirParameters& p,
                                              double M1, double M2, double M3);
std::array<ExpCharPolynomial, 6> front_exp_polynomials(const SirParameters& p,
                                                       const WaveFrameParameters& w);

/// min{lambda > 0 : lambda^2 - c lambda + q = 0} via the stable formula.
double smallest_positive_root(const QuadraticChar& pq);

struct ContinuationStep {
    double r = 0;
    double eta = 0;
    double start_residual = 0;  // |Delta(eta_prev)| at this substep's r
    double residual = 0;        // |Delta(eta)| after Newton
};
struct ContinuationResult {
    double eta = 0;
    std::vector<ContinuationStep> trace;
};

/// Continues the r=0 root `seed` to the polynomial's delay by stepping r in
/// substeps of at most 0.01*(1+|r|) with Newton correction (step halving on
/// failure). |Delta(eta)| < 1e-12 at every accepted substep.
ContinuationResult continue_root(const ExpCharPolynomial& ec, double seed);

struct AxisCertificate {
    double grid_min_modulus = 0;   // min |Delta(i eta)| over the scanned grid
    double tail_bound = 0;         // |Delta(i eta)| >= this for |eta| > H
    double H = 0;
    double margin = 0;             // min(grid_min_modulus, tail_bound)
};

/// Certifies that the characteristic function has no roots on the imaginary
/// axis: dense modulus scan on [0, H] plus the quadratic tail bound
/// |Delta(i eta)| >= |a| eta^2 / 2 beyond H.
AxisCertificate imaginary_axis_clear(const GeneralChar& gc);

/// Winding number of Delta around the rectangle [re_lo,re_hi]x[-im,im] via
/// adaptive argument tracking. Throws BoundaryRoot if the contour modulus
/// margin is too small.
int strip_root_count(const GeneralChar& gc, double re_lo, double re_hi, double im_halfwidth);

} // namespace sirwave

#endif
