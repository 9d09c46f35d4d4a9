#ifndef SIRWAVE_PARAMS_HPP
#define SIRWAVE_PARAMS_HPP

#include <array>
#include <map>
#include <string>

#include "sirwave/errors.hpp"

namespace sirwave {

/// Epidemiological and diffusion constants of the delayed SIR system,
/// plus the wave speed. Units follow the model: rates are 1/time,
/// diffusivities length^2/time, delays time.
struct SirParameters {
    double D_S = 1.0, D_I = 1.0, D_R = 1.0;
    double B = 0.0;                     // birth rate
    double mu1 = 0.0, mu2 = 0.0, mu3 = 0.0;
    double gamma = 0.0;                 // recovery rate
    double alpha = 0.0;                 // incidence saturation
    double beta = 0.0;                  // contact rate
    double tau1 = 0.0, tau2 = 0.0, tau3 = 0.0, tau4 = 0.0;
    double c = 0.0;                     // wave speed

    // Throws ValidationError naming the offending field.
    void validate() const;
};

struct Equilibrium {
    double S = 0, I = 0, R = 0;
    // printed closed forms from the source material, reported for
    // comparison only (they carry a typo in the I,R numerators)
    double S_closed = 0, I_closed = 0, R_closed = 0;
    bool closed_form_agrees = false;
};

/// Wave-frame quantities: dimensionless delays r_i = c*tau_i, the PQM shift
/// constants beta_i, componentwise profile bounds M_i and the endemic wave
/// limits k_i of the transformed system (N = B/mu1 - (S+I+R), I, R).
struct WaveFrameParameters {
    double r1 = 0, r2 = 0, r3 = 0, r4 = 0;
    double beta1 = 0, beta2 = 0, beta3 = 0;
    double M1 = 0, M2 = 0, M3 = 0;
    double k1 = 0, k2 = 0, k3 = 0;

    void validate(const SirParameters& p) const;
};

double reproduction_number(const SirParameters& p);

/// Positive steady state of the SIR system, solved by bisection on the
/// scalar steady-state equation in I. Requires R0 > 1.
Equilibrium endemic_equilibrium(const SirParameters& p);

/// c* = max over the six quadratics of 2*sqrt(|q_i|).
double critical_wave_speed(const SirParameters& p, double M1, double M2, double M3);

/// Assembles wave-frame parameters from model parameters and configured
/// box bounds; computes k_i from the endemic equilibrium and the PQM
/// constants beta_i.
WaveFrameParameters make_wave_frame(const SirParameters& p, double M1, double M2, double M3);

/// Flat key-value configuration file. Exactly the documented keys are
/// accepted; unknown keys raise ValidationError.
struct ParsedConfig {
    SirParameters params;
    double M1 = 0, M2 = 0, M3 = 0;
};
ParsedConfig parse_config_text(const std::string& text);
ParsedConfig parse_config_file(const std::string& path);
std::string config_to_text(const ParsedConfig& cfg);

} // namespace sirwave

#endif
