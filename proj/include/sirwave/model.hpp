#ifndef SIRWAVE_MODEL_HPP
#define SIRWAVE_MODEL_HPP

#include <array>
#include <cstdint>
#include <functional>

#include "sirwave/params.hpp"

namespace sirwave {

/// History segment of one scalar component over [-c*tau, 0]; value(s) with
/// s <= 0 returns the component at that offset from the evaluation point.
using History = std::function<double(double)>;

/// Reaction terms of the transformed wave system at one point, given the
/// three component histories. Component 2 reads the infected history at
/// offset -r4 (delayed incidence).
///   f1 = -mu1 phi(0) + (mu2-mu1) psi(0) + (mu3-mu1) chi(0)
///   f2 = -(mu2+gamma) psi(0) + beta (B/mu1 - phi(0)-psi(0)-chi(0)) psi(-r4)
///        / (1 + alpha psi(-r4))
///   f3 = -mu3 chi(0) + gamma psi(0)
/// The incidence enters with the positive sign of the wave system.
double nonlinearity(int i, const History& phi, const History& psi, const History& chi,
                    const SirParameters& p, const WaveFrameParameters& w);

/// Conservative Lipschitz constants on the box [0,M1]x[0,M2]x[0,M3] from
/// partial-derivative bounds.
std::array<double, 3> lipschitz_bounds(const SirParameters& p, const WaveFrameParameters& w);

struct PqmReport {
    std::array<double, 3> beta;      // the shift constants
    int samples = 0;
    int violations = 0;
    double worst_margin = 0;         // min over sampled inequalities
};

/// Returns (beta1, beta2, beta3) and verifies the five PQM inequalities on
/// randomized ordered sample pairs in the box. Throws PqmVerificationFailed
/// on any violation.
PqmReport pqm_constants(const SirParameters& p, const WaveFrameParameters& w,
                        int samples = 10000, std::uint64_t seed = 1);

} // namespace sirwave

#endif
