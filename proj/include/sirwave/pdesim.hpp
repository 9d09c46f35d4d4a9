#ifndef SIRWAVE_PDESIM_HPP
#define SIRWAVE_PDESIM_HPP

#include <array>
#include <vector>

#include "sirwave/params.hpp"
#include "sirwave/profile.hpp"

namespace sirwave {

/// Method-of-lines state for the transformed system (N = B/mu1 - (S+I+R),
/// I, R) with delays inside the diffusion terms. History is a ring buffer
/// of past field snapshots at spacing dt, deep enough for the largest delay.
struct PdeState {
    double x0 = 0, dx = 0;
    int nx = 0;
    double time = 0;
    double dt = 0;
    std::array<std::vector<double>, 3> f;          // N, I, R
    std::vector<std::array<std::vector<double>, 3>> ring;
    int ring_head = 0;   // slot holding the current fields
    long clip_count = 0;

    double x(int j) const { return x0 + j * dx; }
};

/// Initializes the state with the given fields; history holds the initial
/// condition constant over [-tau_max, 0].
PdeState make_pde_state(const SirParameters& p, double x0, double dx, int nx, double dt,
                        const std::array<std::vector<double>, 3>& init);

/// One explicit Euler step: centered second differences on the history
/// fields at t - tau_i (delayed diffusion), reactions at the current time,
/// incidence from I at t - tau4. Zero-flux boundaries.
void pde_step(PdeState& st, const SirParameters& p);

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> I_frames;
    double x0 = 0, dx = 0;
    int nx = 0;
};

/// Least-squares slope of the level-crossing position of the I field over
/// the second half of the trajectory. level is an absolute field value.
/// Fronts are tracked in the middle 60% of the domain.
double front_speed(const Trajectory& traj, double level);

struct WaveComparison {
    double sup_error = 0;
    double l2_error = 0;
    double shift = 0;
};

/// Aligns a simulated I frame to the wave psi-profile by the level-set
/// shift and reports discrepancies over the tracked region.
WaveComparison compare_with_wave(const Trajectory& traj, std::size_t frame,
                                 const ProfileFun& wave_psi, double level);

} // namespace sirwave

#endif
