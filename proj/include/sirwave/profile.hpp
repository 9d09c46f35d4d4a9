#ifndef SIRWAVE_PROFILE_HPP
#define SIRWAVE_PROFILE_HPP

#include <cmath>
#include <vector>

#include "sirwave/errors.hpp"

namespace sirwave {

/// Uniform grid x0 + i*dx, i = 0..n-1. Kernel weights and profiles share
/// one spacing; grids never get resampled against each other.
struct UniformGrid {
    double x0 = 0;
    double dx = 0;
    int n = 0;

    double x(int i) const { return x0 + i * dx; }
    double x_last() const { return x0 + (n - 1) * dx; }
    bool compatible(const UniformGrid& o) const {
        return n == o.n && std::abs(dx - o.dx) < 1e-14 * dx && std::abs(x0 - o.x0) < 1e-12;
    }
};

/// Scalar function sampled on a grid with declared constant tails beyond it.
struct ProfileFun {
    UniformGrid grid;
    std::vector<double> v;
    double tail_left = 0;
    double tail_right = 0;

    /// linear interpolation, constant beyond the grid
    double value(double t) const {
        if (t <= grid.x0) return t < grid.x0 - 0.5 * grid.dx ? tail_left : v.front();
        if (t >= grid.x_last()) return t > grid.x_last() + 0.5 * grid.dx ? tail_right : v.back();
        const double s = (t - grid.x0) / grid.dx;
        const int i = static_cast<int>(s);
        const double f = s - i;
        return v[i] * (1 - f) + v[i + 1] * f;
    }

    /// 4-point cubic (Lagrange) interpolation for smooth evaluations
    double value_cubic(double t) const;
};

struct ProfileTriple {
    ProfileFun phi, psi, chi;
    double mu = 0; // decay-norm exponent used for comparisons

    void check_box(double M1, double M2, double M3, double tol = 1e-9) const;
};

/// sup over the grid (tails included through the edge values) of
/// e^{-mu|t|} * ||(phi,psi,chi)(t)||_2
double decay_norm(const ProfileTriple& d, double mu);
double decay_norm_diff(const ProfileTriple& a, const ProfileTriple& b, double mu);

} // namespace sirwave

#endif
