#ifndef SIRWAVE_PROFILES_HPP
#define SIRWAVE_PROFILES_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "sirwave/charroots.hpp"
#include "sirwave/profile.hpp"

namespace sirwave {

/// One piecewise-exponential front profile branch pair.
/// super: k e^{growth t} for t <= break_t, k + eps e^{-eta t} after.
/// sub:   (k/big_m) e^{growth t} for t <= break_t, k - eps e^{-eta t} after.
/// break_t is defined by the continuity equation of the two branches.
struct PiecewiseExpProfile {
    double k = 0;
    double growth = 0;
    double break_t = 0;
    double eps = 0;
    double eta = 0;
    double big_m = 1;
    bool is_super = true;

    double value(double t) const;
    double d1(double t, int side = 0) const;   // side: -1 left, +1 right, 0 by-branch
    double d2(double t, int side = 0) const;
    double sup_value() const;                  // attained at the break
};

struct PwExpTriple {
    PiecewiseExpProfile phi, psi, chi;
    ProfileTriple sample(const UniformGrid& g) const;
};

/// Slacks and residuals of the six front inequalities. residuals[i] is the
/// i-th left-hand side minus eps0; the certificate is valid when all are
/// positive.
struct SolcondCertificate {
    double eps0 = 0;
    std::array<double, 6> eps{};       // eps1..eps6
    std::array<double, 6> residuals{};
    std::array<double, 6> lhs{};       // raw left-hand sides
    bool valid() const {
        for (double r : residuals)
            if (!(r > 0)) return false;
        return true;
    }
};

struct FrontParameters {
    SolcondCertificate cert;
    std::array<double, 6> breaks{};    // t1..t6
    double eta_tail = 0;               // common tail decay rate
    double big_m = 0;
    std::array<double, 6> eta_roots{}; // continued roots eta_1..eta_6
    std::array<double, 12> eta_star{}; // per-case thresholds from bisection
};

/// Left-hand sides of the six front inequalities for given slacks and roots.
/// The eta^2 terms carry the break-value bound (k+eps) and the component
/// suprema enter through the profile bounds k_j + eps_j (which dominate the
/// break values since the super breaks sit at positive t).
std::array<double, 6> solcond_lhs(const SirParameters& p, const WaveFrameParameters& w,
                                  const std::array<double, 6>& eps,
                                  const std::array<double, 6>& eta_roots);

/// Searches slacks, breaks, the common tail rate eta, and the sub divisor M
/// so that the certificate holds with maximal slack, the case thresholds
/// exist, and sub <= super pointwise. Throws InfeasibleSolcond naming the
/// first inequality that cannot be satisfied.
FrontParameters find_parameters(const SirParameters& p, const WaveFrameParameters& w,
                                const std::array<double, 6>& eta_roots);

PwExpTriple build_super(const WaveFrameParameters& w, const FrontParameters& fp);
PwExpTriple build_sub(const WaveFrameParameters& w, const FrontParameters& fp);

struct CaseReport {
    struct Region {
        int equation = 0;  // 1..3
        int case_id = 0;   // 1..3
        double lo = 0, hi = 0;
        double worst = 0;      // max LHS for super, min LHS for sub
        double worst_t = 0;
        bool pass = false;
    };
    std::vector<Region> regions;
    bool all_pass = true;
};

/// Scans the three differential-inequality left-hand sides over the three
/// case regions per equation, using the analytic branch derivatives;
/// sample points exclude small windows around the non-smooth point set.
/// Super requires LHS <= tol, sub requires LHS >= -tol.
CaseReport check_super_cases(const PwExpTriple& sup, const PwExpTriple& sub,
                             const SirParameters& p, const WaveFrameParameters& w,
                             double lo, double hi, int samples_per_region = 1000,
                             double tol = 1e-8);
CaseReport check_sub_cases(const PwExpTriple& sup, const PwExpTriple& sub,
                           const SirParameters& p, const WaveFrameParameters& w,
                           double lo, double hi, int samples_per_region = 1000,
                           double tol = 1e-8);

enum class SmoothnessClass { Super, Quasi, Smooth };
std::string to_string(SmoothnessClass c);

struct SmoothnessReport {
    SmoothnessClass cls = SmoothnessClass::Super;
    double worst_d1_mismatch = 0;
    double worst_d2_mismatch = 0;
};

/// Classifies a triple by one-sided derivative agreement at the given break
/// locations. `d1`/`d2` evaluate one-sided first/second derivatives of the
/// component functions.
struct OneSided {
    // component (0..2), location, side (-1/+1) -> derivative value
    std::function<double(int, double, int)> d1;
    std::function<double(int, double, int)> d2;
};
SmoothnessReport check_quasi_and_smooth(const OneSided& eval,
                                        const std::vector<double>& breaks,
                                        double tol_d1 = 1e-6, double tol_d2 = 1e-6);

} // namespace sirwave

#endif
