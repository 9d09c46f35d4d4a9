#include "sirwave/model.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace sirwave {

double nonlinearity(int i, const History& phi, const History& psi, const History& chi,
                    const SirParameters& p, const WaveFrameParameters& w) {
    switch (i) {
    case 1:
        return -p.mu1 * phi(0) + (p.mu2 - p.mu1) * psi(0) + (p.mu3 - p.mu1) * chi(0);
    case 2: {
        const double num = p.B / p.mu1 - phi(0) - psi(0) - chi(0);
        if (num < -1e-12) {
            std::ostringstream os;
            os << "incidence numerator negative (" << num << "); components exceed b/mu1";
            throw DomainViolation(os.str());
        }
        const double pd = psi(-w.r4);
        return -(p.mu2 + p.gamma) * psi(0) + p.beta * num * pd / (1 + p.alpha * pd);
    }
    case 3:
        return -p.mu3 * chi(0) + p.gamma * psi(0);
    default:
        throw std::invalid_argument("nonlinearity: component index must be 1..3");
    }
}

std::array<double, 3> lipschitz_bounds(const SirParameters& p, const WaveFrameParameters& w) {
    const double g = p.mu2 + p.gamma;
    const double L1 = p.mu1 + std::abs(p.mu2 - p.mu1) + std::abs(p.mu3 - p.mu1);
    // |df2/dphi|,|df2/dchi| <= beta M2; |df2/dpsi(0)| <= g + beta M2;
    // |df2/dpsi(-r4)| <= beta B/mu1
    const double L2 = g + 2 * p.beta * w.M2 + p.beta * p.B / p.mu1;
    const double L3 = p.mu3 + p.gamma;
    return {L1, L2, L3};
}

namespace {
// constant history at value v
History at(double v) { return [v](double) { return v; }; }
// history with distinct value at the delayed offset
History at2(double v0, double vdel, double r4) {
    return [=](double s) { return (s < -0.5 * r4 && r4 > 0) ? vdel : v0; };
}
} // namespace

PqmReport pqm_constants(const SirParameters& p, const WaveFrameParameters& w,
                        int samples, std::uint64_t seed) {
    PqmReport rep;
    rep.beta = {w.beta1, w.beta2, w.beta3};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double worst = 1e300;
    auto ordered_pair = [&](double M) {
        double a = uni(rng) * M, b = uni(rng) * M;
        if (a < b) std::swap(a, b);
        return std::pair<double, double>(a, b); // a >= b
    };
    for (int s = 0; s < samples; ++s) {
        auto [p1v, p2v] = ordered_pair(w.M1);
        auto [s1v, s2v] = ordered_pair(w.M2);
        auto [c1v, c2v] = ordered_pair(w.M3);
        auto [d1v, d2v] = ordered_pair(w.M2); // delayed psi values, same order
        History P1 = at(p1v), P2 = at(p2v);
        History S1 = at2(s1v, d1v, w.r4), S2 = at2(s2v, d2v, w.r4);
        History C1 = at(c1v), C2 = at(c2v);
        auto f = [&](int i, const History& a, const History& b, const History& c) {
            return nonlinearity(i, a, b, c, p, w);
        };
        const double m1 = f(1, P1, S1, C1) - f(1, P2, S2, C2) + w.beta1 * (p1v - p2v);
        const double m2 = f(2, P1, S1, C1) - f(2, P1, S2, C1) + w.beta2 * (s1v - s2v);
        const double m3 = -(f(2, P1, S1, C1) - f(2, P2, S1, C1));
        const double m4 = -(f(2, P1, S1, C1) - f(2, P1, S1, C2));
        const double m5 = f(3, P1, S1, C1) - f(3, P1, S2, C1) + w.beta3 * (s1v - s2v);
        for (double m : {m1, m2, m3, m4, m5}) {
            worst = std::min(worst, m);
            if (m < -1e-12) ++rep.violations;
        }
        rep.samples += 5;
    }
    rep.worst_margin = worst;
    if (rep.violations > 0) {
        std::ostringstream os;
        os << "PQM verification failed: " << rep.violations << " violations, worst margin "
           << rep.worst_margin;
        throw PqmVerificationFailed(os.str());
    }
    return rep;
}

} // namespace sirwave
