#include "sirwave/profile.hpp"

#include <algorithm>
#include <sstream>

namespace sirwave {

double ProfileFun::value_cubic(double t) const {
    if (t <= grid.x0 + grid.dx) return value(t);
    if (t >= grid.x_last() - grid.dx) return value(t);
    const double s = (t - grid.x0) / grid.dx;
    int i = static_cast<int>(s);
    if (i < 1) i = 1;
    if (i > grid.n - 3) i = grid.n - 3;
    const double f = s - i;
    const double vm = v[i - 1], v0 = v[i], v1 = v[i + 1], v2 = v[i + 2];
    // 4-point Lagrange on nodes -1,0,1,2
    const double a = -f * (f - 1) * (f - 2) / 6.0;
    const double b = (f + 1) * (f - 1) * (f - 2) / 2.0;
    const double c = -(f + 1) * f * (f - 2) / 2.0;
    const double d = (f + 1) * f * (f - 1) / 6.0;
    return a * vm + b * v0 + c * v1 + d * v2;
}

void ProfileTriple::check_box(double M1, double M2, double M3, double tol) const {
    auto chk = [&](const ProfileFun& f, double M, const char* name) {
        for (double x : f.v)
            if (x < -tol || x > M + tol) {
                std::ostringstream os;
                os << name << " leaves the box [0," << M << "]: value " << x;
                throw DomainViolation(os.str());
            }
    };
    chk(phi, M1, "phi");
    chk(psi, M2, "psi");
    chk(chi, M3, "chi");
}

double decay_norm(const ProfileTriple& d, double mu) {
    double best = 0;
    const UniformGrid& g = d.phi.grid;
    for (int i = 0; i < g.n; ++i) {
        const double t = g.x(i);
        const double w = std::exp(-mu * std::abs(t));
        const double n2 = std::sqrt(d.phi.v[i] * d.phi.v[i] + d.psi.v[i] * d.psi.v[i] +
                                    d.chi.v[i] * d.chi.v[i]);
        best = std::max(best, w * n2);
    }
    // tails are constant; the weighted value decays beyond the edges, so the
    // analytic tail supremum is attained at the edge
    const double nl = std::sqrt(d.phi.tail_left * d.phi.tail_left +
                                d.psi.tail_left * d.psi.tail_left +
                                d.chi.tail_left * d.chi.tail_left);
    const double nr = std::sqrt(d.phi.tail_right * d.phi.tail_right +
                                d.psi.tail_right * d.psi.tail_right +
                                d.chi.tail_right * d.chi.tail_right);
    best = std::max(best, std::exp(-mu * std::abs(g.x0)) * nl);
    best = std::max(best, std::exp(-mu * std::abs(g.x_last())) * nr);
    return best;
}

double decay_norm_diff(const ProfileTriple& a, const ProfileTriple& b, double mu) {
    if (!a.phi.grid.compatible(b.phi.grid)) throw GridMismatch("decay_norm_diff: incompatible grids");
    ProfileTriple d = a;
    for (int i = 0; i < a.phi.grid.n; ++i) {
        d.phi.v[i] -= b.phi.v[i];
        d.psi.v[i] -= b.psi.v[i];
        d.chi.v[i] -= b.chi.v[i];
    }
    d.phi.tail_left -= b.phi.tail_left;
    d.psi.tail_left -= b.psi.tail_left;
    d.chi.tail_left -= b.chi.tail_left;
    d.phi.tail_right -= b.phi.tail_right;
    d.psi.tail_right -= b.psi.tail_right;
    d.chi.tail_right -= b.chi.tail_right;
    return decay_norm(d, mu);
}

} // namespace sirwave
