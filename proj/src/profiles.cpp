#include "sirwave/profiles.hpp"
#include "sirwave/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sirwave {

double PiecewiseExpProfile::value(double t) const {
    if (is_super) {
        if (t <= break_t) return k * std::exp(growth * t);
        return k + eps * std::exp(-eta * t);
    }
    if (t <= break_t) return (k / big_m) * std::exp(std::min(growth * t, 700.0));
    return k - eps * std::exp(-eta * t);
}

double PiecewiseExpProfile::d1(double t, int side) const {
    const bool left = (t < break_t) || (t == break_t && side <= 0);
    if (is_super) {
        if (left && t <= break_t) return k * growth * std::exp(growth * t);
        return -eta * eps * std::exp(-eta * t);
    }
    if (left && t <= break_t) return (k / big_m) * growth * std::exp(std::min(growth * t, 700.0));
    return eta * eps * std::exp(-eta * t);
}

double PiecewiseExpProfile::d2(double t, int side) const {
    const bool left = (t < break_t) || (t == break_t && side <= 0);
    if (is_super) {
        if (left && t <= break_t) return k * growth * growth * std::exp(growth * t);
        return eta * eta * eps * std::exp(-eta * t);
    }
    if (left && t <= break_t) return (k / big_m) * growth * growth * std::exp(std::min(growth * t, 700.0));
    return -eta * eta * eps * std::exp(-eta * t);
}

double PiecewiseExpProfile::sup_value() const {
    if (is_super) return k * std::exp(growth * break_t); // break value
    return k; // approached from below in the tail
}

ProfileTriple PwExpTriple::sample(const UniformGrid& g) const {
    ProfileTriple out;
    for (auto [dst, src] : {std::pair{&out.phi, &phi}, {&out.psi, &psi}, {&out.chi, &chi}}) {
        dst->grid = g;
        dst->v.resize(g.n);
        for (int i = 0; i < g.n; ++i) dst->v[i] = src->value(g.x(i));
        dst->tail_left = 0.0;
        dst->tail_right = src->k; // analytic limit at +inf
    }
    return out;
}

std::array<double, 6> solcond_lhs(const SirParameters& p, const WaveFrameParameters& w,
                                  const std::array<double, 6>& e,
                                  const std::array<double, 6>& eta_roots) {
    const double g = p.mu2 + p.gamma;
    const double d2 = p.mu2 - p.mu1, d3 = p.mu3 - p.mu1;
    const double k1 = w.k1, k2 = w.k2, k3 = w.k3;
    const double e1 = e[0], e2 = e[1], e3 = e[2], e4 = e[3], e5 = e[4], e6 = e[5];
    const double h1 = eta_roots[0], h3 = eta_roots[2], h5 = eta_roots[4];
    std::array<double, 6> L;
    L[0] = p.mu1 * (k1 + e1) - (k1 + e1) * h1 * h1 - d2 * (k2 + e3) - d3 * (k3 + e5);
    L[1] = -p.mu1 * (k1 - e2) + d2 * (k2 - e4) + d3 * (k3 - e6);
    const double num3 = p.B / p.mu1 - (k1 - e2) - (k2 + e3) - (k3 - e6);
    L[2] = g * (k2 + e3) - (k2 + e3) * h3 * h3 -
           p.beta * num3 * (k2 + e3) / (1 + p.alpha * (k2 + e3));
    const double num4 = p.B / p.mu1 - (k1 + e1) - (k2 - e4) - (k3 + e5);
    L[3] = p.beta * num4 * (k2 - e4) / (1 + p.alpha * (k2 - e4)) - g * (k2 - e4);
    L[4] = p.mu3 * (k3 + e5) - p.gamma * (k2 + e3) - (k3 + e5) * h5 * h5;
    L[5] = -p.mu3 * (k3 - e6) + p.gamma * (k2 - e4);
    return L;
}

namespace {

double solve_super_break(double k, double eps, double growth, double eta) {
    auto f = [&](double t) { return k * (std::exp(growth * t) - 1) - eps * std::exp(-eta * t); };
    double lo = 0, hi = 1;
    int guard = 0;
    while (f(hi) < 0) {
        hi *= 2;
        if (++guard > 60) throw BreakNotFound("super break diverged");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double solve_sub_break(double k, double eps, double growth, double eta, double M) {
    // largest root of (k/M) e^{growth t} - k + eps e^{-eta t}
    auto fp = [&](double t) {
        return growth * (k / M) * std::exp(std::min(growth * t, 700.0)) -
               eta * eps * std::exp(-eta * t);
    };
    double lo = -1e4, hi = 1e4; // f' is increasing
    for (int i = 0; i < 300; ++i) {
        const double mid = 0.5 * (lo + hi);
        (fp(mid) < 0 ? lo : hi) = mid;
    }
    const double tmin = 0.5 * (lo + hi);
    auto f = [&](double t) {
        return (k / M) * std::exp(std::min(growth * t, 700.0)) - k + eps * std::exp(-eta * t);
    };
    if (f(tmin) >= 0)
        throw BreakNotFound("sub break: branches do not cross (minimum nonnegative)");
    lo = tmin;
    hi = tmin + 1;
    int guard = 0;
    while (f(hi) < 0) {
        hi = tmin + (hi - tmin) * 2;
        if (++guard > 80) throw BreakNotFound("sub break diverged");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct ScanCtx {
    const SirParameters* p;
    const WaveFrameParameters* w;
};

// wave-system left-hand sides with analytic profiles
double lhs_eq1(const PiecewiseExpProfile& ph, const PiecewiseExpProfile& ps,
               const PiecewiseExpProfile& ch, const SirParameters& p,
               const WaveFrameParameters& w, double t) {
    return ph.d2(t) - p.c * ph.d1(t + w.r1) - p.mu1 * ph.value(t + w.r1) +
           (p.mu2 - p.mu1) * ps.value(t + w.r1) + (p.mu3 - p.mu1) * ch.value(t + w.r1);
}
double lhs_eq2(const PiecewiseExpProfile& ph, const PiecewiseExpProfile& ps,
               const PiecewiseExpProfile& ch, const PiecewiseExpProfile& psd,
               const SirParameters& p, const WaveFrameParameters& w, double t) {
    const double num = p.B / p.mu1 - ph.value(t + w.r2) - ps.value(t + w.r2) - ch.value(t + w.r2);
    const double pd = psd.value(t + w.r2 - w.r4);
    return ps.d2(t) - p.c * ps.d1(t + w.r2) - (p.mu2 + p.gamma) * ps.value(t + w.r2) +
           p.beta * num * pd / (1 + p.alpha * pd);
}
double lhs_eq3(const PiecewiseExpProfile& ps, const PiecewiseExpProfile& ch,
               const SirParameters& p, const WaveFrameParameters& w, double t) {
    return ch.d2(t) - p.c * ch.d1(t + w.r3) - p.mu3 * ch.value(t + w.r3) +
           p.gamma * ps.value(t + w.r3);
}

// nudges a sample point away from the non-smooth set
double nudge(double t, const std::vector<double>& crit) {
    for (double c : crit)
        if (std::abs(t - c) < 1e-7) return c + 2e-7;
    return t;
}

std::vector<double> critical_points(const PwExpTriple& sup, const PwExpTriple& sub,
                                    const WaveFrameParameters& w) {
    std::vector<double> b = {sup.phi.break_t, sup.psi.break_t, sup.chi.break_t,
                             sub.phi.break_t, sub.psi.break_t, sub.chi.break_t};
    std::vector<double> crit;
    for (double x : b)
        for (double sh : {0.0, -w.r1, -w.r2, -w.r3, -w.r2 + w.r4})
            crit.push_back(x + sh);
    return crit;
}

CaseReport scan_cases(const PwExpTriple& sup, const PwExpTriple& sub, bool super_side,
                      const SirParameters& p, const WaveFrameParameters& w, double lo,
                      double hi, int nsamp, double tol) {
    CaseReport rep;
    const auto crit = critical_points(sup, sub, w);
    const PwExpTriple& own = super_side ? sup : sub;
    const PwExpTriple& opp = super_side ? sub : sup;
    const std::array<double, 3> req_break = {own.phi.break_t, own.psi.break_t, own.chi.break_t};
    const std::array<double, 3> rs = {w.r1, w.r2, w.r3};
    for (int eq = 1; eq <= 3; ++eq) {
        const double b = req_break[eq - 1];
        const double r = rs[eq - 1];
        const std::array<std::pair<double, double>, 3> regions = {
            std::pair{lo, b - r}, {b - r, b}, {b, hi}};
        for (int cs = 1; cs <= 3; ++cs) {
            CaseReport::Region reg;
            reg.equation = eq;
            reg.case_id = cs;
            reg.lo = regions[cs - 1].first;
            reg.hi = regions[cs - 1].second;
            double worst = super_side ? -1e300 : 1e300;
            double worst_t = reg.lo;
            for (int i = 0; i < nsamp; ++i) {
                double t = reg.lo + (reg.hi - reg.lo) * (i + 0.5) / nsamp;
                t = nudge(t, crit);
                double v = 0;
                if (eq == 1)
                    v = lhs_eq1(own.phi, own.psi, own.chi, p, w, t);
                else if (eq == 2)
                    v = lhs_eq2(opp.phi, own.psi, opp.chi, own.psi, p, w, t);
                else
                    v = lhs_eq3(own.psi, own.chi, p, w, t);
                if (super_side ? v > worst : v < worst) {
                    worst = v;
                    worst_t = t;
                }
            }
            reg.worst = worst;
            reg.worst_t = worst_t;
            reg.pass = super_side ? worst <= tol : worst >= -tol;
            rep.all_pass = rep.all_pass && reg.pass;
            rep.regions.push_back(reg);
        }
    }
    return rep;
}

} // namespace

PwExpTriple build_super(const WaveFrameParameters& w, const FrontParameters& fp) {
    PwExpTriple t;
    t.phi = {w.k1, fp.eta_roots[0], fp.breaks[0], fp.cert.eps[0], fp.eta_tail, 1.0, true};
    t.psi = {w.k2, fp.eta_roots[2], fp.breaks[1], fp.cert.eps[2], fp.eta_tail, 1.0, true};
    t.chi = {w.k3, fp.eta_roots[4], fp.breaks[2], fp.cert.eps[4], fp.eta_tail, 1.0, true};
    return t;
}

PwExpTriple build_sub(const WaveFrameParameters& w, const FrontParameters& fp) {
    PwExpTriple t;
    t.phi = {w.k1, fp.eta_roots[1], fp.breaks[3], fp.cert.eps[1], fp.eta_tail, fp.big_m, false};
    t.psi = {w.k2, fp.eta_roots[3], fp.breaks[4], fp.cert.eps[3], fp.eta_tail, fp.big_m, false};
    t.chi = {w.k3, fp.eta_roots[5], fp.breaks[5], fp.cert.eps[5], fp.eta_tail, fp.big_m, false};
    return t;
}

CaseReport check_super_cases(const PwExpTriple& sup, const PwExpTriple& sub,
                             const SirParameters& p, const WaveFrameParameters& w,
                             double lo, double hi, int nsamp, double tol) {
    return scan_cases(sup, sub, true, p, w, lo, hi, nsamp, tol);
}
CaseReport check_sub_cases(const PwExpTriple& sup, const PwExpTriple& sub,
                           const SirParameters& p, const WaveFrameParameters& w,
                           double lo, double hi, int nsamp, double tol) {
    return scan_cases(sup, sub, false, p, w, lo, hi, nsamp, tol);
}

namespace {

struct EpsSolve {
    std::array<double, 6> eps{};
    bool ok = false;
    std::string why;
};

// One pass of the coupled slack solve at a given tail-rate reserve.
EpsSolve solve_eps(const SirParameters& p, const WaveFrameParameters& w,
                   const std::array<double, 6>& roots, double eta_reserve) {
    EpsSolve out;
    const double g = p.mu2 + p.gamma;
    const double d2 = p.mu2 - p.mu1, d3 = p.mu3 - p.mu1;
    const double k1 = w.k1, k2 = w.k2, k3 = w.k3;
    const double h1 = roots[0], h3 = roots[2], h5 = roots[4];
    const double floor0 = 0.02 * std::min({p.mu1 * k1, g * k2, p.mu3 * k3});
    std::array<double, 6> e{};
    e.fill(floor0);
    auto L3_of = [&](double e3, double e2, double e6) {
        const double num3 = p.B / p.mu1 - (k1 - e2) - (k2 + e3) - (k3 - e6);
        return g * (k2 + e3) - (k2 + e3) * h3 * h3 -
               p.beta * num3 * (k2 + e3) / (1 + p.alpha * (k2 + e3));
    };
    auto L4_of = [&](double e4, double e1, double e5) {
        const double num4 = p.B / p.mu1 - (k1 + e1) - (k2 - e4) - (k3 + e5);
        return p.beta * num4 * (k2 - e4) / (1 + p.alpha * (k2 - e4)) - g * (k2 - e4);
    };
    for (int it = 0; it < 200; ++it) {
        const auto prev = e;
        auto room = [&](double ei) { return eta_reserve * ei; };
        // eps3: 1-D bisection on L3
        {
            const double target = floor0 + room(e[2]);
            double lo = 1e-9, hi = 0.9 * (w.M2 - k2);
            if (L3_of(hi, e[1], e[5]) < target) {
                out.why = "inequality 3 cannot reach its slack (eps3 capped by m2)";
                return out;
            }
            for (int i = 0; i < 120; ++i) {
                const double mid = 0.5 * (lo + hi);
                (L3_of(mid, e[1], e[5]) < target ? lo : hi) = mid;
            }
            e[2] = 0.5 * (lo + hi);
        }
        // eps5 from line 5 (linear)
        {
            const double target = floor0 + room(e[4]);
            const double den = p.mu3 - h5 * h5;
            if (den <= 0) {
                out.why = "inequality 5 infeasible: eta5^2 >= mu3";
                return out;
            }
            e[4] = (target + p.gamma * (k2 + e[2])) / den - k3;
            if (e[4] <= 0 || e[4] >= w.M3 - k3) {
                out.why = "inequality 5 slack leaves (0, m3-k3)";
                return out;
            }
        }
        // eps1 from line 1 (linear)
        {
            const double target = floor0 + room(e[0]);
            const double den = p.mu1 - h1 * h1;
            if (den <= 0) {
                out.why = "inequality 1 infeasible: eta1^2 >= mu1";
                return out;
            }
            e[0] = (target + d2 * (k2 + e[2]) + d3 * (k3 + e[4])) / den - k1;
            if (e[0] <= 0 || e[0] >= w.M1 - k1) {
                out.why = "inequality 1 slack leaves (0, m1-k1)";
                return out;
            }
        }
        // eps4: lower edge by bisection on L4, sit 60% above it
        {
            const double target = floor0 + room(e[3]);
            double lo = 1e-9, hi = 0.9 * k2;
            // L4 rises with eps4 in the regime of interest (alpha assist)
            if (L4_of(hi, e[0], e[4]) < target && L4_of(0.5 * k2, e[0], e[4]) < target) {
                out.why = "inequality 4 cannot reach its slack";
                return out;
            }
            for (int i = 0; i < 120; ++i) {
                const double mid = 0.5 * (lo + hi);
                (L4_of(mid, e[0], e[4]) < target ? lo : hi) = mid;
            }
            e[3] = std::min(1.6 * 0.5 * (lo + hi), 0.9 * k2);
        }
        // eps6, eps2 (linear chains with safety 1.3)
        e[5] = 1.3 * (floor0 + room(e[5]) + p.gamma * e[3]) / p.mu3;
        if (e[5] >= k3) {
            out.why = "inequality 6 slack exceeds k3";
            return out;
        }
        e[1] = 1.3 * (floor0 + room(e[1]) + d2 * e[3] + d3 * e[5]) / p.mu1;
        if (e[1] >= k1) {
            out.why = "inequality 2 slack exceeds k1";
            return out;
        }
        double diff = 0;
        for (int i = 0; i < 6; ++i) diff = std::max(diff, std::abs(e[i] - prev[i]));
        if (diff < 1e-15) break;
    }
    out.eps = e;
    out.ok = true;
    return out;
}

// builds both triples for given eps/eta/M and returns them; throws BreakNotFound
std::pair<PwExpTriple, PwExpTriple> build_pair(const WaveFrameParameters& w,
                                               const std::array<double, 6>& roots,
                                               const std::array<double, 6>& eps, double eta,
                                               double M, std::array<double, 6>* breaks_out) {
    std::array<double, 6> br{};
    br[0] = solve_super_break(w.k1, eps[0], roots[0], eta);
    br[1] = solve_super_break(w.k2, eps[2], roots[2], eta);
    br[2] = solve_super_break(w.k3, eps[4], roots[4], eta);
    br[3] = solve_sub_break(w.k1, eps[1], roots[1], eta, M);
    br[4] = solve_sub_break(w.k2, eps[3], roots[3], eta, M);
    br[5] = solve_sub_break(w.k3, eps[5], roots[5], eta, M);
    FrontParameters fp;
    fp.cert.eps = eps;
    fp.breaks = br;
    fp.eta_tail = eta;
    fp.big_m = M;
    fp.eta_roots = roots;
    if (breaks_out) *breaks_out = br;
    WaveFrameParameters ww = w;
    return {build_super(ww, fp), build_sub(ww, fp)};
}

bool ordered_below(const PwExpTriple& sub, const PwExpTriple& sup, double lo, double hi, int n) {
    auto cmp = [&](const PiecewiseExpProfile& a, const PiecewiseExpProfile& b) {
        for (int i = 0; i <= n; ++i) {
            const double t = lo + (hi - lo) * i / n;
            if (a.value(t) > b.value(t) + 1e-12) return false;
        }
        return true;
    };
    return cmp(sub.phi, sup.phi) && cmp(sub.psi, sup.psi) && cmp(sub.chi, sup.chi);
}

} // namespace

FrontParameters find_parameters(const SirParameters& p, const WaveFrameParameters& w,
                                const std::array<double, 6>& roots) {
    if (!(reproduction_number(p) > 1))
        throw InfeasibleSolcond("reproduction number below threshold");
    const double cstar = critical_wave_speed(p, w.M1, w.M2, w.M3);
    if (!(p.c >= cstar - 1e-12))
        throw InfeasibleSolcond("wave speed below critical");
    // strict root ordering within pairs is required by the ordering lemma
    if (!(roots[0] < roots[1] && roots[2] < roots[3] && roots[4] < roots[5]))
        throw InfeasibleSolcond("root pairs are not ordered (eta_odd < eta_even fails)");

    double eta = 0.02; // provisional; converges with the eta* bisection below
    FrontParameters fp;
    const double scan_lo = -40.0 / std::max(roots[0], 1e-3);
    const double scan_hi = 400.0;

    for (int outer = 0; outer < 8; ++outer) {
        const double reserve = 2 * eta * (p.c + eta);
        EpsSolve es = solve_eps(p, w, roots, reserve);
        if (!es.ok) throw InfeasibleSolcond("solcond infeasible: " + es.why);

        // sub divisor: double until ordered below the super triple
        double M = 2 * std::max({w.M1 / w.k1, w.M2 / w.k2, w.M3 / w.k3});
        std::array<double, 6> breaks{};
        PwExpTriple sup, sub;
        bool ordered = false;
        for (int d = 0; d < 24; ++d) {
            try {
                std::tie(sup, sub) = build_pair(w, roots, es.eps, eta, M, &breaks);
            } catch (const BreakNotFound&) {
                M *= 2;
                continue;
            }
            if (ordered_below(sub, sup, scan_lo, scan_hi, 4000)) {
                ordered = true;
                break;
            }
            M *= 2;
        }
        if (!ordered) throw InfeasibleSolcond("sub <= super ordering unreachable by doubling M");

        // super break values must respect the box
        if (sup.phi.sup_value() > w.M1 || sup.psi.sup_value() > w.M2 ||
            sup.chi.sup_value() > w.M3)
            throw InfeasibleSolcond("super break value exceeds the box bound");

        // per-case thresholds eta*_j, j = 1..12: the eta-dependent case
        // margins are the case-2/case-3 regions of each equation on each
        // side; eta*_j is the largest tail rate keeping I_j on its side,
        // found by bisection on the scanned margin sign
        std::array<double, 12> eta_star{};
        auto region_ok = [&](int j, double eta_try) -> bool {
            // j: 0..5 super (eq1c2, eq1c3, eq2c2, eq2c3, eq3c2, eq3c3),
            //    6..11 sub in the same order
            const bool super_side = j < 6;
            const int eq = (j % 6) / 2 + 1;
            const int cs = (j % 2) + 2;
            PwExpTriple S, s;
            try {
                std::array<double, 6> br{};
                std::tie(S, s) = build_pair(w, roots, es.eps, eta_try, M, &br);
            } catch (const BreakNotFound&) {
                return false;
            }
            auto rep = super_side ? check_super_cases(S, s, p, w, scan_lo, scan_hi, 240, 1e-10)
                                  : check_sub_cases(S, s, p, w, scan_lo, scan_hi, 240, 1e-10);
            for (const auto& rg : rep.regions)
                if (rg.equation == eq && rg.case_id == cs) return rg.pass;
            return false;
        };
        for (int j = 0; j < 12; ++j) {
            if (region_ok(j, 1.0)) {
                eta_star[j] = 1.0;
                continue;
            }
            double lo = std::min(eta, 0.02);
            if (!region_ok(j, lo)) {
                std::ostringstream os;
                os << "case threshold " << j + 1 << " infeasible even at small eta";
                throw InfeasibleSolcond(os.str());
            }
            double hi = 1.0;
            for (int i = 0; i < 20; ++i) {
                const double mid = 0.5 * (lo + hi);
                (region_ok(j, mid) ? lo : hi) = mid;
            }
            eta_star[j] = lo;
        }
        const double eta_new = 0.5 * *std::min_element(eta_star.begin(), eta_star.end());
        // converged when the self-consistent tail rate is stable
        const bool done = std::abs(eta_new - eta) < 0.05 * eta || outer == 7;
        eta = eta_new;
        if (done) {
            std::tie(sup, sub) = build_pair(w, roots, es.eps, eta, M, &breaks);
            fp.cert.eps = es.eps;
            fp.cert.lhs = solcond_lhs(p, w, es.eps, roots);
            double mn = 1e300;
            for (double L : fp.cert.lhs) mn = std::min(mn, L);
            if (!(mn > 0)) {
                int which = 0;
                for (int i = 0; i < 6; ++i)
                    if (fp.cert.lhs[i] == mn) which = i + 1;
                std::ostringstream os;
                os << "solcond inequality " << which << " not satisfied (lhs " << mn << ")";
                throw InfeasibleSolcond(os.str());
            }
            fp.cert.eps0 = 0.5 * mn;
            for (int i = 0; i < 6; ++i) fp.cert.residuals[i] = fp.cert.lhs[i] - fp.cert.eps0;
            fp.breaks = breaks;
            fp.eta_tail = eta;
            fp.big_m = M;
            fp.eta_roots = roots;
            fp.eta_star = eta_star;
            return fp;
        }
    }
    throw InfeasibleSolcond("tail-rate fixed point did not settle");
}

std::string to_string(SmoothnessClass c) {
    switch (c) {
    case SmoothnessClass::Super: return "super";
    case SmoothnessClass::Quasi: return "quasi";
    default: return "smooth";
    }
}

SmoothnessReport check_quasi_and_smooth(const OneSided& eval, const std::vector<double>& breaks,
                                        double tol_d1, double tol_d2) {
    SmoothnessReport rep;
    for (double b : breaks) {
        for (int comp = 0; comp < 3; ++comp) {
            const double j1 = std::abs(eval.d1(comp, b, +1) - eval.d1(comp, b, -1));
            const double j2 = std::abs(eval.d2(comp, b, +1) - eval.d2(comp, b, -1));
            rep.worst_d1_mismatch = std::max(rep.worst_d1_mismatch, j1);
            rep.worst_d2_mismatch = std::max(rep.worst_d2_mismatch, j2);
        }
    }
    if (rep.worst_d1_mismatch > tol_d1)
        rep.cls = SmoothnessClass::Super;
    else if (rep.worst_d2_mismatch > tol_d2)
        rep.cls = SmoothnessClass::Quasi;
    else
        rep.cls = SmoothnessClass::Smooth;
    return rep;
}

} // namespace sirwave
