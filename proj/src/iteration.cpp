#include "sirwave/iteration.hpp"
#include "sirwave/fft.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace sirwave {

namespace {

// value of a grid array at index i + fractional shift, linear interpolation,
// constant tails; the interpolation stays a convex combination so the
// induced maps preserve order
struct ShiftedView {
    const std::vector<double>* v;
    double tail_l, tail_r;
    int off;
    double frac;
    int n;
    double at(int i) const {
        const int j = i + off;
        const double a = j < 0 ? tail_l : (j >= n ? tail_r : (*v)[j]);
        const int j1 = j + 1;
        const double b = j1 < 0 ? tail_l : (j1 >= n ? tail_r : (*v)[j1]);
        return a * (1 - frac) + b * frac;
    }
};

ShiftedView shifted(const std::vector<double>& v, double tail_l, double tail_r, double shift,
                    double dx) {
    const double s = shift / dx;
    int off = static_cast<int>(std::floor(s));
    double frac = s - off;
    return {&v, tail_l, tail_r, off, frac, static_cast<int>(v.size())};
}

struct Engine {
    const SirParameters* p;
    const WaveFrameParameters* w;
    UniformGrid gi;             // internal grid
    std::array<GreenKernel::Weights, 3> wt;
    std::array<double, 3> mass;
    // FFT machinery
    std::size_t P = 0;
    std::array<std::vector<std::complex<double>>, 3> kspec;
    int span = 0;

    void prepare(const std::array<GreenKernel, 3>& ks) {
        for (int i = 0; i < 3; ++i) {
            wt[i] = ks[i].hat_weights(gi.dx);
            mass[i] = ks[i].mass();
        }
        span = std::max({wt[0].span, wt[1].span, wt[2].span});
        P = next_pow2(static_cast<std::size_t>(gi.n) + 4 * static_cast<std::size_t>(span) + 2);
        for (int i = 0; i < 3; ++i) {
            std::vector<std::complex<double>> k(P, 0.0);
            const int s = wt[i].span;
            for (int q = -s; q <= s; ++q) k[q + span] = wt[i].w[q + s];
            fft(k, false);
            kspec[i] = std::move(k);
        }
    }

    // convolve two real arrays (packed re/im) against kernel i and negate:
    // out = -(G_i * h); tails of h are (tl, tr) on both channels' own values
    void conv_pair(int i, const std::vector<double>& ha, double tla, double tra,
                   const std::vector<double>& hb, double tlb, double trb,
                   std::vector<double>& outa, std::vector<double>& outb) const {
        const int n = gi.n;
        std::vector<std::complex<double>> A(P, 0.0);
        for (int m = 0; m < n + 2 * span; ++m) {
            const int j = m - span;
            const double va = j < 0 ? tla : (j >= n ? tra : ha[j]);
            const double vb = j < 0 ? tlb : (j >= n ? trb : hb[j]);
            A[m] = {va, vb};
        }
        fft(A, false);
        for (std::size_t m = 0; m < P; ++m) A[m] *= kspec[i][m];
        fft(A, true);
        outa.resize(n);
        outb.resize(n);
        const double ctla = tla * wt[i].tail_pos, ctra = tra * wt[i].tail_neg;
        const double ctlb = tlb * wt[i].tail_pos, ctrb = trb * wt[i].tail_neg;
        for (int idx = 0; idx < n; ++idx) {
            const auto z = A[idx + 2 * span];
            outa[idx] = -(z.real() + ctla + ctra);
            outb[idx] = -(z.imag() + ctlb + ctrb);
        }
    }
};

struct State {
    // six internal-grid arrays; tails are (0, k_i) throughout
    std::array<std::vector<double>, 3> up, lo;
};

// H arrays for both sides of one component; the crossed arguments of the
// infected equation follow the invariance inequalities
void eval_H(const Engine& en, const State& st, int comp, std::vector<double>& h_up,
            std::vector<double>& h_lo) {
    const auto& p = *en.p;
    const auto& w = *en.w;
    const int n = en.gi.n;
    const double dx = en.gi.dx;
    h_up.resize(n);
    h_lo.resize(n);
    const double d2 = p.mu2 - p.mu1, d3 = p.mu3 - p.mu1;
    if (comp == 0) {
        auto up1 = shifted(st.up[0], 0, w.k1, w.r1, dx), up2 = shifted(st.up[1], 0, w.k2, w.r1, dx),
             up3 = shifted(st.up[2], 0, w.k3, w.r1, dx);
        auto lo1 = shifted(st.lo[0], 0, w.k1, w.r1, dx), lo2 = shifted(st.lo[1], 0, w.k2, w.r1, dx),
             lo3 = shifted(st.lo[2], 0, w.k3, w.r1, dx);
        for (int i = 0; i < n; ++i) {
            h_up[i] = (w.beta1 - p.mu1) * up1.at(i) + d2 * up2.at(i) + d3 * up3.at(i);
            h_lo[i] = (w.beta1 - p.mu1) * lo1.at(i) + d2 * lo2.at(i) + d3 * lo3.at(i);
        }
    } else if (comp == 1) {
        const double g = p.mu2 + p.gamma;
        auto U1 = shifted(st.up[0], 0, w.k1, w.r2, dx), U2 = shifted(st.up[1], 0, w.k2, w.r2, dx),
             U3 = shifted(st.up[2], 0, w.k3, w.r2, dx);
        auto L1 = shifted(st.lo[0], 0, w.k1, w.r2, dx), L2 = shifted(st.lo[1], 0, w.k2, w.r2, dx),
             L3 = shifted(st.lo[2], 0, w.k3, w.r2, dx);
        auto U2d = shifted(st.up[1], 0, w.k2, w.r2 - w.r4, dx);
        auto L2d = shifted(st.lo[1], 0, w.k2, w.r2 - w.r4, dx);
        const double cap = p.B / p.mu1;
        for (int i = 0; i < n; ++i) {
            // upper psi update pairs with lower phi/chi and vice versa
            {
                const double num = cap - L1.at(i) - U2.at(i) - L3.at(i);
                if (num < -1e-10)
                    throw DomainViolation("incidence numerator negative in iteration (upper)");
                const double pd = U2d.at(i);
                h_up[i] = (w.beta2 - g) * U2.at(i) + p.beta * std::max(num, 0.0) * pd / (1 + p.alpha * pd);
            }
            {
                const double num = cap - U1.at(i) - L2.at(i) - U3.at(i);
                if (num < -1e-10)
                    throw DomainViolation("incidence numerator negative in iteration (lower)");
                const double pd = L2d.at(i);
                h_lo[i] = (w.beta2 - g) * L2.at(i) + p.beta * std::max(num, 0.0) * pd / (1 + p.alpha * pd);
            }
        }
    } else {
        auto U2 = shifted(st.up[1], 0, w.k2, w.r3, dx), U3 = shifted(st.up[2], 0, w.k3, w.r3, dx);
        auto L2 = shifted(st.lo[1], 0, w.k2, w.r3, dx), L3 = shifted(st.lo[2], 0, w.k3, w.r3, dx);
        for (int i = 0; i < n; ++i) {
            h_up[i] = (w.beta3 - p.mu3) * U3.at(i) + p.gamma * U2.at(i);
            h_lo[i] = (w.beta3 - p.mu3) * L3.at(i) + p.gamma * L2.at(i);
        }
    }
}

double weighted_gap(const State& st, const UniformGrid& g, double mu) {
    double best = 0;
    for (int i = 0; i < g.n; ++i) {
        const double wgt = std::exp(-mu * std::abs(g.x(i)));
        double s = 0;
        for (int c = 0; c < 3; ++c) {
            const double d = st.up[c][i] - st.lo[c][i];
            s += d * d;
        }
        best = std::max(best, wgt * std::sqrt(s));
    }
    return best;
}

ProfileTriple downsample(const State& st, const UniformGrid& gi, const UniformGrid& gc,
                         int refine, const WaveFrameParameters& w, bool upper) {
    ProfileTriple out;
    const std::array<double, 3> ks = {w.k1, w.k2, w.k3};
    for (int c = 0; c < 3; ++c) {
        ProfileFun* f = c == 0 ? &out.phi : (c == 1 ? &out.psi : &out.chi);
        f->grid = gc;
        f->v.resize(gc.n);
        const auto& src = upper ? st.up[c] : st.lo[c];
        for (int i = 0; i < gc.n; ++i) f->v[i] = src[i * refine];
        f->tail_left = 0;
        f->tail_right = ks[c];
    }
    return out;
}

} // namespace

std::array<GreenKernel, 3> make_iteration_kernels(const SirParameters& p,
                                                  const WaveFrameParameters& w,
                                                  const UniformGrid& grid) {
    const std::array<double, 3> D = {p.D_S, p.D_I, p.D_R};
    const std::array<double, 3> betas = {w.beta1, w.beta2, w.beta3};
    const std::array<double, 3> rs = {w.r1, w.r2, w.r3};
    return {green_numeric(p.c / D[0], betas[0] / D[0], rs[0], grid),
            green_numeric(p.c / D[1], betas[1] / D[1], rs[1], grid),
            green_numeric(p.c / D[2], betas[2] / D[2], rs[2], grid)};
}

ProfileFun apply_H(int i, const ProfileTriple& tr, const SirParameters& p,
                   const WaveFrameParameters& w) {
    if (i < 1 || i > 3) throw std::invalid_argument("apply_H: component index 1..3");
    const UniformGrid g = tr.phi.grid;
    ProfileFun out;
    out.grid = g;
    out.v.resize(g.n);
    const std::array<double, 3> rs = {w.r1, w.r2, w.r3};
    const double r = rs[i - 1];
    for (int j = 0; j < g.n; ++j) {
        const double t = g.x(j) + r; // wave-system argument
        auto phi = [&](double s) { return tr.phi.value(t + s); };
        auto psi = [&](double s) { return tr.psi.value(t + s); };
        auto chi = [&](double s) { return tr.chi.value(t + s); };
        const double f = nonlinearity(i, phi, psi, chi, p, w);
        const double shift = i == 1 ? w.beta1 * tr.phi.value(t)
                             : i == 2 ? w.beta2 * tr.psi.value(t)
                                      : w.beta3 * tr.chi.value(t);
        out.v[j] = f + shift;
    }
    const std::array<double, 3> betas = {w.beta1, w.beta2, w.beta3};
    const std::array<double, 3> ks = {w.k1, w.k2, w.k3};
    // analytic limits: f vanishes at both equilibria, leaving the shift term
    out.tail_left = 0;
    out.tail_right = betas[i - 1] * ks[i - 1];
    return out;
}

ProfileTriple apply_F(const ProfileTriple& tr, const std::array<GreenKernel, 3>& kernels,
                      const SirParameters& p, const WaveFrameParameters& w) {
    ProfileTriple out;
    out.mu = tr.mu;
    for (int i = 0; i < 3; ++i) {
        ProfileFun h = apply_H(i + 1, tr, p, w);
        ProfileFun conv = convolve(kernels[i], h);
        ProfileFun* dst = i == 0 ? &out.phi : (i == 1 ? &out.psi : &out.chi);
        *dst = conv;
        for (double& x : dst->v) x = -x;
        dst->tail_left = -conv.tail_left;
        dst->tail_right = -conv.tail_right;
    }
    return out;
}

IterationResult cross_iterate(const PwExpTriple& sup, const PwExpTriple& sub,
                              const SirParameters& p, const WaveFrameParameters& w,
                              const UniformGrid& grid, const IterationOptions& opt) {
    IterationResult res;
    const int refine = std::max(1, opt.refine);
    UniformGrid gi{grid.x0, grid.dx / refine, grid.n * refine};

    auto kernels = make_iteration_kernels(p, w, gi);
    for (int i = 0; i < 3; ++i) res.kernel_alpha[i] = kernels[i].alpha;
    res.mu = 0.5 * std::min({kernels[0].alpha, kernels[1].alpha, kernels[2].alpha});

    Engine en;
    en.p = &p;
    en.w = &w;
    en.gi = gi;
    en.prepare(kernels);

    State st;
    for (int c = 0; c < 3; ++c) {
        const PiecewiseExpProfile& S = c == 0 ? sup.phi : (c == 1 ? sup.psi : sup.chi);
        const PiecewiseExpProfile& s = c == 0 ? sub.phi : (c == 1 ? sub.psi : sub.chi);
        st.up[c].resize(gi.n);
        st.lo[c].resize(gi.n);
        for (int i = 0; i < gi.n; ++i) {
            st.up[c][i] = S.value(gi.x(i));
            st.lo[c][i] = s.value(gi.x(i));
        }
    }

    const double scale = std::max({w.k1, w.k2, w.k3, 1e-3});
    const double enter_tol = 1e-10 * scale;
    bool tracking = false;
    State base;
    int consecutive_ok = 0;

    std::vector<double> hu, hl;
    State next = st;
    for (int iter = 0; iter < opt.max_iter; ++iter) {
        for (int c = 0; c < 3; ++c) {
            eval_H(en, st, c, hu, hl);
            const std::array<double, 3> ks = {w.k1, w.k2, w.k3};
            en.conv_pair(c, hu, 0.0, (c == 0 ? w.beta1 : c == 1 ? w.beta2 : w.beta3) * ks[c],
                         hl, 0.0, (c == 0 ? w.beta1 : c == 1 ? w.beta2 : w.beta3) * ks[c],
                         next.up[c], next.lo[c]);
        }
        IterationTraceRow row;
        row.iter = iter;
        double mono_up = -1e300, mono_lo = -1e300;
        for (int c = 0; c < 3; ++c)
            for (int i = 0; i < gi.n; ++i) {
                mono_up = std::max(mono_up, next.up[c][i] - st.up[c][i]);
                mono_lo = std::max(mono_lo, st.lo[c][i] - next.lo[c][i]);
            }
        row.mono_up = mono_up;
        row.mono_lo = mono_lo;
        st = next;
        row.gap_mu = weighted_gap(st, gi, res.mu);
        row.tracked = tracking;

        if (!tracking) {
            ++res.lifts;
            if (mono_up <= enter_tol && mono_lo <= enter_tol) {
                if (++consecutive_ok >= 2) {
                    tracking = true;
                    base = st;
                }
            } else {
                consecutive_ok = 0;
            }
        } else {
            ++res.tracked;
            if (mono_up > opt.mono_tol || mono_lo > opt.mono_tol) {
                std::ostringstream os;
                os << "monotonicity violated in tracked phase at iteration " << iter
                   << " (up " << mono_up << ", lo " << mono_lo << ")";
                throw MonotonicityViolation(os.str());
            }
            double sand = -1e300;
            for (int c = 0; c < 3; ++c)
                for (int i = 0; i < gi.n; ++i) {
                    sand = std::max(sand, st.up[c][i] - base.up[c][i]);
                    sand = std::max(sand, base.lo[c][i] - st.lo[c][i]);
                    sand = std::max(sand, st.lo[c][i] - st.up[c][i]);
                }
            row.sandwich = sand;
            if (sand > opt.mono_tol)
                throw MonotonicityViolation("sandwich violated in tracked phase");
        }

        bool measure = tracking && (res.tracked % opt.residual_every == 0 ||
                                    row.gap_mu < opt.tol);
        if (measure) {
            ProfileTriple upper = downsample(st, gi, grid, refine, w, true);
            auto r3 = wave_residual(upper, p, w);
            row.residual = std::max({r3[0], r3[1], r3[2]});
            res.final_residual = r3;
        }
        res.trace.push_back(row);
        if (opt.emit && opt.emit_every > 0 && iter % opt.emit_every == 0)
            opt.emit(iter, downsample(st, gi, grid, refine, w, true),
                     downsample(st, gi, grid, refine, w, false));

        if (tracking && res.tracked >= opt.min_tracked) {
            if (row.gap_mu < opt.tol) {
                res.gap_converged = true;
                break;
            }
            if (row.residual >= 0 && row.residual < opt.tol) {
                res.residual_converged = true;
                break;
            }
        }
    }
    if (!res.gap_converged && !res.residual_converged) {
        if (!tracking)
            throw MaxIterExceeded("iteration budget exhausted before the monotone regime");
        throw MaxIterExceeded("iteration budget exhausted before tolerance");
    }
    res.upper = downsample(st, gi, grid, refine, w, true);
    res.lower = downsample(st, gi, grid, refine, w, false);
    res.wave = res.upper;
    res.wave_side = "upper";
    res.final_gap = weighted_gap(st, gi, res.mu);
    if (res.final_residual[0] == 0 && res.final_residual[1] == 0 && res.final_residual[2] == 0)
        res.final_residual = wave_residual(res.wave, p, w);
    res.upper.mu = res.lower.mu = res.wave.mu = res.mu;
    return res;
}

namespace {
struct Stencils {
    double v, d1, d2, d3, d4;
};
Stencils stencils_at(const std::vector<double>& v, int i, double dx) {
    Stencils s;
    s.v = v[i];
    s.d1 = (v[i - 2] - 8 * v[i - 1] + 8 * v[i + 1] - v[i + 2]) / (12 * dx);
    s.d2 = (-v[i - 2] + 16 * v[i - 1] - 30 * v[i] + 16 * v[i + 1] - v[i + 2]) / (12 * dx * dx);
    s.d3 = (v[i + 2] - 2 * v[i + 1] + 2 * v[i - 1] - v[i - 2]) / (2 * dx * dx * dx);
    s.d4 = (v[i + 2] - 4 * v[i + 1] + 6 * v[i] - 4 * v[i - 1] + v[i - 2]) / (dx * dx * dx * dx);
    return s;
}
double taylor_v(const Stencils& s, double r) {
    return s.v + r * s.d1 + r * r / 2 * s.d2 + r * r * r / 6 * s.d3 + r * r * r * r / 24 * s.d4;
}
double taylor_d1(const Stencils& s, double r) {
    return s.d1 + r * s.d2 + r * r / 2 * s.d3 + r * r * r / 6 * s.d4;
}
} // namespace

std::array<double, 3> wave_residual(const ProfileTriple& tr, const SirParameters& p,
                                    const WaveFrameParameters& w) {
    const UniformGrid& g = tr.phi.grid;
    const double dx = g.dx;
    const double rmax = std::max({w.r1, w.r2, w.r3});
    const int guard = static_cast<int>(std::ceil((rmax + 4 * dx) / dx)) + 6;
    std::array<double, 3> worst = {0, 0, 0};
    const double d2c = p.mu2 - p.mu1, d3c = p.mu3 - p.mu1;
    const double gg = p.mu2 + p.gamma;
    for (int i = guard; i < g.n - guard; ++i) {
        const Stencils f = stencils_at(tr.phi.v, i, dx);
        const Stencils s = stencils_at(tr.psi.v, i, dx);
        const Stencils h = stencils_at(tr.chi.v, i, dx);
        const double e1 = p.D_S * f.d2 - p.c * taylor_d1(f, w.r1) - p.mu1 * taylor_v(f, w.r1) +
                          d2c * taylor_v(s, w.r1) + d3c * taylor_v(h, w.r1);
        const double num = p.B / p.mu1 - taylor_v(f, w.r2) - taylor_v(s, w.r2) - taylor_v(h, w.r2);
        const double pd = taylor_v(s, w.r2 - w.r4);
        const double e2 = p.D_I * s.d2 - p.c * taylor_d1(s, w.r2) - gg * taylor_v(s, w.r2) +
                          p.beta * num * pd / (1 + p.alpha * pd);
        const double e3 = p.D_R * h.d2 - p.c * taylor_d1(h, w.r3) - p.mu3 * taylor_v(h, w.r3) +
                          p.gamma * taylor_v(s, w.r3);
        worst[0] = std::max(worst[0], std::abs(e1));
        worst[1] = std::max(worst[1], std::abs(e2));
        worst[2] = std::max(worst[2], std::abs(e3));
    }
    return worst;
}

AsymptoticsReport asymptotics_check(const ProfileTriple& tr, const WaveFrameParameters& w,
                                    double delta) {
    AsymptoticsReport rep;
    const std::array<const ProfileFun*, 3> fs = {&tr.phi, &tr.psi, &tr.chi};
    const std::array<double, 3> ks = {w.k1, w.k2, w.k3};
    for (int c = 0; c < 3; ++c) {
        rep.worst_left = std::max({rep.worst_left, std::abs(fs[c]->v.front()),
                                   std::abs(fs[c]->tail_left)});
        rep.worst_right = std::max({rep.worst_right, std::abs(fs[c]->v.back() - ks[c]),
                                    std::abs(fs[c]->tail_right - ks[c])});
    }
    rep.pass = rep.worst_left <= delta && rep.worst_right <= delta;
    return rep;
}

} // namespace sirwave
