#include "sirwave/charroots.hpp"

#include <cmath>
#include <sstream>

namespace sirwave {

double ExpCharPolynomial::eval(double eta) const {
    const double e = std::exp(r * eta);
    return eta * eta - c * eta * e + q * e;
}

double ExpCharPolynomial::deriv(double eta) const {
    const double e = std::exp(r * eta);
    return 2 * eta - c * e - c * eta * r * e + q * r * e;
}

std::complex<double> GeneralChar::eval(std::complex<double> z) const {
    return a * z * z - (a * z + b) * std::exp(r * z);
}

std::array<QuadraticChar, 6> front_quadratics(const SirParameters& p,
                                              double M1, double M2, double M3) {
    const double g = p.gamma + p.mu2;
    std::array<double, 6> q = {
        -p.mu1 + (p.mu2 - p.mu1) * M2 / M1 + (p.mu3 - p.mu1) * M3 / M1,
        -p.mu1,
        p.beta * p.B * M2 - g,
        -g,
        p.gamma * M2 / M3 - p.mu3,
        -p.mu3,
    };
    std::array<QuadraticChar, 6> out;
    for (int i = 0; i < 6; ++i) out[i] = {p.c, q[i], i + 1};
    return out;
}

std::array<ExpCharPolynomial, 6> front_exp_polynomials(const SirParameters& p,
                                                       const WaveFrameParameters& w) {
    auto quads = front_quadratics(p, w.M1, w.M2, w.M3);
    const std::array<double, 6> rs = {w.r1, w.r1, w.r2, w.r2, w.r3, w.r3};
    std::array<ExpCharPolynomial, 6> out;
    for (int i = 0; i < 6; ++i) out[i] = {quads[i].c, quads[i].q, rs[i], i + 1};
    return out;
}

double smallest_positive_root(const QuadraticChar& pq) {
    const double disc = pq.c * pq.c - 4 * pq.q;
    if (disc < 0) {
        std::ostringstream os;
        os << "P" << pq.label << ": complex roots (c^2-4q = " << disc << " < 0)";
        throw ComplexRoots(os.str());
    }
    const double sq = std::sqrt(disc);
    const double big = 0.5 * (pq.c + sq);
    if (pq.q > 0) {
        if (big <= 0) {
            std::ostringstream os;
            os << "P" << pq.label << ": both roots nonpositive";
            throw NoPositiveRoot(os.str());
        }
        return 2 * pq.q / (pq.c + sq); // smaller root, cancellation-free
    }
    // q <= 0: roots are (c-sq)/2 <= 0 and (c+sq)/2; q == 0 gives {0, c}
    if (big <= 0) {
        std::ostringstream os;
        os << "P" << pq.label << ": no positive root";
        throw NoPositiveRoot(os.str());
    }
    return big;
}

namespace {
// One Newton solve at fixed r; returns false if it stalls or leaves the reals.
bool newton_at(const ExpCharPolynomial& ec, double& eta) {
    for (int it = 0; it < 80; ++it) {
        const double f = ec.eval(eta);
        if (std::abs(f) < 1e-13) return true;
        const double fp = ec.deriv(eta);
        if (std::abs(fp) < 1e-14 || !std::isfinite(fp)) return false;
        const double step = f / fp;
        eta -= step;
        if (!std::isfinite(eta)) return false;
        if (std::abs(step) < 1e-16 * (1 + std::abs(eta)))
            return std::abs(ec.eval(eta)) < 1e-12;
    }
    return std::abs(ec.eval(eta)) < 1e-12;
}
} // namespace

ContinuationResult continue_root(const ExpCharPolynomial& ec, double seed) {
    ContinuationResult res;
    res.eta = seed;
    if (ec.r == 0.0) return res; // eta(0) = seed exactly
    const double target = ec.r;
    double r_cur = 0.0;
    double dr = 0.01 * (1 + std::abs(target));
    double last_good_r = 0.0, last_good_eta = seed;
    int halvings = 0;
    while (r_cur < target) {
        double r_next = std::min(target, r_cur + dr);
        ExpCharPolynomial sub{ec.c, ec.q, r_next, ec.label};
        double eta = res.eta;
        ContinuationStep step;
        step.r = r_next;
        step.start_residual = std::abs(sub.eval(eta));
        if (!newton_at(sub, eta)) {
            dr *= 0.5;
            if (++halvings > 40) {
                std::ostringstream os;
                os << "Delta" << ec.label << ": continuation failed; last good (r=" << last_good_r
                   << ", eta=" << last_good_eta << ")";
                throw ContinuationFailed(os.str());
            }
            continue;
        }
        step.eta = eta;
        step.residual = std::abs(sub.eval(eta));
        res.trace.push_back(step);
        res.eta = eta;
        r_cur = r_next;
        last_good_r = r_cur;
        last_good_eta = eta;
    }
    if (std::abs(ec.eval(res.eta)) >= 1e-12) {
        // polish once more at the target delay
        ExpCharPolynomial fin = ec;
        double eta = res.eta;
        if (!newton_at(fin, eta) || std::abs(fin.eval(eta)) >= 1e-12)
            throw ContinuationFailed("final residual above 1e-12");
        res.eta = eta;
    }
    return res;
}

AxisCertificate imaginary_axis_clear(const GeneralChar& gc) {
    if (gc.a == 0 || gc.b <= 0)
        throw ValidationError("imaginary_axis_clear requires a != 0, b > 0");
    const double aa = std::abs(gc.a);
    // H from the coefficients, enlarged so |Delta| >= |a| eta^2/2 holds past it:
    // need a eta^2/2 >= a|eta| + b  <=  eta >= 1 + sqrt(1 + 2 b/a)
    const double H_spec = 4 * std::max({1.0, std::abs(gc.a), std::sqrt(gc.b)});
    const double H_dom = 2 * (1 + std::sqrt(1 + 2 * gc.b / aa));
    AxisCertificate cert;
    cert.H = std::max(H_spec, H_dom);
    cert.tail_bound = 0.5 * aa * cert.H * cert.H;
    const double spacing = std::min(1e-3 * (1 + gc.b / aa), cert.H / 4096);
    double mn = 1e300;
    double at_eta = 0;
    for (double eta = 0; eta <= cert.H; eta += spacing) {
        const double m = std::abs(gc.eval(std::complex<double>(0, eta)));
        if (m < mn) { mn = m; at_eta = eta; }
    }
    cert.grid_min_modulus = mn;
    cert.margin = std::min(mn, cert.tail_bound);
    // scale-aware positivity: coefficients set the natural modulus scale
    const double scale = std::max({aa, gc.b, 1.0});
    if (!(cert.margin > 1e-9 * scale)) {
        std::ostringstream os;
        os << "imaginary-axis certificate failed: min |Delta(i eta)| = " << mn
           << " at eta = " << at_eta;
        throw CertificateFailed(os.str());
    }
    return cert;
}

int strip_root_count(const GeneralChar& gc, double re_lo, double re_hi, double im_halfwidth) {
    // rectangle corners, counterclockwise
    using C = std::complex<double>;
    const C corners[5] = {
        {re_lo, -im_halfwidth}, {re_hi, -im_halfwidth},
        {re_hi, im_halfwidth}, {re_lo, im_halfwidth}, {re_lo, -im_halfwidth}};
    const double scale = std::max({std::abs(gc.a), gc.b, 1.0});
    const double min_mod = 1e-8 * scale;
    double total = 0;
    for (int e = 0; e < 4; ++e) {
        const C z0 = corners[e], z1 = corners[e + 1];
        // adaptive subdivision: keep phase steps below pi/2
        struct Seg { double t0, t1; C f0, f1; };
        std::vector<Seg> stack;
        auto fval = [&](double t) { return gc.eval(z0 + t * (z1 - z0)); };
        stack.push_back({0.0, 1.0, fval(0.0), fval(1.0)});
        int guard = 0;
        while (!stack.empty()) {
            Seg s = stack.back();
            stack.pop_back();
            if (std::abs(s.f0) < min_mod || std::abs(s.f1) < min_mod)
                throw BoundaryRoot("contour modulus below tolerance; root near rectangle boundary");
            double dphi = std::arg(s.f1 / s.f0);
            if (std::abs(dphi) < 1.2 && (s.t1 - s.t0) < 0.6) {
                total += dphi;
                continue;
            }
            if (++guard > 2000000)
                throw NumericalError("strip_root_count: contour refinement diverged");
            double tm = 0.5 * (s.t0 + s.t1);
            C fm = fval(tm);
            stack.push_back({s.t0, tm, s.f0, fm});
            stack.push_back({tm, s.t1, fm, s.f1});
        }
    }
    const double winding = total / (2 * M_PI);
    const long n = std::lround(winding);
    if (std::abs(winding - n) > 0.05)
        throw NumericalError("strip_root_count: winding number not near an integer");
    return static_cast<int>(n);
}

} // namespace sirwave
