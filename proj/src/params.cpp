#include "sirwave/params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>
#include <algorithm>

namespace sirwave {

namespace {
void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}
} // namespace

void SirParameters::validate() const {
    require(D_S > 0, "d_s must be > 0");
    require(D_I > 0, "d_i must be > 0");
    require(D_R > 0, "d_r must be > 0");
    require(B > 0, "b must be > 0");
    require(mu1 > 0, "mu1 must be > 0");
    require(mu2 > 0, "mu2 must be > 0");
    require(mu3 > 0, "mu3 must be > 0");
    require(gamma > 0, "gamma must be > 0");
    require(beta > 0, "beta must be > 0");
    require(alpha >= 0, "alpha must be >= 0");
    require(tau1 >= 0 && tau2 >= 0 && tau3 >= 0 && tau4 >= 0,
            "delays must be >= 0");
    // interpretation of the garbled source assumption: tau4 is the smallest
    require(tau4 <= std::min({tau1, tau2, tau3}) + 1e-15,
            "tau4 must not exceed min(tau1,tau2,tau3)");
    require(c > 0, "c must be > 0");
    require(std::isfinite(B) && std::isfinite(c), "parameters must be finite");
}

void WaveFrameParameters::validate(const SirParameters& p) const {
    require(beta1 > 0 && beta2 > 0 && beta3 > 0, "PQM constants must be > 0");
    require(k1 > 0, "endemic wave limit k1 must be > 0 (requires mu2 >= mu1, mu3 >= mu1 with at least one strict)");
    require(k2 > 0 && k3 > 0, "endemic wave limits must be > 0");
    require(k1 < M1, "m1 must exceed k1");
    require(k2 < M2, "m2 must exceed k2");
    require(k3 < M3, "m3 must exceed k3");
    // keeps the incidence numerator nonnegative on the box
    require(M1 + M2 + M3 <= p.B / p.mu1 + 1e-12, "m1+m2+m3 must not exceed b/mu1");
}

double reproduction_number(const SirParameters& p) {
    return p.B * p.beta / (p.mu1 * (p.mu2 + p.gamma));
}

Equilibrium endemic_equilibrium(const SirParameters& p) {
    const double R0 = reproduction_number(p);
    if (!(R0 > 1.0))
        throw NoEndemicState("reproduction number below threshold (R0 <= 1)");
    const double g = p.mu2 + p.gamma;
    // steady state: S(I) = g (1 + alpha I)/beta,  B - mu1 S(I) - g I = 0.
    auto f = [&](double I) { return p.B - p.mu1 * g * (1 + p.alpha * I) / p.beta - g * I; };
    double lo = 0.0, hi = p.B / g;
    if (f(hi) > 0) hi = p.B / g * 2; // alpha<0 impossible; guard anyway
    double flo = f(lo);
    if (!(flo > 0)) throw NonConvergence("endemic bisection bracket failed");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) > 0) lo = mid; else hi = mid;
    }
    Equilibrium eq;
    eq.I = 0.5 * (lo + hi);
    if (!(eq.I > 0) || !std::isfinite(eq.I))
        throw NonConvergence("endemic bisection did not converge");
    eq.S = g * (1 + p.alpha * eq.I) / p.beta;
    eq.R = p.gamma * eq.I / p.mu3;
    // closed forms as printed in the source; numerators use alpha where the
    // threshold algebra says beta, so these can disagree with the solve
    eq.S_closed = (p.B * p.alpha + g) / (p.beta + p.alpha * p.mu1);
    eq.I_closed = (p.B * p.alpha - p.mu1 * g) / ((p.beta + p.alpha * p.mu1) * g);
    eq.R_closed = p.gamma * eq.I_closed / p.mu3;
    const double tol = 1e-9 * (1 + std::abs(eq.I));
    eq.closed_form_agrees = std::abs(eq.I - eq.I_closed) < tol &&
                            std::abs(eq.S - eq.S_closed) < tol;
    return eq;
}

namespace {
// constant terms q_i of the six quadratics lambda^2 - c lambda + q_i
std::array<double, 6> quad_constants(const SirParameters& p, double M1, double M2, double M3) {
    const double g = p.gamma + p.mu2;
    return {
        -p.mu1 + (p.mu2 - p.mu1) * M2 / M1 + (p.mu3 - p.mu1) * M3 / M1,
        -p.mu1,
        p.beta * p.B * M2 - g,
        -g,
        p.gamma * M2 / M3 - p.mu3,
        -p.mu3,
    };
}
} // namespace

double critical_wave_speed(const SirParameters& p, double M1, double M2, double M3) {
    double best = 0;
    for (double q : quad_constants(p, M1, M2, M3))
        best = std::max(best, 2 * std::sqrt(std::abs(q)));
    return best;
}

WaveFrameParameters make_wave_frame(const SirParameters& p, double M1, double M2, double M3) {
    WaveFrameParameters w;
    w.r1 = p.c * p.tau1;
    w.r2 = p.c * p.tau2;
    w.r3 = p.c * p.tau3;
    w.r4 = p.c * p.tau4;
    Equilibrium eq = endemic_equilibrium(p);
    w.k2 = eq.I;
    w.k3 = eq.R;
    w.k1 = p.B / p.mu1 - (eq.S + eq.I + eq.R);
    w.M1 = M1;
    w.M2 = M2;
    w.M3 = M3;
    w.beta1 = p.mu1;
    w.beta2 = (p.mu2 + p.gamma) + p.beta * M2 + p.beta * p.B / p.mu1;
    w.beta3 = p.mu3 + p.gamma;
    return w;
}

namespace {
const std::vector<std::string> kKeys = {
    "d_s", "d_i", "d_r", "b", "mu1", "mu2", "mu3", "gamma", "alpha", "beta",
    "tau1", "tau2", "tau3", "tau4", "c", "m1", "m2", "m3"};
} // namespace

ParsedConfig parse_config_text(const std::string& text) {
    std::map<std::string, double> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        std::string eq_or_val;
        if (!(ls >> eq_or_val))
            throw ValidationError("config line " + std::to_string(lineno) + ": missing value");
        if (eq_or_val == "=" && !(ls >> eq_or_val))
            throw ValidationError("config line " + std::to_string(lineno) + ": missing value");
        if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
            throw ValidationError("unknown config key '" + key + "'");
        if (kv.count(key))
            throw ValidationError("duplicate config key '" + key + "'");
        try {
            size_t pos = 0;
            kv[key] = std::stod(eq_or_val, &pos);
            if (pos != eq_or_val.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ValidationError("config key '" + key + "': invalid number '" + eq_or_val + "'");
        }
        std::string extra;
        if (ls >> extra)
            throw ValidationError("config line " + std::to_string(lineno) + ": trailing tokens");
    }
    for (const auto& k : kKeys)
        if (!kv.count(k)) throw ValidationError("missing config key '" + k + "'");
    ParsedConfig cfg;
    SirParameters& p = cfg.params;
    p.D_S = kv["d_s"]; p.D_I = kv["d_i"]; p.D_R = kv["d_r"];
    p.B = kv["b"]; p.mu1 = kv["mu1"]; p.mu2 = kv["mu2"]; p.mu3 = kv["mu3"];
    p.gamma = kv["gamma"]; p.alpha = kv["alpha"]; p.beta = kv["beta"];
    p.tau1 = kv["tau1"]; p.tau2 = kv["tau2"]; p.tau3 = kv["tau3"]; p.tau4 = kv["tau4"];
    p.c = kv["c"];
    cfg.M1 = kv["m1"]; cfg.M2 = kv["m2"]; cfg.M3 = kv["m3"];
    p.validate();
    if (!(cfg.M1 > 0 && cfg.M2 > 0 && cfg.M3 > 0))
        throw ValidationError("m1,m2,m3 must be > 0");
    return cfg;
}

ParsedConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string config_to_text(const ParsedConfig& cfg) {
    char buf[64];
    std::ostringstream out;
    auto put = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%s %.17g\n", key, v);
        out << buf;
    };
    const SirParameters& p = cfg.params;
    put("d_s", p.D_S); put("d_i", p.D_I); put("d_r", p.D_R);
    put("b", p.B); put("mu1", p.mu1); put("mu2", p.mu2); put("mu3", p.mu3);
    put("gamma", p.gamma); put("alpha", p.alpha); put("beta", p.beta);
    put("tau1", p.tau1); put("tau2", p.tau2); put("tau3", p.tau3); put("tau4", p.tau4);
    put("c", p.c);
    put("m1", cfg.M1); put("m2", cfg.M2); put("m3", cfg.M3);
    return out.str();
}

} // namespace sirwave
