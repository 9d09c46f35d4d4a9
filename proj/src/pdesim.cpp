#include "sirwave/pdesim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sirwave {

PdeState make_pde_state(const SirParameters& p, double x0, double dx, int nx, double dt,
                        const std::array<std::vector<double>, 3>& init) {
    PdeState st;
    st.x0 = x0;
    st.dx = dx;
    st.nx = nx;
    st.dt = dt;
    st.time = 0;
    st.f = init;
    const double tau_max = std::max({p.tau1, p.tau2, p.tau3, p.tau4});
    const int depth = static_cast<int>(std::ceil(tau_max / dt)) + 2;
    st.ring.assign(depth, init);
    st.ring_head = 0;
    return st;
}

namespace {
// linear interpolation into the history ring at t - tau
void history_at(const PdeState& st, double tau, int comp, std::vector<double>& out) {
    const double steps = tau / st.dt;
    const int lo = static_cast<int>(std::floor(steps));
    const double f = steps - lo;
    const int depth = static_cast<int>(st.ring.size());
    if (lo + 1 >= depth) throw HistoryUnderflow("history ring too shallow for requested delay");
    const auto& a = st.ring[((st.ring_head - lo) % depth + depth) % depth][comp];
    const auto& b = st.ring[((st.ring_head - lo - 1) % depth + depth) % depth][comp];
    out.resize(st.nx);
    for (int j = 0; j < st.nx; ++j) out[j] = a[j] * (1 - f) + b[j] * f;
}

// centered Laplacian with mirror (zero-flux) boundaries
inline double lap(const std::vector<double>& u, int j, int nx, double dx2) {
    const double um = j == 0 ? u[1] : u[j - 1];
    const double up = j == nx - 1 ? u[nx - 2] : u[j + 1];
    return (um - 2 * u[j] + up) / dx2;
}
} // namespace

void pde_step(PdeState& st, const SirParameters& p) {
    const double dx2 = st.dx * st.dx;
    static thread_local std::vector<double> hN, hI, hR, hI4;
    history_at(st, p.tau1, 0, hN);
    history_at(st, p.tau2, 1, hI);
    history_at(st, p.tau3, 2, hR);
    history_at(st, p.tau4, 1, hI4);
    const auto& N = st.f[0];
    const auto& I = st.f[1];
    const auto& R = st.f[2];
    std::array<std::vector<double>, 3> out = st.f;
    const double cap = p.B / p.mu1;
    const double g = p.mu2 + p.gamma;
    for (int j = 0; j < st.nx; ++j) {
        const double inc = p.beta * (cap - N[j] - I[j] - R[j]) * hI4[j] / (1 + p.alpha * hI4[j]);
        double nN = N[j] + st.dt * (p.D_S * lap(hN, j, st.nx, dx2) - p.mu1 * N[j] +
                                    (p.mu2 - p.mu1) * I[j] + (p.mu3 - p.mu1) * R[j]);
        double nI = I[j] + st.dt * (p.D_I * lap(hI, j, st.nx, dx2) + inc - g * I[j]);
        double nR = R[j] + st.dt * (p.D_R * lap(hR, j, st.nx, dx2) + p.gamma * I[j] - p.mu3 * R[j]);
        if (nI < 0) { nI = 0; ++st.clip_count; }
        if (nR < 0) { nR = 0; ++st.clip_count; }
        if (std::abs(nN) > 1e6 || std::abs(nI) > 1e6 || std::abs(nR) > 1e6) {
            std::ostringstream os;
            os << "field blow-up at x = " << st.x(j) << ", t = " << st.time + st.dt;
            throw BlowUp(os.str());
        }
        out[0][j] = nN;
        out[1][j] = nI;
        out[2][j] = nR;
    }
    st.f = std::move(out);
    st.time += st.dt;
    const int depth = static_cast<int>(st.ring.size());
    st.ring_head = (st.ring_head + 1) % depth;
    st.ring[st.ring_head] = st.f;
}

namespace {
// first upward level crossing within the tracked middle 60%
bool level_position(const std::vector<double>& I, double x0, double dx, int nx, double level,
                    double& pos) {
    const int lo = static_cast<int>(0.2 * nx), hi = static_cast<int>(0.8 * nx);
    for (int j = lo; j < hi - 1; ++j) {
        if (I[j] < level && I[j + 1] >= level) {
            const double f = (level - I[j]) / (I[j + 1] - I[j]);
            pos = x0 + (j + f) * dx;
            return true;
        }
    }
    return false;
}
} // namespace

double front_speed(const Trajectory& traj, double level) {
    std::vector<double> ts, xs;
    for (std::size_t k = traj.I_frames.size() / 2; k < traj.I_frames.size(); ++k) {
        double pos;
        if (!level_position(traj.I_frames[k], traj.x0, traj.dx, traj.nx, level, pos))
            throw NoFront("level set absent or outside the tracked region");
        ts.push_back(traj.times[k]);
        xs.push_back(pos);
    }
    if (ts.size() < 3) throw NoFront("trajectory too short for a speed fit");
    const double x_span = *std::max_element(xs.begin(), xs.end()) -
                          *std::min_element(xs.begin(), xs.end());
    if (x_span < 20 * traj.dx)
        throw NoFront("level crossing moved fewer than 20 grid cells");
    double sw = ts.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sx += ts[i];
        sy += xs[i];
        sxx += ts[i] * ts[i];
        sxy += ts[i] * xs[i];
    }
    const double slope = (sw * sxy - sx * sy) / (sw * sxx - sx * sx);
    return slope;
}

WaveComparison compare_with_wave(const Trajectory& traj, std::size_t frame,
                                 const ProfileFun& wave_psi, double level) {
    const auto& I = traj.I_frames.at(frame);
    double xpos;
    if (!level_position(I, traj.x0, traj.dx, traj.nx, level, xpos))
        throw NoFront("level set absent in comparison frame");
    // wave-side crossing position of the same level
    double wpos = 0;
    bool found = false;
    const UniformGrid& g = wave_psi.grid;
    for (int i = 0; i < g.n - 1; ++i) {
        if (wave_psi.v[i] < level && wave_psi.v[i + 1] >= level) {
            const double f = (level - wave_psi.v[i]) / (wave_psi.v[i + 1] - wave_psi.v[i]);
            wpos = g.x(i) + f * g.dx;
            found = true;
            break;
        }
    }
    if (!found) throw NoFront("wave profile never crosses the comparison level");
    WaveComparison cmp;
    cmp.shift = wpos - xpos;
    const int lo = static_cast<int>(0.2 * traj.nx), hi = static_cast<int>(0.8 * traj.nx);
    double sup = 0, l2 = 0;
    int count = 0;
    for (int j = lo; j < hi; ++j) {
        const double xw = traj.x0 + j * traj.dx + cmp.shift;
        const double d = I[j] - wave_psi.value(xw);
        sup = std::max(sup, std::abs(d));
        l2 += d * d;
        ++count;
    }
    cmp.sup_error = sup;
    cmp.l2_error = std::sqrt(l2 * traj.dx);
    return cmp;
}

} // namespace sirwave
