#include "sirwave/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "sirwave/charroots.hpp"
#include "sirwave/greens.hpp"
#include "sirwave/iteration.hpp"
#include "sirwave/model.hpp"
#include "sirwave/pdesim.hpp"
#include "sirwave/profiles.hpp"

namespace sirwave {

using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const std::string& dir, const std::string& name, const std::string& text) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir + "/" + name, std::ios::binary);
    out << text;
}

void write_json(const std::string& dir, const std::string& name, json j) {
    j["schema_version"] = "1";
    write_file(dir, name, j.dump(2) + "\n");
}

json failure_record(const std::string& kind, const std::string& what) {
    json j;
    j["status"] = "failed";
    j["kind"] = kind;
    j["reason"] = what;
    return j;
}

} // namespace

UniformGrid RunConfig::make_grid() const {
    const double dx = dxi > 0 ? dxi : 2 * xi_halfwidth / grid_points;
    return UniformGrid{-xi_halfwidth, dx, grid_points};
}

void RunConfig::validate() const {
    cfg.params.validate();
    if (!(xi_halfwidth > 0) || grid_points < 16)
        throw ValidationError("grid: xi halfwidth must be positive, points >= 16");
    if (!(tol_iter > 0 && tol_quad > 0) || max_iter <= 0)
        throw ValidationError("tolerances must be positive");
    if (refine < 1 || refine > 64) throw ValidationError("refine must be in [1, 64]");
}

int cmd_roots(const RunConfig& rc) {
    const SirParameters& p = rc.cfg.params;
    WaveFrameParameters w = make_wave_frame(p, rc.cfg.M1, rc.cfg.M2, rc.cfg.M3);
    auto quads = front_quadratics(p, w.M1, w.M2, w.M3);
    auto exps = front_exp_polynomials(p, w);
    std::string csv = "label,lambda,eta,residual\n";
    for (int i = 0; i < 6; ++i) {
        const double lam = smallest_positive_root(quads[i]);
        const auto cont = continue_root(exps[i], lam);
        csv += "P" + std::to_string(i + 1) + "," + fmt(lam) + "," + fmt(cont.eta) + "," +
               fmt(std::abs(exps[i].eval(cont.eta))) + "\n";
    }
    write_file(rc.out_dir, "roots.csv", csv);
    std::cout << csv;
    return 0;
}

int cmd_greens(const RunConfig& rc, double r_override, bool has_override) {
    const SirParameters& p = rc.cfg.params;
    WaveFrameParameters w = make_wave_frame(p, rc.cfg.M1, rc.cfg.M2, rc.cfg.M3);
    const std::array<double, 3> betas = {w.beta1, w.beta2, w.beta3};
    const std::array<double, 3> D = {p.D_S, p.D_I, p.D_R};
    std::array<double, 3> rs = {w.r1, w.r2, w.r3};
    if (has_override) rs = {r_override, r_override, r_override};
    json sum;
    for (int i = 0; i < 3; ++i) {
        const double a = p.c / D[i], b = betas[i] / D[i];
        // sampling window wide enough for the decay fit
        const double rate = 0.5 * (std::sqrt(a * a + 4 * b) - a);
        const double span = 25.0 / std::min(rate, 0.5 * (std::sqrt(a * a + 4 * b) + a));
        const int n = 4001;
        UniformGrid g{-span, 2 * span / (n - 1), n};
        GreenKernel k = green_numeric(a, b, rs[i], g);
        std::string csv = "xi,G\n";
        for (int j = 0; j < g.n; ++j) csv += fmt(g.x(j)) + "," + fmt(k.values()[j]) + "\n";
        write_file(rc.out_dir, "greens_" + std::to_string(i + 1) + ".csv", csv);
        const double quad_mass = k.integral(-span, span) + k.tail_left(-span) + k.tail_right(span);
        json kj;
        kj["a"] = a;
        kj["b"] = b;
        kj["r"] = rs[i];
        kj["K"] = k.K;
        kj["alpha"] = k.alpha;
        kj["mass"] = quad_mass;
        kj["mass_defect"] = std::abs(quad_mass + 1.0 / b);
        sum["kernel_" + std::to_string(i + 1)] = kj;
    }
    write_json(rc.out_dir, "greens.json", sum);
    std::cout << sum.dump(2) << "\n";
    return 0;
}

namespace {

struct FrontBundle {
    WaveFrameParameters w;
    std::array<double, 6> lambdas;
    std::array<double, 6> etas;
    FrontParameters fp;
    PwExpTriple sup, sub;
};

FrontBundle make_front(const RunConfig& rc) {
    const SirParameters& p = rc.cfg.params;
    FrontBundle fb;
    fb.w = make_wave_frame(p, rc.cfg.M1, rc.cfg.M2, rc.cfg.M3);
    fb.w.validate(p);
    const double cstar = critical_wave_speed(p, fb.w.M1, fb.w.M2, fb.w.M3);
    if (!(reproduction_number(p) > 1))
        throw InfeasibleSolcond("reproduction number below threshold");
    if (!(p.c >= cstar - 1e-12)) throw InfeasibleSolcond("wave speed below critical");
    auto quads = front_quadratics(p, fb.w.M1, fb.w.M2, fb.w.M3);
    auto exps = front_exp_polynomials(p, fb.w);
    for (int i = 0; i < 6; ++i) {
        fb.lambdas[i] = smallest_positive_root(quads[i]);
        fb.etas[i] = continue_root(exps[i], fb.lambdas[i]).eta;
    }
    fb.fp = find_parameters(p, fb.w, fb.etas);
    fb.sup = build_super(fb.w, fb.fp);
    fb.sub = build_sub(fb.w, fb.fp);
    return fb;
}

json certificate_json(const FrontBundle& fb) {
    json j;
    j["eps0"] = fb.fp.cert.eps0;
    for (int i = 0; i < 6; ++i) {
        j["eps" + std::to_string(i + 1)] = fb.fp.cert.eps[i];
        j["t" + std::to_string(i + 1)] = fb.fp.breaks[i];
        j["residual" + std::to_string(i + 1)] = fb.fp.cert.residuals[i];
    }
    j["eta"] = fb.fp.eta_tail;
    j["big_m"] = fb.fp.big_m;
    return j;
}

std::string margins_csv(const CaseReport& s, const CaseReport& b) {
    std::string csv = "side,equation,case,lo,hi,worst_margin,worst_t,pass\n";
    auto add = [&](const char* side, const CaseReport& r) {
        for (const auto& rg : r.regions)
            csv += std::string(side) + "," + std::to_string(rg.equation) + "," +
                   std::to_string(rg.case_id) + "," + fmt(rg.lo) + "," + fmt(rg.hi) + "," +
                   fmt(rg.worst) + "," + fmt(rg.worst_t) + "," + (rg.pass ? "1" : "0") + "\n";
    };
    add("super", s);
    add("sub", b);
    return csv;
}

} // namespace

int cmd_profiles(const RunConfig& rc) {
    const SirParameters& p = rc.cfg.params;
    FrontBundle fb = make_front(rc);
    const UniformGrid g = rc.make_grid();
    auto srep = check_super_cases(fb.sup, fb.sub, p, fb.w, g.x0, g.x_last(), 1000);
    auto brep = check_sub_cases(fb.sup, fb.sub, p, fb.w, g.x0, g.x_last(), 1000);
    write_file(rc.out_dir, "case_margins.csv", margins_csv(srep, brep));
    write_json(rc.out_dir, "certificate.json", certificate_json(fb));
    std::cout << "certificate eps0 = " << fb.fp.cert.eps0
              << "; case checks: " << (srep.all_pass && brep.all_pass ? "PASS" : "FAIL") << "\n";
    return srep.all_pass && brep.all_pass ? 0 : 3;
}

namespace {
std::string triple_csv(const ProfileTriple& up, const ProfileTriple& lo) {
    std::string csv = "t,phi_up,psi_up,chi_up,phi_lo,psi_lo,chi_lo\n";
    const UniformGrid& g = up.phi.grid;
    for (int i = 0; i < g.n; ++i)
        csv += fmt(g.x(i)) + "," + fmt(up.phi.v[i]) + "," + fmt(up.psi.v[i]) + "," +
               fmt(up.chi.v[i]) + "," + fmt(lo.phi.v[i]) + "," + fmt(lo.psi.v[i]) + "," +
               fmt(lo.chi.v[i]) + "\n";
    return csv;
}
} // namespace

int cmd_iterate(const RunConfig& rc) {
    const SirParameters& p = rc.cfg.params;
    FrontBundle fb = make_front(rc);
    const UniformGrid g = rc.make_grid();
    IterationOptions opt;
    opt.tol = rc.tol_iter;
    opt.max_iter = rc.max_iter;
    opt.refine = rc.refine;
    int emit_n = 0;
    if (rc.emit_every > 0) {
        opt.emit_every = rc.emit_every;
        opt.emit = [&](int iter, const ProfileTriple& up, const ProfileTriple& lo) {
            write_file(rc.out_dir, "iterate_" + std::to_string(iter) + ".csv",
                       triple_csv(up, lo));
            ++emit_n;
        };
    }
    IterationResult res = cross_iterate(fb.sup, fb.sub, p, fb.w, g, opt);
    write_file(rc.out_dir, "wave.csv", triple_csv(res.upper, res.lower));
    json j;
    j["mu"] = res.mu;
    j["lifts"] = res.lifts;
    j["tracked"] = res.tracked;
    j["gap"] = res.final_gap;
    j["residual"] = {res.final_residual[0], res.final_residual[1], res.final_residual[2]};
    j["converged_by"] = res.gap_converged ? "gap" : "residual";
    j["wave_side"] = res.wave_side;
    write_json(rc.out_dir, "iterate.json", j);
    std::cout << "iterate: lifts=" << res.lifts << " tracked=" << res.tracked
              << " gap=" << res.final_gap << " residual=["
              << res.final_residual[0] << ", " << res.final_residual[1] << ", "
              << res.final_residual[2] << "]\n";
    return 0;
}

int cmd_simulate(const RunConfig& rc) {
    const SirParameters& p = rc.cfg.params;
    WaveFrameParameters w = make_wave_frame(p, rc.cfg.M1, rc.cfg.M2, rc.cfg.M3);
    // disease-free state plus a compact bump of height k2/2 in the middle
    const double width = std::max(40 * std::sqrt(std::max({p.D_S, p.D_I, p.D_R}) / p.mu1), 160.0);
    const int nx = static_cast<int>(width / rc.sim_dx) + 1;
    std::array<std::vector<double>, 3> init;
    for (auto& v : init) v.assign(nx, 0.0);
    for (int j = 0; j < nx; ++j) {
        const double x = -0.5 * width + j * rc.sim_dx;
        if (std::abs(x - width * 0.15) < 5.0)
            init[1][j] = 0.5 * w.k2 * (1 + std::cos(M_PI * (x - width * 0.15) / 5.0)) / 2;
    }
    PdeState st = make_pde_state(p, -0.5 * width, rc.sim_dx, nx, rc.sim_dt, init);
    Trajectory traj;
    traj.x0 = st.x0;
    traj.dx = st.dx;
    traj.nx = st.nx;
    const long steps = std::lround(rc.sim_t_final / rc.sim_dt);
    std::string csv = "t,x,N,I,R\n";
    bool blowup = false;
    std::string blow_reason;
    try {
        for (long s = 0; s <= steps; ++s) {
            if (s % rc.snapshot_every == 0) {
                traj.times.push_back(st.time);
                traj.I_frames.push_back(st.f[1]);
                for (int j = 0; j < st.nx; j += 4)
                    csv += fmt(st.time) + "," + fmt(st.x(j)) + "," + fmt(st.f[0][j]) + "," +
                           fmt(st.f[1][j]) + "," + fmt(st.f[2][j]) + "\n";
            }
            if (s < steps) pde_step(st, p);
        }
    } catch (const BlowUp& e) {
        blowup = true;
        blow_reason = e.what();
    }
    write_file(rc.out_dir, "snapshots.csv", csv);
    json j;
    j["clip_count"] = st.clip_count;
    j["blow_up"] = blowup;
    if (blowup) j["blow_up_reason"] = blow_reason;
    if (!blowup) {
        try {
            j["measured_speed"] = front_speed(traj, 0.5 * w.k2);
        } catch (const NoFront& e) {
            j["measured_speed"] = nullptr;
            j["no_front_reason"] = e.what();
        }
    }
    write_json(rc.out_dir, "simulate.json", j);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_validate(const RunConfig& rc) {
    const SirParameters& p = rc.cfg.params;
    json j;
    std::string table;
    bool all = true;
    auto row = [&](const std::string& name, bool pass, const std::string& detail) {
        table += (pass ? "PASS  " : "FAIL  ") + name + (detail.empty() ? "" : "  [" + detail + "]") + "\n";
        j[name] = pass;
        all = all && pass;
    };
    const double R0 = reproduction_number(p);
    row("reproduction_number_above_1", R0 > 1, "R0 = " + fmt(R0));
    const double cstar = critical_wave_speed(p, rc.cfg.M1, rc.cfg.M2, rc.cfg.M3);
    row("wave_speed_at_least_critical", p.c >= cstar - 1e-12, "c* = " + fmt(cstar));
    try {
        FrontBundle fb = make_front(rc);
        bool ordered = fb.lambdas[0] < fb.lambdas[1] && fb.lambdas[2] < fb.lambdas[3] &&
                       fb.lambdas[4] < fb.lambdas[5];
        row("root_pair_ordering", ordered, "");
        double worst = 0;
        auto exps = front_exp_polynomials(p, fb.w);
        for (int i = 0; i < 6; ++i)
            worst = std::max(worst, std::abs(exps[i].eval(fb.etas[i])));
        row("continued_root_residuals_below_1e-12", worst < 1e-12, fmt(worst));
        row("solcond_certificate", fb.fp.cert.valid(), "eps0 = " + fmt(fb.fp.cert.eps0));
        const UniformGrid g = rc.make_grid();
        auto srep = check_super_cases(fb.sup, fb.sub, p, fb.w, g.x0, g.x_last(), 1000);
        auto brep = check_sub_cases(fb.sup, fb.sub, p, fb.w, g.x0, g.x_last(), 1000);
        row("super_cases", srep.all_pass, "");
        row("sub_cases", brep.all_pass, "");
        auto pqm = pqm_constants(p, fb.w, 10000, rc.seed);
        row("pqm_sampling", pqm.violations == 0, "worst margin " + fmt(pqm.worst_margin));
        auto kernels = make_iteration_kernels(p, fb.w, g);
        double mass_defect = 0, sign_worst = 0, envelope = 0;
        for (int i = 0; i < 3; ++i) {
            const double m = kernels[i].integral(g.x0, g.x_last()) +
                             kernels[i].tail_left(g.x0) + kernels[i].tail_right(g.x_last());
            mass_defect = std::max(mass_defect, std::abs(m - kernels[i].mass()));
            for (int q = 0; q < g.n; ++q) {
                sign_worst = std::max(sign_worst, kernels[i].values()[q]);
                envelope = std::max(envelope,
                                    std::abs(kernels[i].values()[q]) -
                                        kernels[i].K * std::exp(-kernels[i].alpha * std::abs(g.x(q))));
            }
        }
        row("kernel_mass_identity", mass_defect < 1e-6, fmt(mass_defect));
        row("kernel_sign_property", sign_worst <= 1e-8, fmt(sign_worst));
        row("kernel_decay_envelope", envelope <= 0, fmt(envelope));
    } catch (const std::exception& e) {
        row("front_construction", false, e.what());
    }
    write_json(rc.out_dir, "validate.json", j);
    std::cout << table;
    return all ? 0 : 3;
}

int run_pipeline(const RunConfig& rc) {
    int code = cmd_roots(rc);
    if (code) return code;
    code = cmd_greens(rc, 0, false);
    if (code) return code;
    code = cmd_profiles(rc);
    if (code) return code;
    code = cmd_iterate(rc);
    if (code) return code;
    json j;
    j["status"] = "ok";
    write_json(rc.out_dir, "pipeline.json", j);
    return 0;
}

int guarded_run(const RunConfig& rc, int (*fn)(const RunConfig&)) {
    try {
        rc.validate();
        return fn(rc);
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible configuration: " << e.what() << "\n";
        write_json(rc.out_dir, "failure.json", failure_record("infeasible", e.what()));
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        write_json(rc.out_dir, "failure.json", failure_record("numerical", e.what()));
        return 3;
    }
}

} // namespace sirwave
