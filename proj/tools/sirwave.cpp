// Traveling-wave front solver for a delayed-diffusion SIR system:
// characteristic-root continuation, Green's-kernel inversion, super/sub
// solution certification, PQM cross iteration, and a direct PDE simulator.
#include <CLI11.hpp>

#include "sirwave/pipeline.hpp"

using namespace sirwave;

int main(int argc, char** argv) {
    CLI::App app{"sirwave: traveling wave fronts of a delayed-diffusion SIR model"};
    app.require_subcommand(1);

    std::string config_path;
    RunConfig rc;
    app.add_option("-c,--config", config_path, "flat key-value parameter file")->required();
    app.add_option("--out", rc.out_dir, "artifact output directory");
    app.add_option("--xi", rc.xi_halfwidth, "grid truncation half-width");
    app.add_option("--points", rc.grid_points, "grid points");
    app.add_option("--refine", rc.refine, "internal quadrature refinement factor");
    app.add_option("--tol", rc.tol_iter, "iteration stopping tolerance (gap or residual)");
    app.add_option("--tol-quad", rc.tol_quad, "quadrature tolerance");
    app.add_option("--max-iter", rc.max_iter, "iteration budget");
    app.add_option("--seed", rc.seed, "seed for randomized verification sampling");
    app.add_option("--emit-every", rc.emit_every, "write intermediate iterates every N steps");

    auto* roots = app.add_subcommand(
        "roots", "six quadratic roots and their delay continuations (CSV: label,lambda,eta,residual)");
    auto* greens = app.add_subcommand(
        "greens", "Green's kernels (CSV: xi,G; JSON: K, alpha, mass defect)");
    double r_override = 0;
    auto* ropt = greens->add_option("--r", r_override, "override the kernel delay");
    auto* profiles = app.add_subcommand(
        "profiles", "super/sub construction: certificate JSON + case-margin CSV");
    auto* iterate = app.add_subcommand(
        "iterate", "cross iteration to the wave (CSV: t,phi_up,psi_up,chi_up,phi_lo,psi_lo,chi_lo)");
    auto* simulate = app.add_subcommand(
        "simulate", "direct PDE run (CSV: t,x,N,I,R; JSON: measured speed, clips, blow-up)");
    simulate->add_option("--dx", rc.sim_dx, "spatial step");
    simulate->add_option("--dt", rc.sim_dt, "time step");
    simulate->add_option("--t-final", rc.sim_t_final, "final time");
    simulate->add_option("--snapshot-every", rc.snapshot_every, "steps between snapshots");
    auto* validate = app.add_subcommand("validate", "run the invariant suite, print PASS/FAIL table");
    auto* run = app.add_subcommand("run", "full pipeline: roots -> kernels -> certificate -> wave");

    CLI11_PARSE(app, argc, argv);

    try {
        rc.cfg = parse_config_file(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "configuration rejected: %s\n", e.what());
        return 2;
    }

    if (roots->parsed()) return guarded_run(rc, cmd_roots);
    if (greens->parsed()) {
        const bool has = ropt->count() > 0;
        auto fn = [&]() { return cmd_greens(rc, r_override, has); };
        try {
            rc.validate();
            return fn();
        } catch (const InfeasibleError& e) {
            std::fprintf(stderr, "infeasible configuration: %s\n", e.what());
            return 2;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "numerical failure: %s\n", e.what());
            return 3;
        }
    }
    if (profiles->parsed()) return guarded_run(rc, cmd_profiles);
    if (iterate->parsed()) return guarded_run(rc, cmd_iterate);
    if (simulate->parsed()) return guarded_run(rc, cmd_simulate);
    if (validate->parsed()) return guarded_run(rc, cmd_validate);
    if (run->parsed()) return guarded_run(rc, run_pipeline);
    return 1;
}
