#ifndef SIRWAVE_PIPELINE_HPP
#define SIRWAVE_PIPELINE_HPP

#include <cstdint>
#include <string>

#include "sirwave/params.hpp"
#include "sirwave/profile.hpp"

namespace sirwave {

struct RunConfig {
    ParsedConfig cfg;
    // grid
    double dxi = 0;          // config-grid spacing (derived from n if 0)
    double xi_halfwidth = 600.0;
    int grid_points = 4096;
    int refine = 4;
    // tolerances
    double tol_iter = 9e-5;
    double tol_quad = 1e-10;
    int max_iter = 4000;
    // output
    std::string out_dir = ".";
    int emit_every = 0;
    std::uint64_t seed = 1;
    // pdesim
    double sim_dx = 0.25;
    double sim_dt = 0.002;
    double sim_t_final = 20.0;
    int snapshot_every = 250;

    UniformGrid make_grid() const;
    void validate() const;
};

int cmd_roots(const RunConfig& rc);
int cmd_greens(const RunConfig& rc, double r_override, bool has_override);
int cmd_profiles(const RunConfig& rc);
int cmd_iterate(const RunConfig& rc);
int cmd_simulate(const RunConfig& rc);
int cmd_validate(const RunConfig& rc);
int run_pipeline(const RunConfig& rc);

/// maps exceptions to the documented exit codes and failure record
int guarded_run(const RunConfig& rc, int (*fn)(const RunConfig&));

} // namespace sirwave

#endif
