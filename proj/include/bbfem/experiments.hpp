#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bbfem/dg.hpp"
#include "bbfem/report.hpp"

namespace bbfem {

enum class MassSolver { dense, cg, cg_fixed, block };

MassSolver parse_mass_solver(const std::string& s);
std::string to_string(MassSolver s);
FluxType parse_flux(const std::string& s);
std::string to_string(FluxType f);

struct MassAccuracyConfig {
    std::vector<int> dims{2};
    int n_min = 1;
    int n_max = 10;
    MassSolver solver = MassSolver::block;
    int trials = 5;
    double tol = 1e-12;  // cg only
    int base_dim = -1;   // block only
    std::uint64_t seed = 20111;
};

/// Random x uniform on [-1, 1], y = M x by dense product, x' = solve(y).
/// One row per (d, n) with the worst relative errors over the trials.
ExperimentReport mass_accuracy(const MassAccuracyConfig& cfg);

struct CgStudyConfig {
    std::vector<int> dims{2, 3};
    int n_min = 1;
    int n_max = 10;
    double tol = 1e-12;
    int trials = 1;
    std::uint64_t seed = 20111;
};

/// Iterations CG needs to reach `tol` on M^{d,n}; rows record the largest
/// count over the trials and whether every trial converged.
ExperimentReport cg_study(const CgStudyConfig& cfg);

struct TimingConfig {
    int mesh = 32;
    std::vector<int> degrees{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
    int reps = 5;
    bool opcount = false;
    int threads = 1;  // <= 0 keeps the OpenMP default
    int fit_min = 5;  // slopes are fitted over fit_min <= n <= fit_max
    int fit_max = 15;
    std::uint64_t seed = 20111;
};

/// Median wall time of one rhs() evaluation (volume, facet, mass solve) on
/// the m x m periodic mesh, per degree. With `opcount` the operation tally of
/// one evaluation is recorded as well. The fitted log-log slopes go into the
/// metadata as slope_seconds and slope_ops.
ExperimentReport timing(const TimingConfig& cfg);

struct AcousticsConfig {
    std::vector<int> meshes{8, 16, 32};
    int degree = 2;
    FluxType flux = FluxType::rusanov;
    bool wall = false;  // reflecting walls instead of periodic boundaries
    double cfl = 0.5;
    double tfinal = 0.5;
    bool constant = false;  // start from a constant state instead of a wave
    int quad_extra = 0;
    std::string snapshot;   // if set, final states go to <snapshot>_m<m>.csv
};

/// Runs the wave problem (plane wave when periodic, standing wave with walls)
/// on each mesh and reports per-field L2 errors at tfinal and the observed
/// rate between consecutive meshes. Throws std::runtime_error if the energy
/// grows by more than 10x.
ExperimentReport acoustics(const AcousticsConfig& cfg);

} // namespace bbfem
