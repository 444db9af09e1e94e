#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bbfem/experiments.hpp"

using namespace bbfem;

namespace {

std::vector<int> range(int lo, int hi)
{
    std::vector<int> v(hi >= lo ? hi - lo + 1 : 0);
    std::iota(v.begin(), v.end(), lo);
    return v;
}

void emit(const ExperimentReport& r, const std::string& out)
{
    if (out.empty() || out == "-")
        write_csv(std::cout, r);
    else
        write_csv_file(out, r);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bernstein-basis simplicial kernels: mass-matrix and DG acoustics experiments"};
    app.require_subcommand(1);

    std::string out;
    std::uint64_t seed = 20111;

    // mass-accuracy
    MassAccuracyConfig ma;
    std::string ma_solver = "block";
    auto* c_ma = app.add_subcommand("mass-accuracy", "relative error of M^{-1}(M x) for random x");
    c_ma->add_option("--dim", ma.dims, "spatial dimensions")->check(CLI::Range(1, 3))->capture_default_str();
    c_ma->add_option("--degree", ma.n_min, "lowest degree")->check(CLI::Range(0, 30))->capture_default_str();
    c_ma->add_option("--degree-max", ma.n_max, "highest degree")->check(CLI::Range(0, 30))->capture_default_str();
    c_ma->add_option("--solver", ma_solver, "dense, cg, cg-fixed or block")
        ->check(CLI::IsMember({"dense", "cg", "cg-fixed", "block"}))
        ->capture_default_str();
    c_ma->add_option("--tol", ma.tol, "cg relative residual tolerance")->capture_default_str();
    c_ma->add_option("--trials", ma.trials, "random vectors per degree")->check(CLI::PositiveNumber)->capture_default_str();
    c_ma->add_option("--base-dim", ma.base_dim, "dimension of the dense base blocks (block solver); -1 for d-1")
        ->capture_default_str();

    // cg-study
    CgStudyConfig cg;
    auto* c_cg = app.add_subcommand("cg-study", "CG iterations to a relative residual tolerance");
    c_cg->add_option("--dim", cg.dims, "spatial dimensions")->check(CLI::Range(1, 3))->capture_default_str();
    c_cg->add_option("--degree", cg.n_min, "lowest degree")->check(CLI::Range(0, 30))->capture_default_str();
    c_cg->add_option("--degree-max", cg.n_max, "highest degree")->check(CLI::Range(0, 30))->capture_default_str();
    c_cg->add_option("--tol", cg.tol, "relative residual tolerance")->capture_default_str();
    c_cg->add_option("--trials", cg.trials, "random vectors per degree")->check(CLI::PositiveNumber)->capture_default_str();

    // timing
    TimingConfig tm;
    int tm_lo = 1, tm_hi = 15;
    auto* c_tm = app.add_subcommand("timing", "wall time of one DG right-hand side evaluation per degree");
    c_tm->add_option("--mesh", tm.mesh, "cells per side of the periodic square")->check(CLI::PositiveNumber)->capture_default_str();
    c_tm->add_option("--degree", tm_lo, "lowest degree")->check(CLI::Range(0, 30))->capture_default_str();
    c_tm->add_option("--degree-max", tm_hi, "highest degree")->check(CLI::Range(0, 30))->capture_default_str();
    c_tm->add_option("--reps", tm.reps, "timed evaluations per degree")->check(CLI::PositiveNumber)->capture_default_str();
    c_tm->add_flag("--opcount", tm.opcount, "also tally arithmetic operations");
    c_tm->add_option("--threads", tm.threads, "OpenMP threads; 0 keeps the runtime default")->capture_default_str();
    c_tm->add_option("--fit-min", tm.fit_min, "lowest degree in the slope fit")->capture_default_str();
    c_tm->add_option("--fit-max", tm.fit_max, "highest degree in the slope fit")->capture_default_str();

    // acoustics
    AcousticsConfig ac;
    std::string ac_flux = "rusanov", ac_bc = "periodic", ac_init = "wave";
    auto* c_ac = app.add_subcommand("acoustics", "wave propagation run with L2 errors and observed rates");
    c_ac->add_option("--mesh", ac.meshes, "cells per side, one run each")->check(CLI::PositiveNumber)->capture_default_str();
    c_ac->add_option("--degree", ac.degree, "polynomial degree")->check(CLI::Range(0, 30))->capture_default_str();
    c_ac->add_option("--flux", ac_flux, "rusanov or upwind")
        ->check(CLI::IsMember({"rusanov", "upwind"}))
        ->capture_default_str();
    c_ac->add_option("--bc", ac_bc, "periodic or wall")->check(CLI::IsMember({"periodic", "wall"}))->capture_default_str();
    c_ac->add_option("--cfl", ac.cfl, "dt = cfl * h_min / (2n + 1)")->check(CLI::PositiveNumber)->capture_default_str();
    c_ac->add_option("--tfinal", ac.tfinal, "final time")->check(CLI::NonNegativeNumber)->capture_default_str();
    c_ac->add_option("--initial", ac_init, "wave or constant")->check(CLI::IsMember({"wave", "constant"}))->capture_default_str();
    c_ac->add_option("--quad-extra", ac.quad_extra, "extra quadrature points per direction")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    c_ac->add_option("--snapshot", ac.snapshot, "write final states to <prefix>_m<m>.csv");

    for (auto* c : {c_ma, c_cg, c_tm, c_ac}) {
        c->add_option("--out", out, "CSV output path (stdout if omitted)");
        c->add_option("--seed", seed, "random seed")->capture_default_str();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c_ma) {
            ma.solver = parse_mass_solver(ma_solver);
            ma.seed = seed;
            emit(mass_accuracy(ma), out);
        } else if (*c_cg) {
            cg.seed = seed;
            emit(cg_study(cg), out);
        } else if (*c_tm) {
            tm.degrees = range(tm_lo, tm_hi);
            tm.seed = seed;
            const ExperimentReport r = timing(tm);
            emit(r, out);
            for (const char* key : {"slope_seconds", "slope_ops"})
                if (r.metadata.count(key))
                    std::cerr << key << " = " << r.metadata.at(key) << '\n';
        } else if (*c_ac) {
            ac.flux = parse_flux(ac_flux);
            ac.wall = ac_bc == "wall";
            ac.constant = ac_init == "constant";
            emit(acoustics(ac), out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
