#include "bbfem/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <omp.h>

#include "bbfem/mass.hpp"
#include "bbfem/mass_solve.hpp"
#include "bbfem/multiindex.hpp"

namespace bbfem {

MassSolver parse_mass_solver(const std::string& s)
{
    if (s == "dense")
        return MassSolver::dense;
    if (s == "cg")
        return MassSolver::cg;
    if (s == "cg-fixed")
        return MassSolver::cg_fixed;
    if (s == "block")
        return MassSolver::block;
    throw std::invalid_argument("unknown solver '" + s + "'");
}

std::string to_string(MassSolver s)
{
    switch (s) {
    case MassSolver::dense:
        return "dense";
    case MassSolver::cg:
        return "cg";
    case MassSolver::cg_fixed:
        return "cg-fixed";
    default:
        return "block";
    }
}

FluxType parse_flux(const std::string& s)
{
    if (s == "rusanov")
        return FluxType::rusanov;
    if (s == "upwind")
        return FluxType::upwind;
    throw std::invalid_argument("unknown flux '" + s + "'");
}

std::string to_string(FluxType f)
{
    return f == FluxType::rusanov ? "rusanov" : "upwind";
}

namespace {

void environment(ExperimentReport& r)
{
#ifdef __VERSION__
    r.metadata["compiler"] = __VERSION__;
#endif
    r.metadata["omp_max_threads"] = std::to_string(omp_get_max_threads());
}

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v)
        x = dist(rng);
    return v;
}

struct Errors {
    double inf;
    double two;
};

Errors relative_errors(const std::vector<double>& x, const std::vector<double>& ref)
{
    double ni = 0, di = 0, n2 = 0, d2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = x[i] - ref[i];
        ni = std::max(ni, std::abs(e));
        di = std::max(di, std::abs(ref[i]));
        n2 += e * e;
        d2 += ref[i] * ref[i];
    }
    return {ni / di, std::sqrt(n2 / d2)};
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

class ThreadGuard {
public:
    explicit ThreadGuard(int threads) : saved_(omp_get_max_threads())
    {
        if (threads > 0)
            omp_set_num_threads(threads);
    }
    ~ThreadGuard() { omp_set_num_threads(saved_); }
    ThreadGuard(const ThreadGuard&) = delete;
    ThreadGuard& operator=(const ThreadGuard&) = delete;

private:
    int saved_;
};

} // namespace

ExperimentReport mass_accuracy(const MassAccuracyConfig& cfg)
{
    ExperimentReport r;
    r.name = "mass-accuracy";
    environment(r);
    r.metadata["solver"] = to_string(cfg.solver);
    r.metadata["seed"] = std::to_string(cfg.seed);
    r.columns = {"d", "n", "size", "solver", "trials", "iterations", "rel_err_inf", "rel_err_2"};
    std::mt19937_64 rng(cfg.seed);
    for (int d : cfg.dims)
        for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
            const Eigen::MatrixXd M = mass_dense(d, n, n);
            const std::size_t size = static_cast<std::size_t>(M.rows());
            Eigen::LLT<Eigen::MatrixXd> llt;
            std::unique_ptr<BlockLDLt> block;
            std::unique_ptr<MassOperator> op;
            switch (cfg.solver) {
            case MassSolver::dense:
                llt.compute(M);
                break;
            case MassSolver::block:
                block = std::make_unique<BlockLDLt>(d, n, cfg.base_dim);
                break;
            default:
                op = std::make_unique<MassOperator>(d, n);
            }
            double worst_inf = 0, worst_2 = 0;
            int iterations = 0;
            for (int t = 0; t < cfg.trials; ++t) {
                const std::vector<double> x = random_vector(size, rng);
                const Eigen::VectorXd y = M * Eigen::Map<const Eigen::VectorXd>(x.data(), size);
                std::vector<double> sol(size);
                switch (cfg.solver) {
                case MassSolver::dense:
                    Eigen::Map<Eigen::VectorXd>(sol.data(), size) = llt.solve(y);
                    break;
                case MassSolver::block:
                    block->solve(std::span<const double>(y.data(), size), sol);
                    break;
                case MassSolver::cg:
                case MassSolver::cg_fixed: {
                    const bool fixed = cfg.solver == MassSolver::cg_fixed;
                    const CgResult res = cg_solve(*op, std::span<const double>(y.data(), size), fixed ? 0.0 : cfg.tol,
                                                  fixed ? n + 1 : 100000);
                    sol = res.x;
                    iterations = std::max(iterations, res.iterations);
                    break;
                }
                }
                const Errors e = relative_errors(sol, x);
                worst_inf = std::max(worst_inf, e.inf);
                worst_2 = std::max(worst_2, e.two);
            }
            r.add_row({std::int64_t{d}, std::int64_t{n}, static_cast<std::int64_t>(size), to_string(cfg.solver),
                       std::int64_t{cfg.trials}, std::int64_t{iterations}, worst_inf, worst_2});
        }
    return r;
}

ExperimentReport cg_study(const CgStudyConfig& cfg)
{
    ExperimentReport r;
    r.name = "cg-study";
    environment(r);
    r.metadata["tol"] = format_value(cfg.tol);
    r.metadata["seed"] = std::to_string(cfg.seed);
    r.columns = {"d", "n", "size", "distinct_eigenvalues", "iterations", "converged", "relative_residual",
                 "rel_err_inf"};
    std::mt19937_64 rng(cfg.seed);
    for (int d : cfg.dims)
        for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
            const MassOperator op(d, n);
            int iterations = 0;
            bool converged = true;
            double residual = 0, err = 0;
            for (int t = 0; t < cfg.trials; ++t) {
                const std::vector<double> x = random_vector(op.size(), rng);
                std::vector<double> y(op.size());
                op.apply(x, y);
                const CgResult res = cg_solve(op, y, cfg.tol, 100000);
                iterations = std::max(iterations, res.iterations);
                converged = converged && res.converged;
                residual = std::max(residual, res.relative_residual);
                err = std::max(err, relative_errors(res.x, x).inf);
            }
            r.add_row({std::int64_t{d}, std::int64_t{n}, static_cast<std::int64_t>(op.size()), std::int64_t{n + 1},
                       std::int64_t{iterations}, std::int64_t{converged ? 1 : 0}, residual, err});
        }
    return r;
}

ExperimentReport timing(const TimingConfig& cfg)
{
    ThreadGuard guard(cfg.threads);
    ExperimentReport r;
    r.name = "timing";
    environment(r);
    r.metadata["mesh"] = std::to_string(cfg.mesh);
    r.metadata["reps"] = std::to_string(cfg.reps);
    r.columns = {"n", "cells", "dofs", "median_seconds", "min_seconds", "ops"};
    const SimplexMesh mesh = build_structured_mesh(cfg.mesh, true);
    std::mt19937_64 rng(cfg.seed);
    std::vector<double> fn, ft, fo;
    for (int n : cfg.degrees) {
        const AcousticsDG dg(mesh, n);
        AcousticState u = dg.zero_state(), out = dg.zero_state();
        u.data() = random_vector(u.data().size(), rng);
        dg.rhs(u, out);
        std::vector<double> times;
        for (int k = 0; k < std::max(cfg.reps, 1); ++k) {
            const auto t0 = std::chrono::steady_clock::now();
            dg.rhs(u, out);
            const auto t1 = std::chrono::steady_clock::now();
            times.push_back(std::chrono::duration<double>(t1 - t0).count());
        }
        std::int64_t ops = 0;
        if (cfg.opcount) {
            OpCounts c;
            dg.rhs(u, out, Schedule::serial, &c);
            ops = static_cast<std::int64_t>(c.total());
        }
        const double med = median(times);
        r.add_row({std::int64_t{n}, static_cast<std::int64_t>(mesh.num_cells()),
                   static_cast<std::int64_t>(u.data().size()), med, *std::min_element(times.begin(), times.end()),
                   ops});
        if (n >= cfg.fit_min && n <= cfg.fit_max) {
            fn.push_back(n);
            ft.push_back(med);
            fo.push_back(static_cast<double>(ops));
        }
    }
    if (fn.size() >= 2) {
        r.metadata["slope_seconds"] = format_value(loglog_slope(fn, ft));
        if (cfg.opcount)
            r.metadata["slope_ops"] = format_value(loglog_slope(fn, fo));
        r.metadata["fit_range"] = std::to_string(cfg.fit_min) + "-" + std::to_string(cfg.fit_max);
    }
    return r;
}

ExperimentReport acoustics(const AcousticsConfig& cfg)
{
    ExperimentReport r;
    r.name = "acoustics";
    environment(r);
    r.metadata["flux"] = to_string(cfg.flux);
    r.metadata["bc"] = cfg.wall ? "wall" : "periodic";
    r.metadata["cfl"] = format_value(cfg.cfl);
    r.metadata["tfinal"] = format_value(cfg.tfinal);
    r.metadata["initial"] = cfg.constant ? "constant" : (cfg.wall ? "standing-wave" : "plane-wave");
    r.columns = {"m", "n", "steps", "dt", "err_p", "err_u1", "err_u2", "err_total", "rate", "energy_ratio"};

    ExactSolution exact;
    if (cfg.constant) {
        const FieldValues c = cfg.wall ? FieldValues{1.0, 0.0, 0.0} : FieldValues{1.0, 0.25, -0.5};
        exact = [c](double, double, double) { return c; };
    } else if (cfg.wall) {
        exact = standing_wave;
    } else {
        exact = plane_wave;
    }

    double prev_err = 0;
    int prev_m = 0;
    for (int m : cfg.meshes) {
        const SimplexMesh mesh = build_structured_mesh(m, !cfg.wall);
        const AcousticsDG dg(mesh, cfg.degree, {cfg.flux, MassSolverType::block, cfg.quad_extra});
        AcousticState u = dg.project(exact, 0.0);
        double dt = stable_dt(mesh, cfg.degree, cfg.cfl);
        const int steps = cfg.tfinal > 0 ? static_cast<int>(std::ceil(cfg.tfinal / dt)) : 0;
        dt = steps > 0 ? cfg.tfinal / steps : 0.0;
        const double e0 = dg.energy(u);
        double energy = e0;
        for (int s = 0; s < steps; ++s) {
            step_ssprk3(dg, u, dt);
            energy = dg.energy(u);
            if (!std::isfinite(energy) || (e0 > 0 && energy > 10.0 * e0))
                throw std::runtime_error("acoustics: energy grew from " + format_value(e0) + " to " +
                                         format_value(energy) + " by step " + std::to_string(s + 1) + " (m=" +
                                         std::to_string(m) + ", n=" + std::to_string(cfg.degree) + ", cfl=" +
                                         format_value(cfg.cfl) + "); the time step is unstable");
        }
        const FieldValues e = dg.l2_error(u, exact, cfg.tfinal);
        const double total = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
        ReportValue rate = std::string("-");
        if (prev_m > 0 && prev_err > 0 && total > 0)
            rate = std::log(prev_err / total) / std::log(double(m) / prev_m);
        r.add_row({std::int64_t{m}, std::int64_t{cfg.degree}, std::int64_t{steps}, dt, e[0], e[1], e[2], total, rate,
                   e0 > 0 ? energy / e0 : 1.0});
        prev_err = total;
        prev_m = m;
        if (!cfg.snapshot.empty()) {
            const std::string path = cfg.snapshot + "_m" + std::to_string(m) + ".csv";
            std::ofstream out(path);
            if (!out)
                throw std::runtime_error("cannot open '" + path + "' for writing");
            write_state(out, u);
        }
    }
    return r;
}

} // namespace bbfem
