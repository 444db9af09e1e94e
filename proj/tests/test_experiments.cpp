#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bbfem/experiments.hpp"
#include "oracle.hpp"

using namespace bbfem;

namespace {

ExperimentReport round_trip(const ExperimentReport& r)
{
    std::stringstream ss;
    write_csv(ss, r);
    return read_csv(ss);
}

} // namespace

TEST_CASE("value formatting")
{
    CHECK(format_value(std::int64_t{-42}) == "-42");
    CHECK(format_value(1.0) == "1.0");
    CHECK(format_value(0.1) == "0.10000000000000001");
    CHECK(format_value(2.0 / 3.0) == "0.66666666666666663");
    CHECK(format_value(1e-300) == "1e-300");
    CHECK(format_value(std::string("block")) == "block");
    CHECK(std::get<std::int64_t>(parse_value("17")) == 17);
    CHECK(std::get<double>(parse_value("17.0")) == 17.0);
    CHECK(std::get<double>(parse_value("1e5")) == 1e5);
    CHECK(std::isinf(std::get<double>(parse_value("inf"))));
    CHECK(std::get<std::string>(parse_value("cg-fixed")) == "cg-fixed");
    CHECK(std::get<std::string>(parse_value("-")) == "-");

    std::mt19937_64 rng(40);
    for (double x : oracle::random_vector(2000, rng, -1e3, 1e3)) {
        const double y = x * std::pow(10.0, static_cast<int>(x) % 200);
        CHECK(std::get<double>(parse_value(format_value(y))) == y);
    }
}

TEST_CASE("report csv round trip")
{
    ExperimentReport r;
    r.name = "demo";
    r.metadata = {{"seed", "7"}, {"note", "a b=c"}};
    r.columns = {"k", "x", "label"};
    r.add_row({std::int64_t{1}, 0.5, std::string("a")});
    r.add_row({std::int64_t{-3}, 1.0 / 3.0, std::string("-")});
    r.add_row({std::int64_t{0}, -2.0, std::string("")});
    CHECK_THROWS_AS(r.add_row({std::int64_t{1}}), std::invalid_argument);
    CHECK(round_trip(r) == r);
    CHECK(r.number(1, "x") == 1.0 / 3.0);
    CHECK(r.number(1, "k") == -3.0);
    CHECK_THROWS(r.number(0, "label"));
    CHECK_THROWS_AS(r.column("missing"), std::out_of_range);

    ExperimentReport bad = r;
    bad.rows[0][2] = std::string("x,y");
    std::stringstream ss;
    CHECK_THROWS_AS(write_csv(ss, bad), std::invalid_argument);
    std::stringstream ragged("# experiment=x\na,b\n1\n");
    CHECK_THROWS_AS(read_csv(ragged), std::runtime_error);
}

TEST_CASE("loglog slope")
{
    CHECK(loglog_slope({1, 2, 4, 8}, {3, 24, 192, 1536}) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK_THROWS(loglog_slope({1}, {1}));
}

TEST_CASE("mass-accuracy")
{
    MassAccuracyConfig cfg;
    cfg.dims = {2};
    cfg.n_min = 10;
    cfg.n_max = 10;
    const ExperimentReport block = mass_accuracy(cfg);
    CHECK(block.number(0, "rel_err_inf") <= 1e-9);
    CHECK(round_trip(block) == block);

    cfg.solver = MassSolver::cg;
    const ExperimentReport cg = mass_accuracy(cfg);
    cfg.solver = MassSolver::cg_fixed;
    const ExperimentReport fixed = mass_accuracy(cfg);
    CHECK(fixed.number(0, "iterations") == 11);
    CHECK(fixed.number(0, "rel_err_inf") >= 100 * cg.number(0, "rel_err_inf"));

    // same seed, same report
    CHECK(mass_accuracy(cfg) == fixed);

    cfg.solver = MassSolver::dense;
    cfg.n_min = 1;
    cfg.n_max = 20;
    for (int d : {1, 2, 3}) {
        cfg.dims = {d};
        const ExperimentReport dense = mass_accuracy(cfg);
        std::vector<double> n, e;
        for (std::size_t i = 0; i < dense.rows.size(); ++i) {
            n.push_back(dense.number(i, "n"));
            e.push_back(std::log(dense.number(i, "rel_err_inf")));
        }
        // log(error) against n: exponential growth means a positive slope
        double mn = 0, me = 0;
        for (std::size_t i = 0; i < n.size(); ++i) {
            mn += n[i] / n.size();
            me += e[i] / n.size();
        }
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < n.size(); ++i) {
            sxy += (n[i] - mn) * (e[i] - me);
            sxx += (n[i] - mn) * (n[i] - mn);
        }
        CHECK(sxy / sxx > 0.5);
    }
}

TEST_CASE("cg-study")
{
    CgStudyConfig cfg;
    cfg.n_max = 10;
    const ExperimentReport r = cg_study(cfg);
    CHECK(round_trip(r) == r);
    auto iters = [&](int d, int n) {
        for (std::size_t i = 0; i < r.rows.size(); ++i)
            if (r.number(i, "d") == d && r.number(i, "n") == n)
                return r.number(i, "iterations");
        FAIL("missing row");
        return 0.0;
    };
    CHECK(iters(2, 1) <= 3);
    for (std::size_t i = 0; i < r.rows.size(); ++i)
        CHECK(r.number(i, "converged") == 1);
    for (int d : {2, 3})
        for (int n = 2; n <= 10; ++n)
            CHECK(iters(d, n) >= iters(d, n - 1) - 1);
    for (int n = 1; n <= 10; ++n)
        CHECK(std::abs(iters(3, n) - iters(2, n)) <= 0.2 * iters(2, n));
}

TEST_CASE("timing")
{
    TimingConfig cfg;
    cfg.degrees = {1, 2, 5};
    cfg.reps = 3;
    cfg.opcount = true;
    cfg.fit_min = 1;
    const ExperimentReport r = timing(cfg);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.number(0, "cells") == 2048);
    CHECK(r.number(2, "dofs") == 2048 * 3 * 21);
    CHECK(r.number(2, "ops") > r.number(1, "ops"));
    CHECK(r.metadata.count("slope_seconds") == 1);
    CHECK(r.metadata.count("slope_ops") == 1);
    CHECK(round_trip(r) == r);

    cfg.degrees = {5};
    cfg.opcount = false;
    cfg.reps = 10;
    const double a = timing(cfg).number(0, "median_seconds");
    cfg.reps = 20;
    const double b = timing(cfg).number(0, "median_seconds");
    CHECK(std::abs(b - a) <= 0.2 * a);
}

TEST_CASE("acoustics")
{
    AcousticsConfig cfg;
    cfg.meshes = {4, 8};
    cfg.tfinal = 0.25;
    const ExperimentReport rus = acoustics(cfg);
    CHECK(round_trip(rus) == rus);
    CHECK(std::get<std::string>(rus.rows[0][rus.column("rate")]) == "-");
    CHECK(rus.number(1, "rate") >= 2.5);
    cfg.flux = FluxType::upwind;
    const ExperimentReport up = acoustics(cfg);
    for (std::size_t i = 0; i < 2; ++i) {
        const double a = rus.number(i, "err_total"), b = up.number(i, "err_total");
        CHECK(std::max(a, b) <= 3 * std::min(a, b));
    }

    cfg.constant = true;
    for (bool wall : {false, true}) {
        cfg.wall = wall;
        const ExperimentReport c = acoustics(cfg);
        for (std::size_t i = 0; i < c.rows.size(); ++i)
            CHECK(c.number(i, "err_total") <= 1e-12);
    }

    cfg.constant = false;
    cfg.wall = false;
    cfg.cfl = 3.0;
    CHECK_THROWS_AS(acoustics(cfg), std::runtime_error);
}
