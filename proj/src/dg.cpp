#include "bbfem/dg.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bbfem/mass.hpp"

namespace bbfem {

namespace {

constexpr int kDim = 2;
constexpr double kFactorial = 2.0; // d! for d = 2

std::array<int, 2> edge_locals(int v)
{
    if (v == 0)
        return {1, 2};
    if (v == 1)
        return {0, 2};
    return {0, 1};
}

} // namespace

std::array<std::array<double, 2>, kFields> acoustic_flux(const FieldValues& q)
{
    return {{{q[1], q[2]}, {q[0], 0.0}, {0.0, q[0]}}};
}

FieldValues numerical_flux(FluxType type, const FieldValues& qm, const FieldValues& qp,
                           const std::array<double, 2>& n)
{
    const double unm = qm[1] * n[0] + qm[2] * n[1];
    const double unp = qp[1] * n[0] + qp[2] * n[1];
    switch (type) {
    case FluxType::rusanov: {
        const double avg_un = 0.5 * (unm + unp);
        const double avg_p = 0.5 * (qm[0] + qp[0]);
        return {avg_un - 0.5 * (qp[0] - qm[0]), avg_p * n[0] - 0.5 * (qp[1] - qm[1]),
                avg_p * n[1] - 0.5 * (qp[2] - qm[2])};
    }
    case FluxType::upwind: {
        const double ps = 0.5 * (qm[0] + qp[0]) + 0.5 * (unm - unp);
        const double uns = 0.5 * (unm + unp) + 0.5 * (qm[0] - qp[0]);
        return {uns, ps * n[0], ps * n[1]};
    }
    }
    throw std::invalid_argument("numerical_flux: unknown flux type");
}

FieldValues wall_ghost(const FieldValues& q, const std::array<double, 2>& n)
{
    const double un = q[1] * n[0] + q[2] * n[1];
    return {q[0], q[1] - 2.0 * un * n[0], q[2] - 2.0 * un * n[1]};
}

AcousticState::AcousticState(std::size_t cells, int degree)
    : cells_(cells), n_(degree), block_(polynomial_dim(kDim, degree)), data_(cells * kFields * block_, 0.0)
{
}

std::vector<std::size_t> facet_dofs(int n, int v)
{
    if (v < 0 || v > 2)
        throw std::out_of_range("facet_dofs: local vertex must be 0, 1 or 2");
    const auto [a, b] = edge_locals(v);
    std::vector<std::size_t> dofs(n + 1);
    for (int j = 0; j <= n; ++j) {
        std::vector<int> alpha(3, 0);
        alpha[a] = j;
        alpha[b] = n - j;
        dofs[j] = rank(MultiIndex(alpha));
    }
    return dofs;
}

std::vector<double> trace_restrict(int n, std::span<const double> coeffs, int v, bool flip)
{
    if (coeffs.size() != polynomial_dim(kDim, n))
        throw std::invalid_argument("trace_restrict: coefficient count does not match degree");
    const auto dofs = facet_dofs(n, v);
    std::vector<double> out(n + 1);
    for (int j = 0; j <= n; ++j)
        out[j] = coeffs[dofs[flip ? n - j : j]];
    return out;
}

AcousticsDG::AcousticsDG(const SimplexMesh& mesh, int n, DGOptions opts)
    : mesh_(mesh), n_(n), opts_(opts), block_(polynomial_dim(kDim, n)),
      volume_kernel_(kDim, n, n + 1 + opts.quad_extra), facet_kernel_(kDim - 1, n, n + 1 + opts.quad_extra),
      reference_mass_(kDim, n)
{
    if (n < 0)
        throw std::invalid_argument("AcousticsDG: degree must be nonnegative");
    for (std::size_t c = 0; c < mesh.num_cells(); ++c)
        cells_.push_back(cell_geometry(mesh, c));
    for (std::size_t f = 0; f < mesh.num_facets(); ++f)
        facets_.push_back(facet_geometry(mesh, f));
    if (n > 0)
        gradient_ = std::make_unique<GradientPattern>(kDim, n);
    for (int v = 0; v < 3; ++v)
        facet_dofs_[v] = facet_dofs(n, v);
    if (opts.solver == MassSolverType::block)
        block_solver_ = std::make_shared<const BlockLDLt>(kDim, n);
    else
        dense_solver_.compute(mass_dense(kDim, n, n));
}

void AcousticsDG::cell_volume(const AcousticState& u, std::size_t c, std::span<double> out,
                              std::vector<double>& work, OpCounts* ops) const
{
    std::fill(out.begin(), out.end(), 0.0);
    if (n_ == 0)
        return;
    const std::size_t Q = volume_kernel_.rule().size();
    const std::size_t Pm = polynomial_dim(kDim, n_ - 1);
    work.resize(kFields * Q + 2 * kFields * Q + 2 * kFields * Pm);
    double* vals = work.data();
    double* flux = vals + kFields * Q;      // component (f, dir) at flux[(2f + dir) Q + k]
    double* mom = flux + 2 * kFields * Q;   // likewise, Pm each

    for (int f = 0; f < kFields; ++f)
        volume_kernel_.evaluate(n_, u.field(c, f), {vals + f * Q, Q}, ops);
    for (std::size_t k = 0; k < Q; ++k) {
        const auto F = acoustic_flux({vals[k], vals[Q + k], vals[2 * Q + k]});
        for (int f = 0; f < kFields; ++f)
            for (int dir = 0; dir < 2; ++dir)
                flux[(2 * f + dir) * Q + k] = F[f][dir];
    }
    if (ops)
        ops->kernel += 2 * kFields * Q;
    for (int comp = 0; comp < 2 * kFields; ++comp)
        volume_kernel_.moments(n_ - 1, {flux + comp * Q, Q}, {mom + comp * Pm, Pm}, ops);

    const CellGeometry& g = cells_[c];
    const double scale = g.area * kFactorial * n_;
    for (std::size_t r = 0; r < block_; ++r)
        for (const auto& term : gradient_->terms(r)) {
            const auto& gb = g.grad_b[term.direction];
            for (int f = 0; f < kFields; ++f)
                out[f * block_ + r] += scale * (gb[0] * mom[(2 * f) * Pm + term.lower_rank] +
                                                gb[1] * mom[(2 * f + 1) * Pm + term.lower_rank]);
        }
    if (ops)
        ops->kernel += 2 * kFields * block_ * (kDim + 1);
}

void AcousticsDG::facet_moments(const AcousticState& u, std::size_t f, std::span<double> out,
                                std::vector<double>& work, OpCounts* ops) const
{
    const Facet& fc = mesh_.facets[f];
    const FacetGeometry& g = facets_[f];
    const std::size_t q = facet_kernel_.rule().size();
    const std::size_t m = n_ + 1;
    work.resize(m + 3 * kFields * q);
    double* trace = work.data();
    double* vm = trace + m;
    double* vp = vm + kFields * q;
    double* fl = vp + kFields * q;

    auto side_values = [&](int s, double* dst) {
        const auto& dofs = facet_dofs_[fc.local[s]];
        for (int fld = 0; fld < kFields; ++fld) {
            const auto coeffs = u.field(fc.cell[s], fld);
            for (int j = 0; j <= n_; ++j)
                trace[j] = coeffs[dofs[fc.flip[s] ? n_ - j : j]];
            facet_kernel_.evaluate(n_, {trace, m}, {dst + fld * q, q}, ops);
        }
    };
    side_values(0, vm);
    if (!fc.boundary()) {
        side_values(1, vp);
    } else {
        for (std::size_t k = 0; k < q; ++k) {
            FieldValues ghost;
            switch (fc.tag) {
            case BoundaryTag::wall:
                ghost = wall_ghost({vm[k], vm[q + k], vm[2 * q + k]}, g.normal);
                break;
            default:
                throw std::runtime_error("facet_term: unknown boundary tag on facet " + std::to_string(f));
            }
            for (int fld = 0; fld < kFields; ++fld)
                vp[fld * q + k] = ghost[fld];
        }
    }
    for (std::size_t k = 0; k < q; ++k) {
        const auto F = numerical_flux(opts_.flux, {vm[k], vm[q + k], vm[2 * q + k]},
                                      {vp[k], vp[q + k], vp[2 * q + k]}, g.normal);
        for (int fld = 0; fld < kFields; ++fld)
            fl[fld * q + k] = F[fld];
    }
    if (ops)
        ops->kernel += 8 * q;
    for (int fld = 0; fld < kFields; ++fld) {
        auto dst = out.subspan(fld * m, m);
        facet_kernel_.moments(n_, {fl + fld * q, q}, dst, ops);
        for (double& x : dst)
            x *= g.length;
    }
    if (ops)
        ops->scaling += kFields * m;
}

void AcousticsDG::scatter(const Facet& fc, int side, std::span<const double> moments, AcousticState& out) const
{
    const double sign = side == 0 ? -1.0 : 1.0;
    const auto& dofs = facet_dofs_[fc.local[side]];
    const bool flip = fc.flip[side];
    for (int fld = 0; fld < kFields; ++fld) {
        auto dst = out.field(fc.cell[side], fld);
        for (int j = 0; j <= n_; ++j)
            dst[dofs[flip ? n_ - j : j]] += sign * moments[fld * (n_ + 1) + j];
    }
}

void AcousticsDG::volume_term(const AcousticState& u, std::size_t c, std::span<double> out, OpCounts* ops) const
{
    if (out.size() != kFields * block_)
        throw std::invalid_argument("volume_term: output length mismatch");
    std::vector<double> work;
    cell_volume(u, c, out, work, ops);
}

void AcousticsDG::facet_term(const AcousticState& u, std::size_t f, std::span<double> out, OpCounts* ops) const
{
    if (out.size() != static_cast<std::size_t>(kFields * (n_ + 1)))
        throw std::invalid_argument("facet_term: output length mismatch");
    std::vector<double> work;
    facet_moments(u, f, out, work, ops);
}

void AcousticsDG::mass_solve(std::size_t c, std::span<double> x, OpCounts* ops) const
{
    const double inv = 1.0 / (cells_[c].area * kFactorial);
    for (int fld = 0; fld < kFields; ++fld) {
        auto xf = x.subspan(fld * block_, block_);
        for (double& v : xf)
            v *= inv;
        if (block_solver_) {
            SolveStats stats;
            block_solver_->solve_in_place(xf, ops ? &stats : nullptr);
            if (ops)
                *ops += stats.total();
        } else {
            Eigen::Map<Eigen::VectorXd> v(xf.data(), static_cast<Eigen::Index>(block_));
            dense_solver_.solveInPlace(v);
            if (ops)
                ops->base_solve += block_ * (block_ + 1);
        }
    }
    if (ops)
        ops->scaling += x.size();
}

std::vector<double> AcousticsDG::mass_apply(std::size_t c, std::span<const double> x) const
{
    auto y = reference_mass_.apply(x);
    for (double& v : y)
        v *= cells_[c].area * kFactorial;
    return y;
}

void AcousticsDG::residual(const AcousticState& u, AcousticState& out, Schedule s, OpCounts* ops) const
{
    if (u.num_cells() != mesh_.num_cells() || u.degree() != n_)
        throw std::invalid_argument("AcousticsDG: state does not match the discretization");
    if (out.num_cells() != u.num_cells() || out.degree() != n_)
        out = zero_state();
    const std::size_t nc = mesh_.num_cells(), nf = mesh_.num_facets();
    const std::size_t stride = kFields * (n_ + 1);

    if (s == Schedule::serial) {
        std::vector<double> work, fm(stride);
        for (std::size_t c = 0; c < nc; ++c)
            cell_volume(u, c, out.cell(c), work, ops);
        for (std::size_t f = 0; f < nf; ++f) {
            facet_moments(u, f, fm, work, ops);
            const Facet& fc = mesh_.facets[f];
            scatter(fc, 0, fm, out);
            if (!fc.boundary())
                scatter(fc, 1, fm, out);
        }
        return;
    }

    std::vector<double> facet_buf(nf * stride);
#pragma omp parallel if (ops == nullptr)
    {
        std::vector<double> work;
#pragma omp for schedule(static)
        for (std::size_t f = 0; f < nf; ++f)
            facet_moments(u, f, {facet_buf.data() + f * stride, stride}, work, ops);
#pragma omp for schedule(static)
        for (std::size_t c = 0; c < nc; ++c) {
            cell_volume(u, c, out.cell(c), work, ops);
            for (int v = 0; v < 3; ++v) {
                const int f = mesh_.cell_facets[c][v];
                const Facet& fc = mesh_.facets[f];
                const int side = (fc.cell[0] == static_cast<int>(c) && fc.local[0] == v) ? 0 : 1;
                scatter(fc, side, {facet_buf.data() + f * stride, stride}, out);
            }
        }
    }
}

void AcousticsDG::rhs(const AcousticState& u, AcousticState& out, Schedule s, OpCounts* ops) const
{
    residual(u, out, s, ops);
    const auto nc = static_cast<std::ptrdiff_t>(mesh_.num_cells());
    if (s == Schedule::serial) {
        for (std::ptrdiff_t c = 0; c < nc; ++c)
            mass_solve(c, out.cell(c), ops);
        return;
    }
#pragma omp parallel for schedule(static) if (ops == nullptr)
    for (std::ptrdiff_t c = 0; c < nc; ++c)
        mass_solve(c, out.cell(c), ops);
}

AcousticState AcousticsDG::project(const ExactSolution& f, double t, int quad_extra) const
{
    const StroudKernel kernel(kDim, n_, n_ + 1 + quad_extra);
    const StroudRule& rule = kernel.rule();
    const std::size_t Q = rule.size();
    std::vector<BarycentricPoint> pts;
    for (std::size_t k = 0; k < Q; ++k)
        pts.push_back(rule.point(k));

    AcousticState u = zero_state();
    std::vector<double> vals(kFields * Q);
    for (std::size_t c = 0; c < mesh_.num_cells(); ++c) {
        const CellGeometry& g = cells_[c];
        for (std::size_t k = 0; k < Q; ++k) {
            double x = 0.0, y = 0.0;
            for (int i = 0; i < 3; ++i) {
                x += pts[k][i] * g.x[i][0];
                y += pts[k][i] * g.x[i][1];
            }
            const FieldValues q = f(x, y, t);
            for (int fld = 0; fld < kFields; ++fld)
                vals[fld * Q + k] = q[fld];
        }
        for (int fld = 0; fld < kFields; ++fld) {
            auto dst = u.field(c, fld);
            kernel.moments(n_, {vals.data() + fld * Q, Q}, dst);
            for (double& v : dst)
                v *= g.area * kFactorial;
        }
        mass_solve(c, u.cell(c));
    }
    return u;
}

FieldValues AcousticsDG::l2_error(const AcousticState& u, const ExactSolution& f, double t, int quad_extra) const
{
    const StroudKernel kernel(kDim, n_, n_ + 1 + quad_extra);
    const StroudRule& rule = kernel.rule();
    const std::size_t Q = rule.size();
    std::vector<BarycentricPoint> pts;
    for (std::size_t k = 0; k < Q; ++k)
        pts.push_back(rule.point(k));

    FieldValues sum{0.0, 0.0, 0.0};
    std::vector<double> vals(Q);
    for (std::size_t c = 0; c < mesh_.num_cells(); ++c) {
        const CellGeometry& g = cells_[c];
        std::vector<FieldValues> exact(Q);
        for (std::size_t k = 0; k < Q; ++k) {
            double x = 0.0, y = 0.0;
            for (int i = 0; i < 3; ++i) {
                x += pts[k][i] * g.x[i][0];
                y += pts[k][i] * g.x[i][1];
            }
            exact[k] = f(x, y, t);
        }
        for (int fld = 0; fld < kFields; ++fld) {
            kernel.evaluate(n_, u.field(c, fld), vals);
            double s = 0.0;
            for (std::size_t k = 0; k < Q; ++k) {
                const double e = vals[k] - exact[k][fld];
                s += rule.weights()[k] * e * e;
            }
            sum[fld] += s * g.area * kFactorial;
        }
    }
    for (double& s : sum)
        s = std::sqrt(s);
    return sum;
}

double AcousticsDG::energy(const AcousticState& u) const
{
    double e = 0.0;
    for (std::size_t c = 0; c < mesh_.num_cells(); ++c)
        for (int fld = 0; fld < kFields; ++fld) {
            const auto x = u.field(c, fld);
            const auto mx = mass_apply(c, x);
            for (std::size_t r = 0; r < block_; ++r)
                e += x[r] * mx[r];
        }
    return 0.5 * e;
}

FieldValues AcousticsDG::integral(const AcousticState& u) const
{
    // each B^n_alpha integrates to |T| d! n!/(n+d)!
    const double basis = kFactorial / ((n_ + 1.0) * (n_ + 2.0));
    FieldValues s{0.0, 0.0, 0.0};
    for (std::size_t c = 0; c < mesh_.num_cells(); ++c)
        for (int fld = 0; fld < kFields; ++fld) {
            double t = 0.0;
            for (double v : u.field(c, fld))
                t += v;
            s[fld] += t * basis * cells_[c].area;
        }
    return s;
}

void step_euler(std::vector<double>& u, double dt, const RhsCallback& L)
{
    std::vector<double> k(u.size());
    L(u, k);
    for (std::size_t i = 0; i < u.size(); ++i)
        u[i] += dt * k[i];
}

void step_ssprk3(std::vector<double>& u, double dt, const RhsCallback& L)
{
    const std::size_t N = u.size();
    std::vector<double> k(N), u1(N), u2(N);
    L(u, k);
    for (std::size_t i = 0; i < N; ++i)
        u1[i] = u[i] + dt * k[i];
    L(u1, k);
    for (std::size_t i = 0; i < N; ++i)
        u2[i] = 0.75 * u[i] + 0.25 * (u1[i] + dt * k[i]);
    L(u2, k);
    for (std::size_t i = 0; i < N; ++i)
        u[i] = u[i] / 3.0 + 2.0 / 3.0 * (u2[i] + dt * k[i]);
}

void step_euler(const AcousticsDG& dg, AcousticState& u, double dt)
{
    AcousticState k = dg.zero_state();
    dg.rhs(u, k);
    auto& x = u.data();
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] += dt * k.data()[i];
}

void step_ssprk3(const AcousticsDG& dg, AcousticState& u, double dt)
{
    AcousticState k = dg.zero_state(), u1 = dg.zero_state(), u2 = dg.zero_state();
    const auto& x = u.data();
    const std::size_t N = x.size();
    dg.rhs(u, k);
    for (std::size_t i = 0; i < N; ++i)
        u1.data()[i] = x[i] + dt * k.data()[i];
    dg.rhs(u1, k);
    for (std::size_t i = 0; i < N; ++i)
        u2.data()[i] = 0.75 * x[i] + 0.25 * (u1.data()[i] + dt * k.data()[i]);
    dg.rhs(u2, k);
    for (std::size_t i = 0; i < N; ++i)
        u.data()[i] = x[i] / 3.0 + 2.0 / 3.0 * (u2.data()[i] + dt * k.data()[i]);
}

double stable_dt(const SimplexMesh& mesh, int n, double cfl)
{
    return cfl * min_edge_length(mesh) / (2 * n + 1);
}

FieldValues plane_wave(double x, double, double t)
{
    const double p = std::sin(2.0 * std::numbers::pi * (x - t));
    return {p, p, 0.0};
}

FieldValues standing_wave(double x, double y, double t)
{
    constexpr double pi = std::numbers::pi;
    const double w = pi * std::numbers::sqrt2;
    const double cx = std::cos(pi * x), cy = std::cos(pi * y);
    const double sx = std::sin(pi * x), sy = std::sin(pi * y);
    return {cx * cy * std::cos(w * t), pi / w * sx * cy * std::sin(w * t), pi / w * cx * sy * std::sin(w * t)};
}

void write_state(std::ostream& out, const AcousticState& u)
{
    const auto old = out.precision(17);
    out << "degree," << u.degree() << ",cells," << u.num_cells() << '\n';
    out << "cell,field,index,value\n";
    for (std::size_t c = 0; c < u.num_cells(); ++c)
        for (int f = 0; f < kFields; ++f) {
            const auto x = u.field(c, f);
            for (std::size_t r = 0; r < x.size(); ++r)
                out << c << ',' << f << ',' << r << ',' << x[r] << '\n';
        }
    out.precision(old);
}

AcousticState read_state(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("read_state: empty input");
    int n = 0;
    std::size_t cells = 0;
    {
        std::stringstream ss(line);
        std::string tag, val;
        std::getline(ss, tag, ',');
        std::getline(ss, val, ',');
        if (tag != "degree")
            throw std::runtime_error("read_state: missing degree row");
        n = std::stoi(val);
        std::getline(ss, tag, ',');
        std::getline(ss, val, ',');
        if (tag != "cells")
            throw std::runtime_error("read_state: missing cell count");
        cells = std::stoul(val);
    }
    if (!std::getline(in, line) || line != "cell,field,index,value")
        throw std::runtime_error("read_state: missing column header");
    AcousticState u(cells, n);
    for (auto& x : u.data()) {
        if (!std::getline(in, line))
            throw std::runtime_error("read_state: truncated data");
        x = std::stod(line.substr(line.rfind(',') + 1));
    }
    return u;
}

} // namespace bbfem
