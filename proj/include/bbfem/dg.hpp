#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bbfem/bernstein.hpp"
#include "bbfem/mass.hpp"
#include "bbfem/mass_solve.hpp"
#include "bbfem/mesh.hpp"
#include "bbfem/op_counts.hpp"
#include "bbfem/stroud.hpp"

namespace bbfem {

// First-order linear acoustics with unit wave speed,
//   p_t + div u = 0,   u_t + grad p = 0,
// written as q_t + div F(q) = 0 with q = (p, u1, u2).
inline constexpr int kFields = 3;
using FieldValues = std::array<double, kFields>;

enum class FluxType { rusanov, upwind };
enum class MassSolverType { block, dense };
enum class Schedule { serial, parallel };

/// Physical flux F(q): row f holds (F_f,x, F_f,y).
std::array<std::array<double, 2>, kFields> acoustic_flux(const FieldValues& q);

/// F-hat . n at one point; q_minus is the trace from the cell the normal
/// points out of.
FieldValues numerical_flux(FluxType type, const FieldValues& q_minus, const FieldValues& q_plus,
                           const std::array<double, 2>& normal);

/// Reflecting-wall ghost state: equal pressure, mirrored normal velocity.
FieldValues wall_ghost(const FieldValues& q, const std::array<double, 2>& normal);

/// Per-cell B-form coefficients of (p, u1, u2), cell-major:
/// data[(cell * 3 + field) * dim(2, n) + rank].
class AcousticState {
public:
    AcousticState() = default;
    AcousticState(std::size_t cells, int degree);

    int degree() const { return n_; }
    std::size_t num_cells() const { return cells_; }
    std::size_t block_size() const { return block_; }
    std::span<double> field(std::size_t cell, int f)
    {
        return {data_.data() + (cell * kFields + f) * block_, block_};
    }
    std::span<const double> field(std::size_t cell, int f) const
    {
        return {data_.data() + (cell * kFields + f) * block_, block_};
    }
    std::span<double> cell(std::size_t c) { return {data_.data() + c * kFields * block_, kFields * block_}; }
    std::span<const double> cell(std::size_t c) const
    {
        return {data_.data() + c * kFields * block_, kFields * block_};
    }
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

private:
    std::size_t cells_ = 0;
    int n_ = 0;
    std::size_t block_ = 0;
    std::vector<double> data_;
};

/// Ranks (at degree n, d = 2) of the coefficients that survive on the facet
/// opposite local vertex v, in the facet's 1-D canonical order taken along
/// the cell's local traversal.
std::vector<std::size_t> facet_dofs(int n, int v);

/// The facet B-form of one field: coefficients with alpha_v = 0, reversed
/// when `flip` is set so the result follows the facet's global orientation.
std::vector<double> trace_restrict(int n, std::span<const double> coeffs, int v, bool flip);

struct DGOptions {
    FluxType flux = FluxType::rusanov;
    MassSolverType solver = MassSolverType::block;
    int quad_extra = 0; // added to the default n + 1 points per direction
};

using ExactSolution = std::function<FieldValues(double x, double y, double t)>;

/// Semi-discrete DG operator on an affine triangulation. Holds only
/// immutable data after construction, so rhs() may be called concurrently.
class AcousticsDG {
public:
    AcousticsDG(const SimplexMesh& mesh, int n, DGOptions opts = {});

    const SimplexMesh& mesh() const { return mesh_; }
    int degree() const { return n_; }
    const DGOptions& options() const { return opts_; }
    AcousticState zero_state() const { return AcousticState(mesh_.num_cells(), n_); }
    const CellGeometry& geometry(std::size_t c) const { return cells_[c]; }

    /// (F(u_h), grad v)_T for every test function on cell c, three fields
    /// back to back.
    void volume_term(const AcousticState& u, std::size_t c, std::span<double> out, OpCounts* ops = nullptr) const;

    /// <F-hat . n, v>_gamma against the facet Bernstein polynomials, three
    /// fields of n + 1 moments in the facet's global orientation.
    void facet_term(const AcousticState& u, std::size_t f, std::span<double> out, OpCounts* ops = nullptr) const;

    /// volume - facet moments, before the mass solve.
    void residual(const AcousticState& u, AcousticState& out, Schedule s = Schedule::parallel,
                  OpCounts* ops = nullptr) const;

    /// L(u) = M^{-1}(volume - facet). The serial schedule scatters facet
    /// terms into cells as it goes; the parallel one computes facet terms
    /// into per-facet buffers and gathers them per cell in a fixed order, so
    /// its result does not depend on the thread count.
    void rhs(const AcousticState& u, AcousticState& out, Schedule s = Schedule::parallel,
             OpCounts* ops = nullptr) const;

    /// Applies the inverse of the physical mass matrix of cell c to each
    /// field block in place.
    void mass_solve(std::size_t c, std::span<double> x, OpCounts* ops = nullptr) const;
    /// Physical mass matrix of cell c times one field block.
    std::vector<double> mass_apply(std::size_t c, std::span<const double> x) const;

    /// Elementwise L2 projection of an exact solution at time t.
    AcousticState project(const ExactSolution& f, double t, int quad_extra = 3) const;

    /// Per-field L2 errors against f at time t.
    FieldValues l2_error(const AcousticState& u, const ExactSolution& f, double t, int quad_extra = 3) const;

    /// 1/2 sum over cells and fields of u^T M u.
    double energy(const AcousticState& u) const;

    /// Integral of each field over the domain.
    FieldValues integral(const AcousticState& u) const;

private:
    void cell_volume(const AcousticState& u, std::size_t c, std::span<double> out, std::vector<double>& work,
                     OpCounts* ops) const;
    void facet_moments(const AcousticState& u, std::size_t f, std::span<double> out, std::vector<double>& work,
                       OpCounts* ops) const;
    void scatter(const Facet& fc, int side, std::span<const double> moments, AcousticState& out) const;

    SimplexMesh mesh_;
    int n_;
    DGOptions opts_;
    std::size_t block_;
    std::vector<CellGeometry> cells_;
    std::vector<FacetGeometry> facets_;
    StroudKernel volume_kernel_;
    StroudKernel facet_kernel_;
    std::unique_ptr<GradientPattern> gradient_;
    std::array<std::vector<std::size_t>, 3> facet_dofs_;
    std::shared_ptr<const BlockLDLt> block_solver_;
    Eigen::LLT<Eigen::MatrixXd> dense_solver_;
    MassOperator reference_mass_;
};

/// Forward Euler and the three-stage SSP Runge-Kutta scheme on a flat
/// vector, with L evaluated by the callback.
using RhsCallback = std::function<void(const std::vector<double>& u, std::vector<double>& Lu)>;
void step_euler(std::vector<double>& u, double dt, const RhsCallback& L);
void step_ssprk3(std::vector<double>& u, double dt, const RhsCallback& L);

void step_euler(const AcousticsDG& dg, AcousticState& u, double dt);
void step_ssprk3(const AcousticsDG& dg, AcousticState& u, double dt);

/// CFL * h_min / (2n + 1).
double stable_dt(const SimplexMesh& mesh, int n, double cfl);

/// p = sin(2 pi (x - t)), u = (p, 0). Periodic on the unit square.
FieldValues plane_wave(double x, double y, double t);
/// p = cos(pi x) cos(pi y) cos(w t) with w = pi sqrt(2); satisfies the wall
/// condition on the unit square.
FieldValues standing_wave(double x, double y, double t);

// State snapshot: a header row "cell,field,index,value" preceded by a
// "degree,<n>,cells,<count>" row; one row per coefficient in storage order.
void write_state(std::ostream& out, const AcousticState& u);
AcousticState read_state(std::istream& in);

} // namespace bbfem
