#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "bbfem/multiindex.hpp"
#include "bbfem/op_counts.hpp"

namespace bbfem {

/// Dense LL^T factorization without pivoting. A solve is a forward and a
/// backward triangular sweep; each row costs its off-diagonal multiply-adds
/// plus one division, so an m x m solve tallies m(m+1) base_solve ops.
class DenseCholesky {
public:
    explicit DenseCholesky(const Eigen::MatrixXd& A);

    std::size_t size() const { return static_cast<std::size_t>(L_.rows()); }
    void solve_in_place(std::span<double> x, OpCounts* ops = nullptr) const;

private:
    Eigen::MatrixXd L_;
};

/// LDL^T of the (n+1) x (n+1) coefficient matrix N^{d,n} = nu_table(d, n, n).
struct NuFactorization {
    int d = 0;
    int n = 0;
    Eigen::MatrixXd L; // unit lower triangular
    Eigen::VectorXd D; // positive pivots
};

/// Throws std::runtime_error on a nonpositive pivot.
NuFactorization factor_nu(int d, int n);

/// Blockwise Gaussian elimination on M^{d,n}: scalar Schur updates on N,
/// transposed elevations below the diagonal, dense (d-1)-dimensional block
/// solves, forward elevations above it. Refactors N on every solve.
class BlockGaussSolver {
public:
    BlockGaussSolver(int d, int n);

    void solve_in_place(std::span<double> y, OpCounts* ops = nullptr) const;

private:
    int d_;
    int n_;
    Eigen::MatrixXd N_;
    std::vector<DenseCholesky> blocks_; // M^{d-1, n-a}
    std::vector<std::size_t> offsets_;
};

std::vector<double> block_gauss_solve(int d, int n, std::span<const double> y);

/// Operation tallies for the three sweeps of BlockLDLt::solve.
struct SolveStats {
    OpCounts lower;    // (L^{d,n})^{-1}
    OpCounts diagonal; // (Delta^{d,n})^{-1}
    OpCounts upper;    // (L^{d,n})^{-T}

    OpCounts total() const
    {
        OpCounts t = lower;
        t += diagonal;
        t += upper;
        return t;
    }
};

/// Block factorization M^{d,n} = L Delta L^T. L has identity diagonal blocks
/// and block (i, j), i > j, equal to l_ij (E^{d-1,n-i,n-j})^T; Delta has
/// blocks d_ii M^{d-1,n-i}. The Delta blocks are factored densely when
/// d - 1 == base_dim and by another BlockLDLt otherwise.
class BlockLDLt {
public:
    /// 0 <= base_dim < d; base_dim < 0 selects d - 1 (one block level).
    BlockLDLt(int d, int n, int base_dim = -1);

    int dim() const { return d_; }
    int degree() const { return n_; }
    int base_dim() const { return base_dim_; }
    std::size_t size() const { return size_; }
    const NuFactorization& nu() const { return nu_; }

    void solve(std::span<const double> y, std::span<double> x, SolveStats* stats = nullptr) const;
    std::vector<double> solve(std::span<const double> y, SolveStats* stats = nullptr) const;
    void solve_in_place(std::span<double> x, SolveStats* stats = nullptr) const;

    // The individual factors, for checking the factorization.
    std::vector<double> apply_lower(std::span<const double> x) const;
    std::vector<double> apply_lower_inverse(std::span<const double> x) const;
    std::vector<double> apply_upper(std::span<const double> x) const;
    std::vector<double> apply_delta(std::span<const double> x) const;

private:
    using BlockSolver = std::variant<DenseCholesky, std::shared_ptr<const BlockLDLt>>;

    std::span<double> block(std::span<double> x, int a) const
    {
        return x.subspan(offsets_[a], offsets_[a + 1] - offsets_[a]);
    }
    void lower_sweep(std::span<double> x, OpCounts* ops) const;
    void diagonal_solve(std::span<double> x, OpCounts* ops) const;
    void upper_sweep(std::span<double> x, OpCounts* ops) const;

    int d_;
    int n_;
    int base_dim_;
    std::size_t size_;
    NuFactorization nu_;
    std::vector<std::size_t> offsets_;          // block a = [offsets_[a], offsets_[a+1])
    std::vector<const IndexSpace*> spaces_;     // (d-1, k) for k = 0..n
    std::vector<BlockSolver> blocks_;           // M^{d-1, n-a}
};

BlockLDLt factor(int d, int n, int base_dim = -1);

/// Multiply-adds spent in elevations during the (L^{d,n})^{-1} sweep of one
/// solve.
std::uint64_t elevation_op_count(int d, int n);

} // namespace bbfem
