#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bbfem/bernstein.hpp"
#include "bbfem/multiindex.hpp"
#include "bbfem/op_counts.hpp"
#include "bbfem/rational.hpp"
#include "bbfem/stroud.hpp"

namespace bbfem {

/// Largest matrix dimension dense assembly will produce.
inline constexpr std::size_t kMaxDenseDim = 5000;

// Entries of the reference mass matrix M^{d,m,n}: the integral over the
// unit right d-simplex of B^m_alpha B^n_beta,
//   m! n! (alpha+beta)! / ((m+n+d)! alpha! beta!).
// Physical cells scale this by |T| d!.

Rational mass_entry_exact(int d, int m, int n, const MultiIndex& alpha, const MultiIndex& beta);
/// Double-precision entry, computed from exact integers and rounded once.
double mass_entry(int d, int m, int n, const MultiIndex& alpha, const MultiIndex& beta);

/// Dense M^{d,m,n}; rows follow the degree-m canonical ordering, columns the
/// degree-n one. Throws std::length_error beyond kMaxDenseDim.
Eigen::MatrixXd mass_dense(int d, int m, int n);
RationalMatrix mass_dense_exact(int d, int m, int n);

/// Common row sum of M^{d,n}, n!/(n+d)!, which is also its largest eigenvalue.
Rational mass_row_sum_exact(int d, int n);

/// Scalars nu_{a,b} with block (a, b) of M^{d,m,n} equal to
/// nu_{a,b} M^{d-1,m-a,n-b}, where a and b are the first entries of the row
/// and column multiindices.
class NuTable {
public:
    NuTable(int d, int m, int n);

    int dim() const { return d_; }
    int rows() const { return m_ + 1; }
    int cols() const { return n_ + 1; }
    const Rational& exact(int a, int b) const { return values_[a * (n_ + 1) + b]; }
    double operator()(int a, int b) const { return to_double(exact(a, b)); }
    Eigen::MatrixXd to_matrix() const;

private:
    int d_;
    int m_;
    int n_;
    std::vector<Rational> values_;
};

/// Builds the table and checks one entry of every block against
/// mass_entry_exact; throws std::logic_error on mismatch.
NuTable nu_table(int d, int m, int n);

/// i-th distinct eigenvalue of M^{d,n}: (n!)^2 / ((n+i+d)! (n-i)!).
Rational mass_eigenvalue_exact(int d, int n, int i);
/// Multiplicity of the i-th eigenvalue, C(d+i-1, d-1).
std::uint64_t mass_eigenvalue_multiplicity(int d, int i);
/// 2-norm condition number (2n+d)! / ((n+d)! n!).
Rational mass_condition_exact(int d, int n);

struct Spectrum {
    int d = 0;
    int n = 0;
    std::vector<Rational> eigenvalues; // strictly decreasing
    std::vector<std::uint64_t> multiplicities;
};

Spectrum mass_spectrum(int d, int n);

/// Matrix-free M^{d,n}: Stroud evaluation followed by Stroud moments,
/// O(n^{d+1}) per application.
class MassOperator {
public:
    /// q <= 0 selects the default n + 1 points per direction.
    MassOperator(int d, int n, int q = 0);

    int dim() const { return d_; }
    int degree() const { return n_; }
    std::size_t size() const { return size_; }

    void apply(std::span<const double> x, std::span<double> y, OpCounts* ops = nullptr) const;
    std::vector<double> apply(std::span<const double> x) const;

private:
    int d_;
    int n_;
    std::size_t size_;
    StroudKernel kernel_;
};

std::vector<double> mass_apply_fast(const BForm& f, int q = 0);

struct CgResult {
    std::vector<double> x;
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

/// Unpreconditioned conjugate gradients on M^{d,n} x = rhs from a zero
/// initial guess. Stops when ||r||_2 / ||rhs||_2 <= tol or after max_iter
/// iterations; `converged` reports which.
CgResult cg_solve(const MassOperator& mass, std::span<const double> rhs, double tol, int max_iter);

} // namespace bbfem
