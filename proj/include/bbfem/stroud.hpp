#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bbfem/bernstein.hpp"
#include "bbfem/op_counts.hpp"

namespace bbfem {

/// Gauss rule on [0, 1] for the weight (1 - t)^a. Exact for polynomials of
/// degree <= 2q - 1.
struct GaussJacobiRule {
    int q = 0;
    int exponent = 0;
    std::vector<double> nodes;   // ascending, in (0, 1)
    std::vector<double> weights; // positive, sum to 1/(a+1)
};

GaussJacobiRule gauss_jacobi(int q, int a);

/// Duffy transform from the unit d-cube to barycentric coordinates on the
/// d-simplex.
BarycentricPoint duffy(std::span<const double> t);

/// Collapsed-coordinate (conical) product rule on the reference d-simplex.
/// Direction i (0-based) uses a Gauss-Jacobi rule with exponent d-1-i, so the
/// composite weights integrate over the unit right simplex and sum to 1/d!.
/// Grid points are stored with t_1 slowest and t_d fastest.
class StroudRule {
public:
    StroudRule(int d, int q);

    int dim() const { return d_; }
    int points_per_direction() const { return q_; }
    std::size_t size() const { return weights_.size(); }

    const GaussJacobiRule& direction(int i) const { return directions_[i]; }
    std::span<const double> weights() const { return weights_; }

    /// Cube coordinates (t_1, ..., t_d) of grid point k.
    std::vector<double> cube_point(std::size_t k) const;
    BarycentricPoint point(std::size_t k) const { return duffy(cube_point(k)); }

private:
    int d_;
    int q_;
    std::vector<GaussJacobiRule> directions_;
    std::vector<double> weights_;
};

StroudRule stroud_rule(int d, int q);
/// Rule on a facet of the d-simplex, i.e. stroud_rule(d - 1, q).
StroudRule facet_rule(int d, int q);

/// Values tabulated on a StroudRule grid.
struct StroudValues {
    int d = 0;
    int q = 0;
    std::vector<double> values;
};

/// Sum-factored evaluation and moment kernels for all degrees up to
/// max_degree on one StroudRule. Both run in O(n^{d+1}) for q ~ n. The
/// tables are immutable after construction, so one kernel may be shared by
/// threads.
class StroudKernel {
public:
    StroudKernel(int d, int max_degree, int q);

    const StroudRule& rule() const { return rule_; }
    int dim() const { return rule_.dim(); }
    int max_degree() const { return max_degree_; }

    /// values[k] = sum_alpha coeffs[alpha] B^n_alpha(x(t_k)).
    void evaluate(int n, std::span<const double> coeffs, std::span<double> values,
                  OpCounts* ops = nullptr) const;
    /// moments[alpha] = sum_k W_k values[k] B^n_alpha(x(t_k)); the quadrature
    /// approximation of the Bernstein moments on the reference simplex.
    void moments(int n, std::span<const double> values, std::span<double> moments,
                 OpCounts* ops = nullptr) const;
    /// Transpose of evaluate (no quadrature weights applied).
    void evaluate_transpose(int n, std::span<const double> values, std::span<double> out,
                            OpCounts* ops = nullptr) const;

private:
    // B^m_a(t_k) of direction `level`: row (m(m+1)/2 + a), column k.
    const double* table_row(int level, int m, int a) const
    {
        return tables_[level].data() + (static_cast<std::size_t>(m) * (m + 1) / 2 + a) * q_;
    }
    void eval_level(int level, int n, const double* c, double* out,
                    std::vector<std::vector<double>>& scratch, OpCounts* ops) const;
    void transpose_level(int level, int n, const double* g, double* mu,
                         std::vector<std::vector<double>>& scratch, OpCounts* ops) const;

    StroudRule rule_;
    int max_degree_;
    int q_;
    std::vector<std::vector<double>> tables_;
};

StroudValues eval_at_stroud(const BForm& f, const StroudRule& r);
std::vector<double> moments_from_values(const StroudValues& g, const StroudRule& r, int n);

} // namespace bbfem
