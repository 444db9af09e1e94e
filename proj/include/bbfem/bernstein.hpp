#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bbfem/multiindex.hpp"
#include "bbfem/op_counts.hpp"
#include "bbfem/rational.hpp"

namespace bbfem {

/// Coefficients of a degree-n polynomial on the d-simplex in the Bernstein
/// basis B^n_alpha = (n!/alpha!) b^alpha, stored in canonical multiindex order.
class BForm {
public:
    BForm(int d, int n);
    BForm(int d, int n, std::vector<double> coeffs);
    static BForm constant(int d, int n, double value);

    int dim() const { return d_; }
    int degree() const { return n_; }
    std::size_t size() const { return coeffs_.size(); }

    std::span<const double> coeffs() const { return coeffs_; }
    std::span<double> coeffs() { return coeffs_; }
    double operator[](std::size_t r) const { return coeffs_[r]; }
    double& operator[](std::size_t r) { return coeffs_[r]; }

private:
    int d_;
    int n_;
    std::vector<double> coeffs_;
};

/// Barycentric coordinates (b_0, ..., b_d), summing to one.
class BarycentricPoint {
public:
    explicit BarycentricPoint(std::vector<double> b);
    BarycentricPoint(std::initializer_list<double> b) : BarycentricPoint(std::vector<double>(b)) {}

    int dim() const { return static_cast<int>(b_.size()) - 1; }
    double operator[](std::size_t i) const { return b_[i]; }
    std::span<const double> coords() const { return b_; }
    bool inside() const;

private:
    std::vector<double> b_;
};

/// Evaluation by repeated degree reduction (de Casteljau).
double eval_decasteljau(const BForm& f, const BarycentricPoint& p);

/// Raw elevation kernel: `in` holds dim(d, n-1) coefficients, `out` receives
/// dim(d, n). Overwrites `out`.
void elevate_into(int d, int n, std::span<const double> in, std::span<double> out,
                  OpCounts* ops = nullptr);
/// Adjoint of elevate_into: `in` holds dim(d, n), `out` receives dim(d, n-1).
void elevate_transpose_into(int d, int n, std::span<const double> in, std::span<double> out,
                            OpCounts* ops = nullptr);
/// Same kernels with the degree n-1 index space supplied by the caller.
void elevate_into(const IndexSpace& lower, std::span<const double> in, std::span<double> out,
                  OpCounts* ops = nullptr);
void elevate_transpose_into(const IndexSpace& lower, std::span<const double> in,
                            std::span<double> out, OpCounts* ops = nullptr);

/// Re-expresses a degree n-1 polynomial at degree n.
BForm elevate(const BForm& f, OpCounts* ops = nullptr);
/// Successive elevation to degree n2 >= f.degree().
BForm elevate_to(const BForm& f, int n2);
/// Applies the transpose of the degree (n-1 -> n) elevation.
std::vector<double> elevate_transpose(int d, int n, std::span<const double> v,
                                      OpCounts* ops = nullptr);

/// One nonzero of an elevation matrix, with its exact weight.
struct ElevationEntry {
    std::uint32_t row; // rank at degree n
    std::uint32_t col; // rank at degree n-1
    int numer;         // weight = numer / n
};

/// Materialized degree (n-1 -> n) elevation. Only used to check adjointness
/// and exact matrix identities; kernels use elevate_into.
struct ElevationMatrix {
    int d;
    int n;
    std::vector<ElevationEntry> entries;

    RationalMatrix to_rational() const;
};

ElevationMatrix elevation_matrix(int d, int n);

/// Sparse form of grad B^n_alpha = n sum_i B^{n-1}_{alpha-e_i} grad b_i.
/// For each rank at degree n, lists (rank of alpha - e_i at degree n-1, i)
/// for every i with alpha_i > 0.
class GradientPattern {
public:
    struct Term {
        std::uint32_t lower_rank;
        int direction;
    };

    GradientPattern(int d, int n);

    int dim() const { return d_; }
    int degree() const { return n_; }
    std::size_t size() const { return offsets_.size() - 1; }
    std::span<const Term> terms(std::size_t r) const
    {
        return {terms_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
    }

private:
    int d_;
    int n_;
    std::vector<std::size_t> offsets_;
    std::vector<Term> terms_;
};

GradientPattern gradient_pattern(int d, int n);

/// Factor c with B^{|a|}_a B^{|b|}_b = c B^{|a|+|b|}_{a+b}.
Rational product_scale(const MultiIndex& alpha, const MultiIndex& beta);

} // namespace bbfem
