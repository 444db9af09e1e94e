#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace bbfem {

/// Largest degree for which the 64-bit combinatorics below are guaranteed
/// not to overflow (C(2n, n) must fit). Exact rational routines in
/// rational.hpp have no cap.
inline constexpr int kMaxExactDegree = 30;

/// A (d+1)-tuple of nonnegative integers indexing the barycentric monomial
/// b^alpha. The order |alpha| is the degree of the Bernstein polynomial it
/// labels.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries);
    MultiIndex(std::initializer_list<int> entries);

    /// Spatial dimension d (one less than the number of entries).
    int dim() const { return static_cast<int>(entries_.size()) - 1; }
    std::size_t size() const { return entries_.size(); }
    int order() const;

    int operator[](std::size_t i) const { return entries_[i]; }
    std::span<const int> entries() const { return entries_; }

    MultiIndex raised(int i) const;
    MultiIndex lowered(int i) const;
    /// Componentwise alpha >= beta.
    bool dominates(const MultiIndex& beta) const;

    friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

private:
    std::vector<int> entries_;
};

std::uint64_t binomial(int n, int k);

/// Number of Bernstein polynomials of degree n on the d-simplex, C(n+d, n).
std::size_t polynomial_dim(int d, int n);

/// All multiindices of order n in d+1 entries, in canonical order: alpha_0
/// ascending, ties broken recursively on (alpha_1, ..., alpha_d). Indices
/// sharing alpha_0 = a form one contiguous run of length
/// polynomial_dim(d-1, n-a).
std::vector<MultiIndex> enumerate(int d, int n);

/// Position of alpha in enumerate(alpha.dim(), alpha.order()).
std::size_t rank(const MultiIndex& alpha);
/// Inverse of rank(); throws std::out_of_range for index >= polynomial_dim(d, n).
MultiIndex unrank(int d, int n, std::size_t index);

/// n! / alpha!; requires |alpha| = n. Throws std::overflow_error if the
/// result does not fit in 64 bits.
std::uint64_t multinomial(int n, const MultiIndex& alpha);
/// prod_i C(alpha_i, beta_i); requires alpha >= beta.
std::uint64_t binom_mi(const MultiIndex& alpha, const MultiIndex& beta);

/// Offset of the run with alpha_0 = a inside the canonical ordering of
/// degree n, dimension d.
std::size_t block_offset(int d, int n, int a);

/// Immutable tables for one (d, n) index space. Obtain through
/// index_space(), which caches instances for the lifetime of the process.
class IndexSpace {
public:
    IndexSpace(int d, int n);

    int dim() const { return d_; }
    int degree() const { return n_; }
    std::size_t size() const { return indices_.size(); }
    const MultiIndex& operator[](std::size_t r) const { return indices_[r]; }
    const std::vector<MultiIndex>& indices() const { return indices_; }

    /// Rank at degree n+1 of indices()[r] + e_i.
    std::uint32_t raise(std::size_t r, int i) const { return raise_[r * (d_ + 1) + i]; }

private:
    int d_;
    int n_;
    std::vector<MultiIndex> indices_;
    std::vector<std::uint32_t> raise_;
};

const IndexSpace& index_space(int d, int n);

} // namespace bbfem
