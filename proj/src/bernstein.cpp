#include "bbfem/bernstein.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bbfem {

namespace {

void tally_elevation(OpCounts* ops, int d, int n, std::size_t lower_size)
{
    if (!ops)
        return;
    const auto work = static_cast<std::uint64_t>(d + 1) * lower_size;
    if (n == 1)
        ops->adds += work;
    else
        ops->elevation += work;
}

} // namespace

BForm::BForm(int d, int n) : d_(d), n_(n), coeffs_(polynomial_dim(d, n), 0.0) {}

BForm::BForm(int d, int n, std::vector<double> coeffs) : d_(d), n_(n), coeffs_(std::move(coeffs))
{
    if (coeffs_.size() != polynomial_dim(d, n))
        throw std::invalid_argument("BForm: expected " + std::to_string(polynomial_dim(d, n)) +
                                    " coefficients, got " + std::to_string(coeffs_.size()));
}

BForm BForm::constant(int d, int n, double value)
{
    return BForm(d, n, std::vector<double>(polynomial_dim(d, n), value));
}

BarycentricPoint::BarycentricPoint(std::vector<double> b) : b_(std::move(b))
{
    if (b_.empty())
        throw std::invalid_argument("BarycentricPoint: empty");
    const double sum = std::accumulate(b_.begin(), b_.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-14 * static_cast<double>(b_.size()))
        throw std::invalid_argument("BarycentricPoint: coordinates must sum to one");
}

bool BarycentricPoint::inside() const
{
    return std::all_of(b_.begin(), b_.end(), [](double x) { return x >= 0.0; });
}

double eval_decasteljau(const BForm& f, const BarycentricPoint& p)
{
    const int d = f.dim();
    if (p.dim() != d)
        throw std::invalid_argument("eval_decasteljau: dimension mismatch");
    std::vector<double> c(f.coeffs().begin(), f.coeffs().end());
    std::vector<double> next;
    for (int k = f.degree(); k >= 1; --k) {
        const IndexSpace& lower = index_space(d, k - 1);
        next.assign(lower.size(), 0.0);
        for (std::size_t r = 0; r < lower.size(); ++r) {
            double acc = 0.0;
            for (int i = 0; i <= d; ++i)
                acc += p[i] * c[lower.raise(r, i)];
            next[r] = acc;
        }
        c.swap(next);
    }
    return c[0];
}

void elevate_into(const IndexSpace& lower, std::span<const double> in, std::span<double> out,
                  OpCounts* ops)
{
    const int d = lower.dim();
    const int n = lower.degree() + 1;
    const double inv_n = 1.0 / n;
    std::fill(out.begin(), out.end(), 0.0);
    if (d == 1) {
        // rank k <-> (k, n-1-k); +e_0 -> rank k+1, +e_1 -> rank k
        for (int k = 0; k < n; ++k) {
            out[k + 1] += (k + 1) * inv_n * in[k];
            out[k] += (n - k) * inv_n * in[k];
        }
    } else {
        for (std::size_t r = 0; r < lower.size(); ++r) {
            const MultiIndex& alpha = lower[r];
            for (int i = 0; i <= d; ++i)
                out[lower.raise(r, i)] += (alpha[i] + 1) * inv_n * in[r];
        }
    }
    tally_elevation(ops, d, n, lower.size());
}

void elevate_transpose_into(const IndexSpace& lower, std::span<const double> in,
                            std::span<double> out, OpCounts* ops)
{
    const int d = lower.dim();
    const int n = lower.degree() + 1;
    const double inv_n = 1.0 / n;
    if (d == 1) {
        for (int k = 0; k < n; ++k)
            out[k] = (k + 1) * inv_n * in[k + 1] + (n - k) * inv_n * in[k];
    } else {
        for (std::size_t r = 0; r < lower.size(); ++r) {
            const MultiIndex& alpha = lower[r];
            double acc = 0.0;
            for (int i = 0; i <= d; ++i)
                acc += (alpha[i] + 1) * inv_n * in[lower.raise(r, i)];
            out[r] = acc;
        }
    }
    tally_elevation(ops, d, n, lower.size());
}

void elevate_into(int d, int n, std::span<const double> in, std::span<double> out, OpCounts* ops)
{
    if (n < 1)
        throw std::invalid_argument("elevate_into: target degree must be >= 1");
    elevate_into(index_space(d, n - 1), in, out, ops);
}

void elevate_transpose_into(int d, int n, std::span<const double> in, std::span<double> out,
                            OpCounts* ops)
{
    if (n < 1)
        throw std::invalid_argument("elevate_transpose_into: source degree must be >= 1");
    elevate_transpose_into(index_space(d, n - 1), in, out, ops);
}

BForm elevate(const BForm& f, OpCounts* ops)
{
    BForm out(f.dim(), f.degree() + 1);
    elevate_into(f.dim(), f.degree() + 1, f.coeffs(), out.coeffs(), ops);
    return out;
}

BForm elevate_to(const BForm& f, int n2)
{
    if (n2 < f.degree())
        throw std::invalid_argument("elevate_to: target degree below source degree");
    BForm g = f;
    while (g.degree() < n2)
        g = elevate(g);
    return g;
}

std::vector<double> elevate_transpose(int d, int n, std::span<const double> v, OpCounts* ops)
{
    if (n < 1)
        throw std::invalid_argument("elevate_transpose: source degree must be >= 1");
    if (v.size() != polynomial_dim(d, n))
        throw std::invalid_argument("elevate_transpose: length mismatch");
    std::vector<double> out(polynomial_dim(d, n - 1));
    elevate_transpose_into(d, n, v, out, ops);
    return out;
}

RationalMatrix ElevationMatrix::to_rational() const
{
    RationalMatrix m(polynomial_dim(d, n), polynomial_dim(d, n - 1));
    for (const auto& e : entries)
        m(e.row, e.col) += Rational(e.numer, n);
    return m;
}

ElevationMatrix elevation_matrix(int d, int n)
{
    if (n < 1)
        throw std::invalid_argument("elevation_matrix: target degree must be >= 1");
    ElevationMatrix m{d, n, {}};
    const IndexSpace& lower = index_space(d, n - 1);
    for (std::size_t r = 0; r < lower.size(); ++r)
        for (int i = 0; i <= d; ++i)
            m.entries.push_back({lower.raise(r, i), static_cast<std::uint32_t>(r), lower[r][i] + 1});
    return m;
}

GradientPattern::GradientPattern(int d, int n) : d_(d), n_(n)
{
    if (n < 1)
        throw std::invalid_argument("GradientPattern: degree must be >= 1");
    const IndexSpace& space = index_space(d, n);
    offsets_.reserve(space.size() + 1);
    offsets_.push_back(0);
    for (const MultiIndex& alpha : space.indices()) {
        for (int i = 0; i <= d; ++i)
            if (alpha[i] > 0)
                terms_.push_back({static_cast<std::uint32_t>(rank(alpha.lowered(i))), i});
        offsets_.push_back(terms_.size());
    }
}

GradientPattern gradient_pattern(int d, int n) { return GradientPattern(d, n); }

Rational product_scale(const MultiIndex& alpha, const MultiIndex& beta)
{
    const MultiIndex sum = alpha + beta;
    BigInt num = 1;
    for (std::size_t i = 0; i < sum.size(); ++i)
        num *= binomial_exact(sum[i], alpha[i]);
    return Rational(num, binomial_exact(sum.order(), alpha.order()));
}

} // namespace bbfem
