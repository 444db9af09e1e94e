#include "bbfem/stroud.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bbfem {

namespace {

constexpr double kNewtonTolerance = 1e-15;
constexpr int kNewtonMaxIterations = 100;

struct JacobiValue {
    double p;
    double dp;
};

// P_q^{(a,b)}(x) by the three-term recurrence.
double jacobi_p(int q, double a, double b, double x)
{
    if (q == 0)
        return 1.0;
    double p0 = 1.0;
    double p1 = 0.5 * ((a + b + 2.0) * x + a - b);
    for (int k = 2; k <= q; ++k) {
        const double s = 2.0 * k + a + b;
        const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
        const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        const double p2 = (c2 * p1 - c3 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

JacobiValue jacobi_with_derivative(int q, double a, double b, double x)
{
    const double p = jacobi_p(q, a, b, x);
    const double dp = q == 0 ? 0.0 : 0.5 * (q + a + b + 1.0) * jacobi_p(q - 1, a + 1.0, b + 1.0, x);
    return {p, dp};
}

std::size_t ipow(std::size_t base, int e)
{
    std::size_t r = 1;
    for (int i = 0; i < e; ++i)
        r *= base;
    return r;
}

} // namespace

GaussJacobiRule gauss_jacobi(int q, int a)
{
    if (q < 1 || a < 0)
        throw std::invalid_argument("gauss_jacobi: need q >= 1 and a >= 0");
    GaussJacobiRule rule;
    rule.q = q;
    rule.exponent = a;
    rule.nodes.resize(q);
    rule.weights.resize(q);

    // Roots of P_q^{(a,0)} on [-1, 1], Newton with deflation from Chebyshev
    // guesses; t = (1 + x)/2 carries the weight (1 - t)^a.
    std::vector<double> x(q);
    for (int k = 0; k < q; ++k) {
        double r = -std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * q));
        if (k > 0)
            r = 0.5 * (r + x[k - 1]);
        for (int it = 0; it < kNewtonMaxIterations; ++it) {
            const auto [p, dp] = jacobi_with_derivative(q, a, 0.0, r);
            double s = 0.0;
            for (int j = 0; j < k; ++j)
                s += 1.0 / (r - x[j]);
            const double delta = -p / (dp - s * p);
            r += delta;
            if (std::abs(delta) < kNewtonTolerance)
                break;
        }
        x[k] = r;
    }
    for (int k = 0; k < q; ++k) {
        const double dp = jacobi_with_derivative(q, a, 0.0, x[k]).dp;
        rule.nodes[k] = 0.5 * (1.0 + x[k]);
        rule.weights[k] = 1.0 / ((1.0 - x[k] * x[k]) * dp * dp);
    }
    return rule;
}

BarycentricPoint duffy(std::span<const double> t)
{
    const int d = static_cast<int>(t.size());
    std::vector<double> lambda(d + 1);
    double used = 0.0;
    for (int i = 0; i < d; ++i) {
        lambda[i] = t[i] * (1.0 - used);
        used += lambda[i];
    }
    lambda[d] = 1.0 - used;
    return BarycentricPoint(std::move(lambda));
}

StroudRule::StroudRule(int d, int q) : d_(d), q_(q)
{
    if (d < 0 || q < 1)
        throw std::invalid_argument("StroudRule: need d >= 0 and q >= 1");
    for (int i = 0; i < d; ++i)
        directions_.push_back(gauss_jacobi(q, d - 1 - i));
    weights_.assign(ipow(q, d), 1.0);
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        std::size_t rem = k;
        for (int i = d - 1; i >= 0; --i) {
            weights_[k] *= directions_[i].weights[rem % q];
            rem /= q;
        }
    }
}

std::vector<double> StroudRule::cube_point(std::size_t k) const
{
    std::vector<double> t(d_);
    for (int i = d_ - 1; i >= 0; --i) {
        t[i] = directions_[i].nodes[k % q_];
        k /= q_;
    }
    return t;
}

StroudRule stroud_rule(int d, int q) { return StroudRule(d, q); }

StroudRule facet_rule(int d, int q)
{
    if (d < 1)
        throw std::invalid_argument("facet_rule: need d >= 1");
    return StroudRule(d - 1, q);
}

StroudKernel::StroudKernel(int d, int max_degree, int q)
    : rule_(d, q), max_degree_(max_degree), q_(q)
{
    if (max_degree < 0)
        throw std::invalid_argument("StroudKernel: negative degree");
    const std::size_t rows = static_cast<std::size_t>(max_degree + 1) * (max_degree + 2) / 2;
    tables_.resize(d);
    for (int level = 0; level < d; ++level) {
        auto& tab = tables_[level];
        tab.assign(rows * q, 0.0);
        const auto& nodes = rule_.direction(level).nodes;
        for (int k = 0; k < q; ++k) {
            const double t = nodes[k];
            tab[k] = 1.0;
            // B^m_a = t B^{m-1}_{a-1} + (1 - t) B^{m-1}_a
            for (int m = 1; m <= max_degree; ++m) {
                const std::size_t prev = static_cast<std::size_t>(m - 1) * m / 2;
                const std::size_t cur = static_cast<std::size_t>(m) * (m + 1) / 2;
                for (int a = 0; a <= m; ++a) {
                    const double lo = a > 0 ? tab[(prev + a - 1) * q + k] : 0.0;
                    const double hi = a < m ? tab[(prev + a) * q + k] : 0.0;
                    tab[(cur + a) * q + k] = t * lo + (1.0 - t) * hi;
                }
            }
        }
    }
}

void StroudKernel::eval_level(int level, int n, const double* c, double* out,
                              std::vector<std::vector<double>>& scratch, OpCounts* ops) const
{
    const int dd = dim() - level;
    if (dd == 0) {
        out[0] = c[0];
        return;
    }
    const std::size_t block = ipow(q_, dd - 1);
    if (dd == 1) {
        for (int k = 0; k < q_; ++k)
            out[k] = 0.0;
        for (int a = 0; a <= n; ++a) {
            const double* row = table_row(level, n, a);
            const double ca = c[a];
            for (int k = 0; k < q_; ++k)
                out[k] += row[k] * ca;
        }
        if (ops)
            ops->kernel += static_cast<std::uint64_t>(n + 1) * q_;
        return;
    }
    double* buf = scratch[level].data();
    std::size_t offset = 0;
    for (int a = 0; a <= n; ++a) {
        eval_level(level + 1, n - a, c + offset, buf + a * block, scratch, ops);
        offset += polynomial_dim(dd - 1, n - a);
    }
    for (std::size_t i = 0; i < q_ * block; ++i)
        out[i] = 0.0;
    for (int a = 0; a <= n; ++a) {
        const double* row = table_row(level, n, a);
        const double* src = buf + a * block;
        for (int k = 0; k < q_; ++k) {
            const double w = row[k];
            double* dst = out + k * block;
            for (std::size_t r = 0; r < block; ++r)
                dst[r] += w * src[r];
        }
    }
    if (ops)
        ops->kernel += static_cast<std::uint64_t>(n + 1) * q_ * block;
}

void StroudKernel::transpose_level(int level, int n, const double* g, double* mu,
                                   std::vector<std::vector<double>>& scratch, OpCounts* ops) const
{
    const int dd = dim() - level;
    if (dd == 0) {
        mu[0] = g[0];
        return;
    }
    const std::size_t block = ipow(q_, dd - 1);
    if (dd == 1) {
        for (int a = 0; a <= n; ++a) {
            const double* row = table_row(level, n, a);
            double acc = 0.0;
            for (int k = 0; k < q_; ++k)
                acc += row[k] * g[k];
            mu[a] = acc;
        }
        if (ops)
            ops->kernel += static_cast<std::uint64_t>(n + 1) * q_;
        return;
    }
    // Lower levels reuse scratch[level + 1 ...], so this level's buffer
    // stays intact across the recursive calls below.
    double* buf = scratch[level].data();
    for (int a = 0; a <= n; ++a) {
        const double* row = table_row(level, n, a);
        double* dst = buf + a * block;
        for (std::size_t r = 0; r < block; ++r)
            dst[r] = 0.0;
        for (int k = 0; k < q_; ++k) {
            const double w = row[k];
            const double* src = g + k * block;
            for (std::size_t r = 0; r < block; ++r)
                dst[r] += w * src[r];
        }
    }
    if (ops)
        ops->kernel += static_cast<std::uint64_t>(n + 1) * q_ * block;
    std::size_t offset = 0;
    for (int a = 0; a <= n; ++a) {
        transpose_level(level + 1, n - a, buf + a * block, mu + offset, scratch, ops);
        offset += polynomial_dim(dd - 1, n - a);
    }
}

namespace {

std::vector<std::vector<double>> make_scratch(int d, int n, int q)
{
    std::vector<std::vector<double>> scratch(d);
    for (int level = 0; level + 1 < d; ++level)
        scratch[level].resize(static_cast<std::size_t>(n + 1) * ipow(q, d - level - 1));
    return scratch;
}

void check_shapes(const StroudKernel& k, int n, std::size_t ncoeffs, std::size_t nvalues)
{
    if (n < 0 || n > k.max_degree())
        throw std::invalid_argument("StroudKernel: degree " + std::to_string(n) +
                                    " outside tabulated range");
    if (ncoeffs != polynomial_dim(k.dim(), n))
        throw std::invalid_argument("StroudKernel: coefficient length mismatch");
    if (nvalues != k.rule().size())
        throw std::invalid_argument("StroudKernel: value length mismatch");
}

} // namespace

void StroudKernel::evaluate(int n, std::span<const double> coeffs, std::span<double> values,
                            OpCounts* ops) const
{
    check_shapes(*this, n, coeffs.size(), values.size());
    auto scratch = make_scratch(dim(), n, q_);
    eval_level(0, n, coeffs.data(), values.data(), scratch, ops);
}

void StroudKernel::evaluate_transpose(int n, std::span<const double> values, std::span<double> out,
                                      OpCounts* ops) const
{
    check_shapes(*this, n, out.size(), values.size());
    auto scratch = make_scratch(dim(), n, q_);
    transpose_level(0, n, values.data(), out.data(), scratch, ops);
}

void StroudKernel::moments(int n, std::span<const double> values, std::span<double> moments,
                           OpCounts* ops) const
{
    check_shapes(*this, n, moments.size(), values.size());
    const auto w = rule_.weights();
    std::vector<double> weighted(values.size());
    for (std::size_t k = 0; k < values.size(); ++k)
        weighted[k] = w[k] * values[k];
    if (ops)
        ops->kernel += values.size();
    auto scratch = make_scratch(dim(), n, q_);
    transpose_level(0, n, weighted.data(), moments.data(), scratch, ops);
}

StroudValues eval_at_stroud(const BForm& f, const StroudRule& r)
{
    if (f.dim() != r.dim())
        throw std::invalid_argument("eval_at_stroud: dimension mismatch");
    StroudKernel kernel(r.dim(), f.degree(), r.points_per_direction());
    StroudValues out{r.dim(), r.points_per_direction(), std::vector<double>(r.size())};
    kernel.evaluate(f.degree(), f.coeffs(), out.values);
    return out;
}

std::vector<double> moments_from_values(const StroudValues& g, const StroudRule& r, int n)
{
    if (g.d != r.dim() || g.q != r.points_per_direction() || g.values.size() != r.size())
        throw std::invalid_argument("moments_from_values: grid shape mismatch");
    StroudKernel kernel(r.dim(), n, r.points_per_direction());
    std::vector<double> mu(polynomial_dim(r.dim(), n));
    kernel.moments(n, g.values, mu);
    return mu;
}

} // namespace bbfem
