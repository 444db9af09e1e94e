#include "bbfem/mass.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bbfem {

namespace {

using u128 = unsigned __int128;

constexpr int kPascalRows = 2 * kMaxExactDegree + 1;

// C(k, j) for k < kPascalRows; every entry fits in 64 bits.
const std::vector<std::uint64_t>& pascal()
{
    static const std::vector<std::uint64_t> table = [] {
        std::vector<std::uint64_t> t(kPascalRows * kPascalRows, 0);
        for (int k = 0; k < kPascalRows; ++k) {
            t[k * kPascalRows] = 1;
            for (int j = 1; j <= k; ++j)
                t[k * kPascalRows + j] = t[(k - 1) * kPascalRows + j - 1] + t[(k - 1) * kPascalRows + j];
        }
        return t;
    }();
    return table;
}

std::uint64_t pascal_binom(int k, int j) { return pascal()[k * kPascalRows + j]; }

void check_orders(int d, int m, int n, const MultiIndex& alpha, const MultiIndex& beta)
{
    if (alpha.dim() != d || beta.dim() != d)
        throw std::invalid_argument("mass entry: multiindex dimension mismatch");
    if (alpha.order() != m || beta.order() != n)
        throw std::invalid_argument("mass entry: multiindex order mismatch");
}

double entry_unchecked(int d, int m, int n, std::span<const int> alpha, std::span<const int> beta)
{
    // C(alpha+beta, alpha) / (C(m+n, m) (m+n+1)...(m+n+d))
    std::uint64_t num = 1;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        num *= pascal_binom(alpha[i] + beta[i], alpha[i]);
    u128 den = pascal_binom(m + n, m);
    for (int j = 1; j <= d; ++j)
        den *= static_cast<u128>(m + n + j);
    return static_cast<double>(num) / static_cast<double>(den);
}

void check_dense_size(std::size_t rows, std::size_t cols)
{
    if (rows > kMaxDenseDim || cols > kMaxDenseDim)
        throw std::length_error("dense mass matrix of size " + std::to_string(rows) + "x" +
                                std::to_string(cols) + " exceeds cap");
}

} // namespace

Rational mass_entry_exact(int d, int m, int n, const MultiIndex& alpha, const MultiIndex& beta)
{
    check_orders(d, m, n, alpha, beta);
    const BigInt num = factorial_exact(m) * factorial_exact(n) * factorial_exact(alpha + beta);
    const BigInt den = factorial_exact(m + n + d) * factorial_exact(alpha) * factorial_exact(beta);
    return Rational(num, den);
}

double mass_entry(int d, int m, int n, const MultiIndex& alpha, const MultiIndex& beta)
{
    check_orders(d, m, n, alpha, beta);
    if (m > kMaxExactDegree || n > kMaxExactDegree)
        return to_double(mass_entry_exact(d, m, n, alpha, beta));
    return entry_unchecked(d, m, n, alpha.entries(), beta.entries());
}

Eigen::MatrixXd mass_dense(int d, int m, int n)
{
    const IndexSpace& rows = index_space(d, m);
    const IndexSpace& cols = index_space(d, n);
    check_dense_size(rows.size(), cols.size());
    Eigen::MatrixXd M(rows.size(), cols.size());
    const bool fast = m <= kMaxExactDegree && n <= kMaxExactDegree;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            M(i, j) = fast ? entry_unchecked(d, m, n, rows[i].entries(), cols[j].entries())
                           : to_double(mass_entry_exact(d, m, n, rows[i], cols[j]));
    return M;
}

RationalMatrix mass_dense_exact(int d, int m, int n)
{
    const IndexSpace& rows = index_space(d, m);
    const IndexSpace& cols = index_space(d, n);
    check_dense_size(rows.size(), cols.size());
    RationalMatrix M(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            M(i, j) = mass_entry_exact(d, m, n, rows[i], cols[j]);
    return M;
}

Rational mass_row_sum_exact(int d, int n)
{
    return Rational(factorial_exact(n), factorial_exact(n + d));
}

NuTable::NuTable(int d, int m, int n) : d_(d), m_(m), n_(n), values_((m + 1) * (n + 1))
{
    if (d < 1)
        throw std::invalid_argument("NuTable: need d >= 1");
    for (int a = 0; a <= m; ++a)
        for (int b = 0; b <= n; ++b)
            values_[a * (n + 1) + b] =
                Rational(binomial_exact(m, a) * binomial_exact(n, b),
                         binomial_exact(m + n + d - 1, a + b) * BigInt(m + n + d));
}

Eigen::MatrixXd NuTable::to_matrix() const
{
    Eigen::MatrixXd N(rows(), cols());
    for (int a = 0; a < rows(); ++a)
        for (int b = 0; b < cols(); ++b)
            N(a, b) = (*this)(a, b);
    return N;
}

NuTable nu_table(int d, int m, int n)
{
    NuTable table(d, m, n);
    // Compare the first entry of each block: alpha = (a, 0, ..., 0, m-a),
    // beta = (b, 0, ..., 0, n-b).
    for (int a = 0; a <= m; ++a)
        for (int b = 0; b <= n; ++b) {
            std::vector<int> al(d + 1, 0), be(d + 1, 0), al_tail(d, 0), be_tail(d, 0);
            al[0] = a;
            al[d] += m - a;
            be[0] = b;
            be[d] += n - b;
            al_tail[d - 1] = m - a;
            be_tail[d - 1] = n - b;
            const Rational full = mass_entry_exact(d, m, n, MultiIndex(al), MultiIndex(be));
            const Rational lower = mass_entry_exact(d - 1, m - a, n - b, MultiIndex(al_tail),
                                                    MultiIndex(be_tail));
            if (table.exact(a, b) * lower != full)
                throw std::logic_error("nu_table: block scaling disagrees with mass entries at (" +
                                       std::to_string(a) + ", " + std::to_string(b) + ")");
        }
    return table;
}

Rational mass_eigenvalue_exact(int d, int n, int i)
{
    if (i < 0 || i > n)
        throw std::out_of_range("mass_eigenvalue_exact: need 0 <= i <= n");
    const BigInt nf = factorial_exact(n);
    return Rational(nf * nf, factorial_exact(n + i + d) * factorial_exact(n - i));
}

std::uint64_t mass_eigenvalue_multiplicity(int d, int i)
{
    if (d == 0)
        return i == 0 ? 1 : 0;
    return binomial(d + i - 1, d - 1);
}

Rational mass_condition_exact(int d, int n)
{
    return Rational(factorial_exact(2 * n + d), factorial_exact(n + d) * factorial_exact(n));
}

Spectrum mass_spectrum(int d, int n)
{
    Spectrum s{d, n, {}, {}};
    for (int i = 0; i <= n; ++i) {
        s.eigenvalues.push_back(mass_eigenvalue_exact(d, n, i));
        s.multiplicities.push_back(mass_eigenvalue_multiplicity(d, i));
    }
    return s;
}

MassOperator::MassOperator(int d, int n, int q)
    : d_(d), n_(n), size_(polynomial_dim(d, n)), kernel_(d, n, q > 0 ? q : n + 1)
{
}

void MassOperator::apply(std::span<const double> x, std::span<double> y, OpCounts* ops) const
{
    if (x.size() != size_ || y.size() != size_)
        throw std::invalid_argument("MassOperator::apply: length mismatch");
    std::vector<double> values(kernel_.rule().size());
    kernel_.evaluate(n_, x, values, ops);
    kernel_.moments(n_, values, y, ops);
}

std::vector<double> MassOperator::apply(std::span<const double> x) const
{
    std::vector<double> y(size_);
    apply(x, y);
    return y;
}

std::vector<double> mass_apply_fast(const BForm& f, int q)
{
    return MassOperator(f.dim(), f.degree(), q).apply(f.coeffs());
}

CgResult cg_solve(const MassOperator& mass, std::span<const double> rhs, double tol, int max_iter)
{
    const std::size_t size = mass.size();
    if (rhs.size() != size)
        throw std::invalid_argument("cg_solve: length mismatch");
    auto dot = [](std::span<const double> a, std::span<const double> b) {
        return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
    };

    CgResult res;
    res.x.assign(size, 0.0);
    std::vector<double> r(rhs.begin(), rhs.end());
    std::vector<double> p = r;
    std::vector<double> Ap(size);
    const double bnorm = std::sqrt(dot(rhs, rhs));
    if (bnorm == 0.0) {
        res.converged = true;
        return res;
    }
    double rr = dot(r, r);
    res.relative_residual = std::sqrt(rr) / bnorm;
    while (res.iterations < max_iter && res.relative_residual > tol) {
        mass.apply(p, Ap);
        const double alpha = rr / dot(p, Ap);
        for (std::size_t i = 0; i < size; ++i) {
            res.x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        const double rr_new = dot(r, r);
        const double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t i = 0; i < size; ++i)
            p[i] = r[i] + beta * p[i];
        ++res.iterations;
        res.relative_residual = std::sqrt(rr) / bnorm;
    }
    res.converged = res.relative_residual <= tol;
    return res;
}

} // namespace bbfem
