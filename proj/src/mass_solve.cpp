#include "bbfem/mass_solve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bbfem/bernstein.hpp"
#include "bbfem/mass.hpp"

namespace bbfem {

namespace {

std::vector<std::size_t> block_offsets(int d, int n)
{
    std::vector<std::size_t> off(n + 2);
    for (int a = 0; a <= n + 1; ++a)
        off[a] = block_offset(d, n, a);
    return off;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y, OpCounts* ops)
{
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] += alpha * x[i];
    if (ops)
        ops->axpy += y.size();
}

} // namespace

DenseCholesky::DenseCholesky(const Eigen::MatrixXd& A) : L_(Eigen::MatrixXd::Zero(A.rows(), A.cols()))
{
    if (A.rows() != A.cols())
        throw std::invalid_argument("DenseCholesky: matrix must be square");
    const Eigen::Index m = A.rows();
    for (Eigen::Index j = 0; j < m; ++j) {
        double diag = A(j, j);
        for (Eigen::Index k = 0; k < j; ++k)
            diag -= L_(j, k) * L_(j, k);
        if (!(diag > 0.0))
            throw std::runtime_error("DenseCholesky: nonpositive pivot at row " + std::to_string(j));
        L_(j, j) = std::sqrt(diag);
        for (Eigen::Index i = j + 1; i < m; ++i) {
            double s = A(i, j);
            for (Eigen::Index k = 0; k < j; ++k)
                s -= L_(i, k) * L_(j, k);
            L_(i, j) = s / L_(j, j);
        }
    }
}

void DenseCholesky::solve_in_place(std::span<double> x, OpCounts* ops) const
{
    const auto m = static_cast<Eigen::Index>(x.size());
    if (m != L_.rows())
        throw std::invalid_argument("DenseCholesky::solve_in_place: length mismatch");
    for (Eigen::Index i = 0; i < m; ++i) {
        double s = x[i];
        for (Eigen::Index k = 0; k < i; ++k)
            s -= L_(i, k) * x[k];
        x[i] = s / L_(i, i);
    }
    for (Eigen::Index i = m - 1; i >= 0; --i) {
        double s = x[i];
        for (Eigen::Index k = i + 1; k < m; ++k)
            s -= L_(k, i) * x[k];
        x[i] = s / L_(i, i);
    }
    if (ops)
        ops->base_solve += static_cast<std::uint64_t>(m) * (m + 1);
}

NuFactorization factor_nu(int d, int n)
{
    const Eigen::MatrixXd N = nu_table(d, n, n).to_matrix();
    NuFactorization f{d, n, Eigen::MatrixXd::Identity(n + 1, n + 1), Eigen::VectorXd::Zero(n + 1)};
    for (int j = 0; j <= n; ++j) {
        double dj = N(j, j);
        for (int k = 0; k < j; ++k)
            dj -= f.L(j, k) * f.L(j, k) * f.D(k);
        if (!(dj > 0.0))
            throw std::runtime_error("factor_nu: nonpositive pivot " + std::to_string(j) +
                                     "; coefficient matrix is not positive definite");
        f.D(j) = dj;
        for (int i = j + 1; i <= n; ++i) {
            double s = N(i, j);
            for (int k = 0; k < j; ++k)
                s -= f.L(i, k) * f.L(j, k) * f.D(k);
            f.L(i, j) = s / dj;
        }
    }
    return f;
}

BlockGaussSolver::BlockGaussSolver(int d, int n)
    : d_(d), n_(n), N_(nu_table(d, n, n).to_matrix()), offsets_(block_offsets(d, n))
{
    if (d < 1)
        throw std::invalid_argument("BlockGaussSolver: need d >= 1");
    for (int a = 0; a <= n; ++a)
        blocks_.emplace_back(mass_dense(d - 1, n - a, n - a));
}

void BlockGaussSolver::solve_in_place(std::span<double> y, OpCounts* ops) const
{
    if (y.size() != offsets_.back())
        throw std::invalid_argument("BlockGaussSolver: length mismatch");
    const int n = n_;
    const int dl = d_ - 1;
    auto blk = [&](int a) { return y.subspan(offsets_[a], offsets_[a + 1] - offsets_[a]); };
    Eigen::MatrixXd N = N_;
    std::vector<double> z(polynomial_dim(dl, n)), w(z.size());

    // Forward elimination. Row b loses (N_ba/N_aa) (E^{n-b,n-a})^T times row
    // a; the elevation identities keep every block a scaled mass matrix, so
    // only the scalar array N changes.
    for (int a = 0; a <= n; ++a) {
        auto ya = blk(a);
        std::copy(ya.begin(), ya.end(), z.begin());
        for (int b = a + 1; b <= n; ++b) {
            const std::size_t len = polynomial_dim(dl, n - b);
            elevate_transpose_into(dl, n - b + 1, std::span(z).first(polynomial_dim(dl, n - b + 1)),
                                   std::span(w).first(len), ops);
            std::swap(z, w);
            const double factor = N(b, a) / N(a, a);
            axpy(-factor, std::span<const double>(z).first(len), blk(b), ops);
            for (int c = a + 1; c <= n; ++c)
                N(b, c) -= factor * N(a, c);
            N(b, a) = 0.0;
        }
    }
    // Block diagonal inversion, then normalize each row of N by its pivot.
    for (int a = 0; a <= n; ++a) {
        auto ya = blk(a);
        blocks_[a].solve_in_place(ya, ops);
        const double inv = 1.0 / N(a, a);
        for (double& v : ya)
            v *= inv;
        if (ops)
            ops->scaling += ya.size();
        for (int c = a + 1; c <= n; ++c)
            N(a, c) *= inv;
        N(a, a) = 1.0;
    }
    // Backward substitution with forward elevations.
    for (int a = n; a >= 1; --a) {
        auto ya = blk(a);
        std::copy(ya.begin(), ya.end(), z.begin());
        for (int b = a - 1; b >= 0; --b) {
            const std::size_t len = polynomial_dim(dl, n - b);
            elevate_into(dl, n - b, std::span(z).first(polynomial_dim(dl, n - b - 1)),
                         std::span(w).first(len), ops);
            std::swap(z, w);
            axpy(-N(b, a), std::span<const double>(z).first(len), blk(b), ops);
        }
    }
}

std::vector<double> block_gauss_solve(int d, int n, std::span<const double> y)
{
    std::vector<double> x(y.begin(), y.end());
    BlockGaussSolver(d, n).solve_in_place(x);
    return x;
}

BlockLDLt::BlockLDLt(int d, int n, int base_dim)
    : d_(d), n_(n), base_dim_(base_dim < 0 ? d - 1 : base_dim), size_(polynomial_dim(d, n)),
      nu_(factor_nu(d, n)), offsets_(block_offsets(d, n))
{
    if (d < 1)
        throw std::invalid_argument("BlockLDLt: need d >= 1");
    if (base_dim_ >= d)
        throw std::invalid_argument("BlockLDLt: base dimension must be below d");
    for (int k = 0; k <= n; ++k)
        spaces_.push_back(&index_space(d - 1, k));
    for (int a = 0; a <= n; ++a) {
        if (d - 1 == base_dim_)
            blocks_.emplace_back(DenseCholesky(mass_dense(d - 1, n - a, n - a)));
        else
            blocks_.emplace_back(std::make_shared<const BlockLDLt>(d - 1, n - a, base_dim_));
    }
}

void BlockLDLt::lower_sweep(std::span<double> x, OpCounts* ops) const
{
    const int n = n_;
    std::vector<double> z(polynomial_dim(d_ - 1, n)), w(z.size());
    for (int a = 0; a < n; ++a) {
        auto xa = block(x, a);
        std::copy(xa.begin(), xa.end(), z.begin());
        // z walks down one degree per block: (E^{d-1,n-b,n-a})^T x_a.
        for (int b = a + 1; b <= n; ++b) {
            const std::size_t len = spaces_[n - b]->size();
            elevate_transpose_into(*spaces_[n - b], std::span(z).first(spaces_[n - b + 1]->size()),
                                   std::span(w).first(len), ops);
            std::swap(z, w);
            axpy(-nu_.L(b, a), std::span<const double>(z).first(len), block(x, b), ops);
        }
    }
}

void BlockLDLt::diagonal_solve(std::span<double> x, OpCounts* ops) const
{
    for (int a = 0; a <= n_; ++a) {
        auto xa = block(x, a);
        if (const auto* dense = std::get_if<DenseCholesky>(&blocks_[a])) {
            dense->solve_in_place(xa, ops);
        } else {
            SolveStats inner;
            std::get<std::shared_ptr<const BlockLDLt>>(blocks_[a])->solve_in_place(xa, ops ? &inner : nullptr);
            if (ops)
                *ops += inner.total();
        }
        const double inv = 1.0 / nu_.D(a);
        for (double& v : xa)
            v *= inv;
        if (ops)
            ops->scaling += xa.size();
    }
}

void BlockLDLt::upper_sweep(std::span<double> x, OpCounts* ops) const
{
    const int n = n_;
    std::vector<double> z(polynomial_dim(d_ - 1, n)), w(z.size());
    for (int a = n; a >= 1; --a) {
        auto xa = block(x, a);
        std::copy(xa.begin(), xa.end(), z.begin());
        // z walks up one degree per block: E^{d-1,n-a,n-b} x_a.
        for (int b = a - 1; b >= 0; --b) {
            const std::size_t len = spaces_[n - b]->size();
            elevate_into(*spaces_[n - b - 1], std::span(z).first(spaces_[n - b - 1]->size()),
                         std::span(w).first(len), ops);
            std::swap(z, w);
            axpy(-nu_.L(a, b), std::span<const double>(z).first(len), block(x, b), ops);
        }
    }
}

void BlockLDLt::solve_in_place(std::span<double> x, SolveStats* stats) const
{
    if (x.size() != size_)
        throw std::invalid_argument("BlockLDLt::solve: length mismatch");
    lower_sweep(x, stats ? &stats->lower : nullptr);
    diagonal_solve(x, stats ? &stats->diagonal : nullptr);
    upper_sweep(x, stats ? &stats->upper : nullptr);
}

void BlockLDLt::solve(std::span<const double> y, std::span<double> x, SolveStats* stats) const
{
    if (y.size() != size_ || x.size() != size_)
        throw std::invalid_argument("BlockLDLt::solve: length mismatch");
    std::copy(y.begin(), y.end(), x.begin());
    solve_in_place(x, stats);
}

std::vector<double> BlockLDLt::solve(std::span<const double> y, SolveStats* stats) const
{
    std::vector<double> x(y.size());
    solve(y, x, stats);
    return x;
}

std::vector<double> BlockLDLt::apply_lower(std::span<const double> x) const
{
    const int n = n_;
    std::vector<double> in(x.begin(), x.end()), out = in;
    std::vector<double> z(polynomial_dim(d_ - 1, n)), w(z.size());
    for (int j = 0; j < n; ++j) {
        auto xj = block(in, j);
        std::copy(xj.begin(), xj.end(), z.begin());
        for (int i = j + 1; i <= n; ++i) {
            const std::size_t len = spaces_[n - i]->size();
            elevate_transpose_into(*spaces_[n - i], std::span(z).first(spaces_[n - i + 1]->size()),
                                   std::span(w).first(len));
            std::swap(z, w);
            axpy(nu_.L(i, j), std::span<const double>(z).first(len), block(out, i), nullptr);
        }
    }
    return out;
}

std::vector<double> BlockLDLt::apply_lower_inverse(std::span<const double> x) const
{
    std::vector<double> out(x.begin(), x.end());
    lower_sweep(out, nullptr);
    return out;
}

std::vector<double> BlockLDLt::apply_upper(std::span<const double> x) const
{
    const int n = n_;
    std::vector<double> in(x.begin(), x.end()), out = in;
    std::vector<double> z(polynomial_dim(d_ - 1, n)), w(z.size());
    for (int i = n; i >= 1; --i) {
        auto xi = block(in, i);
        std::copy(xi.begin(), xi.end(), z.begin());
        for (int j = i - 1; j >= 0; --j) {
            const std::size_t len = spaces_[n - j]->size();
            elevate_into(*spaces_[n - j - 1], std::span(z).first(spaces_[n - j - 1]->size()),
                         std::span(w).first(len));
            std::swap(z, w);
            axpy(nu_.L(i, j), std::span<const double>(z).first(len), block(out, j), nullptr);
        }
    }
    return out;
}

std::vector<double> BlockLDLt::apply_delta(std::span<const double> x) const
{
    std::vector<double> out(x.size());
    std::vector<double> in(x.begin(), x.end());
    for (int a = 0; a <= n_; ++a) {
        MassOperator m(d_ - 1, n_ - a);
        auto xa = block(in, a);
        auto oa = block(out, a);
        m.apply(xa, oa);
        for (double& v : oa)
            v *= nu_.D(a);
    }
    return out;
}

BlockLDLt factor(int d, int n, int base_dim) { return BlockLDLt(d, n, base_dim); }

std::uint64_t elevation_op_count(int d, int n)
{
    BlockLDLt fac(d, n);
    std::vector<double> y(fac.size(), 1.0);
    SolveStats stats;
    fac.solve_in_place(y, &stats);
    return stats.lower.elevation;
}

} // namespace bbfem
