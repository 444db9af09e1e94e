#include "bbfem/rational.hpp"

#include <stdexcept>

namespace bbfem {

BigInt factorial_exact(int n)
{
    if (n < 0)
        throw std::invalid_argument("factorial_exact: negative argument");
    BigInt r = 1;
    for (int j = 2; j <= n; ++j)
        r *= j;
    return r;
}

BigInt binomial_exact(int n, int k)
{
    if (k < 0 || n < 0 || k > n)
        return 0;
    BigInt r = 1;
    for (int j = 1; j <= k; ++j) {
        r *= n - k + j;
        r /= j;
    }
    return r;
}

BigInt factorial_exact(const MultiIndex& alpha)
{
    BigInt r = 1;
    for (int a : alpha.entries())
        r *= factorial_exact(a);
    return r;
}

RationalMatrix RationalMatrix::transpose() const
{
    RationalMatrix t(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b)
{
    if (a.cols != b.rows)
        throw std::invalid_argument("RationalMatrix product: shape mismatch");
    RationalMatrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const Rational& aik = a(i, k);
            if (aik == 0)
                continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                c(i, j) += aik * b(k, j);
        }
    return c;
}

} // namespace bbfem
