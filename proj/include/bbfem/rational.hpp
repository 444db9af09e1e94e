#pragma once

#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bbfem/multiindex.hpp"

namespace bbfem {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt factorial_exact(int n);
BigInt binomial_exact(int n, int k);
/// alpha! = prod_i alpha_i!
BigInt factorial_exact(const MultiIndex& alpha);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Row-major matrix of exact rationals. Used for structural identities that
/// must hold exactly; runtime kernels work in double.
struct RationalMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Rational> data;

    RationalMatrix() = default;
    RationalMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    Rational& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    RationalMatrix transpose() const;
    friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
    friend bool operator==(const RationalMatrix& a, const RationalMatrix& b)
    {
        return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
    }
};

} // namespace bbfem
