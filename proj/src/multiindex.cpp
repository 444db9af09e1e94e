#include "bbfem/multiindex.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace bbfem {

namespace {

using u128 = unsigned __int128;

std::uint64_t checked(u128 v, const char* what)
{
    if (v > static_cast<u128>(UINT64_MAX))
        throw std::overflow_error(std::string(what) + ": result exceeds 64 bits");
    return static_cast<std::uint64_t>(v);
}

void enumerate_into(int d, int n, std::vector<int>& prefix, std::vector<MultiIndex>& out)
{
    if (d == 0) {
        prefix.push_back(n);
        out.emplace_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int a = 0; a <= n; ++a) {
        prefix.push_back(a);
        enumerate_into(d - 1, n - a, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries))
{
    if (entries_.empty())
        throw std::invalid_argument("MultiIndex needs at least one entry");
    for (int e : entries_)
        if (e < 0)
            throw std::invalid_argument("MultiIndex entries must be nonnegative");
}

MultiIndex::MultiIndex(std::initializer_list<int> entries)
    : MultiIndex(std::vector<int>(entries))
{
}

int MultiIndex::order() const
{
    return std::accumulate(entries_.begin(), entries_.end(), 0);
}

MultiIndex MultiIndex::raised(int i) const
{
    auto e = entries_;
    ++e.at(i);
    return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::lowered(int i) const
{
    auto e = entries_;
    if (e.at(i) == 0)
        throw std::domain_error("MultiIndex::lowered: entry is already zero");
    --e[i];
    return MultiIndex(std::move(e));
}

bool MultiIndex::dominates(const MultiIndex& beta) const
{
    if (beta.size() != size())
        return false;
    for (std::size_t i = 0; i < size(); ++i)
        if (entries_[i] < beta.entries_[i])
            return false;
    return true;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("MultiIndex sum: length mismatch");
    auto e = a.entries_;
    for (std::size_t i = 0; i < e.size(); ++i)
        e[i] += b.entries_[i];
    return MultiIndex(std::move(e));
}

std::uint64_t binomial(int n, int k)
{
    if (k < 0 || n < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    u128 r = 1;
    for (int j = 1; j <= k; ++j) {
        r = r * static_cast<u128>(n - k + j) / static_cast<u128>(j);
        checked(r, "binomial");
    }
    return static_cast<std::uint64_t>(r);
}

std::size_t polynomial_dim(int d, int n)
{
    if (d < 0 || n < 0)
        throw std::invalid_argument("polynomial_dim: negative argument");
    return static_cast<std::size_t>(binomial(n + d, n));
}

std::vector<MultiIndex> enumerate(int d, int n)
{
    if (d < 0 || n < 0)
        throw std::invalid_argument("enumerate: negative argument");
    std::vector<MultiIndex> out;
    out.reserve(polynomial_dim(d, n));
    std::vector<int> prefix;
    prefix.reserve(d + 1);
    enumerate_into(d, n, prefix, out);
    return out;
}

std::size_t block_offset(int d, int n, int a)
{
    // sum_{a' < a} dim(d-1, n-a') = dim(d, n) - dim(d, n-a)
    if (a <= 0)
        return 0;
    if (a > n)
        return polynomial_dim(d, n);
    return polynomial_dim(d, n) - polynomial_dim(d, n - a);
}

std::size_t rank(const MultiIndex& alpha)
{
    const int d = alpha.dim();
    int rem = alpha.order();
    std::size_t r = 0;
    for (int i = 0; i < d; ++i) {
        r += block_offset(d - i, rem, alpha[i]);
        rem -= alpha[i];
    }
    return r;
}

MultiIndex unrank(int d, int n, std::size_t index)
{
    if (index >= polynomial_dim(d, n))
        throw std::out_of_range("unrank: index " + std::to_string(index) + " out of range for (d=" +
                                std::to_string(d) + ", n=" + std::to_string(n) + ")");
    std::vector<int> e(d + 1);
    int rem = n;
    for (int i = 0; i < d; ++i) {
        int a = 0;
        while (block_offset(d - i, rem, a + 1) <= index)
            ++a;
        index -= block_offset(d - i, rem, a);
        e[i] = a;
        rem -= a;
    }
    e[d] = rem;
    return MultiIndex(std::move(e));
}

std::uint64_t multinomial(int n, const MultiIndex& alpha)
{
    if (alpha.order() != n)
        throw std::invalid_argument("multinomial: |alpha| != n");
    // n!/alpha! = prod_i C(n - alpha_0 - ... - alpha_{i-1}, alpha_i)
    u128 r = 1;
    int rem = n;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        r *= binomial(rem, alpha[i]);
        checked(r, "multinomial");
        rem -= alpha[i];
    }
    return static_cast<std::uint64_t>(r);
}

std::uint64_t binom_mi(const MultiIndex& alpha, const MultiIndex& beta)
{
    if (!alpha.dominates(beta))
        throw std::invalid_argument("binom_mi: requires alpha >= beta");
    u128 r = 1;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        r *= binomial(alpha[i], beta[i]);
        checked(r, "binom_mi");
    }
    return static_cast<std::uint64_t>(r);
}

IndexSpace::IndexSpace(int d, int n) : d_(d), n_(n), indices_(enumerate(d, n))
{
    raise_.resize(indices_.size() * (d + 1));
    for (std::size_t r = 0; r < indices_.size(); ++r)
        for (int i = 0; i <= d; ++i)
            raise_[r * (d + 1) + i] = static_cast<std::uint32_t>(rank(indices_[r].raised(i)));
}

const IndexSpace& index_space(int d, int n)
{
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<IndexSpace>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{d, n}];
    if (!slot)
        slot = std::make_unique<IndexSpace>(d, n);
    return *slot;
}

} // namespace bbfem
