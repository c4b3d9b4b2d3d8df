#pragma once

// Independent reference implementations used by the tests. They follow the
// textbook definitions with plain loops and avoid the library code paths they
// check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tvpce/tensor.hpp"

namespace oracle {

using tvpce::ComplexMatrix;
using tvpce::ComplexTensor;
using tvpce::ComplexVector;
using tvpce::cplx;

inline ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    ComplexMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            m(i, j) = cplx(g(rng), g(rng));
    return m;
}

inline ComplexVector random_vector(Eigen::Index n, std::mt19937_64& rng)
{
    return random_matrix(n, 1, rng).col(0);
}

inline ComplexTensor random_tensor(const std::vector<std::size_t>& dims, std::mt19937_64& rng)
{
    ComplexTensor t(dims);
    std::normal_distribution<double> g;
    for (auto& z : t.data())
        z = cplx(g(rng), g(rng));
    return t;
}

// Multi-index of a column-major linear index.
inline std::vector<std::size_t> multi_index(std::size_t lin, const std::vector<std::size_t>& dims)
{
    std::vector<std::size_t> idx(dims.size());
    for (std::size_t k = 0; k < dims.size(); ++k) {
        idx[k] = lin % dims[k];
        lin /= dims[k];
    }
    return idx;
}

// Mode-k unfolding straight from its definition: column index
// j = sum_{m != k} i_m * prod_{m' < m, m' != k} I_{m'}.
inline ComplexMatrix unfold(const ComplexTensor& t, std::size_t mode)
{
    const auto& dims = t.dims();
    const std::size_t cols = t.size() / dims[mode];
    ComplexMatrix out(static_cast<Eigen::Index>(dims[mode]), static_cast<Eigen::Index>(cols));
    for (std::size_t lin = 0; lin < t.size(); ++lin) {
        const auto idx = multi_index(lin, dims);
        std::size_t j = 0, stride = 1;
        for (std::size_t m = 0; m < dims.size(); ++m) {
            if (m == mode)
                continue;
            j += idx[m] * stride;
            stride *= dims[m];
        }
        out(static_cast<Eigen::Index>(idx[mode]), static_cast<Eigen::Index>(j)) = t.data()[lin];
    }
    return out;
}

inline ComplexTensor outer(const ComplexVector& a, const ComplexVector& b, const ComplexVector& c)
{
    ComplexTensor t({static_cast<std::size_t>(a.size()), static_cast<std::size_t>(b.size()),
                     static_cast<std::size_t>(c.size())});
    for (Eigen::Index k = 0; k < c.size(); ++k)
        for (Eigen::Index j = 0; j < b.size(); ++j)
            for (Eigen::Index i = 0; i < a.size(); ++i)
                t(i, j, k) = a(i) * b(j) * c(k);
    return t;
}

inline ComplexTensor cp_sum(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c)
{
    ComplexTensor t({static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(b.rows()),
                     static_cast<std::size_t>(c.rows())});
    for (Eigen::Index r = 0; r < a.cols(); ++r)
        t += outer(a.col(r), b.col(r), c.col(r));
    return t;
}

// Kronecker product with a's index slowest.
inline ComplexVector kron(const ComplexVector& a, const ComplexVector& b)
{
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        for (Eigen::Index j = 0; j < b.size(); ++j)
            out(i * b.size() + j) = a(i) * b(j);
    return out;
}

inline ComplexMatrix pinv(const ComplexMatrix& m)
{
    return m.completeOrthogonalDecomposition().pseudoInverse();
}

inline double relative_difference(const ComplexTensor& a, const ComplexTensor& b)
{
    return (a - b).frobenius() / std::max(b.frobenius(), std::numeric_limits<double>::min());
}

// MDL score of order k for descending eigenvalues, computed with products
// rather than log-sums.
inline double mdl_score(const std::vector<double>& lambda, std::size_t k, double n)
{
    const std::size_t p = lambda.size();
    const double q = static_cast<double>(p - k);
    double am = 0.0, gm = 1.0;
    for (std::size_t i = k; i < p; ++i) {
        am += lambda[i];
        gm *= std::pow(lambda[i], 1.0 / q);
    }
    am /= q;
    const double kk = static_cast<double>(k);
    return -n * q * std::log(gm / am) + 0.5 * kk * (2.0 * static_cast<double>(p) - kk) * std::log(n);
}

// J(w) = |sum_k num_k e^{jkw}|^2 / g(w), g from its non-negative-lag half.
inline double ratio_value(const std::vector<cplx>& num, const std::vector<cplx>& den, double w)
{
    cplx f{};
    for (std::size_t k = 0; k < num.size(); ++k)
        f += num[k] * std::polar(1.0, static_cast<double>(k) * w);
    if (den.empty())
        return std::norm(f);
    double g = den[0].real();
    for (std::size_t d = 1; d < den.size(); ++d)
        g += 2.0 * (den[d] * std::polar(1.0, static_cast<double>(d) * w)).real();
    return std::norm(f) / g;
}

struct GridMax {
    double omega;
    double value;
};

template <class F>
GridMax dense_max(F f, std::size_t points)
{
    GridMax best{0.0, -std::numeric_limits<double>::infinity()};
    const double pi = std::acos(-1.0);
    for (std::size_t i = 0; i < points; ++i) {
        const double w = -pi + 2.0 * pi * static_cast<double>(i) / static_cast<double>(points);
        const double v = f(w);
        if (v > best.value)
            best = {w, v};
    }
    return best;
}

} // namespace oracle
