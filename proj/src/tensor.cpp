#include "tvpce/tensor.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tvpce {

namespace {

std::size_t product(const std::vector<std::size_t>& dims)
{
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void check_dims(const std::vector<std::size_t>& dims)
{
    if (dims.empty())
        throw std::invalid_argument("tensor needs at least one mode");
    for (auto d : dims)
        if (d == 0)
            throw std::invalid_argument("tensor extents must be positive");
}

void require_same_shape(const ComplexTensor& a, const ComplexTensor& b)
{
    if (a.dims() != b.dims())
        throw std::invalid_argument("tensor shapes differ");
}

} // namespace

ComplexTensor::ComplexTensor(std::vector<std::size_t> dims)
    : dims_(std::move(dims))
{
    check_dims(dims_);
    data_.assign(product(dims_), cplx{0.0, 0.0});
}

ComplexTensor::ComplexTensor(std::vector<std::size_t> dims, std::vector<cplx> data)
    : dims_(std::move(dims)), data_(std::move(data))
{
    check_dims(dims_);
    if (product(dims_) != data_.size())
        throw std::invalid_argument("tensor data length " + std::to_string(data_.size()) +
                                    " does not match extents");
}

std::size_t ComplexTensor::linear_index(std::span<const std::size_t> idx) const
{
    if (idx.size() != dims_.size())
        throw std::invalid_argument("index arity does not match tensor order");
    std::size_t lin = 0;
    std::size_t stride = 1;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (idx[k] >= dims_[k])
            throw std::out_of_range("tensor index out of range");
        lin += idx[k] * stride;
        stride *= dims_[k];
    }
    return lin;
}

double ComplexTensor::squared_norm() const
{
    double s = 0.0;
    for (const auto& z : data_)
        s += std::norm(z);
    return s;
}

double ComplexTensor::frobenius() const { return std::sqrt(squared_norm()); }

ComplexTensor& ComplexTensor::operator+=(const ComplexTensor& other)
{
    require_same_shape(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += other.data_[i];
    return *this;
}

ComplexTensor& ComplexTensor::operator-=(const ComplexTensor& other)
{
    require_same_shape(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] -= other.data_[i];
    return *this;
}

ComplexTensor& ComplexTensor::operator*=(cplx scale)
{
    for (auto& z : data_)
        z *= scale;
    return *this;
}

ComplexTensor operator-(ComplexTensor lhs, const ComplexTensor& rhs) { return lhs -= rhs; }
ComplexTensor operator+(ComplexTensor lhs, const ComplexTensor& rhs) { return lhs += rhs; }

ComplexMatrix unfold(const ComplexTensor& t, std::size_t mode)
{
    if (mode >= t.order())
        throw std::invalid_argument("unfold: mode out of range");
    const auto& dims = t.dims();
    const std::size_t rows = dims[mode];
    const std::size_t cols = t.size() / rows;
    // Linear index = inner + i_mode * inner_size + outer * inner_size * rows,
    // where inner covers modes < mode and outer modes > mode. The column index
    // is inner + outer * inner_size.
    std::size_t inner = 1;
    for (std::size_t k = 0; k < mode; ++k)
        inner *= dims[k];
    const std::size_t outer = cols / inner;

    ComplexMatrix m(rows, cols);
    const auto src = t.data();
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t n = 0; n < inner; ++n)
                m(i, n + o * inner) = src[n + i * inner + o * inner * rows];
    return m;
}

ComplexTensor fold(const ComplexMatrix& m, std::size_t mode, const std::vector<std::size_t>& dims)
{
    ComplexTensor t(dims);
    if (mode >= dims.size())
        throw std::invalid_argument("fold: mode out of range");
    const std::size_t rows = dims[mode];
    const std::size_t cols = t.size() / rows;
    if (static_cast<std::size_t>(m.rows()) != rows || static_cast<std::size_t>(m.cols()) != cols)
        throw std::invalid_argument("fold: matrix shape does not match extents");
    std::size_t inner = 1;
    for (std::size_t k = 0; k < mode; ++k)
        inner *= dims[k];
    const std::size_t outer = cols / inner;
    auto dst = t.data();
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t n = 0; n < inner; ++n)
                dst[n + i * inner + o * inner * rows] = m(i, n + o * inner);
    return t;
}

ComplexVector vectorize(const ComplexTensor& t)
{
    const auto d = t.data();
    return Eigen::Map<const ComplexVector>(d.data(), static_cast<Eigen::Index>(d.size()));
}

ComplexTensor permute(const ComplexTensor& t, std::span<const std::size_t> order)
{
    const std::size_t n = t.order();
    if (order.size() != n)
        throw std::invalid_argument("permute: order length mismatch");
    std::vector<bool> seen(n, false);
    for (auto o : order) {
        if (o >= n || seen[o])
            throw std::invalid_argument("permute: not a permutation");
        seen[o] = true;
    }
    std::vector<std::size_t> new_dims(n);
    for (std::size_t k = 0; k < n; ++k)
        new_dims[k] = t.dim(order[k]);

    // Source stride of each destination mode.
    std::vector<std::size_t> src_stride(n);
    {
        std::vector<std::size_t> stride(n);
        std::size_t s = 1;
        for (std::size_t k = 0; k < n; ++k) {
            stride[k] = s;
            s *= t.dim(k);
        }
        for (std::size_t k = 0; k < n; ++k)
            src_stride[k] = stride[order[k]];
    }

    ComplexTensor out(new_dims);
    auto dst = out.data();
    const auto src = t.data();
    std::vector<std::size_t> idx(n, 0);
    std::size_t src_lin = 0;
    for (std::size_t lin = 0; lin < dst.size(); ++lin) {
        dst[lin] = src[src_lin];
        for (std::size_t k = 0; k < n; ++k) {
            if (++idx[k] < new_dims[k]) {
                src_lin += src_stride[k];
                break;
            }
            src_lin -= (new_dims[k] - 1) * src_stride[k];
            idx[k] = 0;
        }
    }
    return out;
}

ComplexTensor permute(const ComplexTensor& t, std::initializer_list<std::size_t> order)
{
    return permute(t, std::span<const std::size_t>(order.begin(), order.size()));
}

ComplexMatrix khatri_rao(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.cols() != b.cols())
        throw std::invalid_argument("khatri_rao: column counts differ");
    ComplexMatrix out(a.rows() * b.rows(), a.cols());
    for (Eigen::Index k = 0; k < a.cols(); ++k)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            out.col(k).segment(i * b.rows(), b.rows()) = a(i, k) * b.col(k);
    return out;
}

ComplexTensor rank1_compose(std::span<const ComplexVector> factors)
{
    if (factors.empty())
        throw std::invalid_argument("rank1_compose: no factors");
    std::vector<std::size_t> dims;
    for (const auto& f : factors)
        dims.push_back(static_cast<std::size_t>(f.size()));
    ComplexTensor t(dims);
    auto dst = t.data();
    // Grow the outer product one mode at a time.
    std::size_t filled = dims[0];
    for (std::size_t i = 0; i < filled; ++i)
        dst[i] = factors[0](static_cast<Eigen::Index>(i));
    for (std::size_t m = 1; m < factors.size(); ++m) {
        const std::size_t block = filled;
        for (std::size_t j = dims[m]; j-- > 0;) {
            const cplx s = factors[m](static_cast<Eigen::Index>(j));
            for (std::size_t i = 0; i < block; ++i)
                dst[j * block + i] = dst[i] * s;
        }
        filled *= dims[m];
    }
    return t;
}

ComplexTensor rank1_compose(const ComplexVector& a, const ComplexVector& b, const ComplexVector& c)
{
    const ComplexVector f[] = {a, b, c};
    return rank1_compose(std::span<const ComplexVector>(f));
}

ComplexTensor cp_compose(const CpFactors& f)
{
    if (f.a2.cols() != f.a1.cols() || f.a3.cols() != f.a1.cols())
        throw std::invalid_argument("cp_compose: factor ranks differ");
    if (f.a1.cols() == 0)
        throw std::invalid_argument("cp_compose: empty factors");
    // X_(0) = A1 * (A3 kr A2)^T
    const ComplexMatrix x0 = f.a1 * khatri_rao(f.a3, f.a2).transpose();
    return fold(x0, 0,
                {static_cast<std::size_t>(f.a1.rows()), static_cast<std::size_t>(f.a2.rows()),
                 static_cast<std::size_t>(f.a3.rows())});
}

ComplexTensor cp_component(const CpFactors& f, std::size_t k)
{
    const auto c = static_cast<Eigen::Index>(k);
    if (c >= f.a1.cols() || c >= f.a2.cols() || c >= f.a3.cols())
        throw std::invalid_argument("cp_component: index out of range");
    return rank1_compose(f.a1.col(c), f.a2.col(c), f.a3.col(c));
}

ComplexTensor as_tensor(const ComplexMatrix& m)
{
    std::vector<cplx> data(m.data(), m.data() + m.size());
    return ComplexTensor({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())},
                         std::move(data));
}

ComplexMatrix as_matrix(const ComplexTensor& t)
{
    if (t.order() != 2)
        throw std::invalid_argument("as_matrix: tensor is not order 2");
    return Eigen::Map<const ComplexMatrix>(t.data().data(), static_cast<Eigen::Index>(t.dim(0)),
                                           static_cast<Eigen::Index>(t.dim(1)));
}

} // namespace tvpce
