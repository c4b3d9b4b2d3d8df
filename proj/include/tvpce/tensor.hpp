#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace tvpce {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Dense complex tensor of arbitrary order, column-major (first index fastest).
//
// Element (i_0, ..., i_{d-1}) lives at linear index sum_k i_k * prod_{m<k} dims[m].
// Extents of 1 are allowed in every mode.
class ComplexTensor {
public:
    ComplexTensor() = default;

    // Zero-filled tensor with the given extents.
    explicit ComplexTensor(std::vector<std::size_t> dims);
    ComplexTensor(std::vector<std::size_t> dims, std::vector<cplx> data);

    std::size_t order() const { return dims_.size(); }
    std::size_t size() const { return data_.size(); }
    std::size_t dim(std::size_t mode) const { return dims_.at(mode); }
    const std::vector<std::size_t>& dims() const { return dims_; }

    std::span<const cplx> data() const { return data_; }
    std::span<cplx> data() { return data_; }

    std::size_t linear_index(std::span<const std::size_t> idx) const;

    template <class... I>
    cplx& operator()(I... idx)
    {
        return data_[offset(static_cast<std::size_t>(idx)...)];
    }
    template <class... I>
    const cplx& operator()(I... idx) const
    {
        return data_[offset(static_cast<std::size_t>(idx)...)];
    }

    double frobenius() const;
    double squared_norm() const;

    ComplexTensor& operator+=(const ComplexTensor& other);
    ComplexTensor& operator-=(const ComplexTensor& other);
    ComplexTensor& operator*=(cplx scale);

    friend bool operator==(const ComplexTensor&, const ComplexTensor&) = default;

private:
    template <class... I>
    std::size_t offset(I... idx) const
    {
        const std::size_t ids[] = {idx...};
        std::size_t lin = 0;
        std::size_t stride = 1;
        for (std::size_t k = 0; k < sizeof...(I); ++k) {
            lin += ids[k] * stride;
            stride *= dims_[k];
        }
        return lin;
    }

    std::vector<std::size_t> dims_;
    std::vector<cplx> data_;
};

ComplexTensor operator-(ComplexTensor lhs, const ComplexTensor& rhs);
ComplexTensor operator+(ComplexTensor lhs, const ComplexTensor& rhs);

// Rank-K factor-matrix triple for a third-order CP model. Column k of each
// matrix belongs to component k.
struct CpFactors {
    ComplexMatrix a1;
    ComplexMatrix a2;
    ComplexMatrix a3;

    std::size_t rank() const { return static_cast<std::size_t>(a1.cols()); }
};

// Mode-k unfolding: rows index `mode`, columns enumerate the remaining modes in
// ascending order with the lowest-numbered mode varying fastest.
ComplexMatrix unfold(const ComplexTensor& t, std::size_t mode);

// Inverse of unfold for a tensor of extents `dims`.
ComplexTensor fold(const ComplexMatrix& m, std::size_t mode, const std::vector<std::size_t>& dims);

ComplexVector vectorize(const ComplexTensor& t);

// Result mode k is source mode order[k].
ComplexTensor permute(const ComplexTensor& t, std::span<const std::size_t> order);
ComplexTensor permute(const ComplexTensor& t, std::initializer_list<std::size_t> order);

// Column-wise Kronecker product; a's row index varies slowest.
ComplexMatrix khatri_rao(const ComplexMatrix& a, const ComplexMatrix& b);

// Outer product of the given vectors, first vector indexing mode 0.
ComplexTensor rank1_compose(std::span<const ComplexVector> factors);
ComplexTensor rank1_compose(const ComplexVector& a, const ComplexVector& b, const ComplexVector& c);

ComplexTensor cp_compose(const CpFactors& f);

// Rank-1 term k of a CP model.
ComplexTensor cp_component(const CpFactors& f, std::size_t k);

// Matrix viewed as an order-2 tensor and back.
ComplexTensor as_tensor(const ComplexMatrix& m);
ComplexMatrix as_matrix(const ComplexTensor& t);

} // namespace tvpce
