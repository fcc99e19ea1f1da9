#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace nlg {

using cplx = std::complex<double>;

// Square, dense, row-major complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<cplx> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const double> diag);

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<cplx>& entries() const noexcept { return data_; }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    cplx trace() const;

    // Largest entrywise modulus of (this - this^dagger).
    double hermiticity_defect() const;
    double max_abs_diff(const ComplexMatrix& other) const;

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(cplx s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

private:
    std::size_t dim_ = 0;
    std::vector<cplx> data_;
};

namespace pauli {
ComplexMatrix i();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(std::initializer_list<ComplexMatrix> factors);

// Tr(a b) without forming the product.
cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

// Ascending eigenvalues of a Hermitian matrix (cyclic Jacobi on the real
// 2n x 2n embedding).
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

// perm[q] is the destination position of source qubit q; qubit 0 is the most
// significant bit of the basis index.
ComplexMatrix permute_qubits(const ComplexMatrix& m, std::span<const std::size_t> perm);
ComplexMatrix permute_qubits(const ComplexMatrix& m, std::initializer_list<std::size_t> perm);

inline constexpr double kStateTolerance = 1e-9;

// Validated density operator; construction throws IntegrityError on a matrix
// that is not Hermitian, unit-trace and PSD within kStateTolerance.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m);

    const ComplexMatrix& matrix() const noexcept { return m_; }
    std::size_t dim() const noexcept { return m_.dim(); }
    double purity() const;

private:
    ComplexMatrix m_;
};

DensityMatrix epr_state();
DensityMatrix maximally_mixed(std::size_t dim);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

enum class Arity { TwoQubit, FourQubit };

struct DepolarizingChannel {
    double eta;
    Arity arity;

    DepolarizingChannel(double eta, Arity arity);
};

// TwoQubit: eta^2 rho + (1 - eta^2) I/4.
// FourQubit: the same map applied independently to qubits {0,1} and {2,3}.
DensityMatrix apply_depolarizing(const DepolarizingChannel& ch, const DensityMatrix& rho);

}  // namespace nlg
