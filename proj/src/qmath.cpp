#include "nlg/qmath.hpp"

#include "nlg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace nlg {

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    if (dim == 0) throw DimensionError("matrix dimension must be positive");
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), data_(std::move(entries)) {
    if (dim == 0 || data_.size() != dim * dim)
        throw DimensionError("entry count " + std::to_string(data_.size()) +
                             " does not match dim " + std::to_string(dim));
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : dim_(rows.size()) {
    if (dim_ == 0) throw DimensionError("matrix dimension must be positive");
    data_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
        if (row.size() != dim_) throw DimensionError("matrix literal is not square");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
    ComplexMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) out(c, r) = (*this)(r, c);
    return out;
}

cplx ComplexMatrix::trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::hermiticity_defect() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = r; c < dim_; ++c)
            worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return worst;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
    if (other.dim_ != dim_) throw DimensionError("max_abs_diff: dimension mismatch");
    double worst = 0.0;
    for (std::size_t k = 0; k < data_.size(); ++k)
        worst = std::max(worst, std::abs(data_[k] - other.data_[k]));
    return worst;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    if (rhs.dim_ != dim_) throw DimensionError("matrix sum: dimension mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    if (rhs.dim_ != dim_) throw DimensionError("matrix difference: dimension mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionError("matrix product: dimension mismatch");
    const std::size_t n = a.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

namespace pauli {
ComplexMatrix i() { return ComplexMatrix::identity(2); }
ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix y() { return {{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}}; }
ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t na = a.dim(), nb = b.dim();
    ComplexMatrix out(na * nb);
    for (std::size_t ar = 0; ar < na; ++ar)
        for (std::size_t ac = 0; ac < na; ++ac) {
            const cplx s = a(ar, ac);
            if (s == cplx{}) continue;
            for (std::size_t br = 0; br < nb; ++br)
                for (std::size_t bc = 0; bc < nb; ++bc)
                    out(ar * nb + br, ac * nb + bc) = s * b(br, bc);
        }
    return out;
}

ComplexMatrix kron(std::initializer_list<ComplexMatrix> factors) {
    if (factors.size() == 0) throw ArgumentError("kron of an empty factor list");
    auto it = factors.begin();
    ComplexMatrix out = *it++;
    for (; it != factors.end(); ++it) out = kron(out, *it);
    return out;
}

cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionError("trace_product: dimension mismatch");
    const std::size_t n = a.dim();
    cplx t = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) t += a(i, k) * b(k, i);
    return t;
}

namespace {

// Cyclic Jacobi for a real symmetric matrix stored row-major; returns the
// diagonal after convergence.
std::vector<double> jacobi_symmetric(std::vector<double> a, std::size_t n) {
    auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * n + c]; };
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return std::vector<double>(n, 0.0);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
        if (std::sqrt(off) <= 1e-15 * scale) break;

        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = at(i, i);
    return diag;
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
    // H = A + iB  ->  [[A, -B], [B, A]] has every eigenvalue of H twice.
    const std::size_t n = m.dim();
    const std::size_t n2 = 2 * n;
    std::vector<double> emb(n2 * n2);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            // symmetrize so tiny Hermiticity defects do not leak in
            const cplx h = 0.5 * (m(r, c) + std::conj(m(c, r)));
            emb[r * n2 + c] = h.real();
            emb[(r + n) * n2 + (c + n)] = h.real();
            emb[r * n2 + (c + n)] = -h.imag();
            emb[(r + n) * n2 + c] = h.imag();
        }
    auto doubled = jacobi_symmetric(std::move(emb), n2);
    std::sort(doubled.begin(), doubled.end());
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
    return out;
}

ComplexMatrix permute_qubits(const ComplexMatrix& m, std::span<const std::size_t> perm) {
    const std::size_t n = perm.size();
    if (n == 0 || n > 16 || m.dim() != (std::size_t{1} << n))
        throw DimensionError("permute_qubits: matrix dim " + std::to_string(m.dim()) +
                             " does not match " + std::to_string(n) + " qubits");
    std::vector<bool> seen(n, false);
    for (std::size_t q : perm) {
        if (q >= n || seen[q]) throw ArgumentError("permute_qubits: not a permutation");
        seen[q] = true;
    }
    const std::size_t d = m.dim();
    std::vector<std::size_t> map(d);
    for (std::size_t i = 0; i < d; ++i) {
        std::size_t j = 0;
        for (std::size_t q = 0; q < n; ++q) {
            const std::size_t bit = (i >> (n - 1 - q)) & 1U;
            j |= bit << (n - 1 - perm[q]);
        }
        map[i] = j;
    }
    ComplexMatrix out(d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) out(map[r], map[c]) = m(r, c);
    return out;
}

ComplexMatrix permute_qubits(const ComplexMatrix& m, std::initializer_list<std::size_t> perm) {
    return permute_qubits(m, std::span<const std::size_t>(perm.begin(), perm.size()));
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
    const std::size_t d = m_.dim();
    if (d != 2 && d != 4 && d != 16)
        throw DimensionError("density matrix dim must be 2, 4 or 16, got " + std::to_string(d));
    const double herm = m_.hermiticity_defect();
    if (herm > kStateTolerance)
        throw IntegrityError("density matrix not Hermitian (defect " + std::to_string(herm) + ")");
    const cplx tr = m_.trace();
    if (std::abs(tr - 1.0) > kStateTolerance)
        throw IntegrityError("density matrix trace " + std::to_string(tr.real()) + " != 1");
    const double lo = hermitian_eigenvalues(m_).front();
    if (lo < -kStateTolerance)
        throw IntegrityError("density matrix not PSD (min eigenvalue " + std::to_string(lo) + ")");
}

double DensityMatrix::purity() const { return trace_product(m_, m_).real(); }

DensityMatrix epr_state() {
    ComplexMatrix m(4);
    m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
    return DensityMatrix(std::move(m));
}

DensityMatrix maximally_mixed(std::size_t dim) {
    if (dim != 2 && dim != 4 && dim != 16)
        throw DimensionError("maximally_mixed: dim must be 2, 4 or 16, got " + std::to_string(dim));
    return DensityMatrix(ComplexMatrix::identity(dim) * cplx(1.0 / static_cast<double>(dim)));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix(kron(a.matrix(), b.matrix()));
}

DepolarizingChannel::DepolarizingChannel(double eta_, Arity arity_) : eta(eta_), arity(arity_) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw ArgumentError("visibility must lie in [0,1], got " + std::to_string(eta));
}

namespace {

// Partial trace of a 16x16 operator over one 4-dim pair register.
ComplexMatrix trace_out_pair(const ComplexMatrix& m, bool keep_first) {
    ComplexMatrix out(4);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            for (std::size_t k = 0; k < 4; ++k)
                out(r, c) += keep_first ? m(r * 4 + k, c * 4 + k) : m(k * 4 + r, k * 4 + c);
    return out;
}

}  // namespace

DensityMatrix apply_depolarizing(const DepolarizingChannel& ch, const DensityMatrix& rho) {
    const double keep = ch.eta * ch.eta;
    const double mix = 1.0 - keep;
    if (ch.arity == Arity::TwoQubit) {
        if (rho.dim() != 4)
            throw DimensionError("two-qubit channel needs a 4x4 state, got " + std::to_string(rho.dim()));
        return DensityMatrix(rho.matrix() * cplx(keep) + ComplexMatrix::identity(4) * cplx(mix / 4.0));
    }
    if (rho.dim() != 16)
        throw DimensionError("four-qubit channel needs a 16x16 state, got " + std::to_string(rho.dim()));
    // eps(X) = keep X + mix Tr(X) I/4, extended linearly to eps (x) eps
    const auto i4 = ComplexMatrix::identity(4) * cplx(0.25);
    ComplexMatrix out = rho.matrix() * cplx(keep * keep);
    out += kron(trace_out_pair(rho.matrix(), true), i4) * cplx(keep * mix);
    out += kron(i4, trace_out_pair(rho.matrix(), false)) * cplx(keep * mix);
    out += ComplexMatrix::identity(16) * cplx(mix * mix / 16.0);
    return DensityMatrix(std::move(out));
}

}  // namespace nlg
