#pragma once

// Small dense complex linear algebra for spin systems: spin operators,
// Kronecker products, Hermitian eigendecomposition (cyclic Jacobi),
// unitary exponentials and partial traces. Dimensions stay tiny (<= ~16),
// so everything is plain O(n^3) with no blocking.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace hfgyro {

using cplx = std::complex<double>;

inline constexpr double two_pi = 6.283185307179586476925286766559;

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n) {}

    static ComplexMatrix zero(int n) { return ComplexMatrix(n); }

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int dim() const { return n_; }

    cplx& operator()(int r, int c) { return a_[static_cast<size_t>(r) * n_ + c]; }
    const cplx& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * n_ + c]; }

    cplx* data() { return a_.data(); }
    const cplx* data() const { return a_.data(); }

    ComplexMatrix adjoint() const {
        ComplexMatrix m(n_);
        for (int r = 0; r < n_; ++r)
            for (int c = 0; c < n_; ++c) m(c, r) = std::conj((*this)(r, c));
        return m;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (int i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const cplx& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const cplx& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    bool is_hermitian(double tol = 1e-10) const {
        for (int r = 0; r < n_; ++r)
            for (int c = r; c < n_; ++c)
                if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
        return true;
    }

    bool is_unitary(double tol = 1e-10) const {
        for (int r = 0; r < n_; ++r) {
            for (int c = 0; c < n_; ++c) {
                cplx s = 0.0;
                for (int k = 0; k < n_; ++k) s += std::conj((*this)(k, r)) * (*this)(k, c);
                if (std::abs(s - (r == c ? 1.0 : 0.0)) > tol) return false;
            }
        }
        return true;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    ComplexMatrix& operator*=(cplx s) {
        for (cplx& v : a_) v *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }

private:
    int n_ = 0;
    std::vector<cplx> a_;
};

// c = a * b, all n x n; c must not alias a or b
inline void matmul(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& c) {
    const int n = a.dim();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < n; ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    }
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.dim());
    matmul(a, b, c);
    return c;
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

// rho <- u rho u^dag, using caller-provided scratch of the same dimension
inline void conjugate_inplace(ComplexMatrix& rho, const ComplexMatrix& u, ComplexMatrix& tmp) {
    const int n = rho.dim();
    matmul(u, rho, tmp);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < n; ++k) s += tmp(i, k) * std::conj(u(j, k));
            rho(i, j) = s;
        }
    }
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int na = a.dim(), nb = b.dim();
    ComplexMatrix m(na * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j)
            for (int k = 0; k < nb; ++k)
                for (int l = 0; l < nb; ++l) m(i * nb + k, j * nb + l) = a(i, j) * b(k, l);
    return m;
}

// angular momentum triple (Sx, Sy, Sz) for spin quantum number s;
// Sz is diagonal with eigenvalues s, s-1, ..., -s (descending)
inline std::array<ComplexMatrix, 3> spin_operators(double s) {
    if (s != 0.5 && s != 1.0)
        throw std::invalid_argument("spin_operators: unsupported spin s=" + std::to_string(s));
    const int n = static_cast<int>(std::lround(2.0 * s)) + 1;
    ComplexMatrix sx(n), sy(n), sz(n);
    for (int k = 0; k < n; ++k) {
        const double m = s - k;
        sz(k, k) = m;
        if (k > 0) {
            // raising element <m+1| S+ |m> = sqrt(s(s+1) - m(m+1))
            const double c = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
            sx(k - 1, k) = 0.5 * c;
            sx(k, k - 1) = 0.5 * c;
            sy(k - 1, k) = cplx(0.0, -0.5) * c;
            sy(k, k - 1) = cplx(0.0, 0.5) * c;
        }
    }
    return {sx, sy, sz};
}

struct EigResult {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // unitary, columns match values
};

// cyclic Jacobi for Hermitian matrices; eigenvalues ascending, each
// eigenvector's largest-magnitude component made real positive
inline void eig_hermitian(const ComplexMatrix& h, EigResult& out, double herm_tol = 1e-10) {
    const int n = h.dim();
    const double scale = std::max(1.0, h.max_abs());
    if (!h.is_hermitian(herm_tol * scale))
        throw std::invalid_argument("eig_hermitian: matrix is not Hermitian");

    ComplexMatrix a = h;
    // enforce exact Hermitian symmetry before rotating
    for (int r = 0; r < n; ++r) {
        a(r, r) = a(r, r).real();
        for (int c = r + 1; c < n; ++c) {
            const cplx m = 0.5 * (a(r, c) + std::conj(a(c, r)));
            a(r, c) = m;
            a(c, r) = std::conj(m);
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double stop = 1e-30 * scale * scale;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (off <= stop) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double r = std::abs(a(p, q));
                if (r <= 1e-300) continue;
                const cplx phase = a(p, q) / r;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const cplx s = (t * c) * phase;
                const double sig = t * c;

                const double app = a(p, p).real(), aqq = a(q, q).real();
                a(p, p) = c * c * app - 2.0 * c * sig * r + sig * sig * aqq;
                a(q, q) = sig * sig * app + 2.0 * c * sig * r + c * c * aqq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const cplx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - std::conj(s) * aiq;
                    a(i, q) = s * aip + c * aiq;
                    a(p, i) = std::conj(a(i, p));
                    a(q, i) = std::conj(a(i, q));
                }
                for (int i = 0; i < n; ++i) {
                    const cplx vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - std::conj(s) * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    out.values.resize(n);
    if (out.vectors.dim() != n) out.vectors = ComplexMatrix(n);
    for (int c = 0; c < n; ++c) {
        const int src = order[c];
        out.values[c] = a(src, src).real();
        int imax = 0;
        double vmax = -1.0;
        for (int i = 0; i < n; ++i) {
            const double m = std::abs(v(i, src));
            if (m > vmax) {
                vmax = m;
                imax = i;
            }
        }
        const cplx ph = vmax > 0.0 ? std::conj(v(imax, src)) / vmax : cplx(1.0, 0.0);
        for (int i = 0; i < n; ++i) out.vectors(i, c) = v(i, src) * ph;
    }
}

inline EigResult eig_hermitian(const ComplexMatrix& h, double herm_tol = 1e-10) {
    EigResult r;
    eig_hermitian(h, r, herm_tol);
    return r;
}

// exp(-i h dt) for Hermitian h, via eigendecomposition
inline void exp_unitary(const ComplexMatrix& h, double dt, ComplexMatrix& out, EigResult& work) {
    const int n = h.dim();
    eig_hermitian(h, work);
    if (out.dim() != n) out = ComplexMatrix(n);
    const ComplexMatrix& v = work.vectors;
    std::vector<cplx> ph(n);
    for (int k = 0; k < n; ++k) {
        const double ang = -work.values[k] * dt;
        ph[k] = cplx(std::cos(ang), std::sin(ang));
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < n; ++k) s += v(i, k) * ph[k] * std::conj(v(j, k));
            out(i, j) = s;
        }
    }
}

inline ComplexMatrix exp_unitary(const ComplexMatrix& h, double dt) {
    ComplexMatrix u;
    EigResult w;
    exp_unitary(h, dt, u, w);
    return u;
}

enum class Subsystem { electron, nuclear };

// reduced density matrix of a 6x6 electron(3) x nuclear(2) state
inline ComplexMatrix partial_trace(const ComplexMatrix& rho, Subsystem keep) {
    if (rho.dim() != 6) throw std::invalid_argument("partial_trace: expected 6x6 density matrix");
    constexpr int ne = 3, nn = 2;
    if (keep == Subsystem::electron) {
        ComplexMatrix r(ne);
        for (int i = 0; i < ne; ++i)
            for (int j = 0; j < ne; ++j) {
                cplx s = 0.0;
                for (int k = 0; k < nn; ++k) s += rho(i * nn + k, j * nn + k);
                r(i, j) = s;
            }
        return r;
    }
    ComplexMatrix r(nn);
    for (int k = 0; k < nn; ++k)
        for (int l = 0; l < nn; ++l) {
            cplx s = 0.0;
            for (int i = 0; i < ne; ++i) s += rho(i * nn + k, i * nn + l);
            r(k, l) = s;
        }
    return r;
}

}  // namespace hfgyro
