#pragma once

// NV ground-state Hamiltonian construction in the lab frame (rotating
// zero-field-splitting and hyperfine tensors, static field) and in the NV
// frame (static tensors, counter-rotating field plus -w*Jy inertial term),
// together with the zero-quantum mixing angles, the hyperfine enhancement
// factor of the nuclear transverse Zeeman coupling, and the effective 2x2
// nuclear Hamiltonian.
//
// Unit convention: every frequency-like quantity is angular (rad/s);
// gyromagnetic ratios are rad/s per Gauss; fields are Gauss.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hfgyro/linalg.hpp"

namespace hfgyro {

struct NVParams {
    double D = two_pi * 2.87e9;        // zero-field splitting
    double A_zz = two_pi * 3.03e6;     // longitudinal hyperfine
    double A_perp = two_pi * 3.65e6;   // transverse hyperfine
    double gamma_e = two_pi * 2.802e6; // electron gyromagnetic ratio, rad/s/G
    double gamma_n = two_pi * 432.0;   // 15N nuclear gyromagnetic ratio, rad/s/G

    double kappa() const { return gamma_e * A_perp / (gamma_n * D); }
};

// one-axis rotation about the lab y axis, angle(t) = omega * t
struct RotationSpec {
    double omega = 0.0;  // rad/s, signed
    double angle(double t) const { return omega * t; }
};

struct FieldSpec {
    double B = 0.0;                      // static bias along lab z, Gauss
    std::array<double, 3> dB{0.0, 0.0, 0.0};  // static offset sample, Gauss
};

// ---------------------------------------------------------------------------
// 3x3 real matrices for tensor rotations

struct Mat3 {
    double m[3][3]{};

    static Mat3 identity() {
        Mat3 r;
        r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
        return r;
    }
    static Mat3 diag(double x, double y, double z) {
        Mat3 r;
        r.m[0][0] = x;
        r.m[1][1] = y;
        r.m[2][2] = z;
        return r;
    }

    Mat3 transpose() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
        return r;
    }

    friend Mat3 operator*(const Mat3& a, const Mat3& b) {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += a.m[i][k] * b.m[k][j];
                r.m[i][j] = s;
            }
        return r;
    }

    std::array<double, 3> operator*(const std::array<double, 3>& v) const {
        std::array<double, 3> r{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r[i] += m[i][j] * v[j];
        return r;
    }

    bool is_orthogonal(double tol = 1e-10) const {
        const Mat3 g = transpose() * (*this);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (std::abs(g.m[i][j] - (i == j ? 1.0 : 0.0)) > tol) return false;
        return true;
    }

    double det() const {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    }
};

inline Mat3 rotation_z(double a) {
    Mat3 r = Mat3::identity();
    r.m[0][0] = std::cos(a);
    r.m[0][1] = -std::sin(a);
    r.m[1][0] = std::sin(a);
    r.m[1][1] = std::cos(a);
    return r;
}

inline Mat3 rotation_y(double b) {
    Mat3 r = Mat3::identity();
    r.m[0][0] = std::cos(b);
    r.m[0][2] = std::sin(b);
    r.m[2][0] = -std::sin(b);
    r.m[2][2] = std::cos(b);
    return r;
}

// R(alpha, beta, gamma) = Rz(gamma) Ry(beta) Rz(alpha)
inline Mat3 euler_rotation_matrix(double alpha, double beta, double gamma) {
    return rotation_z(gamma) * rotation_y(beta) * rotation_z(alpha);
}

// congruence transform R T R^T
inline Mat3 rotate_tensor(const Mat3& t, const Mat3& r) {
    if (!r.is_orthogonal())
        throw std::invalid_argument("rotate_tensor: rotation matrix is not orthogonal");
    return r * t * r.transpose();
}

// ---------------------------------------------------------------------------
// cached 6x6 operator set for the electron(spin-1) x nuclear(spin-1/2) system

class SpinSystem {
public:
    static constexpr int electron_dim = 3;
    static constexpr int nuclear_dim = 2;
    static constexpr int total_dim = 6;

    SpinSystem() {
        const auto se = spin_operators(1.0);
        const auto in = spin_operators(0.5);
        const auto id3 = ComplexMatrix::identity(3);
        const auto id2 = ComplexMatrix::identity(2);
        identity = ComplexMatrix::identity(6);
        for (int k = 0; k < 3; ++k) {
            S[k] = kron(se[k], id2);
            I[k] = kron(id3, in[k]);
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                SS[i][j] = S[i] * S[j];
                SI[i][j] = kron(se[i], in[j]);
            }
    }

    static const SpinSystem& get() {
        static const SpinSystem s;
        return s;
    }

    // basis index of the product state |ms, mI>, ms in {+1,0,-1}, mI in {+1/2,-1/2}
    static int index_of(int ms, double mi) {
        const int e = 1 - ms;
        const int n = mi > 0.0 ? 0 : 1;
        return e * 2 + n;
    }

    ComplexMatrix S[3], I[3];      // embedded electron / nuclear operators
    ComplexMatrix SS[3][3];        // S_i S_j products
    ComplexMatrix SI[3][3];        // S_i (x) I_j
    ComplexMatrix identity;
};

// ---------------------------------------------------------------------------
// Hamiltonians

namespace detail {

inline void accumulate(ComplexMatrix& h, double c, const ComplexMatrix& op) {
    if (c == 0.0) return;
    const int n = h.dim();
    const cplx* s = op.data();
    cplx* d = h.data();
    for (int i = 0; i < n * n; ++i) d[i] += c * s[i];
}

}  // namespace detail

// H(theta) = S.D(theta).S + S.A(theta).I + gamma_e B.S + gamma_n B.I with
// D(theta) = R D' R^T, A(theta) = R A' R^T, R = Ry(theta); field static
// along lab z plus dB offset. co_rotating_noise rotates dB with the diamond.
inline void lab_frame_hamiltonian(const NVParams& p, const FieldSpec& f, double theta,
                                  ComplexMatrix& h, bool co_rotating_noise = false) {
    const SpinSystem& ss = SpinSystem::get();
    if (h.dim() != 6) h = ComplexMatrix(6);
    for (int i = 0; i < 36; ++i) h.data()[i] = 0.0;

    const Mat3 r = rotation_y(theta);
    const Mat3 dlab = r * Mat3::diag(0.0, 0.0, p.D) * r.transpose();
    const Mat3 alab = r * Mat3::diag(p.A_perp, p.A_perp, p.A_zz) * r.transpose();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            detail::accumulate(h, dlab.m[i][j], ss.SS[i][j]);
            detail::accumulate(h, alab.m[i][j], ss.SI[i][j]);
        }

    std::array<double, 3> b{f.dB[0], f.dB[1], f.dB[2]};
    if (co_rotating_noise) b = r * b;
    b[2] += f.B;
    for (int k = 0; k < 3; ++k) {
        detail::accumulate(h, p.gamma_e * b[k], ss.S[k]);
        detail::accumulate(h, p.gamma_n * b[k], ss.I[k]);
    }
}

inline ComplexMatrix lab_frame_hamiltonian(const NVParams& p, const FieldSpec& f, double theta,
                                           bool co_rotating_noise = false) {
    ComplexMatrix h(6);
    lab_frame_hamiltonian(p, f, theta, h, co_rotating_noise);
    return h;
}

// NV-frame Hamiltonian: static tensors, counter-rotating field, inertial
// -w(Sy+Iy). A lab-static dB counter-rotates with the field; a co-rotating
// dB is constant in this frame.
inline void nv_frame_hamiltonian(const NVParams& p, const FieldSpec& f, double omega, double t,
                                 ComplexMatrix& h, bool co_rotating_noise = false) {
    const SpinSystem& ss = SpinSystem::get();
    if (h.dim() != 6) h = ComplexMatrix(6);
    for (int i = 0; i < 36; ++i) h.data()[i] = 0.0;

    detail::accumulate(h, p.D, ss.SS[2][2]);
    detail::accumulate(h, p.A_zz, ss.SI[2][2]);
    detail::accumulate(h, p.A_perp, ss.SI[0][0]);
    detail::accumulate(h, p.A_perp, ss.SI[1][1]);

    const double theta = omega * t;
    std::array<double, 3> b{0.0, 0.0, f.B};
    if (co_rotating_noise) {
        // dB fixed to the diamond: add after counter-rotating the bias
        b = rotation_y(-theta) * b;
        for (int k = 0; k < 3; ++k) b[k] += f.dB[k];
    } else {
        for (int k = 0; k < 3; ++k) b[k] += f.dB[k];
        b = rotation_y(-theta) * b;
    }
    for (int k = 0; k < 3; ++k) {
        detail::accumulate(h, p.gamma_e * b[k], ss.S[k]);
        detail::accumulate(h, p.gamma_n * b[k], ss.I[k]);
    }

    detail::accumulate(h, -omega, ss.S[1]);
    detail::accumulate(h, -omega, ss.I[1]);
}

inline ComplexMatrix nv_frame_hamiltonian(const NVParams& p, const FieldSpec& f, double omega,
                                          double t, bool co_rotating_noise = false) {
    ComplexMatrix h(6);
    nv_frame_hamiltonian(p, f, omega, t, h, co_rotating_noise);
    return h;
}

// ---------------------------------------------------------------------------
// zero-quantum mixing angles and enhancement factor

struct ZQAngles {
    double theta_plus;
    double theta_minus;
};

// tan(2 theta+) =  2 A_perp / (D + ge Bz - gn Bz - Azz/2)
// tan(2 theta-) = -2 A_perp / (D - ge Bz + gn Bz - Azz/2)
inline ZQAngles zq_mixing_angles(const NVParams& p, double Bz) {
    const double dplus = p.D + p.gamma_e * Bz - p.gamma_n * Bz - 0.5 * p.A_zz;
    const double dminus = p.D - p.gamma_e * Bz + p.gamma_n * Bz - 0.5 * p.A_zz;
    const double cut = 1e-6 * p.D;
    if (std::abs(dplus) < cut || std::abs(dminus) < cut)
        throw std::domain_error("zq_mixing_angles: Bz too close to a level anti-crossing pole, "
                                "denominator " +
                                std::to_string(std::min(std::abs(dplus), std::abs(dminus))) +
                                " rad/s");
    return {0.5 * std::atan(2.0 * p.A_perp / dplus), 0.5 * std::atan(-2.0 * p.A_perp / dminus)};
}

struct Enhancement {
    double value;       // signed; negative below the anti-crossing for ms=0
    bool approximate;   // true for the ms=+-1 small-field form
};

// ms=0: alpha0 = cos(t+)cos(t-) - (ge/gn) sin(t+ - t-), exact closed form.
// ms=+-1: small-field constant 1 - 2k + 3k = 1 + k, flagged approximate.
inline Enhancement enhancement_factor(const NVParams& p, double Bz, int ms = 0) {
    if (ms == 0) {
        const ZQAngles a = zq_mixing_angles(p, Bz);
        const double v = std::cos(a.theta_plus) * std::cos(a.theta_minus) -
                         (p.gamma_e / p.gamma_n) * std::sin(a.theta_plus - a.theta_minus);
        return {v, false};
    }
    if (ms == 1 || ms == -1) return {1.0 + p.kappa(), true};
    throw std::invalid_argument("enhancement_factor: ms must be in {-1,0,+1}");
}

// effective 2x2 nuclear Hamiltonian for electron level ms:
//   H = gn (Bz(t) Iz + alpha_ms Bx(t) Ix) + Azz ms Iz - w Iy
// (Bx, Bz) is the field at t=0 in the NV frame; under rotation it evolves as
// Bz(t) = B cos(wt+phi0), Bx(t) = -B sin(wt+phi0). alpha is evaluated at the
// (constant) magnitude.
inline ComplexMatrix effective_nuclear_hamiltonian(const NVParams& p, int ms, double Bx, double Bz,
                                                   double omega = 0.0, double t = 0.0) {
    const double Bmag = std::hypot(Bx, Bz);
    const double alpha = Bmag > 0.0 ? enhancement_factor(p, Bmag, ms).value : 1.0;
    double bx = Bx, bz = Bz;
    if (omega != 0.0 || t != 0.0) {
        const double phi0 = std::atan2(-Bx, Bz);
        bz = Bmag * std::cos(omega * t + phi0);
        bx = -Bmag * std::sin(omega * t + phi0);
    }
    ComplexMatrix h(2);
    const double hz = 0.5 * (p.gamma_n * bz + p.A_zz * ms);
    const double hx = 0.5 * p.gamma_n * alpha * bx;
    h(0, 0) = hz;
    h(1, 1) = -hz;
    h(0, 1) = cplx(hx, -0.5 * (-omega));
    h(1, 0) = cplx(hx, -0.5 * omega);
    return h;
}

}  // namespace hfgyro
