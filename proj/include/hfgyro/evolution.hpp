#pragma once

// Time propagation for the coupled electron-nuclear system: piecewise-constant
// exact exponentials of the instantaneous Hamiltonian (midpoint-sampled), a
// first-order Lindblad stepper for electron T1 relaxation, and Monte Carlo
// averaging over static Gaussian field offsets.

#include <atomic>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "hfgyro/hamiltonian.hpp"
#include "hfgyro/linalg.hpp"
#include "hfgyro/rng.hpp"

namespace hfgyro {

enum class Frame { lab, nv };

struct SteppingPolicy {
    double dt = 0.0;                     // explicit step, seconds; 0 = derive
    double target_angle_per_step = 0.0;  // alternative: dt = angle/|omega|
};

struct NoiseModel {
    double sigma_Bx = 0.0, sigma_By = 0.0, sigma_Bz = 0.0;  // Gauss
    int samples = 1;
    bool co_rotating = false;  // offsets fixed to the diamond instead of the lab
};

struct Scenario {
    NVParams params;
    FieldSpec field;
    RotationSpec rotation;
    Frame frame = Frame::nv;
    int initial_ms = 0;
    double initial_mi = 0.5;
    std::optional<ComplexMatrix> initial_rho;  // overrides the product state
    double duration = 0.0;
    SteppingPolicy stepping;
    std::optional<double> T1e;
    std::optional<NoiseModel> noise;
    uint64_t seed = 0;
    int decimation = 100;  // store every k-th step
    bool store_rho = true;
};

struct Trajectory {
    Frame frame = Frame::nv;
    double dt = 0.0;
    std::vector<double> times;
    std::vector<double> theta;  // rotation angle at each stored time
    std::vector<double> S_z;    // nuclear population along z_NV
    std::vector<double> S_x;    // nuclear population along x_NV
    std::vector<std::array<double, 3>> nuclear;   // 2<I>, propagation frame
    std::vector<std::array<double, 3>> electron;  // <S>, propagation frame
    std::vector<double> trace_err;
    std::vector<ComplexMatrix> rho;  // decimated, present when store_rho

    size_t size() const { return times.size(); }
};

struct numerical_abort : std::runtime_error {
    explicit numerical_abort(const std::string& what, size_t step_index)
        : std::runtime_error(what + " at step " + std::to_string(step_index)), step(step_index) {}
    size_t step;
};

// ---------------------------------------------------------------------------
// jump operators and the modified Lindblad step

// six electron-flip operators sqrt(G)|ms><ms'| (x) 1_2, G = 1/(3 T1e)
inline std::vector<ComplexMatrix> relaxation_operators(double T1e) {
    if (!(T1e > 0.0)) throw std::invalid_argument("relaxation_operators: T1e must be positive");
    const double g = std::sqrt(1.0 / (3.0 * T1e));
    std::vector<ComplexMatrix> ops;
    ops.reserve(6);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            if (a == b) continue;
            ComplexMatrix l(6);
            l(2 * a, 2 * b) = g;
            l(2 * a + 1, 2 * b + 1) = g;
            ops.push_back(l);
        }
    }
    return ops;
}

namespace detail {

inline double max_jump_rate(const std::vector<ComplexMatrix>& jumps) {
    double r = 0.0;
    for (const ComplexMatrix& l : jumps) {
        for (int j = 0; j < l.dim(); ++j) {
            double col = 0.0;
            for (int i = 0; i < l.dim(); ++i) col += std::norm(l(i, j));
            r = std::max(r, col);
        }
    }
    return r;
}

// dissipator dt * sum_k (L rho L^dag - 1/2 {L^dag L, rho}) added into acc
inline void add_dissipator(const std::vector<ComplexMatrix>& jumps, const ComplexMatrix& gsum,
                           const ComplexMatrix& rho, double dt, ComplexMatrix& acc,
                           ComplexMatrix& t1, ComplexMatrix& t2) {
    const int n = rho.dim();
    for (const ComplexMatrix& l : jumps) {
        matmul(l, rho, t1);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                cplx s = 0.0;
                for (int k = 0; k < n; ++k) s += t1(i, k) * std::conj(l(j, k));
                acc(i, j) += dt * s;
            }
    }
    matmul(gsum, rho, t1);
    matmul(rho, gsum, t2);
    for (int i = 0; i < n * n; ++i) acc.data()[i] -= 0.5 * dt * (t1.data()[i] + t2.data()[i]);
}

}  // namespace detail

// rho(t+dt) = U rho U^dag + dt sum_k (L rho L^dag - 1/2 {L^dag L, rho}),
// U = exp(-i h dt); with an empty jump set this is exactly the unitary
// conjugation (no symmetrization, bit-identical to the closed-system path)
inline ComplexMatrix lindblad_step(const ComplexMatrix& rho, const ComplexMatrix& h,
                                   const std::vector<ComplexMatrix>& jumps, double dt) {
    if (std::abs(rho.trace() - cplx(1.0, 0.0)) > 1e-6)
        throw std::invalid_argument("lindblad_step: input state is not unit trace");
    const double rate = detail::max_jump_rate(jumps);
    if (rate * dt >= 0.01)
        throw std::invalid_argument("lindblad_step: dt*Gamma = " + std::to_string(rate * dt) +
                                    " violates the first-order bound 0.01");

    ComplexMatrix u;
    EigResult w;
    exp_unitary(h, dt, u, w);
    ComplexMatrix out = rho, tmp(rho.dim());
    conjugate_inplace(out, u, tmp);
    if (jumps.empty()) return out;

    ComplexMatrix gsum(rho.dim()), t2(rho.dim());
    for (const ComplexMatrix& l : jumps) {
        for (int i = 0; i < l.dim(); ++i)
            for (int j = 0; j < l.dim(); ++j) {
                cplx s = 0.0;
                for (int k = 0; k < l.dim(); ++k) s += std::conj(l(k, i)) * l(k, j);
                gsum(i, j) += s;
            }
    }
    detail::add_dissipator(jumps, gsum, rho, dt, out, tmp, t2);
    // symmetrize to kill float drift
    for (int i = 0; i < out.dim(); ++i)
        for (int j = i; j < out.dim(); ++j) {
            const cplx m = 0.5 * (out(i, j) + std::conj(out(j, i)));
            out(i, j) = m;
            out(j, i) = std::conj(m);
        }
    return out;
}

// ---------------------------------------------------------------------------
// step-size policy

// default dt = min(rotation period/1000, 1/(50 gn Beff_max), T1e/100);
// Beff_max includes the enhanced transverse scale |alpha0| and noise margins
inline double default_step(const Scenario& s) {
    double dt = s.duration / 1000.0;
    if (s.rotation.omega != 0.0)
        dt = std::min(dt, two_pi / std::abs(s.rotation.omega) / 1000.0);

    double bmax = s.field.B + std::abs(s.field.dB[0]) + std::abs(s.field.dB[1]) +
                  std::abs(s.field.dB[2]);
    if (s.noise) {
        const double sig = std::max({s.noise->sigma_Bx, s.noise->sigma_By, s.noise->sigma_Bz});
        bmax += 3.0 * sig;
    }
    if (bmax > 0.0) {
        double alpha;
        try {
            alpha = std::abs(enhancement_factor(s.params, bmax, 0).value);
        } catch (const std::domain_error&) {
            alpha = s.params.gamma_e / (std::sqrt(2.0) * s.params.gamma_n);
        }
        const double beff = s.params.gamma_n * bmax * std::max(1.0, alpha);
        dt = std::min(dt, 1.0 / (50.0 * beff));
    }
    if (s.T1e) dt = std::min(dt, *s.T1e / 100.0);
    return dt;
}

inline double resolve_step(const Scenario& s) {
    if (s.stepping.dt > 0.0) return s.stepping.dt;
    if (s.stepping.target_angle_per_step > 0.0) {
        if (s.rotation.omega == 0.0)
            throw std::invalid_argument("stepping: target_angle_per_step requires omega != 0");
        return s.stepping.target_angle_per_step / std::abs(s.rotation.omega);
    }
    return default_step(s);
}

// ---------------------------------------------------------------------------
// propagation

namespace detail {

inline ComplexMatrix initial_state(const Scenario& s) {
    if (s.initial_rho) {
        const ComplexMatrix& r = *s.initial_rho;
        if (r.dim() != 6) throw std::invalid_argument("initial rho must be 6x6");
        if (!r.is_hermitian(1e-9) || std::abs(r.trace() - cplx(1.0, 0.0)) > 1e-9)
            throw std::invalid_argument("initial rho must be Hermitian with unit trace");
        return r;
    }
    ComplexMatrix rho(6);
    const int idx = SpinSystem::index_of(s.initial_ms, s.initial_mi);
    rho(idx, idx) = 1.0;
    return rho;
}

inline void record_sample(const Scenario& s, const ComplexMatrix& rho, double t, size_t step,
                          Trajectory& out) {
    const SpinSystem& ss = SpinSystem::get();
    const double theta = s.rotation.angle(t);

    std::array<double, 3> iv{}, sv{};
    for (int k = 0; k < 3; ++k) {
        cplx a = 0.0, b = 0.0;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                a += rho(i, j) * ss.I[k](j, i);
                b += rho(i, j) * ss.S[k](j, i);
            }
        iv[k] = a.real();
        sv[k] = b.real();
    }

    // signal axes follow the diamond; in the lab frame they are co-rotated
    double sz, sx;
    if (s.frame == Frame::nv) {
        sz = 0.5 + iv[2];
        sx = 0.5 + iv[0];
    } else {
        const double c = std::cos(theta), si = std::sin(theta);
        sz = 0.5 + (si * iv[0] + c * iv[2]);
        sx = 0.5 + (c * iv[0] - si * iv[2]);
    }

    const double terr = std::abs(rho.trace() - cplx(1.0, 0.0));
    if (terr > 1e-8) throw numerical_abort("trace error " + std::to_string(terr), step);
    if (s.T1e) {
        const auto er = eig_hermitian(rho, 1e-6);
        if (er.values.front() < -1e-8)
            throw numerical_abort("negative eigenvalue " + std::to_string(er.values.front()),
                                  step);
    }

    out.times.push_back(t);
    out.theta.push_back(theta);
    out.S_z.push_back(sz);
    out.S_x.push_back(sx);
    out.nuclear.push_back({2.0 * iv[0], 2.0 * iv[1], 2.0 * iv[2]});
    out.electron.push_back(sv);
    out.trace_err.push_back(terr);
    if (s.store_rho) out.rho.push_back(rho);
}

}  // namespace detail

inline Trajectory propagate(const Scenario& s) {
    if (!(s.duration > 0.0)) throw std::invalid_argument("scenario: duration must be positive");
    if (s.field.B < 0.0) throw std::invalid_argument("scenario: B must be non-negative");

    const double dt = resolve_step(s);
    if (!(dt > 0.0) || s.duration < dt)
        throw std::invalid_argument("scenario: need 0 < dt <= duration");
    if (s.T1e) {
        if (dt > *s.T1e / 100.0)
            throw std::invalid_argument("scenario: dt must not exceed T1e/100");
        const double gdt = dt / (3.0 * *s.T1e);
        if (gdt >= 0.01)
            throw std::invalid_argument("scenario: dt*Gamma violates the first-order bound");
    }

    const size_t nsteps = static_cast<size_t>(std::llround(s.duration / dt));
    const int stride = std::max(1, s.decimation);

    std::vector<ComplexMatrix> jumps;
    ComplexMatrix gsum(6);
    if (s.T1e) {
        jumps = relaxation_operators(*s.T1e);
        for (const ComplexMatrix& l : jumps)
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j) {
                    cplx acc = 0.0;
                    for (int k = 0; k < 6; ++k) acc += std::conj(l(k, i)) * l(k, j);
                    gsum(i, j) += acc;
                }
    }

    Trajectory out;
    out.frame = s.frame;
    out.dt = dt;
    const size_t cap = nsteps / stride + 2;
    out.times.reserve(cap);

    ComplexMatrix rho = detail::initial_state(s);
    ComplexMatrix h(6), u(6), t1(6), t2(6), dis(6);
    EigResult work;

    detail::record_sample(s, rho, 0.0, 0, out);
    for (size_t k = 0; k < nsteps; ++k) {
        const double tmid = (static_cast<double>(k) + 0.5) * dt;
        const bool corot = s.noise ? s.noise->co_rotating : false;
        if (s.frame == Frame::nv)
            nv_frame_hamiltonian(s.params, s.field, s.rotation.omega, tmid, h, corot);
        else
            lab_frame_hamiltonian(s.params, s.field, s.rotation.angle(tmid), h, corot);

        exp_unitary(h, dt, u, work);
        if (jumps.empty()) {
            conjugate_inplace(rho, u, t1);
        } else {
            for (int i = 0; i < 36; ++i) dis.data()[i] = 0.0;
            detail::add_dissipator(jumps, gsum, rho, dt, dis, t1, t2);
            conjugate_inplace(rho, u, t1);
            rho += dis;
            for (int i = 0; i < 6; ++i)
                for (int j = i; j < 6; ++j) {
                    const cplx m = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
                    rho(i, j) = m;
                    rho(j, i) = std::conj(m);
                }
        }

        if ((k + 1) % static_cast<size_t>(stride) == 0 || k + 1 == nsteps)
            detail::record_sample(s, rho, (static_cast<double>(k) + 1.0) * dt, k + 1, out);
    }
    return out;
}

// ---------------------------------------------------------------------------
// ensemble averaging over static Gaussian field offsets

inline Trajectory ensemble_average(const Scenario& s) {
    if (!s.noise) return propagate(s);
    const NoiseModel& nm = *s.noise;
    if (nm.samples < 1) throw std::invalid_argument("noise: samples must be >= 1");
    if (nm.sigma_Bx == 0.0 && nm.sigma_By == 0.0 && nm.sigma_Bz == 0.0) return propagate(s);

    auto sample_scenario = [&](int idx) {
        Scenario si = s;
        SplitMix64 rng(sample_seed(s.seed, static_cast<uint64_t>(idx)));
        si.field.dB[0] += nm.sigma_Bx * rng.gaussian();
        si.field.dB[1] += nm.sigma_By * rng.gaussian();
        si.field.dB[2] += nm.sigma_Bz * rng.gaussian();
        return si;
    };

    Trajectory avg;
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int block = static_cast<int>(std::min<unsigned>(hw * 4, 16));

    for (int base = 0; base < nm.samples; base += block) {
        const int count = std::min(block, nm.samples - base);
        std::vector<Trajectory> partial(count);
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        const unsigned nthreads = std::min<unsigned>(hw, count);
        std::vector<std::exception_ptr> errors(nthreads);
        for (unsigned w = 0; w < nthreads; ++w) {
            pool.emplace_back([&, w]() {
                try {
                    int i;
                    while ((i = next.fetch_add(1)) < count)
                        partial[i] = propagate(sample_scenario(base + i));
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);

        // reduce in sample-index order for deterministic rounding
        for (int i = 0; i < count; ++i) {
            Trajectory& tr = partial[i];
            if (avg.times.empty()) {
                avg = std::move(tr);
                continue;
            }
            if (tr.size() != avg.size())
                throw std::runtime_error("ensemble_average: inconsistent sample lengths");
            for (size_t k = 0; k < avg.size(); ++k) {
                avg.S_z[k] += tr.S_z[k];
                avg.S_x[k] += tr.S_x[k];
                avg.trace_err[k] += tr.trace_err[k];
                for (int c = 0; c < 3; ++c) {
                    avg.nuclear[k][c] += tr.nuclear[k][c];
                    avg.electron[k][c] += tr.electron[k][c];
                }
                if (!avg.rho.empty()) avg.rho[k] += tr.rho[k];
            }
        }
    }

    const double inv = 1.0 / static_cast<double>(nm.samples);
    for (size_t k = 0; k < avg.size(); ++k) {
        avg.S_z[k] *= inv;
        avg.S_x[k] *= inv;
        avg.trace_err[k] *= inv;
        for (int c = 0; c < 3; ++c) {
            avg.nuclear[k][c] *= inv;
            avg.electron[k][c] *= inv;
        }
        if (!avg.rho.empty()) {
            avg.rho[k] *= inv;
            avg.trace_err[k] = std::abs(avg.rho[k].trace() - cplx(1.0, 0.0));
        }
    }
    return avg;
}

// ---------------------------------------------------------------------------
// signal extraction from a stored trajectory

enum class SignalAxis { z_nv, x_nv };

// S = Tr[rho_n P], P the projector onto m_I = +1/2 along the requested
// NV-frame axis; in the lab frame the axis is co-rotated by R_y(theta)
inline std::vector<double> measure_signal(const Trajectory& traj, SignalAxis axis) {
    if (traj.rho.empty())
        throw std::invalid_argument("measure_signal: trajectory has no stored density matrices");
    const auto in = spin_operators(0.5);
    std::vector<double> out;
    out.reserve(traj.size());
    for (size_t k = 0; k < traj.size(); ++k) {
        const ComplexMatrix rn = partial_trace(traj.rho[k], Subsystem::nuclear);
        std::array<double, 3> axis_nv = axis == SignalAxis::z_nv ? std::array<double, 3>{0, 0, 1}
                                                                 : std::array<double, 3>{1, 0, 0};
        std::array<double, 3> n = axis_nv;
        if (traj.frame == Frame::lab) n = rotation_y(traj.theta[k]) * axis_nv;
        ComplexMatrix proj = 0.5 * ComplexMatrix::identity(2);
        proj += n[0] * in[0] + n[1] * in[1] + n[2] * in[2];
        out.push_back((rn * proj).trace().real());
    }
    return out;
}

}  // namespace hfgyro
