#include <catch2/catch_amalgamated.hpp>

#include "hfgyro/linalg.hpp"
#include "hfgyro/rng.hpp"

using namespace hfgyro;

namespace {

ComplexMatrix random_hermitian(int n, uint64_t seed) {
    SplitMix64 rng(seed);
    ComplexMatrix h(n);
    for (int i = 0; i < n; ++i) {
        h(i, i) = 2.0 * rng.uniform() - 1.0;
        for (int j = i + 1; j < n; ++j) {
            const cplx v(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
            h(i, j) = v;
            h(j, i) = std::conj(v);
        }
    }
    return h;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double m = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

}  // namespace

TEST_CASE("spin operators: spin-1/2 basics") {
    auto [sx, sy, sz] = spin_operators(0.5);
    CHECK(sz(0, 0) == cplx(0.5, 0.0));
    CHECK(sz(1, 1) == cplx(-0.5, 0.0));
    CHECK(sx(0, 1) == cplx(0.5, 0.0));
    CHECK(sy(0, 1) == cplx(0.0, -0.5));
    for (const auto& m : {sx, sy, sz}) CHECK(m.is_hermitian(1e-15));
}

TEST_CASE("spin operators: spin-1 basics and su(2) algebra") {
    auto [sx, sy, sz] = spin_operators(1.0);
    CHECK(sz(0, 0) == cplx(1.0, 0.0));
    CHECK(sz(1, 1) == cplx(0.0, 0.0));
    CHECK(sz(2, 2) == cplx(-1.0, 0.0));

    // [Sx,Sy] = i Sz and cyclic, exactly (entries are closed-form)
    auto comm_err = [](const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c) {
        return max_abs_diff(commutator(a, b), cplx(0.0, 1.0) * c);
    };
    CHECK(comm_err(sx, sy, sz) < 1e-15);
    CHECK(comm_err(sy, sz, sx) < 1e-15);
    CHECK(comm_err(sz, sx, sy) < 1e-15);
}

TEST_CASE("spin operators: unsupported spin rejected") {
    CHECK_THROWS_AS(spin_operators(1.5), std::invalid_argument);
}

TEST_CASE("kron: identity and commuting embeddings") {
    const auto id3 = ComplexMatrix::identity(3);
    const auto id2 = ComplexMatrix::identity(2);
    CHECK(max_abs_diff(kron(id3, id2), ComplexMatrix::identity(6)) == 0.0);

    auto s1 = spin_operators(1.0);
    auto s12 = spin_operators(0.5);
    const auto sz_e = kron(s1[2], id2);
    const auto iz_n = kron(id3, s12[2]);
    CHECK(max_abs_diff(commutator(sz_e, iz_n), ComplexMatrix::zero(6)) == 0.0);
}

TEST_CASE("kron: S+ x I- entries against handwritten 6x6") {
    auto s1 = spin_operators(1.0);
    auto s12 = spin_operators(0.5);
    const ComplexMatrix sp = s1[0] + cplx(0.0, 1.0) * s1[1];
    const ComplexMatrix im = s12[0] - cplx(0.0, 1.0) * s12[1];
    const ComplexMatrix k = kron(sp, im);

    // S+ (spin-1, basis +1,0,-1): <+1|S+|0> = <0|S+|-1> = sqrt(2)
    // I- (spin-1/2, basis +1/2,-1/2): <-1/2|I-|+1/2> = 1
    ComplexMatrix expect(6);
    const double r2 = std::sqrt(2.0);
    expect(0 * 2 + 1, 1 * 2 + 0) = r2;  // |+1,-1/2><0,+1/2|
    expect(1 * 2 + 1, 2 * 2 + 0) = r2;  // |0,-1/2><-1,+1/2|
    CHECK(max_abs_diff(k, expect) < 1e-15);
}

TEST_CASE("eig_hermitian: diagonal and known spectra") {
    ComplexMatrix d(3);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    d(2, 2) = 2.0;
    auto r = eig_hermitian(d);
    CHECK(r.values[0] == Catch::Approx(1.0));
    CHECK(r.values[1] == Catch::Approx(2.0));
    CHECK(r.values[2] == Catch::Approx(3.0));

    auto s1 = spin_operators(1.0);
    auto rx = eig_hermitian(s1[0]);
    CHECK(rx.values[0] == Catch::Approx(-1.0).margin(1e-13));
    CHECK(rx.values[1] == Catch::Approx(0.0).margin(1e-13));
    CHECK(rx.values[2] == Catch::Approx(1.0).margin(1e-13));
}

TEST_CASE("eig_hermitian: reconstruction and unitarity on random 6x6") {
    for (uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        const ComplexMatrix h = random_hermitian(6, seed);
        auto r = eig_hermitian(h);
        CHECK(r.vectors.is_unitary(1e-12));
        ComplexMatrix rec(6);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                cplx s = 0.0;
                for (int k = 0; k < 6; ++k)
                    s += r.vectors(i, k) * r.values[k] * std::conj(r.vectors(j, k));
                rec(i, j) = s;
            }
        CHECK(max_abs_diff(rec, h) < 1e-12);
        for (int k = 1; k < 6; ++k) CHECK(r.values[k] >= r.values[k - 1]);
    }
}

TEST_CASE("eig_hermitian: deterministic phase convention") {
    const ComplexMatrix h = random_hermitian(6, 77);
    auto r1 = eig_hermitian(h);
    auto r2 = eig_hermitian(h);
    CHECK(max_abs_diff(r1.vectors, r2.vectors) == 0.0);
    for (int c = 0; c < 6; ++c) {
        int imax = 0;
        double vmax = -1.0;
        for (int i = 0; i < 6; ++i)
            if (std::abs(r1.vectors(i, c)) > vmax) {
                vmax = std::abs(r1.vectors(i, c));
                imax = i;
            }
        CHECK(r1.vectors(imax, c).imag() == Catch::Approx(0.0).margin(1e-14));
        CHECK(r1.vectors(imax, c).real() > 0.0);
    }
}

TEST_CASE("eig_hermitian: non-Hermitian input rejected") {
    ComplexMatrix m(2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(eig_hermitian(m), std::invalid_argument);
}

TEST_CASE("exp_unitary: identity at h=0 and phase rotation") {
    CHECK(max_abs_diff(exp_unitary(ComplexMatrix::zero(4), 1.0), ComplexMatrix::identity(4)) <
          1e-14);

    // h = omega*Sz (spin-1/2), dt = pi/omega -> diag(e^{-i pi/2}, e^{+i pi/2})
    const double omega = 3.7;
    auto s12 = spin_operators(0.5);
    const ComplexMatrix u = exp_unitary(omega * s12[2], two_pi / 2.0 / omega);
    CHECK(std::abs(u(0, 0) - cplx(0.0, -1.0)) < 1e-13);
    CHECK(std::abs(u(1, 1) - cplx(0.0, 1.0)) < 1e-13);
    CHECK(std::abs(u(0, 1)) < 1e-14);
}

TEST_CASE("exp_unitary: unitarity and group property") {
    const ComplexMatrix h = random_hermitian(6, 11);
    const double dt = 0.37;
    const ComplexMatrix u = exp_unitary(h, dt);
    CHECK(u.is_unitary(1e-12));
    const ComplexMatrix uh = exp_unitary(h, dt / 2.0);
    CHECK(max_abs_diff(uh * uh, u) < 1e-10);
}

TEST_CASE("partial trace: product, mixed and entangled states") {
    auto s12 = spin_operators(0.5);
    // rho_e: spin-1 pure |0> state; rho_n: tilted nuclear state
    ComplexMatrix rho_e(3);
    rho_e(1, 1) = 1.0;
    ComplexMatrix rho_n(2);
    rho_n(0, 0) = 0.7;
    rho_n(0, 1) = cplx(0.2, 0.1);
    rho_n(1, 0) = cplx(0.2, -0.1);
    rho_n(1, 1) = 0.3;

    const ComplexMatrix rho = kron(rho_e, rho_n);
    CHECK(max_abs_diff(partial_trace(rho, Subsystem::nuclear), rho_n) < 1e-15);
    CHECK(max_abs_diff(partial_trace(rho, Subsystem::electron), rho_e) < 1e-15);

    const ComplexMatrix mixed = (1.0 / 6.0) * ComplexMatrix::identity(6);
    const ComplexMatrix re = partial_trace(mixed, Subsystem::electron);
    CHECK(max_abs_diff(re, (1.0 / 3.0) * ComplexMatrix::identity(3)) < 1e-15);

    // Bell-like state (|0,+1/2> + |-1,-1/2>)/sqrt(2): reduced purity 1/2
    ComplexMatrix bell(6);
    const int a = 1 * 2 + 0, b = 2 * 2 + 1;
    bell(a, a) = 0.5;
    bell(a, b) = 0.5;
    bell(b, a) = 0.5;
    bell(b, b) = 0.5;
    const ComplexMatrix rn = partial_trace(bell, Subsystem::nuclear);
    const cplx purity = (rn * rn).trace();
    CHECK(purity.real() == Catch::Approx(0.5).margin(1e-14));
    CHECK(std::abs(rn.trace() - cplx(1.0, 0.0)) < 1e-14);
}

TEST_CASE("partial trace: wrong dimension rejected") {
    CHECK_THROWS_AS(partial_trace(ComplexMatrix::identity(4), Subsystem::electron),
                    std::invalid_argument);
}
