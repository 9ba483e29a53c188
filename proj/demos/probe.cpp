// scratch experiments: stepper throughput and regime checks
#include <chrono>
#include <cstdio>
#include <cstring>

#include "hfgyro/evolution.hpp"
#include "hfgyro/metrology_closed.hpp"

using namespace hfgyro;

static double mean_abs_windowed_dev(const Trajectory& tr, double alpha0, double omega,
                                    double window) {
    // windowed means of (S_sim - closed form), then mean of |window means|
    double devsum = 0.0;
    int nwin = 0;
    size_t k = 0;
    while (k < tr.size()) {
        double acc = 0.0;
        int cnt = 0;
        const double t0 = tr.times[k];
        while (k < tr.size() && tr.times[k] < t0 + window) {
            acc += tr.S_z[k] - signal_slow(omega, alpha0, tr.times[k]);
            ++cnt;
            ++k;
        }
        if (cnt > 0) {
            devsum += std::abs(acc / cnt);
            ++nwin;
        }
    }
    return nwin ? devsum / nwin : 0.0;
}

int main(int argc, char** argv) {
    const NVParams p;
    const char* mode = argc > 1 ? argv[1] : "speed";

    if (!std::strcmp(mode, "speed")) {
        Scenario s;
        s.field.B = 50.0;
        s.rotation.omega = two_pi * 100.0;
        s.duration = 2e-4;
        s.stepping.dt = 1e-8;
        s.decimation = 100;
        s.store_rho = false;
        const auto t0 = std::chrono::steady_clock::now();
        Trajectory tr = propagate(s);
        const auto t1 = std::chrono::steady_clock::now();
        const double secs = std::chrono::duration<double>(t1 - t0).count();
        std::printf("unitary: %zu steps in %.3f s -> %.0f ns/step\n", (size_t)2e4, secs,
                    secs / 2e4 * 1e9);

        s.T1e = 5e-3;
        const auto t2 = std::chrono::steady_clock::now();
        tr = propagate(s);
        const auto t3 = std::chrono::steady_clock::now();
        const double secs2 = std::chrono::duration<double>(t3 - t2).count();
        std::printf("lindblad: %zu steps in %.3f s -> %.0f ns/step\n", (size_t)2e4, secs2,
                    secs2 / 2e4 * 1e9);
    } else if (!std::strcmp(mode, "fig1b")) {
        // slow regime: deviation from the adiabatic closed form vs dt
        for (double dt : {2e-8, 1e-8}) {
            Scenario s;
            s.field.B = 50.0;
            s.rotation.omega = two_pi * 100.0;
            s.duration = 10e-3;
            s.stepping.dt = dt;
            s.decimation = 10;
            s.store_rho = false;
            s.frame = Frame::nv;
            const double a0 = enhancement_factor(p, 50.0, 0).value;
            Trajectory tr = propagate(s);
            const double dev = mean_abs_windowed_dev(tr, a0, s.rotation.omega, 2.5e-4);
            double worst = 0.0;
            for (size_t k = 0; k < tr.size(); ++k)
                worst = std::max(worst,
                                 std::abs(tr.S_z[k] - signal_slow(s.rotation.omega, a0,
                                                                  tr.times[k])));
            std::printf("dt=%.1e windowed=%.3e worst=%.3e\n", dt, dev, worst);
        }
    } else if (!std::strcmp(mode, "fig1c")) {
        // fast regime at 1 MHz: RMS against (1+cos)/2 over 10 periods
        for (double dt : {2e-9, 1e-9, 5e-10}) {
            Scenario s;
            s.field.B = 50.0;
            s.rotation.omega = two_pi * 1e6;
            s.duration = 10e-6;
            s.stepping.dt = dt;
            s.decimation = 5;
            s.store_rho = false;
            Trajectory tr = propagate(s);
            double acc = 0.0;
            for (size_t k = 0; k < tr.size(); ++k) {
                const double d = tr.S_z[k] - signal_fast(s.rotation.omega, tr.times[k]);
                acc += d * d;
            }
            std::printf("dt=%.1e rms=%.4f\n", dt, std::sqrt(acc / tr.size()));
        }
    } else if (!std::strcmp(mode, "frames")) {
        // lab vs NV discretization agreement vs dt
        for (double dt : {4e-8, 2e-8, 1e-8, 5e-9}) {
            Scenario s;
            s.field.B = 50.0;
            s.rotation.omega = two_pi * 100.0;
            s.duration = 1.0e-3;
            s.stepping.dt = dt;
            s.decimation = 20;
            s.store_rho = false;
            s.frame = Frame::nv;
            Trajectory a = propagate(s);
            s.frame = Frame::lab;
            Trajectory b = propagate(s);
            double acc = 0.0;
            for (size_t k = 0; k < a.size(); ++k) {
                const double d = a.S_z[k] - b.S_z[k];
                acc += d * d;
            }
            std::printf("dt=%.1e rms_dS=%.3e\n", dt, std::sqrt(acc / a.size()));
        }
    } else if (!std::strcmp(mode, "adiab")) {
        // mean deviation vs rotation rate around the adiabatic threshold
        const double a0 = enhancement_factor(p, 50.0, 0).value;
        const double gnB = p.gamma_n * 50.0;
        for (double f : {1e3, 2e3, 4e3, 8.25e3, 16.5e3, 82.5e3}) {
            Scenario s;
            s.field.B = 50.0;
            s.rotation.omega = two_pi * f;
            s.duration = two_pi / s.rotation.omega;  // one rotation period
            s.stepping.dt = std::min(1e-8, two_pi / s.rotation.omega / 2000.0);
            s.decimation = 5;
            s.store_rho = false;
            Trajectory tr = propagate(s);
            const double dev = mean_abs_windowed_dev(tr, a0, s.rotation.omega,
                                                     s.duration / 64.0);
            std::printf("f=%.3g kHz x=%.3f dev=%.4f\n", f / 1e3, s.rotation.omega / gnB, dev);
        }
    }
    return 0;
}
