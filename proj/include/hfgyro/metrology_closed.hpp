#pragma once

// Closed-form gyroscope signals for the two operating regimes.

#include <cmath>

namespace hfgyro {

// slow (adiabatic-following) regime readout along z_NV:
//   S(t) = 1/2 (1 + cos(wt) / sqrt(cos^2(wt) + a0^2 sin^2(wt)))
inline double signal_slow(double omega, double alpha0, double t) {
    const double c = std::cos(omega * t), s = std::sin(omega * t);
    return 0.5 * (1.0 + c / std::sqrt(c * c + alpha0 * alpha0 * s * s));
}

// inertial (fast-rotation) regime: S(t) = (1 + cos(wt))/2
inline double signal_fast(double omega, double t) {
    return 0.5 * (1.0 + std::cos(omega * t));
}

// readout along x_NV in the slow regime:
//   S_x(t) = 1/2 (1 + a0 sin(wt) / sqrt(a0^2 sin^2(wt) + cos^2(wt)))
inline double signal_x(double omega, double alpha0, double t) {
    const double c = std::cos(omega * t), s = std::sin(omega * t);
    return 0.5 * (1.0 + alpha0 * s / std::sqrt(alpha0 * alpha0 * s * s + c * c));
}

// analytic time derivative of signal_x (slope alpha0*w/2 at t=0)
inline double signal_x_slope(double omega, double alpha0, double t) {
    const double c = std::cos(omega * t), s = std::sin(omega * t);
    const double g = alpha0 * alpha0 * s * s + c * c;
    return 0.5 * alpha0 * omega * c / (g * std::sqrt(g));
}

}  // namespace hfgyro
