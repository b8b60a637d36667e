// ode.hpp — Embedded Dormand-Prince 5(4) stepper over Eigen dense states

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spintrans::ode {

struct Options {
    double abs_tol{1e-9};
    double rel_tol{1e-9};
};

// Max-norm error scaled by abs_tol + rel_tol * magnitude.
template <class State>
double scaled_error(const State& err, const State& y0, const State& y1, const Options& opt) {
    return (err.array().abs() /
            (opt.abs_tol + opt.rel_tol * y0.array().abs().max(y1.array().abs())))
        .maxCoeff();
}

// Advances y from t0 to t1 with adaptive steps; h is carried across calls. Calls
// on_accept(y, t) after every accepted step. When the controller underflows the
// minimal representable step, the step is taken anyway with the fourth-order
// solution of the pair (fixed-step fallback).
template <class State, class Rhs, class OnAccept>
void advance(Rhs&& rhs, State& y, double t0, double t1, double& h, const Options& opt,
             OnAccept&& on_accept) {
    if (t1 <= t0) return;

    State k1, k2, k3, k4, k5, k6, k7, ytmp, y5, y4;
    double t = t0;
    if (h <= 0.0) h = (t1 - t0) / 64.0;

    const double eps = std::numeric_limits<double>::epsilon();
    int guard = 0;
    while (t < t1 - 1e-14 * (std::abs(t1) + 1.0)) {
        if (++guard > 50'000'000) throw std::runtime_error("ode: step limit exceeded");
        const double h_min = 16.0 * eps * std::max(std::abs(t), std::abs(t1));
        bool forced = false;
        if (h < h_min) {
            h = h_min;
            forced = true;
        }
        h = std::min(h, t1 - t);

        k1 = rhs(t, y);
        ytmp = y + h * (1.0 / 5.0) * k1;
        k2 = rhs(t + h / 5.0, ytmp);
        ytmp = y + h * ((3.0 / 40.0) * k1 + (9.0 / 40.0) * k2);
        k3 = rhs(t + 3.0 * h / 10.0, ytmp);
        ytmp = y + h * ((44.0 / 45.0) * k1 + (-56.0 / 15.0) * k2 + (32.0 / 9.0) * k3);
        k4 = rhs(t + 4.0 * h / 5.0, ytmp);
        ytmp = y + h * ((19372.0 / 6561.0) * k1 + (-25360.0 / 2187.0) * k2 +
                        (64448.0 / 6561.0) * k3 + (-212.0 / 729.0) * k4);
        k5 = rhs(t + 8.0 * h / 9.0, ytmp);
        ytmp = y + h * ((9017.0 / 3168.0) * k1 + (-355.0 / 33.0) * k2 +
                        (46732.0 / 5247.0) * k3 + (49.0 / 176.0) * k4 +
                        (-5103.0 / 18656.0) * k5);
        k6 = rhs(t + h, ytmp);
        y5 = y + h * ((35.0 / 384.0) * k1 + (500.0 / 1113.0) * k3 + (125.0 / 192.0) * k4 +
                      (-2187.0 / 6784.0) * k5 + (11.0 / 84.0) * k6);
        k7 = rhs(t + h, y5);
        y4 = y + h * ((5179.0 / 57600.0) * k1 + (7571.0 / 16695.0) * k3 +
                      (393.0 / 640.0) * k4 + (-92097.0 / 339200.0) * k5 +
                      (187.0 / 2100.0) * k6 + (1.0 / 40.0) * k7);

        const double err = scaled_error<State>(y5 - y4, y, y5, opt);
        if ((std::isfinite(err) && err <= 1.0) || forced) {
            t += h;
            y = forced ? y4 : y5;
            on_accept(y, t);
            const double grow =
                (err <= 0.0) ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            h *= grow;
        } else {
            // A non-finite error estimate counts as a hard rejection.
            h *= std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 0.9) : 0.2;
        }
    }
}

// Classic fixed-step RK4.
template <class State, class Rhs>
void rk4(Rhs&& rhs, State& y, double t0, double t1, int n_steps) {
    const double h = (t1 - t0) / n_steps;
    State k1, k2, k3, k4, ytmp;
    for (int i = 0; i < n_steps; ++i) {
        const double t = t0 + i * h;
        k1 = rhs(t, y);
        ytmp = y + (h / 2.0) * k1;
        k2 = rhs(t + h / 2.0, ytmp);
        ytmp = y + (h / 2.0) * k2;
        k3 = rhs(t + h / 2.0, ytmp);
        ytmp = y + h * k3;
        k4 = rhs(t + h, ytmp);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
}

}  // namespace spintrans::ode
