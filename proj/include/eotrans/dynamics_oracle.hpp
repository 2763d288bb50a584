#pragma once

// Brute-force time-domain integration of the coupled-mode equations. Used as
// an oracle for the steady-state closed forms in converter.hpp and
// qed_readout.hpp; it shares no algebra with them.
//
// Integration happens in the rotating frame of the drive, so a steady state
// is a fixed point. Convergence is declared when, over one window of length
// 2 / min(gamma_a, gamma_b), both amplitudes change by less than the
// requested relative tolerance.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "converter.hpp"
#include "core_model.hpp"
#include "csv.hpp"

namespace eotrans {

using cdouble = std::complex<double>;

class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Coherent input tone: amplitude in sqrt(photons/s), detuning from the
/// mode (rad/s).
struct DriveTone {
    cdouble amplitude{0.0, 0.0};
    double detuning = 0.0;
};

struct TrajectoryResult {
    std::vector<double> times;
    std::vector<cdouble> a_amplitude;
    std::vector<cdouble> b_amplitude;
    cdouble final_a{};
    cdouble final_b{};
    std::optional<cdouble> steady_state_a; // set only when converged
    std::optional<cdouble> steady_state_b;
    bool converged = false;
    std::size_t steps = 0;
};

struct IntegratorOptions {
    cdouble initial_a{0.0, 0.0};
    cdouble initial_b{0.0, 0.0};
    double rtol = 1e-10;            // local error control, relative
    double atol_floor = 1e-14;      // absolute floor, scaled by the state magnitude
    std::optional<double> fixed_step; // disables adaptivity when set
    bool record = true;
    std::size_t max_steps = 20'000'000;
};

/// z' = M z + f for the two complex amplitudes (a, b).
struct LinearModeSystem {
    std::array<std::array<cdouble, 2>, 2> m{};
    std::array<cdouble, 2> f{};

    std::array<cdouble, 2> operator()(const std::array<cdouble, 2>& z) const
    {
        return {m[0][0] * z[0] + m[0][1] * z[1] + f[0], m[1][0] * z[0] + m[1][1] * z[1] + f[1]};
    }
};

namespace detail {

using State = std::array<cdouble, 2>;

inline State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms)
{
    State out = y;
    for (const auto& [c, k] : terms) {
        if (c == 0.0) continue;
        out[0] += h * c * (*k)[0];
        out[1] += h * c * (*k)[1];
    }
    return out;
}

// Dormand-Prince 5(4) tableau.
struct DP45 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
};

struct StepResult {
    State y;
    State k_last; // derivative at the new point (FSAL)
    double error = 0.0;
};

template <class Rhs>
StepResult dp45_step(const Rhs& rhs, const State& y, const State& k1, double h, double atol, double rtol)
{
    using T = DP45;
    const State k2 = rhs(axpy(y, h, {{T::a21, &k1}}));
    const State k3 = rhs(axpy(y, h, {{T::a31, &k1}, {T::a32, &k2}}));
    const State k4 = rhs(axpy(y, h, {{T::a41, &k1}, {T::a42, &k2}, {T::a43, &k3}}));
    const State k5 = rhs(axpy(y, h, {{T::a51, &k1}, {T::a52, &k2}, {T::a53, &k3}, {T::a54, &k4}}));
    const State k6 = rhs(axpy(y, h, {{T::a61, &k1}, {T::a62, &k2}, {T::a63, &k3}, {T::a64, &k4}, {T::a65, &k5}}));
    const State y_new = axpy(y, h, {{T::b1, &k1}, {T::b3, &k3}, {T::b4, &k4}, {T::b5, &k5}, {T::b6, &k6}});
    const State k7 = rhs(y_new);
    const State err = axpy(State{}, h, {{T::e1, &k1}, {T::e3, &k3}, {T::e4, &k4}, {T::e5, &k5}, {T::e6, &k6}, {T::e7, &k7}});
    double sum = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        const double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        const double r = std::abs(err[i]) / scale;
        sum += r * r;
    }
    return {y_new, k7, std::sqrt(sum / 2.0)};
}

inline bool finite(const State& z)
{
    return std::isfinite(z[0].real()) && std::isfinite(z[0].imag()) && std::isfinite(z[1].real()) &&
           std::isfinite(z[1].imag());
}

/// Integrates `system` window by window until the fixed-point test passes or
/// the horizon is exhausted.
inline TrajectoryResult integrate_system(const LinearModeSystem& system, double window, double horizon,
                                         double tolerance, double state_scale, const IntegratorOptions& opts)
{
    if (!(horizon > 0.0)) throw InvalidParameter("integrate: horizon must be positive");
    if (!(tolerance > 0.0 && tolerance <= 1e-3)) throw InvalidParameter("integrate: tolerance must lie in (0, 1e-3]");
    if (opts.fixed_step && !(*opts.fixed_step > 0.0)) throw InvalidParameter("integrate: fixed step must be positive");

    TrajectoryResult out;
    State y{opts.initial_a, opts.initial_b};
    double t = 0.0;
    const double atol = opts.atol_floor * std::max({state_scale, std::abs(y[0]), std::abs(y[1]), 1e-300});
    auto record = [&](double time, const State& z) {
        if (!opts.record) return;
        out.times.push_back(time);
        out.a_amplitude.push_back(z[0]);
        out.b_amplitude.push_back(z[1]);
    };
    record(t, y);

    State k = system(y);
    double h = opts.fixed_step ? *opts.fixed_step : 1e-3 * window;
    double prev_error = 1e-4;
    State window_start = y;
    double next_check = std::min(window, horizon);

    while (t < horizon) {
        if (out.steps >= opts.max_steps) break;
        // Adaptive runs land exactly on window boundaries; fixed-step runs
        // only clip the final step to the horizon.
        const double stop = opts.fixed_step ? horizon : next_check;
        const bool clipped = t + h >= stop;
        const double step = clipped ? stop - t : h;
        StepResult s = dp45_step(system, y, k, step, atol, opts.rtol);
        if (!finite(s.y)) throw DivergenceError("integrate: state became non-finite");

        if (!opts.fixed_step && s.error > 1.0) {
            const double factor = std::max(0.2, 0.9 * std::pow(s.error, -0.2));
            h = step * factor;
            continue;
        }
        ++out.steps;
        t = clipped ? stop : t + step;
        y = s.y;
        k = s.k_last;
        record(t, y);

        if (!opts.fixed_step) {
            // PI controller (Gustafsson): exponents 0.7/5 and 0.4/5.
            const double err = std::max(s.error, 1e-10);
            double factor = 0.9 * std::pow(err, -0.14) * std::pow(prev_error, 0.08);
            factor = std::clamp(factor, 0.2, 5.0);
            prev_error = err;
            if (!clipped) h = step * factor;
            h = std::min(h, window);
        }

        if (t >= next_check) {
            bool settled = true;
            for (std::size_t i = 0; i < 2; ++i) {
                const double change = std::abs(y[i] - window_start[i]);
                if (change > tolerance * std::abs(y[i]) + atol) settled = false;
            }
            window_start = y;
            if (settled && t >= window) {
                out.converged = true;
                break;
            }
            next_check = std::min(t + window, horizon);
        }
    }
    out.final_a = y[0];
    out.final_b = y[1];
    if (out.converged) {
        out.steady_state_a = y[0];
        out.steady_state_b = y[1];
    }
    return out;
}

inline double convergence_window(const OperatingPoint& op)
{
    return 2.0 / std::min(op.optical_signal().total_rate(), op.microwave().total_rate());
}

inline double drive_state_scale(const OperatingPoint& op, const DriveTone& optical, const DriveTone& microwave)
{
    const auto& a = op.optical_signal();
    const auto& b = op.microwave();
    return std::max(2.0 * std::sqrt(a.coupling_rate()) * std::abs(optical.amplitude) / a.total_rate(),
                    2.0 * std::sqrt(b.coupling_rate()) * std::abs(microwave.amplitude) / b.total_rate());
}

} // namespace detail

/// Coupled-mode equations with both inputs detuned by the same delta,
/// written in the co-rotating frame of the drives:
///   a' = (i delta - g_a/2) a + i g alpha b  - sqrt(g_ac) A_in
///   b' = (i delta - g_b/2) b + i g alpha* a - sqrt(g_bc) B_in
inline LinearModeSystem coupled_mode_system(const OperatingPoint& op, const DriveTone& optical,
                                            const DriveTone& microwave)
{
    const bool optical_on = std::abs(optical.amplitude) > 0.0;
    const bool microwave_on = std::abs(microwave.amplitude) > 0.0;
    if (optical_on && microwave_on && optical.detuning != microwave.detuning)
        throw InvalidParameter("integrate: simultaneous drives must share one detuning");
    const double delta = optical_on ? optical.detuning : microwave.detuning;
    const cdouble i{0.0, 1.0};
    const cdouble ga = op.g_eo() * pump_amplitude(op);
    const auto& a = op.optical_signal();
    const auto& b = op.microwave();
    LinearModeSystem s;
    s.m[0][0] = cdouble{-0.5 * a.total_rate(), delta};
    s.m[0][1] = i * ga;
    s.m[1][0] = i * std::conj(ga);
    s.m[1][1] = cdouble{-0.5 * b.total_rate(), delta};
    s.f[0] = -std::sqrt(a.coupling_rate()) * optical.amplitude;
    s.f[1] = -std::sqrt(b.coupling_rate()) * microwave.amplitude;
    return s;
}

/// Interaction-picture equations with a qubit-induced shift chi, after the
/// substitution a~ = x e^{i chi t}, b~ = y e^{i chi t} that removes the
/// e^{i chi t} drive:
///   x' = -g_a/2 x + i g alpha y
///   y' = (-i chi - g_b/2) y + i g alpha* x - sqrt(g_bc) B_in
inline LinearModeSystem dispersive_system(const OperatingPoint& op, double chi, const DriveTone& microwave)
{
    const cdouble i{0.0, 1.0};
    const cdouble ga = op.g_eo() * pump_amplitude(op);
    const auto& a = op.optical_signal();
    const auto& b = op.microwave();
    LinearModeSystem s;
    s.m[0][0] = cdouble{-0.5 * a.total_rate(), 0.0};
    s.m[0][1] = i * ga;
    s.m[1][0] = i * std::conj(ga);
    s.m[1][1] = cdouble{-0.5 * b.total_rate(), -chi};
    s.f[0] = 0.0;
    s.f[1] = -std::sqrt(b.coupling_rate()) * microwave.amplitude;
    return s;
}

inline TrajectoryResult integrate(const OperatingPoint& op, const DriveTone& optical_drive,
                                  const DriveTone& microwave_drive, double horizon, double tolerance,
                                  const IntegratorOptions& opts = {})
{
    if (!std::isfinite(std::abs(optical_drive.amplitude)) || !std::isfinite(std::abs(microwave_drive.amplitude)))
        throw InvalidParameter("integrate: drive amplitudes must be finite");
    const auto system = coupled_mode_system(op, optical_drive, microwave_drive);
    return detail::integrate_system(system, detail::convergence_window(op), horizon, tolerance,
                                    detail::drive_state_scale(op, optical_drive, microwave_drive), opts);
}

inline TrajectoryResult integrate_dispersive(const OperatingPoint& op, double chi, const DriveTone& microwave_drive,
                                             double horizon, double tolerance, const IntegratorOptions& opts = {})
{
    if (!std::isfinite(std::abs(microwave_drive.amplitude)) || !std::isfinite(chi))
        throw InvalidParameter("integrate_dispersive: drive and chi must be finite");
    const auto system = dispersive_system(op, chi, microwave_drive);
    return detail::integrate_system(system, detail::convergence_window(op), horizon, tolerance,
                                    detail::drive_state_scale(op, {}, microwave_drive), opts);
}

/// Microwave-to-optical efficiency read off a steady state:
/// |sqrt(g_ac) a_ss / B_in|^2.
inline double conversion_efficiency(const OperatingPoint& op, const TrajectoryResult& result,
                                    const DriveTone& microwave_drive)
{
    if (!result.converged) throw std::logic_error("conversion_efficiency: trajectory did not converge");
    const double flux = std::norm(microwave_drive.amplitude);
    if (!(flux > 0.0)) throw InvalidParameter("conversion_efficiency: microwave drive is zero");
    return op.optical_signal().coupling_rate() * std::norm(*result.steady_state_a) / flux;
}

/// Reflected microwave field b_out = B_in + sqrt(g_bc) b.
inline cdouble microwave_output(const OperatingPoint& op, cdouble b, const DriveTone& microwave_drive)
{
    return microwave_drive.amplitude + std::sqrt(op.microwave().coupling_rate()) * b;
}

/// Trajectory dump: `time_s,re_a,im_a,re_b,im_b`.
inline void write_trajectory_csv(std::ostream& out, const TrajectoryResult& result)
{
    out << "time_s,re_a,im_a,re_b,im_b\n";
    for (std::size_t i = 0; i < result.times.size(); ++i) {
        csv::write_row(out, {result.times[i], result.a_amplitude[i].real(), result.a_amplitude[i].imag(),
                             result.b_amplitude[i].real(), result.b_amplitude[i].imag()});
    }
}

} // namespace eotrans
