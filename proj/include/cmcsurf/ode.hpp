#pragma once

// Dormand-Prince 5(4) with continuous extension and event location.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "cmcsurf/errors.hpp"

namespace cmcsurf::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 0.0;  // 0 picks a starting step from the derivative scale
    double h_min = 1e-14;
    double h_max = std::numeric_limits<double>::infinity();
    long max_steps = 1'000'000;
    double event_tol = 1e-12;
    // Roots closer than this to the integration start are ignored, so a start
    // sitting on an event surface does not stop immediately.
    double event_ignore = 1e-9;
};

// Continuous extension over one accepted step [t0, t0 + h].
template <std::size_t N>
struct DenseStep {
    double t0 = 0.0;
    double h = 0.0;
    State<N> y0{};
    State<N> y1{};
    std::array<State<N>, 7> k{};
    // End of the valid part; earlier than t1() when an event cut the step.
    double t_stop = 0.0;

    State<N> operator()(double t) const;
    double t1() const { return t0 + h; }
};

template <std::size_t N>
struct Event {
    std::function<double(double, const State<N>&)> g;
    int id = 0;
};

template <std::size_t N>
struct Outcome {
    double t = 0.0;
    State<N> y{};
    int event_id = -1;  // -1: reached t_end
    long steps = 0;
    long rejected = 0;
};

namespace detail {

inline constexpr std::array<double, 6> kC{0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0};
inline constexpr double kA21 = 1.0 / 5.0;
inline constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
inline constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
inline constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                        kA54 = -212.0 / 729.0;
inline constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                        kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
inline constexpr std::array<double, 7> kB{35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0,
                                          -2187.0 / 6784.0, 11.0 / 84.0, 0.0};
inline constexpr std::array<double, 7> kE{-71.0 / 57600.0, 0.0, 71.0 / 16695.0, -71.0 / 1920.0,
                                          17253.0 / 339200.0, -22.0 / 525.0, 1.0 / 40.0};
// Dense output: y(t0 + theta h) = y0 + h sum_k K_k (P_k . [theta, theta^2, theta^3, theta^4]).
inline constexpr std::array<std::array<double, 4>, 7> kP{{
    {1.0, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0, -12715105075.0 / 11282082432.0},
    {0.0, 0.0, 0.0, 0.0},
    {0.0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0, 87487479700.0 / 32700410799.0},
    {0.0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0, -10690763975.0 / 1880347072.0},
    {0.0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0, 701980252875.0 / 199316789632.0},
    {0.0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0, -1453857185.0 / 822651844.0},
    {0.0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0, 69997945.0 / 29380423.0},
}};

template <std::size_t N>
bool finite(const State<N>& y) {
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

} // namespace detail

template <std::size_t N>
State<N> DenseStep<N>::operator()(double t) const {
    const double th = h == 0.0 ? 0.0 : (t - t0) / h;
    const std::array<double, 4> pw{th, th * th, th * th * th, th * th * th * th};
    State<N> out = y0;
    for (std::size_t s = 0; s < 7; ++s) {
        const auto& p = detail::kP[s];
        const double c = p[0] * pw[0] + p[1] * pw[1] + p[2] * pw[2] + p[3] * pw[3];
        if (c == 0.0) continue;
        for (std::size_t i = 0; i < N; ++i) out[i] += h * c * k[s][i];
    }
    return out;
}

template <std::size_t N>
using Rhs = std::function<State<N>(double, const State<N>&)>;

// Called for every accepted step, in order.
template <std::size_t N>
using StepObserver = std::function<void(const DenseStep<N>&)>;

// Integrates from (t0, y0) towards t_end (> t0). Stops at t_end or at the first
// sign change of any event function, located by bisection on the dense output.
// Throws NumericalError on step-size collapse, with the offending state.
template <std::size_t N>
Outcome<N> integrate(const Rhs<N>& f, double t0, const State<N>& y0, double t_end,
                     const std::vector<Event<N>>& events, const Options& opt,
                     const StepObserver<N>& observer = {}) {
    using namespace detail;
    Outcome<N> out{t0, y0};
    if (!(t_end > t0)) return out;

    auto scaled_norm = [&](const State<N>& err, const State<N>& ya, const State<N>& yb) {
        double acc = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = opt.atol + opt.rtol * std::max(std::abs(ya[i]), std::abs(yb[i]));
            acc += (err[i] / sc) * (err[i] / sc);
        }
        return std::sqrt(acc / N);
    };

    double t = t0;
    State<N> y = y0;
    State<N> k1 = f(t, y);

    double h = opt.h_init;
    if (h <= 0.0) {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = opt.atol + opt.rtol * std::abs(y[i]);
            d0 = std::max(d0, std::abs(y[i]) / sc);
            d1 = std::max(d1, std::abs(k1[i]) / sc);
        }
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min({h, 1e-2, t_end - t0});
    }
    h = std::min(h, opt.h_max);

    std::vector<double> g_prev(events.size());
    for (std::size_t e = 0; e < events.size(); ++e) g_prev[e] = events[e].g(t, y);

    double err_prev = 1e-4;
    while (t < t_end) {
        if (out.steps >= opt.max_steps)
            throw NumericalError("ODE step budget exhausted at t = " + std::to_string(t));
        bool last = false;
        if (t + h >= t_end) {
            h = t_end - t;
            last = true;
        }
        DenseStep<N> ds;
        ds.t0 = t;
        ds.h = h;
        ds.y0 = y;
        auto& K = ds.k;
        K[0] = k1;
        State<N> tmp{};
        auto stage = [&](int s, std::initializer_list<double> a) {
            for (std::size_t i = 0; i < N; ++i) {
                double acc = 0.0;
                int j = 0;
                for (double aj : a) acc += aj * K[j++][i];
                tmp[i] = y[i] + h * acc;
            }
            K[s] = f(t + kC[s] * h, tmp);
        };
        bool ok = true;
        try {
            stage(1, {kA21});
            stage(2, {kA31, kA32});
            stage(3, {kA41, kA42, kA43});
            stage(4, {kA51, kA52, kA53, kA54});
            stage(5, {kA61, kA62, kA63, kA64, kA65});
            for (std::size_t i = 0; i < N; ++i) {
                double acc = 0.0;
                for (int j = 0; j < 6; ++j) acc += kB[j] * K[j][i];
                ds.y1[i] = y[i] + h * acc;
            }
            K[6] = f(t + h, ds.y1);
            ok = finite(ds.y1) && finite(K[6]);
        } catch (const SingularityError&) {
            ok = false;
        }

        double err = std::numeric_limits<double>::infinity();
        if (ok) {
            State<N> e{};
            for (std::size_t i = 0; i < N; ++i) {
                double acc = 0.0;
                for (int j = 0; j < 7; ++j) acc += kE[j] * K[j][i];
                e[i] = h * acc;
            }
            err = scaled_norm(e, y, ds.y1);
        }

        if (!(err <= 1.0)) {
            ++out.rejected;
            const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.25;
            h *= fac;
            if (h < opt.h_min) {
                std::string st;
                for (std::size_t i = 0; i < N; ++i) st += (i ? ", " : "") + std::to_string(y[i]);
                throw NumericalError("ODE step size collapsed at t = " + std::to_string(t) + ", state (" + st +
                                     ")");
            }
            continue;
        }
        ++out.steps;

        // Event scan on the accepted step.
        int hit = -1;
        double t_hit = ds.t1();
        for (std::size_t e = 0; e < events.size(); ++e) {
            const double g1 = events[e].g(ds.t1(), ds.y1);
            const double g0 = g_prev[e];
            g_prev[e] = g1;
            if (!(g0 * g1 <= 0.0) || (g0 == 0.0 && g1 == 0.0)) continue;
            double lo = t, hi = ds.t1();
            double glo = g0;
            if (glo == 0.0) {
                // Starting exactly on the surface: only a genuine later root counts.
                if (t - t0 < opt.event_ignore) continue;
                hi = lo;
            }
            while (hi - lo > opt.event_tol) {
                const double mid = 0.5 * (lo + hi);
                const double gm = events[e].g(mid, ds(mid));
                if ((gm < 0.0) == (glo < 0.0) && gm != 0.0) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            const double root = hi;
            if (root - t0 < opt.event_ignore) continue;
            if (root < t_hit || hit < 0) {
                hit = events[e].id;
                t_hit = root;
            }
        }

        if (hit >= 0) {
            ds.t_stop = t_hit;
            if (observer) observer(ds);
            out.t = t_hit;
            out.y = ds(t_hit);
            out.event_id = hit;
            return out;
        }

        ds.t_stop = ds.t1();
        if (observer) observer(ds);
        t = last ? t_end : ds.t1();
        y = ds.y1;
        k1 = K[6];

        // PI controller (Hairer's beta = 0.04).
        const double e_cur = std::max(err, 1e-10);
        double fac = 0.9 * std::pow(e_cur, -0.7 / 5.0) * std::pow(err_prev, 0.04);
        fac = std::clamp(fac, 0.2, 5.0);
        err_prev = e_cur;
        h = std::min(h * fac, opt.h_max);
    }
    out.t = t_end;
    out.y = y;
    return out;
}

} // namespace cmcsurf::ode
