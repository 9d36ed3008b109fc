#pragma once

#include "rpiso/density.hpp"
#include "rpiso/error.hpp"
#include "rpiso/geometry.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rpiso
{

struct ShotTolerances
{
    double step_tol = 1e-10;      ///< absolute and relative integrator tolerance
    double event_tol = 1e-12;     ///< event localisation in arclength
    double terminal_y = 1e-9;     ///< axis return threshold
    double origin_radius = 1e-3;  ///< closest approach below this closes the curve
    double origin_hit = 1e-9;     ///< integration stops inside this radius
    double s_max = 0.0;           ///< 0 selects 50 (1 + 1/kappa0)
    double max_step = 5e-3;       ///< every accepted step is a sample, so this bounds spacing
    double tangent_tol = 1e-2;    ///< |cos phi| allowed for a vertical axis return
};

struct ShotConfig
{
    int n = 3;
    RadialDensity density = RadialDensity::power(1.0);
    double kappa0 = 2.0;
    double c = 0.0;
    ShotTolerances tol{};
    bool out_of_regime = false;
    bool experimental = false;

    [[nodiscard]] double f0() const noexcept { return 1.0 - 1.0 / kappa0; }
    [[nodiscard]] double s_max() const noexcept { return tol.s_max > 0.0 ? tol.s_max : 50.0 * (1.0 + 1.0 / kappa0); }
    [[nodiscard]] double start_step() const noexcept { return 1e-4 * std::min(1.0, 1.0 / kappa0); }
};

/// Build a shot from (1, 0) with vertical tangent. The constant follows from
/// kappa(0) = lambda(0) = kappa0 and the density term g'(1) at the start.
inline ShotConfig init_shot(int n, const RadialDensity& density, double kappa0, const ShotTolerances& tol = {},
                            bool experimental = false)
{
    if (!(kappa0 > 0.0) || !std::isfinite(kappa0))
        throw Error(Errc::invalid_argument, "kappa0 must be positive");
    if (n < 2 || (n < 3 && !experimental))
        throw Error(Errc::invalid_argument, "dimension must be at least 3 (2 needs the experimental flag)");
    if (!density.is_power() && !experimental)
        throw Error(Errc::invalid_argument, "non-power densities need the experimental flag");
    if (!(tol.step_tol > 0.0) || !(tol.event_tol > 0.0) || !(tol.terminal_y > 0.0) || !(tol.origin_radius > 0.0) ||
        !(tol.max_step > 0.0))
        throw Error(Errc::invalid_argument, "tolerances must be positive");
    ShotConfig cfg;
    cfg.n = n;
    cfg.density = density;
    cfg.kappa0 = kappa0;
    cfg.tol = tol;
    cfg.experimental = experimental;
    cfg.c = (n - 1) * kappa0 + density.log_derivative(1.0);
    cfg.out_of_regime = kappa0 <= 1.0;
    return cfg;
}

struct CurveState
{
    double x = 1.0;
    double y = 0.0;
    double phi = pi / 2;
    double s = 0.0;
};

namespace detail
{
/// Curvature without domain checks, used inside the integrator where trial stages may
/// dip below the axis; the clamp makes such stages fail the error test instead of NaN.
inline double kappa_unchecked(double x, double y, double phi, const ShotConfig& cfg)
{
    const double yc = std::max(y, 1e-14);
    const double lambda = -std::cos(phi) / yc;
    const double r2 = std::max(x * x + y * y, 1e-300);
    const double qn = x * std::sin(phi) - y * std::cos(phi);
    double h1 = 0.0;
    if (cfg.density.is_power())
        h1 = cfg.density.p() * qn / r2;
    else {
        const double r = std::sqrt(r2);
        h1 = cfg.density.log_derivative(r) * qn / r;
    }
    return cfg.c - (cfg.n - 2) * lambda - h1;
}
} // namespace detail

inline constexpr double start_threshold = 1e-12;

/// Profile curvature forced by constant generalized mean curvature.
inline double curvature_rhs(const CurveState& st, const ShotConfig& cfg)
{
    if (st.y < start_threshold && std::abs(st.s) <= cfg.start_step() && std::abs(st.x - 1.0) < 1e-6)
        return cfg.kappa0;
    if (!(st.y > 0.0))
        throw Error(Errc::integration_domain, "curvature requested on or below the axis");
    return detail::kappa_unchecked(st.x, st.y, st.phi, cfg);
}

struct CurveSample
{
    double s = 0.0;
    double x = 0.0;
    double y = 0.0;
    double phi = 0.0;
    double kappa = 0.0;
    double lambda = 0.0;
    double F = 0.0;
    double R = 0.0;
    double H1 = 0.0;

    [[nodiscard]] Point2 point() const noexcept { return {x, y}; }
    [[nodiscard]] CurveState state() const noexcept { return {x, y, phi, s}; }
};

struct EventPoint
{
    double s = 0.0;
    double x = 0.0;
    double y = 0.0;
    double phi = 0.0;

    [[nodiscard]] Point2 point() const noexcept { return {x, y}; }
};

enum class Termination
{
    axis_return,  ///< y fell below terminal_y
    origin_reach, ///< |gamma| fell below origin_hit
    descent_end,  ///< height reached a local minimum after the first horizontal tangent
    s_max,
    step_failure,
};

constexpr std::string_view to_string(Termination t) noexcept
{
    switch (t) {
    case Termination::axis_return: return "axis-return";
    case Termination::origin_reach: return "origin-reach";
    case Termination::descent_end: return "descent-end";
    case Termination::s_max: return "s-max";
    case Termination::step_failure: return "step-failure";
    }
    return "unknown";
}

struct ShotCurve
{
    ShotConfig config;
    std::vector<CurveSample> samples;
    std::optional<EventPoint> delta;            ///< first phi = pi
    std::optional<EventPoint> eta;              ///< first phi = 3pi/2
    std::optional<EventPoint> descent_end;      ///< first local minimum of height after delta
    std::optional<EventPoint> closest_approach; ///< first local minimum of |gamma|
    std::optional<EventPoint> beta;             ///< end of the curve as analysed
    Termination termination = Termination::s_max;
    std::string failure;    ///< set on step failure
    bool origin_hit = false; ///< closed by proximity to the origin
    bool axis_closed = false; ///< closed by a vertical return to the axis
    Point2 endpoint{};       ///< beta, extrapolated to y = 0 on an axis return
    int horizontal_tangent_count = 0;
};

namespace detail
{
namespace ode = boost::numeric::odeint;
using OdeState = std::array<double, 3>;

inline CurveSample make_sample(double s, const OdeState& st, const ShotConfig& cfg)
{
    CurveSample out;
    out.s = s;
    out.x = st[0];
    out.y = st[1];
    out.phi = st[2];
    out.kappa = kappa_unchecked(st[0], st[1], st[2], cfg);
    const double cp = std::cos(st[2]);
    out.lambda = st[1] > 0.0 ? -cp / st[1] : std::numeric_limits<double>::quiet_NaN();
    if (std::abs(cp) < vertical_tangent_tol || !(st[1] > 0.0)) {
        out.F = std::numeric_limits<double>::quiet_NaN();
        out.R = std::numeric_limits<double>::infinity();
    } else {
        out.F = (st[0] * cp + st[1] * std::sin(st[2])) / cp;
        out.R = std::hypot(st[0] - out.F, st[1]);
    }
    const double r2 = st[0] * st[0] + st[1] * st[1];
    const double qn = st[0] * std::sin(st[2]) - st[1] * cp;
    out.H1 = cfg.density.is_power() ? cfg.density.p() * qn / r2 : cfg.density.log_derivative(std::sqrt(r2)) * qn / std::sqrt(r2);
    return out;
}

inline EventPoint make_event(double s, const OdeState& st) { return {s, st[0], st[1], st[2]}; }
} // namespace detail

/// Integrate the generating curve until it returns to the axis, reaches the origin,
/// bottoms out after its first horizontal tangent, or exceeds the length bound.
inline ShotCurve integrate(const ShotConfig& cfg)
{
    namespace ode = detail::ode;
    using detail::OdeState;

    ShotCurve curve;
    curve.config = cfg;
    const ShotTolerances& tol = cfg.tol;
    const double k0 = cfg.kappa0;
    const double s_max = cfg.s_max();

    {
        CurveSample first;
        first.s = 0.0;
        first.x = 1.0;
        first.y = 0.0;
        first.phi = pi / 2;
        first.kappa = k0;
        first.lambda = k0;
        first.F = 1.0 - 1.0 / k0;
        first.R = 1.0 / k0;
        first.H1 = cfg.density.log_derivative(1.0);
        curve.samples.push_back(first);
    }

    // First step along the osculating arc; kappa'(0) = 0 makes this third-order accurate.
    const double h0 = cfg.start_step();
    OdeState x0{1.0 - (1.0 - std::cos(k0 * h0)) / k0, std::sin(k0 * h0) / k0, pi / 2 + k0 * h0};
    curve.samples.push_back(detail::make_sample(h0, x0, cfg));

    auto system = [&cfg](const OdeState& st, OdeState& d, double) {
        d[0] = std::cos(st[2]);
        d[1] = std::sin(st[2]);
        d[2] = detail::kappa_unchecked(st[0], st[1], st[2], cfg);
    };

    auto stepper = ode::make_dense_output(tol.step_tol, tol.step_tol, tol.max_step, ode::runge_kutta_dopri5<OdeState>());
    stepper.initialize(x0, h0, std::min(h0, tol.max_step));

    // Locate the first root of g in (t0, t1] on the dense output, given a sign change.
    OdeState tmp{};
    auto locate = [&](auto&& g, double t0, double t1, double g0) {
        double lo = t0;
        double hi = t1;
        while (hi - lo > tol.event_tol) {
            const double mid = 0.5 * (lo + hi);
            stepper.calc_state(mid, tmp);
            const double gm = g(tmp);
            if ((gm > 0.0) == (g0 > 0.0))
                lo = mid;
            else
                hi = mid;
        }
        stepper.calc_state(hi, tmp);
        return hi;
    };

    auto phi_minus = [](double level) { return [level](const OdeState& st) { return st[2] - level; }; };
    auto height = [&tol](const OdeState& st) { return st[1] - tol.terminal_y; };
    auto radius = [&tol](const OdeState& st) { return std::hypot(st[0], st[1]) - tol.origin_hit; };
    auto radial_speed = [](const OdeState& st) { return st[0] * std::cos(st[2]) + st[1] * std::sin(st[2]); };
    auto vertical_speed = [](const OdeState& st) { return std::sin(st[2]); };

    bool done = false;
    while (!done) {
        double t0 = 0.0;
        double t1 = 0.0;
        try {
            std::tie(t0, t1) = stepper.do_step(system);
        } catch (const std::exception& e) {
            curve.termination = Termination::step_failure;
            curve.failure = e.what();
            break;
        }
        const OdeState prev = stepper.previous_state();
        const OdeState cur = stepper.current_state();
        if (!std::isfinite(cur[0]) || !std::isfinite(cur[1]) || !std::isfinite(cur[2])) {
            curve.termination = Termination::step_failure;
            curve.failure = "non-finite state at s = " + std::to_string(t1);
            break;
        }

        // Candidate terminal events in this step; the earliest wins.
        double t_stop = std::numeric_limits<double>::infinity();
        Termination why = Termination::s_max;
        OdeState at_stop{};

        const auto try_terminal = [&](auto&& g, bool downward, Termination kind) {
            const double g0 = g(prev);
            const double g1 = g(cur);
            const bool crossed = downward ? (g0 > 0.0 && g1 <= 0.0) : (g0 < 0.0 && g1 >= 0.0);
            if (!crossed)
                return;
            const double te = locate(g, t0, t1, g0);
            if (te < t_stop) {
                t_stop = te;
                why = kind;
                at_stop = tmp;
            }
        };
        try_terminal(height, true, Termination::axis_return);
        try_terminal(radius, true, Termination::origin_reach);
        if (curve.delta)
            try_terminal(vertical_speed, false, Termination::descent_end);

        const double t_end = std::min(t_stop, t1);

        // Non-terminal events, kept only when they precede the stop.
        const auto first_upward = [&](auto&& g, std::optional<EventPoint>& slot) {
            if (slot)
                return;
            const double g0 = g(prev);
            const double g1 = g(cur);
            if (g0 < 0.0 && g1 >= 0.0) {
                const double te = locate(g, t0, t1, g0);
                if (te <= t_end)
                    slot = detail::make_event(te, tmp);
            }
        };
        first_upward(phi_minus(pi), curve.delta);
        first_upward(phi_minus(1.5 * pi), curve.eta);
        first_upward(radial_speed, curve.closest_approach);

        if ((std::sin(prev[2]) > 0.0) != (std::sin(cur[2]) > 0.0) && t1 < t_stop)
            ++curve.horizontal_tangent_count;

        if (t_stop <= t1) {
            curve.termination = why;
            curve.samples.push_back(detail::make_sample(t_stop, at_stop, cfg));
            curve.beta = detail::make_event(t_stop, at_stop);
            if (why == Termination::descent_end)
                curve.descent_end = curve.beta;
            done = true;
        } else {
            curve.samples.push_back(detail::make_sample(t1, cur, cfg));
            if (t1 >= s_max) {
                curve.termination = Termination::s_max;
                done = true;
            }
        }
    }

    // Closure by proximity: cut the curve at its closest approach to the origin.
    std::optional<EventPoint> closure;
    if (curve.closest_approach && curve.closest_approach->point().norm() <= tol.origin_radius &&
        (!curve.beta || curve.closest_approach->s <= curve.beta->s))
        closure = curve.closest_approach;
    if (curve.termination == Termination::origin_reach && (!closure || curve.beta->s < closure->s))
        closure = curve.beta;
    if (closure) {
        const EventPoint at = *closure;
        curve.origin_hit = true;
        while (!curve.samples.empty() && curve.samples.back().s >= at.s)
            curve.samples.pop_back();
        curve.samples.push_back(detail::make_sample(at.s, {at.x, at.y, at.phi}, cfg));
        curve.beta = at;
        if (curve.eta && curve.eta->s > at.s)
            curve.eta.reset();
        if (curve.delta && curve.delta->s > at.s)
            curve.delta.reset();
        int count = 0;
        for (std::size_t i = 1; i < curve.samples.size(); ++i)
            if ((std::sin(curve.samples[i - 1].phi) > 0.0) != (std::sin(curve.samples[i].phi) > 0.0))
                ++count;
        curve.horizontal_tangent_count = count;
    }

    if (curve.beta) {
        curve.endpoint = curve.beta->point();
        if (curve.termination == Termination::axis_return && !curve.origin_hit) {
            const double sp = std::sin(curve.beta->phi);
            if (sp < 0.0) {
                const double ds = curve.beta->y / -sp;
                curve.endpoint = {curve.beta->x + ds * std::cos(curve.beta->phi), 0.0};
            }
            curve.axis_closed = std::abs(std::cos(curve.beta->phi)) <= tol.tangent_tol;
        }
    } else {
        const CurveSample& last = curve.samples.back();
        curve.endpoint = last.point();
    }
    return curve;
}

enum class ShotOutcome
{
    closed,
    right_case,
    left_case,
    out_of_regime,
    inconclusive,
};

constexpr std::string_view to_string(ShotOutcome o) noexcept
{
    switch (o) {
    case ShotOutcome::closed: return "Closed";
    case ShotOutcome::right_case: return "RightCase";
    case ShotOutcome::left_case: return "LeftCase";
    case ShotOutcome::out_of_regime: return "OutOfRegime";
    case ShotOutcome::inconclusive: return "Inconclusive";
    }
    return "unknown";
}

inline constexpr double quadrant_margin = 1e-9;

/// Final tangent in the fourth quadrant including (1,0) but not (0,-1).
inline bool fourth_quadrant_tangent(double phi) { return std::cos(phi) > quadrant_margin && std::sin(phi) < quadrant_margin; }
/// Final tangent in the third quadrant including (-1,0) but not (0,-1).
inline bool third_quadrant_tangent(double phi) { return std::cos(phi) < -quadrant_margin && std::sin(phi) < quadrant_margin; }

namespace detail
{
// At the end of the descent sin(phi) vanishes by construction and its sign there is
// event-location noise, so only the horizontal direction is read off.
inline bool at_descent_end(const EventPoint& e, const ShotCurve& curve)
{
    return curve.descent_end && curve.descent_end->s == e.s;
}

inline bool heads_right(const EventPoint& e, const ShotCurve& curve)
{
    return at_descent_end(e, curve) ? std::cos(e.phi) > quadrant_margin : fourth_quadrant_tangent(e.phi);
}

inline bool heads_left(const EventPoint& e, const ShotCurve& curve)
{
    return at_descent_end(e, curve) ? std::cos(e.phi) < -quadrant_margin : third_quadrant_tangent(e.phi);
}
} // namespace detail

/// Whether the curve bottoms out right of the origin with a fourth-quadrant tangent.
inline std::optional<bool> ends_right_of_origin(const ShotCurve& curve)
{
    std::optional<EventPoint> end = curve.descent_end;
    if (!end && curve.termination == Termination::axis_return)
        end = curve.beta;
    if (!end || std::abs(end->x) < 10.0 * curve.config.tol.event_tol)
        return std::nullopt;
    return end->x > 0.0 && detail::heads_right(*end, curve);
}

inline ShotOutcome classify(const ShotCurve& curve)
{
    if (curve.origin_hit || curve.axis_closed)
        return ShotOutcome::closed;
    if (curve.config.out_of_regime)
        return ShotOutcome::out_of_regime;
    if (!curve.beta || curve.termination == Termination::s_max || curve.termination == Termination::step_failure)
        return ShotOutcome::inconclusive;
    const EventPoint& b = *curve.beta;
    if (std::abs(b.x) < 10.0 * curve.config.tol.event_tol)
        return ShotOutcome::inconclusive;
    if (b.x > 0.0 && detail::heads_right(b, curve))
        return ShotOutcome::right_case;
    if (b.x < 0.0 && detail::heads_left(b, curve))
        return ShotOutcome::left_case;
    return ShotOutcome::inconclusive;
}

struct BracketStep
{
    double lo = 0.0;
    double hi = 0.0;
    double mid = 0.0;
    std::optional<bool> mid_right;
};

struct ClosingResult
{
    double kappa0 = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool exact_hit = false;
    std::vector<BracketStep> trace;
};

/// Bisection on which side of the origin the curve bottoms out.
inline ClosingResult find_closing_kappa0(int n, const RadialDensity& density, double lo, double hi, double tol = 1e-7,
                                         const ShotTolerances& tolerances = {}, bool experimental = false)
{
    if (!(lo < hi) || !(tol > 0.0))
        throw Error(Errc::invalid_bracket, "bracket must satisfy lo < hi and tol > 0");
    const auto side = [&](double k) { return ends_right_of_origin(integrate(init_shot(n, density, k, tolerances, experimental))); };
    const std::optional<bool> lo_side = side(lo);
    const std::optional<bool> hi_side = side(hi);
    if (!hi_side || !*hi_side || !lo_side || *lo_side)
        throw Error(Errc::invalid_bracket, "bracket does not straddle the closing parameter");

    ClosingResult out;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const ShotCurve curve = integrate(init_shot(n, density, mid, tolerances, experimental));
        BracketStep step{lo, hi, mid, ends_right_of_origin(curve)};
        out.trace.push_back(step);
        if (curve.termination == Termination::origin_reach) {
            out.exact_hit = true;
            out.kappa0 = mid;
            out.lo = lo;
            out.hi = hi;
            return out;
        }
        if (!step.mid_right)
            break;
        if (*step.mid_right)
            hi = mid;
        else
            lo = mid;
    }
    out.lo = lo;
    out.hi = hi;
    out.kappa0 = 0.5 * (lo + hi);
    return out;
}

/// Curve state at arclength s by cubic Hermite interpolation between samples, using
/// the exact derivatives (cos phi, sin phi, kappa).
inline CurveSample state_at(const ShotCurve& curve, double s)
{
    const auto& v = curve.samples;
    if (v.size() < 2 || s < v.front().s || s > v.back().s)
        throw Error(Errc::out_of_domain, "arclength outside the sampled curve");
    auto it = std::upper_bound(v.begin(), v.end(), s, [](double t, const CurveSample& c) { return t < c.s; });
    std::size_t i = it == v.end() ? v.size() - 2 : static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - v.begin() - 1));
    if (i + 1 >= v.size())
        i = v.size() - 2;
    const CurveSample& a = v[i];
    const CurveSample& b = v[i + 1];
    const double h = b.s - a.s;
    const double u = h > 0.0 ? (s - a.s) / h : 0.0;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    const auto herm = [&](double pa, double da, double pb, double db) { return h00 * pa + h10 * h * da + h01 * pb + h11 * h * db; };
    detail::OdeState st{herm(a.x, std::cos(a.phi), b.x, std::cos(b.phi)), herm(a.y, std::sin(a.phi), b.y, std::sin(b.phi)),
                        herm(a.phi, a.kappa, b.phi, b.kappa)};
    return detail::make_sample(s, st, curve.config);
}

/// Second derivative of kappa at the start, from the even expansion
/// kappa(s) = kappa0 + kappa''(0) s^2 / 2, Richardson-combined over h and h/2.
inline double kappa_second_at_start(const ShotCurve& curve, double h = 0.02)
{
    const double k0 = curve.config.kappa0;
    const auto fd = [&](double step) { return 2.0 * (state_at(curve, step).kappa - k0) / (step * step); };
    const double coarse = fd(h);
    const double fine = fd(0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

/// Two points at the same height, one on the rising part of the curve and one on the
/// falling part after the first horizontal tangent.
struct MatchedPair
{
    double s_upper = 0.0;
    double s_lower = 0.0;
    double y = 0.0;
    double kappa_upper = 0.0;
    double kappa_lower = 0.0;
};

struct FeatureReport
{
    std::optional<EventPoint> delta;
    std::optional<EventPoint> eta;
    std::optional<EventPoint> beta;
    int horizontal_tangent_count = 0;
    std::vector<MatchedPair> pairs;
    double min_pair_gap = std::numeric_limits<double>::infinity(); ///< min kappa_lower - kappa_upper
    double max_pair_gap = -std::numeric_limits<double>::infinity();
    double min_upper_f_minus_r = std::numeric_limits<double>::infinity();
    double max_kappa_minus_lambda_right_half = -std::numeric_limits<double>::infinity();
    double min_f_second_quadrant = std::numeric_limits<double>::infinity();
    double min_r_minus_f_second_quadrant = std::numeric_limits<double>::infinity();
    double min_kappa_after_eta = std::numeric_limits<double>::infinity();
    bool fourth_quadrant_after_eta = true;
    double trailing_negative_kappa = 0.0; ///< length of the final stretch with kappa < 0
    double max_radial_speed = -std::numeric_limits<double>::infinity(); ///< max gamma . gamma'
    std::optional<double> radial_violation_from; ///< start of the terminal interval with gamma . gamma' > 0
};

inline constexpr double feature_start_skip = 1e-3;

inline FeatureReport extract_features(const ShotCurve& curve)
{
    FeatureReport out;
    out.delta = curve.delta;
    out.eta = curve.eta;
    out.beta = curve.beta;
    out.horizontal_tangent_count = curve.horizontal_tangent_count;
    const auto& v = curve.samples;
    if (v.size() < 3)
        return out;
    const double s_end = curve.beta ? curve.beta->s : v.back().s;

    for (const CurveSample& c : v) {
        if (c.s <= 0.0 || c.s >= s_end)
            continue;
        const double rs = c.x * std::cos(c.phi) + c.y * std::sin(c.phi);
        out.max_radial_speed = std::max(out.max_radial_speed, rs);
        if (curve.delta && c.s < curve.delta->s && std::isfinite(c.F))
            out.min_upper_f_minus_r = std::min(out.min_upper_f_minus_r, c.F - c.R);
        if (c.s > feature_start_skip && c.x >= 0.0 && std::isfinite(c.lambda))
            out.max_kappa_minus_lambda_right_half = std::max(out.max_kappa_minus_lambda_right_half, c.kappa - c.lambda);
        if (std::cos(c.phi) < -quadrant_margin && std::sin(c.phi) > quadrant_margin && std::isfinite(c.F)) {
            out.min_f_second_quadrant = std::min(out.min_f_second_quadrant, c.F);
            out.min_r_minus_f_second_quadrant = std::min(out.min_r_minus_f_second_quadrant, c.R - c.F);
        }
        if (curve.eta && c.s > curve.eta->s) {
            out.min_kappa_after_eta = std::min(out.min_kappa_after_eta, c.kappa);
            const bool q4 = std::cos(c.phi) > 0.0 && std::sin(c.phi) < 0.0;
            out.fourth_quadrant_after_eta = out.fourth_quadrant_after_eta && q4;
        }
    }

    // Terminal stretches, scanned backwards from the end.
    {
        std::size_t i = v.size();
        while (i > 0 && v[i - 1].s >= s_end)
            --i;
        double start = s_end;
        std::size_t j = i;
        while (j > 0 && v[j - 1].kappa < 0.0)
            start = v[--j].s;
        out.trailing_negative_kappa = s_end - start;
        j = i;
        std::optional<double> from;
        while (j > 0) {
            const CurveSample& c = v[j - 1];
            if (c.x * std::cos(c.phi) + c.y * std::sin(c.phi) > 0.0) {
                from = c.s;
                --j;
            } else
                break;
        }
        if (from && j < i)
            out.radial_violation_from = from;
    }

    // Matched heights: rising part (0, delta), falling part (delta, min(eta, beta)).
    if (curve.delta) {
        const double sd = curve.delta->s;
        const double yd = curve.delta->y;
        const double s_low_end = curve.eta && curve.eta->s < s_end ? curve.eta->s : s_end;
        std::vector<const CurveSample*> upper;
        for (const CurveSample& c : v)
            if (c.s > 0.0 && c.s < sd)
                upper.push_back(&c);
        const double y_floor = upper.empty() ? yd : upper.front()->y;
        for (const CurveSample& c : v) {
            if (c.s <= sd || c.s >= s_low_end)
                continue;
            if (c.y >= yd - 1e-6 * std::max(1.0, yd) || c.y <= y_floor)
                continue;
            auto it = std::lower_bound(upper.begin(), upper.end(), c.y, [](const CurveSample* u, double y) { return u->y < y; });
            if (it == upper.begin() || it == upper.end())
                continue;
            double lo = (*(it - 1))->s;
            double hi = (*it)->s;
            for (int k = 0; k < 60 && hi - lo > 1e-14; ++k) {
                const double mid = 0.5 * (lo + hi);
                if (state_at(curve, mid).y < c.y)
                    lo = mid;
                else
                    hi = mid;
            }
            const CurveSample partner = state_at(curve, 0.5 * (lo + hi));
            MatchedPair mp{partner.s, c.s, c.y, partner.kappa, c.kappa};
            out.min_pair_gap = std::min(out.min_pair_gap, mp.kappa_lower - mp.kappa_upper);
            out.max_pair_gap = std::max(out.max_pair_gap, mp.kappa_lower - mp.kappa_upper);
            out.pairs.push_back(mp);
        }
    }
    return out;
}

} // namespace rpiso
