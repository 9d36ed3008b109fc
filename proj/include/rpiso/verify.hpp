#pragma once

#include "rpiso/circle_analysis.hpp"
#include "rpiso/density.hpp"
#include "rpiso/geometry.hpp"
#include "rpiso/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace rpiso
{

/// Result of one named check. A positive margin means the claim held with room to spare.
struct CheckReport
{
    std::string id;
    std::string claim;
    bool passed = false;
    double margin = 0.0;
    std::string detail;
    std::string inputs;
    std::uint64_t seed = 0;
};

namespace detail
{
inline std::string describe(const ShotConfig& cfg)
{
    std::ostringstream os;
    os.precision(17);
    os << "n=" << cfg.n << " density=" << cfg.density.name() << " kappa0=" << cfg.kappa0 << " step_tol=" << cfg.tol.step_tol;
    return os.str();
}

/// Collects named sub-assertions and reduces them to one report.
class Assertions
{
public:
    void require(const std::string& name, bool ok, double margin)
    {
        if (!ok) {
            failed_.push_back(name);
            if (!std::isnan(margin))
                worst_ = std::min(worst_, margin);
            else
                worst_ = std::min(worst_, 0.0);
        } else if (std::isfinite(margin))
            best_ = std::min(best_, margin);
    }

    void fill(CheckReport& r) const
    {
        r.passed = failed_.empty();
        if (r.passed)
            r.margin = std::isfinite(best_) ? best_ : 0.0;
        else {
            r.margin = worst_;
            std::ostringstream os;
            os << "failed:";
            for (const auto& f : failed_)
                os << ' ' << f;
            r.detail = os.str() + (r.detail.empty() ? "" : "; " + r.detail);
        }
    }

private:
    std::vector<std::string> failed_;
    double worst_ = std::numeric_limits<double>::infinity();
    double best_ = std::numeric_limits<double>::infinity();
};

template <class T>
std::string num(T v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}
} // namespace detail

inline constexpr double gmc_spread_tol = 1e-9;

/// Generalized mean curvature sampled on the circle centred (a, 0) through the origin.
inline CheckReport check_constant_gmc_on_circle(double a, int n, const RadialDensity& d, int samples = 1000)
{
    CheckReport r;
    r.id = "constant-gmc-circle";
    r.claim = "hyperspheres through the origin have constant generalized mean curvature";
    r.inputs = "a=" + detail::num(a) + " n=" + std::to_string(n) + " density=" + d.name();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double h1_err = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double t = pi * (k + 0.5) / samples;
        const Point2 q{a + a * std::cos(t), a * std::sin(t)};
        const UnitVector tan = UnitVector::from_angle(t + pi / 2);
        const double v = hf(q, tan, 1.0 / a, n, d);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        if (d.is_power())
            h1_err = std::max(h1_err, std::abs(h1_value(q, tan.clockwise(), d) - d.p() / (2 * a)));
    }
    const double spread = hi - lo;
    detail::Assertions as;
    as.require("spread", spread <= gmc_spread_tol, gmc_spread_tol - spread);
    double value_err = 0.0;
    if (d.is_power()) {
        const double expected = (2.0 * (n - 1) + d.p()) / (2.0 * a);
        value_err = std::max(std::abs(lo - expected), std::abs(hi - expected));
        as.require("value", value_err <= gmc_spread_tol, gmc_spread_tol - value_err);
        as.require("density-term", h1_err <= gmc_spread_tol, gmc_spread_tol - h1_err);
    }
    r.detail = "spread=" + detail::num(spread) + " value=" + detail::num(0.5 * (lo + hi)) + " value_err=" + detail::num(value_err);
    as.fill(r);
    return r;
}

/// For a non-power density the same circles must fail to have constant curvature.
inline CheckReport check_rp_uniqueness(const RadialDensity& other, double a, int n = 3, int samples = 1000)
{
    CheckReport r;
    r.id = "rp-uniqueness";
    r.claim = "among radial densities only r^p (up to scale) gives circles through the origin constant curvature";
    r.inputs = "a=" + detail::num(a) + " n=" + std::to_string(n) + " density=" + other.name();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int k = 0; k < samples; ++k) {
        const double t = pi * (k + 0.5) / samples;
        const Point2 q{a + a * std::cos(t), a * std::sin(t)};
        const double v = hf(q, UnitVector::from_angle(t + pi / 2), 1.0 / a, n, other);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double spread = hi - lo;
    r.passed = spread > 1e-3;
    r.margin = spread - 1e-3;
    r.detail = "spread=" + detail::num(spread);
    return r;
}

inline constexpr double radial_speed_tol = 1e-8;

/// Sign of gamma . gamma' along the curve: non-positive on the closing circle, with a
/// terminal positive stretch for the left and right cases.
inline CheckReport check_tangent_restriction(const ShotCurve& curve)
{
    CheckReport r;
    r.id = "tangent-restriction";
    r.claim = "gamma . gamma' <= 0 on a spherically symmetric minimizer; other shots end with gamma . gamma' > 0";
    r.inputs = detail::describe(curve.config);
    const FeatureReport f = extract_features(curve);
    const ShotOutcome outcome = classify(curve);
    r.detail = "outcome=" + std::string(to_string(outcome)) + " max=" + detail::num(f.max_radial_speed);
    if (f.radial_violation_from)
        r.detail += " positive_from_s=" + detail::num(*f.radial_violation_from);
    if (outcome == ShotOutcome::closed) {
        r.passed = f.max_radial_speed <= radial_speed_tol;
        r.margin = radial_speed_tol - f.max_radial_speed;
    } else if (curve.config.kappa0 != 2.0 && outcome != ShotOutcome::out_of_regime) {
        r.passed = f.radial_violation_from.has_value() && f.max_radial_speed > 0.0;
        r.margin = f.max_radial_speed;
    } else {
        r.passed = false;
        r.margin = 0.0;
        r.detail += " (no claim for this outcome)";
    }
    return r;
}

inline constexpr double kappa_lambda_tol = 1e-5;
inline constexpr double circle_identity_tol = 1e-6;
inline constexpr double circle_identity_radius = 0.1;

/// Largest departure from kappa = lambda = kappa0 and F = 1 - 1/kappa0 on the part
/// of a closing shot at least min_radius from the origin, up to the
/// closest approach (past it the curve has left the circle).
inline double closing_identity_error(const ShotCurve& curve, double min_radius = circle_identity_radius)
{
    const double k0 = curve.config.kappa0;
    const double f0 = 1.0 - 1.0 / k0;
    const double s_end = curve.closest_approach ? curve.closest_approach->s : curve.samples.back().s;
    double worst = 0.0;
    for (const CurveSample& c : curve.samples) {
        if (c.s <= 0.0 || c.s > s_end || c.point().norm() < min_radius || !std::isfinite(c.F))
            continue;
        worst = std::max({worst, std::abs(c.kappa - k0), std::abs(c.lambda - k0), std::abs(c.F - f0)});
    }
    return worst;
}

/// Full feature list for the shot's expected class, which follows from kappa0.
inline CheckReport check_case_features(const ShotCurve& curve)
{
    CheckReport r;
    r.id = "case-features";
    r.inputs = detail::describe(curve.config);
    const double k0 = curve.config.kappa0;
    const ShotOutcome outcome = classify(curve);
    const FeatureReport f = extract_features(curve);
    detail::Assertions as;
    const bool closing = k0 == 2.0 || (curve.config.density.is_power() && curve.config.density.p() == 0.0);

    if (closing) {
        r.claim = "the shot closes up on the circle through (1,0) centred on the axis";
        const double miss = curve.closest_approach ? curve.closest_approach->point().norm() : 1.0;
        as.require("closed", outcome == ShotOutcome::closed, curve.config.tol.origin_radius - miss);
        const double worst = closing_identity_error(curve);
        as.require("kappa=lambda=kappa0,F=F0", worst <= circle_identity_tol, circle_identity_tol - worst);
        r.detail = "max_identity_err=" + detail::num(worst) + " origin_miss=" + detail::num(miss);
    } else if (k0 > 2.0) {
        r.claim = "F(0) > 1/2: the curve returns right of the origin with a fourth-quadrant tangent";
        as.require("right-case", outcome == ShotOutcome::right_case, 0.0);
        const double bx = curve.beta ? curve.beta->x : std::numeric_limits<double>::quiet_NaN();
        as.require("x(beta)>0", bx > 0.0, bx);
        const double bc = curve.beta ? std::cos(curve.beta->phi) : -1.0;
        as.require("final-tangent-q4", curve.beta && detail::heads_right(*curve.beta, curve), bc);
        as.require("delta", f.delta.has_value(), 1.0);
        as.require("eta", f.eta.has_value(), 1.0);
        const double ex = f.eta ? f.eta->x : std::numeric_limits<double>::quiet_NaN();
        as.require("x(eta)>0", f.eta && ex > 0.0, ex);
        as.require("F>R-upper", f.min_upper_f_minus_r > 0.0, f.min_upper_f_minus_r);
        as.require("pairs", !f.pairs.empty(), 1.0);
        as.require("kappa-lower>kappa-upper", !f.pairs.empty() && f.min_pair_gap > 0.0, f.min_pair_gap);
        as.require("kappa>0-after-eta", f.eta && f.min_kappa_after_eta > 0.0, f.min_kappa_after_eta);
        as.require("q4-after-eta", f.fourth_quadrant_after_eta, 0.0);
        r.detail = "x(beta)=" + detail::num(bx) + " x(eta)=" + detail::num(ex) + " min_pair_gap=" + detail::num(f.min_pair_gap) +
                   " min_F-R=" + detail::num(f.min_upper_f_minus_r);
    } else {
        r.claim = "F(0) < 1/2: the curve returns left of the origin with a third-quadrant tangent";
        as.require("left-case", outcome == ShotOutcome::left_case, 0.0);
        const double bx = curve.beta ? curve.beta->x : std::numeric_limits<double>::quiet_NaN();
        as.require("x(beta)<0", bx < 0.0, -bx);
        as.require("final-tangent-q3", curve.beta && detail::heads_left(*curve.beta, curve), 0.0);
        as.require("one-horizontal-tangent", f.horizontal_tangent_count == 1, 0.0);
        as.require("kappa<0-near-beta", f.trailing_negative_kappa > 0.0, f.trailing_negative_kappa);
        as.require("pairs", !f.pairs.empty(), 1.0);
        as.require("kappa-lower<kappa-upper", !f.pairs.empty() && f.max_pair_gap < 0.0, -f.max_pair_gap);
        as.require("kappa<=lambda-right-half", f.max_kappa_minus_lambda_right_half <= kappa_lambda_tol,
                   kappa_lambda_tol - f.max_kappa_minus_lambda_right_half);
        as.require("F>0-q2", f.min_f_second_quadrant > 0.0, f.min_f_second_quadrant);
        as.require("F<R-q2", f.min_r_minus_f_second_quadrant > 0.0, f.min_r_minus_f_second_quadrant);
        r.detail = "x(beta)=" + detail::num(bx) + " horizontal=" + std::to_string(f.horizontal_tangent_count) +
                   " max_pair_gap=" + detail::num(f.max_pair_gap) + " trailing_negative=" + detail::num(f.trailing_negative_kappa);
    }
    r.detail = "outcome=" + std::string(to_string(outcome)) + " " + r.detail;
    as.fill(r);
    return r;
}

/// Closed form of kappa''(0) for the power density, from the series of the ODE at
/// the start: with a = 1 - 1/kappa0 and r = 1/kappa0,
/// kappa''(0) = 3 p a (a - r) / ((n + 1) r^2 (a + r)^3).
inline double kappa_second_at_start_closed_form(int n, double p, double kappa0)
{
    const double a = 1.0 - 1.0 / kappa0;
    const double r = 1.0 / kappa0;
    return 3.0 * p * a * (a - r) / ((n + 1) * r * r * (a + r) * (a + r) * (a + r));
}

inline CheckReport check_kappa_second_sign(const ShotCurve& curve)
{
    CheckReport r;
    r.id = "kappa-second-sign";
    r.claim = "kappa''(0) has the sign of F(0) - 1/2";
    r.inputs = detail::describe(curve.config);
    const double k2 = kappa_second_at_start(curve);
    const double f0 = curve.config.f0();
    const double want = f0 - 0.5;
    r.passed = want != 0.0 && (k2 > 0.0) == (want > 0.0) && k2 != 0.0;
    r.margin = want > 0.0 ? k2 : -k2;
    r.detail = "kappa''(0)=" + detail::num(k2) + " F(0)=" + detail::num(f0);
    if (curve.config.density.is_power())
        r.detail += " closed_form=" + detail::num(kappa_second_at_start_closed_form(curve.config.n, curve.config.density.p(), curve.config.kappa0));
    return r;
}

inline constexpr double h1_strict_margin = 1e-12;

/// Randomised admissible configurations must order the density term strictly.
inline CheckReport check_admissibility(bool right, int count, std::uint64_t seed)
{
    CheckReport r;
    r.id = right ? "admissible-right" : "admissible-left";
    r.claim = right ? "right-admissible directions give the larger density term at the right point"
                    : "left-admissible directions give the larger density term at the left point";
    r.seed = seed;
    r.inputs = "count=" + std::to_string(count) + " seed=" + std::to_string(seed);
    std::mt19937_64 rng(seed);
    std::size_t rejections = 0;
    int counterexamples = 0;
    int near_equal = 0;
    double worst = std::numeric_limits<double>::infinity();
    std::string first_bad;
    for (int k = 0; k < count; ++k) {
        const SampledConfiguration s = right ? sample_right_admissible(rng) : sample_left_admissible(rng);
        rejections += s.rejections;
        const PairConfiguration& c = s.config;
        const H1Comparison cmp = h1_compare(c.p1, c.p2, c.v1, c.v2);
        const double scale = std::max({1.0, std::abs(cmp.first), std::abs(cmp.second)});
        const double tol = h1_strict_margin * scale;
        const double m = right ? cmp.margin() : -cmp.margin();
        worst = std::min(worst, m);
        bool bad = right ? m < tol : m < -tol;
        if (!right && std::abs(m) <= tol)
            ++near_equal;
        if (bad) {
            ++counterexamples;
            if (first_bad.empty()) {
                std::ostringstream os;
                os.precision(17);
                os << "p1=(" << c.p1.x << "," << c.p1.y << ") p2=(" << c.p2.x << "," << c.p2.y << ") v1=(" << c.v1.ux() << ","
                   << c.v1.uy() << ") v2=(" << c.v2.ux() << "," << c.v2.uy() << ") margin=" << m;
                first_bad = os.str();
            }
        }
    }
    r.passed = counterexamples == 0;
    r.margin = worst;
    const double rate = static_cast<double>(rejections) / static_cast<double>(rejections + count);
    r.detail = "counterexamples=" + std::to_string(counterexamples) + " near_equal=" + std::to_string(near_equal) +
               " rejection_rate=" + detail::num(rate) + (first_bad.empty() ? "" : " first=" + first_bad);
    return r;
}

/// Observed convergence order of centred differences against the closed-form
/// derivatives, aggregated over random osculating circles and lines.
struct TildeConvergence
{
    std::array<double, 4> ratio{}; ///< error(h) / error(h/2) for F, R, G, H1
    std::array<double, 4> error{}; ///< aggregated error at h/2
    double max_g_identity = 0.0;   ///< max |G - (F - R)|
};

inline TildeConvergence tilde_convergence(OsculatingCircle::Kind kind, int count, std::uint64_t seed, double h = 1e-3)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const RadialDensity d = RadialDensity::power(1.0 + 2.0 * u(rng));
    std::array<double, 4> e1{}, e2{};
    TildeConvergence out;
    int used = 0;
    while (used < count) {
        OsculatingCircle A;
        double t = 0.0;
        if (kind == OsculatingCircle::Kind::line) {
            const UnitVector v = UnitVector::from_angle(pi / 2 + pi * (0.1 + 0.8 * u(rng)));
            A = OsculatingCircle::line({0.5 + u(rng), 0.5 + u(rng)}, v);
            t = 0.3 * (u(rng) - 0.5);
        } else {
            const double r = 0.2 + 0.6 * u(rng);
            const double a = 0.5 + u(rng);
            const double b = 0.3 + 0.5 * u(rng);
            A = kind == OsculatingCircle::Kind::ccw ? OsculatingCircle::counterclockwise(a, b, r) : OsculatingCircle::clockwise(a, b, r);
            t = r * (0.3 + 2.5 * u(rng));
        }
        const Point2 q = A.position(t);
        if (q.y < 0.05 || q.norm() < 0.2 || std::abs(A.tangent(t).ux()) < 0.2)
            continue;
        if (kind != OsculatingCircle::Kind::line && std::abs(std::sin(t / A.r)) < 0.2)
            continue;
        const TildeSample c = tilde_quantities(A, t, d);
        out.max_g_identity = std::max(out.max_g_identity, std::abs(c.gt - (c.ft - c.rt)));
        const auto fd = [&](double step) {
            const TildeSample p = tilde_quantities(A, t + step, d);
            const TildeSample m = tilde_quantities(A, t - step, d);
            return std::array<double, 4>{std::abs((p.ft - m.ft) / (2 * step) - c.dft), std::abs((p.rt - m.rt) / (2 * step) - c.drt),
                                         std::abs((p.gt - m.gt) / (2 * step) - c.dgt), std::abs((p.h1t - m.h1t) / (2 * step) - c.dh1t)};
        };
        const auto a1 = fd(h);
        const auto a2 = fd(h / 2);
        for (int k = 0; k < 4; ++k) {
            e1[k] += a1[k];
            e2[k] += a2[k];
        }
        ++used;
    }
    for (int k = 0; k < 4; ++k) {
        out.ratio[k] = e1[k] / e2[k];
        out.error[k] = e2[k] / count;
    }
    return out;
}

inline CheckReport check_tilde_derivatives(int count, std::uint64_t seed)
{
    CheckReport r;
    r.id = "tilde-derivatives";
    r.claim = "closed-form derivatives of the transported canonical-circle quantities match centred differences at second order";
    r.seed = seed;
    r.inputs = "count=" + std::to_string(count) + " seed=" + std::to_string(seed);
    detail::Assertions as;
    const char* names[] = {"ccw", "cw", "line"};
    const char* quantity[] = {"F", "R", "G", "H1"};
    const OsculatingCircle::Kind kinds[] = {OsculatingCircle::Kind::ccw, OsculatingCircle::Kind::cw, OsculatingCircle::Kind::line};
    std::ostringstream os;
    for (int k = 0; k < 3; ++k) {
        const TildeConvergence c = tilde_convergence(kinds[k], count, seed + k);
        as.require(std::string(names[k]) + "-G-identity", c.max_g_identity == 0.0, -c.max_g_identity);
        for (int q = 0; q < 4; ++q) {
            // R on a line has constant derivative and G likewise only through F - R,
            // so the centred difference is exact up to rounding there.
            const bool exact = kinds[k] == OsculatingCircle::Kind::line && q != 3;
            if (exact) {
                as.require(std::string(names[k]) + "-" + quantity[q] + "-exact", c.error[q] < 1e-9, 1e-9 - c.error[q]);
                os << names[k] << '.' << quantity[q] << ".err=" << detail::num(c.error[q]) << ' ';
            } else {
                const bool ok = c.ratio[q] >= 3.5 && c.ratio[q] <= 4.5;
                as.require(std::string(names[k]) + "-" + quantity[q] + "-order", ok, std::min(c.ratio[q] - 3.5, 4.5 - c.ratio[q]));
                os << names[k] << '.' << quantity[q] << ".ratio=" << detail::num(c.ratio[q]) << ' ';
            }
        }
    }
    r.detail = os.str();
    as.fill(r);
    return r;
}

struct SuiteOptions
{
    std::vector<int> dimensions{3, 4, 7};
    std::vector<double> exponents{0.5, 1.0, 2.0, 5.0};
    std::vector<double> left_kappa0{1.1, 1.5, 1.9};
    std::vector<double> right_kappa0{2.2, 3.0, 5.0};
    std::vector<double> second_derivative_kappa0{1.2, 1.8, 2.2, 4.0};
    std::vector<double> circle_radii{0.25, 0.5, 2.0};
    int admissible_count = 10000;
    int tilde_count = 200;
    std::uint64_t seed = 20240601;
    ShotTolerances tolerances{};
};

/// Every check over the default grid. Grid cells run concurrently.
inline std::vector<CheckReport> run_suite(const SuiteOptions& opt)
{
    std::vector<std::future<std::vector<CheckReport>>> jobs;
    for (int n : opt.dimensions)
        for (double p : opt.exponents)
            jobs.push_back(std::async(std::launch::async, [n, p, &opt] {
                std::vector<CheckReport> out;
                const RadialDensity d = RadialDensity::power(p);
                for (double a : opt.circle_radii)
                    out.push_back(check_constant_gmc_on_circle(a, n, d));
                std::vector<double> ks = opt.left_kappa0;
                ks.insert(ks.end(), opt.right_kappa0.begin(), opt.right_kappa0.end());
                for (double k : ks) {
                    const ShotCurve c = integrate(init_shot(n, d, k, opt.tolerances));
                    out.push_back(check_case_features(c));
                    out.push_back(check_tangent_restriction(c));
                }
                for (double k : opt.second_derivative_kappa0)
                    out.push_back(check_kappa_second_sign(integrate(init_shot(n, d, k, opt.tolerances))));
                return out;
            }));
    std::vector<CheckReport> all;
    all.push_back(check_rp_uniqueness(RadialDensity::linear_log(), 0.5, 3));
    all.push_back(check_admissibility(true, opt.admissible_count, opt.seed));
    all.push_back(check_admissibility(false, opt.admissible_count, opt.seed + 1));
    all.push_back(check_tilde_derivatives(opt.tilde_count, opt.seed + 2));
    for (auto& j : jobs) {
        auto part = j.get();
        all.insert(all.end(), part.begin(), part.end());
    }
    return all;
}

} // namespace rpiso
