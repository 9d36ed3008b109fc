#pragma once

#include "rpiso/error.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <utility>

namespace rpiso
{

/// Radial density f(x) = exp(g(|x|)).
///
/// The power kind is r^p, i.e. g(r) = p log r, whose log-derivative is exactly p/r.
/// The experimental kind takes an arbitrary smooth log-density g and its derivative;
/// it exists so that non-power profiles can be shown to break the constancy results
/// that single out r^p.
class RadialDensity
{
public:
    enum class Kind
    {
        power,
        experimental
    };

    static RadialDensity power(double p)
    {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw Error(Errc::invalid_argument, "density exponent must be finite and >= 0");
        RadialDensity d;
        d.kind_ = Kind::power;
        d.p_ = p;
        d.name_ = "r^" + std::to_string(p);
        return d;
    }

    /// `log_density` is g, `log_derivative` is g'. Both are evaluated at r > 0 only.
    static RadialDensity experimental(std::string name, std::function<double(double)> log_density,
                                      std::function<double(double)> log_derivative)
    {
        if (!log_density || !log_derivative)
            throw Error(Errc::invalid_argument, "experimental density needs g and g'");
        RadialDensity d;
        d.kind_ = Kind::experimental;
        d.p_ = 0.0;
        d.name_ = std::move(name);
        d.g_ = std::move(log_density);
        d.dg_ = std::move(log_derivative);
        return d;
    }

    /// g(r) = r, the standard non-power counterexample.
    static RadialDensity linear_log() { return experimental("exp(r)", [](double r) { return r; }, [](double) { return 1.0; }); }

    /// g(r) = p log r + shift: the same density as r^p up to a constant factor.
    static RadialDensity shifted_power(double p, double shift)
    {
        return experimental(
            "r^" + std::to_string(p) + "*exp(" + std::to_string(shift) + ")",
            [p, shift](double r) { return p * std::log(r) + shift; }, [p](double r) { return p / r; });
    }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] bool is_power() const noexcept { return kind_ == Kind::power; }
    /// Exponent of the power kind; 0 for experimental densities.
    [[nodiscard]] double p() const noexcept { return p_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }

    [[nodiscard]] double log_density(double r) const
    {
        check_radius(r);
        return is_power() ? p_ * std::log(r) : g_(r);
    }

    [[nodiscard]] double value(double r) const
    {
        check_radius(r);
        return is_power() ? std::pow(r, p_) : std::exp(g_(r));
    }

    [[nodiscard]] double log_derivative(double r) const
    {
        check_radius(r);
        return is_power() ? p_ / r : dg_(r);
    }

private:
    RadialDensity() = default;

    static void check_radius(double r)
    {
        if (!(r > 0.0))
            throw Error(Errc::singular_point, "radial density evaluated at r <= 0");
    }

    Kind kind_ = Kind::power;
    double p_ = 0.0;
    std::string name_;
    std::function<double(double)> g_;
    std::function<double(double)> dg_;
};

} // namespace rpiso
