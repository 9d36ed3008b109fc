#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rpiso
{

enum class Errc
{
    invalid_argument,
    singular_point,
    undefined_canonical_circle,
    out_of_domain,
    invalid_configuration,
    no_solution,
    invalid_bracket,
    integration_domain,
    step_failure,
    quadrature_failure,
    io_error,
};

constexpr std::string_view to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::singular_point: return "singular-point";
    case Errc::undefined_canonical_circle: return "undefined-canonical-circle";
    case Errc::out_of_domain: return "out-of-domain";
    case Errc::invalid_configuration: return "invalid-configuration";
    case Errc::no_solution: return "no-solution";
    case Errc::invalid_bracket: return "invalid-bracket";
    case Errc::integration_domain: return "integration-domain";
    case Errc::step_failure: return "step-failure";
    case Errc::quadrature_failure: return "quadrature-failure";
    case Errc::io_error: return "io-error";
    }
    return "unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error
{
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace rpiso
