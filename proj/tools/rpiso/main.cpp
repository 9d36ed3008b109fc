// Command-line front end for the shooting, measure, symmetrization and verify code.

#include "rpiso/rpiso.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace
{

using rpiso::Errc;
using rpiso::Error;
using nlohmann::json;

// Defaults for every subcommand. Flags and an optional --config file (TOML/INI)
// override them; the environment is never consulted.
struct RunConfig
{
    int n = 3;
    double p = 1.0;
    double kappa0 = 1.5;
    std::vector<double> bracket{1.5, 3.0};
    double tol = 1e-7;
    rpiso::ShotTolerances shot{};
    std::string out;
    std::string svg;
    std::string in;
    std::string format = "json";
    std::string density = "power";
    std::uint64_t seed = 20240601;
    bool experimental = false;

    double volume = 1.0;
    double radius = 1.0;
    std::string family = "centered";
    std::string shape = "cone";
    int grid = 512;
    int admissible = 10000;
};

rpiso::RadialDensity make_density(const RunConfig& rc)
{
    if (rc.density == "power") {
        if (rc.p == 0.0 && !rc.experimental)
            throw Error(Errc::invalid_argument, "p = 0 needs --experimental");
        return rpiso::RadialDensity::power(rc.p);
    }
    if (!rc.experimental)
        throw Error(Errc::invalid_argument, "non-power densities need --experimental");
    if (rc.density == "exp-r")
        return rpiso::RadialDensity::linear_log();
    throw Error(Errc::invalid_argument, "unknown density: " + rc.density);
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_shoot(const RunConfig& rc)
{
    const auto d = make_density(rc);
    const rpiso::ShotCurve curve = rpiso::integrate(rpiso::init_shot(rc.n, d, rc.kappa0, rc.shot, rc.experimental));
    if (!rc.out.empty())
        rpiso::save_curve_csv(curve, rc.out);
    if (!rc.svg.empty())
        rpiso::save_curve_svg(curve, rc.svg);
    if (rc.format == "csv" && rc.out.empty())
        rpiso::write_curve_csv(curve, std::cout);
    else if (rc.format == "svg" && rc.svg.empty())
        rpiso::write_curve_svg(curve, std::cout);
    else
        emit(rpiso::shot_summary(curve));
    return curve.termination == rpiso::Termination::step_failure ? 1 : 0;
}

int cmd_bisect(const RunConfig& rc)
{
    if (rc.bracket.size() != 2)
        throw Error(Errc::invalid_argument, "--bracket takes lo,hi");
    const auto d = make_density(rc);
    const rpiso::ClosingResult r = rpiso::find_closing_kappa0(rc.n, d, rc.bracket[0], rc.bracket[1], rc.tol, rc.shot, rc.experimental);
    if (rc.format == "csv") {
        std::cout << "lo,hi,mid,mid_right\n";
        for (const auto& b : r.trace)
            std::printf("%.17g,%.17g,%.17g,%s\n", b.lo, b.hi, b.mid, b.mid_right ? (*b.mid_right ? "1" : "0") : "");
        std::printf("# kappa0* = %.12g\n", r.kappa0);
    } else
        emit(rpiso::to_json(r));
    return 0;
}

int cmd_measure(const RunConfig& rc)
{
    const auto d = make_density(rc);
    json j{{"n", rc.n}, {"p", rc.p}};
    if (rc.family == "centered") {
        const auto m = rpiso::centered_sphere_measures(rc.radius, rc.n, d);
        j.update({{"family", "centered"}, {"radius", rc.radius}, {"perimeter", m.perimeter}, {"volume", m.volume}});
    } else if (rc.family == "origin") {
        const auto m = rpiso::origin_sphere_measures(rc.radius, rc.n, d);
        j.update({{"family", "origin"}, {"a", rc.radius}, {"perimeter", m.perimeter}, {"volume", m.volume}});
    } else if (rc.family == "shot") {
        const auto curve = rpiso::integrate(rpiso::init_shot(rc.n, d, rc.kappa0, rc.shot, rc.experimental));
        const auto m = rpiso::revolve_measures(curve, d);
        j.update({{"family", "shot"}, {"kappa0", rc.kappa0}, {"perimeter", m.measures.perimeter}, {"volume", m.measures.volume},
                  {"self_intersecting", m.self_intersecting}});
    } else
        throw Error(Errc::invalid_argument, "unknown family: " + rc.family);
    emit(j);
    return 0;
}

int cmd_compare(const RunConfig& rc, bool grid)
{
    std::vector<std::pair<int, double>> cells;
    if (grid) {
        for (int n : {3, 4, 7})
            for (double p : {0.5, 1.0, 2.0, 5.0})
                cells.emplace_back(n, p);
    } else
        cells.emplace_back(rc.n, rc.p);
    std::vector<rpiso::IsoperimetricComparison> rows;
    for (auto [n, p] : cells) {
        RunConfig c = rc;
        c.n = n;
        c.p = p;
        rows.push_back(rpiso::isoperimetric_compare(n, make_density(c), rc.volume));
    }
    if (rc.format == "json") {
        json a = json::array();
        for (const auto& r : rows)
            a.push_back(rpiso::to_json(r));
        emit(a);
    } else {
        std::cout << "n,p,V,P_origin,P_centered,ratio\n";
        for (const auto& r : rows)
            std::printf("%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.n, r.p, r.volume, r.origin_perimeter, r.centered_perimeter, r.ratio());
    }
    return 0;
}

json raster_json(const rpiso::PolarRaster& e, const rpiso::RadialDensity& d)
{
    const auto m = rpiso::raster_measures(e, d);
    return {{"perimeter", m.perimeter}, {"volume", m.volume}};
}

int cmd_rasterize(const RunConfig& rc)
{
    if (rc.out.empty())
        throw Error(Errc::invalid_argument, "rasterize needs --out");
    const rpiso::Shape s = rpiso::shapes::by_name(rc.shape);
    const auto e = rpiso::rasterize(rpiso::PolarRaster::uniform(rc.n, 1.0, rc.grid, rc.grid), s.inside);
    rpiso::save_raster(e, rc.out);
    emit({{"shape", s.name}, {"grid", rc.grid}, {"measures", raster_json(e, make_density(rc))}});
    return 0;
}

int cmd_symmetrize(const RunConfig& rc)
{
    if (rc.in.empty() || rc.out.empty())
        throw Error(Errc::invalid_argument, "symmetrize needs --in and --out");
    const rpiso::PolarRaster e = rpiso::load_raster(rc.in);
    const rpiso::PolarRaster s = rpiso::symmetrize(e);
    rpiso::save_raster(s, rc.out);
    const auto d = make_density(rc);
    emit({{"before", raster_json(e, d)}, {"after", raster_json(s, d)}});
    return 0;
}

int cmd_verify(const RunConfig& rc)
{
    rpiso::SuiteOptions opt;
    opt.seed = rc.seed;
    opt.admissible_count = rc.admissible;
    opt.tolerances = rc.shot;
    const auto reports = rpiso::run_suite(opt);
    std::size_t failed = 0;
    for (const auto& r : reports)
        failed += r.passed ? 0 : 1;
    std::ofstream file;
    if (!rc.out.empty()) {
        file.open(rc.out);
        if (!file)
            throw Error(Errc::io_error, "cannot open " + rc.out);
    }
    std::ostream& os = rc.out.empty() ? std::cout : file;
    if (rc.format == "csv")
        rpiso::write_checks_csv(reports, os);
    else {
        json a = json::array();
        for (const auto& r : reports)
            a.push_back(rpiso::to_json(r));
        os << json{{"checks", a}, {"total", reports.size()}, {"failed", failed}}.dump(2) << '\n';
    }
    std::cerr << reports.size() - failed << '/' << reports.size() << " checks passed\n";
    return failed == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    RunConfig rc;
    CLI::App app{"Shooting and isoperimetric checks for radial densities r^p"};
    app.set_config("--config", "", "TOML/INI file with option defaults");
    app.require_subcommand(1);

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--n", rc.n, "ambient dimension")->capture_default_str();
        sub->add_option("--p", rc.p, "density exponent")->capture_default_str();
        sub->add_option("--density", rc.density, "power | exp-r")->capture_default_str();
        sub->add_flag("--experimental", rc.experimental, "allow n = 2, p = 0 and non-power densities");
        sub->add_option("--format", rc.format, "output format")->check(CLI::IsMember({"csv", "json", "svg"}))->capture_default_str();
    };
    const auto add_shot = [&](CLI::App* sub) {
        sub->add_option("--step-tol", rc.shot.step_tol, "integrator tolerance")->capture_default_str();
        sub->add_option("--event-tol", rc.shot.event_tol, "event location tolerance")->capture_default_str();
    };

    auto* shoot = app.add_subcommand("shoot", "integrate one generating curve");
    add_common(shoot);
    add_shot(shoot);
    shoot->add_option("--kappa0", rc.kappa0, "initial curvature")->capture_default_str();
    shoot->add_option("--out", rc.out, "curve CSV path");
    shoot->add_option("--svg", rc.svg, "plot path");

    auto* bisect = app.add_subcommand("bisect", "find the closing initial curvature");
    add_common(bisect);
    add_shot(bisect);
    bisect->add_option("--bracket", rc.bracket, "lo,hi")->delimiter(',')->expected(2);
    bisect->add_option("--tol", rc.tol, "bracket width")->capture_default_str();

    auto* measure = app.add_subcommand("measure", "weighted perimeter and volume of one region");
    add_common(measure);
    add_shot(measure);
    measure->add_option("--family", rc.family, "centered | origin | shot")->capture_default_str();
    measure->add_option("--radius", rc.radius, "centered radius or half-diameter of the ball through the origin")->capture_default_str();
    measure->add_option("--kappa0", rc.kappa0, "initial curvature for the shot family");

    auto* compare = app.add_subcommand("compare", "perimeters of the two ball families at equal volume");
    add_common(compare);
    bool grid = false;
    compare->add_option("--volume", rc.volume, "weighted volume")->capture_default_str();
    compare->add_flag("--grid", grid, "sweep n in {3,4,7} and p in {0.5,1,2,5}");

    auto* rasterize = app.add_subcommand("rasterize", "write a test shape as a polar raster");
    add_common(rasterize);
    rasterize->add_option("--shape", rc.shape, "shape name")->capture_default_str();
    rasterize->add_option("--grid", rc.grid, "cells per direction")->capture_default_str();
    rasterize->add_option("--out", rc.out, "raster path (.csv for text)");

    auto* symmetrize = app.add_subcommand("symmetrize", "spherically symmetrize a raster file");
    add_common(symmetrize);
    symmetrize->add_option("--in", rc.in, "input raster");
    symmetrize->add_option("--out", rc.out, "output raster");

    auto* verify = app.add_subcommand("verify", "run the property suite");
    add_shot(verify);
    verify->add_option("--seed", rc.seed, "random seed")->capture_default_str();
    verify->add_option("--samples", rc.admissible, "admissible configurations per case")->capture_default_str();
    verify->add_option("--format", rc.format, "report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    verify->add_option("--out", rc.out, "report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*shoot)
            return cmd_shoot(rc);
        if (*bisect)
            return cmd_bisect(rc);
        if (*measure)
            return cmd_measure(rc);
        if (*compare)
            return cmd_compare(rc, grid);
        if (*rasterize)
            return cmd_rasterize(rc);
        if (*symmetrize)
            return cmd_symmetrize(rc);
        if (*verify)
            return cmd_verify(rc);
    } catch (const Error& e) {
        std::cerr << "error [" << rpiso::to_string(e.code()) << "]: " << e.what() << '\n';
        return e.code() == Errc::invalid_argument ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
