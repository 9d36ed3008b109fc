#pragma once

#include "rpiso/error.hpp"
#include "rpiso/measures.hpp"
#include "rpiso/shooting.hpp"
#include "rpiso/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace rpiso
{

inline constexpr const char* curve_csv_header = "s,x,y,phi,kappa,lambda,F,R,H1";

namespace detail
{
inline std::string g17(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string f4(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    // avoid "-0.0000" so output does not depend on the sign of tiny values
    return std::string(buf) == "-0.0000" ? "0.0000" : buf;
}
} // namespace detail

inline void write_curve_csv(const ShotCurve& curve, std::ostream& os)
{
    os << curve_csv_header << '\n';
    for (const CurveSample& c : curve.samples)
        os << detail::g17(c.s) << ',' << detail::g17(c.x) << ',' << detail::g17(c.y) << ',' << detail::g17(c.phi) << ','
           << detail::g17(c.kappa) << ',' << detail::g17(c.lambda) << ',' << detail::g17(c.F) << ',' << detail::g17(c.R) << ','
           << detail::g17(c.H1) << '\n';
}

inline std::vector<CurveSample> read_curve_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line != curve_csv_header)
        throw Error(Errc::io_error, "missing curve CSV header");
    std::vector<CurveSample> out;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::array<double, 9> v{};
        std::istringstream ls(line);
        std::string field;
        std::size_t k = 0;
        while (std::getline(ls, field, ',')) {
            if (k >= v.size())
                throw Error(Errc::io_error, "too many fields in curve row");
            try {
                v[k++] = std::stod(field);
            } catch (const std::exception&) {
                // stod rejects "nan"/"inf" spellings on some platforms
                if (field == "nan" || field == "-nan")
                    v[k - 1] = std::numeric_limits<double>::quiet_NaN();
                else if (field == "inf")
                    v[k - 1] = std::numeric_limits<double>::infinity();
                else if (field == "-inf")
                    v[k - 1] = -std::numeric_limits<double>::infinity();
                else
                    throw Error(Errc::io_error, "bad number in curve row: " + field);
            }
        }
        if (k != v.size())
            throw Error(Errc::io_error, "too few fields in curve row");
        out.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]});
    }
    return out;
}

inline void save_curve_csv(const ShotCurve& curve, const std::string& path)
{
    std::ofstream os(path);
    if (!os)
        throw Error(Errc::io_error, "cannot open " + path);
    write_curve_csv(curve, os);
}

inline std::vector<CurveSample> load_curve_csv(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw Error(Errc::io_error, "cannot open " + path);
    return read_curve_csv(is);
}

inline nlohmann::json to_json(const EventPoint& e)
{
    return {{"s", e.s}, {"x", e.x}, {"y", e.y}, {"phi", e.phi}};
}

inline nlohmann::json shot_summary(const ShotCurve& curve)
{
    const auto opt = [](const std::optional<EventPoint>& e) { return e ? to_json(*e) : nlohmann::json(nullptr); };
    nlohmann::json j;
    j["n"] = curve.config.n;
    j["density"] = curve.config.density.name();
    j["kappa0"] = curve.config.kappa0;
    j["c"] = curve.config.c;
    j["outcome"] = std::string(to_string(classify(curve)));
    j["termination"] = std::string(to_string(curve.termination));
    j["events"] = {{"delta", opt(curve.delta)}, {"eta", opt(curve.eta)}, {"beta", opt(curve.beta)},
                   {"closest_approach", opt(curve.closest_approach)}};
    j["endpoint"] = {curve.endpoint.x, curve.endpoint.y};
    j["horizontal_tangents"] = curve.horizontal_tangent_count;
    j["samples"] = curve.samples.size();
    if (!curve.failure.empty())
        j["failure"] = curve.failure;
    return j;
}

inline nlohmann::json to_json(const ClosingResult& r)
{
    nlohmann::json trace = nlohmann::json::array();
    for (const BracketStep& b : r.trace)
        trace.push_back({{"lo", b.lo}, {"hi", b.hi}, {"mid", b.mid}, {"mid_right", b.mid_right ? nlohmann::json(*b.mid_right) : nullptr}});
    return {{"kappa0", r.kappa0}, {"lo", r.lo}, {"hi", r.hi}, {"exact_hit", r.exact_hit}, {"trace", trace}};
}

inline nlohmann::json to_json(const IsoperimetricComparison& c)
{
    return {{"n", c.n}, {"p", c.p}, {"V", c.volume}, {"P_origin", c.origin_perimeter}, {"P_centered", c.centered_perimeter},
            {"ratio", c.ratio()}};
}

inline nlohmann::json to_json(const CheckReport& r)
{
    return {{"id", r.id}, {"claim", r.claim}, {"passed", r.passed}, {"margin", r.margin},
            {"detail", r.detail}, {"inputs", r.inputs}, {"seed", r.seed}};
}

inline void write_checks_csv(const std::vector<CheckReport>& rs, std::ostream& os)
{
    const auto quote = [](const std::string& s) {
        std::string out = "\"";
        for (char ch : s)
            out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return out + '"';
    };
    os << "id,passed,margin,inputs,seed,detail\n";
    for (const CheckReport& r : rs)
        os << r.id << ',' << (r.passed ? 1 : 0) << ',' << detail::g17(r.margin) << ',' << quote(r.inputs) << ',' << r.seed << ','
           << quote(r.detail) << '\n';
}

/// Static plot of the generating curve, its mirror image, the axis and the
/// delta / eta / beta markers. Coordinates are printed at fixed precision so
/// the file is byte-identical for identical inputs.
inline void write_curve_svg(const ShotCurve& curve, std::ostream& os, int width = 640)
{
    double xmin = 0.0, xmax = 0.0, ymax = 0.0;
    for (const CurveSample& c : curve.samples) {
        xmin = std::min(xmin, c.x);
        xmax = std::max(xmax, c.x);
        ymax = std::max(ymax, std::abs(c.y));
    }
    const double span = std::max({xmax - xmin, 2.0 * ymax, 1e-9});
    const double pad = 0.08 * span;
    const double scale = (width - 1) / (span + 2 * pad);
    const double height = std::ceil((2.0 * ymax + 2 * pad) * scale);
    const auto px = [&](double x) { return detail::f4((x - xmin + pad) * scale); };
    const auto py = [&](double y) { return detail::f4(height / 2 - y * scale); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 " << width
       << ' ' << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"0\" y1=\"" << py(0) << "\" x2=\"" << width << "\" y2=\"" << py(0)
       << "\" stroke=\"#888\" stroke-width=\"1\"/>\n";
    os << "<circle cx=\"" << px(0) << "\" cy=\"" << py(0) << "\" r=\"3\" fill=\"black\"/>\n";
    const auto polyline = [&](double sign, const char* style) {
        os << "<polyline fill=\"none\" " << style << " points=\"";
        bool first = true;
        for (const CurveSample& c : curve.samples) {
            os << (first ? "" : " ") << px(c.x) << ',' << py(sign * c.y);
            first = false;
        }
        os << "\"/>\n";
    };
    polyline(1.0, "stroke=\"#1f4e9c\" stroke-width=\"1.5\"");
    polyline(-1.0, "stroke=\"#1f4e9c\" stroke-width=\"1\" stroke-dasharray=\"4 3\"");
    const auto marker = [&](const std::optional<EventPoint>& e, const char* label, const char* colour) {
        if (!e)
            return;
        os << "<circle cx=\"" << px(e->x) << "\" cy=\"" << py(e->y) << "\" r=\"4\" fill=\"" << colour << "\"/>\n";
        os << "<text x=\"" << px(e->x) << "\" y=\"" << py(e->y) << "\" dx=\"6\" dy=\"-6\" font-family=\"serif\" font-size=\"14\">"
           << label << "</text>\n";
    };
    marker(curve.delta, "&#948;", "#c0392b");
    marker(curve.eta, "&#951;", "#27ae60");
    marker(curve.beta, "&#946;", "#8e44ad");
    os << "</svg>\n";
}

inline void save_curve_svg(const ShotCurve& curve, const std::string& path)
{
    std::ofstream os(path);
    if (!os)
        throw Error(Errc::io_error, "cannot open " + path);
    write_curve_svg(curve, os);
}

} // namespace rpiso
