#pragma once

#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "packing.hpp"

namespace capregion {

/// One boundary curve: the probes of a ray sweep, in sweep order.
struct PlotSeries {
    std::string name;
    std::vector<RayProbe> probes;
};

/// Probes along `rays` evenly spread directions.
inline PlotSeries sweep(std::string name, const RayOracle& oracle, std::size_t rays) {
    PlotSeries s{std::move(name), {}};
    for (const auto& d : spread_directions(rays)) {
        RayQuery q(d);
        RayAnswer a = oracle(q);
        RayProbe p{d, a.lambda, std::nullopt, a.point(q)};
        if (a.bracket) p.upper = a.bracket->second;
        s.probes.push_back(std::move(p));
    }
    return s;
}

/// Exact rationals, one row per probe. With more than one series a leading
/// "series" column names the curve.
inline std::string plot_csv(const std::vector<PlotSeries>& series) {
    const bool tagged = series.size() > 1;
    std::ostringstream out;
    out << (tagged ? "series," : "") << "qx,qy,lambda,rx,ry\n";
    for (const auto& s : series)
        for (const auto& p : s.probes) {
            if (tagged) out << s.name << ',';
            out << p.direction[0].str() << ',' << p.direction[1].str() << ',' << p.lambda.str() << ','
                << p.point[0].str() << ',' << p.point[1].str() << '\n';
        }
    return out.str();
}

namespace detail {

inline std::string fixed6(const Rational& r) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(6) << to_double(r);
    return s.str();
}

}  // namespace detail

/// Overlaid boundary polylines on axes [0, extent] x [0, extent]. Coordinates
/// are rounded to 6 decimals only here.
inline std::string plot_svg(const std::vector<PlotSeries>& series, const Rational& extent) {
    static const char* styles[] = {
        R"(stroke="#1f4e9c" stroke-width="2")",
        R"(stroke="#b8431f" stroke-width="2" stroke-dasharray="6 4")",
        R"(stroke="#2f7d32" stroke-width="1.5" stroke-dasharray="2 3")",
        R"(stroke="#6a3d9a" stroke-width="1.5" stroke-dasharray="8 3 2 3")",
    };
    const Rational g = extent > 0 ? extent : Rational(1);
    const std::string G = detail::fixed6(g);
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" viewBox=\"0 0 " << G << ' ' << G << "\">\n";
    out << "<g transform=\"translate(0," << G << ") scale(1,-1)\" fill=\"none\">\n";
    out << "<polyline points=\"0.000000," << G << " 0.000000,0.000000 " << G
        << ",0.000000\" stroke=\"#000000\" stroke-width=\"1\" vector-effect=\"non-scaling-stroke\"/>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        out << "<polyline data-series=\"" << series[k].name << "\" points=\"";
        const auto& probes = series[k].probes;
        for (std::size_t j = 0; j < probes.size(); ++j)
            out << (j ? " " : "") << detail::fixed6(probes[j].point[0]) << ',' << detail::fixed6(probes[j].point[1]);
        out << "\" " << styles[k % 4] << " vector-effect=\"non-scaling-stroke\"/>\n";
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

}  // namespace capregion
