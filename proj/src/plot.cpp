#include "ks/plot.hpp"

#include "ks/errors.hpp"
#include "ks/sphere_geom.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ks::plot {

double Grid::theta(std::size_t i) const {
    return -kHalfPi + (static_cast<double>(i) + 0.5) * kPi / static_cast<double>(n_theta);
}

double Grid::phi(std::size_t j) const {
    return -kPi + (static_cast<double>(j) + 0.5) * 2.0 * kPi / static_cast<double>(n_phi);
}

Grid sample_grid(const Valuation& v, std::size_t n_theta, std::size_t n_phi) {
    if (n_theta == 0 || n_phi == 0) throw DomainError("grid dimensions must be positive");
    Grid g{n_theta, n_phi, {}};
    g.values.reserve(n_theta * n_phi);
    for (std::size_t i = 0; i < n_theta; ++i) {
        for (std::size_t j = 0; j < n_phi; ++j) {
            const UnitVec3 x = to_cartesian(SphPoint::make(g.theta(i), g.phi(j)));
            g.values.push_back(evaluate(v, x));
        }
    }
    return g;
}

double area_fraction_ones(const Grid& g) {
    double ones = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < g.n_theta; ++i) {
        const double w = std::cos(g.theta(i));
        for (std::size_t j = 0; j < g.n_phi; ++j) {
            total += w;
            if (g.at(i, j) == 1) ones += w;
        }
    }
    return total > 0.0 ? ones / total : 0.0;
}

double cell_fraction_ones(const Grid& g) {
    std::size_t ones = 0;
    for (int v : g.values) ones += static_cast<std::size_t>(v == 1);
    return g.values.empty() ? 0.0 : static_cast<double>(ones) / static_cast<double>(g.values.size());
}

double FigureParams::get(const std::string& key, double fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
    return buf;
}

namespace {

Curve circle_curve(const std::string& label, const DescentCircle& c, std::size_t points) {
    Curve curve{label, {}, false};
    for (std::size_t k = 0; k < points; ++k) {
        const double t = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(points - 1);
        const SphPoint s = from_cartesian(c.point_at_arc(t));
        curve.points.emplace_back(s.theta(), s.phi());
    }
    return curve;
}

Curve meridian_curve(const std::string& label, double phi, std::size_t points) {
    Curve curve{label, {}, false};
    for (std::size_t k = 0; k < points; ++k) {
        const double theta = -kHalfPi + kPi * static_cast<double>(k) / static_cast<double>(points - 1);
        curve.points.emplace_back(theta, normalize_angle(phi));
    }
    return curve;
}

Curve marker(const std::string& label, const SphPoint& p) { return Curve{label, {{p.theta(), p.phi()}}, true}; }

Figure descent_figure(const FigureParams& prm) {
    const SphPoint p = SphPoint::make(prm.get("theta_p", kPi / 4.0), prm.get("phi_p", 0.0));
    const DescentCircle c(p);
    Figure fig{"descent-circle", std::nullopt, {}, std::nullopt};
    Curve curve{"C(p)", {}, false};
    for (std::size_t k = 0; k < prm.curve_points; ++k) {
        const double phi = -kPi + 2.0 * kPi * static_cast<double>(k) / static_cast<double>(prm.curve_points - 1);
        curve.points.emplace_back(descent_theta(c, phi), phi);
    }
    fig.curves.push_back(std::move(curve));
    fig.curves.push_back(marker("p", p));
    const auto [s1, s2] = equator_crossings(c);
    fig.curves.push_back(marker("crossing", from_cartesian(s1)));
    fig.curves.push_back(marker("crossing", from_cartesian(s2)));
    return fig;
}

Figure two_step_figure(const FigureParams& prm) {
    const SphPoint p = SphPoint::make(prm.get("theta_p", kPi / 3.0), prm.get("phi_p", 0.0));
    const double theta_q = prm.get("theta_q", kPi / 6.0);
    const TwoStepChain chain = two_step_chain(p, theta_q);
    Figure fig{"two-step", std::nullopt, {}, std::nullopt};
    fig.curves.push_back(circle_curve("C(p)", DescentCircle(p), prm.curve_points));
    fig.curves.push_back(circle_curve("C(r)", DescentCircle(chain.r), prm.curve_points));
    fig.curves.push_back(meridian_curve("meridian", p.phi(), prm.curve_points));
    fig.curves.push_back(marker("p", p));
    fig.curves.push_back(marker("r", chain.r));
    fig.curves.push_back(marker("q", chain.q));
    return fig;
}

Figure delta_phi_figure(const FigureParams& prm) {
    const double theta_p = prm.get("theta_p", kPi / 3.0);
    Figure fig{"delta-phi", std::nullopt, {}, Table{{"theta_q", "ratio", "delta_phi"}, {}}};
    const std::size_t n = prm.curve_points;
    for (std::size_t k = 1; k < n; ++k) {
        const double theta_q = theta_p * static_cast<double>(k) / static_cast<double>(n - 1);
        const double ratio = std::tan(theta_q) / std::tan(theta_p);
        fig.table->rows.push_back({theta_q, ratio, two_step_delta_phi(theta_p, theta_q)});
    }
    return fig;
}

Figure grid_figure(const std::string& name, const Valuation& v, const FigureParams& prm) {
    return Figure{name, sample_grid(v, prm.n_theta, prm.n_phi), {}, std::nullopt};
}

} // namespace

const std::vector<std::string>& figure_names() {
    static const std::vector<std::string> names{"four-segment", "descent-circle", "two-step",    "delta-phi",
                                                "step-meridian", "standardized",  "longitudes"};
    return names;
}

Figure make_figure(const std::string& name, const FigureParams& prm) {
    if (prm.curve_points < 2) throw DomainError("curve_points must be at least 2");
    if (name == "four-segment") return grid_figure(name, FourSegmentValuation(), prm);
    if (name == "descent-circle") return descent_figure(prm);
    if (name == "two-step") return two_step_figure(prm);
    if (name == "delta-phi") return delta_phi_figure(prm);
    if (name == "step-meridian") {
        return grid_figure(name, StepMeridianValuation(prm.get("theta_star", kPi / 8.0)), prm);
    }
    if (name == "standardized") {
        Figure fig = grid_figure(name, StepMeridianValuation(0.0), prm);
        const double phi_star = prm.get("phi_star", kPi / 3.0);
        fig.curves.push_back(meridian_curve("phi=0", 0.0, prm.curve_points));
        fig.curves.push_back(meridian_curve("phi*", phi_star, prm.curve_points));
        return fig;
    }
    if (name == "longitudes") {
        const double width = prm.get("width", kPi / 4.0);
        return grid_figure(name, MeridianValuation2D(Generator2D({{0.0, width}})), prm);
    }
    throw DomainError("unknown figure '" + name + "'");
}

Figure oracle_figure(const std::string& name, const Valuation& v, const FigureParams& params) {
    return grid_figure(name, v, params);
}

std::string to_csv(const Figure& fig) {
    std::ostringstream out;
    if (fig.grid) {
        out << "theta,phi,v\n";
        const Grid& g = *fig.grid;
        for (std::size_t i = 0; i < g.n_theta; ++i) {
            for (std::size_t j = 0; j < g.n_phi; ++j) {
                out << format_number(g.theta(i)) << ',' << format_number(g.phi(j)) << ',' << g.at(i, j) << '\n';
            }
        }
    } else if (fig.table) {
        for (std::size_t c = 0; c < fig.table->columns.size(); ++c) out << (c ? "," : "") << fig.table->columns[c];
        out << '\n';
        for (const auto& row : fig.table->rows) {
            for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
            out << '\n';
        }
    } else {
        out << "series,theta,phi\n";
        for (const Curve& curve : fig.curves) {
            for (const auto& [theta, phi] : curve.points) {
                out << curve.label << ',' << format_number(theta) << ',' << format_number(phi) << '\n';
            }
        }
    }
    return out.str();
}

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 360.0;

double sx(double phi) { return (phi + kPi) / (2.0 * kPi) * kWidth; }
double sy(double theta) { return (kHalfPi - theta) / kPi * kHeight; }

std::string f2(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

} // namespace

std::string to_svg(const Figure& fig) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    out << "<title>" << fig.name << "</title>\n";
    out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\" stroke=\"black\"/>\n";

    if (fig.table) {
        // Line chart of the last column against the first.
        const auto& rows = fig.table->rows;
        double xmax = 0.0;
        double ymax = 0.0;
        for (const auto& r : rows) {
            xmax = std::max(xmax, r.front());
            ymax = std::max(ymax, r.back());
        }
        out << "<polyline fill=\"none\" stroke=\"" << kPalette[0] << "\" points=\"";
        for (const auto& r : rows) {
            const double x = xmax > 0 ? r.front() / xmax * (kWidth - 40) + 20 : 20;
            const double y = ymax > 0 ? kHeight - 20 - r.back() / ymax * (kHeight - 40) : kHeight - 20;
            out << f2(x) << ',' << f2(y) << ' ';
        }
        out << "\"/>\n</svg>\n";
        return out.str();
    }

    if (fig.grid) {
        const Grid& g = *fig.grid;
        const double w = kWidth / static_cast<double>(g.n_phi);
        const double h = kHeight / static_cast<double>(g.n_theta);
        out << "<g fill=\"#404040\" stroke=\"none\">\n";
        for (std::size_t i = 0; i < g.n_theta; ++i) {
            const double y = sy(g.theta(i)) - h / 2.0;
            // Merge horizontal runs of ones into one rectangle.
            std::size_t j = 0;
            while (j < g.n_phi) {
                if (g.at(i, j) != 1) {
                    ++j;
                    continue;
                }
                const std::size_t start = j;
                while (j < g.n_phi && g.at(i, j) == 1) ++j;
                out << "<rect x=\"" << f2(static_cast<double>(start) * w) << "\" y=\"" << f2(y) << "\" width=\""
                    << f2(static_cast<double>(j - start) * w) << "\" height=\"" << f2(h) << "\"/>\n";
            }
        }
        out << "</g>\n";
    }
    out << "<line x1=\"0\" y1=\"" << f2(sy(0.0)) << "\" x2=\"" << kWidth << "\" y2=\"" << f2(sy(0.0))
        << "\" stroke=\"#999999\" stroke-dasharray=\"4 4\"/>\n";

    std::size_t colour = 0;
    for (const Curve& curve : fig.curves) {
        const char* stroke = kPalette[colour++ % std::size(kPalette)];
        if (curve.marker) {
            for (const auto& [theta, phi] : curve.points) {
                out << "<circle cx=\"" << f2(sx(phi)) << "\" cy=\"" << f2(sy(theta)) << "\" r=\"4\" fill=\"" << stroke
                    << "\"><title>" << curve.label << "</title></circle>\n";
            }
            continue;
        }
        // Split the polyline where it wraps around phi = ±pi.
        std::vector<std::vector<std::pair<double, double>>> pieces(1);
        for (std::size_t k = 0; k < curve.points.size(); ++k) {
            if (k > 0 && std::abs(curve.points[k].second - curve.points[k - 1].second) > kPi) pieces.emplace_back();
            pieces.back().push_back(curve.points[k]);
        }
        for (const auto& piece : pieces) {
            if (piece.size() < 2) continue;
            out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& [theta, phi] : piece) out << f2(sx(phi)) << ',' << f2(sy(theta)) << ' ';
            out << "\"><title>" << curve.label << "</title></polyline>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace ks::plot
