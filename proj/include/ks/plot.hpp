#pragma once

// Figure data: sampled valuation grids and curves on the sphere, written as
// CSV tables or as a plain equirectangular SVG.

#include "ks/valuation.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ks::plot {

/// Cell-centred latitude/longitude grid:
/// theta_i = -pi/2 + (i + 1/2) pi / n_theta, phi_j = -pi + (j + 1/2) 2 pi / n_phi.
/// The grid is symmetric under the antipodal map.
struct Grid {
    std::size_t n_theta = 0;
    std::size_t n_phi = 0;
    std::vector<int> values;  ///< row-major, theta outer

    double theta(std::size_t i) const;
    double phi(std::size_t j) const;
    int at(std::size_t i, std::size_t j) const { return values[i * n_phi + j]; }
};

Grid sample_grid(const Valuation& v, std::size_t n_theta, std::size_t n_phi);

/// Fraction of ones weighted by cell area (cos theta).
double area_fraction_ones(const Grid& g);

/// Fraction of ones counting every cell equally.
double cell_fraction_ones(const Grid& g);

/// A polyline in (theta, phi), or a single marked point.
struct Curve {
    std::string label;
    std::vector<std::pair<double, double>> points;
    bool marker = false;
};

/// Plain numeric table for figures that are not spherical plots.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct Figure {
    std::string name;
    std::optional<Grid> grid;
    std::vector<Curve> curves;
    std::optional<Table> table;
};

struct FigureParams {
    std::size_t n_theta = 90;
    std::size_t n_phi = 180;
    std::size_t curve_points = 361;
    std::map<std::string, double> values;  ///< figure-specific, radians

    double get(const std::string& key, double fallback) const;
};

/// Names accepted by make_figure.
const std::vector<std::string>& figure_names();

/// Throws DomainError for an unknown figure or invalid parameters.
Figure make_figure(const std::string& name, const FigureParams& params);

/// Grid of an arbitrary valuation, labelled with name.
Figure oracle_figure(const std::string& name, const Valuation& v, const FigureParams& params);

/// CSV with a header. Grid figures use theta,phi,v; curve figures use
/// series,theta,phi; tables use their own columns. Numbers use 12
/// significant digits.
std::string to_csv(const Figure& fig);

std::string to_svg(const Figure& fig);

/// %.12g formatting shared by the CSV writer and the geometry commands.
std::string format_number(double x);

} // namespace ks::plot
