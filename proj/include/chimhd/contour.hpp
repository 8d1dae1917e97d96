/// @file contour.hpp
/// @brief Zero level set extraction (marching squares on cell centres) and
/// polyline geometry.
#pragma once

#include <vector>

#include "chimhd/grid.hpp"

namespace chimhd {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point2&) const = default;
};

struct Polyline {
    std::vector<Point2> points;  ///< closed lines do not repeat the first point
    bool closed = false;
};

struct Contour {
    std::vector<Polyline> lines;
    bool empty() const { return lines.empty(); }
};

/// Marching squares on the dual grid of cell centres at `level`. Edge
/// crossings are linearly interpolated; saddle cells are split according to
/// the sign of the four-value average. Closed loops are oriented
/// counter-clockwise around the region value > level. A field without a sign
/// change yields an empty contour.
Contour extract_contour(const CellField& phi, double level = 0.0);

/// Symmetric Hausdorff distance between the two polyline sets, measured from
/// every vertex to the nearest segment of the other set. Throws
/// std::invalid_argument on empty input.
double hausdorff(const Contour& a, const Contour& b);

struct CircleFit {
    Point2 center;
    double radius = 0.0;
    double rms = 0.0;  ///< root-mean-square of |p - center| - radius
};

/// Algebraic (Kasa) least-squares circle through all vertices. Throws
/// std::invalid_argument for fewer than 3 points or collinear input.
CircleFit circle_fit(const Contour& c);

/// 4 pi A / P^2 of a single closed polyline. Throws std::invalid_argument for
/// anything else or zero perimeter.
double isoperimetric_ratio(const Contour& c);

/// Signed shoelace area (positive for counter-clockwise).
double polygon_area(const Polyline& p);
double polyline_length(const Polyline& p);
bool point_in_polygon(const Polyline& p, Point2 q);
double distance_to_polyline(const Polyline& p, Point2 q);
double distance_to_contour(const Contour& c, Point2 q);

}  // namespace chimhd
