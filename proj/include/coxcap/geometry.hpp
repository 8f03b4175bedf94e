#pragma once

#include <cmath>

#include "coxcap/errors.hpp"

namespace coxcap {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Wraps a coordinate into [0, L). Inputs may be any finite value.
inline double wrap_coordinate(double v, double edge) {
    double w = std::fmod(v, edge);
    if (w < 0.0) w += edge;
    // fmod can return exactly edge after the correction when v is a tiny
    // negative number; fold it back.
    if (w >= edge) w = 0.0;
    return w;
}

inline Point wrap_point(Point p, double edge) {
    return {wrap_coordinate(p.x, edge), wrap_coordinate(p.y, edge)};
}

// Shortest signed displacement from a to b along one axis of the torus,
// in (-L/2, L/2].
inline double torus_delta(double a, double b, double edge) {
    double d = b - a;
    if (d > 0.5 * edge) d -= edge;
    if (d <= -0.5 * edge) d += edge;
    return d;
}

// Unsigned 1-D wrap distance, in [0, L/2].
inline double torus_axis_distance(double a, double b, double edge) {
    double d = std::fabs(a - b);
    return d > 0.5 * edge ? edge - d : d;
}

inline double torus_distance_squared(const Point& p, const Point& q, double edge) {
    const double dx = torus_axis_distance(p.x, q.x, edge);
    const double dy = torus_axis_distance(p.y, q.y, edge);
    return dx * dx + dy * dy;
}

inline double torus_distance_checked(const Point& p, const Point& q, double edge) {
    if (!(edge > 0.0))
        throw invalid_geometry_error("torus_distance: edge must be positive, got " +
                                     std::to_string(edge));
    return std::sqrt(torus_distance_squared(p, q, edge));
}

// Hot-path variant; callers validate the edge once.
inline double torus_distance(const Point& p, const Point& q, double edge) {
    return std::sqrt(torus_distance_squared(p, q, edge));
}

// 1-D wrap distance from a coordinate to a half-open arc [start, start+len)
// on a circle of circumference L. Zero when the coordinate lies inside.
inline double circle_point_to_arc_distance(double v, double start, double len, double edge) {
    double rel = v - start;
    rel = std::fmod(rel, edge);
    if (rel < 0.0) rel += edge;
    if (rel < len) return 0.0;
    // gap past the arc end, or gap before the arc start going the other way
    const double after = rel - len;
    const double before = edge - rel;
    return after < before ? after : before;
}

// Min 1-D wrap distance between two half-open arcs; zero if they intersect.
inline double circle_arc_to_arc_distance(double a_start, double a_len, double b_start,
                                         double b_len, double edge) {
    double rel = std::fmod(b_start - a_start, edge);
    if (rel < 0.0) rel += edge;
    if (rel < a_len) return 0.0;                      // b starts inside a
    const double fwd = rel - a_len;                   // gap a-end -> b-start
    const double bwd = edge - rel - b_len;            // gap b-end -> a-start
    if (bwd < 0.0) return 0.0;                        // a starts inside b
    return fwd < bwd ? fwd : bwd;
}

}  // namespace coxcap
