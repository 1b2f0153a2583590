#pragma once

// Upper half-plane geometry for Fuchsian groups (real unit-determinant matrices).

#include "quakebend/isom3.hpp"

namespace quakebend::h2 {

/// Möbius action on a point of the upper half-plane.
cplx act(const Mat2& m, cplx z);

double distance(cplx z, cplx w);

/// Real positive-determinant map sending the repelling endpoint to 0 and the
/// attracting endpoint to infinity. Throws GeometryError for non-real endpoints.
Mat2 normalizing_map(const OrientedGeodesic& g);

/// Signed side of z: negative when z lies to the left of g.
double side(const OrientedGeodesic& g, cplx z);

bool separates(const OrientedGeodesic& g, cplx z, cplx w);

/// g, re-oriented so that z lies on its left.
OrientedGeodesic oriented_left_of(const OrientedGeodesic& g, cplx z);

/// Geodesic through two distinct points, attracting endpoint ahead of w.
OrientedGeodesic geodesic_through(cplx z, cplx w);

/// Point at distance s from z along the geodesic ray towards w.
cplx point_along(cplx z, cplx w, double s);

/// Distance from z, along the geodesic towards w, to where g crosses it.
/// Throws GeometryError when g does not cross that geodesic.
double crossing_position(cplx z, cplx w, const OrientedGeodesic& g);

/// Distance from z to the geodesic g.
double distance_to_geodesic(cplx z, const OrientedGeodesic& g);

/// Image of g under a real matrix.
OrientedGeodesic transform(const Mat2& m, const OrientedGeodesic& g);

/// Endpoint comparison up to orientation, in the chordal metric.
bool same_unoriented(const OrientedGeodesic& g, const OrientedGeodesic& h, double tol);

} // namespace quakebend::h2
