#include "quakebend/hyperbolic_plane.hpp"

#include <cmath>

namespace quakebend::h2 {

cplx act(const Mat2& m, cplx z) { return (m.a * z + m.b) / (m.c * z + m.d); }

double distance(cplx z, cplx w) {
    const double num = std::norm(z - w);
    return std::acosh(1.0 + num / (2.0 * z.imag() * w.imag()));
}

namespace {

double real_endpoint(const BoundaryPoint& p) {
    if (std::abs(p.value().imag()) > 1e-9 * (1.0 + std::abs(p.value())))
        throw GeometryError("geodesic endpoint is not on the real line");
    return p.value().real();
}

// Apply a real matrix to a boundary point of the real line.
BoundaryPoint act_boundary(const Mat2& m, const BoundaryPoint& p) {
    const double a = m.a.real(), b = m.b.real(), c = m.c.real(), d = m.d.real();
    if (p.is_infinite()) {
        if (c == 0.0) return BoundaryPoint::infinity();
        return BoundaryPoint(a / c);
    }
    const double x = p.value().real();
    const double den = c * x + d;
    if (den == 0.0) return BoundaryPoint::infinity();
    return BoundaryPoint((a * x + b) / den);
}

} // namespace

Mat2 normalizing_map(const OrientedGeodesic& g) {
    const BoundaryPoint& ep = g.attracting();
    const BoundaryPoint& em = g.repelling();
    if (ep.is_infinite()) return {1.0, -real_endpoint(em), 0.0, 1.0};
    if (em.is_infinite()) return {0.0, -1.0, 1.0, -real_endpoint(ep)};
    const double p = real_endpoint(ep);
    const double m = real_endpoint(em);
    if (m > p) return {1.0, -m, 1.0, -p};
    return {-1.0, m, 1.0, -p};
}

double side(const OrientedGeodesic& g, cplx z) { return act(normalizing_map(g), z).real(); }

bool separates(const OrientedGeodesic& g, cplx z, cplx w) { return side(g, z) * side(g, w) < 0; }

OrientedGeodesic oriented_left_of(const OrientedGeodesic& g, cplx z) {
    return side(g, z) < 0 ? g : g.reversed();
}

OrientedGeodesic geodesic_through(cplx z, cplx w) {
    const double dx = w.real() - z.real();
    if (std::abs(dx) <= 1e-15 * (1.0 + std::abs(z) + std::abs(w))) {
        const double x = z.real();
        if (w.imag() > z.imag()) return {BoundaryPoint::infinity(), BoundaryPoint(x)};
        return {BoundaryPoint(x), BoundaryPoint::infinity()};
    }
    const double center = (std::norm(w) - std::norm(z)) / (2.0 * dx);
    const double radius = std::abs(z - center);
    if (dx > 0) return {BoundaryPoint(center + radius), BoundaryPoint(center - radius)};
    return {BoundaryPoint(center - radius), BoundaryPoint(center + radius)};
}

cplx point_along(cplx z, cplx w, double s) {
    const OrientedGeodesic g = geodesic_through(z, w);
    const Mat2 n = normalizing_map(g);
    const cplx image = act(n, z); // on the imaginary axis
    const cplx moved = cplx(0.0, std::abs(image) * std::exp(s));
    const Mat2 inv{n.d, -n.b, -n.c, n.a};
    return act(inv, moved);
}

OrientedGeodesic transform(const Mat2& m, const OrientedGeodesic& g) {
    return {act_boundary(m, g.attracting()), act_boundary(m, g.repelling())};
}

double crossing_position(cplx z, cplx w, const OrientedGeodesic& g) {
    const Mat2 n = normalizing_map(geodesic_through(z, w));
    const OrientedGeodesic h = transform(n, g);
    if (h.attracting().is_infinite() || h.repelling().is_infinite())
        throw GeometryError("geodesic shares an endpoint with the arc");
    const double x1 = h.attracting().value().real();
    const double x2 = h.repelling().value().real();
    if (!(x1 * x2 < 0)) throw GeometryError("geodesic does not cross the arc");
    return 0.5 * std::log(-x1 * x2) - std::log(std::abs(act(n, z)));
}

double distance_to_geodesic(cplx z, const OrientedGeodesic& g) {
    const cplx u = act(normalizing_map(g), z);
    // Distance to the imaginary axis: sinh d = |Re u| / Im u.
    return std::asinh(std::abs(u.real()) / u.imag());
}

bool same_unoriented(const OrientedGeodesic& g, const OrientedGeodesic& h, double tol) {
    auto close = [tol](const BoundaryPoint& a, const BoundaryPoint& b) {
        return chordal_distance(a, b) <= tol;
    };
    return (close(g.attracting(), h.attracting()) && close(g.repelling(), h.repelling())) ||
           (close(g.attracting(), h.repelling()) && close(g.repelling(), h.attracting()));
}

} // namespace quakebend::h2
