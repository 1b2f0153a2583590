#include "quakebend/isom3.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace quakebend {

Mat2& Mat2::operator+=(const Mat2& o) {
    a += o.a;
    b += o.b;
    c += o.c;
    d += o.d;
    return *this;
}

Mat2& Mat2::operator-=(const Mat2& o) {
    a -= o.a;
    b -= o.b;
    c -= o.c;
    d -= o.d;
    return *this;
}

Mat2& Mat2::operator*=(cplx s) {
    a *= s;
    b *= s;
    c *= s;
    d *= s;
    return *this;
}

Mat2 operator+(Mat2 x, const Mat2& y) { return x += y; }
Mat2 operator-(Mat2 x, const Mat2& y) { return x -= y; }
Mat2 operator*(cplx s, Mat2 x) { return x *= s; }

Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

double frobenius_norm(const Mat2& m) {
    return std::sqrt(std::norm(m.a) + std::norm(m.b) + std::norm(m.c) + std::norm(m.d));
}

double chordal_distance(const BoundaryPoint& p, const BoundaryPoint& q) {
    if (p.is_infinite() && q.is_infinite()) return 0.0;
    if (p.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(q.value()));
    if (q.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(p.value()));
    const cplx z = p.value();
    const cplx w = q.value();
    return 2.0 * std::abs(z - w) / std::sqrt((1.0 + std::norm(z)) * (1.0 + std::norm(w)));
}

cplx normalize_trace_sign(cplx t) {
    if (t.real() < 0.0 || (t.real() == 0.0 && t.imag() < 0.0)) return -t;
    return t;
}

namespace {

// True when |det - 1| is below the rounding noise of ad - bc. For large entries the
// computed determinant is dominated by cancellation and must not be used to rescale.
bool det_within_rounding(const Mat2& m, cplx det) {
    const double noise = 1e-14 * (std::abs(m.a * m.d) + std::abs(m.b * m.c));
    return std::abs(det - 1.0) <= noise;
}

} // namespace

Isometry Isometry::from_entries(cplx a, cplx b, cplx c, cplx d) {
    const cplx det = a * d - b * c;
    if (!std::isfinite(det.real()) || !std::isfinite(det.imag()) || std::abs(det) < 1e-300)
        throw GeometryError("singular or non-finite matrix cannot represent an isometry");
    Mat2 m{a, b, c, d};
    if (!det_within_rounding(m, det)) m *= 1.0 / std::sqrt(det);
    return Isometry(m);
}

Isometry Isometry::diagonal(cplx lambda) {
    return from_entries(lambda, 0.0, 0.0, 1.0 / lambda);
}

cplx Isometry::normalized_trace() const { return normalize_trace_sign(trace()); }

Isometry Isometry::inverse() const { return Isometry(Mat2{m_.d, -m_.b, -m_.c, m_.a}); }

Isometry Isometry::negated() const { return Isometry(Mat2{-m_.a, -m_.b, -m_.c, -m_.d}); }

BoundaryPoint Isometry::apply(const BoundaryPoint& p) const {
    if (p.is_infinite()) {
        if (m_.c == cplx{0.0}) return BoundaryPoint::infinity();
        return m_.a / m_.c;
    }
    const cplx z = p.value();
    const cplx den = m_.c * z + m_.d;
    if (den == cplx{0.0}) return BoundaryPoint::infinity();
    return (m_.a * z + m_.b) / den;
}

Isometry operator*(const Isometry& f, const Isometry& g) {
    Mat2 p = f.m_ * g.m_;
    const cplx det = p.det();
    if (std::isfinite(det.real()) && std::isfinite(det.imag()) && std::abs(det) > 0.5 &&
        !det_within_rounding(p, det))
        p *= 1.0 / std::sqrt(det);
    return Isometry(p);
}

Isometry compose(const Isometry& f, const Isometry& g) { return f * g; }

OrientedGeodesic::OrientedGeodesic(BoundaryPoint attracting, BoundaryPoint repelling)
    : attracting_(attracting), repelling_(repelling) {
    if (chordal_distance(attracting_, repelling_) < kMinSeparation)
        throw GeometryError("degenerate geodesic: endpoints coincide");
}

OrientedGeodesic OrientedGeodesic::transformed(const Isometry& w) const {
    return {w.apply(attracting_), w.apply(repelling_)};
}

std::string to_string(IsometryKind k) {
    switch (k) {
    case IsometryKind::identity: return "identity";
    case IsometryKind::parabolic: return "parabolic";
    case IsometryKind::elliptic: return "elliptic";
    case IsometryKind::loxodromic: return "loxodromic";
    }
    return "unknown";
}

IsometryClass classify(const Isometry& f) {
    const cplx tr = f.trace();
    const cplx t2 = tr * tr;
    const double margin = std::abs(t2 - 4.0);
    if (margin <= kParabolicTolerance) {
        const double off = std::max({std::abs(f.b()), std::abs(f.c()), std::abs(f.a() - f.d())});
        return {off <= kParabolicTolerance ? IsometryKind::identity : IsometryKind::parabolic, margin};
    }
    const bool real_square = std::abs(t2.imag()) <= 1e-10 * std::max(1.0, std::abs(t2));
    if (real_square && t2.real() < 4.0 && t2.real() > -1e-12)
        return {IsometryKind::elliptic, margin};
    return {IsometryKind::loxodromic, margin};
}

Isometry rotation_about(const OrientedGeodesic& g, double angle) {
    if (!std::isfinite(angle)) throw InvalidArgument("rotation angle must be finite");
    const cplx alpha = std::polar(1.0, angle / 2.0);
    const cplx beta = std::conj(alpha);
    const BoundaryPoint& p = g.attracting();
    const BoundaryPoint& q = g.repelling();
    if (p.is_infinite()) {
        // conjugate by z -> z + q
        const cplx r = q.value();
        return Isometry::from_entries(alpha, r * (beta - alpha), 0.0, beta);
    }
    if (q.is_infinite()) {
        // conjugate by z -> (p z + 1) / z
        const cplx a = p.value();
        return Isometry::from_entries(beta, a * (alpha - beta), 0.0, alpha);
    }
    const cplx a = p.value();
    const cplx r = q.value();
    const cplx s = 1.0 / (a - r);
    return Isometry::from_entries(s * (a * alpha - r * beta), s * a * r * (beta - alpha),
                                  s * (alpha - beta), s * (a * beta - r * alpha));
}

namespace {

struct FixedPoint {
    BoundaryPoint point;
    cplx multiplier; // eigenvalue of the eigenvector over the point
};

FixedPoint fixed_point_for(const Isometry& f, cplx lambda) {
    const cplx v1a = f.b();
    const cplx v1b = lambda - f.a();
    const cplx v2a = lambda - f.d();
    const cplx v2b = f.c();
    const bool first = std::norm(v1a) + std::norm(v1b) >= std::norm(v2a) + std::norm(v2b);
    const cplx top = first ? v1a : v2a;
    const cplx bottom = first ? v1b : v2b;
    if (std::abs(bottom) <= 1e-14 * std::abs(top)) return {BoundaryPoint::infinity(), lambda};
    return {top / bottom, lambda};
}

std::pair<FixedPoint, FixedPoint> ordered_fixed_points(const Isometry& f, IsometryKind kind) {
    const cplx tr = f.trace();
    const cplx disc = std::sqrt(tr * tr - 4.0);
    cplx l1 = 0.5 * (tr + disc);
    cplx l2 = 0.5 * (tr - disc);
    if (std::abs(l2) > std::abs(l1)) std::swap(l1, l2);
    l2 = 1.0 / l1;
    FixedPoint att = fixed_point_for(f, l1);
    FixedPoint rep = fixed_point_for(f, l2);
    if (kind == IsometryKind::elliptic) {
        auto ranks_first = [](const BoundaryPoint& x, const BoundaryPoint& y) {
            if (x.is_infinite()) return true;
            if (y.is_infinite()) return false;
            if (x.value().real() != y.value().real()) return x.value().real() > y.value().real();
            return x.value().imag() > y.value().imag();
        };
        if (!ranks_first(att.point, rep.point)) std::swap(att, rep);
    }
    return {att, rep};
}

void require_axis(const IsometryClass& cls) {
    if (cls.kind == IsometryKind::identity || cls.kind == IsometryKind::parabolic)
        throw GeometryError("isometry is " + to_string(cls.kind) + " (margin " +
                            std::to_string(cls.margin) + "); it has no axis");
}

double wrap_angle(double theta) {
    double w = std::remainder(theta, 2.0 * std::numbers::pi);
    if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
    return w;
}

} // namespace

OrientedGeodesic axis_of(const Isometry& f) {
    const IsometryClass cls = classify(f);
    require_axis(cls);
    const auto [att, rep] = ordered_fixed_points(f, cls.kind);
    return {att.point, rep.point};
}

ComplexLength complex_length(const Isometry& f) {
    const IsometryClass cls = classify(f);
    require_axis(cls);
    const auto [att, rep] = ordered_fixed_points(f, cls.kind);
    ComplexLength out;
    out.length = cls.kind == IsometryKind::elliptic
                     ? 0.0
                     : std::max(0.0, 2.0 * std::log(std::abs(att.multiplier)));
    out.angle = wrap_angle(2.0 * std::arg(att.multiplier));
    return out;
}

double operator_norm(const Isometry& f) { return frobenius_norm(f.matrix()); }

PerturbationGap product_perturbation_gap(std::span<const Mat2> factors,
                                         std::span<const Mat2> perturbations) {
    if (factors.size() != perturbations.size())
        throw InvalidArgument("factor and perturbation lists differ in length");
    const std::size_t n = factors.size();
    if (n == 0) throw InvalidArgument("product_perturbation_gap needs at least one factor");
    if (n > 16) throw InvalidArgument("exhaustive sub-product bound limited to n <= 16");

    // products[mask] = ordered product of the factors selected by mask
    std::vector<Mat2> products(std::size_t{1} << n);
    products[0] = Mat2::identity();
    double bound = frobenius_norm(products[0]);
    for (std::size_t mask = 1; mask < products.size(); ++mask) {
        const auto top = static_cast<std::size_t>(std::bit_width(mask)) - 1;
        products[mask] = products[mask & ~(std::size_t{1} << top)] * factors[top];
        bound = std::max(bound, frobenius_norm(products[mask]));
    }

    Mat2 perturbed = Mat2::identity();
    double max_eps = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        perturbed = perturbed * (factors[i] + perturbations[i]);
        max_eps = std::max(max_eps, frobenius_norm(perturbations[i]));
    }

    PerturbationGap gap;
    gap.lhs = frobenius_norm(perturbed - products.back());
    gap.product_bound = bound;
    gap.max_perturbation = max_eps;
    gap.rhs = bound * std::expm1(static_cast<double>(n) * bound * max_eps);
    return gap;
}

} // namespace quakebend
