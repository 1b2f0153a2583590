#pragma once

// Orientation-preserving isometries of hyperbolic 3-space as unit-determinant
// 2x2 complex matrices acting on the Riemann sphere by Moebius maps.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "quakebend/error.hpp"

namespace quakebend {

using cplx = std::complex<double>;

/// Plain 2x2 complex matrix with no determinant constraint.
struct Mat2 {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    static Mat2 identity() { return {}; }
    static Mat2 zero() { return {0.0, 0.0, 0.0, 0.0}; }

    cplx det() const { return a * d - b * c; }
    cplx trace() const { return a + d; }

    Mat2& operator+=(const Mat2& o);
    Mat2& operator-=(const Mat2& o);
    Mat2& operator*=(cplx s);
};

Mat2 operator+(Mat2 x, const Mat2& y);
Mat2 operator-(Mat2 x, const Mat2& y);
Mat2 operator*(const Mat2& x, const Mat2& y);
Mat2 operator*(cplx s, Mat2 x);

/// Frobenius norm; submultiplicative.
double frobenius_norm(const Mat2& m);

/// A point of the sphere at infinity: a complex number or infinity.
class BoundaryPoint {
public:
    BoundaryPoint() = default;
    BoundaryPoint(cplx z) : z_(z) {}                // NOLINT: implicit by intent
    BoundaryPoint(double x) : z_(x) {}              // NOLINT

    static BoundaryPoint infinity() {
        BoundaryPoint p;
        p.infinite_ = true;
        return p;
    }

    bool is_infinite() const { return infinite_; }
    /// Finite value; meaningless when is_infinite().
    cplx value() const { return z_; }

private:
    cplx z_{0.0};
    bool infinite_{false};
};

/// Chordal distance on the Riemann sphere (diameter 2).
double chordal_distance(const BoundaryPoint& p, const BoundaryPoint& q);

/// Unit-determinant matrix; products are renormalized so |det - 1| stays at rounding level.
class Isometry {
public:
    Isometry() = default;

    /// Normalizes by a square root of the determinant. Throws GeometryError when singular.
    static Isometry from_entries(cplx a, cplx b, cplx c, cplx d);
    static Isometry from_matrix(const Mat2& m) { return from_entries(m.a, m.b, m.c, m.d); }
    static Isometry diagonal(cplx lambda);

    cplx a() const { return m_.a; }
    cplx b() const { return m_.b; }
    cplx c() const { return m_.c; }
    cplx d() const { return m_.d; }
    const Mat2& matrix() const { return m_; }

    cplx det() const { return m_.det(); }
    cplx trace() const { return m_.trace(); }
    /// Trace of the representative with Re >= 0 (ties: Im >= 0).
    cplx normalized_trace() const;

    Isometry inverse() const;
    Isometry negated() const;

    BoundaryPoint apply(const BoundaryPoint& p) const;

    friend Isometry operator*(const Isometry& f, const Isometry& g);

private:
    explicit Isometry(const Mat2& m) : m_(m) {}
    Mat2 m_{};
};

Isometry compose(const Isometry& f, const Isometry& g);

/// Sign-normalized trace value: flips t so that Re t >= 0, with ties broken by Im t >= 0.
cplx normalize_trace_sign(cplx t);

/// Geodesic of H^3 given by its two endpoints on the sphere at infinity.
class OrientedGeodesic {
public:
    static constexpr double kMinSeparation = 1e-9;

    /// Throws GeometryError if the endpoints are closer than kMinSeparation (chordal).
    OrientedGeodesic(BoundaryPoint attracting, BoundaryPoint repelling);

    const BoundaryPoint& attracting() const { return attracting_; }
    const BoundaryPoint& repelling() const { return repelling_; }

    OrientedGeodesic reversed() const { return {repelling_, attracting_}; }
    OrientedGeodesic transformed(const Isometry& w) const;

private:
    BoundaryPoint attracting_;
    BoundaryPoint repelling_;
};

struct ComplexLength {
    double length{0.0}; ///< translation length, >= 0
    double angle{0.0};  ///< rotation angle in (-pi, pi]
};

enum class IsometryKind { identity, parabolic, elliptic, loxodromic };

struct IsometryClass {
    IsometryKind kind{IsometryKind::identity};
    double margin{0.0}; ///< |tr^2 - 4|
};

std::string to_string(IsometryKind k);

/// |tr^2 - 4| below this is parabolic (or the identity).
inline constexpr double kParabolicTolerance = 1e-9;

IsometryClass classify(const Isometry& f);

/// The elliptic isometry fixing g pointwise and rotating by `angle` about it.
/// With g running from 0 to infinity this is diag(e^{i angle/2}, e^{-i angle/2}).
Isometry rotation_about(const OrientedGeodesic& g, double angle);

/// Fixed-point axis, oriented toward the attracting endpoint. For elliptic input
/// (no attracting point) infinity, else the endpoint with larger real part
/// (then imaginary part), is declared attracting.
OrientedGeodesic axis_of(const Isometry& f);

/// (l, theta) with 2 cosh((l + i theta)/2) = +-tr(f). Throws for parabolic or identity.
ComplexLength complex_length(const Isometry& f);

/// Frobenius norm.
double operator_norm(const Isometry& f);

struct PerturbationGap {
    double lhs{0.0};            ///< || prod(A_i + eps_i) - prod(A_i) ||
    double rhs{0.0};            ///< R (exp(n R E) - 1)
    double product_bound{0.0};  ///< R: max norm over increasing sub-products (empty product included)
    double max_perturbation{0.0}; ///< E
};

/// Exhaustive sub-product bound; n is capped at 16 because the sweep is 2^n.
PerturbationGap product_perturbation_gap(std::span<const Mat2> factors,
                                         std::span<const Mat2> perturbations);

} // namespace quakebend
