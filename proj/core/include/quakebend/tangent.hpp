#pragma once

// One-sided (tangent-map) differentiation.
//
// A map f has a tangent map at x when (f(x + t v) - f(x)) / t converges as
// t -> 0+ for every direction v. The estimators here sample the quotient on a
// geometric ladder of steps and remove the O(h) and O(h^2) terms with two
// Richardson passes. A tangent map is accepted numerically when the dispersion
// of the finest three extrapolated values is small and the estimate survives
// halving the initial step.

#include <functional>
#include <span>
#include <vector>

#include "quakebend/error.hpp"

namespace quakebend::tangent {

using Vec = std::vector<double>;
using CurveFn = std::function<Vec(double)>;
using MapFn = std::function<Vec(const Vec&)>;
using ScalarFn = std::function<double(double)>;

struct StepSchedule {
    double initial_step{1e-2};
    double shrink{0.5};
    int levels{8};

    double finest_step() const;
    /// Throws InvalidArgument unless h0 > 0, 0 < rho < 1, k >= 3 and h0 rho^k > 1e-12.
    void validate() const;
    StepSchedule halved() const { return {initial_step / 2.0, shrink, levels}; }
};

struct OneSidedDerivative {
    Vec raw;          ///< plain quotient at the finest step
    Vec value;        ///< Richardson-extrapolated value (the reported estimate)
    double dispersion{0.0};
};

/// lim_{t->0+} (f(x + t d) - f(x)) / t for a curve f: R -> R^n and a direction d
/// (normally +1 or -1; any nonzero real is accepted).
OneSidedDerivative one_sided_derivative(const CurveFn& f, double x, double direction,
                                        const StepSchedule& schedule = {});

/// Same limit for a map R^m -> R^n along the direction v.
OneSidedDerivative directional_derivative(const MapFn& f, const Vec& x, const Vec& v,
                                          const StepSchedule& schedule = {});

struct SecondDifferenceReport {
    double first_right{0.0}; ///< f'(x+)
    double first_left{0.0};  ///< f'(x-)
    double right{0.0};       ///< one-sided second derivative from the right
    double left{0.0};        ///< one-sided second derivative from the left
    double gap{0.0};         ///< |right - left|
    double dispersion{0.0};
};

/// Extrapolated limits of 2 (f(x +- h) - f(x) -+ h f'(x+-)) / h^2.
SecondDifferenceReport second_one_sided_difference(const ScalarFn& f, double x,
                                                   const StepSchedule& schedule = {});

/// Tangent map sampled as a function of the direction.
using TangentMap = std::function<Vec(const Vec&)>;

/// max || T(a v) - a T(v) || over the given directions and scales a >= 0.
double homogeneity_check(const TangentMap& tangent, std::span<const Vec> directions,
                         std::span<const double> scales);

/// Estimates T_x phi and T_{phi(x)} phi^{-1} by one-sided differences and returns
/// max || T phi^{-1}(T phi(v)) - v || over the directions.
double inverse_tangent_check(const MapFn& phi, const MapFn& phi_inverse, const Vec& x,
                             std::span<const Vec> directions,
                             const StepSchedule& schedule = {});

/// Default acceptance threshold on dispersion for "tangent map exists".
inline constexpr double kTangentDispersionTolerance = 1e-5;

/// True when the estimate at x along v has small dispersion and agrees with the
/// estimate from a halved schedule to within the tolerance.
bool tangent_exists(const MapFn& f, const Vec& x, const Vec& v, const StepSchedule& schedule = {},
                    double tolerance = kTangentDispersionTolerance);

} // namespace quakebend::tangent
