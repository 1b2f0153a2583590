#pragma once

// Bending deformations of a Fuchsian punctured-torus group along a weighted
// simple closed curve: re-marking and crossing-product constructions, corridor
// approximants of the crossing geodesics, and the boundary-length experiment.

#include <optional>
#include <string>
#include <vector>

#include "quakebend/hyperbolic_plane.hpp"
#include "quakebend/ptorus.hpp"

namespace quakebend {

struct QuakebendFamily {
    MarkedGroup base;
    Slope slope{0, 1};
    double t{0.0}; ///< bending angle (Dirac mass), radians
};

/// Throws InvalidArgument unless every generator entry is real to 1e-10.
void require_fuchsian(const MarkedGroup& g);

/// Slope-normalizing matrix [[q, -p], [c, d]] with cp + dq = 1; sends p/q to 0/1.
IntMatrix normalizing_matrix(const Slope& s);

/// The bent group: after re-marking so the bending curve is X, keep X and
/// rotate Y by t about the axis of X, then express the old generators again.
/// Generators may degenerate to elliptic or parabolic; only the commutator is checked.
MarkedGroup quakebend_by_marking(const QuakebendFamily& fam);

/// Base point of the crossing construction: the crossing point i of the
/// generator axes of an orthogonal group, pushed 1e-3 along the bisector.
cplx default_base_point();

struct CrossingLift {
    Word word;                  ///< w, so that the lift is w . axis(bending element)
    Mat2 element;               ///< base image of w
    int sign{1};                ///< +1 when geodesic is oriented like w . axis(beta), else -1
    OrientedGeodesic geodesic{BoundaryPoint::infinity(), BoundaryPoint(0.0)}; ///< base point on its left
    double position{0.0};       ///< distance from the base point along the arc
    cplx point{0.0, 1.0};       ///< where the lift crosses the arc
};

inline constexpr double kDefaultSearchRadius = 12.0;
inline constexpr double kStabilizationStep = 2.0;
/// Longest arc (hyperbolic distance from p0 to xi.p0) whose lifts are resolved in
/// double precision; crossing queries beyond it throw NumericalError.
inline constexpr double kMaxArcLength = 18.0;

/// Lifts of the bending geodesic crossing the arc from the base point p0 to xi.p0.
/// Lifts through each generator arc are found once by searching the orbit ball
/// of the given radius (raised when the arc geometry needs it) and checked to be
/// unchanged at radius + 2; longer arcs reuse them through prefix translates.
class CrossingEnumerator {
public:
    /// Throws InvalidArgument for non-Fuchsian bases, ConvergenceError when the
    /// candidate sets do not stabilize.
    CrossingEnumerator(MarkedGroup base, Slope slope, double radius = kDefaultSearchRadius,
                       cplx base_point = default_base_point());

    const MarkedGroup& base() const { return base_; }
    const Slope& slope() const { return slope_; }
    cplx base_point() const { return p0_; }
    const OrientedGeodesic& bending_axis() const { return axis_; }
    const Word& bending_word() const { return bending_word_; }
    /// Radius actually searched (at least the requested one).
    double effective_radius() const { return effective_radius_; }

    /// Ordered crossings for xi, nearest the base point first.
    std::vector<CrossingLift> crossings(const Word& xi) const;

private:
    struct Candidate {
        Word word;
        Mat2 element;
        OrientedGeodesic geodesic;
    };
    std::vector<Candidate> search(int letter, double radius) const;

    MarkedGroup base_;
    Slope slope_;
    cplx p0_;
    Word bending_word_;
    OrientedGeodesic axis_;
    double effective_radius_{0.0};
    std::vector<std::vector<Candidate>> generator_candidates_; ///< indexed by X, x, Y, y
};

/// Direct search: every reduced word within the orbit ball of the given radius
/// whose lift separates p0 from xi.p0. Throws ConvergenceError unless the result is
/// unchanged at radius + 2. Intended for short words.
std::vector<CrossingLift> enumerate_crossings(const MarkedGroup& base, const Slope& slope, const Word& xi,
                                              double radius = kDefaultSearchRadius,
                                              cplx base_point = default_base_point());

/// R_{g_1}^t ... R_{g_p}^t times the base image of xi, for crossings of the arc to xi.p0.
/// With g_k = w_k . axis(beta) the product is evaluated as
/// w_1 R^{s_1} (w_1^-1 w_2) R^{s_2} ... R^{s_p} (w_p^-1 xi), R the rotation about axis(beta),
/// so every factor stays short and no cancellation between far-away rotations occurs.
Isometry bend_along(const MarkedGroup& base, const Word& bending_word, const std::vector<CrossingLift>& crossings,
                    double t, const Word& xi);

Isometry quakebend_by_crossings(const CrossingEnumerator& en, double t, const Word& xi);

struct TruncationReport {
    int r{0};
    Isometry truncated;
    Isometry exact;
    double error{0.0};            ///< ||A_r - exact||
    double gap{0.0};              ///< ||A_{r+1} - A_r||
    double max_prefix_norm{0.0};  ///< max norm of the partial rotation products
};

inline constexpr double kCorridorOffset = 0.5;

/// Corridor approximant of a crossing lift at depth r: tiles are the base point
/// translated along the lift by prefixes of the periodic bending word; the
/// approximant joins the points at distance kCorridorOffset to the left of the
/// lift, level with the tiles r letters before and after the crossing tile.
OrientedGeodesic corridor_geodesic(const CrossingEnumerator& en, const CrossingLift& lift, int r);

/// Throws InvalidArgument for r < 1.
TruncationReport truncated_holonomy(const CrossingEnumerator& en, double t, const Word& xi, int r);

struct C2Row {
    double t{0.0};
    TraceTriple traces;
    double length{0.0};      ///< real translation length of the bent Y
    double boundary{0.0};    ///< F
    bool degenerate{false};  ///< bent Y is elliptic or parabolic
};

/// Orthogonal base of length l_gamma bent along slope 0. F is tanh^2(L/2) of
/// the bent Y for t <= 0 and the unbent value tanh^2(l_0/2) for t >= 0.
std::vector<C2Row> c2_experiment(double l_gamma, const std::vector<double>& t_grid);

/// F evaluated at a single t (same rule as c2_experiment).
double boundary_function(double l_gamma, double t);

/// Closed form of F for t <= 0: 1 - 1 / (cosh^2 u cos^2(t/2)), cosh u from the base.
double boundary_function_closed_form(double l_gamma, double t);

std::string c2_csv(const std::vector<C2Row>& rows);
std::string truncation_csv(const std::vector<TruncationReport>& reports);

} // namespace quakebend
