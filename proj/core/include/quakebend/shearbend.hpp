#pragma once

// Complex shear-bend coordinates on the two-triangle ideal triangulation of the
// once-punctured torus. Real parts shear, imaginary parts bend.
//
// Holonomy: with E(s) = diag(e^{s/2}, e^{-s/2}), L = [[1,0],[1,1]], R = [[1,1],[0,1]],
//   X = E(s3) L E(s1) R,   Y = E(s3) R E(s2) L.
// Then tr[X,Y] = -2 cosh(s1 + s2 + s3), so the cusp condition is
// s1 + s2 + s3 = 0 mod 2 pi i.

#include <array>
#include <string>

#include "quakebend/ptorus.hpp"
#include "quakebend/tangent.hpp"

namespace quakebend::shearbend {

struct ComplexShears {
    std::array<cplx, 3> s{};

    /// Admissible triple (s1, s2, -s1 - s2).
    static ComplexShears from_pair(cplx s1, cplx s2) { return {{s1, s2, -s1 - s2}}; }
    /// Real triple (-ln 2, ln 2, 0) whose holonomy has traces (2 sqrt 2, 2 sqrt 2, 4).
    static ComplexShears symmetric();

    cplx sum() const { return s[0] + s[1] + s[2]; }
    /// Shifted by 2 pi i k in coordinate j.
    ComplexShears shifted(int j, long long k) const;
    /// "re1,im1,re2,im2,re3,im3" with 15 significant digits.
    std::string to_csv_row() const;
};

inline constexpr double kAdmissibleTolerance = 1e-9;

/// Shears off the cusp locus.
class InadmissibleShears : public GeometryError {
public:
    InadmissibleShears(const std::string& what, double residual) : GeometryError(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Unchecked generator pair; entries are holomorphic in the shears.
std::array<Mat2, 2> holonomy_matrices(const ComplexShears& sigma);

/// |tr[X,Y] + 2| computed from the commutator product.
double cusp_residual(const ComplexShears& sigma);

/// Closed form of the residual, 4 |sinh(S/2)|^2 with S the shear sum.
double cusp_residual_closed_form(const ComplexShears& sigma);

/// Distance from the shear sum to the lattice 2 pi i Z.
double shear_sum_defect(const ComplexShears& sigma);

/// Fast predicate equivalent to cusp_residual <= tolerance.
bool is_admissible(const ComplexShears& sigma, double tolerance = kAdmissibleTolerance);

/// Throws InadmissibleShears when the cusp residual exceeds kAdmissibleTolerance.
MarkedGroup holonomy_from_shears(const ComplexShears& sigma);

/// Traces (tr X, tr Y, tr XY) of the unnormalized lifts.
std::array<cplx, 3> raw_traces(const ComplexShears& sigma);

/// Complex derivative of raw_traces along d/ds1 and d/ds2 on the admissible locus
/// (s3 = -s1 - s2), from the product rule.
std::array<std::array<cplx, 3>, 2> trace_derivatives(const ComplexShears& sigma);

struct FitOptions {
    int max_iterations{50};
    double tolerance{1e-10};
};

/// Gauss-Newton on the three trace residuals over (s1, s2), s3 = -s1 - s2.
/// Lift signs are matched to the target at the seed. Throws ConvergenceError
/// carrying the final residual when the residual stays above tolerance.
ComplexShears fit_shears_to_representation(const TraceTriple& target, const ComplexShears& seed,
                                           const FitOptions& options = {});

/// Max over the three traces of |normalized trace - target|.
double trace_error(const ComplexShears& sigma, const TraceTriple& target);

/// Derivative of the full trace triple (x, y, z). The (x, y) pair alone is a
/// degenerate chart at orthogonal Fuchsian points, where z = xy/2 is a double
/// root of the Markov relation.
struct RepresentationTangent {
    std::array<cplx, 3> d{};

    RepresentationTangent operator+(const RepresentationTangent& o) const;
    RepresentationTangent operator*(cplx k) const;
    double norm() const;
    /// Real coordinates (Re, Im) of each component.
    std::array<double, 6> real_coordinates() const;
};

struct ChartJacobian {
    std::array<RepresentationTangent, 2> shear;   ///< along real s1, s2: spans P
    std::array<RepresentationTangent, 2> bending; ///< along imaginary s1, s2: spans iP
    double cauchy_riemann_residual{0.0};          ///< max_k |bending_k - i shear_k|
    double gram_determinant{0.0};                 ///< of the four real 6-vectors
};

inline constexpr double kJacobianStep = 1e-4;

/// Central differences at kJacobianStep with one Richardson level.
/// Throws GeometryError for inadmissible shears.
ChartJacobian chart_jacobian(const ComplexShears& sigma);

/// The trace triple, sign-normalized like TraceTriple, as a function of shears.
TraceTriple traces_of(const ComplexShears& sigma);

struct Projection {
    RepresentationTangent p;           ///< component in P
    RepresentationTangent q;           ///< v = p + i q
    std::array<double, 2> preimage{};  ///< real shear direction (ds1, ds2) mapping to p
    double residual{0.0};              ///< distance from v to P + iP
};

/// Decomposes v = p + i q with p, q in P at sigma0 (4 x 4 real normal equations)
/// and returns the real-shear preimage of p. Throws GeometryError when the
/// Gram determinant is below 1e-12.
Projection project_and_invert(const RepresentationTangent& v, const ComplexShears& sigma0);

/// Square real chart (Re s1, Im s1, Re s2, Im s2) -> (Re x, Im x, Re z, Im z).
tangent::Vec square_chart(const tangent::Vec& shears);

/// Inverse of square_chart near sigma0: y is the Markov root nearest the
/// base value of y, then shears are fitted from sigma0.
tangent::Vec square_chart_inverse(const tangent::Vec& xz, const ComplexShears& sigma0);

} // namespace quakebend::shearbend
