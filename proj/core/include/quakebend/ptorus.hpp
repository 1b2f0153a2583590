#pragma once

// Marked once-punctured-torus groups: generator pairs with parabolic
// commutator, trace triples on the Markov surface, slopes and re-marking.

#include <array>
#include <string>
#include <string_view>

#include "quakebend/isom3.hpp"
#include "quakebend/words.hpp"

namespace quakebend {

using IntMatrix = std::array<std::array<long long, 2>, 2>;

/// Slope p/q of a simple closed curve; homology class (q, p) in the basis ([X], [Y]).
struct Slope {
    long long p{0};
    long long q{1};

    /// Throws InvalidArgument unless gcd(|p|, |q|) = 1. Normalizes to q > 0, or q = 0 and p = 1.
    Slope(long long p_, long long q_);
    /// Parses "p/q" or a bare integer.
    static Slope parse(std::string_view text);

    std::string to_string() const;
    friend bool operator==(const Slope&, const Slope&) = default;
};

/// Traces of X, Y and XY. The lifts of X and Y are chosen with Re tr >= 0
/// (ties: Im tr >= 0) and z is computed from those lifts.
struct TraceTriple {
    cplx x;
    cplx y;
    cplx z;

    /// |x^2 + y^2 + z^2 - xyz|
    double markov_residual() const;
};

inline constexpr double kCommutatorTolerance = 1e-9;

/// Whether generators may degenerate (become parabolic) after a deformation.
enum class GeneratorPolicy : bool { nondegenerate, allow_degenerate };

/// Image of a word under X -> x, Y -> y.
Isometry evaluate_word(const Isometry& x, const Isometry& y, const Word& w);

class MarkedGroup {
public:
    /// Throws GeometryError if |tr[X,Y] + 2| > tolerance, or if a generator is
    /// parabolic under the nondegenerate policy.
    MarkedGroup(Isometry x, Isometry y, double tolerance = kCommutatorTolerance,
                GeneratorPolicy policy = GeneratorPolicy::nondegenerate);

    const Isometry& x() const { return x_; }
    const Isometry& y() const { return y_; }

    /// Image of a word in the generators.
    Isometry evaluate(const Word& w) const;
    /// tr(X Y X^-1 Y^-1); independent of the lifts.
    cplx commutator_trace() const;
    TraceTriple trace_triple() const;

private:
    Isometry x_;
    Isometry y_;
};

/// Fuchsian group whose generator axes cross orthogonally:
/// X = diag(e^{l/2}, e^{-l/2}) and Y = [[cosh u, sinh u], [sinh u, cosh u]] with
/// cosh(l/2) tanh(u) = 1. Throws InvalidArgument unless l_gamma > 0 and finite.
MarkedGroup fuchsian_orthogonal(double l_gamma);

/// The half-length u of Y in fuchsian_orthogonal(l_gamma).
double orthogonal_partner_half_length(double l_gamma);

/// Length at which both generators of the orthogonal group have trace 2 sqrt 2.
double symmetric_length();

Word slope_word(const Slope& s);

/// Automorphism realizing the slope action z -> (az + b)/(cz + d) of M: the
/// image of X has the slope M^{-1}(0) and the image of Y the slope M^{-1}(inf).
/// Throws InvalidArgument unless det M = +-1.
MarkingChange marking_change(const IntMatrix& m);

/// Slope image under M: (ap + bq) / (cp + dq).
Slope apply_slope_action(const IntMatrix& m, const Slope& s);

/// Generators re-chosen by marking_change(M); X' = rho(phi X), Y' = rho(phi Y).
MarkedGroup change_marking(const MarkedGroup& g, const IntMatrix& m);

/// Complex length of the slope word's image. Throws GeometryError if parabolic.
ComplexLength length_of_slope(const MarkedGroup& g, const Slope& s);

/// Trace of the slope word computed by the Farey recursion
/// tr(UV) = tr(U) tr(V) - tr(U V^-1) from the trace triple alone.
cplx slope_trace_by_recursion(const TraceTriple& t, const Slope& s);

} // namespace quakebend
