#include "quakebend/ptorus.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace quakebend {

Slope::Slope(long long p_, long long q_) : p(p_), q(q_) {
    if (std::gcd(std::llabs(p), std::llabs(q)) != 1) throw InvalidArgument("slope must be a coprime pair");
    if (q < 0 || (q == 0 && p < 0)) {
        p = -p;
        q = -q;
    }
}

namespace {

long long parse_integer(std::string_view text) {
    long long v = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || first == last)
        throw InvalidArgument("not an integer: " + std::string(text));
    return v;
}

} // namespace

Slope Slope::parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return {parse_integer(text), 1};
    return {parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1))};
}

std::string Slope::to_string() const { return std::to_string(p) + "/" + std::to_string(q); }

double TraceTriple::markov_residual() const { return std::abs(x * x + y * y + z * z - x * y * z); }

Isometry evaluate_word(const Isometry& x, const Isometry& y, const Word& w) {
    const Isometry xi = x.inverse();
    const Isometry yi = y.inverse();
    Mat2 m = Mat2::identity();
    for (Letter c : w.letters()) {
        const Isometry& g = c == 1 ? x : c == -1 ? xi : c == 2 ? y : yi;
        m = m * g.matrix();
    }
    return Isometry::from_matrix(m);
}

MarkedGroup::MarkedGroup(Isometry x, Isometry y, double tolerance, GeneratorPolicy policy)
    : x_(x), y_(y) {
    const cplx c = commutator_trace();
    if (!(std::abs(c + 2.0) <= tolerance))
        throw GeometryError("commutator is not parabolic with trace -2");
    if (policy == GeneratorPolicy::allow_degenerate) return;
    for (const Isometry* g : {&x_, &y_}) {
        const IsometryKind k = classify(*g).kind;
        if (k == IsometryKind::parabolic || k == IsometryKind::identity)
            throw GeometryError("generator must not be parabolic");
    }
}

Isometry MarkedGroup::evaluate(const Word& w) const { return evaluate_word(x_, y_, w); }

cplx MarkedGroup::commutator_trace() const {
    const Mat2 c = x_.matrix() * y_.matrix() * x_.inverse().matrix() * y_.inverse().matrix();
    return c.trace();
}

TraceTriple MarkedGroup::trace_triple() const {
    const Isometry x = normalize_trace_sign(x_.trace()) == x_.trace() ? x_ : x_.negated();
    const Isometry y = normalize_trace_sign(y_.trace()) == y_.trace() ? y_ : y_.negated();
    return {x.trace(), y.trace(), (x.matrix() * y.matrix()).trace()};
}

double orthogonal_partner_half_length(double l_gamma) {
    if (!(l_gamma > 0) || !std::isfinite(l_gamma))
        throw InvalidArgument("orthogonal group needs a positive finite length");
    return std::atanh(1.0 / std::cosh(l_gamma / 2));
}

double symmetric_length() { return 2 * std::acosh(std::sqrt(2.0)); }

MarkedGroup fuchsian_orthogonal(double l_gamma) {
    const double u = orthogonal_partner_half_length(l_gamma);
    const Isometry x = Isometry::diagonal(std::exp(l_gamma / 2));
    const Isometry y = Isometry::from_entries(std::cosh(u), std::sinh(u), std::sinh(u), std::cosh(u));
    return MarkedGroup(x, y);
}

Word slope_word(const Slope& s) { return slope_word(s.p, s.q); }

MarkingChange marking_change(const IntMatrix& m) {
    const long long det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (det != 1 && det != -1) throw InvalidArgument("marking matrix must have determinant +-1");
    // Homology action: swap-conjugate of M^{-1}, since slope p/q has class (q, p).
    const IntMatrix a{{{det * m[0][0], -det * m[1][0]}, {-det * m[0][1], det * m[1][1]}}};
    return automorphism_with_homology(a);
}

Slope apply_slope_action(const IntMatrix& m, const Slope& s) {
    return {m[0][0] * s.p + m[0][1] * s.q, m[1][0] * s.p + m[1][1] * s.q};
}

MarkedGroup change_marking(const MarkedGroup& g, const IntMatrix& m) {
    const MarkingChange phi = marking_change(m);
    return MarkedGroup(g.evaluate(phi.x_image), g.evaluate(phi.y_image));
}

ComplexLength length_of_slope(const MarkedGroup& g, const Slope& s) {
    return complex_length(g.evaluate(slope_word(s)));
}

cplx slope_trace_by_recursion(const TraceTriple& t, const Slope& s) {
    if (s.q == 0) return t.y;
    if (s.p == 0) return t.x;
    const bool negative = s.p < 0;
    const long long ap = std::llabs(s.p);
    // Traces of the left word, right word and their product.
    cplx a = t.x;
    cplx b = t.y;
    cplx c = negative ? t.x * t.y - t.z : t.z;
    long long lp = 0, lq = 1, rp = 1, rq = 0;
    while (true) {
        const long long mp = lp + rp;
        const long long mq = lq + rq;
        if (mp == ap && mq == s.q) return c;
        if (ap * mq < mp * s.q) {
            // Pair becomes (L, LR); tr(L LR) = tr L tr LR - tr R.
            const cplx next = a * c - b;
            b = c;
            c = next;
            rp = mp;
            rq = mq;
        } else {
            // Pair becomes (LR, R); tr(LR R) = tr LR tr R - tr L.
            const cplx next = c * b - a;
            a = c;
            c = next;
            lp = mp;
            lq = mq;
        }
    }
}

} // namespace quakebend
