#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "quakebend/ptorus.hpp"

using namespace quakebend;

namespace {

const cplx I{0.0, 1.0};

/// Word image by explicit left-to-right products of raw matrices.
Mat2 product_oracle(const Mat2& x, const Mat2& y, const Word& w) {
    const Mat2 xi{x.d, -x.b, -x.c, x.a};
    const Mat2 yi{y.d, -y.b, -y.c, y.a};
    Mat2 p = Mat2::identity();
    for (Letter c : w.letters()) {
        const Mat2& f = c == 1 ? x : c == -1 ? xi : c == 2 ? y : yi;
        p = testing::product_by_hand(p, f);
    }
    return p;
}

cplx commutator_oracle(const Isometry& x, const Isometry& y) {
    return product_oracle(x.matrix(), y.matrix(), Word::parse("XYxy")).trace();
}

/// Quasi-Fuchsian deformation: complexify the orthogonal group's lengths and
/// re-solve the puncture relation for the off-diagonal entry.
MarkedGroup complex_group(cplx half_x, cplx shift) {
    // X = diag(e^a, e^-a); Y = [[c, s], [s', c']] with tr[X,Y] = -2.
    const cplx a = half_x;
    const cplx x = std::exp(a), xinv = std::exp(-a);
    // choose Y = P diag(...) with a free diagonal shift; solve b*c = from commutator:
    // tr[X,Y] = 2 - bc (x - 1/x)^2 for Y = [[p, b], [c, s]] with ps - bc = 1.
    const cplx diff2 = (x - xinv) * (x - xinv);
    const cplx bc = 4.0 / diff2;
    const cplx b = std::exp(shift) * std::sqrt(bc);
    const cplx cc = bc / b;
    const cplx p = std::cosh(shift) + 0.3 * I;
    const cplx s = (1.0 + bc) / p;
    return MarkedGroup(Isometry::diagonal(x), Isometry::from_entries(p, b, cc, s));
}

} // namespace

TEST_CASE("slope parsing and normalization") {
    CHECK(Slope::parse("2/3") == Slope(2, 3));
    CHECK(Slope::parse("-1/2") == Slope(1, -2));
    CHECK(Slope::parse("1/0") == Slope(-1, 0));
    CHECK(Slope::parse("5") == Slope(5, 1));
    CHECK(Slope(1, -2).q == 2);
    CHECK(Slope(1, -2).p == -1);
    CHECK(Slope(-1, 0).p == 1);
    CHECK(Slope(2, 3).to_string() == "2/3");
    CHECK_THROWS_AS(Slope(2, 4), InvalidArgument);
    CHECK_THROWS_AS(Slope(0, 0), InvalidArgument);
    CHECK_THROWS_AS(Slope::parse("a/b"), InvalidArgument);
}

TEST_CASE("orthogonal Fuchsian group") {
    for (double l : {0.3, 1.0, 1.76, 2.4, 4.0, 9.0}) {
        const MarkedGroup g = fuchsian_orthogonal(l);
        const double u = orthogonal_partner_half_length(l);
        CHECK(std::cosh(l / 2) * std::tanh(u) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(commutator_oracle(g.x(), g.y()) + 2.0) <= 1e-12);
        CHECK(std::abs(g.commutator_trace() + 2.0) <= 1e-12);
        const TraceTriple t = g.trace_triple();
        CHECK(std::abs(t.x.imag()) + std::abs(t.y.imag()) + std::abs(t.z.imag()) < 1e-14);
        CHECK(t.x.real() > 2);
        CHECK(t.y.real() > 2);
        CHECK(t.z.real() > 2);
        CHECK(std::abs(t.z - t.x * t.y / 2.0) <= 1e-10);
        CHECK(t.markov_residual() <= 1e-8);
        CHECK(t.x.real() == doctest::Approx(2 * std::cosh(l / 2)).epsilon(1e-13));
        CHECK(t.y.real() == doctest::Approx(2 * std::cosh(u)).epsilon(1e-13));
        // Y's axis is the geodesic (-1, 1), orthogonal to X's axis (0, inf)
        const OrientedGeodesic ay = axis_of(g.y());
        const double e1 = ay.attracting().value().real();
        const double e2 = ay.repelling().value().real();
        CHECK(std::abs(e1 * e2 + 1.0) < 1e-12);
        CHECK(std::abs(e1 + e2) < 1e-12);
    }
    CHECK_THROWS_AS(fuchsian_orthogonal(0.0), InvalidArgument);
    CHECK_THROWS_AS(fuchsian_orthogonal(-1.0), InvalidArgument);
    CHECK_THROWS_AS(fuchsian_orthogonal(NAN), InvalidArgument);
}

TEST_CASE("symmetric point") {
    const double l = symmetric_length();
    CHECK(l == doctest::Approx(2 * std::acosh(std::sqrt(2.0))).epsilon(1e-14));
    CHECK(l == doctest::Approx(1.76275).epsilon(1e-5));
    CHECK(orthogonal_partner_half_length(l) == doctest::Approx(std::atanh(1 / std::sqrt(2.0))).epsilon(1e-13));
    const TraceTriple t = fuchsian_orthogonal(l).trace_triple();
    CHECK(std::abs(t.x - 2 * std::sqrt(2.0)) < 1e-13);
    CHECK(std::abs(t.y - 2 * std::sqrt(2.0)) < 1e-13);
    CHECK(std::abs(t.z - 4.0) < 1e-13);
    CHECK(t.markov_residual() < 1e-12);
}

TEST_CASE("marked group validation") {
    CHECK_THROWS_AS(MarkedGroup(Isometry::diagonal(2.0), Isometry::diagonal(3.0)), GeometryError);
    // parabolic generator with parabolic commutator
    const Isometry par = Isometry::from_entries(1, 1, 0, 1);
    const Isometry other = Isometry::from_entries(1, 0, 2.0 * I, 1);
    CHECK(std::abs(commutator_oracle(par, other) + 2.0) < 1e-12);
    CHECK_THROWS_AS(MarkedGroup(par, other), GeometryError);
    CHECK_NOTHROW(MarkedGroup(par, other, kCommutatorTolerance, GeneratorPolicy::allow_degenerate));
}

TEST_CASE("word evaluation matches explicit products") {
    const MarkedGroup g = complex_group(cplx(0.7, 0.2), cplx(0.1, -0.3));
    CHECK(std::abs(g.commutator_trace() + 2.0) < 1e-10);
    for (const char* s : {"X", "y", "XY", "XXYxY", "yyXYXyx", "1"}) {
        const Word w = Word::parse(s);
        CHECK(testing::projective_diff(g.evaluate(w).matrix(), product_oracle(g.x().matrix(), g.y().matrix(), w)) <
              1e-10);
        CHECK(testing::projective_diff(evaluate_word(g.x(), g.y(), w).matrix(), g.evaluate(w).matrix()) < 1e-12);
    }
}

TEST_CASE("slope words and the trace recursion") {
    CHECK(slope_word(Slope(0, 1)).to_string() == "X");
    CHECK(slope_word(Slope(1, 0)).to_string() == "Y");
    CHECK(slope_word(Slope(1, 1)).to_string() == "XY");
    CHECK(slope_word(Slope(1, 2)) == Word::x() * Word::parse("XY"));
    const MarkedGroup sym = fuchsian_orthogonal(symmetric_length());
    const MarkedGroup cx = complex_group(cplx(0.9, 0.4), cplx(-0.2, 0.5));
    for (const MarkedGroup* g : {&sym, &cx}) {
        const TraceTriple t = g->trace_triple();
        for (long long q = 0; q <= 8; ++q)
            for (long long p = -8; p <= 8; ++p) {
                if (std::gcd(p, q) != 1 || (q == 0 && p != 1)) continue;
                const Slope s(p, q);
                const cplx direct = product_oracle(g->x().matrix(), g->y().matrix(), slope_word(s)).trace();
                const cplx rec = slope_trace_by_recursion(t, s);
                const cplx nd = normalize_trace_sign(direct);
                CHECK(std::abs(normalize_trace_sign(rec) - nd) < 1e-9 * (1 + std::abs(nd)));
            }
    }
}

TEST_CASE("change of marking") {
    const MarkedGroup g = complex_group(cplx(0.8, 0.1), cplx(0.3, 0.2));
    const IntMatrix id{{{1, 0}, {0, 1}}};
    const MarkedGroup same = change_marking(g, id);
    CHECK(testing::projective_diff(same.x().matrix(), g.x().matrix()) < 1e-14);
    CHECK(testing::projective_diff(same.y().matrix(), g.y().matrix()) < 1e-14);

    // M sends slope 1/2 to 0/1, so the new X represents the old slope 1/2
    const IntMatrix m{{{2, -1}, {-1, 1}}};
    CHECK(apply_slope_action(m, Slope(1, 2)) == Slope(0, 1));
    const MarkedGroup h = change_marking(g, m);
    const cplx old_trace = g.evaluate(slope_word(Slope(1, 2))).normalized_trace();
    CHECK(std::abs(h.x().normalized_trace() - old_trace) < 1e-10);
    const MarkingChange mc = marking_change(m);
    CHECK(mc.homology[0][0] == 2);
    CHECK(mc.homology[1][0] == 1);

    CHECK_THROWS_AS(marking_change(IntMatrix{{{2, 0}, {0, 1}}}), InvalidArgument);
    CHECK_THROWS_AS(change_marking(g, IntMatrix{{{1, 1}, {1, 1}}}), InvalidArgument);
}

TEST_CASE("random re-markings preserve the puncture and slope lengths") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> k(-2, 2), op(0, 2);
    const MarkedGroup g = complex_group(cplx(0.6, -0.3), cplx(0.2, 0.1));
    for (int i = 0; i < 20; ++i) {
        IntMatrix m{{{1, 0}, {0, 1}}};
        for (int s = 0; s < 4; ++s) {
            const int c = k(rng);
            switch (op(rng)) {
            case 0: for (auto& row : m) row[1] += c * row[0]; break;
            case 1: for (auto& row : m) row[0] += c * row[1]; break;
            default: for (auto& row : m) std::swap(row[0], row[1]); break;
            }
        }
        long long size = 0;
        for (const auto& row : m) size = std::max({size, std::llabs(row[0]), std::llabs(row[1])});
        if (size > 6) continue;
        const MarkedGroup h = change_marking(g, m);
        CHECK(std::abs(commutator_oracle(h.x(), h.y()) + 2.0) < 1e-9);
        CHECK(h.trace_triple().markov_residual() <= 1e-9);
        // a slope s of the new marking is the slope M^{-1}(s) of the old one
        const long long det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        const IntMatrix inv{{{det * m[1][1], -det * m[0][1]}, {-det * m[1][0], det * m[0][0]}}};
        for (const Slope& s : {Slope(0, 1), Slope(1, 0), Slope(1, 1), Slope(2, 3)}) {
            const ComplexLength a = length_of_slope(h, s);
            const ComplexLength b = length_of_slope(g, apply_slope_action(inv, s));
            CHECK(a.length == doctest::Approx(b.length).epsilon(1e-8));
        }
    }
}

TEST_CASE("lengths of slopes") {
    const MarkedGroup sym = fuchsian_orthogonal(symmetric_length());
    const ComplexLength l0 = length_of_slope(sym, Slope(0, 1));
    const ComplexLength linf = length_of_slope(sym, Slope(1, 0));
    CHECK(l0.length == doctest::Approx(2 * std::acosh(std::sqrt(2.0))).epsilon(1e-13));
    CHECK(linf.length == doctest::Approx(l0.length).epsilon(1e-13));
    CHECK(l0.angle == 0.0);
    const ComplexLength l1 = length_of_slope(sym, Slope(1, 1));
    CHECK(l1.length == doctest::Approx(2 * std::acosh(2.0)).epsilon(1e-13));
    // a marking change fixing slope 0 (Dehn twist along X) preserves its complex length
    const IntMatrix twist{{{1, 0}, {1, 1}}};
    CHECK(apply_slope_action(twist, Slope(0, 1)) == Slope(0, 1));
    const MarkedGroup cx = complex_group(cplx(0.7, 0.2), cplx(0.1, 0.4));
    const ComplexLength a = length_of_slope(cx, Slope(0, 1));
    const ComplexLength b = length_of_slope(change_marking(cx, twist), Slope(0, 1));
    CHECK(a.length == doctest::Approx(b.length).epsilon(1e-10));
    CHECK(a.angle == doctest::Approx(b.angle).epsilon(1e-10));

    // parabolic slope image is rejected
    const Isometry par = Isometry::from_entries(1, 1, 0, 1);
    const MarkedGroup deg(par, Isometry::from_entries(1, 0, 2.0 * I, 1), kCommutatorTolerance,
                          GeneratorPolicy::allow_degenerate);
    CHECK_THROWS_AS(length_of_slope(deg, Slope(0, 1)), GeometryError);
}
