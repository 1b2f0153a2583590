// Acceptance checks: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "quakebend/bend.hpp"
#include "quakebend/csv.hpp"
#include "quakebend/shearbend.hpp"
#include "quakebend/tangent.hpp"

using namespace quakebend;

namespace {

constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};

struct Outcome {
    bool pass{true};
    std::string detail;
};

/// Tracks the worst value of a quantity against its tolerance.
struct Worst {
    const char* name;
    double tolerance;
    double value{0.0};
    bool lower_bound{false}; ///< the quantity must stay above the tolerance

    void add(double v) {
        if (lower_bound)
            value = value == 0.0 ? v : std::min(value, v);
        else
            value = std::max(value, std::isnan(v) ? INFINITY : v);
    }
    bool ok() const { return lower_bound ? value > tolerance : value <= tolerance; }
    std::string str() const {
        return std::string(name) + "=" + csv::format(value) + (lower_bound ? ">" : "<=") + csv::format(tolerance);
    }
};

Outcome combine(std::initializer_list<const Worst*> items, std::string extra = {}) {
    Outcome o;
    for (const Worst* w : items) {
        o.pass = o.pass && w->ok();
        if (!o.detail.empty()) o.detail += " ";
        o.detail += w->str();
    }
    if (!extra.empty()) o.detail += " " + extra;
    return o;
}

Mat2 product_by_hand(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

std::vector<double> acceptance_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 60; ++i) g.push_back(i == 30 ? 0.0 : -1.5 + 3.0 * i / 60);
    return g;
}

/// All freely reduced words of length 1..n.
std::vector<Word> reduced_words(int n) {
    std::vector<Word> out;
    const Letter codes[4] = {1, -1, 2, -2};
    std::vector<std::vector<Letter>> layer{{}};
    for (int len = 1; len <= n; ++len) {
        std::vector<std::vector<Letter>> next;
        for (const auto& w : layer)
            for (Letter c : codes) {
                if (!w.empty() && w.back() == -c) continue;
                auto v = w;
                v.push_back(c);
                out.emplace_back(v);
                next.push_back(std::move(v));
            }
        layer = std::move(next);
    }
    return out;
}

Outcome c2_reproduction() {
    tangent::SecondDifferenceReport sd;
    const double l = symmetric_length();
    sd = tangent::second_one_sided_difference([l](double t) { return boundary_function(l, t); }, 0.0);
    Worst d1{"max|F'(0+-)|", 1e-3};
    d1.add(std::abs(sd.first_left));
    d1.add(std::abs(sd.first_right));
    Worst right{"|F''(0+)|", 5e-3};
    right.add(std::abs(sd.right));
    Worst left{"|F''(0-)+0.25|", 5e-3};
    left.add(std::abs(sd.left + 0.25));
    Worst gap{"|gap-0.25|", 5e-3};
    gap.add(std::abs(sd.gap - 0.25));
    return combine({&d1, &right, &left, &gap});
}

Outcome orthogonality_relation() {
    Worst comm{"max|tr[X,Y]+2|", 1e-10};
    Worst rel{"max|cosh(l/2)tanh(m/2)-1|", 1e-10};
    for (int i = 0; i < 20; ++i) {
        const double l = 0.5 + 2.5 * i / 19;
        const MarkedGroup g = fuchsian_orthogonal(l);
        comm.add(std::abs(g.commutator_trace() + 2.0));
        // partner length read off the trace of Y
        const double m = 2.0 * std::acosh(std::abs(g.y().trace().real()) / 2.0);
        rel.add(std::abs(std::cosh(l / 2) * std::tanh(m / 2) - 1.0));
    }
    return combine({&comm, &rel});
}

Outcome dual_oracle() {
    const MarkedGroup base = fuchsian_orthogonal(symmetric_length());
    const std::vector<Word> words = reduced_words(6);
    const std::vector<double> ts{-pi / 3, -pi / 6, -0.2, 0.2, pi / 6, pi / 3};
    Worst diff{"max_trace_diff", 1e-9};
    for (const Slope& s : {Slope(0, 1), Slope(1, 0), Slope(1, 1), Slope(1, 2), Slope(2, 3)}) {
        const CrossingEnumerator en(base, s);
        std::vector<MarkedGroup> bent;
        for (double t : ts) bent.push_back(quakebend_by_marking({base, s, t}));
        for (const Word& w : words) {
            const auto cs = en.crossings(w);
            for (std::size_t k = 0; k < ts.size(); ++k) {
                const cplx a = bend_along(base, en.bending_word(), cs, ts[k], w).normalized_trace();
                const cplx b = bent[k].evaluate(w).normalized_trace();
                diff.add(std::abs(a - b) / std::max(1.0, std::abs(b)));
            }
        }
    }
    return combine({&diff}, "words=" + std::to_string(words.size()));
}

Outcome conservation() {
    const MarkedGroup base = fuchsian_orthogonal(symmetric_length());
    Worst markov{"max_markov", 1e-8};
    Worst comm{"max|tr[X,Y]+2|", 1e-9};
    Worst bend{"max_bending_trace_drift", 1e-12};
    for (const Slope& s : {Slope(0, 1), Slope(1, 0), Slope(1, 1), Slope(1, 2), Slope(2, 3)}) {
        const Word bw = slope_word(s);
        const cplx bend0 = base.evaluate(bw).normalized_trace();
        for (double t : acceptance_grid()) {
            const MarkedGroup g = quakebend_by_marking({base, s, t});
            markov.add(g.trace_triple().markov_residual());
            comm.add(std::abs(g.commutator_trace() + 2.0));
            bend.add(std::abs(g.evaluate(bw).normalized_trace() - bend0) / std::max(1.0, std::abs(bend0)));
        }
    }
    return combine({&markov, &comm, &bend});
}

Outcome closed_form_trace() {
    const MarkedGroup base = fuchsian_orthogonal(symmetric_length());
    Worst law{"max|trY_t-2sqrt2cos(t/2)|", 1e-10};
    Worst hand{"max|trY_t-hand_product|", 1e-10};
    for (double t : acceptance_grid()) {
        const Mat2 rot{std::exp(I * (t / 2)), 0.0, 0.0, std::exp(-I * (t / 2))};
        const cplx oracle = normalize_trace_sign(product_by_hand(rot, base.y().matrix()).trace());
        const cplx got = normalize_trace_sign(quakebend_by_marking({base, Slope(0, 1), t}).y().trace());
        law.add(std::abs(oracle - 2 * std::sqrt(2.0) * std::cos(t / 2)));
        hand.add(std::abs(got - oracle));
    }
    return combine({&law, &hand});
}

/// Largest norm over increasing sub-products, computed directly.
double brute_product_bound(const std::vector<Mat2>& a) {
    const std::size_t n = a.size();
    double r = frobenius_norm(Mat2::identity()); // empty product included
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        Mat2 p = Mat2::identity();
        for (std::size_t k = 0; k < n; ++k)
            if (mask & (std::size_t{1} << k)) p = product_by_hand(p, a[k]);
        r = std::max(r, frobenius_norm(p));
    }
    return r;
}

Outcome perturbation_bound() {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> size(1, 8);
    std::uniform_real_distribution<double> u(-1.0, 1.0), scale(0.0, 1.0);
    auto entry = [&] { return cplx(u(rng), u(rng)); };
    int violations = 0;
    Worst r_mismatch{"max_rel|R-R_brute|", 1e-12};
    bool zero_exact = true;
    for (int i = 0; i < 1000; ++i) {
        const int n = size(rng);
        const double eps = i % 100 == 0 ? 0.0 : scale(rng);
        std::vector<Mat2> a, e;
        for (int k = 0; k < n; ++k) {
            a.push_back({entry(), entry(), entry(), entry()});
            e.push_back(cplx(eps) * Mat2{entry(), entry(), entry(), entry()});
        }
        const PerturbationGap g = product_perturbation_gap(a, e);
        const double r = brute_product_bound(a);
        r_mismatch.add(std::abs(g.product_bound - r) / r);
        // recompute the bound from the brute-force R
        const double rhs = r * std::expm1(n * r * g.max_perturbation);
        if (g.lhs > g.rhs || g.lhs > rhs) ++violations;
        if (eps == 0.0) zero_exact = zero_exact && g.lhs == 0.0 && g.rhs == 0.0;
    }
    Outcome o = combine({&r_mismatch});
    o.pass = o.pass && violations == 0 && zero_exact;
    o.detail += " violations=" + std::to_string(violations) + " zero_case_exact=" + (zero_exact ? "yes" : "no");
    return o;
}

Outcome truncation() {
    const MarkedGroup base = fuchsian_orthogonal(symmetric_length());
    struct Case {
        Slope s;
        const char* w;
    };
    Worst ratio{"max_ratio", 0.9};
    Worst e20{"max_error(20)", 1e-8};
    Worst norm{"max_prefix_norm", 100.0};
    int multi = 0;
    for (const Case& c : {Case{Slope(0, 1), "YXY"}, Case{Slope(2, 3), "YXY"}, Case{Slope(1, 2), "XYY"},
                          Case{Slope(1, 1), "YY"}}) {
        const CrossingEnumerator en(base, c.s);
        const Word w = Word::parse(c.w);
        if (en.crossings(w).size() >= 2) ++multi;
        for (double t : {pi / 3, 0.7, -0.5}) {
            std::vector<double> err;
            for (int r = 1; r <= 20; ++r) {
                const TruncationReport rep = truncated_holonomy(en, t, w, r);
                err.push_back(rep.error);
                norm.add(rep.max_prefix_norm);
            }
            for (int r = 3; r <= 10; ++r)
                ratio.add(err[static_cast<std::size_t>(r)] / err[static_cast<std::size_t>(r - 1)]);
            e20.add(err.back());
        }
    }
    Outcome o = combine({&ratio, &e20, &norm}, "multi_crossing_cases=" + std::to_string(multi));
    o.pass = o.pass && multi == 4;
    return o;
}

Outcome shear_chart() {
    using namespace shearbend;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> wide(-1.5, 1.5), near(-0.1, 0.1), tiny(-1e-2, 1e-2);
    Worst cusp{"max_cusp", 1e-9};
    for (int i = 0; i < 500; ++i)
        cusp.add(cusp_residual(ComplexShears::from_pair({wide(rng), wide(rng)}, {wide(rng), wide(rng)})));
    const ComplexShears sym = ComplexShears::symmetric();
    Worst cr{"max_CR", 1e-6};
    Worst gram{"min_gram", 1e-6};
    gram.lower_bound = true;
    Worst round{"max_roundtrip", 1e-10};
    for (int i = 0; i < 40; ++i) {
        const ComplexShears star = ComplexShears::from_pair(sym.s[0] + cplx(near(rng), near(rng)),
                                                            sym.s[1] + cplx(near(rng), near(rng)));
        const ChartJacobian j = chart_jacobian(star);
        cr.add(j.cauchy_riemann_residual);
        gram.add(j.gram_determinant);
        const TraceTriple target = traces_of(star);
        const ComplexShears seed = ComplexShears::from_pair(star.s[0] + cplx(tiny(rng), tiny(rng)),
                                                            star.s[1] + cplx(tiny(rng), tiny(rng)));
        round.add(trace_error(fit_shears_to_representation(target, seed), target));
    }
    return combine({&cusp, &cr, &round, &gram});
}

Outcome path_projection() {
    using namespace shearbend;
    const MarkedGroup base = fuchsian_orthogonal(symmetric_length());
    const ComplexShears s0 = fit_shears_to_representation(base.trace_triple(), ComplexShears::symmetric());
    const tangent::CurveFn path = [&](double t) {
        const TraceTriple tr = quakebend_by_marking({base, Slope(0, 1), t}).trace_triple();
        return tangent::Vec{tr.x.real(), tr.x.imag(), tr.y.real(), tr.y.imag(), tr.z.real(), tr.z.imag()};
    };
    const tangent::OneSidedDerivative d = tangent::one_sided_derivative(path, 0.0, 1.0);
    RepresentationTangent v;
    for (std::size_t c = 0; c < 3; ++c) v.d[c] = cplx(d.value[2 * c], d.value[2 * c + 1]);
    const Projection pr = project_and_invert(v, s0);
    Worst p{"|p|", 5e-5};
    p.add(pr.p.norm());
    Worst size{"|tangent|", 0.1};
    size.lower_bound = true;
    size.add(v.norm());
    return combine({&p, &size});
}

Outcome tangent_toolkit() {
    const tangent::MapFn norm = [](const tangent::Vec& x) {
        double s = 0;
        for (double c : x) s += c * c;
        return tangent::Vec{std::sqrt(s)};
    };
    Worst abs_err{"max|T(v)-|v||", 1e-8};
    const tangent::Vec zero3{0, 0, 0};
    for (const tangent::Vec& v : std::vector<tangent::Vec>{{1, 0, 0}, {-2, 0, 0}, {0.3, -0.4, 1.2}, {-1e-3, 5, 2}}) {
        const double expected = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        abs_err.add(std::abs(tangent::directional_derivative(norm, zero3, v).value[0] - expected));
    }
    const tangent::MapFn abs1 = [](const tangent::Vec& x) { return tangent::Vec{std::abs(x[0])}; };
    for (double v : {1.0, -1.0, 0.25, -7.0})
        abs_err.add(std::abs(tangent::directional_derivative(abs1, {0.0}, {v}).value[0] - std::abs(v)));

    const shearbend::ComplexShears s0 = shearbend::ComplexShears::symmetric();
    const tangent::Vec x0{s0.s[0].real(), s0.s[0].imag(), s0.s[1].real(), s0.s[1].imag()};
    const tangent::MapFn phi = [](const tangent::Vec& v) { return shearbend::square_chart(v); };
    const tangent::MapFn inv = [&](const tangent::Vec& v) { return shearbend::square_chart_inverse(v, s0); };
    const std::vector<tangent::Vec> dirs{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0.3, -0.2, 0.5, 0.1}};
    Worst inverse{"inverse_tangent_residual", 1e-4};
    inverse.add(tangent::inverse_tangent_check(phi, inv, x0, dirs));
    return combine({&abs_err, &inverse});
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "non-C2 boundary length at t=0", c2_reproduction},
        {2, "orthogonality and parabolic commutator", orthogonality_relation},
        {3, "re-marking and crossing constructions agree", dual_oracle},
        {4, "conservation along bending", conservation},
        {5, "closed-form trace law", closed_form_trace},
        {6, "product perturbation bound", perturbation_bound},
        {7, "corridor truncation decay", truncation},
        {8, "shear-bend chart", shear_chart},
        {9, "bending tangent projects to zero shear", path_projection},
        {10, "tangent toolkit", tangent_toolkit},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < 10.0;
        if (!in_time) o.detail += " (over 10 s)";
        const bool pass = o.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("criterion %2d %s: %s [%s] %.2fs\n", c.id, pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
