#include "quakebend/bend.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "quakebend/csv.hpp"

namespace quakebend {

namespace {

constexpr double kRealTolerance = 1e-10;

// Index of a letter in the X, x, Y, y ordering.
std::size_t letter_index(Letter c) {
    switch (c) {
    case 1: return 0;
    case -1: return 1;
    case 2: return 2;
    default: return 3;
    }
}

constexpr Letter kLetters[4] = {1, -1, 2, -2};

struct Generators {
    Mat2 m[4];

    explicit Generators(const MarkedGroup& g) {
        m[0] = g.x().matrix();
        m[1] = g.x().inverse().matrix();
        m[2] = g.y().matrix();
        m[3] = g.y().inverse().matrix();
    }
    const Mat2& of(Letter c) const { return m[letter_index(c)]; }

    Mat2 word(const Word& w) const {
        Mat2 out = Mat2::identity();
        for (Letter c : w.letters()) out = out * of(c);
        return out;
    }
};

// Extended Euclid: returns (x, y) with a x + b y = gcd(a, b) = +-1.
std::pair<long long, long long> bezout(long long a, long long b) {
    long long old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        const long long qt = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - qt * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - qt * s);
        std::tie(old_t, t) = std::make_pair(t, old_t - qt * t);
    }
    if (old_r < 0) return {-old_s, -old_t};
    return {old_s, old_t};
}

// Chordal tolerance for identifying two lifts, relative to their size.
double lift_tolerance(const OrientedGeodesic& g) {
    return 1e-6 * chordal_distance(g.attracting(), g.repelling());
}

struct FoundLift {
    std::vector<Letter> word;
    Mat2 element;
    OrientedGeodesic geodesic;
};

void add_unique(std::vector<FoundLift>& out, FoundLift&& f) {
    for (FoundLift& e : out) {
        if (h2::same_unoriented(e.geodesic, f.geodesic, lift_tolerance(e.geodesic))) {
            if (f.word.size() < e.word.size()) e = std::move(f);
            return;
        }
    }
    out.push_back(std::move(f));
}

struct RealMat {
    double a, b, c, d;

    RealMat operator*(const RealMat& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    cplx act(cplx z) const { return (a * z + b) / (c * z + d); }
    Mat2 complex() const { return {a, b, c, d}; }
};

RealMat real_part(const Mat2& m) { return {m.a.real(), m.b.real(), m.c.real(), m.d.real()}; }

// Depth-first search over reduced words w with d(p0, w p0) <= radius, keeping
// the lifts w . axis that separate p0 from target. The lift separates them
// exactly when the axis separates w^-1 p0 from w^-1 target.
std::vector<std::vector<FoundLift>> ball_search(const Generators& gens, const OrientedGeodesic& axis, cplx p0,
                                                const std::vector<cplx>& targets, double radius) {
    RealMat g[4];
    for (std::size_t i = 0; i < 4; ++i) g[i] = real_part(gens.m[i]);
    const RealMat n = real_part(h2::normalizing_map(axis));
    const double cosh_radius = std::cosh(radius);
    std::vector<std::vector<FoundLift>> out(targets.size());
    std::vector<Letter> word;
    auto visit = [&](auto&& self, const RealMat& w, const RealMat& w_inv) -> void {
        const cplx image = w.act(p0);
        const double c = 1.0 + std::norm(image - p0) / (2.0 * image.imag() * p0.imag());
        if (c > cosh_radius) return;
        const RealMat frame = n * w_inv;
        const double side0 = frame.act(p0).real();
        for (std::size_t k = 0; k < targets.size(); ++k) {
            if (side0 * frame.act(targets[k]).real() < 0) {
                const Mat2 wm = w.complex();
                add_unique(out[k], {word, wm, h2::transform(wm, axis)});
            }
        }
        for (std::size_t i = 0; i < 4; ++i) {
            const Letter ch = kLetters[i];
            if (!word.empty() && word.back() == -ch) continue;
            word.push_back(ch);
            self(self, w * g[i], g[i ^ 1] * w_inv);
            word.pop_back();
        }
    };
    const RealMat id{1.0, 0.0, 0.0, 1.0};
    visit(visit, id, id);
    return out;
}

bool same_lift_sets(const std::vector<FoundLift>& a, const std::vector<FoundLift>& b) {
    if (a.size() != b.size()) return false;
    return std::all_of(a.begin(), a.end(), [&](const FoundLift& f) {
        return std::any_of(b.begin(), b.end(), [&](const FoundLift& g) {
            return h2::same_unoriented(f.geodesic, g.geodesic, lift_tolerance(f.geodesic));
        });
    });
}

// f.geodesic is f.element . axis with the axis oriented along beta.
void require_resolvable_arc(cplx p0, cplx target) {
    const double d = h2::distance(p0, target);
    if (!(d <= kMaxArcLength))
        throw NumericalError("arc to xi.p0 has length " + csv::format(d) + ", beyond the resolvable " +
                             csv::format(kMaxArcLength));
}

std::vector<CrossingLift> order_crossings(std::vector<FoundLift>&& found, cplx p0, cplx target) {
    std::vector<CrossingLift> out;
    out.reserve(found.size());
    for (FoundLift& f : found) {
        CrossingLift c;
        c.word = Word(std::move(f.word));
        c.element = f.element;
        c.geodesic = h2::oriented_left_of(f.geodesic, p0);
        if (chordal_distance(c.geodesic.attracting(), f.geodesic.attracting()) >
            chordal_distance(c.geodesic.attracting(), f.geodesic.repelling()))
            c.sign = -1;
        c.position = h2::crossing_position(p0, target, f.geodesic);
        c.point = h2::point_along(p0, target, c.position);
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(),
              [](const CrossingLift& a, const CrossingLift& b) { return a.position < b.position; });
    return out;
}

OrientedGeodesic bending_axis_of(const MarkedGroup& base, const Word& w) {
    const Isometry beta = base.evaluate(w);
    if (classify(beta).kind != IsometryKind::loxodromic)
        throw GeometryError("bending element is not hyperbolic");
    return axis_of(beta);
}

} // namespace

void require_fuchsian(const MarkedGroup& g) {
    for (const Isometry* f : {&g.x(), &g.y()}) {
        const Mat2& m = f->matrix();
        for (cplx e : {m.a, m.b, m.c, m.d})
            if (std::abs(e.imag()) > kRealTolerance * (1.0 + std::abs(e)))
                throw InvalidArgument("base group must be Fuchsian (real matrices)");
    }
}

IntMatrix normalizing_matrix(const Slope& s) {
    const auto [c, d] = bezout(s.p, s.q);
    return {{{s.q, -s.p}, {c, d}}};
}

MarkedGroup quakebend_by_marking(const QuakebendFamily& fam) {
    require_fuchsian(fam.base);
    if (fam.t == 0.0) return fam.base;
    const MarkingChange phi = slope_basis(fam.slope.p, fam.slope.q);
    const Isometry bent_x = fam.base.evaluate(phi.x_image);
    const Isometry rotated_y = rotation_about(axis_of(bent_x), fam.t) * fam.base.evaluate(phi.y_image);
    return MarkedGroup(evaluate_word(bent_x, rotated_y, phi.x_preimage),
                       evaluate_word(bent_x, rotated_y, phi.y_preimage), kCommutatorTolerance,
                       GeneratorPolicy::allow_degenerate);
}

cplx default_base_point() {
    return cplx(0.0, 1.0) + 1e-3 * std::polar(1.0, std::numbers::pi / 4);
}

CrossingEnumerator::CrossingEnumerator(MarkedGroup base, Slope slope, double radius, cplx base_point)
    : base_(std::move(base)), slope_(slope), p0_(base_point), bending_word_(slope_word(slope)),
      axis_(BoundaryPoint::infinity(), BoundaryPoint(0.0)) {
    require_fuchsian(base_);
    if (!(radius > 0) || !std::isfinite(radius)) throw InvalidArgument("search radius must be positive");
    if (!(base_point.imag() > 0)) throw InvalidArgument("base point must lie in the upper half-plane");
    axis_ = bending_axis_of(base_, bending_word_);

    // A lift crossing a generator arc has a translate of the base point within
    // arc length + half the translation length + d(p0, axis) of p0.
    const Generators gens(base_);
    const double ell = complex_length(base_.evaluate(bending_word_)).length;
    const double to_axis = h2::distance_to_geodesic(p0_, axis_);
    effective_radius_ = radius;
    for (Letter c : kLetters) {
        const double arc = h2::distance(p0_, h2::act(gens.of(c), p0_));
        effective_radius_ = std::max(effective_radius_, arc + 0.5 * ell + to_axis + 1e-9);
    }
    // Search the X and Y arcs; the arc from p0 to g^-1 p0 is g^-1 times the arc from g p0 to p0.
    const std::vector<cplx> targets{h2::act(gens.of(1), p0_), h2::act(gens.of(2), p0_)};
    auto found = ball_search(gens, axis_, p0_, targets, effective_radius_);
    auto wider = ball_search(gens, axis_, p0_, targets, effective_radius_ + kStabilizationStep);
    generator_candidates_.resize(4);
    for (std::size_t k = 0; k < 2; ++k) {
        if (!same_lift_sets(found[k], wider[k]))
            throw ConvergenceError("crossing search did not stabilize; increase the search radius",
                                   effective_radius_);
        const Letter g = kLetters[2 * k];
        const Mat2& g_inv = gens.of(static_cast<Letter>(-g));
        for (FoundLift& f : found[k]) {
            Word w(f.word);
            generator_candidates_[2 * k + 1].push_back(
                {Word({static_cast<Letter>(-g)}) * w, g_inv * f.element, h2::transform(g_inv, f.geodesic)});
            generator_candidates_[2 * k].push_back({std::move(w), f.element, f.geodesic});
        }
    }
}

std::vector<CrossingLift> CrossingEnumerator::crossings(const Word& xi) const {
    const Generators gens(base_);
    if (xi.empty()) return {};
    const cplx target = h2::act(gens.word(xi), p0_);
    require_resolvable_arc(p0_, target);
    // A lift separating p0 from xi.p0 crosses an odd number of the segments
    // between consecutive prefix translates, so it is a translate of a generator candidate.
    std::vector<FoundLift> found;
    Word prefix;
    Mat2 pm = Mat2::identity();
    for (Letter c : xi.letters()) {
        for (const Candidate& cand : generator_candidates_[letter_index(c)]) {
            FoundLift f{(prefix * cand.word).letters(), pm * cand.element, h2::transform(pm, cand.geodesic)};
            if (h2::separates(f.geodesic, p0_, target)) add_unique(found, std::move(f));
        }
        prefix = prefix * Word({c});
        pm = pm * gens.of(c);
    }
    return order_crossings(std::move(found), p0_, target);
}

std::vector<CrossingLift> enumerate_crossings(const MarkedGroup& base, const Slope& slope, const Word& xi,
                                              double radius, cplx base_point) {
    require_fuchsian(base);
    const Generators gens(base);
    const OrientedGeodesic axis = bending_axis_of(base, slope_word(slope));
    const cplx target = h2::act(gens.word(xi), base_point);
    require_resolvable_arc(base_point, target);
    auto found = std::move(ball_search(gens, axis, base_point, {target}, radius)[0]);
    auto wider = std::move(ball_search(gens, axis, base_point, {target}, radius + kStabilizationStep)[0]);
    if (!same_lift_sets(found, wider))
        throw ConvergenceError("crossing search did not stabilize; increase the search radius", radius);
    return order_crossings(std::move(found), base_point, target);
}

Isometry bend_along(const MarkedGroup& base, const Word& bending_word, const std::vector<CrossingLift>& crossings,
                    double t, const Word& xi) {
    if (!std::isfinite(t)) throw InvalidArgument("bending angle must be finite");
    if (crossings.empty()) return base.evaluate(xi);
    // Rotation about axis(beta): cos(t/2) I + i sin(t/2) N with N = (2B - tr B) / sqrt(tr^2 B - 4).
    Mat2 n = base.evaluate(bending_word).matrix();
    cplx tr = n.trace();
    if (tr.real() < 0) {
        n *= -1.0;
        tr = -tr;
    }
    n = 2.0 * n;
    n.a -= tr;
    n.d -= tr;
    n *= 1.0 / std::sqrt(tr * tr - 4.0);
    auto rotation = [&](int sign) {
        Mat2 r = cplx(0.0, sign * std::sin(t / 2)) * n;
        r.a += std::cos(t / 2);
        r.d += std::cos(t / 2);
        return r;
    };
    const Mat2 forward = rotation(1);
    const Mat2 backward = rotation(-1);
    Mat2 p = base.evaluate(crossings.front().word).matrix();
    for (std::size_t k = 0; k < crossings.size(); ++k) {
        p = p * (crossings[k].sign > 0 ? forward : backward);
        const Word& next = k + 1 < crossings.size() ? crossings[k + 1].word : xi;
        p = p * base.evaluate(crossings[k].word.inverse() * next).matrix();
    }
    return Isometry::from_matrix(p);
}

Isometry quakebend_by_crossings(const CrossingEnumerator& en, double t, const Word& xi) {
    return bend_along(en.base(), en.bending_word(), en.crossings(xi), t, xi);
}

OrientedGeodesic corridor_geodesic(const CrossingEnumerator& en, const CrossingLift& lift, int r) {
    if (r < 1) throw InvalidArgument("corridor depth r must be at least 1");
    const Generators gens(en.base());
    const Word& w = en.bending_word();
    const auto& letters = w.letters();
    const long long m = static_cast<long long>(letters.size());
    const Mat2 period = gens.word(w);
    const double ell = complex_length(Isometry::from_matrix(period)).length;

    // Lift oriented along the translation of its stabilizer.
    const OrientedGeodesic directed = h2::transform(lift.element, en.bending_axis());
    const Mat2 n = h2::normalizing_map(directed);
    const double s_cross = std::log(std::abs(h2::act(n, lift.point)));

    // Re-anchor the representative so its tile sits next to the crossing.
    Mat2 anchor = n * lift.element;
    const double s_anchor = std::log(std::abs(h2::act(anchor, en.base_point())));
    const long long shift = std::llround((s_cross - s_anchor) / ell);
    const Mat2 period_inv = Isometry::from_matrix(period).inverse().matrix();
    for (long long j = 0; j < std::llabs(shift); ++j) anchor = anchor * (shift > 0 ? period : period_inv);

    // Tile positions along the lift for prefixes of the bi-infinite periodic word.
    const long long reach = r + 2 * m + 3;
    std::vector<double> pos(static_cast<std::size_t>(2 * reach + 1));
    auto at = [&](long long k) -> double& { return pos[static_cast<std::size_t>(k + reach)]; };
    Mat2 fwd = anchor;
    at(0) = std::log(std::abs(h2::act(fwd, en.base_point())));
    for (long long k = 1; k <= reach; ++k) {
        fwd = fwd * gens.of(letters[static_cast<std::size_t>((k - 1) % m)]);
        at(k) = std::log(std::abs(h2::act(fwd, en.base_point())));
    }
    Mat2 back = anchor;
    for (long long k = -1; k >= -reach; --k) {
        const long long idx = ((k % m) + m) % m;
        back = back * gens.of(static_cast<Letter>(-letters[static_cast<std::size_t>(idx)]));
        at(k) = std::log(std::abs(h2::act(back, en.base_point())));
    }
    long long k0 = 0;
    for (long long k = -(reach - r); k <= reach - r; ++k)
        if (std::abs(at(k) - s_cross) < std::abs(at(k0) - s_cross)) k0 = k;

    const cplx offset = cplx(-std::sinh(kCorridorOffset), 1.0) / std::cosh(kCorridorOffset);
    const Mat2 n_inv{n.d, -n.b, -n.c, n.a};
    const cplx a = h2::act(n_inv, std::exp(at(k0 - r)) * offset);
    const cplx b = h2::act(n_inv, std::exp(at(k0 + r)) * offset);
    return h2::oriented_left_of(h2::geodesic_through(a, b), en.base_point());
}

namespace {

struct ApproximantProduct {
    Isometry product;
    double max_prefix_norm{0.0};
};

ApproximantProduct approximant_product(const CrossingEnumerator& en, const std::vector<CrossingLift>& crossings,
                                       double t, const Isometry& base_image, int r) {
    Mat2 p = Mat2::identity();
    double worst = frobenius_norm(p);
    for (const CrossingLift& c : crossings) {
        p = p * rotation_about(corridor_geodesic(en, c, r), t).matrix();
        worst = std::max(worst, frobenius_norm(p));
    }
    const Isometry out = Isometry::from_matrix(p * base_image.matrix());
    worst = std::max(worst, operator_norm(out));
    return {out, worst};
}

} // namespace

TruncationReport truncated_holonomy(const CrossingEnumerator& en, double t, const Word& xi, int r) {
    if (r < 1) throw InvalidArgument("truncation depth r must be at least 1");
    const auto crossings = en.crossings(xi);
    const Isometry base_image = en.base().evaluate(xi);
    TruncationReport rep;
    rep.r = r;
    rep.exact = bend_along(en.base(), en.bending_word(), crossings, t, xi);
    const ApproximantProduct cur = approximant_product(en, crossings, t, base_image, r);
    const ApproximantProduct next = approximant_product(en, crossings, t, base_image, r + 1);
    rep.truncated = cur.product;
    rep.error = frobenius_norm(cur.product.matrix() - rep.exact.matrix());
    rep.gap = frobenius_norm(next.product.matrix() - cur.product.matrix());
    rep.max_prefix_norm = cur.max_prefix_norm;
    return rep;
}

double boundary_function(double l_gamma, double t) {
    const double u = orthogonal_partner_half_length(l_gamma);
    if (t > 0) return std::pow(std::tanh(u), 2);
    const MarkedGroup g = quakebend_by_marking({fuchsian_orthogonal(l_gamma), Slope(0, 1), t});
    if (classify(g.y()).kind != IsometryKind::loxodromic) return 0.0;
    return std::pow(std::tanh(complex_length(g.y()).length / 2), 2);
}

double boundary_function_closed_form(double l_gamma, double t) {
    const double u = orthogonal_partner_half_length(l_gamma);
    const double c = std::cosh(u) * std::cos(t / 2);
    return 1.0 - 1.0 / (c * c);
}

std::vector<C2Row> c2_experiment(double l_gamma, const std::vector<double>& t_grid) {
    const MarkedGroup base = fuchsian_orthogonal(l_gamma);
    const double u = orthogonal_partner_half_length(l_gamma);
    std::vector<C2Row> rows;
    rows.reserve(t_grid.size());
    for (double t : t_grid) {
        const MarkedGroup g = quakebend_by_marking({base, Slope(0, 1), t});
        C2Row row;
        row.t = t;
        row.traces = g.trace_triple();
        row.degenerate = classify(g.y()).kind != IsometryKind::loxodromic;
        row.length = row.degenerate ? 0.0 : complex_length(g.y()).length;
        row.boundary = t <= 0 ? std::pow(std::tanh(row.length / 2), 2) : std::pow(std::tanh(u), 2);
        rows.push_back(row);
    }
    return rows;
}

std::string c2_csv(const std::vector<C2Row>& rows) {
    csv::Table table({"t", "x_re", "x_im", "y_re", "y_im", "z_re", "z_im", "L", "F"});
    for (const C2Row& r : rows)
        table.add_row({r.t, r.traces.x.real(), r.traces.x.imag(), r.traces.y.real(), r.traces.y.imag(),
                       r.traces.z.real(), r.traces.z.imag(), r.length, r.boundary});
    return table.str();
}

std::string truncation_csv(const std::vector<TruncationReport>& reports) {
    csv::Table table({"r", "error", "gap", "max_prefix_norm"});
    for (const TruncationReport& r : reports)
        table.add_row({static_cast<double>(r.r), r.error, r.gap, r.max_prefix_norm});
    return table.str();
}

} // namespace quakebend
