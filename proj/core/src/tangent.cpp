#include "quakebend/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace quakebend::tangent {

double StepSchedule::finest_step() const {
    return initial_step * std::pow(shrink, static_cast<double>(levels));
}

void StepSchedule::validate() const {
    if (!(initial_step > 0.0) || !std::isfinite(initial_step))
        throw InvalidArgument("step schedule: initial step must be positive");
    if (!(shrink > 0.0 && shrink < 1.0))
        throw InvalidArgument("step schedule: shrink factor must lie in (0, 1)");
    if (levels < 3) throw InvalidArgument("step schedule: at least three levels are required");
    if (!(finest_step() > 1e-12))
        throw InvalidArgument("step schedule: finest step falls below the 1e-12 noise floor");
}

namespace {

void require_finite(const Vec& v, const char* where) {
    for (double e : v)
        if (!std::isfinite(e)) throw NumericalError(std::string("non-finite value in ") + where);
}

double norm2(const Vec& v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return std::sqrt(s);
}

struct Extrapolated {
    Vec value;
    Vec raw;
    double dispersion;
};

// samples[k] is an estimate with error c1 h_k + c2 h_k^2 + ..., h_k = h0 rho^k.
// Two Richardson passes; the dispersion is the spread of the finest three
// fully extrapolated entries.
Extrapolated richardson(const std::vector<Vec>& samples, double rho) {
    const std::size_t dim = samples.front().size();
    std::vector<Vec> col = samples;
    for (int pass = 1; pass <= 2; ++pass) {
        const double rp = std::pow(rho, pass);
        std::vector<Vec> next(col.size() - 1, Vec(dim));
        for (std::size_t k = 1; k < col.size(); ++k)
            for (std::size_t i = 0; i < dim; ++i)
                next[k - 1][i] = (col[k][i] - rp * col[k - 1][i]) / (1.0 - rp);
        col = std::move(next);
    }
    Extrapolated out{col.back(), samples.back(), 0.0};
    const std::size_t tail = std::min<std::size_t>(3, col.size());
    for (std::size_t i = 0; i < dim; ++i) {
        double lo = col.back()[i];
        double hi = lo;
        for (std::size_t k = col.size() - tail; k < col.size(); ++k) {
            lo = std::min(lo, col[k][i]);
            hi = std::max(hi, col[k][i]);
        }
        out.dispersion = std::max(out.dispersion, hi - lo);
    }
    return out;
}

OneSidedDerivative forward_quotients(const CurveFn& g, const StepSchedule& s) {
    s.validate();
    const Vec base = g(0.0);
    require_finite(base, "one-sided derivative (base value)");
    std::vector<Vec> samples;
    samples.reserve(static_cast<std::size_t>(s.levels));
    double h = s.initial_step;
    for (int k = 0; k < s.levels; ++k, h *= s.shrink) {
        Vec v = g(h);
        require_finite(v, "one-sided derivative");
        if (v.size() != base.size()) throw InvalidArgument("map changed output dimension");
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = (v[i] - base[i]) / h;
        samples.push_back(std::move(v));
    }
    Extrapolated e = richardson(samples, s.shrink);
    return {std::move(e.raw), std::move(e.value), e.dispersion};
}

} // namespace

OneSidedDerivative one_sided_derivative(const CurveFn& f, double x, double direction,
                                        const StepSchedule& schedule) {
    if (direction == 0.0 || !std::isfinite(direction))
        throw InvalidArgument("direction must be a nonzero real");
    return forward_quotients([&](double t) { return f(x + t * direction); }, schedule);
}

OneSidedDerivative directional_derivative(const MapFn& f, const Vec& x, const Vec& v,
                                          const StepSchedule& schedule) {
    if (x.size() != v.size()) throw InvalidArgument("point and direction differ in dimension");
    if (norm2(v) == 0.0) {
        // tangent maps are positively homogeneous, so T(0) = 0
        return {Vec(f(x).size(), 0.0), Vec(f(x).size(), 0.0), 0.0};
    }
    Vec p(x.size());
    return forward_quotients(
        [&](double t) {
            for (std::size_t i = 0; i < x.size(); ++i) p[i] = x[i] + t * v[i];
            return f(p);
        },
        schedule);
}

SecondDifferenceReport second_one_sided_difference(const ScalarFn& f, double x,
                                                   const StepSchedule& schedule) {
    schedule.validate();
    const CurveFn curve = [&](double t) { return Vec{f(t)}; };
    const double fx = f(x);
    if (!std::isfinite(fx)) throw NumericalError("non-finite value in second difference");

    SecondDifferenceReport rep;
    double sides[2] = {0.0, 0.0};
    double slopes[2] = {0.0, 0.0};
    for (int side = 0; side < 2; ++side) {
        const double dir = side == 0 ? 1.0 : -1.0;
        const OneSidedDerivative t = one_sided_derivative(curve, x, dir, schedule);
        const double slope = t.value[0]; // T(dir)
        std::vector<Vec> samples;
        double h = schedule.initial_step;
        for (int k = 0; k < schedule.levels; ++k, h *= schedule.shrink) {
            const double fh = f(x + dir * h);
            if (!std::isfinite(fh)) throw NumericalError("non-finite value in second difference");
            samples.push_back(Vec{2.0 * (fh - fx - h * slope) / (h * h)});
        }
        const Extrapolated e = richardson(samples, schedule.shrink);
        sides[side] = e.value[0];
        slopes[side] = slope;
        rep.dispersion = std::max({rep.dispersion, e.dispersion, t.dispersion});
    }
    rep.first_right = slopes[0];
    rep.first_left = -slopes[1];
    rep.right = sides[0];
    rep.left = sides[1];
    rep.gap = std::abs(rep.right - rep.left);
    return rep;
}

double homogeneity_check(const TangentMap& tangent, std::span<const Vec> directions,
                         std::span<const double> scales) {
    double worst = 0.0;
    for (const Vec& v : directions) {
        const Vec tv = tangent(v);
        for (double a : scales) {
            if (a < 0.0) throw InvalidArgument("homogeneity scales must be nonnegative");
            Vec av(v);
            for (double& e : av) e *= a;
            const Vec tav = tangent(av);
            Vec diff(tav.size());
            for (std::size_t i = 0; i < tav.size(); ++i) diff[i] = tav[i] - a * tv[i];
            worst = std::max(worst, norm2(diff));
        }
    }
    return worst;
}

double inverse_tangent_check(const MapFn& phi, const MapFn& phi_inverse, const Vec& x,
                             std::span<const Vec> directions, const StepSchedule& schedule) {
    const Vec y = phi(x);
    double worst = 0.0;
    for (const Vec& v : directions) {
        const Vec w = directional_derivative(phi, x, v, schedule).value;
        const Vec back = directional_derivative(phi_inverse, y, w, schedule).value;
        if (back.size() != v.size()) throw InvalidArgument("inverse map has the wrong dimension");
        Vec diff(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) diff[i] = back[i] - v[i];
        worst = std::max(worst, norm2(diff));
    }
    return worst;
}

bool tangent_exists(const MapFn& f, const Vec& x, const Vec& v, const StepSchedule& schedule,
                    double tolerance) {
    const OneSidedDerivative a = directional_derivative(f, x, v, schedule);
    const OneSidedDerivative b = directional_derivative(f, x, v, schedule.halved());
    if (a.dispersion > tolerance) return false;
    Vec diff(a.value.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a.value[i] - b.value[i];
    return norm2(diff) <= tolerance;
}

} // namespace quakebend::tangent
