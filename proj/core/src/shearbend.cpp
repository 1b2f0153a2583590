#include "quakebend/shearbend.hpp"

#include <cmath>
#include <numbers>

#include "quakebend/csv.hpp"

namespace quakebend::shearbend {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

Mat2 edge(cplx s) {
    const cplx e = std::exp(s / 2.0);
    return {e, 0.0, 0.0, 1.0 / e};
}

// d/ds edge(s) = edge(s) * diag(1/2, -1/2)
Mat2 edge_derivative(cplx s) {
    const cplx e = std::exp(s / 2.0);
    return {e / 2.0, 0.0, 0.0, -1.0 / (2.0 * e)};
}

const Mat2 kLeft{1.0, 0.0, 1.0, 1.0};
const Mat2 kRight{1.0, 1.0, 0.0, 1.0};

Mat2 inverse_unimodular(const Mat2& m) { return {m.d, -m.b, -m.c, m.a}; }

// Picks the sign s in {+1, -1} making s * value closest to target.
double matching_sign(cplx value, cplx target) { return std::abs(value - target) <= std::abs(value + target) ? 1.0 : -1.0; }

} // namespace

ComplexShears ComplexShears::symmetric() {
    const double l2 = std::log(2.0);
    return {{cplx(-l2, 0.0), cplx(l2, 0.0), cplx(0.0, 0.0)}};
}

ComplexShears ComplexShears::shifted(int j, long long k) const {
    ComplexShears out = *this;
    out.s.at(static_cast<std::size_t>(j)) += cplx(0.0, kTwoPi * static_cast<double>(k));
    return out;
}

std::string ComplexShears::to_csv_row() const {
    std::string row;
    for (std::size_t i = 0; i < 3; ++i) {
        if (i) row.push_back(',');
        row += csv::format(s[i].real()) + "," + csv::format(s[i].imag());
    }
    return row;
}

std::array<Mat2, 2> holonomy_matrices(const ComplexShears& sigma) {
    const Mat2 e3 = edge(sigma.s[2]);
    return {e3 * kLeft * edge(sigma.s[0]) * kRight, e3 * kRight * edge(sigma.s[1]) * kLeft};
}

double cusp_residual(const ComplexShears& sigma) {
    const auto [x, y] = holonomy_matrices(sigma);
    const Mat2 c = x * y * inverse_unimodular(x) * inverse_unimodular(y);
    return std::abs(c.trace() + 2.0);
}

double cusp_residual_closed_form(const ComplexShears& sigma) {
    return 4.0 * std::norm(std::sinh(sigma.sum() / 2.0));
}

double shear_sum_defect(const ComplexShears& sigma) {
    const cplx s = sigma.sum();
    return std::abs(cplx(s.real(), std::remainder(s.imag(), kTwoPi)));
}

bool is_admissible(const ComplexShears& sigma, double tolerance) {
    return cusp_residual_closed_form(sigma) <= tolerance;
}

MarkedGroup holonomy_from_shears(const ComplexShears& sigma) {
    const double r = cusp_residual(sigma);
    if (!(r <= kAdmissibleTolerance)) throw InadmissibleShears("shears violate the cusp condition", r);
    const auto [x, y] = holonomy_matrices(sigma);
    return MarkedGroup(Isometry::from_matrix(x), Isometry::from_matrix(y), kCommutatorTolerance,
                       GeneratorPolicy::allow_degenerate);
}

std::array<cplx, 3> raw_traces(const ComplexShears& sigma) {
    const auto [x, y] = holonomy_matrices(sigma);
    return {x.trace(), y.trace(), (x * y).trace()};
}

std::array<std::array<cplx, 3>, 2> trace_derivatives(const ComplexShears& sigma) {
    const Mat2 e1 = edge(sigma.s[0]), e2 = edge(sigma.s[1]), e3 = edge(sigma.s[2]);
    const Mat2 d1 = edge_derivative(sigma.s[0]), d2 = edge_derivative(sigma.s[1]),
               d3 = edge_derivative(sigma.s[2]);
    const Mat2 x = e3 * kLeft * e1 * kRight;
    const Mat2 y = e3 * kRight * e2 * kLeft;
    // Partial derivatives in s1, s2, s3.
    const Mat2 dx[3] = {e3 * kLeft * d1 * kRight, Mat2::zero(), d3 * kLeft * e1 * kRight};
    const Mat2 dy[3] = {Mat2::zero(), e3 * kRight * d2 * kLeft, d3 * kRight * e2 * kLeft};
    std::array<std::array<cplx, 3>, 2> out{};
    for (int k = 0; k < 2; ++k) {
        // Along the locus s3 = -s1 - s2.
        const Mat2 gx = dx[k] - dx[2];
        const Mat2 gy = dy[k] - dy[2];
        out[static_cast<std::size_t>(k)] = {gx.trace(), gy.trace(), (gx * y + x * gy).trace()};
    }
    return out;
}

TraceTriple traces_of(const ComplexShears& sigma) {
    const auto [x, y] = holonomy_matrices(sigma);
    const double sx = normalize_trace_sign(x.trace()) == x.trace() ? 1.0 : -1.0;
    const double sy = normalize_trace_sign(y.trace()) == y.trace() ? 1.0 : -1.0;
    return {sx * x.trace(), sy * y.trace(), sx * sy * (x * y).trace()};
}

double trace_error(const ComplexShears& sigma, const TraceTriple& target) {
    const TraceTriple t = traces_of(sigma);
    return std::max({std::abs(t.x - target.x), std::abs(t.y - target.y), std::abs(t.z - target.z)});
}

ComplexShears fit_shears_to_representation(const TraceTriple& target, const ComplexShears& seed,
                                           const FitOptions& options) {
    ComplexShears sigma = ComplexShears::from_pair(seed.s[0], seed.s[1]);
    const auto t0 = raw_traces(sigma);
    const double sx = matching_sign(t0[0], target.x);
    const double sy = matching_sign(t0[1], target.y);
    const std::array<cplx, 3> goal{sx * target.x, sy * target.y, sx * sy * target.z};

    auto residual_of = [&](const ComplexShears& s, std::array<cplx, 3>& r) {
        const auto t = raw_traces(s);
        double worst = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            r[i] = t[i] - goal[i];
            worst = std::max(worst, std::abs(r[i]));
        }
        return worst;
    };

    std::array<cplx, 3> r{};
    double res = residual_of(sigma, r);
    for (int it = 0; it < options.max_iterations && res > 1e-3 * options.tolerance; ++it) {
        if (!std::isfinite(res)) break;
        const auto j = trace_derivatives(sigma);
        // Normal equations (J^H J) delta = -J^H r for the 3 x 2 complex Jacobian.
        cplx a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            a11 += std::conj(j[0][i]) * j[0][i];
            a12 += std::conj(j[0][i]) * j[1][i];
            a22 += std::conj(j[1][i]) * j[1][i];
            b1 -= std::conj(j[0][i]) * r[i];
            b2 -= std::conj(j[1][i]) * r[i];
        }
        const cplx a21 = std::conj(a12);
        const cplx det = a11 * a22 - a12 * a21;
        if (std::abs(det) < 1e-300) break;
        const cplx d1 = (b1 * a22 - a12 * b2) / det;
        const cplx d2 = (a11 * b2 - a21 * b1) / det;
        // Halve the step until the residual does not grow.
        double step = 1.0;
        ComplexShears trial;
        std::array<cplx, 3> rt{};
        double rest = 0;
        for (int k = 0; k < 30; ++k) {
            trial = ComplexShears::from_pair(sigma.s[0] + step * d1, sigma.s[1] + step * d2);
            rest = residual_of(trial, rt);
            if (rest <= res || !std::isfinite(res)) break;
            step /= 2;
        }
        if (!(rest < res)) break;
        sigma = trial;
        r = rt;
        res = rest;
    }
    if (!(res <= options.tolerance))
        throw ConvergenceError("shear fit did not converge", res);
    return sigma;
}

RepresentationTangent RepresentationTangent::operator+(const RepresentationTangent& o) const {
    return {{d[0] + o.d[0], d[1] + o.d[1], d[2] + o.d[2]}};
}

RepresentationTangent RepresentationTangent::operator*(cplx k) const { return {{d[0] * k, d[1] * k, d[2] * k}}; }

double RepresentationTangent::norm() const {
    return std::sqrt(std::norm(d[0]) + std::norm(d[1]) + std::norm(d[2]));
}

std::array<double, 6> RepresentationTangent::real_coordinates() const {
    return {d[0].real(), d[0].imag(), d[1].real(), d[1].imag(), d[2].real(), d[2].imag()};
}

namespace {

// Central difference of the sign-normalized trace triple along a complex shear direction.
RepresentationTangent central_difference(const ComplexShears& sigma, int k, cplx dir, double h) {
    auto at = [&](double step) {
        cplx s1 = sigma.s[0], s2 = sigma.s[1];
        (k == 0 ? s1 : s2) += step * dir;
        const TraceTriple t = traces_of(ComplexShears::from_pair(s1, s2));
        return std::array<cplx, 3>{t.x, t.y, t.z};
    };
    const auto plus = at(h);
    const auto minus = at(-h);
    RepresentationTangent out;
    for (std::size_t i = 0; i < 3; ++i) out.d[i] = (plus[i] - minus[i]) / (2.0 * h);
    return out;
}

RepresentationTangent richardson_difference(const ComplexShears& sigma, int k, cplx dir) {
    const RepresentationTangent coarse = central_difference(sigma, k, dir, kJacobianStep);
    const RepresentationTangent fine = central_difference(sigma, k, dir, kJacobianStep / 2);
    return fine * cplx(4.0 / 3.0) + coarse * cplx(-1.0 / 3.0);
}

using Mat4 = std::array<std::array<double, 4>, 4>;

double det4(Mat4 m) {
    double det = 1.0;
    for (std::size_t c = 0; c < 4; ++c) {
        std::size_t pivot = c;
        for (std::size_t r = c + 1; r < 4; ++r)
            if (std::abs(m[r][c]) > std::abs(m[pivot][c])) pivot = r;
        if (m[pivot][c] == 0.0) return 0.0;
        if (pivot != c) {
            std::swap(m[pivot], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < 4; ++r) {
            const double f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

std::array<double, 4> solve4(Mat4 m, std::array<double, 4> b) {
    for (std::size_t c = 0; c < 4; ++c) {
        std::size_t pivot = c;
        for (std::size_t r = c + 1; r < 4; ++r)
            if (std::abs(m[r][c]) > std::abs(m[pivot][c])) pivot = r;
        std::swap(m[pivot], m[c]);
        std::swap(b[pivot], b[c]);
        for (std::size_t r = c + 1; r < 4; ++r) {
            const double f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
            b[r] -= f * b[c];
        }
    }
    std::array<double, 4> x{};
    for (std::size_t c = 4; c-- > 0;) {
        double acc = b[c];
        for (std::size_t k = c + 1; k < 4; ++k) acc -= m[c][k] * x[k];
        x[c] = acc / m[c][c];
    }
    return x;
}

std::array<std::array<double, 6>, 4> basis_vectors(const ChartJacobian& j) {
    return {j.shear[0].real_coordinates(), j.shear[1].real_coordinates(), j.bending[0].real_coordinates(),
            j.bending[1].real_coordinates()};
}

Mat4 gram(const std::array<std::array<double, 6>, 4>& v) {
    Mat4 g{};
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b)
            for (std::size_t k = 0; k < 6; ++k) g[a][b] += v[a][k] * v[b][k];
    return g;
}

} // namespace

ChartJacobian chart_jacobian(const ComplexShears& sigma) {
    const double r = cusp_residual(sigma);
    if (!(r <= kAdmissibleTolerance)) throw InadmissibleShears("shears violate the cusp condition", r);
    ChartJacobian j;
    for (int k = 0; k < 2; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        j.shear[idx] = richardson_difference(sigma, k, cplx(1.0, 0.0));
        j.bending[idx] = richardson_difference(sigma, k, cplx(0.0, 1.0));
        const RepresentationTangent diff = j.bending[idx] + j.shear[idx] * cplx(0.0, -1.0);
        j.cauchy_riemann_residual = std::max(j.cauchy_riemann_residual, diff.norm());
    }
    j.gram_determinant = det4(gram(basis_vectors(j)));
    return j;
}

Projection project_and_invert(const RepresentationTangent& v, const ComplexShears& sigma0) {
    const ChartJacobian j = chart_jacobian(sigma0);
    if (!(j.gram_determinant > 1e-12)) throw GeometryError("shear directions are degenerate at this point");
    const auto basis = basis_vectors(j);
    const Mat4 g = gram(basis);
    const auto rv = v.real_coordinates();
    std::array<double, 4> rhs{};
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t k = 0; k < 6; ++k) rhs[a] += basis[a][k] * rv[k];
    const auto c = solve4(g, rhs);

    Projection out;
    out.p = j.shear[0] * c[0] + j.shear[1] * c[1];
    // The bending directions are i times the shear directions.
    out.q = j.shear[0] * c[2] + j.shear[1] * c[3];
    out.preimage = {c[0], c[1]};
    const RepresentationTangent fit = out.p + j.bending[0] * c[2] + j.bending[1] * c[3];
    out.residual = (v + fit * cplx(-1.0)).norm();
    return out;
}

tangent::Vec square_chart(const tangent::Vec& shears) {
    if (shears.size() != 4) throw InvalidArgument("square chart takes four real shear coordinates");
    const TraceTriple t =
        traces_of(ComplexShears::from_pair(cplx(shears[0], shears[1]), cplx(shears[2], shears[3])));
    return {t.x.real(), t.x.imag(), t.z.real(), t.z.imag()};
}

tangent::Vec square_chart_inverse(const tangent::Vec& xz, const ComplexShears& sigma0) {
    if (xz.size() != 4) throw InvalidArgument("square chart inverse takes four real trace coordinates");
    const cplx x(xz[0], xz[1]);
    const cplx z(xz[2], xz[3]);
    // y^2 - xz y + (x^2 + z^2) = 0; keep the root nearest the base value.
    const cplx disc = std::sqrt(x * x * z * z - 4.0 * (x * x + z * z));
    const cplx r1 = (x * z + disc) / 2.0;
    const cplx r2 = (x * z - disc) / 2.0;
    const cplx y0 = traces_of(sigma0).y;
    const cplx y = std::abs(r1 - y0) <= std::abs(r2 - y0) ? r1 : r2;
    const ComplexShears fit = fit_shears_to_representation({x, y, z}, sigma0);
    return {fit.s[0].real(), fit.s[0].imag(), fit.s[1].real(), fit.s[1].imag()};
}

} // namespace quakebend::shearbend
