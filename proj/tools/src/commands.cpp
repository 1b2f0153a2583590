#include "quakebend_tools/commands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "quakebend/bend.hpp"
#include "quakebend/csv.hpp"
#include "quakebend/shearbend.hpp"
#include "quakebend/tangent.hpp"
#include "quakebend/traintrack.hpp"

namespace quakebend::tools {

namespace {

using csv::format;

Slope parse_slope(const std::string& text) {
    try {
        return Slope::parse(text);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("bad --slope: ") + e.what());
    }
}

std::vector<double> parse_numbers(const std::string& text, const char* flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ConfigError(std::string("bad number in ") + flag + ": '" + item + "'");
        }
        if (used != item.size() || !std::isfinite(v))
            throw ConfigError(std::string("bad number in ") + flag + ": '" + item + "'");
        out.push_back(v);
    }
    return out;
}

void require_positive_length(double l) {
    if (!(l > 0) || !std::isfinite(l)) throw ConfigError("--l-gamma must be positive and finite");
}

shearbend::ComplexShears parse_shears(const std::string& text) {
    if (text.empty()) return shearbend::ComplexShears::symmetric();
    const auto v = parse_numbers(text, "--shears");
    if (v.size() == 4) return shearbend::ComplexShears::from_pair({v[0], v[1]}, {v[2], v[3]});
    if (v.size() == 6) return {{cplx(v[0], v[1]), cplx(v[2], v[3]), cplx(v[4], v[5])}};
    throw ConfigError("--shears takes 4 or 6 comma-separated numbers");
}

std::string traces_line(const TraceTriple& t) {
    return "x=" + format(t.x.real()) + (t.x.imag() < 0 ? "" : "+") + format(t.x.imag()) + "i y=" +
           format(t.y.real()) + (t.y.imag() < 0 ? "" : "+") + format(t.y.imag()) + "i z=" + format(t.z.real()) +
           (t.z.imag() < 0 ? "" : "+") + format(t.z.imag()) + "i";
}

cplx random_in_disk(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = radius * std::sqrt(u(rng));
    const double theta = 2 * std::numbers::pi * u(rng);
    return std::polar(r, theta);
}

Mat2 random_matrix(std::mt19937_64& rng, double radius) {
    return {random_in_disk(rng, radius), random_in_disk(rng, radius), random_in_disk(rng, radius),
            random_in_disk(rng, radius)};
}

nlohmann::json matrix_json(const Mat2& m) {
    nlohmann::json j = nlohmann::json::array();
    for (cplx e : {m.a, m.b, m.c, m.d}) j.push_back({e.real(), e.imag()});
    return j;
}

} // namespace

std::vector<double> t_grid(const RunConfig& cfg) {
    if (!std::isfinite(cfg.t_min) || !std::isfinite(cfg.t_max) || !(cfg.t_min < cfg.t_max))
        throw ConfigError("--t-min must be below --t-max");
    if (cfg.t_count < 3 || cfg.t_count % 2 == 0) throw ConfigError("--t-count must be odd and at least 3");
    std::vector<double> grid(static_cast<std::size_t>(cfg.t_count));
    const double step = (cfg.t_max - cfg.t_min) / (cfg.t_count - 1);
    bool has_zero = false;
    const double snap = 1e-9 * std::max(std::abs(cfg.t_min), std::abs(cfg.t_max));
    for (int i = 0; i < cfg.t_count; ++i) {
        double t = cfg.t_min + i * step;
        if (std::abs(t) <= snap) {
            t = 0.0;
            has_zero = true;
        }
        grid[static_cast<std::size_t>(i)] = t;
    }
    if (!has_zero) throw ConfigError("the t grid must contain t = 0");
    return grid;
}

CommandResult cmd_c2(const RunConfig& cfg) {
    require_positive_length(cfg.l_gamma);
    const auto grid = t_grid(cfg);
    const auto rows = c2_experiment(cfg.l_gamma, grid);
    CommandResult res;
    res.body = c2_csv(rows);

    double worst_markov = 0;
    for (const C2Row& r : rows) {
        worst_markov = std::max(worst_markov, r.traces.markov_residual());
        if (r.degenerate) res.summary.push_back("warning: bent Y is not hyperbolic at t=" + format(r.t));
    }
    const double l = cfg.l_gamma;
    const auto sd = tangent::second_one_sided_difference([l](double t) { return boundary_function(l, t); }, 0.0);
    res.summary.push_back("F'(0-)=" + format(sd.first_left) + " F'(0+)=" + format(sd.first_right) +
                          " F''(0-)=" + format(sd.left) + " F''(0+)=" + format(sd.right) + " gap=" + format(sd.gap));
    res.summary.push_back("max_markov_residual=" + format(worst_markov));
    const bool c1 = std::abs(sd.first_left) <= 1e-3 && std::abs(sd.first_right) <= 1e-3;
    const bool not_c2 = sd.gap >= 0.1;
    if (worst_markov > 1e-8) {
        res.exit_code = exit_invariant;
        res.summary.push_back("FAIL: Markov residual above 1e-8");
    } else if (!c1 || !not_c2) {
        res.exit_code = exit_invariant;
        res.summary.push_back(std::string("FAIL: ") + (!c1 ? "one-sided first derivatives differ from 0"
                                                           : "second-derivative gap below 0.1"));
    } else {
        res.summary.push_back("PASS: C1 at t=0 with a second-derivative jump");
    }
    return res;
}

CommandResult cmd_converge(const RunConfig& cfg) {
    require_positive_length(cfg.l_gamma);
    if (cfg.r_min < 1 || cfg.r_max < cfg.r_min) throw ConfigError("need 1 <= --r-min <= --r-max");
    if (!std::isfinite(cfg.t)) throw ConfigError("--t must be finite");
    const Slope slope = parse_slope(cfg.slope);
    Word xi;
    try {
        xi = Word::parse(cfg.word);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("bad --word: ") + e.what());
    }
    const CrossingEnumerator en(fuchsian_orthogonal(cfg.l_gamma), slope);
    const std::size_t crossings = en.crossings(xi).size();

    std::vector<TruncationReport> reports;
    for (int r = cfg.r_min; r <= cfg.r_max; ++r) reports.push_back(truncated_holonomy(en, cfg.t, xi, r));

    CommandResult res;
    res.body = truncation_csv(reports);
    auto at = [&](int r) -> const TruncationReport& { return reports[static_cast<std::size_t>(r - cfg.r_min)]; };
    double worst_ratio = 0;
    bool decay_ok = true;
    // errors at rounding level carry no decay information
    const double floor = 1e-12 * std::max(1.0, frobenius_norm(reports.front().exact.matrix()));
    for (int r = std::max(3, cfg.r_min); r <= std::min(10, cfg.r_max - 1); ++r) {
        const double e0 = at(r).error;
        const double e1 = at(r + 1).error;
        if (e0 <= floor) {
            decay_ok = decay_ok && e1 <= floor;
            continue;
        }
        worst_ratio = std::max(worst_ratio, e1 / e0);
        decay_ok = decay_ok && e1 / e0 <= 0.9;
    }
    const double reference = at(std::clamp(3, cfg.r_min, cfg.r_max)).max_prefix_norm;
    double worst_norm = 0;
    for (const auto& rep : reports) worst_norm = std::max(worst_norm, rep.max_prefix_norm);
    const bool bounded = worst_norm <= 10 * reference;

    res.summary.push_back("crossings=" + std::to_string(crossings) + " max_ratio=" + format(worst_ratio) +
                          " error(r_max)=" + format(reports.back().error) +
                          " max_prefix_norm=" + format(worst_norm));
    if (!decay_ok || !bounded) {
        res.exit_code = exit_invariant;
        res.summary.push_back(std::string("FAIL: ") + (!decay_ok ? "decay ratio above 0.9" : "prefix norms grew"));
    } else {
        res.summary.push_back("PASS: exponential decay with bounded partial products");
    }
    return res;
}

CommandResult cmd_fuzz(const RunConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<int> size_dist(1, 8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    CommandResult res;
    nlohmann::json report;
    report["seed"] = cfg.seed;

    // Perturbation bound instances; the first has zero perturbation.
    constexpr int kInstances = 1000;
    int violations = 0;
    double tightest_slack = INFINITY;
    nlohmann::json tightest;
    nlohmann::json counterexample;
    for (int i = 0; i < kInstances; ++i) {
        const int n = size_dist(rng);
        std::vector<Mat2> a, e;
        const double scale = i == 0 ? 0.0 : unit(rng);
        for (int k = 0; k < n; ++k) {
            a.push_back(random_matrix(rng, 1.0));
            e.push_back(scale * random_matrix(rng, 1.0));
        }
        PerturbationGap g = product_perturbation_gap(a, e);
        const bool zero_case = i == 0;
        if (zero_case && (g.lhs != 0.0 || g.rhs != 0.0)) ++violations;
        const double slack = g.rhs - g.lhs;
        auto instance = [&] {
            nlohmann::json j;
            j["index"] = i;
            j["n"] = n;
            j["lhs"] = g.lhs;
            j["rhs"] = g.rhs;
            j["A"] = nlohmann::json::array();
            j["eps"] = nlohmann::json::array();
            for (int k = 0; k < n; ++k) {
                j["A"].push_back(matrix_json(a[static_cast<std::size_t>(k)]));
                j["eps"].push_back(matrix_json(e[static_cast<std::size_t>(k)]));
            }
            return j;
        };
        if (!zero_case && slack < tightest_slack) {
            tightest_slack = slack;
            tightest = instance();
        }
        if (g.lhs > g.rhs && counterexample.is_null()) {
            ++violations;
            counterexample = instance();
        }
    }
    if (cfg.inject_failure) {
        // Self-test of the failure path: the tightest instance with its bound cut below lhs.
        nlohmann::json bad = tightest;
        bad["rhs"] = bad["lhs"].get<double>() / 2;
        bad["injected"] = true;
        ++violations;
        if (counterexample.is_null()) counterexample = bad;
    }
    report["perturbation_bound"] = {{"instances", kInstances}, {"violations", violations},
                                    {"tightest_slack", tightest_slack}, {"tightest", tightest}};

    // Cusp condition and Markov identity on random admissible shears.
    double worst_cusp = 0, worst_shear_markov = 0;
    std::uniform_real_distribution<double> re(-1.5, 1.5), im(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const auto s = shearbend::ComplexShears::from_pair({re(rng), im(rng)}, {re(rng), im(rng)});
        worst_cusp = std::max(worst_cusp, shearbend::cusp_residual(s));
        worst_shear_markov = std::max(worst_shear_markov, shearbend::traces_of(s).markov_residual());
    }
    // Bent groups for random slopes, lengths and angles.
    const Slope slopes[] = {{0, 1}, {1, 0}, {1, 1}, {1, 2}, {2, 3}, {-1, 2}, {3, 5}};
    std::uniform_int_distribution<std::size_t> slope_dist(0, std::size(slopes) - 1);
    std::uniform_real_distribution<double> t_dist(-1.5, 1.5), l_dist(0.5, 3.0);
    double worst_markov = 0, worst_commutator = 0;
    for (int i = 0; i < 200; ++i) {
        const Slope s = slopes[slope_dist(rng)];
        const double l = l_dist(rng);
        const double t = t_dist(rng);
        const MarkedGroup g = quakebend_by_marking({fuchsian_orthogonal(l), s, t});
        worst_markov = std::max(worst_markov, g.trace_triple().markov_residual());
        worst_commutator = std::max(worst_commutator, std::abs(g.commutator_trace() + 2.0));
    }
    report["shears"] = {{"instances", 200}, {"max_cusp_residual", worst_cusp},
                        {"max_markov_residual", worst_shear_markov}};
    report["quakebend"] = {{"instances", 200}, {"max_markov_residual", worst_markov},
                           {"max_commutator_residual", worst_commutator}};

    const bool invariants_ok =
        worst_cusp <= 1e-9 && worst_shear_markov <= 1e-8 && worst_markov <= 1e-8 && worst_commutator <= 1e-9;
    const bool pass = violations == 0 && invariants_ok;
    report["verdict"] = pass ? "pass" : "fail";
    if (!counterexample.is_null()) report["counterexample"] = counterexample;
    res.body = report.dump(2) + "\n";

    res.summary.push_back("perturbation_bound instances=" + std::to_string(kInstances) +
                          " violations=" + std::to_string(violations) + " tightest_index=" +
                          std::to_string(tightest["index"].get<int>()) + " tightest_slack=" + format(tightest_slack));
    res.summary.push_back("shears max_cusp_residual=" + format(worst_cusp) +
                          " max_markov_residual=" + format(worst_shear_markov));
    res.summary.push_back("quakebend max_markov_residual=" + format(worst_markov) +
                          " max_commutator_residual=" + format(worst_commutator));
    if (!counterexample.is_null()) res.summary.push_back("counterexample=" + counterexample.dump());
    res.summary.push_back(pass ? "PASS" : "FAIL");
    res.exit_code = pass ? exit_ok : exit_invariant;
    return res;
}

CommandResult cmd_forward(const RunConfig& cfg) {
    const auto sigma = parse_shears(cfg.shears);
    CommandResult res;
    const double residual = shearbend::cusp_residual(sigma);
    if (residual > shearbend::kAdmissibleTolerance) {
        res.exit_code = exit_invariant;
        res.summary.push_back("FAIL: shears violate the cusp condition, residual=" + format(residual));
        return res;
    }
    const TraceTriple t = shearbend::traces_of(sigma);
    csv::Table table({"x_re", "x_im", "y_re", "y_im", "z_re", "z_im", "cusp_residual"});
    table.add_row({t.x.real(), t.x.imag(), t.y.real(), t.y.imag(), t.z.real(), t.z.imag(), residual});
    res.body = table.str();
    res.summary.push_back(traces_line(t) + " markov_residual=" + format(t.markov_residual()));
    return res;
}

CommandResult cmd_fit(const RunConfig& cfg) {
    TraceTriple target{};
    shearbend::ComplexShears seed = shearbend::ComplexShears::symmetric();
    if (!cfg.traces.empty()) {
        const auto v = parse_numbers(cfg.traces, "--traces");
        if (v.size() != 6) throw ConfigError("--traces takes 6 comma-separated numbers");
        target = {{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}};
    } else {
        require_positive_length(cfg.l_gamma);
        const MarkedGroup base = fuchsian_orthogonal(cfg.l_gamma);
        target = quakebend_by_marking({base, parse_slope(cfg.slope), cfg.t}).trace_triple();
        seed = shearbend::fit_shears_to_representation(base.trace_triple(), seed);
    }
    CommandResult res;
    if (target.markov_residual() > 1e-8) {
        res.exit_code = exit_invariant;
        res.summary.push_back("FAIL: target traces violate the Markov identity");
        return res;
    }
    const auto fit = shearbend::fit_shears_to_representation(target, seed);
    const double err = shearbend::trace_error(fit, target);
    csv::Table table({"re1", "im1", "re2", "im2", "re3", "im3", "trace_error"});
    table.add_row({fit.s[0].real(), fit.s[0].imag(), fit.s[1].real(), fit.s[1].imag(), fit.s[2].real(),
                   fit.s[2].imag(), err});
    res.body = table.str();
    double bending = 0;
    for (cplx s : fit.s) bending = std::max(bending, std::abs(s.imag()));
    res.summary.push_back("trace_error=" + format(err) + " max_bending=" + format(bending));
    return res;
}

CommandResult cmd_jacobian(const RunConfig& cfg) {
    const auto sigma = parse_shears(cfg.shears);
    const auto j = shearbend::chart_jacobian(sigma);
    csv::Table table({"direction", "dx_re", "dx_im", "dy_re", "dy_im", "dz_re", "dz_im"});
    int idx = 0;
    for (const auto* group : {&j.shear, &j.bending})
        for (const auto& v : *group) {
            const auto c = v.real_coordinates();
            table.add_row({static_cast<double>(idx++), c[0], c[1], c[2], c[3], c[4], c[5]});
        }
    CommandResult res;
    res.body = table.str();
    res.summary.push_back("directions: 0,1 = real shears (P); 2,3 = bending (iP)");
    res.summary.push_back("cauchy_riemann_residual=" + format(j.cauchy_riemann_residual) +
                          " gram_determinant=" + format(j.gram_determinant));
    if (j.cauchy_riemann_residual > 1e-6 || !(j.gram_determinant > 1e-6)) {
        res.exit_code = exit_invariant;
        res.summary.push_back("FAIL: chart is not holomorphic or P + iP is degenerate");
    }
    return res;
}

CommandResult cmd_track(const RunConfig& cfg) {
    const Slope s = parse_slope(cfg.slope);
    const auto carried = traintrack::carry_slope(s.p, s.q);
    const auto track = traintrack::TrainTrack::standard(carried.track);
    const auto weights = carried.dirac.weights();
    const double residual = traintrack::validate_switch_relations(track, weights);
    CommandResult res;
    res.body = traintrack::to_table(track, weights);
    std::string word;
    for (int b : carried.word.branches) word += track.branch_names()[static_cast<std::size_t>(b)][0];
    res.summary.push_back(std::string("track=") +
                          (carried.track == traintrack::TrackId::nonnegative ? "nonnegative" : "nonpositive") +
                          " switch_residual=" + format(residual) + " carried_word=" + word +
                          " group_word=" + traintrack::word_of(carried.track, carried.word).to_string());
    if (residual > 1e-10) res.exit_code = exit_invariant;
    return res;
}

CommandResult cmd_group(const RunConfig& cfg) {
    require_positive_length(cfg.l_gamma);
    if (!std::isfinite(cfg.t)) throw ConfigError("--t must be finite");
    const MarkedGroup g = quakebend_by_marking({fuchsian_orthogonal(cfg.l_gamma), parse_slope(cfg.slope), cfg.t});
    csv::Table table({"generator", "a_re", "a_im", "b_re", "b_im", "c_re", "c_im", "d_re", "d_im"});
    int idx = 0;
    for (const Isometry* f : {&g.x(), &g.y()}) {
        const Mat2& m = f->matrix();
        table.add_row({static_cast<double>(idx++), m.a.real(), m.a.imag(), m.b.real(), m.b.imag(), m.c.real(),
                       m.c.imag(), m.d.real(), m.d.imag()});
    }
    CommandResult res;
    res.body = table.str();
    const TraceTriple t = g.trace_triple();
    const double comm = std::abs(g.commutator_trace() + 2.0);
    res.summary.push_back(traces_line(t) + " markov_residual=" + format(t.markov_residual()) +
                          " commutator_residual=" + format(comm));
    if (t.markov_residual() > 1e-8 || comm > 1e-9) res.exit_code = exit_invariant;
    return res;
}

CommandResult run(const RunConfig& cfg) {
    try {
        if (cfg.command == "c2") return cmd_c2(cfg);
        if (cfg.command == "converge") return cmd_converge(cfg);
        if (cfg.command == "fuzz") return cmd_fuzz(cfg);
        if (cfg.command == "forward") return cmd_forward(cfg);
        if (cfg.command == "fit") return cmd_fit(cfg);
        if (cfg.command == "jacobian") return cmd_jacobian(cfg);
        if (cfg.command == "track") return cmd_track(cfg);
        if (cfg.command == "group") return cmd_group(cfg);
        throw ConfigError("unknown command '" + cfg.command + "'");
    } catch (const ConfigError& e) {
        return {exit_config, {}, {std::string("config error: ") + e.what()}};
    } catch (const InvalidArgument& e) {
        return {exit_config, {}, {std::string("config error: ") + e.what()}};
    } catch (const NumericalError& e) {
        return {exit_config, {}, {std::string("unsupported input: ") + e.what()}};
    } catch (const ConvergenceError& e) {
        return {exit_nonconvergence, {}, {std::string("non-convergence: ") + e.what() + " (residual " + format(e.residual()) + ")"}};
    } catch (const Error& e) {
        return {exit_invariant, {}, {std::string("invariant violation: ") + e.what()}};
    }
}

} // namespace quakebend::tools
