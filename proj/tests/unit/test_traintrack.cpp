#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <utility>

#include "quakebend/traintrack.hpp"

using namespace quakebend;
using namespace quakebend::traintrack;

namespace {

constexpr double two_pi = 2 * std::numbers::pi;

const std::vector<std::pair<long long, long long>> corpus{{0, 1}, {1, 1}, {1, 2}, {2, 3}};

/// Geometric intersection number of simple closed curves of slopes p/q and r/s on the torus.
long long intersection(long long p, long long q, long long r, long long s) { return std::llabs(p * s - q * r); }

/// All cyclic subwords of a given length, counted by brute-force rotation.
std::map<std::vector<int>, long long> brute_subwords(const CyclicEdgeWord& w, std::size_t len) {
    std::map<std::vector<int>, long long> out;
    const std::size_t n = w.period();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> s;
        for (std::size_t k = 0; k < len; ++k) s.push_back(w.branches[(i + k) % n]);
        ++out[s];
    }
    return out;
}

} // namespace

TEST_CASE("standard tracks are well formed") {
    for (TrackId id : {TrackId::nonnegative, TrackId::nonpositive}) {
        const TrainTrack t = TrainTrack::standard(id);
        CHECK(t.branch_count() == 3);
        CHECK(t.switches().size() == 2);
        for (const Switch& s : t.switches()) {
            CHECK_FALSE(s.side_a.empty());
            CHECK_FALSE(s.side_b.empty());
        }
        CHECK(t.traversable(0, 2));
        CHECK(t.traversable(1, 2));
        CHECK(t.traversable(2, 0));
        CHECK(t.traversable(2, 1));
        CHECK_FALSE(t.traversable(0, 1));
        CHECK_FALSE(t.traversable(2, 2));
        CHECK_FALSE(t.traversable(0, 0));
    }
    CHECK(TrainTrack::standard(TrackId::nonpositive).branch_names()[1] != TrainTrack::standard(TrackId::nonnegative).branch_names()[1]);
}

TEST_CASE("malformed tracks are rejected") {
    // branch 1 has no head
    CHECK_THROWS_AS(TrainTrack({"a", "b"}, {Switch{{{0, true}}, {{0, false}, {1, false}}}}), InvalidArgument);
    // switch with an empty side
    CHECK_THROWS_AS(TrainTrack({"a"}, {Switch{{{0, true}, {0, false}}, {}}}), InvalidArgument);
    // end attached twice
    CHECK_THROWS_AS(TrainTrack({"a"}, {Switch{{{0, true}}, {{0, false}}}, Switch{{{0, true}}, {{0, false}}}}),
                    InvalidArgument);
}

TEST_CASE("switch relations") {
    const TrainTrack t = TrainTrack::standard(TrackId::nonnegative);
    CHECK(validate_switch_relations(t, WeightSystem{WeightKind::real, {0.0, 0.0, 0.0}}) == 0.0);
    CHECK(validate_switch_relations(t, carry_slope(0, 1).dirac.weights()) == 0.0);
    CHECK(validate_switch_relations(t, WeightSystem{WeightKind::real, {1.0, 2.0, 3.5}}) == doctest::Approx(0.5));
    CHECK(validate_switch_relations(t, WeightSystem{WeightKind::angle, {4.0, 3.0, 7.0 - two_pi}}) < 1e-12);
    CHECK(validate_switch_relations(t, WeightSystem{WeightKind::angle, {4.0, 3.0, 7.0 - two_pi + 0.25}}) ==
          doctest::Approx(0.25));
    CHECK(validate_switch_relations(t, WeightSystem{WeightKind::complex, {cplx(1, 4), cplx(2, 3), cplx(3, 7 - 3 * two_pi)}}) <
          1e-12);
    CHECK(validate_switch_relations(t, WeightSystem{WeightKind::real, {-1.0, 2.0, 1.0}}) == 0.0);
    CHECK_THROWS_AS(validate_switch_relations(t, WeightSystem{WeightKind::nonnegative, {-1.0, 2.0, 1.0}}),
                    InvalidArgument);
    CHECK_THROWS_AS(validate_switch_relations(t, WeightSystem{WeightKind::real, {1.0, 2.0}}), InvalidArgument);
}

TEST_CASE("carried slopes reproduce intersection numbers and the slope word") {
    for (long long q = 0; q <= 12; ++q)
        for (long long p = -12; p <= 12; ++p) {
            if (std::gcd(p, q) != 1 || (q == 0 && p != 1)) continue;
            const CarriedSlope c = carry_slope(p, q);
            const TrainTrack t = TrainTrack::standard(c.track);
            CHECK(c.track == (p < 0 ? TrackId::nonpositive : TrackId::nonnegative));
            CHECK(is_carried(t, c.word));
            CHECK(c.word.is_primitive());
            CHECK(validate_switch_relations(t, c.dirac.weights()) <= 1e-10);
            // crossings of the marking curves counted on the carried word
            long long nx = 0, ny = 0, nz = 0;
            for (int b : c.word.branches) (b == 0 ? nx : b == 1 ? ny : nz) += 1;
            CHECK(ny == intersection(p, q, 0, 1));
            CHECK(nx == intersection(p, q, 1, 0));
            CHECK(c.dirac.multiplicities == std::vector<long long>{nx, ny, nz});
            CHECK(word_of(c.track, c.word) == slope_word(p, q));
        }
    CHECK(carry_slope(0, 1).dirac.multiplicities == std::vector<long long>{1, 0, 1});
    CHECK(carry_slope(1, 1).dirac.multiplicities == std::vector<long long>{1, 1, 2});
    CHECK(carry_slope(2, 3).dirac.multiplicities == std::vector<long long>{3, 2, 5});
    CHECK_THROWS_AS(carry_slope(2, 4), InvalidArgument);
    CHECK_THROWS_AS(carry_slope(0, 0), InvalidArgument);
}

TEST_CASE("sums and scalings of carried weights satisfy the switch relations") {
    const TrainTrack t = TrainTrack::standard(TrackId::nonnegative);
    WeightSystem acc{WeightKind::nonnegative, {0.0, 0.0, 0.0}};
    for (auto [p, q] : corpus) {
        const WeightSystem w = carry_slope(p, q).dirac.weights().scaled(0.37 * static_cast<double>(p + q));
        acc = acc + w;
        CHECK(validate_switch_relations(t, w) <= 1e-10);
        CHECK(validate_switch_relations(t, acc) <= 1e-10);
    }
}

TEST_CASE("edge path masses") {
    const CarriedSlope zero = carry_slope(0, 1);
    const TrainTrack t = TrainTrack::standard(zero.track);
    CHECK(edge_path_mass(t, zero.dirac, zero.word, EdgePath{zero.word.branches}) == 1.0);
    CHECK(edge_path_mass(t, DiracWeight{0.0, {1, 0, 1}}, zero.word, EdgePath{{2, 0, 2}}) == 0.0);
    CHECK_THROWS_AS(edge_path_mass(t, zero.dirac, zero.word, EdgePath{{0, 1}}), InvalidArgument);

    const CarriedSlope c = carry_slope(2, 3);
    const double mass = 0.8;
    const DiracWeight d{mass, c.dirac.multiplicities};
    double total = 0.0;
    for (const auto& [s, n] : brute_subwords(c.word, 3)) {
        const double m = edge_path_mass(t, d, c.word, EdgePath{s});
        CHECK(m == doctest::Approx(mass * static_cast<double>(n)));
        total += m;
    }
    CHECK(total == doctest::Approx(mass * static_cast<double>(c.word.period())));
}

TEST_CASE("gamma_r subwords") {
    const CarriedSlope zero = carry_slope(0, 1);
    CHECK(zero.word.period() == 2);
    for (int r = 0; r <= 6; ++r) CHECK(gamma_r_subwords(zero.word, r).size() == 2);

    const CarriedSlope c = carry_slope(2, 3);
    const auto singles = gamma_r_subwords(c.word, 0);
    std::set<int> distinct(c.word.branches.begin(), c.word.branches.end());
    CHECK(singles.size() == distinct.size());

    for (auto [p, q] : corpus) {
        const CarriedSlope cs = carry_slope(p, q);
        std::size_t prev = 0;
        for (int r = 0; r <= 12; ++r) {
            const auto g = gamma_r_subwords(cs.word, r);
            const auto brute = brute_subwords(cs.word, static_cast<std::size_t>(2 * r + 1));
            CHECK(g.size() == brute.size());
            CHECK(g.size() >= prev);
            CHECK(g.size() <= cs.word.period());
            prev = g.size();
            long long sum = 0;
            for (const SubwordCount& s : g) {
                CHECK(brute.at(s.path.branches) == s.multiplicity);
                sum += s.multiplicity;
            }
            CHECK(sum == static_cast<long long>(cs.word.period()));
            for (std::size_t i = 0; i + 1 < g.size(); ++i) CHECK_FALSE(precedes(g[i + 1].path, g[i].path));
        }
    }
}

TEST_CASE("chop") {
    CHECK(chop(EdgePath{{2, 0, 2}}) == EdgePath{{0}});
    CHECK(chop(chop(EdgePath{{0, 2, 1, 2, 0}})) == EdgePath{{1}});
    CHECK_THROWS_AS(chop(EdgePath{{0}}), InvalidArgument);
    CHECK_THROWS_AS(chop(EdgePath{{0, 2}}), InvalidArgument);
    CHECK_THROWS_AS(chop(EdgePath{{0, 2, 1, 2}}), InvalidArgument);
}

TEST_CASE("precedes is a strict order and chop respects it") {
    for (auto [p, q] : corpus) {
        const CarriedSlope cs = carry_slope(p, q);
        for (int r = 0; r <= 6; ++r) {
            std::vector<EdgePath> paths;
            for (const SubwordCount& s : gamma_r_subwords(cs.word, r + 1)) paths.push_back(s.path);
            for (const EdgePath& a : paths) {
                CHECK_FALSE(precedes(a, a));
                for (const EdgePath& b : paths) {
                    if (precedes(a, b)) {
                        CHECK_FALSE(precedes(b, a));
                        CHECK_FALSE(precedes(chop(b), chop(a)));
                    }
                    for (const EdgePath& c : paths)
                        if (precedes(a, b) && precedes(b, c)) CHECK(precedes(a, c));
                }
            }
        }
    }
}

TEST_CASE("splitting additivity") {
    for (auto [p, q] : corpus) {
        const CarriedSlope cs = carry_slope(p, q);
        const TrainTrack t = TrainTrack::standard(cs.track);
        for (int r = 0; r <= 8; ++r) {
            std::map<std::vector<int>, double> split;
            for (const SubwordCount& s : gamma_r_subwords(cs.word, r + 1))
                split[chop(s.path).branches] += edge_path_mass(t, cs.dirac, cs.word, s.path);
            for (const SubwordCount& s : gamma_r_subwords(cs.word, r))
                CHECK(split[s.path.branches] == edge_path_mass(t, cs.dirac, cs.word, s.path));
        }
    }
}

TEST_CASE("primitivity and serialization") {
    CHECK_FALSE(CyclicEdgeWord{{2, 0, 2, 0}}.is_primitive());
    CHECK(CyclicEdgeWord{{2, 0, 2, 1}}.is_primitive());
    CHECK(CyclicEdgeWord{{2, 0}}.subword(1, 3) == EdgePath{{0, 2, 0}});
    const std::string table =
        to_table(TrainTrack::standard(TrackId::nonnegative), carry_slope(2, 3).dirac.weights());
    CHECK(table.find("branch,name,value") != std::string::npos);
    CHECK(table.find(",5") != std::string::npos);
}
