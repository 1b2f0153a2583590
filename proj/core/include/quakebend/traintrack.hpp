#pragma once

// Train tracks on the once-punctured torus, weight systems, carried closed
// curves and the edge-path calculus used for finite-leaved laminations.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "quakebend/error.hpp"
#include "quakebend/words.hpp"

namespace quakebend::traintrack {

using cplx = std::complex<double>;

struct BranchEnd {
    int branch{0};
    bool head{false}; ///< true for the end the branch orientation points into
};

struct Switch {
    std::vector<BranchEnd> side_a; ///< ends through which carried curves arrive
    std::vector<BranchEnd> side_b; ///< ends through which carried curves leave
};

/// Which standard track: one carries slopes in [0, inf], the other in [-inf, 0].
enum class TrackId : std::uint8_t { nonnegative, nonpositive };

class TrainTrack {
public:
    /// Throws InvalidArgument unless every branch has one tail and one head
    /// attached and every switch has ends on both sides.
    TrainTrack(std::vector<std::string> branch_names, std::vector<Switch> switches);

    /// Standard track: branches 0 ("x"), 1 ("y"), 2 ("z"). z splits into x and y
    /// at switch 0 and x, y merge back into z at switch 1. On the nonpositive
    /// track the y branch stands for the inverse generator.
    static TrainTrack standard(TrackId id);

    std::size_t branch_count() const { return names_.size(); }
    const std::vector<std::string>& branch_names() const { return names_; }
    const std::vector<Switch>& switches() const { return switches_; }
    TrackId id() const { return id_; }

    /// Switch index reached at the head (or tail) of a branch.
    int head_switch(int branch) const { return head_switch_[static_cast<std::size_t>(branch)]; }
    int tail_switch(int branch) const { return tail_switch_[static_cast<std::size_t>(branch)]; }
    /// True when the given end lies on side a of its switch.
    bool on_side_a(const BranchEnd& end) const;

    /// Branch b can be followed by branch c.
    bool traversable(int b, int c) const;

private:
    std::vector<std::string> names_;
    std::vector<Switch> switches_;
    std::vector<int> head_switch_;
    std::vector<int> tail_switch_;
    TrackId id_{TrackId::nonnegative};
};

enum class WeightKind : std::uint8_t { nonnegative, real, angle, complex };

/// One value per branch. Real kinds use only the real part. Angle weights are
/// taken mod 2 pi, complex weights have imaginary part mod 2 pi.
struct WeightSystem {
    WeightKind kind{WeightKind::real};
    std::vector<cplx> values;

    WeightSystem operator+(const WeightSystem& other) const;
    WeightSystem scaled(double s) const;
};

/// Exact Dirac weight: mass times integer multiplicities per branch.
struct DiracWeight {
    double mass{1.0};
    std::vector<long long> multiplicities;

    WeightSystem weights() const;
};

/// Max over switches of the side-sum discrepancy (distance in the quotient for
/// modular kinds). Throws InvalidArgument when a branch has no weight, or a
/// nonnegative system holds a negative value.
double validate_switch_relations(const TrainTrack& track, const WeightSystem& w);

/// Finite sequence of consecutively traversable branches.
struct EdgePath {
    std::vector<int> branches;

    std::size_t size() const { return branches.size(); }
    std::size_t center() const { return branches.size() / 2; }
    friend bool operator==(const EdgePath&, const EdgePath&) = default;
};

/// Cyclic sequence of branches realizing a carried closed curve.
struct CyclicEdgeWord {
    std::vector<int> branches;

    std::size_t period() const { return branches.size(); }
    bool is_primitive() const;
    /// Cyclic subword of the given length starting at position i.
    EdgePath subword(std::size_t i, std::size_t length) const;
};

bool is_carried(const TrainTrack& track, const EdgePath& path);
bool is_carried(const TrainTrack& track, const CyclicEdgeWord& word);

struct CarriedSlope {
    TrackId track{TrackId::nonnegative};
    DiracWeight dirac;    ///< unit-mass integer weights
    CyclicEdgeWord word;  ///< the carried simple closed curve
};

/// Carries the slope p/q on a standard track. Weights are (|q|, |p|, |p|+|q|) on
/// (x, y, z); the carried word interleaves z with the slope word's letters.
/// Throws InvalidArgument unless gcd(|p|, |q|) = 1.
CarriedSlope carry_slope(long long p, long long q);

/// The free-group word read off a carried cyclic word (x -> X, y -> Y or Y^-1).
Word word_of(TrackId track, const CyclicEdgeWord& word);

/// Occurrences of the path per period, counted at every cyclic start position.
long long occurrences(const CyclicEdgeWord& word, const EdgePath& path);

/// Mass of a path for a Dirac weight on a carried word: mass times occurrences.
/// Throws InvalidArgument when the path is not carried by the track.
double edge_path_mass(const TrainTrack& track, const DiracWeight& dirac,
                      const CyclicEdgeWord& word, const EdgePath& path);

/// Strict order on odd-length paths: by central branch, then by the side of the
/// first divergence (forward first, then backward). Strands of a carried curve
/// never cross, so where both sides diverge they agree.
bool precedes(const EdgePath& a, const EdgePath& b);

struct SubwordCount {
    EdgePath path;
    long long multiplicity{0};
};

/// Distinct length-(2r+1) cyclic subwords with their multiplicities, sorted by precedes.
std::vector<SubwordCount> gamma_r_subwords(const CyclicEdgeWord& word, int r);

/// Removes the two end branches of an odd path of length at least 3.
EdgePath chop(const EdgePath& path);

/// Plain-text table "branch,name,value" for inspection.
std::string to_table(const TrainTrack& track, const WeightSystem& w);

} // namespace quakebend::traintrack
