#include "quakebend/traintrack.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace quakebend::traintrack {

TrainTrack::TrainTrack(std::vector<std::string> branch_names, std::vector<Switch> switches)
    : names_(std::move(branch_names)), switches_(std::move(switches)),
      head_switch_(names_.size(), -1), tail_switch_(names_.size(), -1) {
    for (std::size_t s = 0; s < switches_.size(); ++s) {
        const Switch& sw = switches_[s];
        if (sw.side_a.empty() || sw.side_b.empty())
            throw InvalidArgument("every switch needs ends on both sides");
        for (const auto* side : {&sw.side_a, &sw.side_b}) {
            for (const BranchEnd& e : *side) {
                if (e.branch < 0 || static_cast<std::size_t>(e.branch) >= names_.size())
                    throw InvalidArgument("switch references an unknown branch");
                int& slot = e.head ? head_switch_[static_cast<std::size_t>(e.branch)]
                                   : tail_switch_[static_cast<std::size_t>(e.branch)];
                if (slot != -1) throw InvalidArgument("branch end attached twice");
                slot = static_cast<int>(s);
            }
        }
    }
    for (std::size_t b = 0; b < names_.size(); ++b)
        if (head_switch_[b] == -1 || tail_switch_[b] == -1)
            throw InvalidArgument("branch end left unattached");
}

TrainTrack TrainTrack::standard(TrackId id) {
    Switch split{{{2, true}}, {{0, false}, {1, false}}};
    Switch merge{{{0, true}, {1, true}}, {{2, false}}};
    TrainTrack t({"x", id == TrackId::nonnegative ? "y" : "y_inv", "z"}, {split, merge});
    t.id_ = id;
    return t;
}

bool TrainTrack::on_side_a(const BranchEnd& end) const {
    const int s = end.head ? head_switch(end.branch) : tail_switch(end.branch);
    const auto& side = switches_[static_cast<std::size_t>(s)].side_a;
    return std::any_of(side.begin(), side.end(), [&](const BranchEnd& e) {
        return e.branch == end.branch && e.head == end.head;
    });
}

bool TrainTrack::traversable(int b, int c) const {
    if (b < 0 || c < 0 || static_cast<std::size_t>(b) >= names_.size() ||
        static_cast<std::size_t>(c) >= names_.size())
        return false;
    if (head_switch(b) != tail_switch(c)) return false;
    return on_side_a({b, true}) != on_side_a({c, false});
}

WeightSystem WeightSystem::operator+(const WeightSystem& other) const {
    if (other.kind != kind || other.values.size() != values.size())
        throw InvalidArgument("weight systems differ in kind or size");
    WeightSystem out = *this;
    for (std::size_t i = 0; i < values.size(); ++i) out.values[i] += other.values[i];
    return out;
}

WeightSystem WeightSystem::scaled(double s) const {
    if (kind == WeightKind::nonnegative && s < 0)
        throw InvalidArgument("nonnegative weights cannot be scaled by a negative factor");
    WeightSystem out = *this;
    for (cplx& v : out.values) v *= s;
    return out;
}

WeightSystem DiracWeight::weights() const {
    WeightSystem w;
    w.kind = mass >= 0 ? WeightKind::nonnegative : WeightKind::real;
    for (long long m : multiplicities) w.values.emplace_back(mass * static_cast<double>(m), 0.0);
    return w;
}

double validate_switch_relations(const TrainTrack& track, const WeightSystem& w) {
    if (w.values.size() != track.branch_count())
        throw InvalidArgument("weight system does not cover every branch");
    for (const cplx& v : w.values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw InvalidArgument("non-finite weight");
        if (w.kind == WeightKind::nonnegative && v.real() < 0)
            throw InvalidArgument("negative value in a nonnegative weight system");
    }
    constexpr double two_pi = 2 * std::numbers::pi;
    double worst = 0;
    for (const Switch& sw : track.switches()) {
        cplx diff{0, 0};
        for (const BranchEnd& e : sw.side_a) diff += w.values[static_cast<std::size_t>(e.branch)];
        for (const BranchEnd& e : sw.side_b) diff -= w.values[static_cast<std::size_t>(e.branch)];
        double r = 0;
        switch (w.kind) {
        case WeightKind::nonnegative:
        case WeightKind::real: r = std::abs(diff.real()); break;
        case WeightKind::angle: r = std::abs(std::remainder(diff.real(), two_pi)); break;
        case WeightKind::complex:
            r = std::abs(cplx(diff.real(), std::remainder(diff.imag(), two_pi)));
            break;
        }
        worst = std::max(worst, r);
    }
    return worst;
}

bool CyclicEdgeWord::is_primitive() const {
    const std::size_t n = branches.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        bool periodic = true;
        for (std::size_t i = 0; i + d < n && periodic; ++i) periodic = branches[i] == branches[i + d];
        if (periodic) return false;
    }
    return n > 0;
}

EdgePath CyclicEdgeWord::subword(std::size_t i, std::size_t length) const {
    EdgePath p;
    p.branches.reserve(length);
    for (std::size_t k = 0; k < length; ++k) p.branches.push_back(branches[(i + k) % branches.size()]);
    return p;
}

bool is_carried(const TrainTrack& track, const EdgePath& path) {
    if (path.branches.empty()) return false;
    for (int b : path.branches)
        if (b < 0 || static_cast<std::size_t>(b) >= track.branch_count()) return false;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        if (!track.traversable(path.branches[i], path.branches[i + 1])) return false;
    return true;
}

bool is_carried(const TrainTrack& track, const CyclicEdgeWord& word) {
    if (word.branches.empty()) return false;
    EdgePath closed{word.branches};
    closed.branches.push_back(word.branches.front());
    return is_carried(track, closed);
}

CarriedSlope carry_slope(long long p, long long q) {
    const Word w = slope_word(p, q); // validates coprimality
    CarriedSlope out;
    out.track = (p < 0) != (q < 0) && p != 0 && q != 0 ? TrackId::nonpositive : TrackId::nonnegative;
    const long long ap = std::llabs(p);
    const long long aq = std::llabs(q);
    out.dirac.mass = 1.0;
    out.dirac.multiplicities = {aq, ap, ap + aq};
    for (Letter c : w.letters()) {
        out.word.branches.push_back(2);
        out.word.branches.push_back(std::abs(c) == 1 ? 0 : 1);
    }
    return out;
}

Word word_of(TrackId track, const CyclicEdgeWord& word) {
    std::vector<Letter> letters;
    for (int b : word.branches) {
        if (b == 0) letters.push_back(1);
        if (b == 1) letters.push_back(track == TrackId::nonnegative ? 2 : -2);
    }
    return Word(std::move(letters));
}

long long occurrences(const CyclicEdgeWord& word, const EdgePath& path) {
    const std::size_t n = word.period();
    if (n == 0 || path.branches.empty()) return 0;
    long long count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        bool match = true;
        for (std::size_t k = 0; k < path.size() && match; ++k)
            match = word.branches[(i + k) % n] == path.branches[k];
        if (match) ++count;
    }
    return count;
}

double edge_path_mass(const TrainTrack& track, const DiracWeight& dirac, const CyclicEdgeWord& word,
                      const EdgePath& path) {
    if (!is_carried(track, path)) throw InvalidArgument("edge path is not carried by the track");
    return dirac.mass * static_cast<double>(occurrences(word, path));
}

namespace {

// Side rank of a branch when strands diverge: forward, x lies before y; looking
// backward the two branches appear in the opposite order.
int forward_rank(int b) { return b; }
int backward_rank(int b) { return -b; }

} // namespace

bool precedes(const EdgePath& a, const EdgePath& b) {
    if (a.size() != b.size() || a.size() % 2 == 0)
        throw InvalidArgument("precedes compares odd paths of equal length");
    const std::size_t c = a.center();
    if (a.branches[c] != b.branches[c]) return a.branches[c] < b.branches[c];
    for (std::size_t k = 1; k <= c; ++k) {
        const int x = a.branches[c + k];
        const int y = b.branches[c + k];
        if (x != y) return forward_rank(x) < forward_rank(y);
    }
    for (std::size_t k = 1; k <= c; ++k) {
        const int x = a.branches[c - k];
        const int y = b.branches[c - k];
        if (x != y) return backward_rank(x) < backward_rank(y);
    }
    return false;
}

std::vector<SubwordCount> gamma_r_subwords(const CyclicEdgeWord& word, int r) {
    if (r < 0) throw InvalidArgument("r must be nonnegative");
    const std::size_t n = word.period();
    const std::size_t len = 2 * static_cast<std::size_t>(r) + 1;
    std::map<std::vector<int>, long long> counts;
    for (std::size_t i = 0; i < n; ++i) ++counts[word.subword(i, len).branches];
    std::vector<SubwordCount> out;
    out.reserve(counts.size());
    for (auto& [branches, m] : counts) out.push_back({EdgePath{branches}, m});
    std::sort(out.begin(), out.end(),
              [](const SubwordCount& x, const SubwordCount& y) { return precedes(x.path, y.path); });
    return out;
}

EdgePath chop(const EdgePath& path) {
    if (path.size() < 3 || path.size() % 2 == 0)
        throw InvalidArgument("chop needs an odd path of length at least 3");
    return EdgePath{std::vector<int>(path.branches.begin() + 1, path.branches.end() - 1)};
}

std::string to_table(const TrainTrack& track, const WeightSystem& w) {
    std::ostringstream os;
    os.precision(15);
    os << "branch,name,value_re,value_im\n";
    for (std::size_t b = 0; b < track.branch_count(); ++b) {
        const cplx v = b < w.values.size() ? w.values[b] : cplx{0, 0};
        os << b << ',' << track.branch_names()[b] << ',' << v.real() << ',' << v.imag() << '\n';
    }
    return os.str();
}

} // namespace quakebend::traintrack
