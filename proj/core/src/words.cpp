#include "quakebend/words.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace quakebend {

Word::Word(std::vector<Letter> letters) {
    letters_.reserve(letters.size());
    for (Letter c : letters) {
        if (c != 1 && c != -1 && c != 2 && c != -2)
            throw InvalidArgument("word letter code must be one of +-1, +-2");
        if (!letters_.empty() && letters_.back() == -c)
            letters_.pop_back();
        else
            letters_.push_back(c);
    }
}

Word Word::parse(std::string_view text) {
    std::vector<Letter> out;
    for (char ch : text) {
        switch (ch) {
        case 'X': out.push_back(1); break;
        case 'x': out.push_back(-1); break;
        case 'Y': out.push_back(2); break;
        case 'y': out.push_back(-2); break;
        case ' ':
        case '\t':
        case '1': // "1" denotes the empty word
            break;
        default: throw InvalidArgument(std::string("unexpected character in word: ") + ch);
        }
    }
    return Word(std::move(out));
}

Word Word::inverse() const {
    std::vector<Letter> out(letters_.rbegin(), letters_.rend());
    for (Letter& c : out) c = static_cast<Letter>(-c);
    Word w;
    w.letters_ = std::move(out);
    return w;
}

Word Word::power(int n) const {
    const Word base = n < 0 ? inverse() : *this;
    Word out;
    for (int i = 0; i < std::abs(n); ++i) out = out * base;
    return out;
}

Word Word::substitute(const Word& x_image, const Word& y_image) const {
    const Word xi = x_image.inverse();
    const Word yi = y_image.inverse();
    std::vector<Letter> buf;
    for (Letter c : letters_) {
        const Word& img = c == 1 ? x_image : c == -1 ? xi : c == 2 ? y_image : yi;
        buf.insert(buf.end(), img.letters_.begin(), img.letters_.end());
    }
    return Word(std::move(buf));
}

std::array<long long, 2> Word::abelianization() const {
    std::array<long long, 2> h{0, 0};
    for (Letter c : letters_) h[static_cast<std::size_t>(std::abs(c) - 1)] += c > 0 ? 1 : -1;
    return h;
}

std::string Word::to_string() const {
    if (letters_.empty()) return "1";
    std::string s;
    for (Letter c : letters_) s.push_back(c == 1 ? 'X' : c == -1 ? 'x' : c == 2 ? 'Y' : 'y');
    return s;
}

Word operator*(const Word& u, const Word& v) {
    std::vector<Letter> buf(u.letters_);
    buf.insert(buf.end(), v.letters_.begin(), v.letters_.end());
    return Word(std::move(buf));
}

Word slope_word(long long p, long long q) {
    if (std::gcd(std::llabs(p), std::llabs(q)) != 1)
        throw InvalidArgument("slope must be a coprime pair");
    if (q < 0) {
        p = -p;
        q = -q;
    }
    if (q == 0) return Word::y();
    const Word y_letter = p < 0 ? Word::y().inverse() : Word::y();
    const long long ap = std::llabs(p);
    long long lp = 0, lq = 1, rp = 1, rq = 0;
    Word left = Word::x();
    Word right = y_letter;
    if (ap == 0) return left;
    while (true) {
        const long long mp = lp + rp;
        const long long mq = lq + rq;
        Word mediant = left * right;
        if (mp == ap && mq == q) return mediant;
        if (ap * mq < mp * q) {
            rp = mp;
            rq = mq;
            right = std::move(mediant);
        } else {
            lp = mp;
            lq = mq;
            left = std::move(mediant);
        }
    }
}

bool cyclically_equal(const Word& u, const Word& v) {
    if (u.size() != v.size()) return false;
    if (u.empty()) return true;
    const auto& a = u.letters();
    std::vector<Letter> doubled(v.letters());
    doubled.insert(doubled.end(), v.letters().begin(), v.letters().end());
    return std::search(doubled.begin(), doubled.end(), a.begin(), a.end()) != doubled.end();
}

namespace {

using IMat = std::array<std::array<long long, 2>, 2>;

enum class Op { add_c1_to_c2, add_c2_to_c1, swap, negate_c1, negate_c2 };

struct Step {
    Op op;
    long long k{0};
};

void apply_to_columns(IMat& a, const Step& s) {
    for (int r = 0; r < 2; ++r) {
        switch (s.op) {
        case Op::add_c1_to_c2: a[r][1] += s.k * a[r][0]; break;
        case Op::add_c2_to_c1: a[r][0] += s.k * a[r][1]; break;
        case Op::swap: std::swap(a[r][0], a[r][1]); break;
        case Op::negate_c1: a[r][0] = -a[r][0]; break;
        case Op::negate_c2: a[r][1] = -a[r][1]; break;
        }
    }
}

Step inverse_step(const Step& s) {
    if (s.op == Op::add_c1_to_c2 || s.op == Op::add_c2_to_c1) return {s.op, -s.k};
    return s;
}

// Applies a Nielsen move to the basis (w1, w2) and keeps X, Y expressed in it.
void apply_to_basis(MarkingChange& m, const Step& s) {
    Word& w1 = m.x_image;
    Word& w2 = m.y_image;
    const Word a = Word::x(); // new first generator, as a letter of the new basis
    const Word b = Word::y();
    Word old1 = a;            // old w1 written in the new basis
    Word old2 = b;
    switch (s.op) {
    case Op::add_c1_to_c2:
        w2 = w1.power(static_cast<int>(s.k)) * w2;
        old2 = a.power(static_cast<int>(-s.k)) * b;
        break;
    case Op::add_c2_to_c1:
        w1 = w1 * w2.power(static_cast<int>(s.k));
        old1 = a * b.power(static_cast<int>(-s.k));
        break;
    case Op::swap:
        std::swap(w1, w2);
        old1 = b;
        old2 = a;
        break;
    case Op::negate_c1:
        w1 = w1.inverse();
        old1 = a.inverse();
        break;
    case Op::negate_c2:
        w2 = w2.inverse();
        old2 = b.inverse();
        break;
    }
    m.x_preimage = m.x_preimage.substitute(old1, old2);
    m.y_preimage = m.y_preimage.substitute(old1, old2);
    apply_to_columns(m.homology, s);
}

} // namespace

MarkingChange slope_basis(long long p, long long q) {
    if (std::gcd(std::llabs(p), std::llabs(q)) != 1)
        throw InvalidArgument("slope must be a coprime pair");
    if (q < 0 || (q == 0 && p < 0)) {
        p = -p;
        q = -q;
    }
    MarkingChange m;
    if (q == 0) {
        apply_to_basis(m, {Op::swap});
        apply_to_basis(m, {Op::negate_c2});
        return m;
    }
    if (p == 0) return m;
    if (p < 0) apply_to_basis(m, {Op::negate_c2});
    const long long ap = std::llabs(p);
    long long lp = 0, lq = 1, rp = 1, rq = 0;
    while (true) {
        const long long mp = lp + rp;
        const long long mq = lq + rq;
        if (mp == ap && mq == q) break;
        if (ap * mq < mp * q) {
            apply_to_basis(m, {Op::add_c1_to_c2, 1}); // (L, R) -> (L, LR)
            rp = mp;
            rq = mq;
        } else {
            apply_to_basis(m, {Op::add_c2_to_c1, 1}); // (L, R) -> (LR, R)
            lp = mp;
            lq = mq;
        }
    }
    apply_to_basis(m, {Op::add_c2_to_c1, 1});
    if (m.determinant() < 0) apply_to_basis(m, {Op::negate_c2});
    return m;
}

MarkingChange automorphism_with_homology(const IMat& target) {
    const long long det = target[0][0] * target[1][1] - target[0][1] * target[1][0];
    if (det != 1 && det != -1) throw InvalidArgument("homology matrix must have determinant +-1");

    // Column-reduce the target to the identity, then replay the inverse moves.
    IMat a = target;
    std::vector<Step> steps;
    auto push = [&](Step s) {
        apply_to_columns(a, s);
        steps.push_back(s);
    };
    while (a[0][0] != 0 && a[0][1] != 0) {
        if (std::llabs(a[0][0]) >= std::llabs(a[0][1]))
            push({Op::add_c2_to_c1, -(a[0][0] / a[0][1])});
        else
            push({Op::add_c1_to_c2, -(a[0][1] / a[0][0])});
    }
    if (a[0][0] == 0) push({Op::swap});
    if (a[0][0] < 0) push({Op::negate_c1});
    if (a[1][1] < 0) push({Op::negate_c2});
    if (a[1][0] != 0) push({Op::add_c2_to_c1, -a[1][0]});

    MarkingChange m;
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) apply_to_basis(m, inverse_step(*it));
    return m;
}

} // namespace quakebend
