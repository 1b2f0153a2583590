#pragma once

// Reduced words in the free group on the marked generators X, Y.
// Text form: X, Y for the generators and x, y for their inverses.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "quakebend/error.hpp"

namespace quakebend {

/// Letter codes: +1 = X, -1 = X^-1, +2 = Y, -2 = Y^-1.
using Letter = std::int8_t;

class Word {
public:
    Word() = default;
    /// Freely reduces the given letters. Throws InvalidArgument on codes outside {+-1, +-2}.
    explicit Word(std::vector<Letter> letters);

    static Word x() { return Word({1}); }
    static Word y() { return Word({2}); }
    /// Parses "XYxy" style text; whitespace is ignored.
    static Word parse(std::string_view text);

    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }

    Word inverse() const;
    Word power(int n) const;
    /// Image under the endomorphism X -> x_image, Y -> y_image.
    Word substitute(const Word& x_image, const Word& y_image) const;

    /// Exponent sums (homology class) as (#X, #Y).
    std::array<long long, 2> abelianization() const;

    std::string to_string() const;

    friend Word operator*(const Word& u, const Word& v);
    friend bool operator==(const Word& u, const Word& v) = default;

private:
    std::vector<Letter> letters_;
};

/// Primitive word for the slope p/q (homology class (q, p)) by Farey mediants of
/// X (slope 0) and Y (slope inf); the mediant of left and right is left*right.
/// Negative slopes use Y^-1 in place of Y. Throws unless gcd(|p|, |q|) = 1.
Word slope_word(long long p, long long q);

/// True when u is a cyclic permutation of v (both taken as cyclically reduced words).
bool cyclically_equal(const Word& u, const Word& v);

/// Free-group automorphism given by the images of X, Y and of its inverse.
struct MarkingChange {
    Word x_image{Word::x()};
    Word y_image{Word::y()};
    Word x_preimage{Word::x()}; ///< X written in the new generators
    Word y_preimage{Word::y()}; ///< Y written in the new generators
    std::array<std::array<long long, 2>, 2> homology{{{1, 0}, {0, 1}}}; ///< columns: classes of the images

    long long determinant() const {
        return homology[0][0] * homology[1][1] - homology[0][1] * homology[1][0];
    }
};

/// An automorphism whose action on homology (columns = classes of the images
/// of X and Y) is the given integer matrix. Throws unless det = +-1.
MarkingChange automorphism_with_homology(const std::array<std::array<long long, 2>, 2>& a);

/// Basis adapted to the slope p/q: the image of X is slope_word(p, q) and the
/// image of Y is its Farey neighbour (inverted if needed) so that the homology
/// matrix has determinant +1. Built from Nielsen moves along the Farey path.
MarkingChange slope_basis(long long p, long long q);

} // namespace quakebend
