// Quadratic Hilbert symbols over Q and its completions.
#pragma once

#include <cstdint>
#include <vector>

#include "whitehead/fields.hpp"

namespace whitehead {

// Place of Q: a prime, or kRealPlace.
constexpr int64_t kRealPlace = -1;

// (a, b)_v in {1, -1} for nonzero rationals.
int hilbert_symbol(const Rational& a, const Rational& b, int64_t place);
int hilbert_symbol(const Integer& a, const Integer& b, const Integer& p);

// (a, b) for nonzero elements of a p-adic field (any p); uses the unit mod p or mod 8.
int padic_hilbert_symbol(const Elem& a, const Elem& b);

// Square test for a nonzero element of a p-adic field, certified at the carried precision.
bool padic_is_square(const Elem& a);

// Primes dividing numerators or denominators of the given rationals, plus 2.
// Throws Undecided when some integer could not be factored.
std::vector<Integer> bad_primes(const std::vector<Rational>& xs);

}  // namespace whitehead
