// Integer and rational helpers: modular arithmetic, primality, factoring.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "whitehead/errors.hpp"

namespace whitehead {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numer(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denom(const Rational& r) { return boost::multiprecision::denominator(r); }

inline std::string to_string(const Integer& n) { return n.str(); }
std::string to_string(const Rational& r);

// Non-negative remainder.
Integer mod(const Integer& a, const Integer& m);
int64_t mod64(int64_t a, int64_t m);

Integer ipow(Integer base, uint64_t e);
Integer mod_pow(Integer base, Integer e, const Integer& m);
int64_t mod_pow64(int64_t base, int64_t e, int64_t m);

// Throws MathError when gcd(a, m) != 1.
Integer mod_inv(const Integer& a, const Integer& m);
int64_t mod_inv64(int64_t a, int64_t m);

Integer gcd(const Integer& a, const Integer& b);
int64_t gcd64(int64_t a, int64_t b);
int64_t lcm64(int64_t a, int64_t b);

// Number of times p divides n (n != 0); n is divided in place.
int64_t strip(Integer& n, const Integer& p);
int64_t valuation(const Rational& r, const Integer& p);

bool is_prime(const Integer& n);
bool is_prime64(int64_t n);

// q = p^e with p prime.
std::optional<std::pair<int64_t, int>> prime_power(int64_t q);

struct Factorization {
    std::vector<std::pair<Integer, int>> factors;  // sorted by prime
    Integer cofactor = 1;                           // unfactored part (1 when complete)
    bool complete() const { return cofactor == 1; }
};

// Trial division then Pollard-Brent; `effort` bounds the rho iterations per factor.
Factorization factorize(Integer n, uint64_t effort = 2000000);
std::vector<int64_t> prime_factors64(int64_t n);

std::optional<Integer> exact_root(const Integer& n, unsigned k);

// Smallest generator of (Z/p)^*.
int64_t primitive_root_mod(int64_t p);
// Discrete log of x to base g modulo p (brute force), or -1.
int64_t discrete_log(int64_t x, int64_t g, int64_t p);
int legendre(const Integer& a, int64_t p);

}  // namespace whitehead
