#include "whitehead/local.hpp"

#include <set>

namespace whitehead {

namespace {

int symbol_from_parts(int64_t alpha, const Integer& u, int64_t beta, const Integer& v, const Integer& p) {
    // u, v: p-adic units given by integers (only their class mod p or mod 8 matters)
    if (p != 2) {
        int64_t eps = static_cast<int64_t>(((p - 1) / 2) % 2);
        int s = ((alpha * beta * eps) % 2) ? -1 : 1;
        if (beta % 2) s *= legendre(u, static_cast<int64_t>(p));
        if (alpha % 2) s *= legendre(v, static_cast<int64_t>(p));
        return s;
    }
    int64_t u8 = static_cast<int64_t>(mod(u, 8)), v8 = static_cast<int64_t>(mod(v, 8));
    auto e = [](int64_t x) { return ((x - 1) / 2) % 2; };
    auto w = [](int64_t x) { return ((x * x - 1) / 8) % 2; };
    int64_t ex = e(u8) * e(v8) + (alpha % 2 != 0) * w(v8) + (beta % 2 != 0) * w(u8);
    return ex % 2 ? -1 : 1;
}

}  // namespace

int hilbert_symbol(const Integer& a, const Integer& b, const Integer& p) {
    if (a == 0 || b == 0) throw MathError("Hilbert symbol of zero");
    Integer u = a, v = b;
    int64_t alpha = strip(u, p), beta = strip(v, p);
    return symbol_from_parts(alpha, u, beta, v, p);
}

int hilbert_symbol(const Rational& a, const Rational& b, int64_t place) {
    if (a == 0 || b == 0) throw MathError("Hilbert symbol of zero");
    if (place == kRealPlace) return (a < 0 && b < 0) ? -1 : 1;
    // a = n/d has the square class of n*d
    return hilbert_symbol(Integer(numer(a) * denom(a)), Integer(numer(b) * denom(b)), Integer(place));
}

int padic_hilbert_symbol(const Elem& a, const Elem& b) {
    const Field& R = a.field->rep_node();
    if (R.kind() != FieldKind::PAdic) throw UsageError("padic_hilbert_symbol needs p-adic elements");
    Integer p = R.prime();
    int64_t need = p == 2 ? 3 : 1;
    int64_t alpha = padic_valuation(a), beta = padic_valuation(b);
    return symbol_from_parts(alpha, padic_unit(a, need), beta, padic_unit(b, need), p);
}

bool padic_is_square(const Elem& a) { return is_nth_power(a, 2).is_power; }

std::vector<Integer> bad_primes(const std::vector<Rational>& xs) {
    // gcd refinement into pairwise coprime parts first: entries produced by elimination
    // share large factors that are cheap to split this way
    std::vector<Integer> base;
    auto insert = [&](Integer n) {
        std::vector<Integer> work{abs(n)};
        while (!work.empty()) {
            Integer x = work.back();
            work.pop_back();
            if (x <= 1) continue;
            bool split = false;
            for (size_t i = 0; i < base.size() && !split; ++i) {
                Integer g = gcd(x, base[i]);
                if (g == 1) continue;
                Integer b = base[i];
                base.erase(base.begin() + static_cast<std::ptrdiff_t>(i));
                while (x % g == 0) x /= g;
                while (b % g == 0) b /= g;
                work.push_back(g);
                work.push_back(x);
                work.push_back(b);
                split = true;
            }
            if (!split) base.push_back(x);
        }
    };
    for (const auto& x : xs)
        for (const Integer& n : {numer(x), denom(x)})
            if (n != 0) insert(n);
    std::set<Integer> ps{2};
    for (const Integer& n : base) {
        auto f = factorize(n);
        if (!f.complete()) throw Undecided("could not factor " + f.cofactor.str());
        for (auto& [q, e] : f.factors) ps.insert(q);
    }
    return {ps.begin(), ps.end()};
}

}  // namespace whitehead
