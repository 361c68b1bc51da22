#include "whitehead/arith.hpp"

#include <algorithm>
#include <map>

namespace whitehead {

std::string to_string(const Rational& r) {
    if (denom(r) == 1) return numer(r).str();
    return numer(r).str() + "/" + denom(r).str();
}

Integer mod(const Integer& a, const Integer& m) {
    Integer r = a % m;
    if (r < 0) r += m;
    return r;
}

int64_t mod64(int64_t a, int64_t m) {
    int64_t r = a % m;
    return r < 0 ? r + m : r;
}

Integer ipow(Integer base, uint64_t e) {
    Integer r = 1;
    while (e) {
        if (e & 1) r *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return r;
}

Integer mod_pow(Integer base, Integer e, const Integer& m) {
    if (m == 1) return 0;
    if (e < 0) {
        base = mod_inv(base, m);
        e = -e;
    }
    return boost::multiprecision::powm(mod(base, m), e, m);
}

int64_t mod_pow64(int64_t base, int64_t e, int64_t m) {
    if (m == 1) return 0;
    if (e < 0) {
        base = mod_inv64(base, m);
        e = -e;
    }
    __int128 r = 1, b = mod64(base, m);
    while (e) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return static_cast<int64_t>(r);
}

Integer gcd(const Integer& a, const Integer& b) { return boost::multiprecision::gcd(a, b); }

int64_t gcd64(int64_t a, int64_t b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

int64_t lcm64(int64_t a, int64_t b) { return a / gcd64(a, b) * b; }

Integer mod_inv(const Integer& a, const Integer& m) {
    Integer old_r = mod(a, m), cur = m, s0 = 1, s1 = 0;
    while (cur != 0) {
        Integer q = old_r / cur;
        Integer t = old_r - q * cur;
        old_r = cur;
        cur = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    if (old_r != 1) throw MathError("element not invertible modulo " + m.str());
    return mod(s0, m);
}

int64_t mod_inv64(int64_t a, int64_t m) { return static_cast<int64_t>(mod_inv(Integer(a), Integer(m))); }

int64_t strip(Integer& n, const Integer& p) {
    int64_t v = 0;
    if (n == 0) return 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

int64_t valuation(const Rational& r, const Integer& p) {
    if (r == 0) throw MathError("valuation of zero");
    Integer a = numer(r), b = denom(r);
    return strip(a, p) - strip(b, p);
}

namespace {

bool miller_rabin(const Integer& n, const Integer& a) {
    Integer d = n - 1;
    int64_t s = strip(d, 2);
    Integer x = boost::multiprecision::powm(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int64_t i = 1; i < s; ++i) {
        x = x * x % n;
        if (x == n - 1) return true;
    }
    return false;
}

const int kSmallPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

}  // namespace

bool is_prime(const Integer& n) {
    if (n < 2) return false;
    for (int p : kSmallPrimes) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    // These bases are deterministic below 3.3e24 and a strong probable-prime test above.
    for (int p : kSmallPrimes)
        if (!miller_rabin(n, p)) return false;
    return true;
}

bool is_prime64(int64_t n) { return is_prime(Integer(n)); }

std::optional<std::pair<int64_t, int>> prime_power(int64_t q) {
    if (q < 2) return std::nullopt;
    auto fs = prime_factors64(q);
    if (fs.size() != 1) return std::nullopt;
    int e = 0;
    int64_t r = q;
    while (r % fs[0] == 0) {
        r /= fs[0];
        ++e;
    }
    return std::make_pair(fs[0], e);
}

namespace {

std::optional<Integer> pollard_brent(const Integer& n, uint64_t effort) {
    if (n % 2 == 0) return Integer(2);
    for (Integer c = 1; c < 40; ++c) {
        Integer y = 2, x, g = 1, q = 1, ys;
        uint64_t r = 1, used = 0;
        const uint64_t m = 128;
        while (g == 1) {
            x = y;
            for (uint64_t i = 0; i < r; ++i) y = (y * y + c) % n;
            uint64_t k = 0;
            while (k < r && g == 1) {
                ys = y;
                uint64_t lim = std::min(m, r - k);
                for (uint64_t i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    Integer diff = x > y ? Integer(x - y) : Integer(y - x);
                    q = q * diff % n;
                }
                g = gcd(q, n);
                k += lim;
                used += lim;
            }
            r *= 2;
            if (used > effort) break;
        }
        if (g == n) {
            do {
                ys = (ys * ys + c) % n;
                Integer diff = x > ys ? Integer(x - ys) : Integer(ys - x);
                g = gcd(diff, n);
            } while (g == 1);
        }
        if (g != 1 && g != n) return g;
        if (used > effort) return std::nullopt;
    }
    return std::nullopt;
}

void factor_rec(Integer n, std::map<Integer, int>& out, Integer& cofactor, uint64_t effort) {
    if (n == 1) return;
    if (is_prime(n)) {
        out[n] += 1;
        return;
    }
    for (unsigned k = 2; k <= 6; ++k) {
        if (auto r = exact_root(n, k)) {
            std::map<Integer, int> sub;
            Integer cf = 1;
            factor_rec(*r, sub, cf, effort);
            for (auto& [p, e] : sub) out[p] += e * static_cast<int>(k);
            cofactor *= ipow(cf, k);
            return;
        }
    }
    auto d = pollard_brent(n, effort);
    if (!d) {
        cofactor *= n;
        return;
    }
    factor_rec(*d, out, cofactor, effort);
    factor_rec(n / *d, out, cofactor, effort);
}

}  // namespace

Factorization factorize(Integer n, uint64_t effort) {
    Factorization f;
    if (n < 0) n = -n;
    if (n == 0) throw MathError("factorize(0)");
    std::map<Integer, int> out;
    for (int64_t p = 2; p < 100000; p += (p == 2 ? 1 : 2)) {
        if (Integer(p) * p > n) break;
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out[p] += e;
        }
    }
    factor_rec(n, out, f.cofactor, effort);
    for (auto& [p, e] : out) f.factors.emplace_back(p, e);
    return f;
}

std::vector<int64_t> prime_factors64(int64_t n) {
    std::vector<int64_t> r;
    if (n < 0) n = -n;
    for (int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            r.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) r.push_back(n);
    return r;
}

std::optional<Integer> exact_root(const Integer& n, unsigned k) {
    if (k == 0) throw MathError("zeroth root");
    if (n < 0) {
        if (k % 2 == 0) return std::nullopt;
        auto r = exact_root(-n, k);
        if (!r) return std::nullopt;
        return Integer(-*r);
    }
    if (n < 2 || k == 1) return n;
    // Newton iteration from above.
    unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(n)) + 1;
    Integer x = Integer(1) << ((bits + k - 1) / k);
    while (true) {
        Integer y = ((k - 1) * x + n / ipow(x, k - 1)) / k;
        if (y >= x) break;
        x = y;
    }
    if (ipow(x, k) == n) return x;
    return std::nullopt;
}

int64_t primitive_root_mod(int64_t p) {
    if (p == 2) return 1;
    auto fs = prime_factors64(p - 1);
    for (int64_t g = 2; g < p; ++g) {
        bool ok = true;
        for (int64_t f : fs)
            if (mod_pow64(g, (p - 1) / f, p) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw MathError("no primitive root modulo " + std::to_string(p));
}

int64_t discrete_log(int64_t x, int64_t g, int64_t p) {
    x = mod64(x, p);
    int64_t cur = 1;
    for (int64_t k = 0; k < p; ++k) {
        if (cur == x) return k;
        cur = static_cast<int64_t>(static_cast<__int128>(cur) * g % p);
    }
    return -1;
}

int legendre(const Integer& a, int64_t p) {
    Integer r = mod(a, p);
    if (r == 0) return 0;
    Integer e = mod_pow(r, (p - 1) / 2, p);
    return e == 1 ? 1 : -1;
}

}  // namespace whitehead
