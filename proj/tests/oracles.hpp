// Brute-force reference computations shared by the unit and acceptance tests. None of
// them calls into the library beyond element construction and printing.
#pragma once

#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "whitehead/wittvec.hpp"

namespace oracle {

using whitehead::Integer;

inline int64_t powmod(int64_t b, int64_t e, int64_t m) {
    int64_t r = 1;
    b = ((b % m) + m) % m;
    while (e) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

inline int64_t smallest_prime_factor(int64_t n) {
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return d;
    return n;
}

// prod p^(e-1) by repeated trial division
inline int64_t kahn_bound(int64_t n) {
    int64_t out = 1;
    while (n > 1) {
        int64_t p = smallest_prime_factor(n), e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (int64_t i = 1; i < e; ++i) out *= p;
    }
    return out;
}

// Order of (1/N)Z/Z modulo the subgroup generated by 1/d1 and 1/d2, by enumeration.
inline int64_t qz_quotient_order(int64_t N, int64_t d1, int64_t d2) {
    std::set<int64_t> H;
    for (int64_t i = 0; i < d1; ++i)
        for (int64_t j = 0; j < d2; ++j) H.insert((i * (N / d1) + j * (N / d2)) % N);
    return N / static_cast<int64_t>(H.size());
}

// Class of u * p^v in Q_p^x / n-th powers: (v mod n, u^((p-1)/n) mod p), for a unit u.
inline std::pair<int64_t, int64_t> power_residue_class(int64_t u, int64_t v, int64_t p, int64_t n) {
    return {v % n, powmod(u % p, (p - 1) / n, p)};
}

inline int64_t smallest_non_power(int64_t p, int64_t n) {
    for (int64_t u = 2;; ++u)
        if (powmod(u, (p - 1) / n, p) != 1) return u;
}

// Primitive solution of z^2 = a x^2 + b y^2 modulo p^k, after removing p^2 factors.
inline bool conic_solvable(int64_t a, int64_t b, int64_t p) {
    while (a % (p * p) == 0) a /= p * p;
    while (b % (p * p) == 0) b /= p * p;
    const int64_t k = p == 2 ? 5 : 3;
    int64_t M = 1;
    for (int i = 0; i < k; ++i) M *= p;
    std::vector<char> square(M, 0);
    for (int64_t z = 0; z < M; ++z) square[(z * z) % M] = 1;
    auto md = [&](int64_t x) { return ((x % M) + M) % M; };
    // x = 1, any y, z
    for (int64_t y = 0; y < M; ++y)
        if (square[md(a + b * md(y * y))]) return true;
    // x divisible by p, y = 1
    for (int64_t x = 0; x < M; x += p)
        if (square[md(a * md(x * x) + b)]) return true;
    // x, y divisible by p and z a unit is impossible
    return false;
}

// Norm test for the degree-m pairing of Q_p with m | p - 1: (a, b) = 0 iff b is a norm
// from Q_p(a^(1/m)). Norm groups are assembled from determinants of multiplication
// matrices of small elements of Q_p[X]/(X^d - beta).
class TameNormTest {
public:
    TameNormTest(int64_t p, int64_t m) : p_(p), m_(m) {
        for (int64_t g = 2;; ++g) {
            bool prim = true;
            for (int64_t q = 2; q < p; ++q)
                if ((p - 1) % q == 0 && smallest_prime_factor(q) == q && powmod(g, (p - 1) / q, p) == 1) prim = false;
            if (prim) {
                g_ = g;
                break;
            }
        }
    }

    // Class in (Z/m)^2: (valuation, discrete log of the unit residue).
    std::pair<int64_t, int64_t> cls(Integer x) const {
        const bool neg = x < 0;
        if (neg) x = -x;
        int64_t v = 0;
        while (x % p_ == 0) {
            x /= p_;
            ++v;
        }
        int64_t r = static_cast<int64_t>(x % p_);
        if (neg) r = (p_ - r) % p_;
        int64_t l = 0, acc = 1;
        while (acc != r) {
            acc = acc * g_ % p_;
            ++l;
        }
        return {v % m_, l % m_};
    }

    // Whether the norm group was assembled; false means the oracle could not decide.
    bool norm(int64_t a, int64_t b, bool& ok) {
        auto ca = cls(a);
        auto& H = group_for(ca, ok);
        return H.count(cls(b)) > 0;
    }

private:
    int64_t p_, m_, g_ = 0;
    std::map<std::pair<int64_t, int64_t>, std::set<std::pair<int64_t, int64_t>>> cache_;
    std::map<std::pair<int64_t, int64_t>, bool> complete_;

    static Integer det(std::vector<std::vector<Integer>> M) {
        // Bareiss fraction-free elimination
        const size_t n = M.size();
        Integer prev = 1;
        int sign = 1;
        for (size_t k = 0; k + 1 < n; ++k) {
            if (M[k][k] == 0) {
                size_t r = k + 1;
                while (r < n && M[r][k] == 0) ++r;
                if (r == n) return 0;
                std::swap(M[k], M[r]);
                sign = -sign;
            }
            for (size_t i = k + 1; i < n; ++i)
                for (size_t j = k + 1; j < n; ++j) M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
            prev = M[k][k];
        }
        return sign * M[n - 1][n - 1];
    }

    void close(std::set<std::pair<int64_t, int64_t>>& H, std::pair<int64_t, int64_t> g) const {
        std::vector<std::pair<int64_t, int64_t>> todo{g};
        while (!todo.empty()) {
            auto x = todo.back();
            todo.pop_back();
            std::vector<std::pair<int64_t, int64_t>> cur(H.begin(), H.end());
            for (const auto& h : cur) {
                std::pair<int64_t, int64_t> s{(h.first + x.first) % m_, (h.second + x.second) % m_};
                if (H.insert(s).second) todo.push_back(s);
            }
        }
    }

    const std::set<std::pair<int64_t, int64_t>>& group_for(std::pair<int64_t, int64_t> ca, bool& ok) {
        auto it = cache_.find(ca);
        if (it != cache_.end()) {
            ok = complete_[ca];
            return it->second;
        }
        // degree d = order of a in (Z/m)^2; beta = a^(d/m) as a class
        int64_t d = 1;
        while ((d * ca.first) % m_ || (d * ca.second) % m_) ++d;
        std::set<std::pair<int64_t, int64_t>> H{{0, 0}};
        if (d > 1) {
            const int64_t s = m_ / d;
            Integer beta = whitehead::ipow(Integer(p_), static_cast<uint64_t>(ca.first / s)) *
                           whitehead::ipow(Integer(g_), static_cast<uint64_t>(ca.second / s));
            close(H, {d % m_, 0});
            close(H, {0, d % m_});
            const size_t target = static_cast<size_t>(m_ * m_ / d);
            const int R = d <= 3 ? 3 : 2;
            std::vector<int> c(d, -R);
            for (bool more = true; more && H.size() < target;) {
                bool nonzero = false;
                for (int x : c) nonzero = nonzero || x != 0;
                if (nonzero) {
                    // multiplication by sum c_i X^i on the basis 1, X, ..., X^(d-1)
                    std::vector<std::vector<Integer>> M(d, std::vector<Integer>(d, 0));
                    for (int64_t j = 0; j < d; ++j)
                        for (int64_t i = 0; i < d; ++i) {
                            int64_t e = i + j;
                            Integer coef = c[i];
                            if (e >= d) {
                                e -= d;
                                coef *= beta;
                            }
                            M[e][j] += coef;
                        }
                    Integer N = det(M);
                    if (N != 0) close(H, cls(N));
                }
                more = false;
                for (int i = 0; i < d; ++i) {
                    if (c[i] < R) {
                        ++c[i];
                        more = true;
                        break;
                    }
                    c[i] = -R;
                }
            }
            complete_[ca] = H.size() == target;
        } else {
            for (int64_t v = 0; v < m_; ++v)
                for (int64_t l = 0; l < m_; ++l) H.insert({v, l});
            complete_[ca] = true;
        }
        ok = complete_[ca];
        return cache_[ca] = H;
    }
};

// Ghost components: lift components of F_q = F_p[g]/(f) to Z[g]/(f) and compare
// ghost components modulo p^(n+1).
struct ZgRing {
    int64_t p;
    std::vector<int64_t> f;  // monic modulus, low degree first
    Integer M;               // coefficients are kept mod M

    using Z = std::vector<Integer>;
    int deg() const { return static_cast<int>(f.size()) - 1; }
    Z reduce(Z a) const {
        for (int i = static_cast<int>(a.size()) - 1; i >= deg(); --i) {
            Integer c = a[i];
            if (c == 0) continue;
            for (int k = 0; k <= deg(); ++k) a[i - deg() + k] -= c * f[k];
        }
        a.resize(deg());
        for (auto& x : a) x = whitehead::mod(x, M);
        return a;
    }
    Z mul(const Z& a, const Z& b) const {
        Z r(a.size() + b.size(), 0);
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
        return reduce(r);
    }
    Z add(const Z& a, const Z& b) const {
        Z r(deg(), 0);
        for (int i = 0; i < deg(); ++i) r[i] = whitehead::mod(a[i] + b[i], M);
        return r;
    }
    Z pw(Z a, int64_t e) const {
        Z r(deg(), 0);
        r[0] = 1;
        while (e--) r = mul(r, a);
        return r;
    }
    Z lift(const whitehead::Elem& x) const {
        int64_t idx = x.field->ff_index(x);
        Z r(deg(), 0);
        for (int i = 0; i < deg(); ++i) {
            r[i] = idx % p;
            idx /= p;
        }
        return r;
    }
    Z ghost(const whitehead::WittVector& w, int n) const {
        Z s(deg(), 0);
        for (int i = 0; i <= n; ++i) {
            int64_t e = 1;
            for (int k = 0; k < n - i; ++k) e *= p;
            Z t = pw(lift(w.comps[i]), e);
            for (auto& c : t) c *= whitehead::ipow(p, i);
            s = add(s, t);
        }
        return s;
    }
    bool same_mod(const Z& a, const Z& b, const Integer& m) const {
        for (int i = 0; i < deg(); ++i)
            if (whitehead::mod(a[i] - b[i], m) != 0) return false;
        return true;
    }
};

inline ZgRing ring_for(const whitehead::FieldPtr& F) {
    ZgRing R;
    R.p = F->characteristic();
    R.f = F->degree() == 1 ? std::vector<int64_t>{0, 1} : F->modulus();
    R.M = whitehead::ipow(R.p, 4);
    return R;
}

// ghost(r) = ghost(u) op ghost(v) mod p^(n+1) for every n; op is '+', '*' or '-' (negation of u)
inline bool ghost_agrees(const ZgRing& R, const whitehead::WittVector& u, const whitehead::WittVector& v,
                         const whitehead::WittVector& r, char op) {
    for (int n = 0; n < u.length(); ++n) {
        auto gu = R.ghost(u, n), gv = R.ghost(v, n), gr = R.ghost(r, n);
        ZgRing::Z expect;
        if (op == '+')
            expect = R.add(gu, gv);
        else if (op == '*')
            expect = R.mul(gu, gv);
        else {
            expect = gu;
            for (auto& c : expect) c = whitehead::mod(-c, R.M);
        }
        if (!R.same_mod(expect, gr, whitehead::ipow(R.p, n + 1))) return false;
    }
    return true;
}

inline whitehead::WittVector random_witt(const whitehead::FieldPtr& F, int l, std::mt19937_64& rng) {
    std::uniform_int_distribution<int64_t> d(0, F->order() - 1);
    std::vector<whitehead::Elem> c;
    for (int i = 0; i < l; ++i) c.push_back(F->ff_from_index(d(rng)));
    return whitehead::witt_vector(F, c);
}

}  // namespace oracle
