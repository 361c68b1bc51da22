#include "whitehead/forms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "whitehead/local.hpp"

namespace whitehead {

namespace {

FieldKind kind_of(const FieldPtr& F) { return F->rep_node().kind(); }

const Rational& rat(const Elem& e) { return std::get<Rational>(e.rep); }

bool is_square(const Elem& x) { return is_nth_power(x, 2).is_power; }

size_t bits(const Integer& v) { return v == 0 ? 0 : boost::multiprecision::msb(v); }

size_t height(const Elem& x) {
    if (x.field->kind() != FieldKind::Rationals) return 0;
    return bits(abs(numer(rat(x)))) + bits(denom(rat(x)));
}

// Square class representative n*d / s^2 of n/d over Q; s collects small prime squares
// and perfect-square cofactors.
Elem square_reduce(const Elem& x) {
    if (x.field->kind() != FieldKind::Rationals || x.is_zero()) return x;
    Integer n = numer(rat(x)) * denom(rat(x));
    const int sign = n < 0 ? -1 : 1;
    n = abs(n);
    Integer out = 1;
    for (int64_t p = 2; p < 2000 && n > 1; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        if (strip(n, p) % 2) out *= p;
    }
    if (n > 1 && exact_root(n, 2)) n = 1;
    return x.field->from_int(sign * out * n);
}

void require_diagonal(const QuadraticForm& q, const char* what) {
    if (!q.blocks.empty()) throw UsageError(std::string(what) + " needs a diagonal form");
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
    return out;
}

}  // namespace

// ---------------------------------------------------------------- construction

Elem QuadraticForm::evaluate(const Vec& v) const {
    if (v.size() != dim()) throw UsageError("vector length does not match the form");
    Elem s = field->zero();
    size_t k = 0;
    for (const auto& a : diag) {
        s += a * v[k] * v[k];
        ++k;
    }
    for (const auto& [a, b] : blocks) {
        const Elem& x = v[k];
        const Elem& y = v[k + 1];
        s += a * x * x + x * y + b * y * y;
        k += 2;
    }
    return s;
}

std::string QuadraticForm::to_string() const {
    std::vector<std::string> parts;
    if (!diag.empty() || blocks.empty()) {
        std::vector<std::string> es;
        for (const auto& a : diag) es.push_back(a.to_string());
        parts.push_back("<" + join(es, ", ") + ">");
    }
    for (const auto& [a, b] : blocks) parts.push_back("[" + a.to_string() + ", " + b.to_string() + "]");
    return join(parts, " + ");
}

QuadraticForm diagonal_form(const FieldPtr& F, const Vec& entries) {
    QuadraticForm q;
    q.field = F;
    for (const auto& e : entries) {
        if (e.is_zero()) throw UsageError("diagonal entries must be nonzero");
        q.diag.push_back(F->embed(e));
    }
    return q;
}

QuadraticForm diagonal_form(const FieldPtr& F, const std::vector<int64_t>& entries) {
    Vec v;
    for (auto e : entries) v.push_back(F->from_int(e));
    return diagonal_form(F, v);
}

QuadraticForm block_form(const FieldPtr& F, const std::vector<std::pair<Elem, Elem>>& blocks) {
    if (F->characteristic() != 2) throw UsageError("binary blocks are only used in characteristic 2");
    QuadraticForm q;
    q.field = F;
    for (const auto& [a, b] : blocks) q.blocks.emplace_back(F->embed(a), F->embed(b));
    return q;
}

QuadraticForm orthogonal_sum(const QuadraticForm& a, const QuadraticForm& b) {
    if (!a.field->same(*b.field)) throw UsageError("forms over different fields");
    QuadraticForm q = a;
    q.diag.insert(q.diag.end(), b.diag.begin(), b.diag.end());
    q.blocks.insert(q.blocks.end(), b.blocks.begin(), b.blocks.end());
    return q;
}

QuadraticForm scaled(const Elem& lambda, const QuadraticForm& q) {
    if (lambda.is_zero()) throw UsageError("scaling by zero");
    QuadraticForm r;
    r.field = q.field;
    for (const auto& a : q.diag) r.diag.push_back(lambda * a);
    // lambda [a, b] is isometric to [lambda a, b / lambda]
    for (const auto& [a, b] : q.blocks) r.blocks.emplace_back(lambda * a, b / lambda);
    return r;
}

QuadraticForm hyperbolic_plane(const FieldPtr& F) {
    QuadraticForm q;
    q.field = F;
    if (F->characteristic() == 2)
        q.blocks.emplace_back(F->zero(), F->zero());
    else
        q.diag = {F->one(), -F->one()};
    return q;
}

QuadraticForm diagonalize_symmetric(const Mat& S0) {
    const size_t n = S0.size();
    if (n == 0) throw UsageError("empty matrix");
    const FieldPtr& F = S0[0][0].field;
    if (F->characteristic() == 2) throw UsageError("diagonalization needs characteristic != 2");
    Mat S = S0;
    QuadraticForm q;
    q.field = F;
    std::vector<bool> done(n, false);
    size_t remaining = n;
    while (remaining > 0) {
        size_t piv = n;
        for (size_t i = 0; i < n; ++i)
            if (!done[i] && !S[i][i].is_zero() && (piv == n || height(S[i][i]) < height(S[piv][piv]))) piv = i;
        if (piv == n) {
            // all remaining diagonal entries vanish: use e_i + e_j
            size_t pi = n, pj = n;
            for (size_t i = 0; i < n && pi == n; ++i)
                for (size_t j = 0; j < n; ++j)
                    if (!done[i] && !done[j] && i != j && !S[i][j].is_zero()) {
                        pi = i;
                        pj = j;
                        break;
                    }
            if (pi == n) throw MathError("degenerate symmetric matrix");
            for (size_t k = 0; k < n; ++k) S[pi][k] += S[pj][k];
            for (size_t k = 0; k < n; ++k) S[k][pi] += S[k][pj];
            piv = pi;
        }
        Elem d = S[piv][piv];
        q.diag.push_back(square_reduce(d));
        Elem id = d.inv();
        for (size_t i = 0; i < n; ++i) {
            if (done[i] || i == piv || S[i][piv].is_zero()) continue;
            Elem f = S[i][piv] * id;
            for (size_t k = 0; k < n; ++k) S[i][k] -= f * S[piv][k];
            for (size_t k = 0; k < n; ++k) S[k][i] -= f * S[k][piv];
        }
        done[piv] = true;
        --remaining;
    }
    return q;
}

QuadraticForm pfister(const FieldPtr& F, const Vec& entries) {
    for (const auto& e : entries)
        if (e.is_zero()) throw UsageError("Pfister slots must be nonzero");
    if (F->characteristic() != 2) {
        Vec cur{F->one()};
        for (const auto& a0 : entries) {
            Elem a = F->embed(a0);
            Vec next = cur;
            for (const auto& c : cur) next.push_back(-(c * a));
            cur = std::move(next);
        }
        return diagonal_form(F, cur);
    }
    if (entries.empty()) throw UsageError("characteristic-2 Pfister forms need at least one slot");
    Vec cur{F->one()};
    for (size_t i = 0; i + 1 < entries.size(); ++i) {
        Elem a = F->embed(entries[i]);
        Vec next = cur;
        for (const auto& c : cur) next.push_back(c * a);
        cur = std::move(next);
    }
    Elem last = F->embed(entries.back());
    QuadraticForm q;
    q.field = F;
    for (const auto& c : cur) q.blocks.emplace_back(c, last / c);
    return q;
}

// ---------------------------------------------------------------- local criteria

namespace {

using HilbertFn = std::function<int(const Elem&, const Elem&)>;
using SquareFn = std::function<bool(const Elem&)>;

// Isotropy of a diagonal form over a non-archimedean local field from its Hilbert data.
bool local_isotropic(const Vec& a, const HilbertFn& hs, const SquareFn& sq, std::string& why) {
    const size_t n = a.size();
    if (n <= 1) {
        why = "dimension " + std::to_string(n);
        return false;
    }
    if (n >= 5) {
        why = "dimension >= 5 over a local field";
        return true;
    }
    const FieldPtr& F = a[0].field;
    Elem d = F->one();
    for (const auto& x : a) d *= x;
    int eps = 1;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) eps *= hs(a[i], a[j]);
    Elem m1 = -F->one();
    if (n == 2) {
        bool iso = sq(-d);
        why = iso ? "-det is a square" : "-det is not a square";
        return iso;
    }
    if (n == 3) {
        bool iso = hs(m1, -d) == eps;
        why = "Hasse invariant " + std::to_string(eps) + (iso ? " = " : " != ") + "(-1,-d)";
        return iso;
    }
    if (!sq(d)) {
        why = "dimension 4 with nonsquare determinant";
        return true;
    }
    bool iso = eps == hs(m1, m1);
    why = std::string("dimension 4, square determinant, Hasse invariant ") + (iso ? "= " : "!= ") + "(-1,-1)";
    return iso;
}

bool rational_square_at(const Rational& r, const Integer& p) {
    Integer u = numer(r) * denom(r);
    int64_t v = strip(u, p);
    if (v % 2) return false;
    if (p == 2) return mod(u, 8) == 1;
    return legendre(u, static_cast<int64_t>(p)) == 1;
}

// Hasse-Minkowski decision for a diagonal form over Q.
bool rational_local_decision(const Vec& a, std::vector<std::string>& cert) {
    const size_t n = a.size();
    if (n <= 1) {
        cert.push_back("dimension " + std::to_string(n));
        return false;
    }
    if (n == 2) {
        Rational r = -rat(a[0]) * rat(a[1]);
        bool iso = exact_root(numer(r) * denom(r), 2).has_value() && r > 0;
        cert.push_back(iso ? "-det is a square in Q" : "-det is not a square in Q");
        return iso;
    }
    bool pos = false, neg = false;
    for (const auto& x : a) (rat(x) > 0 ? pos : neg) = true;
    if (!(pos && neg)) {
        cert.push_back("definite at the real place");
        return false;
    }
    if (n >= 5) {
        cert.push_back("indefinite of dimension >= 5 (Meyer)");
        return true;
    }
    std::vector<Rational> rs;
    for (const auto& x : a) rs.push_back(rat(x));
    for (const Integer& p : bad_primes(rs)) {
        std::string why;
        HilbertFn hs = [&](const Elem& x, const Elem& y) { return hilbert_symbol(rat(x), rat(y), static_cast<int64_t>(p)); };
        SquareFn sq = [&](const Elem& x) { return rational_square_at(rat(x), p); };
        if (!local_isotropic(a, hs, sq, why)) {
            cert.push_back("anisotropic over Q_" + p.str() + ": " + why);
            return false;
        }
    }
    cert.push_back("isotropic at the real place and at every prime dividing 2 and the entries");
    return true;
}

std::optional<int64_t> to_i64(const Integer& n) {
    if (n > Integer(int64_t(1) << 40) || n < -Integer(int64_t(1) << 40)) return std::nullopt;
    return static_cast<int64_t>(n);
}

int64_t isqrt128(__int128 v) {
    if (v < 0) return -1;
    int64_t r = static_cast<int64_t>(std::sqrt(static_cast<long double>(v)));
    while (r > 0 && (__int128)r * r > v) --r;
    while ((__int128)(r + 1) * (r + 1) <= v) ++r;
    return (__int128)r * r == v ? r : -1;
}

// Integer search: coordinates in the order 0, 1, -1, 2, -2, ...; the last one is solved for.
std::optional<std::vector<int64_t>> int_search(const std::vector<int64_t>& c, int64_t radius) {
    const size_t n = c.size();
    std::vector<int64_t> order{0};
    for (int64_t k = 1; k <= radius; ++k) {
        order.push_back(k);
        order.push_back(-k);
    }
    std::vector<int64_t> x(n, 0);
    std::optional<std::vector<int64_t>> found;
    std::function<bool(size_t, __int128, bool)> rec = [&](size_t i, __int128 s, bool nz) -> bool {
        if (i + 1 == n) {
            __int128 rhs = -s;
            if (rhs % c[i] != 0) return false;
            int64_t z = isqrt128(rhs / c[i]);
            if (z < 0 || (z == 0 && !nz)) return false;
            x[i] = z;
            found = x;
            return true;
        }
        for (int64_t v : order) {
            x[i] = v;
            if (rec(i + 1, s + (__int128)c[i] * v * v, nz || v != 0)) return true;
        }
        return false;
    };
    if (n == 1) return std::nullopt;
    rec(0, 0, false);
    return found;
}

}  // namespace

std::optional<Vec> rational_witness_search(const QuadraticForm& q, int64_t radius) {
    require_diagonal(q, "rational_witness_search");
    if (kind_of(q.field) != FieldKind::Rationals) throw UsageError("rational_witness_search needs a form over Q");
    Integer L = 1;
    for (const auto& a : q.diag) L = lcm(L, Integer(denom(rat(a))));
    std::vector<int64_t> c;
    for (const auto& a : q.diag) {
        auto v = to_i64(Integer(numer(rat(a)) * (L / denom(rat(a)))));
        if (!v) return std::nullopt;
        c.push_back(*v);
    }
    auto x = int_search(c, radius);
    if (!x) return std::nullopt;
    Vec out;
    for (auto v : *x) out.push_back(q.field->from_int(v));
    return out;
}

// ---------------------------------------------------------------- isotropy engines

namespace {

IsotropyResult iso_rational(const QuadraticForm& q) {
    IsotropyResult res;
    const Vec& a = q.diag;
    res.isotropic = rational_local_decision(a, res.certificate);
    if (!res.isotropic) return res;
    const size_t n = a.size();
    const FieldPtr& F = q.field;
    if (n == 2) {
        auto r = is_nth_power(-a[1] / a[0], 2);
        res.witness = Vec{*r.witness, F->one()};
        return res;
    }
    // isotropic subforms first, smallest size and lexicographic order
    for (size_t k = 2; k <= n; ++k) {
        std::vector<bool> pick(n, false);
        std::fill(pick.begin(), pick.begin() + k, true);
        do {
            Vec sub;
            std::vector<size_t> idx;
            for (size_t i = 0; i < n; ++i)
                if (pick[i]) {
                    sub.push_back(a[i]);
                    idx.push_back(i);
                }
            std::vector<std::string> scratch;
            if (k < n && !rational_local_decision(sub, scratch)) continue;
            std::optional<Vec> w;
            if (k == 2) {
                auto r = is_nth_power(-sub[1] / sub[0], 2);
                w = Vec{*r.witness, F->one()};
            } else {
                int64_t radius = k == 3 ? 400 : k == 4 ? 40 : k == 5 ? 12 : 6;
                w = rational_witness_search(diagonal_form(F, sub), radius);
            }
            if (!w) continue;
            Vec full = zero_vec(F, n);
            for (size_t i = 0; i < k; ++i) full[idx[i]] = (*w)[i];
            res.witness = full;
            res.certificate.push_back("witness from the subform on coordinates " + [&] {
                std::vector<std::string> s;
                for (auto i : idx) s.push_back(std::to_string(i + 1));
                return join(s, ",");
            }());
            return res;
        } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    res.certificate.push_back("no witness inside the search box");
    return res;
}

// Exhaustive lexicographic search over a finite field on the first `use` coordinates.
std::optional<Vec> finite_search(const QuadraticForm& q, size_t use) {
    const FieldPtr& F = q.field;
    const Field& R = F->rep_node();
    const int64_t Q = R.order();
    const size_t n = q.dim();
    std::vector<Elem> elems;
    for (int64_t i = 0; i < Q; ++i) elems.push_back(F->ff_from_index(i));
    std::vector<int64_t> idx(use, 0);
    while (true) {
        size_t k = use;
        while (k > 0) {
            --k;
            if (++idx[k] < Q) break;
            idx[k] = 0;
            if (k == 0) return std::nullopt;
        }
        Vec v = zero_vec(F, n);
        for (size_t i = 0; i < use; ++i) v[i] = elems[idx[i]];
        if (q.evaluate(v).is_zero()) return v;
        bool all_zero = true;
        for (auto i : idx) all_zero = all_zero && i == 0;
        if (all_zero) return std::nullopt;
    }
}

IsotropyResult iso_finite(const QuadraticForm& q) {
    IsotropyResult res;
    const FieldPtr& F = q.field;
    const int64_t Q = F->rep_node().order();
    const size_t n = q.dim();
    if (F->characteristic() == 2) {
        size_t use = std::min<size_t>(n, 3);
        res.witness = finite_search(q, use);
        res.isotropic = res.witness.has_value();
        res.certificate.push_back(n >= 3 ? "Chevalley-Warning: dimension >= 3" : "exhaustive search");
        if (n >= 3 && !res.isotropic) throw MathError("search contradicts Chevalley-Warning");
        return res;
    }
    if (n <= 1) {
        res.certificate.push_back("dimension " + std::to_string(n));
        return res;
    }
    if (n == 2) {
        res.isotropic = is_square(-q.diag[0] * q.diag[1]);
        res.certificate.push_back(res.isotropic ? "-ab is a square (Euler criterion)" : "-ab is not a square (Euler criterion)");
    } else {
        res.isotropic = true;
        res.certificate.push_back("Chevalley-Warning: dimension >= 3");
    }
    if (!res.isotropic) return res;
    // lexicographic search with the last searched coordinate solved by a square-root table
    size_t use = std::min<size_t>(n, 3);
    std::vector<int64_t> root(Q, -1);
    for (int64_t y = Q - 1; y >= 0; --y) root[F->ff_index(F->ff_from_index(y) * F->ff_from_index(y))] = y;
    std::vector<Elem> el;
    for (int64_t i = 0; i < Q; ++i) el.push_back(F->ff_from_index(i));
    const Elem& last = q.diag[use - 1];
    std::vector<int64_t> idx(use - 1, 0);
    while (true) {
        Elem s = F->zero();
        bool nz = false;
        for (size_t i = 0; i + 1 < use; ++i) {
            s += q.diag[i] * el[idx[i]] * el[idx[i]];
            nz = nz || idx[i] != 0;
        }
        int64_t r = root[F->ff_index(-s / last)];
        if (r >= 0 && (nz || r != 0)) {
            Vec v = zero_vec(F, n);
            for (size_t i = 0; i + 1 < use; ++i) v[i] = el[idx[i]];
            v[use - 1] = el[r];
            res.witness = v;
            res.certificate.push_back("lexicographic search");
            return res;
        }
        size_t k = use - 1;
        bool done = true;
        while (k > 0) {
            --k;
            if (++idx[k] < Q) {
                done = false;
                break;
            }
            idx[k] = 0;
        }
        if (done) break;
    }
    throw MathError("finite-field search failed for an isotropic form");
}

IsotropyResult iso_padic(const QuadraticForm& q) {
    IsotropyResult res;
    const Vec& a = q.diag;
    std::string why;
    HilbertFn hs = [](const Elem& x, const Elem& y) { return padic_hilbert_symbol(x, y); };
    SquareFn sq = [](const Elem& x) { return padic_is_square(x); };
    res.isotropic = local_isotropic(a, hs, sq, why);
    res.certificate.push_back(why);
    if (!res.isotropic) return res;
    const FieldPtr& F = q.field;
    if (a.size() == 2) {
        auto r = is_nth_power(-a[1] / a[0], 2);
        if (r.witness) res.witness = Vec{*r.witness, F->one()};
        return res;
    }
    // rational entries: a rational zero is also a p-adic one
    Vec rs;
    for (const auto& x : a) {
        const auto& pr = std::get<PAdicRep>(x.rep);
        if (!pr.exact) return res;
        rs.push_back(Field::rationals()->from_rational(*pr.exact));
    }
    auto w = rational_witness_search(diagonal_form(Field::rationals(), rs), a.size() <= 3 ? 60 : 8);
    if (w) {
        Vec v;
        for (const auto& c : *w) v.push_back(F->from_rational(rat(c)));
        res.witness = v;
        res.certificate.push_back("rational witness");
    }
    return res;
}

IsotropyResult iso_laurent(const QuadraticForm& q) {
    IsotropyResult res;
    const FieldPtr& F = q.field;
    const Field& R = F->rep_node();
    if (F->characteristic() == 2) throw UnsupportedTower("Springer decomposition in characteristic 2");
    const FieldPtr& B = R.base();
    const std::string& t = R.variable();
    std::vector<LaurentSplit> sp;
    std::vector<size_t> part[2];
    Vec residue[2];
    for (size_t i = 0; i < q.diag.size(); ++i) {
        sp.push_back(laurent_split(q.diag[i]));
        int par = static_cast<int>(((sp.back().valuation % 2) + 2) % 2);
        part[par].push_back(i);
        residue[par].push_back(sp.back().unit);
    }
    IsotropyResult sub[2];
    for (int k = 0; k < 2; ++k) {
        if (residue[k].empty()) {
            sub[k].certificate.push_back("empty");
            continue;
        }
        sub[k] = isotropy(diagonal_form(B, residue[k]));
    }
    res.certificate.push_back("Springer over " + t + ": first residue " + diagonal_form(B, residue[0]).to_string() +
                              (sub[0].isotropic ? " isotropic" : " anisotropic") + ", second residue " +
                              diagonal_form(B, residue[1]).to_string() + (sub[1].isotropic ? " isotropic" : " anisotropic"));
    for (int k = 0; k < 2; ++k)
        for (const auto& c : sub[k].certificate) res.certificate.push_back("  [" + std::string(k ? "second" : "first") + "] " + c);
    res.isotropic = sub[0].isotropic || sub[1].isotropic;
    if (!res.isotropic) return res;
    int k = sub[0].isotropic ? 0 : 1;
    if (!sub[k].witness) {
        res.certificate.push_back("residue-level certificate only");
        return res;
    }
    // Hensel lift: keep the residue coordinates and solve for one of them
    const Vec& wbar = *sub[k].witness;
    const auto& ids = part[k];
    size_t j = 0;
    while (j < wbar.size() && wbar[j].is_zero()) ++j;
    Vec y(ids.size());
    for (size_t i = 0; i < ids.size(); ++i) y[i] = F->embed(wbar[i]);
    auto unit_of = [&](size_t i) { return F->embed(sp[ids[i]].unit) * sp[ids[i]].tail; };
    Elem s = F->zero();
    for (size_t i = 0; i < ids.size(); ++i)
        if (i != j) s += unit_of(i) * y[i] * y[i];
    auto r = is_nth_power(-s / unit_of(j), 2);
    if (!r.is_power || !r.witness) {
        res.certificate.push_back("residue-level certificate only");
        return res;
    }
    y[j] = *r.witness;
    Vec x = zero_vec(F, q.dim());
    for (size_t i = 0; i < ids.size(); ++i) {
        int64_t v = sp[ids[i]].valuation;
        int64_t h = (v - (((v % 2) + 2) % 2)) / 2;
        x[ids[i]] = y[i] * laurent_monomial(F, B->one(), -h);
    }
    res.witness = x;
    res.certificate.push_back("witness lifted from the residue form");
    return res;
}

}  // namespace

IsotropyResult isotropy(const QuadraticForm& q) {
    if (q.dim() == 0) throw UsageError("isotropy of the zero-dimensional form");
    switch (kind_of(q.field)) {
        case FieldKind::Rationals: require_diagonal(q, "isotropy over Q"); return iso_rational(q);
        case FieldKind::Finite: return iso_finite(q);
        case FieldKind::PAdic: require_diagonal(q, "p-adic isotropy"); return iso_padic(q);
        case FieldKind::Laurent: require_diagonal(q, "Laurent isotropy"); return iso_laurent(q);
        default: throw UnsupportedTower("isotropy over " + q.field->to_string());
    }
}

// ---------------------------------------------------------------- invariants

int64_t signature(const QuadraticForm& q) {
    require_diagonal(q, "signature");
    if (kind_of(q.field) != FieldKind::Rationals) throw UsageError("signature needs a form over Q");
    int64_t s = 0;
    for (const auto& a : q.diag) s += rat(a) > 0 ? 1 : -1;
    return s;
}

Elem signed_discriminant(const QuadraticForm& q) {
    require_diagonal(q, "signed discriminant");
    const size_t n = q.dim();
    Elem d = q.field->one();
    for (const auto& a : q.diag) d *= a;
    if ((n * (n - 1) / 2) % 2) d = -d;
    return d;
}

std::vector<LocalData> local_invariants(const QuadraticForm& q) {
    require_diagonal(q, "local invariants");
    if (kind_of(q.field) != FieldKind::Rationals) throw UsageError("local invariants need a form over Q");
    // square classes as integers n*d
    std::vector<Rational> rs;
    std::vector<Integer> sq;
    for (const auto& a : q.diag) {
        rs.push_back(rat(a));
        sq.push_back(numer(rat(a)) * denom(rat(a)));
    }
    std::vector<Integer> places{kRealPlace};
    for (const auto& p : bad_primes(rs)) places.push_back(p);
    const size_t n = rs.size();
    const int64_t m = static_cast<int64_t>(n / 2);
    auto symbol = [](const Integer& a, const Integer& b, const Integer& v) {
        if (v == kRealPlace) return (a < 0 && b < 0) ? -1 : 1;
        return hilbert_symbol(a, b, v);
    };
    std::vector<LocalData> out;
    for (const Integer& v : places) {
        int s = 1;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) s *= symbol(sq[i], sq[j], v);
        int corr = ((m * (m - 1) / 2) % 2) ? symbol(Integer(-1), Integer(-1), v) : 1;
        out.push_back({v, s, s * corr});
    }
    return out;
}

std::string ILevel::text() const {
    if (zero()) return "class 0";
    return complete ? std::to_string(level) : ">=" + std::to_string(level) + " unverified";
}

namespace {

ILevel level_zero(std::string why) {
    ILevel L;
    L.level = ILevel::kZero;
    L.certificate.push_back(std::move(why));
    return L;
}

ILevel level_of(int n, std::string why, bool complete = true) {
    ILevel L;
    L.level = n;
    L.complete = complete;
    L.certificate.push_back(std::move(why));
    return L;
}

ILevel level_rational(const QuadraticForm& q) {
    const size_t n = q.dim();
    if (n % 2) return level_of(0, "odd dimension");
    if (!is_square(signed_discriminant(q))) return level_of(1, "even dimension, signed discriminant not a square");
    std::vector<LocalData> loc;
    try {
        loc = local_invariants(q);
    } catch (const Undecided& e) {
        return level_of(2, std::string("trivial signed discriminant; Clifford data undecided: ") + e.what(), false);
    }
    for (const auto& d : loc)
        if (d.normalized != 1)
            return level_of(2, "Clifford invariant nontrivial at " + (d.place == kRealPlace ? std::string("infinity") : d.place.str()));
    int64_t s = signature(q);
    if (s == 0) return level_zero("I^3 form with signature 0 (I^3(Q) is torsion free)");
    int v = 0;
    while (s % 2 == 0) {
        s /= 2;
        ++v;
    }
    return level_of(v, "trivial Clifford invariant at all places, signature " + std::to_string(signature(q)));
}

ILevel level_padic(const QuadraticForm& q) {
    const size_t n = q.dim();
    if (n % 2) return level_of(0, "odd dimension");
    if (!padic_is_square(signed_discriminant(q))) return level_of(1, "signed discriminant not a square");
    const Vec& a = q.diag;
    int s = 1;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) s *= padic_hilbert_symbol(a[i], a[j]);
    int64_t m = static_cast<int64_t>(n / 2);
    Elem m1 = -q.field->one();
    if ((m * (m - 1) / 2) % 2) s *= padic_hilbert_symbol(m1, m1);
    if (s != 1) return level_of(2, "Clifford invariant nontrivial");
    return level_zero("trivial Clifford invariant; I^3 of a p-adic field vanishes");
}

ILevel level_finite(const QuadraticForm& q) {
    const FieldPtr& F = q.field;
    if (F->characteristic() == 2) {
        if (!q.diag.empty()) throw UsageError("characteristic-2 levels need a block form");
        auto arf = arf_invariant(q);
        if (*arf.reduced == 0) return level_zero("Arf invariant 0");
        return level_of(0, "Arf invariant nonzero");
    }
    if (q.dim() % 2) return level_of(0, "odd dimension");
    if (!is_square(signed_discriminant(q))) return level_of(1, "signed discriminant not a square");
    return level_zero("trivial signed discriminant; I^2 of a finite field vanishes");
}

ILevel combine_min(const ILevel& a, const ILevel& b, std::string head) {
    ILevel L;
    L.level = std::min(a.level, b.level);
    L.complete = (a.level != L.level || a.complete) && (b.level != L.level || b.complete);
    L.certificate.push_back(std::move(head));
    return L;
}

}  // namespace

ILevel i_level(const QuadraticForm& q) {
    if (q.dim() == 0) return level_zero("zero form");
    const FieldPtr& F = q.field;
    switch (kind_of(F)) {
        case FieldKind::Rationals: return level_rational(q);
        case FieldKind::PAdic: return level_padic(q);
        case FieldKind::Finite: return level_finite(q);
        case FieldKind::Laurent: {
            if (F->characteristic() == 2) throw UnsupportedTower("levels over characteristic-2 Laurent towers");
            const Field& R = F->rep_node();
            const FieldPtr& B = R.base();
            Vec r0, r1;
            for (const auto& a : q.diag) {
                auto sp = laurent_split(a);
                (sp.valuation % 2 ? r1 : r0).push_back(sp.unit);
            }
            QuadraticForm q1 = diagonal_form(B, r0), q2 = diagonal_form(B, r1);
            ILevel sum = i_level(orthogonal_sum(q1, q2));
            ILevel second = i_level(q2);
            if (second.level != ILevel::kZero) second.level += 1;
            ILevel L = combine_min(sum, second, "Laurent layer " + R.variable() + ": level = min(level(q1+q2), level(q2)+1)");
            for (const auto& c : sum.certificate) L.certificate.push_back("  [q1+q2] " + c);
            for (const auto& c : second.certificate) L.certificate.push_back("  [q2] " + c);
            return L;
        }
        default: {
            ILevel L = level_of(q.dim() % 2 ? 0 : 1, "parity only", false);
            L.certificate.push_back("higher levels are not certified over " + F->to_string());
            return L;
        }
    }
}

ArfValue arf_invariant(const QuadraticForm& q) {
    const FieldPtr& F = q.field;
    if (F->characteristic() != 2) throw UsageError("Arf invariant needs characteristic 2");
    if (!q.diag.empty()) throw UsageError("Arf invariant needs a nonsingular block form (even dimension)");
    ArfValue out{F->zero(), std::nullopt};
    for (const auto& [a, b] : q.blocks) out.value += a * b;
    if (kind_of(F) == FieldKind::Finite) {
        // k / {x^2 + x} is detected by the absolute trace
        Elem tr = F->zero(), c = out.value;
        for (int i = 0; i < F->rep_node().degree(); ++i) {
            tr += c;
            c = c * c;
        }
        out.reduced = tr.is_zero() ? 0 : 1;
    }
    return out;
}

// ---------------------------------------------------------------- Witt classes

namespace {

bool exact_tower(const FieldPtr& F) {
    auto k = kind_of(F);
    return k == FieldKind::Rationals || (k == FieldKind::Finite && F->characteristic() != 2);
}

// Splits off the hyperbolic plane through an isotropic vector of a diagonal form.
QuadraticForm split_plane(const QuadraticForm& q, const Vec& v) {
    const FieldPtr& F = q.field;
    const size_t n = q.dim();
    size_t j = 0;
    while (j < n && (q.diag[j] * v[j]).is_zero()) ++j;
    // b(x, y) = sum a_i x_i y_i; complement of span(v, e_j)
    Mat C(2, zero_vec(F, n));
    for (size_t i = 0; i < n; ++i) {
        C[0][i] = q.diag[i] * v[i];
        C[1][i] = i == j ? q.diag[i] : F->zero();
    }
    auto basis = kernel(C);
    if (basis.empty()) return QuadraticForm{F, {}, {}};
    Mat S(basis.size(), zero_vec(F, basis.size()));
    for (size_t r = 0; r < basis.size(); ++r)
        for (size_t c = 0; c < basis.size(); ++c) {
            Elem s = F->zero();
            for (size_t i = 0; i < n; ++i) s += q.diag[i] * basis[r][i] * basis[c][i];
            S[r][c] = s;
        }
    return diagonalize_symmetric(S);
}

}  // namespace

WittClass::WittClass(QuadraticForm q) : rep_(std::move(q)) {
    // <a, b> with -a/b a square is a hyperbolic plane over any tower
    if (rep_.blocks.empty() && rep_.field->characteristic() != 2 && rep_.dim() <= 64) {
        Vec& d = rep_.diag;
        for (size_t i = 0; i < d.size(); ++i)
            for (size_t j = i + 1; j < d.size(); ++j) {
                bool plane = (d[i] + d[j]).is_zero();
                if (!plane) {
                    try {
                        plane = is_square(-d[i] / d[j]);
                    } catch (const std::runtime_error&) {
                    }
                }
                if (!plane) continue;
                d.erase(d.begin() + static_cast<std::ptrdiff_t>(j));
                d.erase(d.begin() + static_cast<std::ptrdiff_t>(i));
                ++removed_;
                --i;
                break;
            }
    }
    if (!exact_tower(rep_.field) || !rep_.blocks.empty() || rep_.dim() > 8) return;
    while (rep_.dim() > 0) {
        IsotropyResult iso;
        try {
            iso = isotropy(rep_);
        } catch (const Undecided&) {
            return;
        }
        if (!iso.isotropic) {
            anisotropic_ = true;
            return;
        }
        if (!iso.witness) return;
        rep_ = split_plane(rep_, *iso.witness);
        ++removed_;
    }
    anisotropic_ = true;
}

ILevel WittClass::level() const { return i_level(rep_); }

bool WittClass::is_zero() const {
    if (rep_.dim() == 0) return true;
    if (anisotropic_) return false;
    return level().zero();
}

WittClass witt_class(const QuadraticForm& q) { return WittClass(q); }

WittClass witt_add(const WittClass& a, const WittClass& b) { return WittClass(orthogonal_sum(a.rep_, b.rep_)); }

WittClass witt_neg(const WittClass& a) {
    if (a.rep_.dim() == 0) return a;
    return WittClass(scaled(-a.field()->one(), a.rep_));
}

WittClass bilinear_mult(const Vec& b, const WittClass& c) {
    QuadraticForm acc{c.field(), {}, {}};
    for (const auto& x : b) acc = orthogonal_sum(acc, scaled(c.field()->embed(x), c.representative()));
    return WittClass(acc);
}

bool witt_equal(const WittClass& a, const WittClass& b) { return witt_add(a, witt_neg(b)).is_zero(); }

}  // namespace whitehead
