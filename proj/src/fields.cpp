#include "whitehead/fields.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace whitehead {

namespace {

using Poly64 = std::vector<int64_t>;

void trim(Poly64& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

// Remainder of f modulo monic g over F_p.
Poly64 poly_rem(Poly64 f, const Poly64& g, int64_t p) {
    trim(f);
    const size_t dg = g.size() - 1;
    while (f.size() > dg && !f.empty()) {
        int64_t c = f.back();
        size_t shift = f.size() - 1 - dg;
        for (size_t i = 0; i <= dg; ++i) f[shift + i] = mod64(f[shift + i] - c * g[i], p);
        trim(f);
    }
    return f;
}

bool has_factor_of_degree(const Poly64& f, int d, int64_t p) {
    // enumerate monic polynomials of degree d
    int64_t count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (int64_t idx = 0; idx < count; ++idx) {
        Poly64 g(d + 1, 0);
        int64_t t = idx;
        for (int i = 0; i < d; ++i) {
            g[i] = t % p;
            t /= p;
        }
        g[d] = 1;
        if (poly_rem(f, g, p).empty()) return true;
    }
    return false;
}

Poly64 find_irreducible(int64_t p, int e) {
    int64_t count = 1;
    for (int i = 0; i < e; ++i) count *= p;
    for (int64_t idx = 1; idx < count; ++idx) {
        Poly64 f(e + 1, 0);
        int64_t t = idx;
        for (int i = 0; i < e; ++i) {
            f[i] = t % p;
            t /= p;
        }
        f[e] = 1;
        if (f[0] == 0) continue;
        bool irreducible = true;
        for (int d = 1; d <= e / 2 && irreducible; ++d)
            if (has_factor_of_degree(f, d, p)) irreducible = false;
        if (irreducible) return f;
    }
    throw MathError("no irreducible polynomial found");
}

bool valid_identifier(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

// Cyclotomic polynomial coefficients (low degree first).
std::vector<Integer> cyclotomic(int64_t m) {
    // Phi_m = prod_{d | m} (X^d - 1)^{mu(m/d)}, computed by exact division.
    std::vector<Integer> num{Integer(-1)};
    num.resize(m + 1, 0);
    num[0] = -1;
    num[m] = 1;
    auto divide = [](std::vector<Integer> f, const std::vector<Integer>& g) {
        // g monic
        std::vector<Integer> q(f.size() >= g.size() ? f.size() - g.size() + 1 : 1, 0);
        while (f.size() >= g.size()) {
            Integer c = f.back();
            size_t shift = f.size() - g.size();
            q[shift] = c;
            for (size_t i = 0; i < g.size(); ++i) f[shift + i] -= c * g[i];
            f.pop_back();
        }
        return q;
    };
    std::vector<Integer> f = num;
    for (int64_t d = 1; d < m; ++d) {
        if (m % d) continue;
        f = divide(f, cyclotomic(d));
    }
    return f;
}

}  // namespace

// ---------------------------------------------------------------- construction

FieldPtr Field::self() const {
    auto s = self_.lock();
    if (!s) throw MathError("field used after release");
    return s;
}

static std::shared_ptr<Field> make_node(FieldKind k) {
    auto f = std::make_shared<Field>(Field::Tag{}, k);
    return f;
}

FieldPtr Field::rationals() {
    auto f = make_node(FieldKind::Rationals);
    f->name_ = "Q";
    f->self_ = f;
    return f;
}

FieldPtr Field::finite(int64_t q) {
    auto pp = prime_power(q);
    if (!pp) throw UsageError("F(" + std::to_string(q) + "): order is not a prime power");
    if (q > (int64_t(1) << 31)) throw UnsupportedTower("finite fields of order above 2^31");
    auto f = make_node(FieldKind::Finite);
    f->p_ = pp->first;
    f->e_ = pp->second;
    f->q_ = q;
    f->modulus_ = f->e_ == 1 ? Poly64{0, 1} : find_irreducible(f->p_, f->e_);
    f->name_ = "F(" + std::to_string(q) + ")";
    f->self_ = f;
    return f;
}

FieldPtr Field::padic(int64_t p, int precision) {
    if (!is_prime64(p)) throw UsageError("Qp(" + std::to_string(p) + "): not a prime");
    if (precision < 1) throw UsageError("p-adic precision must be positive");
    auto f = make_node(FieldKind::PAdic);
    f->p_ = p;
    f->precision_ = precision;
    f->name_ = "Qp(" + std::to_string(p) + (precision == 8 ? "" : "," + std::to_string(precision)) + ")";
    f->self_ = f;
    return f;
}

FieldPtr Field::laurent(FieldPtr base, std::string var, int precision) {
    if (!valid_identifier(var)) throw UsageError("invalid variable name '" + var + "'");
    if (var == "zeta" || var == "g" || var.rfind("zeta_", 0) == 0)
        throw UsageError("variable name '" + var + "' is reserved");
    if (base->named(var)) throw UsageError("variable '" + var + "' already used in " + base->to_string());
    if (precision < 1) throw UsageError("Laurent precision must be positive");
    auto f = make_node(FieldKind::Laurent);
    f->base_ = base;
    f->var_ = var;
    f->precision_ = precision;
    f->p_ = base->p_;
    f->name_ = base->to_string() + "((" + var + (precision == 16 ? "" : "," + std::to_string(precision)) + "))";
    f->self_ = f;
    return f;
}

FieldPtr Field::adjoin_root(FieldPtr base, int64_t m) {
    if (m < 1) throw UsageError("root order must be positive");
    auto f = make_node(FieldKind::RootAdjoined);
    f->base_ = base;
    f->m_ = m;
    f->p_ = base->p_;
    f->name_ = base->to_string() + "[zeta_" + std::to_string(m) + "]";
    auto r = primitive_root_of_unity(base, m);
    if (r.root) {
        f->trivial_ = true;
        f->zeta_ = *r.root;
        f->self_ = f;
        return f;
    }
    const Field& bot = base->bottom();
    bool q_chain = bot.kind() == FieldKind::Rationals;
    for (const Field* n = base.get(); n; n = n->base_.get())
        if (n->kind_ == FieldKind::RootAdjoined) q_chain = false;
    if (bot.kind() == FieldKind::Finite) {
        int64_t q = bot.order();
        std::string hint;
        if (gcd64(q, m) == 1) {
            int64_t k = 1, t = q % m;
            while (t != 1 % m) {
                t = t * (q % m) % m;
                ++k;
            }
            hint = "; use F(" + ipow(Integer(q), k).str() + ") instead";
        }
        throw UsageError("inconsistent root adjunction over " + base->to_string() + ": " + r.reason + hint);
    }
    if (!q_chain)
        throw UnsupportedTower("root adjunction [zeta_" + std::to_string(m) + "] over " + base->to_string() +
                               ": " + r.reason);
    auto phi = cyclotomic(m);
    for (auto& c : phi) f->minpoly_.push_back(base->from_int(c));
    f->self_ = f;
    return f;
}

int64_t Field::characteristic() const {
    const Field& b = bottom();
    return b.kind_ == FieldKind::Finite ? b.p_ : 0;
}

int64_t Field::prime() const { return bottom().p_; }

const Field& Field::rep_node() const {
    const Field* n = this;
    while (n->kind_ == FieldKind::RootAdjoined && n->trivial_) n = n->base_.get();
    return *n;
}

const Field& Field::bottom() const {
    const Field* n = this;
    while (n->base_) n = n->base_.get();
    return *n;
}

int Field::laurent_depth() const {
    int d = 0;
    for (const Field* n = this; n; n = n->base_.get())
        if (n->kind_ == FieldKind::Laurent) ++d;
    return d;
}

std::vector<std::pair<std::string, FieldPtr>> Field::residue_chain() const {
    std::vector<std::pair<std::string, FieldPtr>> out;
    for (const Field* n = this; n; n = n->base_.get())
        if (n->kind_ == FieldKind::Laurent) out.emplace_back(n->var_, n->base_);
    return out;
}

bool Field::contains(const Field& sub) const {
    for (const Field* n = this; n; n = n->base_.get())
        if (n->same(sub)) return true;
    const Field& b = bottom();
    if (sub.kind() == FieldKind::Rationals) return b.kind() == FieldKind::PAdic;
    if (sub.kind() == FieldKind::Finite && sub.degree() == 1) return b.kind() == FieldKind::Finite && b.prime() == sub.prime();
    return false;
}

// ---------------------------------------------------------------- p-adic internals

namespace {

struct PCtx {
    Integer P;
    int64_t N;
};

Integer ppow(const PCtx& c, int64_t k) { return ipow(c.P, static_cast<uint64_t>(std::max<int64_t>(k, 0))); }

PAdicRep padic_exact(const PCtx& c, const Rational& r) {
    PAdicRep out;
    out.exact = r;
    out.abs_prec = kExact;
    if (r == 0) {
        out.unit = 0;
        return out;
    }
    Integer a = numer(r), b = denom(r);
    int64_t va = strip(a, c.P), vb = strip(b, c.P);
    out.val = va - vb;
    Integer M = ppow(c, c.N);
    out.unit = mod(a * mod_inv(b, M), M);
    return out;
}

bool padic_is_zero(const PAdicRep& r) {
    if (r.exact) return *r.exact == 0;
    return r.unit == 0;
}

int64_t padic_rel(const PCtx& c, const PAdicRep& r) { return r.exact ? c.N : r.abs_prec - r.val; }

Integer padic_unit_mod(const PCtx& c, const PAdicRep& r, int64_t k) {
    if (r.exact) {
        Integer a = numer(*r.exact), b = denom(*r.exact);
        strip(a, c.P);
        strip(b, c.P);
        Integer M = ppow(c, k);
        return mod(a * mod_inv(b, M), M);
    }
    if (k > r.abs_prec - r.val) throw PrecisionExhausted("p-adic unit known only to " +
                                                         std::to_string(r.abs_prec - r.val) + " digits");
    return mod(r.unit, ppow(c, k));
}

PAdicRep padic_add(const PCtx& c, const PAdicRep& a, const PAdicRep& b) {
    if (a.exact && b.exact) return padic_exact(c, *a.exact + *b.exact);
    if (a.exact && *a.exact == 0) return b;
    if (b.exact && *b.exact == 0) return a;
    int64_t abs = std::min(a.abs_prec, b.abs_prec);
    std::vector<const PAdicRep*> terms;
    for (const PAdicRep* t : {&a, &b})
        if (!padic_is_zero(*t) && t->val < abs) terms.push_back(t);
    PAdicRep out;
    out.abs_prec = abs;
    if (terms.empty()) {
        out.unit = 0;
        out.val = abs;
        return out;
    }
    int64_t vmin = terms[0]->val;
    for (auto* t : terms) vmin = std::min(vmin, t->val);
    Integer M = ppow(c, abs - vmin);
    Integer S = 0;
    for (auto* t : terms) S += padic_unit_mod(c, *t, abs - t->val) * ppow(c, t->val - vmin);
    S = mod(S, M);
    if (S == 0) {
        out.unit = 0;
        out.val = abs;
        return out;
    }
    int64_t k = strip(S, c.P);
    out.val = vmin + k;
    out.unit = mod(S, ppow(c, abs - out.val));
    return out;
}

PAdicRep padic_mul(const PCtx& c, const PAdicRep& a, const PAdicRep& b) {
    if (a.exact && b.exact) return padic_exact(c, *a.exact * *b.exact);
    if ((a.exact && *a.exact == 0) || (b.exact && *b.exact == 0)) return padic_exact(c, 0);
    PAdicRep out;
    bool za = padic_is_zero(a), zb = padic_is_zero(b);
    if (za || zb) {
        int64_t k = (za ? a.abs_prec : a.val) + (zb ? b.abs_prec : b.val);
        out.unit = 0;
        out.val = k;
        out.abs_prec = k;
        return out;
    }
    int64_t rel = std::min(padic_rel(c, a), padic_rel(c, b));
    out.val = a.val + b.val;
    out.unit = mod(padic_unit_mod(c, a, rel) * padic_unit_mod(c, b, rel), ppow(c, rel));
    out.abs_prec = out.val + rel;
    return out;
}

PAdicRep padic_neg(const PCtx& c, const PAdicRep& a) {
    if (a.exact) return padic_exact(c, -*a.exact);
    PAdicRep out = a;
    if (a.unit != 0) out.unit = mod(-a.unit, ppow(c, a.abs_prec - a.val));
    return out;
}

PAdicRep padic_inv(const PCtx& c, const PAdicRep& a) {
    if (a.exact) {
        if (*a.exact == 0) throw MathError("division by zero");
        return padic_exact(c, 1 / *a.exact);
    }
    if (a.unit == 0) throw PrecisionExhausted("inverse of O(p^" + std::to_string(a.abs_prec) + ")");
    int64_t rel = a.abs_prec - a.val;
    PAdicRep out;
    out.val = -a.val;
    out.unit = mod_inv(a.unit, ppow(c, rel));
    out.abs_prec = out.val + rel;
    return out;
}

}  // namespace

// ---------------------------------------------------------------- finite fields

Elem Field::ff_from_index(int64_t idx) const {
    const Field& R = rep_node();
    if (R.kind_ != FieldKind::Finite) throw MathError("not a finite field");
    return Elem(self(), mod64(idx, R.q_));
}

int64_t Field::ff_index(const Elem& x) const { return std::get<int64_t>(x.rep); }

namespace {

Poly64 ff_decode(const Field& R, int64_t idx) {
    Poly64 v(R.degree(), 0);
    for (int i = 0; i < R.degree(); ++i) {
        v[i] = idx % R.prime();
        idx /= R.prime();
    }
    return v;
}

int64_t ff_encode(const Field& R, const Poly64& v) {
    int64_t idx = 0;
    for (int i = R.degree() - 1; i >= 0; --i) idx = idx * R.prime() + (i < (int)v.size() ? v[i] : 0);
    return idx;
}

int64_t ff_mul_idx(const Field& R, int64_t a, int64_t b) {
    if (R.degree() == 1) return static_cast<int64_t>(static_cast<__int128>(a) * b % R.prime());
    Poly64 x = ff_decode(R, a), y = ff_decode(R, b);
    Poly64 z(x.size() + y.size(), 0);
    for (size_t i = 0; i < x.size(); ++i)
        for (size_t j = 0; j < y.size(); ++j) z[i + j] = (z[i + j] + x[i] * y[j]) % R.prime();
    return ff_encode(R, poly_rem(z, R.modulus(), R.prime()));
}

int64_t ff_add_idx(const Field& R, int64_t a, int64_t b, int sign) {
    if (R.degree() == 1) return mod64(a + sign * b, R.prime());
    Poly64 x = ff_decode(R, a), y = ff_decode(R, b);
    for (size_t i = 0; i < x.size(); ++i) x[i] = mod64(x[i] + sign * y[i], R.prime());
    return ff_encode(R, x);
}

int64_t ff_pow_idx(const Field& R, int64_t a, int64_t e) {
    int64_t r = 1;
    while (e > 0) {
        if (e & 1) r = ff_mul_idx(R, r, a);
        a = ff_mul_idx(R, a, a);
        e >>= 1;
    }
    return r;
}

}  // namespace

// ---------------------------------------------------------------- Laurent internals

namespace {

LaurentRep lr_normalize(LaurentRep r) {
    // drop terms beyond the precision order
    if (r.order != kExact) {
        int64_t keep = r.order - r.start;
        if (keep < 0) keep = 0;
        if (static_cast<int64_t>(r.coef.size()) > keep) r.coef.resize(keep);
    }
    size_t lead = 0;
    while (lead < r.coef.size() && r.coef[lead].is_zero()) ++lead;
    if (lead) {
        r.coef.erase(r.coef.begin(), r.coef.begin() + lead);
        r.start += static_cast<int64_t>(lead);
    }
    while (!r.coef.empty() && r.coef.back().is_zero()) r.coef.pop_back();
    if (r.coef.empty()) r.start = 0;
    return r;
}

Elem lr_coef(const Field& B, const LaurentRep& r, int64_t e) {
    int64_t i = e - r.start;
    if (i < 0 || i >= static_cast<int64_t>(r.coef.size())) return B.zero();
    return r.coef[i];
}

}  // namespace

// ---------------------------------------------------------------- arithmetic dispatch

static PCtx ctx_of(const Field& R) { return PCtx{Integer(R.prime()), R.precision()}; }

bool Field::is_zero(const Elem& a) const {
    const Field& R = rep_node();
    switch (R.kind_) {
        case FieldKind::Rationals: return std::get<Rational>(a.rep) == 0;
        case FieldKind::Finite: return std::get<int64_t>(a.rep) == 0;
        case FieldKind::PAdic: return padic_is_zero(std::get<PAdicRep>(a.rep));
        case FieldKind::Laurent: return std::get<LaurentRep>(a.rep).coef.empty();
        case FieldKind::RootAdjoined: {
            for (auto& c : std::get<ExtRep>(a.rep).coef)
                if (!c.is_zero()) return false;
            return true;
        }
    }
    return false;
}

Elem Field::add(const Elem& a, const Elem& b) const {
    const Field& R = rep_node();
    switch (R.kind_) {
        case FieldKind::Rationals: return Elem(self(), std::get<Rational>(a.rep) + std::get<Rational>(b.rep));
        case FieldKind::Finite:
            return Elem(self(), ff_add_idx(R, std::get<int64_t>(a.rep), std::get<int64_t>(b.rep), 1));
        case FieldKind::PAdic:
            return Elem(self(), padic_add(ctx_of(R), std::get<PAdicRep>(a.rep), std::get<PAdicRep>(b.rep)));
        case FieldKind::Laurent: {
            const auto& x = std::get<LaurentRep>(a.rep);
            const auto& y = std::get<LaurentRep>(b.rep);
            LaurentRep z;
            z.order = std::min(x.order, y.order);
            if (x.coef.empty() && y.coef.empty()) return Elem(self(), z);
            int64_t lo = x.coef.empty() ? y.start : (y.coef.empty() ? x.start : std::min(x.start, y.start));
            int64_t hi = std::max(x.start + (int64_t)x.coef.size(), y.start + (int64_t)y.coef.size());
            if (z.order != kExact) hi = std::min(hi, z.order);
            z.start = lo;
            const Field& B = *R.base_;
            for (int64_t e = lo; e < hi; ++e) z.coef.push_back(lr_coef(B, x, e) + lr_coef(B, y, e));
            return Elem(self(), lr_normalize(std::move(z)));
        }
        case FieldKind::RootAdjoined: {
            const auto& x = std::get<ExtRep>(a.rep).coef;
            const auto& y = std::get<ExtRep>(b.rep).coef;
            ExtRep z;
            for (size_t i = 0; i < x.size(); ++i) z.coef.push_back(x[i] + y[i]);
            return Elem(self(), z);
        }
    }
    throw MathError("unreachable");
}

Elem Field::neg(const Elem& a) const {
    const Field& R = rep_node();
    switch (R.kind_) {
        case FieldKind::Rationals: return Elem(self(), Rational(-std::get<Rational>(a.rep)));
        case FieldKind::Finite: return Elem(self(), ff_add_idx(R, 0, std::get<int64_t>(a.rep), -1));
        case FieldKind::PAdic: return Elem(self(), padic_neg(ctx_of(R), std::get<PAdicRep>(a.rep)));
        case FieldKind::Laurent: {
            LaurentRep z = std::get<LaurentRep>(a.rep);
            for (auto& c : z.coef) c = -c;
            return Elem(self(), z);
        }
        case FieldKind::RootAdjoined: {
            ExtRep z = std::get<ExtRep>(a.rep);
            for (auto& c : z.coef) c = -c;
            return Elem(self(), z);
        }
    }
    throw MathError("unreachable");
}

Elem Field::mul(const Elem& a, const Elem& b) const {
    const Field& R = rep_node();
    switch (R.kind_) {
        case FieldKind::Rationals: return Elem(self(), std::get<Rational>(a.rep) * std::get<Rational>(b.rep));
        case FieldKind::Finite:
            return Elem(self(), ff_mul_idx(R, std::get<int64_t>(a.rep), std::get<int64_t>(b.rep)));
        case FieldKind::PAdic:
            return Elem(self(), padic_mul(ctx_of(R), std::get<PAdicRep>(a.rep), std::get<PAdicRep>(b.rep)));
        case FieldKind::Laurent: {
            const auto& x = std::get<LaurentRep>(a.rep);
            const auto& y = std::get<LaurentRep>(b.rep);
            LaurentRep z;
            bool zx = x.coef.empty(), zy = y.coef.empty();
            if ((zx && x.order == kExact) || (zy && y.order == kExact)) return Elem(self(), z);
            if (zx || zy) {
                z.order = (zx ? x.order : x.start) + (zy ? y.order : y.start);
                return Elem(self(), z);
            }
            int64_t o1 = x.order == kExact ? kExact : x.order + y.start;
            int64_t o2 = y.order == kExact ? kExact : y.order + x.start;
            z.order = std::min(o1, o2);
            z.start = x.start + y.start;
            int64_t len = (int64_t)x.coef.size() + (int64_t)y.coef.size() - 1;
            if (z.order != kExact) len = std::min(len, z.order - z.start);
            if (len < 0) len = 0;
            const Field& B = *R.base_;
            z.coef.assign(len, B.zero());
            for (size_t i = 0; i < x.coef.size(); ++i) {
                if ((int64_t)i >= len) break;
                for (size_t j = 0; j < y.coef.size() && (int64_t)(i + j) < len; ++j)
                    z.coef[i + j] += x.coef[i] * y.coef[j];
            }
            return Elem(self(), lr_normalize(std::move(z)));
        }
        case FieldKind::RootAdjoined: {
            const auto& x = std::get<ExtRep>(a.rep).coef;
            const auto& y = std::get<ExtRep>(b.rep).coef;
            const Field& B = *R.base_;
            size_t D = R.minpoly_.size() - 1;
            std::vector<Elem> z(2 * D, B.zero());
            for (size_t i = 0; i < D; ++i)
                for (size_t j = 0; j < D; ++j) z[i + j] += x[i] * y[j];
            for (size_t k = z.size(); k-- > D;) {
                Elem c = z[k];
                if (c.is_zero()) continue;
                for (size_t i = 0; i <= D; ++i) z[k - D + i] -= c * R.minpoly_[i];
            }
            z.resize(D);
            return Elem(self(), ExtRep{z});
        }
    }
    throw MathError("unreachable");
}

Elem Field::invert(const Elem& a) const {
    const Field& R = rep_node();
    switch (R.kind_) {
        case FieldKind::Rationals: {
            const auto& r = std::get<Rational>(a.rep);
            if (r == 0) throw MathError("division by zero");
            return Elem(self(), Rational(1 / r));
        }
        case FieldKind::Finite: {
            int64_t x = std::get<int64_t>(a.rep);
            if (x == 0) throw MathError("division by zero");
            return Elem(self(), ff_pow_idx(R, x, R.q_ - 2));
        }
        case FieldKind::PAdic: return Elem(self(), padic_inv(ctx_of(R), std::get<PAdicRep>(a.rep)));
        case FieldKind::Laurent: {
            const auto& x = std::get<LaurentRep>(a.rep);
            if (x.coef.empty()) {
                if (x.order == kExact) throw MathError("division by zero");
                throw PrecisionExhausted("inverse of O(" + R.var_ + "^" + std::to_string(x.order) + ")");
            }
            LaurentRep z;
            z.start = -x.start;
            Elem d0 = x.coef[0].inv();
            if (x.coef.size() == 1 && x.order == kExact) {
                z.coef = {d0};
                return Elem(self(), z);
            }
            int64_t n = R.precision_;
            if (x.order != kExact) n = std::min<int64_t>(n, x.order - x.start);
            z.order = z.start + n;
            const Field& B = *R.base_;
            std::vector<Elem> d(n, B.zero());
            if (n > 0) d[0] = d0;
            for (int64_t k = 1; k < n; ++k) {
                Elem s = B.zero();
                for (int64_t i = 1; i <= k && i < (int64_t)x.coef.size(); ++i) s += x.coef[i] * d[k - i];
                d[k] = -(d0 * s);
            }
            z.coef = d;
            return Elem(self(), lr_normalize(std::move(z)));
        }
        case FieldKind::RootAdjoined: {
            // Solve a * c = 1 through the multiplication matrix.
            const Field& B = *R.base_;
            size_t D = R.minpoly_.size() - 1;
            if (a.is_zero()) throw MathError("division by zero");
            std::vector<std::vector<Elem>> M(D, std::vector<Elem>(D + 1, B.zero()));
            Elem basis = R.one();
            Elem z = R.generator();
            for (size_t j = 0; j < D; ++j) {
                Elem col = R.mul(a, basis);
                const auto& c = std::get<ExtRep>(col.rep).coef;
                for (size_t i = 0; i < D; ++i) M[i][j] = c[i];
                basis = R.mul(basis, z);
            }
            M[0][D] = B.one();
            for (size_t col = 0, row = 0; col < D; ++col) {
                size_t piv = row;
                while (piv < D && M[piv][col].is_zero()) ++piv;
                if (piv == D) throw MathError("singular element in root adjunction");
                std::swap(M[piv], M[row]);
                Elem ip = M[row][col].inv();
                for (auto& e : M[row]) e = e * ip;
                for (size_t r = 0; r < D; ++r) {
                    if (r == row || M[r][col].is_zero()) continue;
                    Elem f = M[r][col];
                    for (size_t k = 0; k <= D; ++k) M[r][k] -= f * M[row][k];
                }
                ++row;
            }
            ExtRep out;
            for (size_t i = 0; i < D; ++i) out.coef.push_back(M[i][D]);
            return Elem(self(), out);
        }
    }
    throw MathError("unreachable");
}

// ---------------------------------------------------------------- constants

Elem Field::zero() const { return from_int(0); }
Elem Field::one() const { return from_int(1); }

Elem Field::from_int(const Integer& n) const { return from_rational(Rational(n)); }

Elem Field::from_rational(const Rational& r) const {
    const Field& R = rep_node();
    switch (R.kind_) {
        case FieldKind::Rationals: return Elem(self(), r);
        case FieldKind::Finite: {
            Integer P = R.p_;
            Integer d = mod(denom(r), P);
            if (d == 0) throw MathError("denominator divisible by the characteristic");
            Integer v = mod(mod(numer(r), P) * mod_inv(d, P), P);
            return Elem(self(), static_cast<int64_t>(v));
        }
        case FieldKind::PAdic: return Elem(self(), padic_exact(ctx_of(R), r));
        case FieldKind::Laurent: {
            LaurentRep z;
            Elem c = R.base_->from_rational(r);
            if (!c.is_zero()) z.coef.push_back(c);
            return Elem(self(), z);
        }
        case FieldKind::RootAdjoined: {
            ExtRep z;
            size_t D = R.minpoly_.size() - 1;
            z.coef.assign(D, R.base_->zero());
            z.coef[0] = R.base_->from_rational(r);
            return Elem(self(), z);
        }
    }
    throw MathError("unreachable");
}

Elem Field::generator() const {
    switch (kind_) {
        case FieldKind::Laurent: {
            LaurentRep z;
            z.start = 1;
            z.coef.push_back(base_->one());
            return Elem(self(), z);
        }
        case FieldKind::Finite:
            if (e_ == 1) throw UsageError(name_ + " has no named generator");
            return Elem(self(), p_);
        case FieldKind::RootAdjoined: {
            if (trivial_) {
                Elem z = *zeta_;
                z.field = self();
                return z;
            }
            ExtRep z;
            size_t D = minpoly_.size() - 1;
            z.coef.assign(D, base_->zero());
            if (D == 1)
                z.coef[0] = -minpoly_[0];
            else
                z.coef[1] = base_->one();
            return Elem(self(), z);
        }
        default: throw UsageError(name_ + " has no generator");
    }
}

std::optional<Elem> Field::named(const std::string& name) const {
    for (const Field* n = this; n; n = n->base_.get()) {
        if (n->kind_ == FieldKind::Laurent && n->var_ == name) return embed(n->generator());
        if (n->kind_ == FieldKind::RootAdjoined &&
            (name == "zeta_" + std::to_string(n->m_) || name == "zeta"))
            return embed(n->generator());
        if (n->kind_ == FieldKind::Finite && n->e_ > 1 && name == "g") return embed(n->generator());
    }
    return std::nullopt;
}

Elem Field::embed(const Elem& x) const {
    if (!x.field) throw MathError("uninitialised element");
    if (same(*x.field)) {
        if (x.field.get() == this) return x;
        Elem y = x;
        y.field = self();
        return y;
    }
    if (!base_) {
        const Field& src = x.field->rep_node();
        if (kind_ == FieldKind::PAdic && src.kind() == FieldKind::Rationals) return from_rational(std::get<Rational>(x.rep));
        if (kind_ == FieldKind::Finite && src.kind() == FieldKind::Finite && src.degree() == 1 && src.prime() == p_)
            return from_int(std::get<int64_t>(x.rep));
        throw UsageError("cannot embed element of " + x.field->to_string() + " into " + name_);
    }
    Elem b = base_->embed(x);
    switch (kind_) {
        case FieldKind::Laurent: {
            LaurentRep z;
            if (!b.is_zero()) z.coef.push_back(b);
            return Elem(self(), z);
        }
        case FieldKind::RootAdjoined: {
            if (trivial_) {
                b.field = self();
                return b;
            }
            ExtRep z;
            z.coef.assign(minpoly_.size() - 1, base_->zero());
            z.coef[0] = b;
            return Elem(self(), z);
        }
        default: throw UsageError("cannot embed into " + name_);
    }
}

// ---------------------------------------------------------------- Elem

namespace {

std::pair<Elem, Elem> unify(const Elem& a, const Elem& b) {
    if (!a.field || !b.field) throw MathError("uninitialised element");
    if (a.field.get() == b.field.get() || a.field->same(*b.field)) return {a, b};
    if (a.field->contains(*b.field)) return {a, a.field->embed(b)};
    if (b.field->contains(*a.field)) return {b.field->embed(a), b};
    throw UsageError("elements of unrelated fields " + a.field->to_string() + " and " + b.field->to_string());
}

}  // namespace

bool Elem::is_zero() const { return field->is_zero(*this); }
bool Elem::is_one() const { return *this == field->one(); }
Elem Elem::inv() const { return field->invert(*this); }

Elem Elem::pow(int64_t e) const {
    if (e < 0) return inv().pow(-e);
    Elem r = field->one(), b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

std::string Elem::to_string() const { return field->print(*this); }

Elem& Elem::operator+=(const Elem& o) { return *this = *this + o; }
Elem& Elem::operator-=(const Elem& o) { return *this = *this - o; }
Elem& Elem::operator*=(const Elem& o) { return *this = *this * o; }
Elem& Elem::operator/=(const Elem& o) { return *this = *this / o; }

Elem operator+(const Elem& a, const Elem& b) {
    auto [x, y] = unify(a, b);
    return x.field->add(x, y);
}
Elem operator-(const Elem& a, const Elem& b) {
    auto [x, y] = unify(a, b);
    return x.field->add(x, y.field->neg(y));
}
Elem operator*(const Elem& a, const Elem& b) {
    auto [x, y] = unify(a, b);
    return x.field->mul(x, y);
}
Elem operator/(const Elem& a, const Elem& b) {
    auto [x, y] = unify(a, b);
    return x.field->mul(x, y.field->invert(y));
}
Elem operator-(const Elem& a) { return a.field->neg(a); }
Elem operator*(int64_t k, const Elem& a) { return a.field->from_int(k) * a; }
Elem operator*(const Elem& a, int64_t k) { return a * a.field->from_int(k); }
Elem operator+(const Elem& a, int64_t k) { return a + a.field->from_int(k); }
Elem operator-(const Elem& a, int64_t k) { return a - a.field->from_int(k); }
bool operator==(const Elem& a, const Elem& b) { return (a - b).is_zero(); }

// ---------------------------------------------------------------- printing

namespace {

bool atomic(const std::string& s) {
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == ' ' || ((c == '+' || c == '-') && i > 0)) return false;
    }
    return true;
}

std::string term(const std::string& coef, const std::string& mono) {
    if (mono.empty()) return coef;
    if (coef == "1") return mono;
    if (coef == "-1") return "-" + mono;
    return (atomic(coef) ? coef : "(" + coef + ")") + "*" + mono;
}

std::string join_terms(const std::vector<std::string>& ts) {
    if (ts.empty()) return "0";
    std::string s = ts[0];
    for (size_t i = 1; i < ts.size(); ++i) {
        if (ts[i][0] == '-')
            s += " - " + ts[i].substr(1);
        else
            s += " + " + ts[i];
    }
    return s;
}

std::string mono(const std::string& var, int64_t k) {
    if (k == 0) return "";
    if (k == 1) return var;
    return var + "^" + std::to_string(k);
}

}  // namespace

std::string Field::print(const Elem& a) const {
    const Field& R = rep_node();
    switch (R.kind_) {
        case FieldKind::Rationals: return whitehead::to_string(std::get<Rational>(a.rep));
        case FieldKind::Finite: {
            int64_t idx = std::get<int64_t>(a.rep);
            if (R.e_ == 1) return std::to_string(idx);
            Poly64 v = ff_decode(R, idx);
            std::vector<std::string> ts;
            for (int i = R.e_ - 1; i >= 0; --i)
                if (v[i]) ts.push_back(term(std::to_string(v[i]), mono("g", i)));
            return join_terms(ts);
        }
        case FieldKind::PAdic: {
            const auto& r = std::get<PAdicRep>(a.rep);
            if (r.exact) return whitehead::to_string(*r.exact);
            std::string P = std::to_string(R.p_);
            std::string o = "O(" + P + "^" + std::to_string(r.abs_prec) + ")";
            if (r.unit == 0) return o;
            std::string m = r.val == 0 ? "" : (r.val == 1 ? P : P + "^" + std::to_string(r.val));
            return term(r.unit.str(), m) + " + " + o;
        }
        case FieldKind::Laurent: {
            const auto& r = std::get<LaurentRep>(a.rep);
            std::vector<std::string> ts;
            for (size_t i = 0; i < r.coef.size(); ++i) {
                if (r.coef[i].is_zero()) continue;
                ts.push_back(term(r.coef[i].to_string(), mono(R.var_, r.start + (int64_t)i)));
            }
            std::string s = ts.empty() && r.order != kExact ? "" : join_terms(ts);
            if (r.order != kExact) {
                std::string o = "O(" + R.var_ + "^" + std::to_string(r.order) + ")";
                s = s.empty() ? o : s + " + " + o;
            }
            return s;
        }
        case FieldKind::RootAdjoined: {
            const auto& c = std::get<ExtRep>(a.rep).coef;
            std::vector<std::string> ts;
            std::string z = "zeta_" + std::to_string(R.m_);
            for (size_t i = c.size(); i-- > 0;)
                if (!c[i].is_zero()) ts.push_back(term(c[i].to_string(), mono(z, (int64_t)i)));
            return join_terms(ts);
        }
    }
    return "?";
}

// ---------------------------------------------------------------- parsing

namespace {

struct FieldParser {
    std::string s;
    size_t i = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw UsageError("field descriptor '" + s + "': " + what + " at position " + std::to_string(i));
    }
    bool eat(const std::string& t) {
        if (s.compare(i, t.size(), t) == 0) {
            i += t.size();
            return true;
        }
        return false;
    }
    int64_t number() {
        size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j == i) fail("expected integer");
        if (j - i > 12) fail("integer too large");
        int64_t v = std::stoll(s.substr(i, j - i));
        i = j;
        return v;
    }
    std::string ident() {
        size_t j = i;
        while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
        if (j == i) fail("expected variable name");
        std::string r = s.substr(i, j - i);
        i = j;
        return r;
    }
    FieldPtr parse() {
        FieldPtr F;
        if (eat("Qp(")) {
            int64_t p = number();
            int prec = 8;
            if (eat(",")) prec = static_cast<int>(number());
            if (!eat(")")) fail("expected ')'");
            F = Field::padic(p, prec);
        } else if (eat("F(")) {
            int64_t q = number();
            if (!eat(")")) fail("expected ')'");
            F = Field::finite(q);
        } else if (eat("Q")) {
            F = Field::rationals();
        } else {
            fail("expected Q, F(q) or Qp(p)");
        }
        while (i < s.size()) {
            if (eat("((")) {
                std::string v = ident();
                int prec = 16;
                if (eat(",")) prec = static_cast<int>(number());
                if (!eat("))")) fail("expected '))'");
                F = Field::laurent(F, v, prec);
            } else if (eat("[zeta_")) {
                int64_t m = number();
                if (!eat("]")) fail("expected ']'");
                F = Field::adjoin_root(F, m);
            } else {
                fail("unexpected character");
            }
        }
        return F;
    }
};

struct ElemParser {
    FieldPtr F;
    const std::map<std::string, Elem>& sym;
    std::string s;
    size_t i = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw UsageError("element '" + s + "': " + what + " at position " + std::to_string(i));
    }
    void ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool peek(char c) {
        ws();
        return i < s.size() && s[i] == c;
    }
    Elem expr() {
        Elem a = termp();
        while (true) {
            if (peek('+')) {
                ++i;
                a = a + termp();
            } else if (peek('-')) {
                ++i;
                a = a - termp();
            } else {
                return a;
            }
        }
    }
    Elem termp() {
        Elem a = unary();
        while (true) {
            if (peek('*')) {
                ++i;
                a = a * unary();
            } else if (peek('/')) {
                ++i;
                Elem d = unary();
                if (d.is_zero()) fail("division by zero");
                a = a / d;
            } else {
                return a;
            }
        }
    }
    Elem unary() {
        if (peek('-')) {
            ++i;
            return -unary();
        }
        if (peek('+')) {
            ++i;
            return unary();
        }
        return power();
    }
    Elem power() {
        Elem a = atom();
        if (peek('^')) {
            ++i;
            ws();
            bool neg = false;
            if (i < s.size() && (s[i] == '-' || s[i] == '(')) {
                bool paren = s[i] == '(';
                if (paren) ++i;
                ws();
                if (i < s.size() && s[i] == '-') {
                    neg = true;
                    ++i;
                }
                int64_t e = integer();
                if (paren) {
                    if (!peek(')')) fail("expected ')'");
                    ++i;
                }
                return a.pow(neg ? -e : e);
            }
            return a.pow(integer());
        }
        return a;
    }
    int64_t integer() {
        ws();
        size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j == i) fail("expected integer exponent");
        int64_t v = std::stoll(s.substr(i, j - i));
        i = j;
        return v;
    }
    Elem atom() {
        ws();
        if (i >= s.size()) fail("unexpected end");
        if (s[i] == '(') {
            ++i;
            Elem e = expr();
            if (!peek(')')) fail("expected ')'");
            ++i;
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            Integer v(s.substr(i, j - i));
            i = j;
            return F->from_int(v);
        }
        if (std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_') {
            size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            std::string name = s.substr(i, j - i);
            auto it = sym.find(name);
            if (it != sym.end()) {
                i = j;
                return F->embed(it->second);
            }
            if (auto e = F->named(name)) {
                i = j;
                return *e;
            }
            fail("unknown identifier '" + name + "'");
        }
        fail(std::string("unexpected character '") + s[i] + "'");
    }
};

}  // namespace

FieldPtr parse_field(const std::string& descriptor) {
    std::string s;
    for (char c : descriptor)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    FieldParser p{s};
    return p.parse();
}

Elem parse_element(const FieldPtr& F, const std::string& text, const std::map<std::string, Elem>& symbols) {
    ElemParser p{F, symbols, text};
    Elem e = p.expr();
    p.ws();
    if (p.i != text.size()) p.fail("trailing input");
    return F->embed(e);
}

// ---------------------------------------------------------------- p-adic helpers

int64_t padic_valuation(const Elem& x) {
    const Field& R = x.field->rep_node();
    if (R.kind() != FieldKind::PAdic) throw UsageError("not a p-adic element");
    const auto& r = std::get<PAdicRep>(x.rep);
    if (r.exact && *r.exact == 0) throw MathError("valuation of zero");
    if (!r.exact && r.unit == 0)
        throw PrecisionExhausted("valuation of O(p^" + std::to_string(r.abs_prec) + ")");
    return r.val;
}

Integer padic_unit(const Elem& x, int64_t k) {
    const Field& R = x.field->rep_node();
    padic_valuation(x);
    return padic_unit_mod(ctx_of(R), std::get<PAdicRep>(x.rep), k);
}

int64_t padic_relative_precision(const Elem& x) {
    const Field& R = x.field->rep_node();
    return padic_rel(ctx_of(R), std::get<PAdicRep>(x.rep));
}

// ---------------------------------------------------------------- Laurent helpers

static const LaurentRep& lrep(const Elem& x) {
    if (x.field->rep_node().kind() != FieldKind::Laurent) throw UsageError("not a Laurent element");
    return std::get<LaurentRep>(x.rep);
}

int64_t laurent_valuation(const Elem& x) {
    const auto& r = lrep(x);
    if (r.coef.empty()) {
        if (r.order == kExact) throw MathError("valuation of zero");
        throw PrecisionExhausted("valuation of O(" + x.field->rep_node().variable() + "^" +
                                 std::to_string(r.order) + ")");
    }
    return r.start;
}

Elem laurent_coefficient(const Elem& x, int64_t e) {
    const auto& r = lrep(x);
    const Field& R = x.field->rep_node();
    if (r.order != kExact && e >= r.order)
        throw PrecisionExhausted("coefficient beyond precision order " + std::to_string(r.order));
    return lr_coef(*R.base(), r, e);
}

Elem laurent_monomial(const FieldPtr& F, const Elem& c, int64_t e) {
    const Field& R = F->rep_node();
    if (R.kind() != FieldKind::Laurent) throw UsageError("not a Laurent field");
    LaurentRep z;
    z.start = e;
    Elem cc = R.base()->embed(c);
    if (!cc.is_zero()) z.coef.push_back(cc);
    return Elem(F, lr_normalize(z));
}

bool laurent_is_exact(const Elem& x) { return lrep(x).order == kExact; }

LaurentSplit laurent_split(const Elem& x) {
    const Field& R = x.field->rep_node();
    if (R.kind() != FieldKind::Laurent) throw UsageError("laurent_split needs a Laurent element");
    int64_t v = laurent_valuation(x);
    Elem u = std::get<LaurentRep>(x.rep).coef[0];
    Elem tail = x * laurent_monomial(x.field, u.inv(), -v);
    LaurentSplit out{v, u, tail, std::nullopt};
    const Field& B = R.base()->rep_node();
    if (B.kind() == FieldKind::PAdic) out.unit_valuation = padic_valuation(u);
    if (B.kind() == FieldKind::Laurent) out.unit_valuation = laurent_valuation(u);
    return out;
}

int64_t top_valuation(const Elem& x) {
    const Field& R = x.field->rep_node();
    if (R.kind() == FieldKind::Laurent) return laurent_valuation(x);
    if (R.kind() == FieldKind::PAdic) return padic_valuation(x);
    if (R.kind() == FieldKind::Rationals) throw UsageError("Q has no distinguished valuation");
    if (x.is_zero()) throw MathError("valuation of zero");
    return 0;
}

// ---------------------------------------------------------------- roots of unity

RootOfUnity primitive_root_of_unity(const FieldPtr& F, int64_t m) {
    if (m < 1) throw UsageError("root order must be positive");
    const Field& R = F->rep_node();
    auto retag = [&](Elem e) {
        e = F->embed(e);
        return e;
    };
    switch (R.kind()) {
        case FieldKind::Rationals:
            if (m == 1) return {F->one(), ""};
            if (m == 2) return {F->from_int(-1), ""};
            return {std::nullopt, "Q contains only the roots of unity 1 and -1"};
        case FieldKind::Finite: {
            int64_t q = R.order();
            if ((q - 1) % m != 0) return {std::nullopt, std::to_string(m) + " ∤ q−1"};
            auto fs = prime_factors64(q - 1);
            for (int64_t idx = 1; idx < q; ++idx) {
                bool gen = true;
                for (int64_t f : fs)
                    if (ff_pow_idx(R, idx, (q - 1) / f) == 1) {
                        gen = false;
                        break;
                    }
                if (q == 2 || gen) {
                    Elem z(F, ff_pow_idx(R, idx, (q - 1) / m));
                    return {z, ""};
                }
            }
            throw MathError("no primitive element found");
        }
        case FieldKind::PAdic: {
            int64_t p = R.prime();
            if (m == 1) return {F->one(), ""};
            if (m == 2) return {F->from_int(-1), ""};
            if (p == 2 || (p - 1) % m != 0)
                return {std::nullopt, std::to_string(m) + " ∤ p−1 (only tame roots of unity exist here)"};
            int64_t g = primitive_root_mod(p);
            Integer zbar = mod_pow64(g, (p - 1) / m, p);
            Integer M = ipow(Integer(p), R.precision());
            // Teichmüller representative: zbar^(p^(N-1)) mod p^N
            Integer z = mod_pow(zbar, ipow(Integer(p), R.precision() - 1), M);
            PAdicRep rep;
            rep.val = 0;
            rep.unit = z;
            rep.abs_prec = R.precision();
            return {Elem(F, rep), ""};
        }
        case FieldKind::Laurent: {
            auto r = primitive_root_of_unity(R.base(), m);
            if (!r.root) return r;
            return {retag(*r.root), ""};
        }
        case FieldKind::RootAdjoined: {
            int64_t M = R.root_order();
            Elem z = R.self()->generator();
            int64_t order = M;
            if (M % 2) {
                z = -z;
                order = 2 * M;
            }
            if (order % m != 0) {
                auto r = primitive_root_of_unity(R.base(), m);
                if (r.root) return {retag(*r.root), ""};
                return {std::nullopt, std::to_string(m) + " ∤ " + std::to_string(order)};
            }
            return {retag(z.pow(order / m)), ""};
        }
    }
    return {std::nullopt, "unsupported"};
}

// ---------------------------------------------------------------- n-th powers

namespace {

PowerTest rational_power(const Rational& r, int64_t n, const FieldPtr& F) {
    PowerTest t;
    if (r < 0 && n % 2 == 0) {
        t.certificate = "negative number";
        return t;
    }
    auto a = exact_root(numer(r), static_cast<unsigned>(n));
    auto b = exact_root(denom(r), static_cast<unsigned>(n));
    if (a && b) {
        t.is_power = true;
        t.witness = F->from_rational(Rational(*a, *b));
        t.certificate = "exact root";
        return t;
    }
    t.certificate = "not a perfect power (squarefree part obstruction)";
    return t;
}

}  // namespace

PowerTest is_nth_power(const Elem& x, int64_t n) {
    if (n < 1) throw UsageError("n must be positive");
    if (x.is_zero()) throw UsageError("is_nth_power of zero");
    const FieldPtr& F = x.field;
    const Field& R = F->rep_node();
    PowerTest t;
    if (n == 1) {
        t.is_power = true;
        t.witness = x;
        t.certificate = "trivial";
        return t;
    }
    switch (R.kind()) {
        case FieldKind::Rationals: return rational_power(std::get<Rational>(x.rep), n, F);
        case FieldKind::Finite: {
            int64_t q = R.order();
            int64_t g = gcd64(n, q - 1);
            int64_t idx = std::get<int64_t>(x.rep);
            t.is_power = ff_pow_idx(R, idx, (q - 1) / g) == 1;
            t.certificate = "Euler criterion";
            if (t.is_power) {
                if (q <= (int64_t(1) << 22)) {
                    for (int64_t y = 1; y < q; ++y)
                        if (ff_pow_idx(R, y, n % (q - 1) == 0 ? q - 1 : n % (q - 1)) == idx) {
                            t.witness = Elem(F, y);
                            t.certificate = "exhaustive search";
                            break;
                        }
                } else if (g == 1) {
                    int64_t k = mod_inv64(n % (q - 1), q - 1);
                    t.witness = Elem(F, ff_pow_idx(R, idx, k));
                }
            }
            return t;
        }
        case FieldKind::PAdic: {
            const auto& r = std::get<PAdicRep>(x.rep);
            int64_t p = R.prime();
            int64_t v = padic_valuation(x);
            if (v % n != 0) {
                t.certificate = n == 2 ? "odd valuation" : "valuation not divisible by n";
                return t;
            }
            Integer nn = n;
            int64_t s = strip(nn, p);
            int64_t n1 = static_cast<int64_t>(nn);
            // residue condition
            if (p != 2) {
                Integer ubar = padic_unit(x, 1);
                int64_t g = gcd64(n1, p - 1);
                if (mod_pow(ubar, (p - 1) / g, p) != 1) {
                    t.certificate = "residue unit is not an n-th power";
                    return t;
                }
                if (s > 0) {
                    Integer u = padic_unit(x, s + 1);
                    Integer M = ipow(Integer(p), s + 1);
                    if (mod_pow(u, p - 1, M) != 1) {
                        t.certificate = "principal unit not a p^" + std::to_string(s) + "-th power";
                        return t;
                    }
                }
            } else if (s > 0) {
                Integer u = padic_unit(x, s + 2);
                if (mod(u, ipow(Integer(2), s + 2)) != 1) {
                    t.certificate = "unit not 1 mod 2^" + std::to_string(s + 2);
                    return t;
                }
            }
            t.is_power = true;
            t.certificate = "Hensel";
            if (r.exact) {
                auto e = rational_power(*r.exact, n, F);
                if (e.is_power) {
                    t.witness = e.witness;
                    t.certificate = "exact root";
                    return t;
                }
            }
            if (s == 0 && p != 2) {
                // lift a root of y^n = u from F_p by Newton iteration
                int64_t rel = padic_relative_precision(x);
                Integer M = ipow(Integer(p), rel);
                Integer u = padic_unit(x, rel);
                Integer ubar = mod(u, p);
                int64_t y0 = -1;
                for (int64_t y = 1; y < p; ++y)
                    if (mod_pow(Integer(y), n, p) == ubar) {
                        y0 = y;
                        break;
                    }
                Integer y = y0;
                for (int64_t it = 0; it < 2 * rel + 2; ++it) {
                    Integer fy = mod(mod_pow(y, n, M) - u, M);
                    if (fy == 0) break;
                    Integer d = mod(Integer(n) * mod_pow(y, n - 1, M), M);
                    y = mod(y - fy * mod_inv(d, M), M);
                }
                PAdicRep w;
                w.val = v / n;
                w.unit = y;
                w.abs_prec = w.val + rel;
                t.witness = Elem(F, w);
            }
            return t;
        }
        case FieldKind::Laurent: {
            const FieldPtr& B = R.base();
            int64_t v = laurent_valuation(x);
            int64_t p = R.characteristic();
            if (p > 0 && n % p == 0) {
                // p-th roots in characteristic p: exponents must be divisible by p
                if (!laurent_is_exact(x))
                    throw PrecisionExhausted("p-th power test needs an exact Laurent polynomial");
                const auto& lr = std::get<LaurentRep>(x.rep);
                for (size_t i = 0; i < lr.coef.size(); ++i) {
                    if (lr.coef[i].is_zero()) continue;
                    int64_t e = lr.start + (int64_t)i;
                    if (e % p != 0) {
                        t.certificate = "exponent " + std::to_string(e) + " not divisible by the characteristic";
                        return t;
                    }
                    auto sub = is_nth_power(lr.coef[i], p);
                    if (!sub.is_power) {
                        t.certificate = "coefficient is not a p-th power: " + sub.certificate;
                        return t;
                    }
                    if (!sub.witness) throw UnsupportedTower("no p-th root witness in " + B->to_string());
                    Elem term = laurent_monomial(F, *sub.witness, e / p);
                    if (!t.witness)
                        t.witness = term;
                    else
                        t.witness = *t.witness + term;
                }
                Elem y = *t.witness;
                t.witness.reset();
                auto rest = is_nth_power(y, n / p);
                if (!rest.is_power) {
                    t.certificate = rest.certificate;
                    return t;
                }
                return rest;
            }
            if (v % n != 0) {
                t.certificate = n == 2 ? "odd valuation" : "valuation not divisible by n";
                return t;
            }
            auto sp = laurent_split(x);
            auto lead = is_nth_power(sp.unit, n);
            if (!lead.is_power) {
                t.certificate = "leading coefficient: " + lead.certificate;
                return t;
            }
            t.is_power = true;
            t.certificate = "leading coefficient " + lead.certificate + "; tail by Newton iteration";
            if (lead.witness) {
                // Newton iteration for y^n = tail starting from y = 1
                Elem y = F->one();
                Elem nn = F->from_int(n);
                for (int it = 0; it < 64; ++it) {
                    Elem err = y.pow(n) - sp.tail;
                    if (err.is_zero()) break;
                    y = y - err / (nn * y.pow(n - 1));
                }
                t.witness = laurent_monomial(F, *lead.witness, v / n) * y;
            }
            return t;
        }
        case FieldKind::RootAdjoined:
            throw UnsupportedTower("n-th power test over " + F->to_string());
    }
    return t;
}

}  // namespace whitehead
