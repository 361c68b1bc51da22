#include "whitehead/ktheory.hpp"

#include <algorithm>
#include <numeric>

#include "whitehead/local.hpp"

namespace whitehead {

namespace {

int64_t modm(int64_t a, int64_t m) { return ((a % m) + m) % m; }

std::string slot_key(const Elem& x) { return x.to_string(); }

bool try_nth_power(const Elem& x, int64_t m) {
    try {
        return is_nth_power(x, m).is_power;
    } catch (const UnsupportedTower&) {
        return false;
    } catch (const PrecisionExhausted&) {
        return false;
    } catch (const Undecided&) {
        return false;
    }
}

// One rewriting pass on a single term; returns false if the term vanishes.
bool reduce_term(KTerm& t, int64_t m) {
    for (bool changed = true; changed;) {
        changed = false;
        const size_t r = t.slots.size();
        for (size_t i = 0; i < r; ++i) {
            if (t.slots[i].is_one()) return false;
            if (m > 1 && try_nth_power(t.slots[i], m)) return false;
        }
        for (size_t i = 0; i < r; ++i)
            for (size_t j = i + 1; j < r; ++j) {
                const Elem& x = t.slots[i];
                const Elem& y = t.slots[j];
                if ((x + y).is_one()) return false;
                if ((x + y).is_zero()) return false;
                if (x == y && !(x + x.field->one()).is_zero()) {
                    t.slots[j] = -x.field->one();
                    changed = true;
                }
            }
    }
    // graded commutativity: sort slots, tracking the sign
    std::vector<std::string> keys;
    for (const auto& s : t.slots) keys.push_back(slot_key(s));
    for (size_t i = 0; i < keys.size(); ++i)
        for (size_t j = 0; j + 1 < keys.size() - i; ++j)
            if (keys[j] > keys[j + 1]) {
                std::swap(keys[j], keys[j + 1]);
                std::swap(t.slots[j], t.slots[j + 1]);
                t.coef = -t.coef;
            }
    t.coef = modm(t.coef, m);
    return t.coef != 0;
}

std::string term_key(const KTerm& t) {
    std::string k;
    for (const auto& s : t.slots) k += slot_key(s) + "|";
    return k;
}

KClass normalize_once(const KClass& c) {
    KClass out(c.field(), c.degree(), c.modulus());
    std::vector<KTerm> kept;
    for (KTerm t : c.terms()) {
        t.coef = modm(t.coef, c.modulus());
        if (t.coef == 0 || !reduce_term(t, c.modulus())) continue;
        kept.push_back(std::move(t));
    }
    std::stable_sort(kept.begin(), kept.end(), [](const KTerm& a, const KTerm& b) { return term_key(a) < term_key(b); });
    for (size_t i = 0; i < kept.size();) {
        size_t j = i;
        int64_t coef = 0;
        while (j < kept.size() && term_key(kept[j]) == term_key(kept[i])) coef += kept[j++].coef;
        coef = modm(coef, c.modulus());
        if (coef) out.add_term(kept[i].slots, coef);
        i = j;
    }
    return out;
}

const Field& laurent_node(const KClass& c, const std::string& var) {
    const Field& R = c.field()->rep_node();
    if (R.kind() != FieldKind::Laurent) throw UsageError("residue needs a Laurent tower");
    if (R.variable() != var) throw UsageError("residues are taken along the outermost variable '" + R.variable() + "', not '" + var + "'");
    const int64_t ch = c.field()->characteristic();
    if (ch != 0 && c.modulus() % ch == 0) throw UnsupportedTower("residue with modulus divisible by the characteristic");
    return R;
}

struct SplitSlot {
    int64_t v;
    Elem unit;  // in the residue field
};

// Expands a term over k((t)) as a sum over choices "t" / "unit" per slot and returns
// (terms without t, terms with t after residue).
void split_term(const KTerm& t, const FieldPtr& residue_field, KClass* spec, KClass* res) {
    const size_t r = t.slots.size();
    std::vector<SplitSlot> parts;
    for (const auto& s : t.slots) {
        auto sp = laurent_split(s);
        parts.push_back({sp.valuation, residue_field->embed(sp.unit)});
    }
    for (size_t mask = 0; mask < (size_t(1) << r); ++mask) {
        if (mask == 0) {
            if (spec) {
                std::vector<Elem> us;
                for (const auto& p : parts) us.push_back(p.unit);
                spec->add_term(us, t.coef);
            }
            continue;
        }
        if (!res) continue;
        int64_t weight = t.coef;
        size_t k = 0, swaps = 0, units_before = 0;
        std::vector<Elem> rest;
        for (size_t i = 0; i < r; ++i) {
            if (mask >> i & 1) {
                weight *= parts[i].v;
                ++k;
                swaps += units_before;
            } else {
                rest.push_back(parts[i].unit);
                ++units_before;
            }
        }
        if (weight == 0) continue;
        if (swaps % 2) weight = -weight;
        // {t, t, ..., t, rest} = {t, -1, ..., -1, rest}
        std::vector<Elem> slots(k - 1, -residue_field->one());
        slots.insert(slots.end(), rest.begin(), rest.end());
        res->add_term(slots, weight);
    }
}

// ---- bottom evaluations

int64_t ff_dlog(const Field& F, const Elem& x) {
    const int64_t q = F.order();
    auto fs = prime_factors64(q - 1);
    FieldPtr Fp = F.self();
    Elem g;
    for (int64_t idx = 1; idx < q; ++idx) {
        Elem c = Fp->ff_from_index(idx);
        if (c.is_zero()) continue;
        bool prim = true;
        for (auto p : fs)
            if (c.pow((q - 1) / p).is_one()) prim = false;
        if (prim) {
            g = c;
            break;
        }
    }
    Elem cur = Fp->one();
    Elem y = Fp->embed(x);
    for (int64_t k = 0; k < q - 1; ++k) {
        if (cur == y) return k;
        cur *= g;
    }
    throw MathError("discrete logarithm of zero");
}

bool tame(int64_t p, int64_t m) { return (p - 1) % m == 0; }

int64_t padic_dlog(const Elem& x, int64_t p) {
    Integer u = padic_unit(x, 1);
    return discrete_log(static_cast<int64_t>(u), primitive_root_mod(p), p);
}

Coordinate bottom_value(const KClass& c, std::vector<std::string> taken) {
    Coordinate out;
    out.residues = std::move(taken);
    out.degree = c.degree();
    const int64_t m = c.modulus();
    const Field& B = c.field()->rep_node();
    if (c.degree() == 0) {
        int64_t s = 0;
        for (const auto& t : c.terms()) s += t.coef;
        out.value = {modm(s, m)};
        out.orders = {m};
        out.meaning = "Z/" + std::to_string(m);
        return out;
    }
    switch (B.kind()) {
        case FieldKind::Finite: {
            if (c.degree() >= 2) {
                out.meaning = "0 (finite field)";
                return out;
            }
            const int64_t g = gcd64(m, B.order() - 1);
            int64_t s = 0;
            for (const auto& t : c.terms()) s += t.coef * modm(ff_dlog(B, t.slots[0]), g);
            out.value = {modm(s, g)};
            out.orders = {g};
            out.meaning = "F_q^x / m via discrete log";
            return out;
        }
        case FieldKind::PAdic: {
            const int64_t p = B.prime();
            if (c.degree() >= 3) {
                out.meaning = "0 (cohomological dimension 2)";
                return out;
            }
            if (c.degree() == 2) {
                int64_t s = 0;
                for (const auto& t : c.terms()) s += t.coef * hilbert_pairing(t.slots[0], t.slots[1], m);
                out.value = {modm(s, m)};
                out.orders = {m};
                out.meaning = "local pairing";
                return out;
            }
            if (!tame(p, m)) throw UnsupportedTower("degree-1 classes need m | p-1");
            int64_t sv = 0, su = 0;
            for (const auto& t : c.terms()) {
                sv += t.coef * modm(padic_valuation(t.slots[0]), m);
                su += t.coef * modm(padic_dlog(t.slots[0], p), m);
            }
            out.value = {modm(sv, m), modm(su, m)};
            out.orders = {m, m};
            out.meaning = "(valuation, unit discrete log) mod m";
            return out;
        }
        case FieldKind::Rationals:
            throw Undecided("no decision procedure for degree " + std::to_string(c.degree()) + " classes over Q");
        default: throw UnsupportedTower("coordinates over " + c.field()->to_string());
    }
}

void coordinates_rec(const KClass& c, std::vector<std::string> taken, std::vector<Coordinate>& out) {
    const Field& R = c.field()->rep_node();
    if (R.kind() != FieldKind::Laurent) {
        out.push_back(bottom_value(k_normalize(c), std::move(taken)));
        return;
    }
    const std::string var = R.variable();
    coordinates_rec(specialization(c, var), taken, out);
    taken.push_back(var);
    coordinates_rec(tame_residue(c, var), taken, out);
}

}  // namespace

// ---------------------------------------------------------------- KClass

void KClass::add_term(std::vector<Elem> slots, int64_t coef) {
    if (static_cast<int>(slots.size()) != degree_) throw UsageError("symbol of the wrong degree");
    for (auto& s : slots) {
        s = F_->embed(s);
        if (s.is_zero()) throw UsageError("zero slot in a symbol");
    }
    terms_.push_back({std::move(slots), coef});
}

std::string KClass::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& t : terms_) {
        if (!out.empty()) out += " + ";
        if (t.coef != 1) out += std::to_string(t.coef) + "*";
        out += "{";
        for (size_t i = 0; i < t.slots.size(); ++i) out += (i ? ", " : "") + t.slots[i].to_string();
        out += "}";
    }
    return out;
}

KClass k_symbol(const std::vector<Elem>& xs, int64_t m) {
    if (xs.empty()) throw UsageError("empty symbol");
    if (m < 1) throw UsageError("modulus must be positive");
    FieldPtr F = xs[0].field;
    for (const auto& x : xs)
        if (!F->contains(*x.field)) F = x.field;
    KClass c(F, static_cast<int>(xs.size()), m);
    c.add_term(xs, 1);
    return k_normalize(c);
}

KClass k_add(const KClass& a, const KClass& b) {
    if (a.degree() != b.degree() || a.modulus() != b.modulus()) throw UsageError("adding K-classes of different shape");
    FieldPtr F = a.field()->contains(*b.field()) ? a.field() : b.field();
    KClass c(F, a.degree(), a.modulus());
    for (const auto& t : a.terms()) c.add_term(t.slots, t.coef);
    for (const auto& t : b.terms()) c.add_term(t.slots, t.coef);
    return k_normalize(c);
}

KClass k_scale(int64_t s, const KClass& a) {
    KClass c(a.field(), a.degree(), a.modulus());
    for (const auto& t : a.terms()) c.add_term(t.slots, t.coef * s);
    return k_normalize(c);
}

KClass k_mul(const KClass& a, const KClass& b) {
    if (a.modulus() != b.modulus()) throw UsageError("multiplying K-classes with different moduli");
    FieldPtr F = a.field()->contains(*b.field()) ? a.field() : b.field();
    KClass c(F, a.degree() + b.degree(), a.modulus());
    for (const auto& s : a.terms())
        for (const auto& t : b.terms()) {
            auto slots = s.slots;
            slots.insert(slots.end(), t.slots.begin(), t.slots.end());
            c.add_term(slots, s.coef * t.coef);
        }
    return k_normalize(c);
}

KClass k_normalize(const KClass& c) {
    KClass cur = normalize_once(c);
    for (int guard = 0; guard < 16; ++guard) {
        KClass next = normalize_once(cur);
        if (next.to_string() == cur.to_string()) return next;
        cur = next;
    }
    return cur;
}

std::optional<bool> k_is_zero(const KClass& c) {
    KClass n = k_normalize(c);
    if (n.empty()) return true;
    try {
        return coh_coordinates(n).zero();
    } catch (const Undecided&) {
        return std::nullopt;
    } catch (const UnsupportedTower&) {
        return std::nullopt;
    }
}

KClass tame_residue(const KClass& c, const std::string& var, int sign) {
    if (sign != 1 && sign != -1) throw UsageError("residue sign must be +1 or -1");
    if (sign == -1) {
        // d'_t{u2, ..., ur, t} = d_t{t, u2, ..., ur} times (-1)^(r-1)
        KClass r = tame_residue(c, var, 1);
        return c.degree() % 2 == 0 ? k_scale(-1, r) : r;
    }
    const Field& R = laurent_node(c, var);
    if (c.degree() < 1) throw UsageError("residue of a degree-0 class");
    KClass res(R.base(), c.degree() - 1, c.modulus());
    for (const auto& t : c.terms()) split_term(t, R.base(), nullptr, &res);
    return k_normalize(res);
}

KClass specialization(const KClass& c, const std::string& var) {
    const Field& R = laurent_node(c, var);
    KClass spec(R.base(), c.degree(), c.modulus());
    for (const auto& t : c.terms()) split_term(t, R.base(), &spec, nullptr);
    return k_normalize(spec);
}

// ---------------------------------------------------------------- local pairing

namespace {

int64_t pairing_core(int64_t p, int64_t m, int64_t va, const Integer& ua, int64_t vb, const Integer& ub) {
    if (m == 1) return 0;
    if (p == 2) {
        if (m != 2) throw UnsupportedTower("wild pairing over Q_2 beyond m = 2");
        Integer a = ua * ipow(2, static_cast<uint64_t>(va));
        Integer b = ub * ipow(2, static_cast<uint64_t>(vb));
        return hilbert_symbol(a, b, Integer(2)) == 1 ? 0 : 1;
    }
    if (!tame(p, m)) throw UnsupportedTower("pairing needs m | p-1 (p = " + std::to_string(p) + ", m = " + std::to_string(m) + ")");
    // (-1)^(va vb) a^vb / b^va mod p
    Integer c = 1;
    if ((va * vb) % 2) c = p - 1;
    auto pw = [&](const Integer& u, int64_t e) {
        Integer base = mod(u, p);
        if (e < 0) {
            base = mod_inv(base, p);
            e = -e;
        }
        return mod_pow(base, e, p);
    };
    c = mod(c * pw(ua, vb) * pw(ub, -va), p);
    return modm(discrete_log(static_cast<int64_t>(c), primitive_root_mod(p), p), m);
}

}  // namespace

int64_t hilbert_pairing(const Elem& a, const Elem& b, int64_t m) {
    const Field& R = a.field->rep_node();
    if (R.kind() != FieldKind::PAdic) throw UnsupportedTower("pairing needs a p-adic field");
    if (a.is_zero() || b.is_zero()) throw UsageError("pairing of zero");
    const int64_t p = R.prime();
    const int64_t k = p == 2 ? 3 : 1;
    Elem bb = a.field->embed(b);
    return pairing_core(p, m, padic_valuation(a), padic_unit(a, k), padic_valuation(bb), padic_unit(bb, k));
}

int64_t hilbert_pairing(const Rational& a, const Rational& b, int64_t p, int64_t m) {
    auto Qp = Field::padic(p);
    return hilbert_pairing(Qp->from_rational(a), Qp->from_rational(b), m);
}

// ---------------------------------------------------------------- coordinates

bool CohCoordinates::zero() const {
    for (const auto& c : coords)
        for (auto v : c.value)
            if (v) return false;
    return true;
}

CohCoordinates coh_coordinates(const KClass& c) {
    CohCoordinates out;
    out.modulus = c.modulus();
    out.degree = c.degree();
    coordinates_rec(k_normalize(c), {}, out.coords);
    return out;
}

// ---------------------------------------------------------------- relative groups

int64_t RelativeGroup::m_r(int64_t x) const { return modm(period * x, modulus); }

int64_t RelativeGroup::pi_r(int64_t y) const { return modm(y, order); }

bool RelativeGroup::m_r_well_defined() const { return (period * order) % modulus == 0; }

bool RelativeGroup::m_r_injective() const {
    for (int64_t x = 1; x < order; ++x)
        if (m_r(x) == 0) return false;
    return true;
}

bool RelativeGroup::pi_tilde_surjective() const {
    for (int64_t k = 0; k < modulus; ++k)
        if ((order * k) % modulus == 0 && modm(k, order) == modm(1, order)) return true;
    return false;
}

KClass algebra_class(const AlgebraPtr& A, int64_t n) {
    const auto& pres = A->presentation();
    if (pres.kind == PresentationKind::Tensor) return k_add(algebra_class(A->factors()[0], n), algebra_class(A->factors()[1], n));
    if (pres.kind != PresentationKind::Symbol && pres.kind != PresentationKind::CyclicKummer)
        throw UsageError("Brauer class in K_2 needs symbol factors");
    const int64_t d = A->degree();
    if (n % d) throw UsageError("degree " + std::to_string(d) + " does not divide the modulus " + std::to_string(n));
    KClass c(A->field(), 2, n);
    c.add_term({*pres.a, *pres.b}, n / d);
    return k_normalize(c);
}

namespace {

void collect_symbols(const AlgebraPtr& A, std::vector<std::pair<Elem, Elem>>& out, int64_t& d) {
    const auto& pres = A->presentation();
    if (pres.kind == PresentationKind::Tensor) {
        for (const auto& f : A->factors()) collect_symbols(f, out, d);
        return;
    }
    if (pres.kind != PresentationKind::Symbol && pres.kind != PresentationKind::CyclicKummer)
        throw UsageError("relative groups need symbol factors");
    if (d && d != A->degree()) throw UsageError("symbol factors of different degrees");
    d = A->degree();
    out.emplace_back(*pres.a, *pres.b);
}

}  // namespace

RelativeGroup relative_group(const AlgebraPtr& A, int64_t r, int64_t n) {
    std::vector<std::pair<Elem, Elem>> syms;
    int64_t d = 0;
    collect_symbols(A, syms, d);
    return relative_group(A->field(), syms, d, A->period_bound(), r, n);
}

RelativeGroup relative_group(const FieldPtr& F, const std::vector<std::pair<Elem, Elem>>& symbols, int64_t d,
                             int64_t per, int64_t r, int64_t n) {
    auto chain = F->residue_chain();
    if (chain.size() != 2 || F->bottom().kind() != FieldKind::PAdic)
        throw UnsupportedTower("relative groups are computed over Qp((t1))((t2))");
    const int64_t p = F->prime();
    if (!tame(p, n)) throw UnsupportedTower("modulus must divide p - 1");
    if (r < 0) throw UsageError("r must be nonnegative");
    if (d < 1 || n % d) throw UsageError("symbol degree must divide the modulus");
    RelativeGroup g;
    g.modulus = n;
    g.r = r;
    g.period = per;
    KClass cls(F, 2, n);
    for (const auto& [a, b] : symbols) cls.add_term({a, b}, (n / d) * r);
    cls = k_normalize(cls);
    std::vector<Elem> gens;
    for (const auto& [var, res] : chain) gens.push_back(*F->named(var));
    gens.push_back(F->from_int(p));
    gens.push_back(F->from_int(primitive_root_mod(p)));
    gens.push_back(F->from_int(-1));
    int64_t h = n;
    for (size_t i = 0; i < gens.size(); ++i)
        for (size_t j = i; j < gens.size(); ++j) {
            KClass prod = k_mul(k_symbol({gens[i], gens[j]}, n), cls);
            int64_t v = prod.empty() ? 0 : coh_coordinates(prod).top().value.at(0);
            g.generators.push_back("{" + gens[i].to_string() + ", " + gens[j].to_string() + "}." + std::to_string(r) + "[A]");
            g.generator_values.push_back(v);
            h = std::gcd(h, v);
        }
    g.order = h;
    g.subgroup_gen = h % n;
    return g;
}

}  // namespace whitehead
