#include "whitehead/invariants.hpp"

#include <algorithm>
#include <regex>
#include <set>

namespace whitehead {

std::string provenance_name(Provenance p) {
    switch (p) {
        case Provenance::Computed: return "computed";
        case Provenance::PaperCited: return "paper-cited";
        default: return "undecided";
    }
}

// ---------------------------------------------------------------- Platonov

namespace {

const Field& require_padic(const FieldPtr& k) {
    const Field& B = k->rep_node();
    if (B.kind() != FieldKind::PAdic) throw UsageError("Platonov configuration needs a p-adic base, got " + k->to_string());
    return B;
}

// (valuation, discrete log of the unit residue) mod n
std::pair<int64_t, int64_t> kummer_coords(const Elem& a, int64_t p, int64_t n) {
    if (a.is_zero()) throw UsageError("Kummer datum must be nonzero");
    int64_t v = padic_valuation(a);
    Integer u = padic_unit(a, 1);
    int64_t d = discrete_log(static_cast<int64_t>(u), primitive_root_mod(p), p);
    return {mod64(v, n), mod64(d, n)};
}

int64_t cyclic_order(std::pair<int64_t, int64_t> x, int64_t n) {
    int64_t k = 1;
    while (k < n && ((k * x.first) % n || (k * x.second) % n)) ++k;
    return k;
}

}  // namespace

int64_t kummer_subgroup_order(const FieldPtr& k, const Elem& a1, const Elem& a2, int64_t n) {
    const Field& B = require_padic(k);
    const int64_t p = B.prime();
    if ((p - 1) % n) throw UnsupportedTower("k^x / k^xn is only coordinatized for n | p - 1");
    auto x = kummer_coords(k->embed(a1), p, n), y = kummer_coords(k->embed(a2), p, n);
    std::set<std::pair<int64_t, int64_t>> seen;
    for (int64_t i = 0; i < n; ++i)
        for (int64_t j = 0; j < n; ++j) seen.insert({(i * x.first + j * y.first) % n, (i * x.second + j * y.second) % n});
    return static_cast<int64_t>(seen.size());
}

SK1Result sk1_platonov(const PlatonovConfig& cfg) {
    const Field& B = require_padic(cfg.k);
    const int64_t n = cfg.n, p = B.prime();
    if (n < 2) throw UsageError("n must be >= 2");
    if ((p - 1) % n) throw UnsupportedTower("p = " + std::to_string(p) + " is not tame for n = " + std::to_string(n) + " (need n | p - 1)");
    const Elem a1 = cfg.k->embed(cfg.a1), a2 = cfg.k->embed(cfg.a2);
    SK1Result out;
    out.kummer_subgroup_order = kummer_subgroup_order(cfg.k, a1, a2, n);
    if (out.kummer_subgroup_order != n * n) throw MathError("not linearly disjoint: <a1, a2> has order " + std::to_string(out.kummer_subgroup_order) + " in k^x/k^x" + std::to_string(n));
    const int64_t d1 = cyclic_order(kummer_coords(a1, p, n), n), d2 = cyclic_order(kummer_coords(a2, p, n), n);
    const int64_t N = out.kummer_subgroup_order;
    out.pieces = {{"Br(K/k)", N}, {"Br(K1/k)", d1}, {"Br(K2/k)", d2}};
    // (1/N)Z/Z modulo (1/d1)Z/Z + (1/d2)Z/Z
    out.order = N / lcm64(d1, d2);
    out.group = "Z/" + std::to_string(out.order);
    out.generator = "1/" + std::to_string(N) + " mod (1/" + std::to_string(lcm64(d1, d2)) + ")Z/Z";
    if (n == 2) {
        auto F = Field::laurent(Field::laurent(cfg.k, "t1"), "t2");
        auto A = Algebra::tensor(Algebra::symbol(F->embed(a1), *F->named("t1"), 2), Algebra::symbol(F->embed(a2), *F->named("t2"), 2));
        out.algebra = A;
        auto d = is_division_biquaternion(A);
        out.division.provenance = Provenance::Computed;
        out.division.detail.push_back(std::string(d.division ? "division" : "NOT division") + ": Albert form " + d.albert.to_string() + (d.division ? " is anisotropic" : " is isotropic"));
        for (const auto& c : d.isotropy.certificate) out.division.detail.push_back(c);
    } else {
        out.division.provenance = Provenance::PaperCited;
        out.division.detail.push_back("division for linearly disjoint Kummer data by Platonov's theorem; not verified here for n > 2");
    }
    if ((p - 1) % (n * n * n))
        out.division.detail.push_back("note: k has no primitive n^3-th root of unity (p - 1 not divisible by n^3)");
    return out;
}

// ---------------------------------------------------------------- Kahn

int64_t kahn_bound(int64_t n) {
    if (n < 1) throw UsageError("n must be >= 1");
    int64_t out = 1, r = n;
    for (int64_t p : prime_factors64(n)) {
        r /= p;
        while (r % p == 0) {
            out *= p;
            r /= p;
        }
    }
    return out;
}

namespace {

bool power_of(int64_t x, int64_t p) {
    if (x < 1) return false;
    while (x % p == 0) x /= p;
    return x == 1;
}

}  // namespace

TorsionResult kahn_torsion(const std::vector<TorsionFactor>& factors) {
    TorsionResult out;
    std::set<int64_t> primes;
    for (const auto& f : factors) {
        const std::string tag = "(" + std::to_string(f.p) + "," + std::to_string(f.ind) + "," + std::to_string(f.per) + ")";
        if (!is_prime64(f.p)) throw UsageError(tag + ": " + std::to_string(f.p) + " is not prime");
        if (!primes.insert(f.p).second) throw UsageError(tag + ": prime " + std::to_string(f.p) + " repeated");
        if (!power_of(f.ind, f.p) || !power_of(f.per, f.p)) throw UsageError(tag + ": index and period must be powers of p");
        if (f.per < f.p || f.ind % f.per) throw UsageError(tag + ": inconsistent (per, ind) pair");
        int fi;
        std::string rule;
        if (f.p == 2) {
            fi = 1;
            rule = "p = 2";
        } else if (f.per != f.p) {
            throw UsageError(tag + ": no torsion rule for per > p > 2");
        } else if (f.ind == f.per) {
            fi = 1;
            rule = "ind = per = p > 2";
        } else {
            fi = 2;
            rule = "ind > per = p > 2";
        }
        out.exponents.push_back(fi);
        out.rules.push_back(tag + ": f = " + std::to_string(fi) + " (" + rule + ")");
        for (int i = 0; i < fi; ++i) out.m *= f.p;
    }
    return out;
}

std::vector<TorsionFactor> parse_torsion_factors(const std::string& text) {
    static const std::regex item(R"(\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*(,|$))");
    std::vector<TorsionFactor> out;
    auto begin = text.cbegin();
    std::smatch m;
    while (begin != text.cend()) {
        if (!std::regex_search(begin, text.cend(), m, item, std::regex_constants::match_continuous))
            throw UsageError("malformed factor list near '" + std::string(begin, text.cend()) + "'");
        out.push_back({std::stoll(m[1]), std::stoll(m[2]), std::stoll(m[3])});
        begin = m[0].second;
    }
    if (out.empty()) throw UsageError("empty factor list");
    return out;
}

// ---------------------------------------------------------------- formal scalars

void FormalScalar::tighten(const std::string& c) {
    if (std::find(constraints.begin(), constraints.end(), c) == constraints.end()) constraints.push_back(c);
}

std::string FormalScalar::to_string() const {
    std::string s = name + " in Z/" + std::to_string(modulus);
    if (constraints.empty()) return s + " (undetermined)";
    s += " [";
    for (size_t i = 0; i < constraints.size(); ++i) s += (i ? "; " : "") + constraints[i];
    return s + "]";
}

FormalScalar scalar_j(int64_t p, int64_t n) {
    FormalScalar j{"j(" + std::to_string(p) + "," + std::to_string(n) + ")", kahn_bound(n * n), {}};
    if (p == 0) j.tighten("nonzero mod " + std::to_string(j.modulus) + " (Platonov fields)");
    return j;
}

FormalScalar scalar_i(int64_t p, int64_t m) {
    return {"i(" + std::to_string(p) + "," + std::to_string(m) + ")", kahn_bound(m * m), {}};
}

FormalScalar scalar_d(int64_t n) { return {"d_A", kahn_bound(n), {}}; }

FormalScalar scalar_lambda(int64_t n) {
    FormalScalar l{"lambda", kahn_bound(n * n), {}};
    l.tighten("nonzero mod " + std::to_string(l.modulus));
    return l;
}

FormalScalar scalar_i_s91(int64_t n) {
    FormalScalar s{"i_S91(0," + std::to_string(n) + ")", kahn_bound(n * n), {}};
    if (n % 2) s.tighten("nonzero (odd n)");
    return s;
}

std::vector<InvariantDescriptor> invariant_descriptors() {
    return {
        {"S91", "H^4_{n,A}", "n", {"rho_S91 = rho_2: open, not assumed", "rho_S91 = rho_Rost on biquaternions"}},
        {"S06", "H^4_{n,A^(x)r}", "n", {"compatibility square for rho_S06 commutes: open, not assumed"}},
        {"Rost", "H^4_2", "2", {"biquaternions, characteristic != 2"}},
        {"Kahn", "H^4_n", "bar(n); m = prod p_i^f_i", {"m_r(rho) = d_A rho_Kahn", "rho_Kahn([zeta]) = phi[j(p,n) h^4_m({a,b,c,d})]"}},
        {"KMRT", "bar(I^3 W'_q)", "2", {"biquaternions with a symplectic involution", "0 if sigma is hyperbolic"}},
    };
}

// ---------------------------------------------------------------- KMRT

namespace {

Elem trp(const AlgebraPtr& A, const Vec& x) { return A->trd(x) / A->field()->from_int(2); }

bool invertible(const AlgebraPtr& A, const Vec& x) { return !A->nrd(x).is_zero(); }

void require_kmrt_setting(const Involution& sigma) {
    const AlgebraPtr& A = sigma.algebra;
    if (A->degree() != 4 || A->factors().size() != 2) throw UsageError("KMRT invariant needs a biquaternion algebra");
    if (sigma.kind != Involution::Kind::Symplectic) throw UsageError("KMRT invariant needs a symplectic involution");
    if (A->field()->characteristic() == 2) throw UnsupportedTower("KMRT evaluation in characteristic 2 goes through the lift");
}

}  // namespace

Hyperbolicity hyperbolicity(const Involution& sigma) {
    const AlgebraPtr& A = sigma.algebra;
    Hyperbolicity out;
    auto div = is_division_biquaternion(A);
    if (div.division) {
        out.certificate.provenance = Provenance::Computed;
        out.certificate.detail.push_back("division algebra: no nontrivial idempotents, sigma is not hyperbolic");
        return out;
    }
    const FieldPtr& F = A->field();
    const size_t d = A->dim();
    Mat M = sigma.matrix;
    for (size_t i = 0; i < d; ++i) M[i][i] += F->one();
    std::vector<Vec> skew = kernel(M);
    std::vector<std::vector<Vec>> prod(skew.size(), std::vector<Vec>(skew.size()));
    for (size_t i = 0; i < skew.size(); ++i)
        for (size_t j = 0; j < skew.size(); ++j) prod[i][j] = A->mul(skew[i], skew[j]);
    const Elem quarter = F->one() / F->from_int(4);
    auto try_combo = [&](const std::vector<std::pair<size_t, int>>& c) -> bool {
        Vec sq = A->zero();
        for (auto [i, ci] : c)
            for (auto [j, cj] : c) sq = vec_add(sq, vec_scale(F->from_int(ci * cj), prod[i][j]));
        if (!A->is_scalar(sq)) return false;
        Elem lambda = sq[0];
        if (lambda.is_zero()) return false;
        PowerTest r = is_nth_power(lambda, 2);
        if (!r.is_power || !r.witness) return false;
        Vec s = A->zero();
        for (auto [i, ci] : c) s = vec_add(s, vec_scale(F->from_int(ci), skew[i]));
        // s' = s / (2 sqrt(lambda)) has s'^2 = 1/4
        s = vec_scale(F->one() / (F->from_int(2) * *r.witness), s);
        if (!is_zero_vec(vec_sub(A->mul(s, s), A->scalar(quarter)))) return false;
        out.idempotent = vec_add(A->scalar(F->one() / F->from_int(2)), s);
        return true;
    };
    const size_t m = skew.size();
    bool found = false;
    for (size_t i = 0; i < m && !found; ++i) found = try_combo({{i, 1}});
    for (size_t i = 0; i < m && !found; ++i)
        for (size_t j = i + 1; j < m && !found; ++j)
            for (int s : {1, -1})
                if (!found) found = try_combo({{i, 1}, {j, s}});
    for (size_t i = 0; i < m && !found; ++i)
        for (size_t j = i + 1; j < m && !found; ++j)
            for (size_t k = j + 1; k < m && !found; ++k)
                for (int s : {1, -1})
                    for (int t : {1, -1})
                        if (!found) found = try_combo({{i, 1}, {j, s}, {k, t}});
    if (found) {
        out.hyperbolic = true;
        out.certificate.provenance = Provenance::Computed;
        out.certificate.detail.push_back("idempotent e = " + A->format(*out.idempotent) + " with sigma(e) = 1 - e");
    } else {
        out.certificate.provenance = Provenance::Undecided;
        out.certificate.detail.push_back("algebra is not division and the bounded idempotent search found nothing");
    }
    return out;
}

std::vector<Vec> admissible_vs(const Involution& sigma, const Vec& a) {
    require_kmrt_setting(sigma);
    const AlgebraPtr& A = sigma.algebra;
    const FieldPtr& F = A->field();
    const Vec w = vec_scale(-F->one(), A->mul(sigma.apply(a), a));
    const Elem t = trp(A, w);
    auto admissible = [&](const Vec& v) {
        if (!in_symd(sigma, v) || !invertible(A, v)) return false;
        Vec lhs = vec_add(v, A->mul(w, v));
        return is_zero_vec(vec_sub(lhs, vec_scale(trp(A, v), w)));
    };
    std::vector<Vec> out;
    auto push = [&](const Vec& v) {
        if (out.size() >= 6 || !admissible(v)) return;
        for (const auto& o : out)
            if (is_zero_vec(vec_sub(o, v))) return;
        out.push_back(v);
    };
    const Elem two_t = F->from_int(2) + t;
    if (!two_t.is_zero()) push(vec_scale(F->one() / two_t, vec_add(A->one(), w)));
    // kernel of v -> v + w v - Trp(v) w on Symd
    const auto& S = sigma.symd;
    Mat L(A->dim(), Vec(S.size()));
    for (size_t j = 0; j < S.size(); ++j) {
        Vec img = vec_sub(vec_add(S[j], A->mul(w, S[j])), vec_scale(trp(A, S[j]), w));
        for (size_t i = 0; i < A->dim(); ++i) L[i][j] = img[i];
    }
    std::vector<Vec> ker;
    for (const auto& c : kernel(L)) {
        Vec v = A->zero();
        for (size_t j = 0; j < S.size(); ++j) v = vec_add(v, vec_scale(c[j], S[j]));
        ker.push_back(v);
    }
    for (const auto& v : ker) push(v);
    for (size_t i = 0; i < ker.size(); ++i)
        for (size_t j = i + 1; j < ker.size(); ++j) push(vec_add(ker[i], ker[j]));
    if (!out.empty() && !two_t.is_zero()) push(vec_scale(F->from_int(3), out[0]));
    return out;
}

KMRTResult kmrt_eval(const Involution& sigma, const Vec& a, std::optional<Vec> v) {
    require_kmrt_setting(sigma);
    const AlgebraPtr& A = sigma.algebra;
    const FieldPtr& F = A->field();
    if (!is_sl1(A, a)) throw UsageError("element is not in SL_1 (Nrd != 1)");
    KMRTResult out;
    out.w = vec_scale(-F->one(), A->mul(sigma.apply(a), a));
    auto hyp = hyperbolicity(sigma);
    out.certificate = hyp.certificate;
    out.hyperbolic_sigma = hyp.hyperbolic;
    if (v) {
        Vec vv = *v;
        bool ok = in_symd(sigma, vv) && invertible(A, vv) &&
                  is_zero_vec(vec_sub(vec_add(vv, A->mul(out.w, vv)), vec_scale(trp(A, vv), out.w)));
        if (!ok) throw UsageError("v is not admissible for this element");
        out.v = vv;
        out.v_rule = "given";
    } else {
        auto all = admissible_vs(sigma, a);
        if (all.empty()) throw MathError("no admissible v found");
        out.v = all[0];
        const Elem t = trp(A, out.w);
        out.v_rule = !(F->from_int(2) + t).is_zero() ? "(1 + w)/(2 + Trp(w))" : "invertible v in Symd with Trp(v) = 0";
    }
    // Phi_v(x) = Trp(sigma(x) v x) = 1/2 sum x_i x_j Trd(sigma(e_i) v e_j)
    const size_t d = A->dim();
    Vec tb(d);
    for (size_t k = 0; k < d; ++k) tb[k] = A->trd(A->basis(k));
    auto trd_lin = [&](const Vec& x) { return dot(x, tb); };
    std::vector<Vec> left(d);
    for (size_t i = 0; i < d; ++i) left[i] = A->mul(sigma.apply(A->basis(i)), out.v);
    Mat T(d, Vec(d));
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) T[i][j] = trd_lin(A->mul(left[i], A->basis(j)));
    Mat S(d, Vec(d));
    const Elem quarter = F->one() / F->from_int(4);
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) S[i][j] = (T[i][j] + T[j][i]) * quarter;
    out.phi = diagonalize_symmetric(S);
    out.phi_level = i_level(out.phi);
    out.certificate.detail.push_back("v rule: " + out.v_rule);
    out.certificate.detail.push_back("Phi_v level " + out.phi_level.text());
    if (hyp.hyperbolic) {
        // the invariant is 0 by definition; Phi_v is still reported
        out.cls = witt_class(QuadraticForm{F, {}, {}});
        out.level = out.cls.level();
        out.certificate.detail.push_back("sigma hyperbolic: the invariant is 0");
        return out;
    }
    out.cls = witt_class(out.phi);
    out.level = out.phi_level;
    if (out.certificate.provenance == Provenance::Undecided)
        out.certificate.detail.push_back("evaluated assuming sigma is not hyperbolic");
    else if (!out.level.complete)
        out.certificate.provenance = Provenance::Undecided;
    return out;
}

// ---------------------------------------------------------------- comparison maps

int64_t comparison_m_r(const RelativeGroup& g, int64_t x) {
    if (x < 0 || x >= g.order) throw UsageError("coordinate outside the relative group");
    return g.m_r(x);
}

int64_t comparison_pi_r(const RelativeGroup& g, int64_t y) {
    if (y < 0 || y >= g.modulus) throw UsageError("coordinate outside Z/" + std::to_string(g.modulus));
    return g.pi_r(y);
}

ComparisonReport comparison_report(const RelativeGroup& g) {
    ComparisonReport r;
    r.relative_order = g.order;
    r.modulus = g.modulus;
    r.per = g.period;
    for (int64_t x = 0; x < g.order; ++x) r.m_r_table.push_back(g.m_r(x));
    for (int64_t y = 0; y < g.modulus; ++y) r.pi_r_table.push_back(g.pi_r(y));
    r.m_r_injective = g.m_r_injective();
    r.pi_m_is_per = true;
    for (int64_t x = 0; x < g.order; ++x)
        if (g.pi_r(g.m_r(x)) != mod64(g.period * x, g.order)) r.pi_m_is_per = false;
    r.pi_tilde_surjective = g.pi_tilde_surjective();
    const std::string rel = "Z/" + std::to_string(g.order), full = "Z/" + std::to_string(g.modulus);
    r.m_r_text = rel + " -> " + full + ": x -> " + std::to_string(g.period) + "x" + (r.m_r_injective ? " (injective)" : "");
    r.pi_r_text = full + " -> " + rel + ": reduction modulo " + std::to_string(g.order);
    return r;
}

// ---------------------------------------------------------------- centre formulas

CentreValue centre_value_biquat(const FieldPtr& K, const Elem& a, const Elem& b, const Elem& c, const Elem& d) {
    if (K->characteristic() == 2) throw UnsupportedTower("centre value needs characteristic != 2");
    auto root = primitive_root_of_unity(K, 4);
    if (!root.root) throw MathError("missing root of unity: " + root.reason);
    Vec entries{K->one() + 4 * K->embed(a), K->embed(b), K->one() + 4 * K->embed(c), K->embed(d)};
    for (const auto& e : entries)
        if (e.is_zero()) throw UsageError("Pfister entries must be nonzero");
    CentreValue out;
    out.pfister = pfister(K, entries);
    out.cls = witt_class(out.pfister);
    out.level = i_level(out.pfister);
    if (out.level.complete) {
        out.certificate.provenance = Provenance::Computed;
    } else {
        // a 4-fold Pfister form lies in I^4 by construction
        out.level.level = std::max(out.level.level, 4);
        out.level.certificate.push_back("4-fold Pfister form: in I^4 by construction; vanishing not certified over " + K->to_string());
        out.certificate.provenance = Provenance::Undecided;
    }
    for (const auto& s : out.level.certificate) out.certificate.detail.push_back(s);
    out.certificate.detail.push_back("primitive 4th root of unity: " + root.root->to_string());
    return out;
}

namespace {

struct SymbolPair {
    int64_t n;
    Elem a, b, c, d;
};

SymbolPair symbol_pair(const AlgebraPtr& A) {
    if (A->factors().size() != 2) throw UsageError("need a product of two symbol algebras");
    const auto& P = A->factors()[0]->presentation();
    const auto& Q = A->factors()[1]->presentation();
    if (P.kind != PresentationKind::Symbol || Q.kind != PresentationKind::Symbol) throw UsageError("need a product of two symbol algebras");
    if (P.n != Q.n) throw UsageError("symbol algebras of different degrees");
    return {P.n, *P.a, *P.b, *Q.a, *Q.b};
}

bool is_primitive_root(const Elem& z, int64_t m) {
    if (!z.pow(m).is_one()) return false;
    for (int64_t q : prime_factors64(m))
        if (z.pow(m / q).is_one()) return false;
    return true;
}

// Nonvanishing of a K_4 class through residue coordinates.
std::optional<bool> certify_symbol(const KClass& s, Certificate& cert) {
    if (s.empty()) {
        cert.provenance = Provenance::Computed;
        cert.detail.push_back("symbol normalizes to 0");
        return false;
    }
    try {
        auto co = coh_coordinates(s);
        cert.provenance = Provenance::Computed;
        const auto& top = co.top();
        std::string v;
        for (auto x : top.value) v += (v.empty() ? "" : ",") + std::to_string(x);
        cert.detail.push_back("top coordinate (" + top.meaning + ") = " + (v.empty() ? "0" : v));
        return !co.zero();
    } catch (const Undecided& e) {
        cert.detail.push_back(std::string("undecided: ") + e.what());
    } catch (const UnsupportedTower& e) {
        cert.detail.push_back(std::string("unsupported tower: ") + e.what());
    } catch (const PrecisionExhausted& e) {
        cert.detail.push_back(std::string("precision exhausted: ") + e.what());
    }
    cert.provenance = Provenance::Undecided;
    return std::nullopt;
}

}  // namespace

CentreSymbol centre_symbol(const AlgebraPtr& A, std::optional<Elem> zeta) {
    auto sp = symbol_pair(A);
    const FieldPtr& F = A->field();
    const int64_t n2 = sp.n * sp.n;
    if (zeta) {
        if (!is_primitive_root(F->embed(*zeta), n2)) throw UsageError("zeta is not a primitive " + std::to_string(n2) + "-th root of unity");
    } else {
        auto r = primitive_root_of_unity(F, n2);
        if (!r.root) throw MathError("missing primitive " + std::to_string(n2) + "-th root of unity: " + r.reason);
    }
    CentreSymbol out;
    const int64_t p = F->characteristic();
    out.j = scalar_j(p, sp.n);
    out.modulus = kahn_bound(n2);
    out.symbol = k_symbol({sp.a, sp.b, sp.c, sp.d}, out.modulus);
    out.symbol_nonzero = certify_symbol(out.symbol, out.nonvanishing);
    return out;
}

std::string witness_name(WitnessAnswer w) {
    switch (w) {
        case WitnessAnswer::Nontrivial: return "true";
        case WitnessAnswer::NoConclusion: return "no conclusion";
        default: return "undecided";
    }
}

SK1Witness sk1_nontrivial_witness(const AlgebraPtr& A) {
    auto sp = symbol_pair(A);
    const FieldPtr& F = A->field();
    if (!is_prime64(sp.n)) throw UsageError("degree must be prime");
    auto r = primitive_root_of_unity(F, sp.n * sp.n);
    if (!r.root) throw UsageError("hypothesis violated: no primitive " + std::to_string(sp.n * sp.n) + "-th root of unity (" + r.reason + ")");
    SK1Witness out{WitnessAnswer::Undecided, k_symbol({sp.a, sp.b, sp.c, sp.d}, sp.n), {}};
    auto nz = certify_symbol(out.symbol, out.certificate);
    if (!nz)
        out.answer = WitnessAnswer::Undecided;
    else
        out.answer = *nz ? WitnessAnswer::Nontrivial : WitnessAnswer::NoConclusion;
    return out;
}

}  // namespace whitehead
