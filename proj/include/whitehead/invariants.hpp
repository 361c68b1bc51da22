// SK_1 of Platonov's algebras, Kahn's bound and torsion exponents, the KMRT invariant of
// a biquaternion algebra, comparison maps of relative groups and the centre formulas.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "whitehead/algebras.hpp"
#include "whitehead/forms.hpp"
#include "whitehead/ktheory.hpp"

namespace whitehead {

enum class Provenance { Computed, PaperCited, Undecided };
std::string provenance_name(Provenance p);

struct Certificate {
    Provenance provenance = Provenance::Undecided;
    std::vector<std::string> detail;
};

// ---- Platonov SK_1 ----

// A = (a1, t1)_n (x) (a2, t2)_n over k((t1))((t2)) with K_i = k(a_i^(1/n)).
struct PlatonovConfig {
    FieldPtr k;  // tame p-adic field containing the n-th roots of unity
    int64_t n = 0;
    Elem a1, a2;
};

// Subgroup of Q/Z given by its order N, i.e. (1/N)Z/Z.
struct BrauerPiece {
    std::string name;
    int64_t order = 0;
};

struct SK1Result {
    int64_t order = 0;
    std::string group;                   // "Z/n"
    std::string generator;               // class of 1/[K:k] in the quotient
    std::vector<BrauerPiece> pieces;     // Br(K/k), Br(K1/k), Br(K2/k)
    int64_t kummer_subgroup_order = 0;   // order of <a1, a2> in k^x / k^xn
    Certificate division;
    AlgebraPtr algebra;                  // built for n = 2 only
};

// Throws MathError("not linearly disjoint") when <a1, a2> has order < n^2.
SK1Result sk1_platonov(const PlatonovConfig& cfg);
// Order of the subgroup generated by a1, a2 in k^x / k^xn for a tame p-adic k.
int64_t kummer_subgroup_order(const FieldPtr& k, const Elem& a1, const Elem& a2, int64_t n);

// ---- Kahn ----

// n-bar = prod p^(e-1) over n = prod p^e.
int64_t kahn_bound(int64_t n);

struct TorsionFactor {
    int64_t p = 0;
    int64_t ind = 0;
    int64_t per = 0;
};
struct TorsionResult {
    int64_t m = 1;
    std::vector<int> exponents;  // f_i
    std::vector<std::string> rules;
};
TorsionResult kahn_torsion(const std::vector<TorsionFactor>& factors);
// "(3,9,3),(2,4,2)"
std::vector<TorsionFactor> parse_torsion_factors(const std::string& text);

// ---- formal scalars and invariant descriptors ----

struct FormalScalar {
    std::string name;
    int64_t modulus = 0;
    std::vector<std::string> constraints;  // only constraints with a source are attached

    void tighten(const std::string& c);
    std::string to_string() const;
};

FormalScalar scalar_j(int64_t p, int64_t n);       // centre formula factor, modulo m = bar(n^2)
FormalScalar scalar_i(int64_t p, int64_t m);       // relative-group factor
FormalScalar scalar_d(int64_t n);                  // d_A in Z/n-bar
FormalScalar scalar_lambda(int64_t n);             // Platonov factor, != 0 mod bar(n^2)
FormalScalar scalar_i_s91(int64_t n);              // i_S91(0, n), nonzero for odd n

struct InvariantDescriptor {
    std::string name;
    std::string value_group;
    std::string torsion_bound;
    std::vector<std::string> relations;  // recorded, never assumed
};
std::vector<InvariantDescriptor> invariant_descriptors();

// ---- KMRT ----

struct Hyperbolicity {
    bool hyperbolic = false;
    Certificate certificate;
    std::optional<Vec> idempotent;  // sigma(e) = 1 - e
};
// Division algebras are certified non-hyperbolic; otherwise a bounded search for
// e = 1/2 + s with sigma(s) = -s and s^2 = 1/4 runs.
Hyperbolicity hyperbolicity(const Involution& sigma);

// Invertible v in Symd with v (Trp(v) - v)^-1 = -sigma(a) a: the closed form first, then
// the remaining kernel vectors of the linear condition v + w v - Trp(v) w = 0.
std::vector<Vec> admissible_vs(const Involution& sigma, const Vec& a);

struct KMRTResult {
    Vec w;
    Vec v;
    std::string v_rule;
    QuadraticForm phi;  // 16-dimensional
    ILevel phi_level;
    WittClass cls;      // the invariant: 0 when sigma is hyperbolic, else the class of phi
    ILevel level;
    bool hyperbolic_sigma = false;
    Certificate certificate;
};
// Throws UsageError if Nrd(a) != 1 and UnsupportedTower in characteristic 2.
KMRTResult kmrt_eval(const Involution& sigma, const Vec& a, std::optional<Vec> v = std::nullopt);

// ---- comparison maps ----

struct ComparisonReport {
    int64_t relative_order = 0;
    int64_t modulus = 0;
    int64_t per = 0;
    std::vector<int64_t> m_r_table;   // m_r(x) for x in the relative group
    std::vector<int64_t> pi_r_table;  // pi_r(y) for y in Z/n
    bool m_r_injective = false;
    bool pi_m_is_per = false;         // pi_r o m_r = multiplication by per
    bool pi_tilde_surjective = false;
    std::string m_r_text, pi_r_text;
};
int64_t comparison_m_r(const RelativeGroup& g, int64_t x);
int64_t comparison_pi_r(const RelativeGroup& g, int64_t y);
ComparisonReport comparison_report(const RelativeGroup& g);

// ---- centre formulas ----

struct CentreValue {
    QuadraticForm pfister;  // <<4a+1, b, 4c+1, d>>
    WittClass cls;
    ILevel level;
    Certificate certificate;
};
// Requires a primitive 4th root of unity in the tower.
CentreValue centre_value_biquat(const FieldPtr& K, const Elem& a, const Elem& b, const Elem& c, const Elem& d);

struct CentreSymbol {
    FormalScalar j;
    int64_t modulus = 0;  // m = bar(n^2)
    KClass symbol{nullptr, 4, 1};  // {a, b, c, d} mod m
    Certificate nonvanishing;
    std::optional<bool> symbol_nonzero;
};
// A = (a,b)_n (x) (c,d)_n; zeta must be a primitive n^2-th root (nullopt: looked up).
CentreSymbol centre_symbol(const AlgebraPtr& A, std::optional<Elem> zeta = std::nullopt);

enum class WitnessAnswer { Nontrivial, NoConclusion, Undecided };
std::string witness_name(WitnessAnswer w);
struct SK1Witness {
    WitnessAnswer answer = WitnessAnswer::Undecided;
    KClass symbol{nullptr, 4, 1};
    Certificate certificate;
};
// A = (a,b)_l (x) (c,d)_l with l prime and a primitive l^2-th root of unity in the base.
SK1Witness sk1_nontrivial_witness(const AlgebraPtr& A);

}  // namespace whitehead
