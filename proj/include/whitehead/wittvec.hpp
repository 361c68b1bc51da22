// Witt vectors of length <= 3 in characteristic p, logarithmic-differential classes
// w (x) b1 (x) ... (x) bq modulo their relations, Artin-Schreier-Witt characters and the
// maps used to lift characteristic-2 biquaternions: projection, Kato's map, i_* and the
// algebra lift [a,b) (x) [c,d) -> (4a+1,b) (x) (4c+1,d).
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "whitehead/algebras.hpp"
#include "whitehead/ktheory.hpp"

namespace whitehead {

// Polynomial with integer coefficients in 2l variables X_0..X_{l-1}, Y_0..Y_{l-1}.
using MPoly = std::map<std::vector<int>, Integer>;

struct WittPolynomials {
    int64_t p = 0;
    int length = 0;
    std::vector<MPoly> sum, prod, neg;  // neg uses only the X variables
};
// Computed once per (p, l) from ghost components and cached.
const WittPolynomials& witt_polynomials(int64_t p, int length);

struct WittVector {
    FieldPtr field;
    std::vector<Elem> comps;

    int length() const { return static_cast<int>(comps.size()); }
    bool is_zero() const;
    std::string to_string() const;
};

WittVector witt_vector(const FieldPtr& F, const std::vector<Elem>& comps);
WittVector witt_vector(const FieldPtr& F, const std::vector<int64_t>& comps);
WittVector witt_zero(const FieldPtr& F, int length);
WittVector witt_one(const FieldPtr& F, int length);
WittVector witt_add(const WittVector& u, const WittVector& v);
WittVector witt_mul(const WittVector& u, const WittVector& v);
WittVector witt_neg(const WittVector& u);
WittVector witt_sub(const WittVector& u, const WittVector& v);
WittVector witt_times(int64_t k, const WittVector& u);
bool witt_equal(const WittVector& u, const WittVector& v);
WittVector frobenius(const WittVector& w);
// W_l -> W_{l-1}: drops the last component ((a0, a1) -> (a0) for l = 2).
WittVector pi_projection(const WittVector& w);

// Class in H^{q+1}_{p^l}: sum of w (x) b_1 (x) ... (x) b_q.
struct LogDiffTerm {
    WittVector w;
    std::vector<Elem> slots;
};

class LogDiffClass {
public:
    LogDiffClass(FieldPtr F, int length, int q) : F_(std::move(F)), l_(length), q_(q) {}
    const FieldPtr& field() const { return F_; }
    int length() const { return l_; }
    int q() const { return q_; }
    int degree() const { return q_ + 1; }
    const std::vector<LogDiffTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    void add_term(const WittVector& w, std::vector<Elem> slots);
    std::string to_string() const;

private:
    FieldPtr F_;
    int l_;
    int q_;
    std::vector<LogDiffTerm> terms_;
};

LogDiffClass logdiff(const WittVector& w, const std::vector<Elem>& slots);
LogDiffClass logdiff_add(const LogDiffClass& a, const LogDiffClass& b);
// Kills repeated slots, (0,..,a,..,0) (x) a, unit slots, (F - 1)-images (finite fields)
// and merges terms; repeats until stable.
LogDiffClass logdiff_normalize(const LogDiffClass& c);
// The map r: (a0, ..., a_{l-1}) (x) b ... -> (a0, ..., a_{l-2}) (x) b ...
LogDiffClass logdiff_project(const LogDiffClass& c);
// Zero test: finite fields (all degrees) and F_q((t)) with l = 1 in degrees 1 and 2.
std::optional<bool> logdiff_is_zero(const LogDiffClass& c);

// Image of F - 1 on W_l(k) for a finite field k (brute force, small q^l).
bool in_frobenius_image(const WittVector& w);

// Artin-Schreier-Witt character attached to w: a solution of F(v) - v = w in the
// smallest extension F_{q^k} where one exists, and the order of w modulo (F - 1).
struct ASWCharacter {
    WittVector w;
    FieldPtr extension;
    WittVector solution;
    int64_t order = 0;
};
ASWCharacter asw_character(const WittVector& w, int max_degree = 8);
// Solutions define the same character iff they differ by a vector over the prime field.
bool same_character(const ASWCharacter& a, const ASWCharacter& b);
ASWCharacter project_character(const ASWCharacter& c);

// Residue tower plus declared integral lifts of the finitely many elements in play.
class LiftDatum {
public:
    LiftDatum(FieldPtr residue, FieldPtr lift);
    const FieldPtr& residue() const { return residue_; }
    const FieldPtr& lift() const { return lift_; }
    // Checks that the lift reduces to the residue element when the towers allow it.
    void declare(const Elem& residue_elem, const Elem& lift_elem);
    Elem lift_of(const Elem& residue_elem) const;
    bool has(const Elem& residue_elem) const;

private:
    FieldPtr residue_, lift_;
    std::map<std::string, Elem> lifts_;
};
// Reduction of an integral element of Q, Q_p or a Laurent tower over them to the residue tower.
Elem reduce_to_residue(const Elem& x, const FieldPtr& residue);

// Kato's map: b dlog a1 ^ dlog a2 ^ dlog a3 -> {1 + 4b, a1, a2, a3} mod 2.
KClass kato_phi(const Elem& b, const Elem& a1, const Elem& a2, const Elem& a3);

// i_*(w (x) b1 ... bq) = i(w) u h({b1..bq}): a character plus the lifted symbol.
struct IStarTerm {
    ASWCharacter chi;
    KClass symbol;
};
struct IStarClass {
    int64_t modulus = 0;
    std::vector<IStarTerm> terms;
    std::string to_string() const;
};
IStarClass i_star(const LogDiffClass& c, const LiftDatum& D);
// r on the lifted side: characters projected, symbols reduced modulo p^(l-1).
IStarClass r_lifted(const IStarClass& c);
bool istar_equal(const IStarClass& a, const IStarClass& b);

struct LiftedAlgebra {
    AlgebraPtr algebra;                    // (4a+1, b) (x) (4c+1, d) over the lift field
    std::map<std::string, Vec> generator_map;  // u1, v1, u2, v2 in terms of x1, y1, x2, y2
    std::vector<std::string> checks;       // relations verified in the lifted algebra
    bool verified = false;
};
// A = palg(a; b) (x) palg(c; d) in characteristic 2 with lifts of a, b, c, d in D.
LiftedAlgebra lift_algebra(const AlgebraPtr& A, const LiftDatum& D);
// Same from lifted entries directly.
LiftedAlgebra lift_algebra(const FieldPtr& K, const Elem& a, const Elem& b, const Elem& c, const Elem& d);

}  // namespace whitehead
