// Milnor K-symbols modulo m, tame residues, the tame/Hilbert pairing of a p-adic field,
// residue coordinates over Laurent towers and relative groups H^4_{n,A^r}.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "whitehead/algebras.hpp"
#include "whitehead/fields.hpp"

namespace whitehead {

inline constexpr const char* kResidueConvention = "d_t{t, u2, ..., ur} = {u2, ..., ur}; t is moved to the front first";

struct KTerm {
    std::vector<Elem> slots;
    int64_t coef = 1;
};

class KClass {
public:
    KClass(FieldPtr F, int degree, int64_t modulus) : F_(std::move(F)), degree_(degree), m_(modulus) {}

    const FieldPtr& field() const { return F_; }
    int degree() const { return degree_; }
    int64_t modulus() const { return m_; }
    const std::vector<KTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    void add_term(std::vector<Elem> slots, int64_t coef = 1);
    std::string to_string() const;

private:
    FieldPtr F_;
    int degree_;
    int64_t m_;
    std::vector<KTerm> terms_;
};

// Pure symbol {x_1, ..., x_r} mod m, normalized.
KClass k_symbol(const std::vector<Elem>& xs, int64_t m);
KClass k_add(const KClass& a, const KClass& b);
KClass k_scale(int64_t c, const KClass& a);
// Product in K_*: concatenation of slots.
KClass k_mul(const KClass& a, const KClass& b);
// Applies Steinberg, {x,-x} = 0, {x,x} = {x,-1}, m-th power slots and graded
// commutativity until nothing changes.
KClass k_normalize(const KClass& c);
// Zero test over supported towers; nullopt when undecided.
std::optional<bool> k_is_zero(const KClass& c);

// Residue along the outermost Laurent variable (which must be named var). sign = -1
// gives the opposite convention (t moved to the back); group orders do not depend on it.
KClass tame_residue(const KClass& c, const std::string& var, int sign = 1);
// Image under t -> 1 of the unit part (the other splitting component).
KClass specialization(const KClass& c, const std::string& var);

// Pairing k^x x k^x -> Z/m on a p-adic field: tame symbol (m | p-1) or the
// Hilbert symbol for m = 2. The identification mu_m = Z/m uses the generator
// g^((p-1)/m) with g the least primitive root mod p.
int64_t hilbert_pairing(const Elem& a, const Elem& b, int64_t m);
int64_t hilbert_pairing(const Rational& a, const Rational& b, int64_t p, int64_t m);

struct Coordinate {
    std::vector<std::string> residues;  // variables residued, in order
    int degree = 0;                     // degree of the class over the bottom field
    std::vector<int64_t> value;
    std::vector<int64_t> orders;        // value[i] lives in Z/orders[i]
    std::string meaning;
};

struct CohCoordinates {
    int64_t modulus = 0;
    int degree = 0;
    std::vector<Coordinate> coords;  // coordinates[k] for each subset of Laurent variables
    // All-variable coordinate.
    const Coordinate& top() const { return coords.back(); }
    bool zero() const;
};

// Iterates the splitting through all Laurent layers. Throws Undecided or UnsupportedTower.
CohCoordinates coh_coordinates(const KClass& c);

struct RelativeGroup {
    int64_t modulus = 0;       // n: the group H^4_n has coordinate Z/n
    int64_t r = 0;
    int64_t period = 0;        // period bound of A used by m_r
    int64_t order = 0;         // |H^4_{n,A^r}|
    int64_t subgroup_gen = 0;  // residue subgroup = subgroup_gen * Z/n
    std::vector<std::string> generators;  // products {x,y}.r[A] used
    std::vector<int64_t> generator_values;
    std::string describe() const { return "Z/" + std::to_string(order); }

    // m_r: relative class -> H^4_n (multiply by the period, then include).
    int64_t m_r(int64_t x) const;
    // pi_r: H^4_n -> relative group.
    int64_t pi_r(int64_t y) const;
    bool m_r_well_defined() const;
    bool m_r_injective() const;
    // Whether the identity of the relative group factors through pi_r.
    bool pi_tilde_surjective() const;
};

// A = symbol(a1; t1; d) (*) symbol(a2; t2; d) over a tame Qp((t1))((t2)), d | n.
RelativeGroup relative_group(const AlgebraPtr& A, int64_t r, int64_t n);
// Same from presentation data: [A] = sum of degree-d symbols (a_i, b_i), period bound per.
RelativeGroup relative_group(const FieldPtr& F, const std::vector<std::pair<Elem, Elem>>& symbols, int64_t d,
                             int64_t per, int64_t r, int64_t n);

// K_2 class of A in K_2/n: (n/d) ({a1, b1} + {a2, b2}).
KClass algebra_class(const AlgebraPtr& A, int64_t n);

}  // namespace whitehead
