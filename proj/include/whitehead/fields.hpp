// Field towers: Q, F_q, symbolic p-adic fields, Laurent extensions and root adjunctions.
#pragma once

#include <climits>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "whitehead/arith.hpp"

namespace whitehead {

enum class FieldKind { Rationals, Finite, PAdic, Laurent, RootAdjoined };

class Field;
using FieldPtr = std::shared_ptr<const Field>;
class Elem;

// Marks an exact (untruncated) value.
constexpr int64_t kExact = INT64_MAX;

struct PAdicRep {
    std::optional<Rational> exact;  // known rational value
    int64_t val = 0;
    Integer unit;                   // unit mod p^(abs_prec - val); 0 encodes O(p^abs_prec)
    int64_t abs_prec = kExact;
};

struct LaurentRep {
    int64_t start = 0;       // exponent of coef[0]
    std::vector<Elem> coef;  // coef[0] != 0 unless empty
    int64_t order = kExact;  // terms of exponent >= order are unknown
};

struct ExtRep {
    std::vector<Elem> coef;  // polynomial in the adjoined root, reduced
};

class Elem {
public:
    FieldPtr field;
    std::variant<Rational, int64_t, PAdicRep, LaurentRep, ExtRep> rep;

    Elem() = default;
    Elem(FieldPtr f, decltype(rep) r) : field(std::move(f)), rep(std::move(r)) {}

    bool is_zero() const;
    bool is_one() const;
    Elem inv() const;
    Elem pow(int64_t e) const;
    std::string to_string() const;

    Elem& operator+=(const Elem& o);
    Elem& operator-=(const Elem& o);
    Elem& operator*=(const Elem& o);
    Elem& operator/=(const Elem& o);
};

Elem operator+(const Elem& a, const Elem& b);
Elem operator-(const Elem& a, const Elem& b);
Elem operator*(const Elem& a, const Elem& b);
Elem operator/(const Elem& a, const Elem& b);
Elem operator-(const Elem& a);
Elem operator*(int64_t k, const Elem& a);
Elem operator*(const Elem& a, int64_t k);
Elem operator+(const Elem& a, int64_t k);
Elem operator-(const Elem& a, int64_t k);
// Equality up to the precision carried by the operands.
bool operator==(const Elem& a, const Elem& b);
inline bool operator!=(const Elem& a, const Elem& b) { return !(a == b); }

class Field {
public:
    struct Tag {};

    static FieldPtr rationals();
    static FieldPtr finite(int64_t q);
    static FieldPtr padic(int64_t p, int precision = 8);
    static FieldPtr laurent(FieldPtr base, std::string var, int precision = 16);
    // Throws UsageError when the root cannot be tracked (see README).
    static FieldPtr adjoin_root(FieldPtr base, int64_t m);

    Field(Tag, FieldKind kind) : kind_(kind) {}

    FieldKind kind() const { return kind_; }
    int64_t characteristic() const;
    // Prime of the bottom finite or p-adic field, 0 for Q.
    int64_t prime() const;
    const FieldPtr& base() const { return base_; }
    const std::string& variable() const { return var_; }
    int precision() const { return precision_; }
    int64_t root_order() const { return m_; }
    bool adjunction_trivial() const { return trivial_; }
    int64_t order() const { return q_; }
    int degree() const { return e_; }
    const std::vector<int64_t>& modulus() const { return modulus_; }
    std::string to_string() const { return name_; }

    // Node that determines element representation (skips trivial root adjunctions).
    const Field& rep_node() const;
    FieldPtr self() const;
    bool same(const Field& o) const { return name_ == o.name_; }
    // Bottom of the tower (Q, F_q or Q_p).
    const Field& bottom() const;
    // Number of Laurent layers above the bottom.
    int laurent_depth() const;

    // (variable, residue field) from the outermost Laurent layer inward.
    std::vector<std::pair<std::string, FieldPtr>> residue_chain() const;

    Elem zero() const;
    Elem one() const;
    Elem from_int(const Integer& n) const;
    Elem from_rational(const Rational& r) const;
    // Laurent variable (this layer), finite-field generator, or adjoined root.
    Elem generator() const;
    // Looks up a variable name anywhere in the tower.
    std::optional<Elem> named(const std::string& name) const;
    // Image of an element of a subfield of this tower.
    Elem embed(const Elem& x) const;
    bool contains(const Field& sub) const;

    // Finite field index helpers.
    Elem ff_from_index(int64_t idx) const;
    int64_t ff_index(const Elem& x) const;

    // Internal arithmetic used by Elem.
    Elem add(const Elem& a, const Elem& b) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem invert(const Elem& a) const;
    bool is_zero(const Elem& a) const;
    std::string print(const Elem& a) const;

    // Minimal polynomial of the adjoined root over the base (genuine adjunctions).
    const std::vector<Elem>& minpoly() const { return minpoly_; }

private:
    FieldKind kind_;
    std::string name_;
    FieldPtr base_;
    std::weak_ptr<const Field> self_;
    int64_t p_ = 0;
    int64_t q_ = 0;
    int e_ = 1;
    std::vector<int64_t> modulus_;  // finite field: monic irreducible, low degree first
    int precision_ = 0;
    std::string var_;
    int64_t m_ = 0;
    bool trivial_ = false;
    std::vector<Elem> minpoly_;  // monic, low degree first, coefficients in base
    std::optional<Elem> zeta_;   // trivial adjunction: chosen root as a base element

};

// ---- parsing and printing ----
FieldPtr parse_field(const std::string& descriptor);
Elem parse_element(const FieldPtr& F, const std::string& text,
                   const std::map<std::string, Elem>& symbols = {});

// ---- p-adic helpers ----
// Valuation of a nonzero element of a p-adic field; throws PrecisionExhausted on O(p^k).
int64_t padic_valuation(const Elem& x);
// Unit part modulo p^k; throws PrecisionExhausted if fewer digits are known.
Integer padic_unit(const Elem& x, int64_t k);
int64_t padic_relative_precision(const Elem& x);

// ---- Laurent helpers ----
int64_t laurent_valuation(const Elem& x);
Elem laurent_coefficient(const Elem& x, int64_t exponent);
Elem laurent_monomial(const FieldPtr& F, const Elem& c, int64_t exponent);
bool laurent_is_exact(const Elem& x);

// ---- operations ----
struct PowerTest {
    bool is_power = false;
    std::optional<Elem> witness;
    std::string certificate;
};
PowerTest is_nth_power(const Elem& x, int64_t n);

struct RootOfUnity {
    std::optional<Elem> root;
    std::string reason;  // explains absence
};
RootOfUnity primitive_root_of_unity(const FieldPtr& F, int64_t m);

struct LaurentSplit {
    int64_t valuation;
    Elem unit;                            // leading coefficient, in the base field
    Elem tail;                            // 1 + higher terms
    std::optional<int64_t> unit_valuation;  // valuation of the unit in a valued base
};
LaurentSplit laurent_split(const Elem& x);

// Discrete valuation attached to the outermost layer (Laurent variable or p).
int64_t top_valuation(const Elem& x);

}  // namespace whitehead
