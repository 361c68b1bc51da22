// Quadratic forms, Witt classes, Pfister forms, isotropy and I^n-level certificates.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "whitehead/linalg.hpp"

namespace whitehead {

// Diagonal part <a_1, ..., a_r> followed by binary blocks [a, b] = a x^2 + x y + b y^2.
// Blocks only occur in characteristic 2.
struct QuadraticForm {
    FieldPtr field;
    Vec diag;
    std::vector<std::pair<Elem, Elem>> blocks;

    size_t dim() const { return diag.size() + 2 * blocks.size(); }
    // Coordinates: diagonal slots first, then each block's pair.
    Elem evaluate(const Vec& v) const;
    std::string to_string() const;
};

QuadraticForm diagonal_form(const FieldPtr& F, const Vec& entries);
QuadraticForm diagonal_form(const FieldPtr& F, const std::vector<int64_t>& entries);
QuadraticForm block_form(const FieldPtr& F, const std::vector<std::pair<Elem, Elem>>& blocks);
QuadraticForm orthogonal_sum(const QuadraticForm& a, const QuadraticForm& b);
QuadraticForm scaled(const Elem& lambda, const QuadraticForm& q);
QuadraticForm hyperbolic_plane(const FieldPtr& F);
// q(x) = x^T S x for symmetric S, diagonalized (characteristic != 2).
QuadraticForm diagonalize_symmetric(const Mat& S);

// <<a_1,...,a_n>> = <1,-a_1> (x) ... (x) <1,-a_n>; in characteristic 2 the bilinear
// (n-1)-fold Pfister form times the block [1, a_n].
QuadraticForm pfister(const FieldPtr& F, const Vec& entries);
inline constexpr const char* kPfisterConvention = "<<a1..an>> = <1,-a1>(x)...(x)<1,-an>; char 2: <<a1..an-1>>_b (x) [1,an]";

struct IsotropyResult {
    bool isotropic = false;
    std::optional<Vec> witness;          // q(witness) = 0 (up to carried precision)
    std::vector<std::string> certificate; // reasoning chain, outermost first
};
IsotropyResult isotropy(const QuadraticForm& q);

// Search over integer vectors for a zero of a diagonal form over Q (fixed order).
std::optional<Vec> rational_witness_search(const QuadraticForm& q, int64_t radius);

// Invariants over the places of Q.
struct LocalData {
    Integer place;        // prime, or kRealPlace
    int hasse;            // prod_{i<j} (a_i, a_j)
    int normalized;       // Clifford-type invariant of an I^2 form (1 when trivial)
};

struct ILevel {
    static constexpr int kZero = 1000;
    int level = 0;          // class lies in I^level (bilinear filtration); kZero: class is 0
    bool complete = true;   // false: higher levels could not be decided
    std::vector<std::string> certificate;
    bool zero() const { return level == kZero; }
    std::string text() const;
};

class WittClass {
public:
    WittClass() = default;
    explicit WittClass(QuadraticForm q);

    const FieldPtr& field() const { return rep_.field; }
    // Representative after removing the hyperbolic planes that were found.
    const QuadraticForm& representative() const { return rep_; }
    size_t hyperbolic_removed() const { return removed_; }
    bool kernel_certified() const { return anisotropic_; }
    ILevel level() const;
    bool is_zero() const;

    friend WittClass witt_add(const WittClass& a, const WittClass& b);
    friend WittClass witt_neg(const WittClass& a);

private:
    QuadraticForm rep_;
    size_t removed_ = 0;
    bool anisotropic_ = false;
};

WittClass witt_class(const QuadraticForm& q);
WittClass witt_add(const WittClass& a, const WittClass& b);
WittClass witt_neg(const WittClass& a);
// Diagonal bilinear form times a class.
WittClass bilinear_mult(const Vec& b, const WittClass& c);
bool witt_equal(const WittClass& a, const WittClass& b);

ILevel i_level(const QuadraticForm& q);
inline ILevel i_level(const WittClass& c) { return c.level(); }

// Signature of a diagonal form over Q.
int64_t signature(const QuadraticForm& q);
// Signed discriminant (-1)^{n(n-1)/2} prod a_i (diagonal forms).
Elem signed_discriminant(const QuadraticForm& q);
// Hasse invariants of a diagonal form over Q at 2, infinity and the primes of its entries.
std::vector<LocalData> local_invariants(const QuadraticForm& q);

// Arf invariant of a block form in characteristic 2, reduced over finite fields to 0 or 1.
struct ArfValue {
    Elem value;                 // sum a_i b_i
    std::optional<int> reduced; // class in k / {x^2 + x} when decidable
};
ArfValue arf_invariant(const QuadraticForm& q);

}  // namespace whitehead
