// Central simple algebras by structure constants: symbol algebras, p-algebras,
// cyclic algebras, tensor products, reduced characteristic data and involutions.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "whitehead/forms.hpp"
#include "whitehead/linalg.hpp"

namespace whitehead {

enum class PresentationKind { Symbol, PAlgebra, CyclicKummer, CyclicArtinSchreier, Tensor, Opaque };

struct Presentation {
    PresentationKind kind = PresentationKind::Opaque;
    std::optional<Elem> a, b;
    int64_t n = 0;
    std::optional<Elem> zeta;  // root of unity used in the commutation rule
    std::string describe() const;
};

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

class Algebra {
public:
    struct Tag {};

    // x^n = a, y^n = b, xy = zeta yx; zeta defaults to the field's chosen primitive n-th root.
    static AlgebraPtr symbol(const Elem& a, const Elem& b, int64_t n, std::optional<Elem> zeta = std::nullopt);
    // x^p - x = a, y^p = b, xy = y(x+1), p the characteristic.
    static AlgebraPtr p_algebra(const Elem& a, const Elem& b);
    // (k(a^(1/n))/k, sigma, b) with sigma(r) = zeta r; presented by r, y with y r = zeta r y.
    static AlgebraPtr cyclic_kummer(const Elem& a, const Elem& b, int64_t n, std::optional<Elem> zeta = std::nullopt);
    // (k(r)/k, sigma, b) with r^p - r = a, sigma(r) = r + 1, y r = (r+1) y.
    static AlgebraPtr cyclic_artin_schreier(const Elem& a, const Elem& b);
    static AlgebraPtr tensor(const AlgebraPtr& left, const AlgebraPtr& right);

    Algebra(Tag) {}

    const FieldPtr& field() const { return F_; }
    size_t dim() const { return labels_.size(); }
    int64_t degree() const { return deg_; }
    int64_t period_bound() const { return period_bound_; }
    const Presentation& presentation() const { return pres_; }
    // Tensor factors (empty for primitive presentations).
    const std::vector<AlgebraPtr>& factors() const { return factors_; }
    const std::vector<std::string>& labels() const { return labels_; }
    std::string describe() const;

    Vec zero() const;
    Vec one() const;
    Vec basis(size_t i) const;
    Vec scalar(const Elem& c) const;
    Vec mul(const Vec& x, const Vec& y) const;
    Vec add(const Vec& x, const Vec& y) const { return vec_add(x, y); }
    Vec sub(const Vec& x, const Vec& y) const { return vec_sub(x, y); }
    Vec scale(const Elem& c, const Vec& x) const { return vec_scale(c, x); }
    Vec power(const Vec& x, int64_t e) const;
    // Matrix of y -> x y in the basis.
    Mat left_mult(const Vec& x) const;
    std::optional<Vec> inverse(const Vec& x) const;
    bool is_scalar(const Vec& x) const;

    // Monic reduced characteristic polynomial (lowest degree first).
    Poly reduced_char_poly(const Vec& x) const;
    // Same via the left-regular representation and an exact deg-th root.
    Poly reduced_char_poly_regular(const Vec& x) const;
    Elem nrd(const Vec& x) const;
    Elem trd(const Vec& x) const;

    // Named generators: x, y (primitive) or x1, y1, x2, y2 (tensor of two).
    const std::map<std::string, Vec>& generators() const { return gens_; }
    std::optional<Vec> atoms_of(const std::string& name) const {
        auto it = atoms_.find(name);
        if (it == atoms_.end()) return std::nullopt;
        return it->second;
    }
    Vec parse(const std::string& text) const;
    std::string format(const Vec& x) const;
    // Image of left (x) right for tensor products.
    Vec tensor_elem(const Vec& left, const Vec& right) const;

    // Checks associativity and unit laws on basis triples (all of them when dim <= 16).
    bool check_associative(size_t max_triples = 5000) const;
    // Checks the presentation relations and the splitting embedding on generators.
    bool check_relations() const;
    // Nondegeneracy of the trace form (x, y) -> Trd(xy).
    bool trace_form_nondegenerate() const;

    struct Splitting;  // matrices over a commutative splitting ring

private:
    FieldPtr F_;
    int64_t deg_ = 0;
    int64_t period_bound_ = 0;
    Presentation pres_;
    std::vector<AlgebraPtr> factors_;
    std::vector<std::string> labels_;
    // sparse structure constants: table_[i][j] = list of (k, c) with e_i e_j = sum c e_k
    std::vector<std::vector<std::vector<std::pair<size_t, Elem>>>> table_;
    std::map<std::string, Vec> gens_;
    std::map<std::string, Vec> atoms_;  // identifiers accepted by parse
    std::shared_ptr<const Splitting> split_;

    static AlgebraPtr build_primitive(const FieldPtr& F, PresentationKind kind, const Elem& a, const Elem& b, int64_t n,
                                      std::optional<Elem> zeta);
    void finish();
};

// symbol(a; b; n) | palg(a; b) | cyclic_kummer(a; b; n) | cyclic_as(a; b) | A (*) B, parentheses allowed.
AlgebraPtr parse_algebra(const FieldPtr& F, const std::string& text);

// Albert form <a, b, -ab, -c, -d, cd> of (a,b) (x) (c,d).
QuadraticForm albert_form(const AlgebraPtr& A);
struct DivisionResult {
    bool division = false;
    QuadraticForm albert;
    IsotropyResult isotropy;
};
DivisionResult is_division_biquaternion(const AlgebraPtr& A);

struct Involution {
    enum class Kind { Orthogonal, Symplectic };
    AlgebraPtr algebra;
    Mat matrix;               // column j = image of basis element j
    Kind kind = Kind::Orthogonal;
    std::vector<Vec> symd;    // basis of {a + sigma(a)}
    std::string description;

    Vec apply(const Vec& x) const;
    std::string kind_name() const { return kind == Kind::Symplectic ? "symplectic" : "orthogonal"; }
};

// Builds an involution from its matrix after checking the axioms; determines the type.
Involution make_involution(const AlgebraPtr& A, const Mat& M, std::string description);
// Canonical involution z -> Trd(z) - z of a quaternion algebra.
Involution canonical_involution(const AlgebraPtr& Q);
// gamma_1 (x) (Int(s) o gamma_2) on Q1 (x) Q2; s defaults to the first anti-symmetric generator of Q2.
Involution make_symplectic_involution(const AlgebraPtr& A, std::optional<Vec> s = std::nullopt);
// gamma_1 (x) gamma_2.
Involution canonical_product_involution(const AlgebraPtr& A);
std::vector<Vec> symmetrized_basis(const Involution& sigma);
bool in_symd(const Involution& sigma, const Vec& a);

struct PfaffianData {
    Poly prp;
    Elem trp;
    Elem nrp;
};
PfaffianData pfaffian_data(const Involution& sigma, const Vec& a);

bool is_sl1(const AlgebraPtr& A, const Vec& x);
Vec commutator(const AlgebraPtr& A, const Vec& x, const Vec& y);

}  // namespace whitehead
