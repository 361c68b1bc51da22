#include <random>

#include "doctest.h"
#include "whitehead/algebras.hpp"

using namespace whitehead;

namespace {

FieldPtr Q() { return Field::rationals(); }

AlgebraPtr hamilton() {
    auto m1 = Q()->from_int(-1);
    return Algebra::symbol(m1, m1, 2, m1);
}

Vec random_elem(const AlgebraPtr& A, std::mt19937_64& rng, int lo = -3, int hi = 3, int zeros = 0) {
    std::uniform_int_distribution<int> d(lo, hi), z(0, 9);
    Vec v = A->zero();
    for (auto& c : v) c = z(rng) < zeros ? A->field()->zero() : A->field()->from_int(d(rng));
    return v;
}

std::string poly(const Poly& f) { return poly_to_string(f); }

}  // namespace

TEST_CASE("Hamilton quaternions") {
    auto H = hamilton();
    CHECK(H->dim() == 4);
    CHECK(H->degree() == 2);
    CHECK(poly(H->reduced_char_poly(H->parse("1 + x"))) == poly_to_string(Poly{Q()->from_int(2), Q()->from_int(-2), Q()->one()}));
    auto i = H->parse("x");
    CHECK(poly(H->reduced_char_poly(i)) == poly_to_string(Poly{Q()->one(), Q()->zero(), Q()->one()}));
    CHECK(H->nrd(i).is_one());
    CHECK(H->trd(i).is_zero());
    CHECK(is_sl1(H, i));
    CHECK(is_sl1(H, H->one()));
    // left-regular characteristic polynomial is the square
    CHECK(poly_equal(charpoly(H->left_mult(i)), poly_pow(H->reduced_char_poly(i), 2)));
    // reduced norm is the sum of squares
    std::mt19937_64 rng(1);
    for (int k = 0; k < 20; ++k) {
        Vec v = random_elem(H, rng);
        Elem n = Q()->zero();
        for (auto& c : v) n += c * c;
        CHECK(H->nrd(v) == n);
        CHECK(H->trd(v) == 2 * v[0]);
    }
    CHECK(H->format(H->parse("1 - 2*x*y + y/2")) == "1 + 1/2*y - 2*x*y");
    CHECK(H->trace_form_nondegenerate());
}

TEST_CASE("degree four identity") {
    auto m1 = Q()->from_int(-1);
    auto A = Algebra::tensor(hamilton(), hamilton());
    CHECK(A->dim() == 16);
    CHECK(A->degree() == 4);
    auto x1 = Q()->from_int(-1);
    Poly expect = poly_pow(Poly{x1, Q()->one()}, 4);
    CHECK(poly_equal(A->reduced_char_poly(A->one()), expect));
    CHECK(poly_equal(A->reduced_char_poly_regular(A->one()), expect));
    (void)m1;
    CHECK(A->generators().count("x1"));
    CHECK(A->generators().count("y2"));
    CHECK(A->format(A->parse("x1*y2")) == "x1*y2");
}

TEST_CASE("Nrd multiplicative, Trd linear, Cayley-Hamilton") {
    std::mt19937_64 rng(42);
    auto F7 = Field::finite(7);
    auto A = parse_algebra(Q(), "symbol(-1; 3; 2) (*) symbol(2; 5; 2)");
    int pairs = 0;
    for (int k = 0; k < 200; ++k) {
        Vec x = random_elem(A, rng, -2, 2, 6), y = random_elem(A, rng, -2, 2, 6);
        CHECK(A->nrd(A->mul(x, y)) == A->nrd(x) * A->nrd(y));
        CHECK(A->trd(A->add(x, y)) == A->trd(x) + A->trd(y));
        ++pairs;
    }
    CHECK(pairs == 200);
    for (int k = 0; k < 10; ++k) {
        Vec x = random_elem(A, rng);
        Poly f = A->reduced_char_poly(x);
        Vec acc = A->zero();
        for (size_t e = f.size(); e-- > 0;) acc = A->add(A->mul(acc, x), A->scalar(f[e]));
        CHECK(is_zero_vec(acc));
        CHECK(poly_equal(f, A->reduced_char_poly_regular(x)));
    }
    // degree 3 symbol over F7 with zeta = 2
    auto S = Algebra::symbol(F7->from_int(3), F7->from_int(5), 3, F7->from_int(2));
    CHECK(S->dim() == 9);
    for (int k = 0; k < 50; ++k) {
        Vec x = random_elem(S, rng), y = random_elem(S, rng);
        CHECK(S->nrd(S->mul(x, y)) == S->nrd(x) * S->nrd(y));
    }
}

TEST_CASE("p-algebras and Artin-Schreier cyclic algebras") {
    auto F2 = Field::finite(2);
    auto P = Algebra::p_algebra(F2->one(), F2->one());
    CHECK(P->check_relations());
    auto x = P->generators().at("x"), y = P->generators().at("y");
    CHECK(is_zero_vec(P->sub(P->add(P->mul(x, x), x), P->one())));
    CHECK(is_zero_vec(P->sub(P->mul(y, y), P->one())));
    CHECK(is_zero_vec(P->sub(P->mul(x, y), P->mul(y, P->add(x, P->one())))));
    auto F3t = parse_field("F(3)((t))");
    auto C = parse_algebra(F3t, "cyclic_as(t^-1; t)");
    CHECK(C->dim() == 9);
    CHECK(C->check_relations());
    std::mt19937_64 rng(3);
    auto F4 = Field::finite(4);
    auto P4 = Algebra::p_algebra(F4->generator(), F4->one());
    for (int k = 0; k < 30; ++k) {
        Vec a = random_elem(P4, rng, 0, 3), b = random_elem(P4, rng, 0, 3);
        CHECK(P4->nrd(P4->mul(a, b)) == P4->nrd(a) * P4->nrd(b));
    }
}

TEST_CASE("cyclic Kummer matches the opposite symbol") {
    auto F7 = Field::finite(7);
    auto C = Algebra::cyclic_kummer(F7->from_int(3), F7->from_int(5), 3, F7->from_int(2));
    auto x = C->generators().at("x"), y = C->generators().at("y");
    CHECK(is_zero_vec(C->sub(C->mul(y, x), C->scale(F7->from_int(2), C->mul(x, y)))));
}

TEST_CASE("Platonov biquaternion over a Laurent tower") {
    auto F = parse_field("Qp(5)((t1))((t2))");
    auto A = parse_algebra(F, "symbol(2; t1; 2) (*) symbol(5; t2; 2)");
    CHECK(A->dim() == 16);
    auto d = is_division_biquaternion(A);
    CHECK(d.division);
    CHECK(d.albert.dim() == 6);
    auto r = A->reduced_char_poly(A->parse("x1 + y2"));
    CHECK(r.size() == 5);
}

TEST_CASE("division tests") {
    auto m1 = Q()->from_int(-1);
    auto H2 = Algebra::tensor(hamilton(), hamilton());
    auto d = is_division_biquaternion(H2);
    CHECK_FALSE(d.division);
    CHECK(d.albert.to_string() == "<-1, -1, -1, 1, 1, 1>");
    REQUIRE(d.isotropy.witness);
    CHECK(d.albert.evaluate(*d.isotropy.witness).is_zero());
    auto A = parse_algebra(Q(), "symbol(3; 7; 2) (*) symbol(3; 7; 2)");
    CHECK_FALSE(is_division_biquaternion(A).division);
    (void)m1;
}

TEST_CASE("involutions") {
    auto A = Algebra::tensor(hamilton(), hamilton());
    auto s = make_symplectic_involution(A);
    CHECK(s.kind == Involution::Kind::Symplectic);
    CHECK(s.symd.size() == 6);
    for (size_t i = 0; i < A->dim(); ++i) CHECK(is_zero_vec(A->sub(s.apply(s.apply(A->basis(i))), A->basis(i))));
    CHECK(is_zero_vec(A->sub(s.apply(A->one()), A->one())));
    auto o = canonical_product_involution(A);
    CHECK(o.kind == Involution::Kind::Orthogonal);
    CHECK(canonical_involution(hamilton()).kind == Involution::Kind::Symplectic);
    // characteristic 2: symplectic iff 1 in Symd
    auto F2t = parse_field("F(2)((t))");
    auto B = parse_algebra(F2t, "palg(1; t; 2) (*) palg(t; 1 + t; 2)");
    auto s2 = make_symplectic_involution(B);
    CHECK(s2.kind == Involution::Kind::Symplectic);
    CHECK(in_symd(s2, B->one()));
}

TEST_CASE("Pfaffian data") {
    auto A = parse_algebra(Q(), "symbol(-1; 3; 2) (*) symbol(2; 5; 2)");
    auto s = make_symplectic_involution(A);
    auto one = pfaffian_data(s, A->one());
    CHECK(poly_equal(one.prp, poly_pow(Poly{Q()->from_int(-1), Q()->one()}, 2)));
    CHECK(one.trp == Q()->from_int(2));
    CHECK(one.nrp.is_one());
    auto lam = Q()->from_rational(Rational(3, 2));
    auto sc = pfaffian_data(s, A->scalar(lam));
    CHECK(sc.nrp == lam * lam);
    std::mt19937_64 rng(5);
    for (int k = 0; k < 100; ++k) {
        Vec x = random_elem(A, rng, -2, 2, 5);
        Vec a = A->add(x, s.apply(x));
        auto p = pfaffian_data(s, a);
        CHECK(poly_equal(poly_pow(p.prp, 2), A->reduced_char_poly(a)));
        CHECK(p.nrp * p.nrp == A->nrd(a));
        CHECK(2 * p.trp == A->trd(a));
        auto q = pfaffian_data(s, A->scale(lam, a));
        CHECK(q.nrp == lam * lam * p.nrp);
    }
}

TEST_CASE("commutators lie in SL1") {
    auto A = parse_algebra(Q(), "symbol(-1; 3; 2) (*) symbol(2; 5; 2)");
    std::mt19937_64 rng(11);
    int done = 0;
    while (done < 100) {
        Vec x = random_elem(A, rng, -2, 2, 6), y = random_elem(A, rng, -2, 2, 6);
        if (A->nrd(x).is_zero() || A->nrd(y).is_zero()) continue;
        CHECK(is_sl1(A, commutator(A, x, y)));
        ++done;
    }
    CHECK_THROWS_AS(commutator(A, A->zero(), A->one()), MathError);
}

TEST_CASE("construction errors") {
    auto F7 = Field::finite(7);
    CHECK_THROWS_AS(Algebra::symbol(F7->one(), F7->one(), 5), UsageError);
    CHECK_THROWS_AS(Algebra::p_algebra(Q()->one(), Q()->one()), UsageError);
    CHECK_THROWS_AS(parse_algebra(Q(), "symbol(1; 2)"), UsageError);
    CHECK_THROWS_AS(parse_algebra(Q(), "foo(1; 2; 2)"), UsageError);
}
