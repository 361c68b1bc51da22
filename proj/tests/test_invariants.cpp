#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "whitehead/invariants.hpp"

using namespace whitehead;

namespace {

FieldPtr Q() { return Field::rationals(); }

Vec random_elem(const AlgebraPtr& A, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> d(-2, 2);
    Vec v = A->zero();
    for (auto& c : v) c = A->field()->from_int(d(rng));
    return v;
}

Vec random_unit(const AlgebraPtr& A, std::mt19937_64& rng) {
    for (;;) {
        Vec v = random_elem(A, rng);
        if (!A->nrd(v).is_zero()) return v;
    }
}

}  // namespace

TEST_CASE("SK1 of Platonov algebras") {
    for (auto [n, p] : {std::pair<int64_t, int64_t>{2, 17}, {3, 109}, {5, 251}}) {
        CAPTURE(n);
        const int64_t u = oracle::smallest_non_power(p, n);
        auto k = parse_field("Qp(" + std::to_string(p) + ")");
        auto r = sk1_platonov({k, n, Q()->from_int(u), Q()->from_int(p)});
        // independent Kummer subgroup and Q/Z arithmetic
        std::set<std::pair<int64_t, int64_t>> sub;
        auto c1 = oracle::power_residue_class(u, 0, p, n), c2 = oracle::power_residue_class(1, 1, p, n);
        for (int64_t i = 0; i < n; ++i)
            for (int64_t j = 0; j < n; ++j) sub.insert({(i * c1.first + j * c2.first) % n, oracle::powmod(c1.second, i, p) * oracle::powmod(c2.second, j, p) % p});
        CHECK(r.kummer_subgroup_order == static_cast<int64_t>(sub.size()));
        REQUIRE(r.pieces.size() == 3);
        CHECK(r.pieces[0].order == n * n);
        CHECK(r.pieces[1].order == n);
        CHECK(r.pieces[2].order == n);
        CHECK(r.order == oracle::qz_quotient_order(n * n, n, n));
        CHECK(r.order == n);
        CHECK(r.group == "Z/" + std::to_string(n));
        if (n == 2) {
            CHECK(r.division.provenance == Provenance::Computed);
            REQUIRE(r.algebra);
            CHECK(r.algebra->dim() == 16);
        } else {
            CHECK(r.division.provenance == Provenance::PaperCited);
        }
    }
    auto k17 = parse_field("Qp(17)");
    CHECK_THROWS_AS(sk1_platonov({k17, 2, Q()->from_int(3), Q()->from_int(3)}), MathError);
    CHECK_THROWS_AS(sk1_platonov({k17, 2, Q()->from_int(3), Q()->from_int(27)}), MathError);
    // 3 does not divide 17 - 1
    CHECK_THROWS_AS(sk1_platonov({k17, 3, Q()->from_int(3), Q()->from_int(17)}), UnsupportedTower);
    CHECK_THROWS_AS(sk1_platonov({Q(), 2, Q()->from_int(3), Q()->from_int(17)}), UsageError);
    // p = 13: 4 | p - 1 but 8 does not
    auto r13 = sk1_platonov({parse_field("Qp(13)"), 2, Q()->from_int(2), Q()->from_int(13)});
    CHECK(r13.order == 2);
}

TEST_CASE("Kahn bound and torsion exponents") {
    for (int64_t n = 1; n <= 1000; ++n) CHECK(kahn_bound(n) == oracle::kahn_bound(n));
    CHECK(kahn_bound(4) == 2);
    CHECK(kahn_bound(12) == 2);
    for (int64_t n : {2, 6, 30, 210, 7 * 11 * 13}) CHECK(kahn_bound(n) == 1);
    CHECK_THROWS_AS(kahn_bound(0), UsageError);

    auto t = kahn_torsion(parse_torsion_factors("(3,9,3),(2,4,2)"));
    CHECK(t.m == 18);
    CHECK(t.exponents == std::vector<int>{2, 1});
    CHECK(kahn_torsion({{5, 5, 5}}).m == 5);
    CHECK(kahn_torsion({{2, 8, 4}}).m == 2);
    CHECK_THROWS_AS(kahn_torsion({{3, 3, 9}}), UsageError);   // per does not divide ind
    CHECK_THROWS_AS(kahn_torsion({{3, 27, 9}}), UsageError);  // per > p > 2
    CHECK_THROWS_AS(kahn_torsion({{4, 4, 4}}), UsageError);
    CHECK_THROWS_AS(kahn_torsion({{3, 6, 3}}), UsageError);
    CHECK_THROWS_AS(kahn_torsion({{3, 3, 3}, {3, 9, 3}}), UsageError);
    CHECK_THROWS_AS(parse_torsion_factors("(3,9)"), UsageError);
    CHECK_THROWS_AS(parse_torsion_factors(""), UsageError);
    CHECK(parse_torsion_factors(" ( 7, 49 ,7 ) ").at(0).ind == 49);

    std::mt19937_64 rng(2024);
    const int64_t primes[] = {2, 3, 5, 7, 11};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<TorsionFactor> fs;
        std::vector<size_t> idx{0, 1, 2, 3, 4};
        std::shuffle(idx.begin(), idx.end(), rng);
        const size_t count = 1 + rng() % 3;
        int64_t expect = 1;
        bool valid = true;
        for (size_t i = 0; i < count; ++i) {
            const int64_t p = primes[idx[i]];
            const int a = 1 + static_cast<int>(rng() % 2), b = a + static_cast<int>(rng() % 2);
            int64_t per = 1, ind = 1;
            for (int k = 0; k < a; ++k) per *= p;
            for (int k = 0; k < b; ++k) ind *= p;
            fs.push_back({p, ind, per});
            if (p == 2 || (ind == p && per == p)) expect *= p;
            else if (per == p && ind > p) expect *= p * p;
            else valid = false;
        }
        if (valid)
            CHECK(kahn_torsion(fs).m == expect);
        else
            CHECK_THROWS_AS(kahn_torsion(fs), UsageError);
    }
}

TEST_CASE("formal scalars carry only sourced constraints") {
    auto l = scalar_lambda(2);
    CHECK(l.modulus == 2);
    CHECK(l.constraints.size() == 1);
    CHECK(scalar_d(4).constraints.empty());
    CHECK(scalar_d(4).modulus == 2);
    CHECK(scalar_i(2, 4).constraints.empty());
    CHECK(scalar_j(17, 2).constraints.empty());
    CHECK(scalar_j(0, 3).modulus == 3);
    CHECK(scalar_j(0, 3).constraints.size() == 1);
    CHECK(scalar_i_s91(3).constraints.size() == 1);
    CHECK(scalar_i_s91(4).constraints.empty());
    auto s = scalar_d(9);
    s.tighten("x");
    s.tighten("x");
    CHECK(s.constraints.size() == 1);
    CHECK(scalar_d(6).to_string().find("undetermined") != std::string::npos);

    auto ds = invariant_descriptors();
    std::set<std::string> names;
    int open = 0;
    for (const auto& d : ds) {
        names.insert(d.name);
        for (const auto& r : d.relations) open += r.find("open") != std::string::npos;
    }
    CHECK(names == std::set<std::string>{"S91", "S06", "Rost", "Kahn", "KMRT"});
    CHECK(open == 2);
}

TEST_CASE("KMRT invariant over Q") {
    auto A = parse_algebra(Q(), "symbol(-1; -1; 2) (*) symbol(2; 5; 2)");
    auto Q2 = A->factors()[1];
    std::vector<Involution> sigmas;
    for (const char* s : {"x", "y", "xy"}) sigmas.push_back(make_symplectic_involution(A, *Q2->atoms_of(s)));
    for (const auto& s : sigmas) CHECK(s.kind == Involution::Kind::Symplectic);

    // the x and y twists are hyperbolic over Q: an idempotent is exhibited
    auto h = hyperbolicity(sigmas[0]);
    REQUIRE(h.hyperbolic);
    REQUIRE(h.idempotent);
    const Vec& e = *h.idempotent;
    CHECK(is_zero_vec(A->sub(A->mul(e, e), e)));
    CHECK(is_zero_vec(A->sub(sigmas[0].apply(e), A->sub(A->one(), e))));

    for (const auto& s : sigmas) {
        auto r = kmrt_eval(s, A->one());
        CHECK(r.phi.dim() == 16);
        CHECK(r.phi_level.zero());
        CHECK(r.level.zero());
    }

    std::mt19937_64 rng(7);
    for (int k = 0; k < 20; ++k) {
        Vec a = commutator(A, random_unit(A, rng), random_unit(A, rng));
        std::vector<WittClass> per_sigma;
        for (const auto& s : sigmas) {
            auto r = kmrt_eval(s, a);
            CHECK(r.phi.dim() == 16);
            CHECK(r.phi_level.complete);
            CHECK(r.phi_level.level >= 4);
            CHECK(r.level.level >= 4);
            per_sigma.push_back(witt_class(r.phi));
        }
        for (size_t i = 1; i < per_sigma.size(); ++i)
            CHECK(i_level(witt_add(per_sigma[0], witt_neg(per_sigma[i]))).level >= 4);
        if (k < 10) {
            auto vs = admissible_vs(sigmas[2], a);
            REQUIRE(vs.size() >= 2);
            auto r0 = kmrt_eval(sigmas[2], a, vs[0]);
            for (size_t i = 1; i < vs.size(); ++i) {
                auto ri = kmrt_eval(sigmas[2], a, vs[i]);
                CHECK(i_level(witt_add(r0.cls, witt_neg(ri.cls))).level >= 4);
            }
        }
    }
    // conjugation
    Vec a = commutator(A, random_unit(A, rng), random_unit(A, rng));
    auto base = kmrt_eval(sigmas[2], a);
    for (int k = 0; k < 10; ++k) {
        Vec g = random_unit(A, rng);
        Vec b = A->mul(A->mul(g, a), *A->inverse(g));
        auto r = kmrt_eval(sigmas[2], b);
        CHECK(i_level(witt_add(base.cls, witt_neg(r.cls))).level >= 4);
    }

    Vec two = A->scalar(Q()->from_int(2));
    CHECK_THROWS_AS(kmrt_eval(sigmas[2], two), UsageError);
    CHECK_THROWS_AS(kmrt_eval(sigmas[2], A->one(), A->one()), UsageError);
    CHECK_THROWS_AS(kmrt_eval(canonical_product_involution(A), A->one()), UsageError);
    auto F2t = parse_field("F(2)((t))");
    auto B = parse_algebra(F2t, "palg(1; t; 2) (*) palg(t; 1 + t; 2)");
    CHECK_THROWS_AS(kmrt_eval(make_symplectic_involution(B), B->one()), UnsupportedTower);
}

TEST_CASE("KMRT v choice: closed form satisfies the defining relation") {
    auto A = parse_algebra(Q(), "symbol(-1; 3; 2) (*) symbol(2; 5; 2)");
    auto s = make_symplectic_involution(A);
    std::mt19937_64 rng(3);
    for (int k = 0; k < 10; ++k) {
        Vec a = commutator(A, random_unit(A, rng), random_unit(A, rng));
        Vec w = A->scale(-Q()->one(), A->mul(s.apply(a), a));
        for (const Vec& v : admissible_vs(s, a)) {
            CHECK(in_symd(s, v));
            // v (Trp(v) - v)^-1 = w
            Elem tv = A->trd(v) / Q()->from_int(2);
            auto inv = A->inverse(A->sub(A->scalar(tv), v));
            REQUIRE(inv);
            CHECK(is_zero_vec(A->sub(A->mul(v, *inv), w)));
        }
    }
}

TEST_CASE("comparison maps on the biquaternion configuration") {
    auto F = parse_field("Qp(5)((t1))((t2))");
    auto A = parse_algebra(F, "symbol(2; t1; 2) (*) symbol(5; t2; 2)");
    auto g = relative_group(A, 1, 4);
    auto rep = comparison_report(g);
    CHECK(rep.relative_order == 2);
    CHECK(rep.m_r_table == std::vector<int64_t>{0, 2});
    CHECK(rep.pi_r_table == std::vector<int64_t>{0, 1, 0, 1});
    CHECK(rep.m_r_injective);
    CHECK(rep.pi_m_is_per);
    CHECK_FALSE(rep.pi_tilde_surjective);
    CHECK(comparison_m_r(g, 1) == 2);
    CHECK(comparison_pi_r(g, 3) == 1);
    CHECK_THROWS_AS(comparison_m_r(g, 2), UsageError);
    CHECK_THROWS_AS(comparison_pi_r(g, 4), UsageError);
    auto g2 = relative_group(A, 2, 4);
    auto rep2 = comparison_report(g2);
    CHECK(rep2.pi_m_is_per);
}

TEST_CASE("centre value of the lifted biquaternion") {
    auto K = parse_field("Qp(5)");
    auto e = [&](int64_t x) { return K->from_int(x); };
    auto v = centre_value_biquat(K, e(1), e(2), e(3), e(5));
    CHECK(v.pfister.dim() == 16);
    CHECK(v.level.zero());
    CHECK(v.certificate.provenance == Provenance::Computed);
    CHECK(centre_value_biquat(K, e(7), e(4), e(2), e(10)).level.zero());
    CHECK_THROWS_AS(centre_value_biquat(Q(), Q()->one(), Q()->one(), Q()->one(), Q()->one()), MathError);
    CHECK_THROWS_AS(centre_value_biquat(parse_field("Qp(7)"), e(1), e(2), e(3), e(5)), MathError);
    auto Qi = Field::adjoin_root(Q(), 4);
    auto u = centre_value_biquat(Qi, Qi->one(), Qi->from_int(2), Qi->from_int(3), Qi->from_int(5));
    CHECK_FALSE(u.level.complete);
    CHECK(u.level.level >= 4);
    CHECK(u.certificate.provenance == Provenance::Undecided);
}

TEST_CASE("centre symbol and SK1 witness") {
    auto F = parse_field("Qp(17)((t1))((t2))");
    auto A = parse_algebra(F, "symbol(3; t1; 2) (*) symbol(17; t2; 2)");
    auto c = centre_symbol(A);
    CHECK(c.modulus == 2);
    CHECK(c.j.modulus == 2);
    REQUIRE(c.symbol_nonzero);
    CHECK(*c.symbol_nonzero);
    CHECK(c.nonvanishing.provenance == Provenance::Computed);
    CHECK(c.symbol.terms().size() == 1);
    auto z = primitive_root_of_unity(F, 4);
    REQUIRE(z.root);
    CHECK(centre_symbol(A, *z.root).symbol_nonzero == c.symbol_nonzero);
    CHECK_THROWS_AS(centre_symbol(A, F->from_int(-1)), UsageError);
    auto S = parse_algebra(F, "symbol(4; t1; 2) (*) symbol(17; t2; 2)");
    CHECK(centre_symbol(S).symbol.empty());
    CHECK_THROWS_AS(centre_symbol(parse_algebra(parse_field("Qp(7)((t1))((t2))"), "symbol(3; t1; 2) (*) symbol(7; t2; 2)")),
                    MathError);

    CHECK(sk1_nontrivial_witness(A).answer == WitnessAnswer::Nontrivial);
    auto one = parse_algebra(F, "symbol(1; t1; 2) (*) symbol(17; t2; 2)");
    CHECK(sk1_nontrivial_witness(one).answer == WitnessAnswer::NoConclusion);
    auto G = parse_field("Q[zeta_4]((t1))((t2))");
    auto AG = parse_algebra(G, "symbol(t1; 2; 2) (*) symbol(3; t2; 2)");
    CHECK(sk1_nontrivial_witness(AG).answer == WitnessAnswer::Undecided);
    auto H = parse_field("Q((t1))((t2))");
    CHECK_THROWS_AS(sk1_nontrivial_witness(parse_algebra(H, "symbol(t1; 2; 2) (*) symbol(3; t2; 2)")), UsageError);
}
