#include <algorithm>
#include <functional>
#include <random>
#include <regex>

#include "report.hpp"
#include "whitehead/local.hpp"
#include "whitehead/wittvec.hpp"

using namespace whitehead;

namespace cli {

void Report::certify(const std::string& claim, const Certificate& c) {
    certificates.push_back({{"claim", claim}, {"provenance", provenance_name(c.provenance)}, {"detail", c.detail}});
    if (c.provenance == Provenance::Undecided) undecided = true;
}

void Report::certify(const std::string& claim, Provenance p, const std::string& detail) {
    certify(claim, Certificate{p, {detail}});
}

void Report::root(const FieldPtr& F, int64_t m) {
    auto z = primitive_root_of_unity(F, m);
    json j{{"field", F->to_string()}, {"order", m}};
    if (z.root)
        j["root"] = z.root->to_string();
    else
        j["absent"] = z.reason;
    for (const auto& x : roots)
        if (x == j) return;
    roots.push_back(j);
}

namespace {

const std::string& opt(const Report& r, const std::string& name) {
    static const std::string empty;
    auto it = r.input.find(name);
    return it == r.input.end() ? empty : it->second;
}

const std::string& need(const Report& r, const std::string& name) {
    const std::string& s = opt(r, name);
    if (s.empty()) throw UsageError("missing required option --" + name);
    return s;
}

int64_t int_opt(const Report& r, const std::string& name) {
    const std::string& s = need(r, name);
    try {
        size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::logic_error&) {
        throw UsageError("--" + name + " expects an integer, got '" + s + "'");
    }
}

// Split at top-level separators, ignoring those nested in brackets.
std::vector<std::string> split_top(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(' || c == '[' || c == '{') ++depth;
        if (c == ')' || c == ']' || c == '}') --depth;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& x : out) {
        auto b = x.find_first_not_of(" \t"), e = x.find_last_not_of(" \t");
        x = b == std::string::npos ? "" : x.substr(b, e - b + 1);
    }
    return out;
}

std::vector<Elem> parse_list(const FieldPtr& F, const std::string& text, char sep,
                             const std::map<std::string, Elem>& syms) {
    std::vector<Elem> out;
    for (const auto& part : split_top(text, sep)) {
        if (part.empty()) throw UsageError("empty entry in '" + text + "'");
        out.push_back(parse_element(F, part, syms));
    }
    return out;
}

std::string strip_wrapper(const std::string& s, const std::string& open, char close) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    if (b == std::string::npos || s.compare(b, open.size(), open) != 0 || s[e] != close)
        throw UsageError("expected " + open + "..." + close + ", got '" + s + "'");
    return s.substr(b + open.size(), e - b - open.size());
}

json level_json(const ILevel& L) {
    return {{"level", L.zero() ? json("zero") : json(L.level)}, {"complete", L.complete}, {"text", L.text()}, {"certificate", L.certificate}};
}

json elems(const std::vector<Elem>& v) {
    json j = json::array();
    for (const auto& e : v) j.push_back(e.to_string());
    return j;
}

json kclass_json(const KClass& c) {
    json terms = json::array();
    for (const auto& t : c.terms()) terms.push_back({{"coef", t.coef}, {"slots", elems(t.slots)}});
    return {{"text", c.to_string()}, {"modulus", c.modulus()}, {"degree", c.degree()}, {"field", c.field()->to_string()}, {"terms", terms}};
}

json scalar_json(const FormalScalar& s) {
    return {{"name", s.name}, {"modulus", s.modulus}, {"constraints", s.constraints}, {"text", s.to_string()}};
}

FieldPtr field_opt(const Report& r, const std::string& name = "field") { return parse_field(need(r, name)); }

// Algebra expressions have no symbol table: named constants are substituted textually.
AlgebraPtr algebra_opt(const Report& r, const FieldPtr& F) {
    std::string text = need(r, "algebra");
    // u is taken relative to the degree of the first symbol
    int64_t m = 2;
    std::smatch deg;
    if (std::regex_search(text, deg, std::regex(R"(;\s*(\d+)\s*\))"))) m = std::stoll(deg[1]);
    for (const auto& [name, value] : standard_symbols(F, m))
        text = std::regex_replace(text, std::regex("\\b" + name + "\\b"), "(" + value.to_string() + ")");
    return parse_algebra(F, text);
}

}  // namespace

std::map<std::string, Elem> standard_symbols(const FieldPtr& F, int64_t m) {
    std::map<std::string, Elem> out;
    const Field& B = F->bottom();
    if (B.kind() != FieldKind::PAdic) return out;
    const int64_t p = B.prime();
    if (!F->named("p")) out["p"] = F->from_int(p);
    const int64_t g = gcd64(m, p - 1);
    if (g > 1 && !F->named("u"))
        for (int64_t u = 2; u < p; ++u)
            if (mod_pow64(u, (p - 1) / g, p) != 1) {
                out["u"] = F->from_int(u);
                break;
            }
    return out;
}

// ---------------------------------------------------------------- sk1

void run_sk1(Report& r, const Context&) {
    auto k = field_opt(r);
    const int64_t n = int_opt(r, "n");
    auto syms = standard_symbols(k, n);
    PlatonovConfig cfg{k, n, parse_element(k, need(r, "a1"), syms), parse_element(k, need(r, "a2"), syms)};
    r.root(k, n);
    auto s = sk1_platonov(cfg);
    json pieces = json::array();
    for (const auto& p : s.pieces) pieces.push_back({{"name", p.name}, {"subgroup", "(1/" + std::to_string(p.order) + ")Z/Z"}, {"order", p.order}});
    r.result = {{"group", s.group},
                {"order", s.order},
                {"generator", s.generator},
                {"brauer_pieces", pieces},
                {"kummer_subgroup_order", s.kummer_subgroup_order},
                {"linearly_disjoint", true},
                {"division", s.division.provenance == Provenance::Computed ? "computed certificate" : "paper-cited certificate"},
                {"lambda", scalar_json(scalar_lambda(n))}};
    if (s.algebra) r.result["algebra"] = s.algebra->describe();
    r.certify("A is a division algebra", s.division);
    r.certify("SK1(A) = " + s.group, Provenance::Computed, "quotient of (1/" + std::to_string(n * n) + ")Z/Z by the Brauer groups of K1/k and K2/k");
    r.line("SK1(A) = " + s.group + " generated by " + s.generator);
    r.line("division: " + r.result["division"].get<std::string>());
    for (const auto& d : s.division.detail) r.line("  " + d);
}

// ---------------------------------------------------------------- invariant

void run_invariant(Report& r, const Context&) {
    const std::string kind = need(r, "kind");
    if (kind == "descriptors") {
        json list = json::array();
        for (const auto& d : invariant_descriptors()) {
            list.push_back({{"name", d.name}, {"value_group", d.value_group}, {"torsion_bound", d.torsion_bound}, {"relations", d.relations}});
            r.line(d.name + ": " + d.value_group + ", torsion " + d.torsion_bound);
            for (const auto& rel : d.relations) r.line("  " + rel);
        }
        r.result = {{"descriptors", list}};
        return;
    }
    if (kind != "kmrt") throw UsageError("unknown invariant '" + kind + "' (expected kmrt or descriptors)");
    auto F = field_opt(r);
    auto A = algebra_opt(r, F);
    if (A->factors().size() != 2) throw UsageError("KMRT invariant needs a product of two quaternion algebras");
    const std::string inv = need(r, "involution");
    Involution sigma = inv == "auto" ? make_symplectic_involution(A) : [&] {
        auto s = A->factors()[1]->atoms_of(inv);
        if (!s) throw UsageError("unknown element '" + inv + "' of the second factor");
        return make_symplectic_involution(A, *s);
    }();
    Vec a = A->parse(need(r, "element"));
    std::optional<Vec> v;
    if (need(r, "v") != "auto") v = A->parse(opt(r, "v"));
    auto res = kmrt_eval(sigma, a, v);
    r.result = {{"algebra", A->describe()},
                {"involution", sigma.description},
                {"w", A->format(res.w)},
                {"v", A->format(res.v)},
                {"v_rule", res.v_rule},
                {"phi", res.phi.to_string()},
                {"phi_dimension", res.phi.dim()},
                {"phi_level", level_json(res.phi_level)},
                {"sigma_hyperbolic", res.hyperbolic_sigma},
                {"class", res.cls.representative().to_string()},
                {"value_level", level_json(res.level)},
                {"value", res.level.zero() ? "0" : (res.level.level >= 4 ? "0 mod I^4" : "nonzero mod I^4")}};
    r.certify("KMRT value", res.certificate);
    if (!res.level.complete) r.undecided = true;
    r.line("sigma = " + sigma.description + (res.hyperbolic_sigma ? " (hyperbolic)" : ""));
    r.line("w = " + A->format(res.w));
    r.line("v = " + A->format(res.v) + "  [" + res.v_rule + "]");
    r.line("Phi_v = " + res.phi.to_string());
    r.line("Phi_v level: " + res.phi_level.text());
    r.line("value: " + r.result["value"].get<std::string>() + " (level " + res.level.text() + ")");
}

// ---------------------------------------------------------------- residue

void run_residue(Report& r, const Context&) {
    auto F = field_opt(r);
    const int64_t m = int_opt(r, "mod");
    if (m < 2) throw UsageError("--mod must be >= 2");
    const int64_t sign = int_opt(r, "sign");
    if (sign != 1 && sign != -1) throw UsageError("--sign must be 1 or -1");
    auto syms = standard_symbols(F, m);
    auto slots = parse_list(F, strip_wrapper(need(r, "symbol"), "{", '}'), ',', syms);
    KClass c = k_symbol(slots, m);
    std::vector<std::string> at;
    if (need(r, "at") == "all") {
        for (const auto& [var, res] : F->residue_chain()) at.push_back(var);
        r.input["at"] = "";
        for (size_t i = 0; i < at.size(); ++i) r.input["at"] += (i ? "," : "") + at[i];
    } else {
        at = split_top(opt(r, "at"), ',');
    }
    if (F->bottom().kind() == FieldKind::PAdic) r.root(F->bottom().self(), m);
    json steps = json::array();
    r.line("class: " + c.to_string() + " mod " + std::to_string(m));
    for (const auto& var : at) {
        c = tame_residue(c, var, static_cast<int>(sign));
        steps.push_back({{"variable", var}, {"class", kclass_json(c)}});
        r.line("residue along " + var + ": " + c.to_string() + " over " + c.field()->to_string());
    }
    r.result = {{"symbol", kclass_json(k_symbol(slots, m))}, {"steps", steps}, {"final", kclass_json(c)}};
    try {
        auto co = coh_coordinates(c);
        r.result["final_coordinate"] = {{"meaning", co.top().meaning}, {"value", co.top().value}, {"orders", co.top().orders}, {"zero", co.zero()}};
        std::string v;
        for (auto x : co.top().value) v += (v.empty() ? "" : ",") + std::to_string(x);
        r.line("coordinate (" + co.top().meaning + "): " + (v.empty() ? "0" : v));
        r.certify("final coordinate", Provenance::Computed, co.top().meaning);
    } catch (const Undecided& e) {
        r.result["final_coordinate"] = nullptr;
        r.certify("final coordinate", Provenance::Undecided, e.what());
    } catch (const UnsupportedTower& e) {
        r.result["final_coordinate"] = nullptr;
        r.certify("final coordinate", Provenance::Undecided, e.what());
    }
}

// ---------------------------------------------------------------- form

void run_form(Report& r, const Context&) {
    auto F = field_opt(r);
    auto syms = standard_symbols(F, 2);
    if (!opt(r, "let").empty())
        for (const auto& kv : split_top(opt(r, "let"), ',')) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw UsageError("--let expects name=value pairs, got '" + kv + "'");
            std::string name = kv.substr(0, eq);
            name.erase(std::remove(name.begin(), name.end(), ' '), name.end());
            syms[name] = parse_element(F, kv.substr(eq + 1), syms);
        }
    const std::string text = need(r, "form");
    QuadraticForm q;
    if (text.rfind("diag(", 0) == 0) {
        std::string inner = strip_wrapper(text, "diag(", ')');
        q = diagonal_form(F, parse_list(F, inner, inner.find(';') != std::string::npos ? ';' : ',', syms));
    } else if (text.rfind("pfister(", 0) == 0) {
        std::string inner = strip_wrapper(text, "pfister(", ')');
        q = pfister(F, parse_list(F, inner, inner.find(';') != std::string::npos ? ';' : ',', syms));
    } else {
        throw UsageError("form must be diag(...) or pfister(...), got '" + text + "'");
    }
    auto iso = isotropy(q);
    auto cls = witt_class(q);
    auto lvl = i_level(q);
    r.result = {{"form", q.to_string()},
                {"dimension", q.dim()},
                {"isotropic", iso.isotropic},
                {"witness", iso.witness ? elems(*iso.witness) : json(nullptr)},
                {"isotropy_certificate", iso.certificate},
                {"witt_representative", cls.representative().to_string()},
                {"kernel_certified", cls.kernel_certified()},
                {"i_level", level_json(lvl)}};
    if (F->characteristic() != 2) r.result["signed_discriminant"] = signed_discriminant(q).to_string();
    if (F->kind() == FieldKind::Rationals) {
        r.result["signature"] = signature(q);
        try {
            json places = json::array();
            for (const auto& d : local_invariants(q))
                places.push_back({{"place", d.place == kRealPlace ? std::string("inf") : d.place.str()}, {"hasse", d.hasse}});
            r.result["hasse"] = places;
        } catch (const Undecided& e) {
            r.result["hasse"] = nullptr;
        }
    }
    r.certify("isotropy", Provenance::Computed, iso.certificate.empty() ? "" : iso.certificate.front());
    r.certify("I-level", lvl.complete ? Provenance::Computed : Provenance::Undecided, lvl.text());
    r.line("q = " + q.to_string() + " (dimension " + std::to_string(q.dim()) + ")");
    r.line(std::string(iso.isotropic ? "isotropic" : "anisotropic") + (iso.certificate.empty() ? "" : ": " + iso.certificate.front()));
    r.line((cls.kernel_certified() ? "anisotropic kernel: " : "Witt representative: ") + cls.representative().to_string());
    r.line("level: " + lvl.text());
}

// ---------------------------------------------------------------- wittvec

void run_wittvec(Report& r, const Context&) {
    const int64_t p = int_opt(r, "p"), l = int_opt(r, "l");
    if (!is_prime64(p)) throw UsageError("--p must be prime");
    if (l < 1 || l > 3) throw UsageError("--l must be 1, 2 or 3");
    if (opt(r, "field").empty()) r.input["field"] = "F(" + std::to_string(p) + ")";
    auto F = field_opt(r);
    if (F->characteristic() != p) throw UsageError("field characteristic differs from --p");
    const std::string op = need(r, "op");
    auto vec = [&](const std::string& name) {
        auto comps = parse_list(F, need(r, name), ',', {});
        if (static_cast<int64_t>(comps.size()) != l) throw UsageError("--" + name + " needs " + std::to_string(l) + " components");
        return witt_vector(F, comps);
    };
    auto show = [](const WittVector& w) {
        json c = json::array();
        for (const auto& e : w.comps) c.push_back(e.to_string());
        return c;
    };
    if (op == "table") {
        if (F->kind() != FieldKind::Finite || F->order() != p || l > 2)
            throw UsageError("tables are printed for W_1 and W_2 of a prime field");
        std::vector<WittVector> all;
        for (int64_t i = 0; i < (l == 1 ? p : p * p); ++i)
            all.push_back(l == 1 ? witt_vector(F, std::vector<int64_t>{i}) : witt_vector(F, std::vector<int64_t>{i % p, i / p}));
        json add = json::array(), mul = json::array();
        for (const auto& a : all) {
            json ra = json::array(), rm = json::array();
            for (const auto& b : all) {
                ra.push_back(witt_add(a, b).to_string());
                rm.push_back(witt_mul(a, b).to_string());
            }
            add.push_back(ra);
            mul.push_back(rm);
        }
        json labels = json::array();
        for (const auto& a : all) labels.push_back(a.to_string());
        r.result = {{"elements", labels}, {"add", add}, {"mul", mul}};
        // additive order of (1, 0, ...)
        WittVector one = witt_one(F, static_cast<int>(l)), acc = one;
        int64_t ord = 1;
        while (!acc.is_zero()) {
            acc = witt_add(acc, one);
            ++ord;
        }
        r.result["characteristic"] = ord;
        r.line("W_" + std::to_string(l) + "(F_" + std::to_string(p) + ") has characteristic " + std::to_string(ord));
        for (size_t i = 0; i < all.size(); ++i) {
            std::string row = all[i].to_string() + " |";
            for (const auto& x : add[i]) row += " " + x.get<std::string>();
            r.line(row);
        }
        return;
    }
    WittVector u = vec("lhs");
    WittVector out;
    if (op == "add") out = witt_add(u, vec("rhs"));
    else if (op == "sub") out = witt_sub(u, vec("rhs"));
    else if (op == "mul") out = witt_mul(u, vec("rhs"));
    else if (op == "neg") out = witt_neg(u);
    else if (op == "frobenius") out = frobenius(u);
    else if (op == "project") out = pi_projection(u);
    else if (op == "asw") {
        auto chi = asw_character(u);
        r.result = {{"w", show(u)}, {"extension", chi.extension->to_string()}, {"solution", show(chi.solution)}, {"order", chi.order}};
        r.certify("F(v) - v = w", Provenance::Computed, "solution checked over " + chi.extension->to_string());
        r.line("order " + std::to_string(chi.order) + ", solved over " + chi.extension->to_string() + ": v = " + chi.solution.to_string());
        return;
    } else {
        throw UsageError("unknown --op '" + op + "'");
    }
    r.result = {{"result", show(out)}, {"text", out.to_string()}};
    r.line(out.to_string());
}

// ---------------------------------------------------------------- lift

void run_lift(Report& r, const Context&) {
    auto F = field_opt(r);
    auto K = field_opt(r, "lift-field");
    const std::string text = need(r, "algebra");
    auto A = parse_algebra(F, text);
    static const std::regex palg(R"(palg\s*\(\s*([^;()]+?)\s*;\s*([^;()]+?)\s*(?:;\s*2\s*)?\))");
    std::vector<std::string> args;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), palg); it != std::sregex_iterator(); ++it) {
        args.push_back((*it)[1]);
        args.push_back((*it)[2]);
    }
    if (args.size() != 4) throw UsageError("lift expects palg(a; b) (*) palg(c; d)");
    // entries with equal residues may have different lifts, so each is checked on its own
    std::vector<Elem> lifted;
    for (const auto& s : args) {
        Elem lo = parse_element(K, s);
        LiftDatum(F, K).declare(parse_element(F, s), lo);
        lifted.push_back(lo);
    }
    if (A->factors().size() != 2) throw UsageError("lift expects palg(a; b) (*) palg(c; d)");
    auto L = lift_algebra(K, lifted[0], lifted[1], lifted[2], lifted[3]);
    json gens = json::object();
    for (const auto& [name, v] : L.generator_map) gens[name] = L.algebra->format(v);
    r.result = {{"residue_algebra", A->describe()},
                {"lifted_algebra", L.algebra->describe()},
                {"entries", elems({K->one() + 4 * lifted[0], lifted[1], K->one() + 4 * lifted[2], lifted[3]})},
                {"generators", gens},
                {"checks", L.checks},
                {"verified", L.verified}};
    r.certify("lifted relations", L.verified ? Provenance::Computed : Provenance::Undecided, L.verified ? "all relations hold" : "some relation failed");
    r.line("lift: " + L.algebra->describe());
    for (const auto& [name, v] : L.generator_map) r.line("  " + name + " = " + L.algebra->format(v));
    for (const auto& c : L.checks) r.line("  " + c);
    if (!L.verified) r.failed = true;
}

// ---------------------------------------------------------------- bounds

void run_bounds(Report& r, const Context&) {
    if (!opt(r, "factors").empty()) {
        auto t = kahn_torsion(parse_torsion_factors(opt(r, "factors")));
        r.result = {{"m", t.m}, {"exponents", t.exponents}, {"rules", t.rules}};
        r.line("m = " + std::to_string(t.m));
        for (const auto& s : t.rules) r.line("  " + s);
        return;
    }
    const int64_t n = int_opt(r, "n");
    if (n < 1) throw UsageError("n must be ≥ 1");
    const int64_t nb = kahn_bound(n);
    json fac = json::array();
    int64_t rest = n;
    for (int64_t p : prime_factors64(n)) {
        int e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        fac.push_back({{"p", p}, {"e", e}});
    }
    r.result = {{"n", n}, {"nbar", nb}, {"factorization", fac}, {"square_free", nb == 1}, {"d_A", scalar_json(scalar_d(n))}};
    r.line("nbar(" + std::to_string(n) + ") = " + std::to_string(nb));
}

// ---------------------------------------------------------------- centre

void run_centre(Report& r, const Context&) {
    auto F = field_opt(r);
    if (!opt(r, "values").empty()) {
        auto v = parse_list(F, opt(r, "values"), ',', standard_symbols(F, 2));
        if (v.size() != 4) throw UsageError("--values expects a,b,c,d");
        r.root(F, 4);
        auto c = centre_value_biquat(F, v[0], v[1], v[2], v[3]);
        r.result = {{"pfister", c.pfister.to_string()}, {"class", c.cls.representative().to_string()}, {"level", level_json(c.level)}, {"zero", c.level.zero()}};
        r.certify("<<4a+1, b, 4c+1, d>> mod I^4", c.certificate);
        r.line("<<4a+1, b, 4c+1, d>> = " + c.pfister.to_string());
        r.line("level: " + c.level.text());
        return;
    }
    auto A = algebra_opt(r, F);
    if (A->factors().size() != 2) throw UsageError("centre expects a product of two symbol algebras");
    const int64_t n = A->factors()[0]->presentation().n;
    std::optional<Elem> zeta;
    if (need(r, "zeta") != "auto") zeta = parse_element(F, opt(r, "zeta"), standard_symbols(F, n));
    r.root(F, n * n);
    auto c = centre_symbol(A, zeta);
    const auto& P = A->factors()[0]->presentation();
    const auto& R = A->factors()[1]->presentation();
    r.result = {{"j", scalar_json(c.j)}, {"modulus", c.modulus}, {"slots", elems({*P.a, *P.b, *R.a, *R.b})}, {"symbol", kclass_json(c.symbol)},
                {"symbol_nonzero", c.symbol_nonzero ? json(*c.symbol_nonzero) : json("undecided")}};
    r.certify("h^4({a,b,c,d}) nonzero", c.nonvanishing);
    r.line("rho([zeta]) = phi[" + c.j.name + " h^4_" + std::to_string(c.modulus) + "(" + c.symbol.to_string() + ")]");
    r.line("symbol nonzero: " + r.result["symbol_nonzero"].dump());
    if (is_prime64(n)) {
        auto w = sk1_nontrivial_witness(A);
        r.result["sk1_nontrivial"] = witness_name(w.answer);
        r.certify("SK1(A) != 0", w.certificate);
        r.line("SK1(A) nontrivial: " + witness_name(w.answer));
        if (w.answer == WitnessAnswer::Nontrivial && n == 2 && is_division_biquaternion(A).division)
            r.result["lambda"] = scalar_json(scalar_lambda(n));
    }
}

// ---------------------------------------------------------------- selftest

namespace {

struct Suite {
    std::string name;
    std::function<std::string()> body;  // empty string: pass
};

}  // namespace

void run_selftest(Report& r, const Context& ctx) {
    std::mt19937_64 rng(ctx.seed);
    std::vector<Suite> suites;
    suites.push_back({"witt W2(F2) = Z/4", [] {
                          auto F = Field::finite(2);
                          for (int64_t i = 0; i < 4; ++i)
                              for (int64_t j = 0; j < 4; ++j) {
                                  auto a = witt_vector(F, std::vector<int64_t>{i % 2, i / 2});
                                  auto b = witt_vector(F, std::vector<int64_t>{j % 2, j / 2});
                                  auto s = witt_add(a, b), m = witt_mul(a, b);
                                  auto idx = [&](const WittVector& w) { return F->ff_index(w.comps[0]) + 2 * F->ff_index(w.comps[1]); };
                                  if (idx(s) != (i + j) % 4 || idx(m) != (i * j) % 4) return std::string("mismatch at ") + std::to_string(i) + "," + std::to_string(j);
                              }
                          return std::string();
                      }});
    suites.push_back({"kahn bound", [] {
                          for (int64_t n = 1; n <= 300; ++n) {
                              int64_t b = 1, x = n;
                              for (int64_t p = 2; x > 1; ++p)
                                  if (x % p == 0) {
                                      x /= p;
                                      while (x % p == 0) {
                                          x /= p;
                                          b *= p;
                                      }
                                  }
                              if (kahn_bound(n) != b) return "n = " + std::to_string(n);
                          }
                          return std::string();
                      }});
    suites.push_back({"hilbert pairing", [&] {
                          std::uniform_int_distribution<int64_t> d(-12, 12);
                          for (int k = 0; k < 60; ++k) {
                              const int64_t p = std::vector<int64_t>{3, 5, 7, 11}[k % 4];
                              int64_t a = d(rng), b = d(rng);
                              if (!a || !b) continue;
                              // z^2 = a x^2 + b y^2 primitive solution modulo p^3 after stripping p^2
                              auto sq = [&](int64_t x) { while (x % (p * p) == 0) x /= p * p; return x; };
                              int64_t A = sq(a), B = sq(b), M = p * p * p;
                              std::vector<char> is_sq(M, 0);
                              for (int64_t z = 0; z < M; ++z) is_sq[z * z % M] = 1;
                              auto md = [&](int64_t x) { return ((x % M) + M) % M; };
                              bool sol = false;
                              for (int64_t y = 0; y < M && !sol; ++y) sol = is_sq[md(A + B * md(y * y))];
                              for (int64_t x = 0; x < M && !sol; x += p) sol = is_sq[md(A * md(x * x) + B)];
                              if ((hilbert_pairing(Rational(a), Rational(b), p, 2) == 0) != sol)
                                  return "(" + std::to_string(a) + "," + std::to_string(b) + ")_" + std::to_string(p);
                          }
                          return std::string();
                      }});
    suites.push_back({"platonov sk1", [] {
                          auto k = parse_field("Qp(17)");
                          auto s = sk1_platonov({k, 2, k->from_int(3), k->from_int(17)});
                          return s.order == 2 && s.division.provenance == Provenance::Computed ? std::string() : "unexpected " + s.group;
                      }});
    suites.push_back({"relative group", [] {
                          auto F = parse_field("Qp(5)((t1))((t2))");
                          auto g = relative_group(parse_algebra(F, "symbol(2; t1; 2) (*) symbol(5; t2; 2)"), 1, 4);
                          auto rep = comparison_report(g);
                          return g.order == 2 && rep.m_r_injective && !rep.pi_tilde_surjective ? std::string() : "unexpected " + g.describe();
                      }});
    suites.push_back({"kmrt", [&] {
                          auto Q = Field::rationals();
                          auto A = parse_algebra(Q, "symbol(-1; -1; 2) (*) symbol(2; 5; 2)");
                          auto s = make_symplectic_involution(A, *A->factors()[1]->atoms_of("xy"));
                          if (!kmrt_eval(s, A->one()).level.zero()) return std::string("rho(1) != 0");
                          std::uniform_int_distribution<int> d(-2, 2);
                          auto unit = [&] {
                              for (;;) {
                                  Vec v = A->zero();
                                  for (auto& c : v) c = Q->from_int(d(rng));
                                  if (!A->nrd(v).is_zero()) return v;
                              }
                          };
                          auto res = kmrt_eval(s, commutator(A, unit(), unit()));
                          return res.level.level >= 4 && res.level.complete ? std::string() : "commutator level " + res.level.text();
                      }});
    suites.push_back({"centre value", [] {
                          auto K = parse_field("Qp(5)");
                          auto c = centre_value_biquat(K, K->from_int(1), K->from_int(2), K->from_int(3), K->from_int(5));
                          return c.level.zero() ? std::string() : "level " + c.level.text();
                      }});
    json out = json::array();
    int passed = 0;
    for (const auto& s : suites) {
        std::string err;
        try {
            err = s.body();
        } catch (const std::exception& e) {
            err = std::string("exception: ") + e.what();
        }
        out.push_back({{"suite", s.name}, {"pass", err.empty()}, {"detail", err}});
        r.line(std::string(err.empty() ? "PASS " : "FAIL ") + s.name + (err.empty() ? "" : ": " + err));
        passed += err.empty();
        if (!err.empty()) r.failed = true;
    }
    r.result = {{"suites", out}, {"passed", passed}, {"total", suites.size()}};
}

}  // namespace cli
