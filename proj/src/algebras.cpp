#include "whitehead/algebras.hpp"

#include <cctype>
#include <functional>

namespace whitehead {

// ---------------------------------------------------------------- splitting ring

namespace {

// k[X_1..X_r]/(f_1(X_1), ..., f_r(X_r)) with monic f_v of degree deg[v].
struct Ring {
    FieldPtr F;
    std::vector<int64_t> deg;
    std::vector<std::vector<Vec>> red;  // red[v][e] = X_v^e reduced, 0 <= e <= 2 deg[v] - 2
    std::vector<size_t> stride;
    std::vector<std::vector<int64_t>> expo;
    size_t size = 1;

    // relation X^n = sum rel[k] X^k
    static std::shared_ptr<Ring> single(const FieldPtr& F, const Vec& rel) {
        auto R = std::make_shared<Ring>();
        R->F = F;
        R->add_var(rel);
        R->index();
        return R;
    }

    void add_var(const Vec& rel) {
        const int64_t n = static_cast<int64_t>(rel.size());
        std::vector<Vec> table;
        Vec cur = zero_vec(F, n);
        cur[0] = F->one();
        for (int64_t e = 0; e <= 2 * n - 2; ++e) {
            table.push_back(cur);
            // multiply by X
            Vec nxt = zero_vec(F, n);
            for (int64_t k = 0; k + 1 < n; ++k) nxt[k + 1] = cur[k];
            if (!cur[n - 1].is_zero())
                for (int64_t k = 0; k < n; ++k) nxt[k] += cur[n - 1] * rel[k];
            cur = nxt;
        }
        deg.push_back(n);
        red.push_back(std::move(table));
    }

    void index() {
        const size_t r = deg.size();
        stride.assign(r, 1);
        size = 1;
        for (size_t v = r; v-- > 0;) {
            stride[v] = size;
            size *= static_cast<size_t>(deg[v]);
        }
        expo.assign(size, std::vector<int64_t>(r, 0));
        for (size_t i = 0; i < size; ++i)
            for (size_t v = 0; v < r; ++v) expo[i][v] = static_cast<int64_t>((i / stride[v]) % deg[v]);
    }

    static std::shared_ptr<Ring> combine(const Ring& a, const Ring& b) {
        auto R = std::make_shared<Ring>();
        R->F = a.F;
        R->deg = a.deg;
        R->red = a.red;
        R->deg.insert(R->deg.end(), b.deg.begin(), b.deg.end());
        R->red.insert(R->red.end(), b.red.begin(), b.red.end());
        R->index();
        return R;
    }
};

struct RElem {
    const Ring* R = nullptr;
    Vec c;
};

RElem r_scalar(const Ring& R, const Elem& x) {
    RElem e{&R, zero_vec(R.F, R.size)};
    e.c[0] = R.F->embed(x);
    return e;
}

RElem r_var(const Ring& R, size_t v) {
    RElem e{&R, zero_vec(R.F, R.size)};
    e.c[R.stride[v]] = R.F->one();
    return e;
}

RElem operator+(const RElem& a, const RElem& b) {
    RElem r = a;
    for (size_t i = 0; i < r.c.size(); ++i)
        if (!b.c[i].is_zero()) r.c[i] += b.c[i];
    return r;
}

RElem operator-(const RElem& a, const RElem& b) {
    RElem r = a;
    for (size_t i = 0; i < r.c.size(); ++i)
        if (!b.c[i].is_zero()) r.c[i] -= b.c[i];
    return r;
}

RElem operator*(const RElem& a, const RElem& b) {
    const Ring& R = *a.R;
    RElem out{&R, zero_vec(R.F, R.size)};
    std::vector<std::pair<size_t, Elem>> terms, next;
    for (size_t i = 0; i < R.size; ++i) {
        if (a.c[i].is_zero()) continue;
        for (size_t j = 0; j < R.size; ++j) {
            if (b.c[j].is_zero()) continue;
            terms.assign(1, {0, a.c[i] * b.c[j]});
            for (size_t v = 0; v < R.deg.size(); ++v) {
                const Vec& r = R.red[v][R.expo[i][v] + R.expo[j][v]];
                next.clear();
                for (const auto& [idx, c] : terms)
                    for (int64_t k = 0; k < R.deg[v]; ++k)
                        if (!r[k].is_zero()) next.emplace_back(idx + k * R.stride[v], c * r[k]);
                terms.swap(next);
            }
            for (const auto& [idx, c] : terms) out.c[idx] += c;
        }
    }
    return out;
}

bool r_is_zero(const RElem& a) { return is_zero_vec(a.c); }

// Maps an element of a factor ring into the combined ring; offset is the first variable.
RElem r_lift(const Ring& target, const RElem& a, size_t offset) {
    const Ring& S = *a.R;
    RElem out{&target, zero_vec(target.F, target.size)};
    for (size_t i = 0; i < S.size; ++i) {
        if (a.c[i].is_zero()) continue;
        size_t idx = 0;
        for (size_t v = 0; v < S.deg.size(); ++v) idx += S.expo[i][v] * target.stride[offset + v];
        out.c[idx] = a.c[i];
    }
    return out;
}

using RMat = std::vector<std::vector<RElem>>;

RMat r_zero(const Ring& R, size_t n) { return RMat(n, std::vector<RElem>(n, r_scalar(R, R.F->zero()))); }

RMat r_mul(const RMat& A, const RMat& B) {
    const Ring& R = *A[0][0].R;
    const size_t n = A.size();
    RMat C = r_zero(R, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k) {
            if (r_is_zero(A[i][k])) continue;
            for (size_t j = 0; j < n; ++j)
                if (!r_is_zero(B[k][j])) C[i][j] = C[i][j] + A[i][k] * B[k][j];
        }
    return C;
}

bool r_equal(const RMat& A, const RMat& B) {
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < A.size(); ++j)
            if (!r_is_zero(A[i][j] - B[i][j])) return false;
    return true;
}

RMat r_scale(const RElem& c, const RMat& A) {
    RMat B = A;
    for (auto& row : B)
        for (auto& e : row)
            if (!r_is_zero(e)) e = c * e;
    return B;
}

RMat r_identity(const Ring& R, size_t n) {
    RMat I = r_zero(R, n);
    for (size_t i = 0; i < n; ++i) I[i][i] = r_scalar(R, R.F->one());
    return I;
}

}  // namespace

struct Algebra::Splitting {
    std::shared_ptr<Ring> ring;
    std::vector<RMat> images;  // image of each basis element
};

// ---------------------------------------------------------------- presentations

std::string Presentation::describe() const {
    auto s = [](const std::optional<Elem>& e) { return e ? e->to_string() : std::string("?"); };
    switch (kind) {
        case PresentationKind::Symbol: return "symbol(" + s(a) + "; " + s(b) + "; " + std::to_string(n) + ")";
        case PresentationKind::PAlgebra: return "palg(" + s(a) + "; " + s(b) + "; " + std::to_string(n) + ")";
        case PresentationKind::CyclicKummer: return "cyclic_kummer(" + s(a) + "; " + s(b) + "; " + std::to_string(n) + ")";
        case PresentationKind::CyclicArtinSchreier: return "cyclic_as(" + s(a) + "; " + s(b) + ")";
        case PresentationKind::Tensor: return "tensor";
        case PresentationKind::Opaque: return "opaque";
    }
    return "?";
}

std::string Algebra::describe() const {
    if (pres_.kind != PresentationKind::Tensor) return pres_.describe();
    auto wrap = [](const AlgebraPtr& A) {
        std::string d = A->describe();
        return A->presentation().kind == PresentationKind::Tensor ? "(" + d + ")" : d;
    };
    return wrap(factors_[0]) + " (*) " + wrap(factors_[1]);
}

namespace {

using Monomial = std::vector<std::pair<std::string, int64_t>>;

std::string mono_label(const Monomial& m) {
    if (m.empty()) return "1";
    std::string s;
    for (const auto& [name, e] : m) {
        if (!s.empty()) s += "*";
        s += name;
        if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
}

// Polynomial in x reduced modulo x^p = x + a (shift algebras).
Vec reduce_shift_poly(Vec f, int64_t p, const Elem& a) {
    for (int64_t m = static_cast<int64_t>(f.size()) - 1; m >= p; --m) {
        if (f[m].is_zero()) continue;
        Elem c = f[m];
        f[m] = c.field->zero();
        f[m - p + 1] += c;
        f[m - p] += c * a;
    }
    f.resize(p, a.field->zero());
    return f;
}

}  // namespace

AlgebraPtr Algebra::build_primitive(const FieldPtr& F, PresentationKind kind, const Elem& a0, const Elem& b0, int64_t n,
                                    std::optional<Elem> zeta) {
    if (n < 2) throw UsageError("degree must be at least 2");
    Elem a = F->embed(a0), b = F->embed(b0);
    if (b.is_zero()) throw UsageError("b must be nonzero");
    const bool shift = kind == PresentationKind::PAlgebra || kind == PresentationKind::CyclicArtinSchreier;
    if (!shift && a.is_zero()) throw UsageError("a must be nonzero");
    auto A = std::make_shared<Algebra>(Tag{});
    A->F_ = F;
    A->deg_ = n;
    A->period_bound_ = n;
    A->pres_.kind = kind;
    A->pres_.a = a;
    A->pres_.b = b;
    A->pres_.n = n;
    const size_t N = static_cast<size_t>(n);
    const size_t d = N * N;
    Elem z;  // xy = z yx for the Kummer-type rule
    if (!shift) {
        if (zeta) {
            z = F->embed(*zeta);
            if (!z.pow(n).is_one()) throw UsageError("zeta is not an n-th root of unity");
            for (int64_t k = 1; k < n; ++k)
                if (n % k == 0 && z.pow(k).is_one()) throw UsageError("zeta is not primitive");
        } else {
            auto r = primitive_root_of_unity(F, n);
            if (!r.root) throw UsageError("missing primitive " + std::to_string(n) + "-th root of unity: " + r.reason);
            z = *r.root;
        }
        A->pres_.zeta = z;
        if (kind == PresentationKind::CyclicKummer) z = z.inv();
    } else if (F->characteristic() != n) {
        throw UsageError("p-algebras need p equal to the characteristic");
    }
    const int64_t s = kind == PresentationKind::CyclicArtinSchreier ? -1 : 1;
    // basis x^i y^j at index i*n + j
    A->labels_.resize(d);
    std::vector<Monomial> monos(d);
    const std::string xn = "x", yn = "y";
    for (size_t i = 0; i < N; ++i)
        for (size_t j = 0; j < N; ++j) {
            Monomial m;
            if (i) m.emplace_back(xn, i);
            if (j) m.emplace_back(yn, j);
            monos[i * N + j] = m;
            A->labels_[i * N + j] = mono_label(m);
        }
    A->table_.assign(d, std::vector<std::vector<std::pair<size_t, Elem>>>(d));
    for (size_t i = 0; i < N; ++i)
        for (size_t j = 0; j < N; ++j)
            for (size_t k = 0; k < N; ++k)
                for (size_t l = 0; l < N; ++l) {
                    auto& out = A->table_[i * N + j][k * N + l];
                    size_t jl = j + l;
                    Elem yc = jl >= N ? b : F->one();
                    jl %= N;
                    if (!shift) {
                        // x^i y^j x^k y^l = z^{-jk} x^{i+k} y^{j+l}
                        Elem c = z.pow(-static_cast<int64_t>(j * k)) * yc;
                        size_t ik = i + k;
                        if (ik >= N) c *= a;
                        out.emplace_back((ik % N) * N + jl, c);
                    } else {
                        // y^j x^k = (x - s j)^k y^j
                        Vec f = zero_vec(F, i + k + 1);
                        Elem sh = F->from_int(-s * static_cast<int64_t>(j));
                        Vec binom{F->one()};
                        for (size_t e = 0; e < k; ++e) {
                            Vec nb = zero_vec(F, binom.size() + 1);
                            for (size_t t = 0; t < binom.size(); ++t) {
                                nb[t + 1] += binom[t];
                                nb[t] += binom[t] * sh;
                            }
                            binom = nb;
                        }
                        for (size_t t = 0; t < binom.size(); ++t) f[i + t] += binom[t];
                        f = reduce_shift_poly(f, n, a);
                        for (size_t m = 0; m < N; ++m)
                            if (!f[m].is_zero()) out.emplace_back(m * N + jl, f[m] * yc);
                    }
                }
    A->gens_["x"] = A->basis(N);
    A->gens_["y"] = A->basis(1);
    A->atoms_ = A->gens_;
    A->atoms_["xy"] = A->basis(N + 1);
    // splitting: x -> diagonal over k[X]/(f), y -> cyclic shift with y^n = b
    Vec rel = zero_vec(F, N);
    if (!shift) {
        rel[0] = a;
    } else {
        rel[0] = a;
        rel[1] = F->one();
    }
    auto ring = Ring::single(F, rel);
    const Ring& R = *ring;
    RElem alpha = r_var(R, 0);
    RMat X = r_zero(R, N), Y = r_zero(R, N);
    for (size_t k = 0; k < N; ++k) {
        if (!shift)
            X[k][k] = r_scalar(R, z.pow(static_cast<int64_t>(k))) * alpha;
        else
            X[k][k] = alpha + r_scalar(R, F->from_int(s * static_cast<int64_t>(k)));
        if (k + 1 < N)
            Y[k + 1][k] = r_scalar(R, F->one());
        else
            Y[0][k] = r_scalar(R, b);
    }
    auto sp = std::make_shared<Splitting>();
    sp->ring = ring;
    std::vector<RMat> xp{r_identity(R, N)}, yp{r_identity(R, N)};
    for (size_t e = 1; e < N; ++e) {
        xp.push_back(r_mul(xp.back(), X));
        yp.push_back(r_mul(yp.back(), Y));
    }
    sp->images.resize(d);
    for (size_t i = 0; i < N; ++i)
        for (size_t j = 0; j < N; ++j) sp->images[i * N + j] = r_mul(xp[i], yp[j]);
    A->split_ = sp;
    A->finish();
    return A;
}

void Algebra::finish() {
    if (!check_relations()) throw MathError("presentation relations fail in " + describe());
    if (!check_associative()) throw MathError("non-associative structure constants in " + describe());
}

AlgebraPtr Algebra::symbol(const Elem& a, const Elem& b, int64_t n, std::optional<Elem> zeta) {
    return build_primitive(a.field->contains(*b.field) ? a.field : b.field, PresentationKind::Symbol, a, b, n, zeta);
}

AlgebraPtr Algebra::cyclic_kummer(const Elem& a, const Elem& b, int64_t n, std::optional<Elem> zeta) {
    return build_primitive(a.field->contains(*b.field) ? a.field : b.field, PresentationKind::CyclicKummer, a, b, n, zeta);
}

AlgebraPtr Algebra::p_algebra(const Elem& a, const Elem& b) {
    const FieldPtr& F = a.field->contains(*b.field) ? a.field : b.field;
    if (F->characteristic() == 0) throw UsageError("p-algebras need positive characteristic");
    return build_primitive(F, PresentationKind::PAlgebra, a, b, F->characteristic(), std::nullopt);
}

AlgebraPtr Algebra::cyclic_artin_schreier(const Elem& a, const Elem& b) {
    const FieldPtr& F = a.field->contains(*b.field) ? a.field : b.field;
    if (F->characteristic() == 0) throw UsageError("Artin-Schreier algebras need positive characteristic");
    return build_primitive(F, PresentationKind::CyclicArtinSchreier, a, b, F->characteristic(), std::nullopt);
}

AlgebraPtr Algebra::tensor(const AlgebraPtr& L, const AlgebraPtr& R) {
    if (!L->field()->same(*R->field())) throw UsageError("tensor factors over different fields");
    const FieldPtr& F = L->field();
    auto A = std::make_shared<Algebra>(Tag{});
    A->F_ = F;
    A->deg_ = L->deg_ * R->deg_;
    A->period_bound_ = static_cast<int64_t>(lcm64(L->period_bound_, R->period_bound_));
    A->pres_.kind = PresentationKind::Tensor;
    A->factors_ = {L, R};
    const size_t dl = L->dim(), dr = R->dim(), d = dl * dr;
    // generator renaming: primitive factors get a numeric suffix
    auto count_primitive = [](const AlgebraPtr& X) {
        std::function<size_t(const AlgebraPtr&)> f = [&](const AlgebraPtr& Y) -> size_t {
            return Y->factors_.empty() ? 1 : f(Y->factors_[0]) + f(Y->factors_[1]);
        };
        return f(X);
    };
    auto rename = [](const AlgebraPtr& X, size_t index) {
        std::map<std::string, std::string> m;
        for (const auto& [name, v] : X->gens_) m[name] = X->factors_.empty() ? name + std::to_string(index) : name;
        return m;
    };
    auto ln = rename(L, 1), rn = rename(R, count_primitive(L) + 1);
    auto relabel = [](const std::string& label, const std::map<std::string, std::string>& m) {
        if (label == "1") return std::string();
        std::string out, tok;
        auto flush = [&] {
            if (tok.empty()) return;
            auto it = m.find(tok);
            out += it == m.end() ? tok : it->second;
            tok.clear();
        };
        for (char c : label) {
            if (c == '*' || c == '^') {
                flush();
                out += c;
            } else if (!out.empty() && out.back() == '^') {
                out += c;
            } else {
                tok += c;
            }
        }
        flush();
        return out;
    };
    A->labels_.resize(d);
    for (size_t i = 0; i < dl; ++i)
        for (size_t j = 0; j < dr; ++j) {
            std::string l = relabel(L->labels_[i], ln), r = relabel(R->labels_[j], rn);
            A->labels_[i * dr + j] = l.empty() && r.empty() ? "1" : l.empty() ? r : r.empty() ? l : l + "*" + r;
        }
    A->table_.assign(d, std::vector<std::vector<std::pair<size_t, Elem>>>(d));
    for (size_t i = 0; i < dl; ++i)
        for (size_t k = 0; k < dl; ++k)
            for (const auto& [m, c1] : L->table_[i][k])
                for (size_t j = 0; j < dr; ++j)
                    for (size_t l = 0; l < dr; ++l)
                        for (const auto& [n, c2] : R->table_[j][l]) A->table_[i * dr + j][k * dr + l].emplace_back(m * dr + n, c1 * c2);
    for (const auto& [name, v] : L->gens_) A->gens_[ln[name]] = A->tensor_elem(v, R->one());
    for (const auto& [name, v] : R->gens_) A->gens_[rn[name]] = A->tensor_elem(L->one(), v);
    A->atoms_ = A->gens_;
    for (const auto& [name, v] : L->atoms_)
        if (!L->gens_.count(name) && L->factors_.empty()) A->atoms_[name + "1"] = A->tensor_elem(v, R->one());
    for (const auto& [name, v] : R->atoms_)
        if (!R->gens_.count(name) && R->factors_.empty())
            A->atoms_[name + std::to_string(count_primitive(L) + 1)] = A->tensor_elem(L->one(), v);
    // x1y1 style aliases for products of two renamed generators
    for (const auto& [name, v] : L->atoms_)
        if (name == "xy" && L->factors_.empty()) A->atoms_["x1y1"] = A->tensor_elem(v, R->one());
    if (R->factors_.empty() && R->atoms_.count("xy")) {
        std::string k = std::to_string(count_primitive(L) + 1);
        A->atoms_["x" + k + "y" + k] = A->tensor_elem(L->one(), R->atoms_.at("xy"));
    }
    if (L->split_ && R->split_) {
        auto sp = std::make_shared<Splitting>();
        sp->ring = Ring::combine(*L->split_->ring, *R->split_->ring);
        const Ring& Rg = *sp->ring;
        const size_t nl = static_cast<size_t>(L->deg_), nr = static_cast<size_t>(R->deg_);
        const size_t off = L->split_->ring->deg.size();
        sp->images.resize(d);
        for (size_t i = 0; i < dl; ++i)
            for (size_t j = 0; j < dr; ++j) {
                const RMat& P = L->split_->images[i];
                const RMat& Q = R->split_->images[j];
                RMat K = r_zero(Rg, nl * nr);
                for (size_t a = 0; a < nl; ++a)
                    for (size_t b = 0; b < nl; ++b) {
                        if (r_is_zero(P[a][b])) continue;
                        RElem pa = r_lift(Rg, P[a][b], 0);
                        for (size_t c = 0; c < nr; ++c)
                            for (size_t e = 0; e < nr; ++e)
                                if (!r_is_zero(Q[c][e])) K[a * nr + c][b * nr + e] = pa * r_lift(Rg, Q[c][e], off);
                    }
                sp->images[i * dr + j] = K;
            }
        A->split_ = sp;
    }
    A->finish();
    return A;
}

// ---------------------------------------------------------------- element arithmetic

Vec Algebra::zero() const { return zero_vec(F_, dim()); }

Vec Algebra::one() const { return basis(0); }

Vec Algebra::basis(size_t i) const {
    Vec v = zero();
    v.at(i) = F_->one();
    return v;
}

Vec Algebra::scalar(const Elem& c) const {
    Vec v = zero();
    v[0] = F_->embed(c);
    return v;
}

Vec Algebra::mul(const Vec& x, const Vec& y) const {
    Vec r = zero();
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i].is_zero()) continue;
        for (size_t j = 0; j < y.size(); ++j) {
            if (y[j].is_zero()) continue;
            Elem c = x[i] * y[j];
            for (const auto& [k, s] : table_[i][j]) r[k] += c * s;
        }
    }
    return r;
}

Vec Algebra::power(const Vec& x, int64_t e) const {
    if (e < 0) {
        auto inv = inverse(x);
        if (!inv) throw MathError("negative power of a non-invertible element");
        return power(*inv, -e);
    }
    Vec r = one(), b = x;
    while (e > 0) {
        if (e & 1) r = mul(r, b);
        e >>= 1;
        if (e) b = mul(b, b);
    }
    return r;
}

Mat Algebra::left_mult(const Vec& x) const {
    const size_t d = dim();
    Mat M = zero_mat(F_, d, d);
    for (size_t j = 0; j < d; ++j) {
        Vec col = mul(x, basis(j));
        for (size_t i = 0; i < d; ++i) M[i][j] = col[i];
    }
    return M;
}

std::optional<Vec> Algebra::inverse(const Vec& x) const {
    auto v = solve(left_mult(x), one());
    if (!v) return std::nullopt;
    if (!is_zero_vec(vec_sub(mul(*v, x), one()))) return std::nullopt;
    return v;
}

bool Algebra::is_scalar(const Vec& x) const {
    for (size_t i = 1; i < x.size(); ++i)
        if (!x[i].is_zero()) return false;
    return true;
}

Vec Algebra::tensor_elem(const Vec& l, const Vec& r) const {
    if (factors_.size() != 2) throw UsageError("not a tensor product");
    const size_t dr = factors_[1]->dim();
    Vec v = zero();
    for (size_t i = 0; i < l.size(); ++i) {
        if (l[i].is_zero()) continue;
        for (size_t j = 0; j < r.size(); ++j)
            if (!r[j].is_zero()) v[i * dr + j] = l[i] * r[j];
    }
    return v;
}

// ---------------------------------------------------------------- reduced characteristic data

Poly Algebra::reduced_char_poly(const Vec& x) const {
    if (!split_) return reduced_char_poly_regular(x);
    const Ring& R = *split_->ring;
    const size_t n = static_cast<size_t>(deg_);
    RMat M = r_zero(R, n);
    for (size_t k = 0; k < x.size(); ++k) {
        if (x[k].is_zero()) continue;
        RElem c = r_scalar(R, x[k]);
        const RMat& I = split_->images[k];
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                if (!r_is_zero(I[i][j])) M[i][j] = M[i][j] + c * I[i][j];
    }
    auto C = berkowitz<RElem>(M, r_scalar(R, F_->zero()), r_scalar(R, F_->one()));
    Poly f;
    for (size_t i = C.size(); i-- > 0;) {
        for (size_t k = 1; k < R.size; ++k)
            if (!C[i].c[k].is_zero()) throw MathError("reduced characteristic polynomial left the base field");
        f.push_back(C[i].c[0]);
    }
    return f;
}

Poly Algebra::reduced_char_poly_regular(const Vec& x) const { return poly_root(charpoly(left_mult(x)), deg_); }

Elem Algebra::nrd(const Vec& x) const {
    Poly f = reduced_char_poly(x);
    return deg_ % 2 ? -f[0] : f[0];
}

Elem Algebra::trd(const Vec& x) const {
    Poly f = reduced_char_poly(x);
    return -f[deg_ - 1];
}

// ---------------------------------------------------------------- validation

bool Algebra::check_associative(size_t max_triples) const {
    const size_t d = dim();
    const size_t total = d * d * d;
    const size_t step = total <= max_triples ? 1 : total / max_triples + 1;
    for (size_t t = 0; t < total; t += step) {
        size_t i = t / (d * d), j = (t / d) % d, k = t % d;
        Vec ei = basis(i), ej = basis(j), ek = basis(k);
        if (!is_zero_vec(vec_sub(mul(mul(ei, ej), ek), mul(ei, mul(ej, ek))))) return false;
    }
    for (size_t i = 0; i < d; ++i) {
        Vec e = basis(i);
        if (!is_zero_vec(vec_sub(mul(one(), e), e)) || !is_zero_vec(vec_sub(mul(e, one()), e))) return false;
    }
    return true;
}

bool Algebra::check_relations() const {
    if (pres_.kind != PresentationKind::Tensor) {
        const Vec& x = gens_.at("x");
        const Vec& y = gens_.at("y");
        const int64_t n = deg_;
        Vec lhs, rhs;
        if (!is_zero_vec(vec_sub(power(y, n), scalar(*pres_.b)))) return false;
        switch (pres_.kind) {
            case PresentationKind::Symbol:
                if (!is_zero_vec(vec_sub(power(x, n), scalar(*pres_.a)))) return false;
                if (!is_zero_vec(vec_sub(mul(x, y), scale(*pres_.zeta, mul(y, x))))) return false;
                break;
            case PresentationKind::CyclicKummer:
                if (!is_zero_vec(vec_sub(power(x, n), scalar(*pres_.a)))) return false;
                if (!is_zero_vec(vec_sub(mul(y, x), scale(*pres_.zeta, mul(x, y))))) return false;
                break;
            case PresentationKind::PAlgebra:
            case PresentationKind::CyclicArtinSchreier: {
                if (!is_zero_vec(vec_sub(vec_sub(power(x, n), x), scalar(*pres_.a)))) return false;
                Elem s = F_->from_int(pres_.kind == PresentationKind::PAlgebra ? 1 : -1);
                if (!is_zero_vec(vec_sub(mul(x, y), mul(y, add(x, scalar(s)))))) return false;
                break;
            }
            default: break;
        }
    }
    if (!split_) return true;
    // the splitting is multiplicative on generator pairs (all pairs for small algebras)
    std::vector<size_t> idx;
    if (dim() <= 16) {
        for (size_t i = 0; i < dim(); ++i) idx.push_back(i);
    } else {
        idx.push_back(0);
        for (const auto& [name, v] : gens_)
            for (size_t i = 0; i < v.size(); ++i)
                if (!v[i].is_zero()) idx.push_back(i);
    }
    const Ring& R = *split_->ring;
    for (size_t i : idx)
        for (size_t j : idx) {
            RMat lhs = r_mul(split_->images[i], split_->images[j]);
            RMat rhs = r_zero(R, static_cast<size_t>(deg_));
            for (const auto& [k, c] : table_[i][j]) {
                RMat t = r_scale(r_scalar(R, c), split_->images[k]);
                for (size_t a = 0; a < rhs.size(); ++a)
                    for (size_t b = 0; b < rhs.size(); ++b) rhs[a][b] = rhs[a][b] + t[a][b];
            }
            if (!r_equal(lhs, rhs)) return false;
        }
    return true;
}

bool Algebra::trace_form_nondegenerate() const {
    const size_t d = dim();
    Mat G = zero_mat(F_, d, d);
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) G[i][j] = trd(mul(basis(i), basis(j)));
    return rank(G) == d;
}

// ---------------------------------------------------------------- parsing and printing

std::string Algebra::format(const Vec& x) const {
    std::string out;
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i].is_zero()) continue;
        std::string c = x[i].to_string();
        bool neg = c[0] == '-' && c.find_first_of("+- ", 1) == std::string::npos;
        if (neg) c = c.substr(1);
        bool compound = c.find_first_of("+- ") != std::string::npos;
        std::string t;
        if (labels_[i] == "1")
            t = compound ? "(" + c + ")" : c;
        else if (c == "1")
            t = labels_[i];
        else
            t = (compound ? "(" + c + ")" : c) + "*" + labels_[i];
        if (out.empty())
            out = neg ? "-" + t : t;
        else
            out += neg ? " - " + t : " + " + t;
    }
    return out.empty() ? "0" : out;
}

Vec Algebra::parse(const std::string& text) const {
    size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto fail = [&](const std::string& what) -> Vec {
        throw UsageError("algebra element: " + what + " at position " + std::to_string(pos) + " in '" + text + "'");
    };
    std::function<Vec()> expr, term, factor, atom;
    atom = [&]() -> Vec {
        skip();
        if (pos >= text.size()) return fail("unexpected end");
        char c = text[pos];
        if (c == '(') {
            ++pos;
            Vec v = expr();
            skip();
            if (pos >= text.size() || text[pos] != ')') return fail("missing ')'");
            ++pos;
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            return scalar(F_->from_int(Integer(text.substr(start, pos - start))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos;
            while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) ++pos;
            std::string id = text.substr(start, pos - start);
            auto it = atoms_.find(id);
            if (it != atoms_.end()) return it->second;
            if (auto e = F_->named(id)) return scalar(*e);
            return fail("unknown name '" + id + "'");
        }
        return fail(std::string("unexpected '") + c + "'");
    };
    factor = [&]() -> Vec {
        Vec base = atom();
        skip();
        if (pos < text.size() && text[pos] == '^') {
            ++pos;
            skip();
            bool neg = false;
            if (pos < text.size() && text[pos] == '-') {
                neg = true;
                ++pos;
            }
            size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (start == pos) return fail("exponent expected");
            int64_t e = std::stoll(text.substr(start, pos - start));
            return power(base, neg ? -e : e);
        }
        return base;
    };
    std::function<Vec()> unary = [&]() -> Vec {
        skip();
        if (pos < text.size() && text[pos] == '-') {
            ++pos;
            return vec_scale(-F_->one(), unary());
        }
        if (pos < text.size() && text[pos] == '+') {
            ++pos;
            return unary();
        }
        return factor();
    };
    term = [&]() -> Vec {
        Vec v = unary();
        while (true) {
            skip();
            if (pos < text.size() && text[pos] == '*') {
                ++pos;
                v = mul(v, unary());
            } else if (pos < text.size() && text[pos] == '/') {
                ++pos;
                Vec d = unary();
                auto inv = inverse(d);
                if (!inv) return fail("division by a non-invertible element");
                v = mul(v, *inv);
            } else {
                return v;
            }
        }
    };
    expr = [&]() -> Vec {
        Vec v = term();
        while (true) {
            skip();
            if (pos < text.size() && text[pos] == '+') {
                ++pos;
                v = vec_add(v, term());
            } else if (pos < text.size() && text[pos] == '-') {
                ++pos;
                v = vec_sub(v, term());
            } else {
                return v;
            }
        }
    };
    Vec v = expr();
    skip();
    if (pos != text.size()) fail("trailing input");
    return v;
}

// ---------------------------------------------------------------- descriptor parsing

AlgebraPtr parse_algebra(const FieldPtr& F, const std::string& text) {
    size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto fail = [&](const std::string& what) -> AlgebraPtr {
        throw UsageError("algebra descriptor: " + what + " at position " + std::to_string(pos) + " in '" + text + "'");
    };
    // arguments separated by ';' at depth zero
    auto args = [&]() {
        std::vector<std::string> out;
        std::string cur;
        int depth = 0;
        ++pos;
        for (; pos < text.size(); ++pos) {
            char c = text[pos];
            if (c == '(') ++depth;
            if (c == ')') {
                if (depth == 0) break;
                --depth;
            }
            if (c == ';' && depth == 0) {
                out.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (pos >= text.size()) throw UsageError("algebra descriptor: missing ')' in '" + text + "'");
        ++pos;
        out.push_back(cur);
        return out;
    };
    auto integer = [](const std::string& s) {
        try {
            size_t used = 0;
            int64_t v = std::stoll(s, &used);
            while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
            if (used != s.size()) throw UsageError("bad integer '" + s + "'");
            return v;
        } catch (const std::logic_error&) {
            throw UsageError("bad integer '" + s + "'");
        }
    };
    std::function<AlgebraPtr()> expr, primary;
    primary = [&]() -> AlgebraPtr {
        skip();
        if (pos < text.size() && text[pos] == '(') {
            ++pos;
            AlgebraPtr A = expr();
            skip();
            if (pos >= text.size() || text[pos] != ')') return fail("missing ')'");
            ++pos;
            return A;
        }
        size_t start = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) ++pos;
        std::string name = text.substr(start, pos - start);
        skip();
        if (name.empty() || pos >= text.size() || text[pos] != '(') return fail("constructor expected");
        auto a = args();
        auto el = [&](size_t i) { return parse_element(F, a.at(i)); };
        if (name == "symbol" || name == "cyclic_kummer") {
            if (a.size() != 3 && a.size() != 4) return fail(name + " takes a; b; n[; zeta]");
            std::optional<Elem> z;
            if (a.size() == 4) z = el(3);
            return name == "symbol" ? Algebra::symbol(el(0), el(1), integer(a[2]), z)
                                    : Algebra::cyclic_kummer(el(0), el(1), integer(a[2]), z);
        }
        if (name == "palg") {
            if (a.size() != 2 && a.size() != 3) return fail("palg takes a; b[; p]");
            if (a.size() == 3 && integer(a[2]) != F->characteristic()) return fail("p must equal the characteristic");
            return Algebra::p_algebra(el(0), el(1));
        }
        if (name == "cyclic_as") {
            if (a.size() != 2) return fail("cyclic_as takes a; b");
            return Algebra::cyclic_artin_schreier(el(0), el(1));
        }
        return fail("unknown constructor '" + name + "'");
    };
    expr = [&]() -> AlgebraPtr {
        AlgebraPtr A = primary();
        while (true) {
            skip();
            if (text.compare(pos, 3, "(*)") != 0) return A;
            pos += 3;
            A = Algebra::tensor(A, primary());
        }
    };
    AlgebraPtr A = expr();
    skip();
    if (pos != text.size()) return fail("trailing input");
    return A;
}

// ---------------------------------------------------------------- biquaternion division test

QuadraticForm albert_form(const AlgebraPtr& A) {
    if (A->factors().size() != 2) throw UsageError("Albert form needs a tensor of two quaternion algebras");
    const FieldPtr& F = A->field();
    if (F->characteristic() == 2) throw UnsupportedTower("Albert form in characteristic 2");
    Vec ab;
    for (const auto& Qi : A->factors()) {
        const auto& p = Qi->presentation();
        if (Qi->degree() != 2 || (p.kind != PresentationKind::Symbol && p.kind != PresentationKind::CyclicKummer))
            throw UsageError("Albert form needs quaternion symbol factors");
        ab.push_back(*p.a);
        ab.push_back(*p.b);
    }
    return diagonal_form(F, Vec{ab[0], ab[1], -(ab[0] * ab[1]), -ab[2], -ab[3], ab[2] * ab[3]});
}

DivisionResult is_division_biquaternion(const AlgebraPtr& A) {
    DivisionResult r;
    r.albert = albert_form(A);
    r.isotropy = isotropy(r.albert);
    r.division = !r.isotropy.isotropic;
    return r;
}

// ---------------------------------------------------------------- involutions

Vec Involution::apply(const Vec& x) const { return mat_vec(matrix, x); }

namespace {

Mat matrix_from_images(const std::vector<Vec>& cols) {
    const size_t d = cols.size();
    Mat M(d, Vec(d));
    for (size_t j = 0; j < d; ++j)
        for (size_t i = 0; i < d; ++i) M[i][j] = cols[j][i];
    return M;
}

std::vector<Vec> column_space(const Mat& M) {
    Echelon E = rref(transpose(M));
    return E.rows;
}

}  // namespace

Involution make_involution(const AlgebraPtr& A, const Mat& M, std::string description) {
    const FieldPtr& F = A->field();
    const size_t d = A->dim();
    Involution s;
    s.algebra = A;
    s.matrix = M;
    s.description = std::move(description);
    Mat I = identity(F, d);
    Mat M2 = mat_mul(M, M);
    for (size_t i = 0; i < d; ++i)
        if (!is_zero_vec(vec_sub(M2[i], I[i]))) throw MathError("not an involution: sigma^2 != id");
    if (!is_zero_vec(vec_sub(s.apply(A->one()), A->one()))) throw MathError("involution does not fix 1");
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) {
            Vec ei = A->basis(i), ej = A->basis(j);
            if (!is_zero_vec(vec_sub(s.apply(A->mul(ei, ej)), A->mul(s.apply(ej), s.apply(ei)))))
                throw MathError("not an anti-automorphism");
        }
    Mat IM = M;
    for (size_t i = 0; i < d; ++i) IM[i][i] += F->one();
    s.symd = column_space(IM);
    const int64_t n = A->degree();
    if (F->characteristic() != 2) {
        Mat MI = M;
        for (size_t i = 0; i < d; ++i) MI[i][i] -= F->one();
        size_t sym = kernel(MI).size();
        if (sym == static_cast<size_t>(n * (n + 1) / 2))
            s.kind = Involution::Kind::Orthogonal;
        else if (sym == static_cast<size_t>(n * (n - 1) / 2))
            s.kind = Involution::Kind::Symplectic;
        else
            throw MathError("symmetric space of unexpected dimension " + std::to_string(sym));
    } else {
        s.kind = in_symd(s, A->one()) ? Involution::Kind::Symplectic : Involution::Kind::Orthogonal;
    }
    return s;
}

Involution canonical_involution(const AlgebraPtr& Q) {
    if (Q->degree() != 2) throw UsageError("canonical involution needs a quaternion algebra");
    std::vector<Vec> cols;
    for (size_t j = 0; j < Q->dim(); ++j) {
        Vec e = Q->basis(j);
        cols.push_back(vec_sub(Q->scalar(Q->trd(e)), e));
    }
    return make_involution(Q, matrix_from_images(cols), "canonical");
}

namespace {

Involution product_involution(const AlgebraPtr& A, const Involution& s1, const Involution& s2, std::string desc) {
    const auto& L = A->factors()[0];
    const auto& R = A->factors()[1];
    std::vector<Vec> cols;
    for (size_t i = 0; i < L->dim(); ++i)
        for (size_t j = 0; j < R->dim(); ++j) cols.push_back(A->tensor_elem(s1.apply(L->basis(i)), s2.apply(R->basis(j))));
    return make_involution(A, matrix_from_images(cols), std::move(desc));
}

void require_biquaternion(const AlgebraPtr& A) {
    if (A->factors().size() != 2 || A->factors()[0]->degree() != 2 || A->factors()[1]->degree() != 2)
        throw UsageError("expected a tensor product of two quaternion algebras");
}

}  // namespace

Involution make_symplectic_involution(const AlgebraPtr& A, std::optional<Vec> s) {
    require_biquaternion(A);
    const auto& Q1 = A->factors()[0];
    const auto& Q2 = A->factors()[1];
    Involution g1 = canonical_involution(Q1), g2 = canonical_involution(Q2);
    std::vector<std::pair<std::string, Vec>> candidates;
    if (s) {
        candidates.emplace_back(Q2->format(*s), *s);
    } else {
        for (const char* name : {"x", "y", "xy"}) {
            auto it = Q2->atoms_of(name);
            if (it) candidates.emplace_back(name, *it);
        }
    }
    for (const auto& [name, sv] : candidates) {
        Vec gs = g2.apply(sv);
        bool anti = is_zero_vec(vec_add(gs, sv));
        if (!anti) continue;
        auto inv = Q2->inverse(sv);
        if (!inv) continue;
        std::vector<Vec> cols;
        for (size_t j = 0; j < Q2->dim(); ++j) cols.push_back(Q2->mul(Q2->mul(sv, g2.apply(Q2->basis(j))), *inv));
        Involution t = make_involution(Q2, matrix_from_images(cols), "Int(" + name + ") o canonical");
        Involution sigma = product_involution(A, g1, t, "canonical (x) Int(" + name + ") o canonical");
        if (sigma.kind == Involution::Kind::Symplectic) return sigma;
    }
    throw MathError("no invertible anti-symmetric element found in the second factor");
}

Involution canonical_product_involution(const AlgebraPtr& A) {
    require_biquaternion(A);
    return product_involution(A, canonical_involution(A->factors()[0]), canonical_involution(A->factors()[1]),
                              "canonical (x) canonical");
}

std::vector<Vec> symmetrized_basis(const Involution& sigma) { return sigma.symd; }

bool in_symd(const Involution& sigma, const Vec& a) {
    if (sigma.symd.empty()) return is_zero_vec(a);
    const size_t d = a.size();
    Mat M(d, Vec(sigma.symd.size()));
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < sigma.symd.size(); ++j) M[i][j] = sigma.symd[j][i];
    return solve(M, a).has_value();
}

PfaffianData pfaffian_data(const Involution& sigma, const Vec& a) {
    if (sigma.kind != Involution::Kind::Symplectic) throw UsageError("Pfaffian data needs a symplectic involution");
    if (!in_symd(sigma, a)) throw UsageError("element is not in Symd(A, sigma)");
    const AlgebraPtr& A = sigma.algebra;
    Poly prd = A->reduced_char_poly(a);
    PfaffianData out;
    out.prp = poly_root(prd, 2);
    const int64_t m = A->degree() / 2;
    out.trp = -out.prp[m - 1];
    out.nrp = m % 2 ? -out.prp[0] : out.prp[0];
    return out;
}

bool is_sl1(const AlgebraPtr& A, const Vec& x) { return A->nrd(x).is_one(); }

Vec commutator(const AlgebraPtr& A, const Vec& x, const Vec& y) {
    auto xi = A->inverse(x), yi = A->inverse(y);
    if (!xi || !yi) throw MathError("commutator of non-invertible elements");
    return A->mul(A->mul(A->mul(x, y), *xi), *yi);
}

}  // namespace whitehead
