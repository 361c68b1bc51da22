#include "whitehead/linalg.hpp"

namespace whitehead {

Vec zero_vec(const FieldPtr& F, size_t n) { return Vec(n, F->zero()); }

Mat zero_mat(const FieldPtr& F, size_t rows, size_t cols) { return Mat(rows, zero_vec(F, cols)); }

Mat identity(const FieldPtr& F, size_t n) {
    Mat I = zero_mat(F, n, n);
    for (size_t i = 0; i < n; ++i) I[i][i] = F->one();
    return I;
}

Vec mat_vec(const Mat& M, const Vec& v) {
    Vec out;
    out.reserve(M.size());
    for (const auto& row : M) {
        Elem s = v.at(0).field->zero();
        for (size_t j = 0; j < row.size(); ++j)
            if (!row[j].is_zero() && !v[j].is_zero()) s += row[j] * v[j];
        out.push_back(s);
    }
    return out;
}

Mat mat_mul(const Mat& A, const Mat& B) {
    const FieldPtr& F = A.at(0).at(0).field;
    Mat C = zero_mat(F, A.size(), B.at(0).size());
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t k = 0; k < B.size(); ++k) {
            if (A[i][k].is_zero()) continue;
            for (size_t j = 0; j < B[k].size(); ++j)
                if (!B[k][j].is_zero()) C[i][j] += A[i][k] * B[k][j];
        }
    return C;
}

Mat transpose(const Mat& A) {
    if (A.empty()) return A;
    Mat T(A[0].size(), Vec(A.size()));
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < A[i].size(); ++j) T[j][i] = A[i][j];
    return T;
}

bool is_zero_vec(const Vec& v) {
    for (const auto& e : v)
        if (!e.is_zero()) return false;
    return true;
}

Vec vec_add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec vec_sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec vec_scale(const Elem& c, const Vec& v) {
    Vec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = c * v[i];
    return r;
}

Elem dot(const Vec& a, const Vec& b) {
    Elem s = a.at(0).field->zero();
    for (size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
    return s;
}

Echelon rref(Mat M) {
    Echelon E;
    if (M.empty()) return E;
    const size_t rows = M.size(), cols = M[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && M[piv][c].is_zero()) ++piv;
        if (piv == rows) continue;
        std::swap(M[piv], M[r]);
        Elem ip = M[r][c].inv();
        for (size_t k = c; k < cols; ++k)
            if (!M[r][k].is_zero()) M[r][k] = M[r][k] * ip;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || M[i][c].is_zero()) continue;
            Elem f = M[i][c];
            for (size_t k = c; k < cols; ++k)
                if (!M[r][k].is_zero()) M[i][k] -= f * M[r][k];
        }
        E.pivots.push_back(c);
        ++r;
    }
    M.resize(r);
    E.rows = std::move(M);
    return E;
}

size_t rank(const Mat& M) { return rref(M).pivots.size(); }

std::vector<Vec> kernel(const Mat& M) {
    std::vector<Vec> out;
    if (M.empty()) return out;
    const size_t cols = M[0].size();
    const FieldPtr& F = M[0][0].field;
    Echelon E = rref(M);
    std::vector<int> pivot_row(cols, -1);
    for (size_t i = 0; i < E.pivots.size(); ++i) pivot_row[E.pivots[i]] = static_cast<int>(i);
    for (size_t free = 0; free < cols; ++free) {
        if (pivot_row[free] >= 0) continue;
        Vec v = zero_vec(F, cols);
        v[free] = F->one();
        for (size_t i = 0; i < E.pivots.size(); ++i) v[E.pivots[i]] = -E.rows[i][free];
        out.push_back(v);
    }
    return out;
}

std::optional<Vec> solve(const Mat& M, const Vec& b) {
    const FieldPtr& F = b.at(0).field;
    const size_t cols = M.at(0).size();
    Mat A = M;
    for (size_t i = 0; i < A.size(); ++i) A[i].push_back(b[i]);
    Echelon E = rref(A);
    Vec x = zero_vec(F, cols);
    for (size_t i = 0; i < E.pivots.size(); ++i) {
        if (E.pivots[i] == cols) return std::nullopt;
        x[E.pivots[i]] = E.rows[i][cols];
    }
    return x;
}

Elem det(const Mat& M) {
    const FieldPtr& F = M.at(0).at(0).field;
    Mat A = M;
    const size_t n = A.size();
    Elem d = F->one();
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && A[piv][c].is_zero()) ++piv;
        if (piv == n) return F->zero();
        if (piv != c) {
            std::swap(A[piv], A[c]);
            d = -d;
        }
        d = d * A[c][c];
        Elem ip = A[c][c].inv();
        for (size_t i = c + 1; i < n; ++i) {
            if (A[i][c].is_zero()) continue;
            Elem f = A[i][c] * ip;
            for (size_t k = c; k < n; ++k) A[i][k] -= f * A[c][k];
        }
    }
    return d;
}

std::optional<Mat> inverse(const Mat& M) {
    const size_t n = M.size();
    const FieldPtr& F = M.at(0).at(0).field;
    Mat A = M;
    for (size_t i = 0; i < n; ++i) {
        A[i].resize(2 * n, F->zero());
        A[i][n + i] = F->one();
    }
    Echelon E = rref(A);
    if (E.pivots.size() < n || E.pivots[n - 1] != n - 1) return std::nullopt;
    Mat inv(n);
    for (size_t i = 0; i < n; ++i) inv[i] = Vec(E.rows[i].begin() + n, E.rows[i].end());
    return inv;
}

Poly charpoly(const Mat& M) {
    const FieldPtr& F = M.at(0).at(0).field;
    auto c = berkowitz<Elem>(M, F->zero(), F->one());
    return Poly(c.rbegin(), c.rend());
}

void poly_trim(Poly& f) {
    while (!f.empty() && f.back().is_zero()) f.pop_back();
}

int64_t poly_degree(const Poly& f) {
    Poly g = f;
    poly_trim(g);
    return static_cast<int64_t>(g.size()) - 1;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r = a.size() >= b.size() ? a : b;
    const Poly& s = a.size() >= b.size() ? b : a;
    for (size_t i = 0; i < s.size(); ++i) r[i] = a[i] + b[i];
    poly_trim(r);
    return r;
}

Poly poly_sub(const Poly& a, const Poly& b) {
    Poly nb = b;
    for (auto& c : nb) c = -c;
    return poly_add(a, nb);
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    const FieldPtr& F = a[0].field;
    Poly r(a.size() + b.size() - 1, F->zero());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    poly_trim(r);
    return r;
}

Poly poly_pow(const Poly& a, int64_t e) {
    if (a.empty()) return {};
    Poly r{a[0].field->one()};
    for (int64_t i = 0; i < e; ++i) r = poly_mul(r, a);
    return r;
}

Elem poly_eval(const Poly& f, const Elem& x) {
    Elem r = x.field->zero();
    for (size_t i = f.size(); i-- > 0;) r = r * x + f[i];
    return r;
}

bool poly_equal(const Poly& a, const Poly& b) {
    Poly d = poly_sub(a, b);
    return d.empty();
}

std::string poly_to_string(const Poly& f, const std::string& var) {
    std::string out;
    bool first = true;
    for (size_t i = f.size(); i-- > 0;) {
        if (f[i].is_zero()) continue;
        std::string c = f[i].to_string();
        bool neg = !c.empty() && c[0] == '-' && c.find_first_of("+ ", 1) == std::string::npos;
        if (neg) c = c.substr(1);
        bool compound = c.find_first_of("+- ") != std::string::npos;
        std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
        std::string t;
        if (mono.empty())
            t = c;
        else if (c == "1")
            t = mono;
        else
            t = (compound ? "(" + c + ")" : c) + "*" + mono;
        if (first)
            out = neg ? "-" + t : t;
        else
            out += neg ? " - " + t : " + " + t;
        first = false;
    }
    return first ? "0" : out;
}

namespace {

// Root by the power-series recursion; requires n invertible.
Poly series_root(const Poly& f, int64_t n) {
    const FieldPtr& F = f.back().field;
    const int64_t N = static_cast<int64_t>(f.size()) - 1;
    const int64_t d = N / n;
    // reversed coefficients: F(u) = 1 + f_{N-1} u + ...
    std::vector<Elem> Fu(d + 1, F->zero());
    for (int64_t k = 0; k <= d; ++k) Fu[k] = f[N - k];
    std::vector<Elem> G(d + 1, F->zero());
    G[0] = F->one();
    Elem inv_n = F->from_int(n).inv();
    for (int64_t k = 1; k <= d; ++k) {
        // coefficient of u^k in G^n with G_k = 0
        std::vector<Elem> P(d + 1, F->zero());
        P[0] = F->one();
        for (int64_t rep = 0; rep < n; ++rep) {
            std::vector<Elem> Q(d + 1, F->zero());
            for (int64_t i = 0; i <= k; ++i)
                for (int64_t j = 0; i + j <= k; ++j)
                    if (!P[i].is_zero() && !G[j].is_zero()) Q[i + j] += P[i] * G[j];
            P = std::move(Q);
        }
        G[k] = (Fu[k] - P[k]) * inv_n;
    }
    Poly g(d + 1, F->zero());
    for (int64_t k = 0; k <= d; ++k) g[d - k] = G[k];
    return g;
}

}  // namespace

Poly poly_root(const Poly& f0, int64_t n) {
    Poly f = f0;
    poly_trim(f);
    if (f.empty()) throw MathError("root of the zero polynomial");
    if (!f.back().is_one()) throw MathError("poly_root needs a monic polynomial");
    const int64_t N = static_cast<int64_t>(f.size()) - 1;
    if (N % n != 0) throw MathError("degree not divisible by the root index");
    const FieldPtr& F = f.back().field;
    const int64_t p = F->characteristic();
    Poly g = f;
    int64_t rest = n;
    while (p > 0 && rest % p == 0) {
        // p-th root: only exponents divisible by p may occur
        const int64_t deg = static_cast<int64_t>(g.size()) - 1;
        Poly h(deg / p + 1, F->zero());
        for (int64_t i = 0; i <= deg; ++i) {
            if (g[i].is_zero()) continue;
            if (i % p) throw MathError("polynomial is not a p-th power");
            auto r = is_nth_power(g[i], p);
            if (!r.is_power || !r.witness) throw MathError("coefficient without a p-th root");
            h[i / p] = *r.witness;
        }
        g = h;
        rest /= p;
    }
    if (rest > 1) g = series_root(g, rest);
    if (!poly_equal(poly_pow(g, n), f)) throw MathError("polynomial is not an exact power");
    return g;
}

}  // namespace whitehead
