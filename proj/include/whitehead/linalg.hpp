// Dense linear algebra and univariate polynomials over field elements.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "whitehead/fields.hpp"

namespace whitehead {

using Vec = std::vector<Elem>;
using Mat = std::vector<Vec>;
// Coefficients, lowest degree first; the zero polynomial is empty.
using Poly = std::vector<Elem>;

Vec zero_vec(const FieldPtr& F, size_t n);
Mat zero_mat(const FieldPtr& F, size_t rows, size_t cols);
Mat identity(const FieldPtr& F, size_t n);
Vec mat_vec(const Mat& M, const Vec& v);
Mat mat_mul(const Mat& A, const Mat& B);
Mat transpose(const Mat& A);
bool is_zero_vec(const Vec& v);
Vec vec_add(const Vec& a, const Vec& b);
Vec vec_sub(const Vec& a, const Vec& b);
Vec vec_scale(const Elem& c, const Vec& v);
Elem dot(const Vec& a, const Vec& b);

struct Echelon {
    Mat rows;                     // reduced row echelon form
    std::vector<size_t> pivots;   // pivot column of each nonzero row
};
Echelon rref(Mat M);
size_t rank(const Mat& M);
// Basis of {v : M v = 0}.
std::vector<Vec> kernel(const Mat& M);
// Some solution of M v = b, if one exists.
std::optional<Vec> solve(const Mat& M, const Vec& b);
Elem det(const Mat& M);
std::optional<Mat> inverse(const Mat& M);

// Division-free characteristic polynomial det(X - M); coefficients highest first.
template <class T>
std::vector<T> berkowitz(const std::vector<std::vector<T>>& A, const T& zero, const T& one) {
    const size_t n = A.size();
    if (n == 0) return {one};
    std::vector<T> C{one, zero - A[0][0]};
    for (size_t k = 1; k < n; ++k) {
        std::vector<T> q(k + 2, zero);
        q[0] = one;
        q[1] = zero - A[k][k];
        std::vector<T> v(k, zero);
        for (size_t i = 0; i < k; ++i) v[i] = A[i][k];
        for (size_t j = 0; j < k; ++j) {
            T s = zero;
            for (size_t i = 0; i < k; ++i) s = s + A[k][i] * v[i];
            q[j + 2] = zero - s;
            if (j + 1 < k) {
                std::vector<T> w(k, zero);
                for (size_t r = 0; r < k; ++r)
                    for (size_t c = 0; c < k; ++c) w[r] = w[r] + A[r][c] * v[c];
                v = std::move(w);
            }
        }
        std::vector<T> D(k + 2, zero);
        for (size_t i = 0; i < k + 2; ++i)
            for (size_t j = 0; j <= std::min(i, k); ++j) D[i] = D[i] + q[i - j] * C[j];
        C = std::move(D);
    }
    return C;
}

// Characteristic polynomial det(X - M), lowest degree first.
Poly charpoly(const Mat& M);

void poly_trim(Poly& f);
int64_t poly_degree(const Poly& f);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_pow(const Poly& a, int64_t e);
Elem poly_eval(const Poly& f, const Elem& x);
bool poly_equal(const Poly& a, const Poly& b);
std::string poly_to_string(const Poly& f, const std::string& var = "X");
// Monic g with g^n = f; throws MathError when f is not an n-th power.
Poly poly_root(const Poly& f, int64_t n);

}  // namespace whitehead
