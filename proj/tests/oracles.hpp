#pragma once

// Reference implementations used only by the tests. They share no code with
// the library beyond the Rational and Polynomial value types: forms are keyed
// by sorted index sequences with signs from bubble sort, ranks come from
// fraction-free Bareiss elimination, and Pfaffians from cofactor expansion.

#include "liouville/exterior.hpp"
#include "liouville/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

using liouville::Polynomial;
using liouville::Rational;
using Seq = std::vector<int>;

// Sign of the permutation sorting seq, or 0 on a repeated index.
inline int sort_sign(Seq& seq) {
    int sign = 1;
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = 0; j + 1 < seq.size() - i; ++j)
            if (seq[j] > seq[j + 1]) {
                std::swap(seq[j], seq[j + 1]);
                sign = -sign;
            }
    for (std::size_t i = 1; i < seq.size(); ++i)
        if (seq[i] == seq[i - 1]) return 0;
    return sign;
}

inline bool is_zero(const Rational& c) { return c == 0; }
inline bool is_zero(const Polynomial& c) { return c.is_zero(); }

template <class C>
struct Form {
    std::map<Seq, C> terms;

    void add(Seq key, C c) {
        const int s = sort_sign(key);
        if (s == 0 || is_zero(c)) return;
        auto it = terms.find(key);
        if (it == terms.end()) {
            terms.emplace(std::move(key), s > 0 ? c : C(-c));
        } else {
            if (s > 0) it->second += c;
            else it->second -= c;
            if (is_zero(it->second)) terms.erase(it);
        }
    }
    Form& operator+=(const Form& o) {
        for (const auto& [k, v] : o.terms) add(k, v);
        return *this;
    }
    bool zero() const { return terms.empty(); }
};

template <class C>
Form<C> wedge(const Form<C>& a, const Form<C>& b) {
    Form<C> out;
    for (const auto& [ka, va] : a.terms)
        for (const auto& [kb, vb] : b.terms) {
            Seq k = ka;
            k.insert(k.end(), kb.begin(), kb.end());
            out.add(std::move(k), va * vb);
        }
    return out;
}

template <class C>
Form<C> scale(const Form<C>& a, const C& c) {
    Form<C> out;
    for (const auto& [k, v] : a.terms) out.add(k, v * c);
    return out;
}

// i_{e_g}: move g to the front, then drop it.
template <class C>
Form<C> interior(int g, const Form<C>& a) {
    Form<C> out;
    for (const auto& [k, v] : a.terms) {
        auto it = std::find(k.begin(), k.end(), g);
        if (it == k.end()) continue;
        const auto pos = it - k.begin();
        Seq rest = k;
        rest.erase(rest.begin() + pos);
        out.add(rest, pos % 2 == 0 ? v : C(-v));
    }
    return out;
}

// omega = sum_i dp_i ^ dq^i with q^i = i, p_i = n + i.
template <class C>
Form<C> omega(int n, const C& one) {
    Form<C> w;
    for (int i = 0; i < n; ++i) w.add({n + i, i}, one);
    return w;
}

template <class C>
Form<C> power(const Form<C>& a, int k, const C& one) {
    Form<C> out;
    out.add({}, one);
    for (int i = 0; i < k; ++i) out = wedge(out, a);
    return out;
}

inline Form<Rational> from_library(const liouville::ConstForm& a) {
    Form<Rational> out;
    for (const auto& [mask, c] : a.terms()) {
        Seq k;
        for (int g = 0; g < 32; ++g)
            if (mask >> g & 1U) k.push_back(g);
        out.add(k, c);
    }
    return out;
}

inline Form<Polynomial> from_library(const liouville::PolyForm& a) {
    Form<Polynomial> out;
    for (const auto& [mask, c] : a.terms()) {
        Seq k;
        for (int g = 0; g < 32; ++g)
            if (mask >> g & 1U) k.push_back(g);
        out.add(k, c);
    }
    return out;
}

// d on polynomial coefficients: sum_g dx^g ^ d_g(c) dx^I.
inline Form<Polynomial> d(const Form<Polynomial>& a, int dim) {
    Form<Polynomial> out;
    for (const auto& [k, v] : a.terms)
        for (int g = 0; g < dim; ++g) {
            Polynomial dv = v.derivative(g);
            if (dv.is_zero()) continue;
            Seq key{g};
            key.insert(key.end(), k.begin(), k.end());
            out.add(std::move(key), dv);
        }
    return out;
}

// i_X for X with components x[g].
inline Form<Polynomial> interior(const std::vector<Polynomial>& x, const Form<Polynomial>& a) {
    Form<Polynomial> out;
    for (std::size_t g = 0; g < x.size(); ++g) {
        if (x[g].is_zero()) continue;
        out += scale(interior(static_cast<int>(g), a), x[g]);
    }
    return out;
}

// Chevalley-Eilenberg d: generator differentials dtheta^k given as forms,
// extended as an antiderivation over the ordered generator sequence.
struct CE {
    int dim;
    std::vector<Form<Rational>> generator_d;

    Form<Rational> d(const Form<Rational>& a) const {
        Form<Rational> out;
        for (const auto& [k, v] : a.terms)
            for (std::size_t pos = 0; pos < k.size(); ++pos)
                for (const auto& [dk, dv] : generator_d[k[pos]].terms) {
                    Seq key(k.begin(), k.begin() + pos);
                    key.insert(key.end(), dk.begin(), dk.end());
                    key.insert(key.end(), k.begin() + pos + 1, k.end());
                    out.add(std::move(key), pos % 2 == 0 ? v * dv : Rational(-(v * dv)));
                }
        return out;
    }
};

inline std::vector<Seq> subsets(int dim, int m) {
    std::vector<Seq> out;
    if (m < 0 || m > dim) return out;
    Seq cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == m) {
            out.push_back(cur);
            return;
        }
        for (int g = start; g < dim; ++g) {
            cur.push_back(g);
            self(self, g + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

using Matrix = std::vector<std::vector<Rational>>;  // row-major, rows x cols

template <class Op>
Matrix operator_matrix(int dim, int from, int to, Op&& op) {
    const auto src = subsets(dim, from);
    const auto dst = subsets(dim, to);
    Matrix m(dst.size(), std::vector<Rational>(src.size(), Rational(0)));
    for (std::size_t c = 0; c < src.size(); ++c) {
        Form<Rational> e;
        e.add(src[c], Rational(1));
        for (const auto& [k, v] : op(e).terms) {
            const auto r = std::find(dst.begin(), dst.end(), k) - dst.begin();
            m[r][c] = v;
        }
    }
    return m;
}

// Rank by fraction-free Bareiss elimination after clearing denominators.
inline std::size_t rank(const Matrix& m) {
    if (m.empty() || m[0].empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        mpz_class l = 1;
        for (const auto& v : m[r]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
        for (std::size_t c = 0; c < cols; ++c) a[r][c] = m[r][c].get_num() * (l / m[r][c].get_den());
    }
    mpz_class prev = 1;
    std::size_t rk = 0;
    for (std::size_t c = 0; c < cols && rk < rows; ++c) {
        std::size_t piv = rk;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[rk]);
        for (std::size_t r = rk + 1; r < rows; ++r) {
            for (std::size_t k = c + 1; k < cols; ++k)
                a[r][k] = (a[rk][c] * a[r][k] - a[r][c] * a[rk][k]) / prev;
            a[r][c] = 0;
        }
        prev = a[rk][c];
        ++rk;
    }
    return rk;
}

inline Matrix hconcat(const Matrix& a, const Matrix& b) {
    if (a.empty()) return b;
    Matrix out = a;
    for (std::size_t r = 0; r < out.size(); ++r) out[r].insert(out[r].end(), b[r].begin(), b[r].end());
    return out;
}

inline Matrix vconcat(Matrix a, const Matrix& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.empty() || b.empty()) return Matrix(a.size(), std::vector<Rational>());
    Matrix out(a.size(), std::vector<Rational>(b[0].size(), Rational(0)));
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t k = 0; k < b.size(); ++k)
            if (a[r][k] != 0)
                for (std::size_t c = 0; c < b[0].size(); ++c) out[r][c] += a[r][k] * b[k][c];
    return out;
}

inline std::size_t betti(const CE& ce, int m) {
    const auto dm = operator_matrix(ce.dim, m, m + 1, [&](const auto& f) { return ce.d(f); });
    const auto dp = operator_matrix(ce.dim, m - 1, m, [&](const auto& f) { return ce.d(f); });
    const std::size_t cols = subsets(ce.dim, m).size();
    return cols - (m < ce.dim ? rank(dm) : 0) - (m > 0 ? rank(dp) : 0);
}

// dim {X : d i_X w^k = 0} / {X : i_X w^k exact}, with w a constant 2-form.
inline std::size_t el_dim(const CE& ce, const Form<Rational>& w, int k) {
    const Form<Rational> wk = power(w, k, Rational(1));
    const int deg = 2 * k - 1;
    // Column g: i_{e_g} w^k.
    Matrix a(subsets(ce.dim, deg).size(), std::vector<Rational>(ce.dim, Rational(0)));
    Matrix da(subsets(ce.dim, deg + 1).size(), std::vector<Rational>(ce.dim, Rational(0)));
    const auto rows = subsets(ce.dim, deg);
    const auto rows_d = subsets(ce.dim, deg + 1);
    for (int g = 0; g < ce.dim; ++g) {
        const auto ix = interior(g, wk);
        for (const auto& [key, v] : ix.terms)
            a[std::find(rows.begin(), rows.end(), key) - rows.begin()][g] = v;
        for (const auto& [key, v] : ce.d(ix).terms)
            da[std::find(rows_d.begin(), rows_d.end(), key) - rows_d.begin()][g] = v;
    }
    const std::size_t z = ce.dim - rank(da);
    const auto dprev =
        operator_matrix(ce.dim, deg - 1, deg, [&](const auto& f) { return ce.d(f); });
    // X -> i_X w^k is injective, so dim B = dim(im A ^ im d).
    const std::size_t b = rank(a) + rank(dprev) - rank(hconcat(a, dprev));
    return z - b;
}

// Symplectically harmonic classes in degree m for w with W^{-1} = W^T.
inline std::optional<std::size_t> harmonic_dim(const CE& ce, const Form<Rational>& w, int m) {
    std::vector<std::vector<Rational>> wm(ce.dim, std::vector<Rational>(ce.dim, Rational(0)));
    for (const auto& [k, v] : w.terms) {
        wm[k[0]][k[1]] += v;
        wm[k[1]][k[0]] -= v;
    }
    // Require an orthogonal W, so the bivector is W^T = -W.
    for (int r = 0; r < ce.dim; ++r)
        for (int c = 0; c < ce.dim; ++c) {
            Rational s = 0;
            for (int k = 0; k < ce.dim; ++k) s += wm[r][k] * wm[c][k];
            if (s != (r == c ? 1 : 0)) return std::nullopt;
        }
    auto fhat = [&](const Form<Rational>& a) {
        Form<Rational> out;
        for (int i = 0; i < ce.dim; ++i)
            for (int j = i + 1; j < ce.dim; ++j) {
                const Rational pij = wm[j][i];
                if (pij != 0) out += scale(interior(i, interior(j, a)), pij);
            }
        return out;
    };
    auto delta = [&](const Form<Rational>& a) {
        Form<Rational> out = fhat(ce.d(a));
        out += scale(ce.d(fhat(a)), Rational(-1));
        return out;
    };
    auto dmat = [&](int from) {
        return operator_matrix(ce.dim, from, from + 1, [&](const auto& f) { return ce.d(f); });
    };
    const auto del = operator_matrix(ce.dim, m, m - 1, delta);
    const std::size_t cols = subsets(ce.dim, m).size();
    Matrix stack = m < ce.dim ? dmat(m) : Matrix{};
    if (m > 0) stack = vconcat(stack, del);
    const std::size_t harmonic = cols - rank(stack);
    std::size_t exact_harmonic = 0;
    if (m > 0) {
        const auto dprev = dmat(m - 1);
        exact_harmonic = rank(dprev) - rank(multiply(del, dprev));
    }
    return harmonic - exact_harmonic;
}

// Pfaffian of an antisymmetric matrix by expansion along the first row.
inline long double pfaffian(const std::vector<std::vector<long double>>& a) {
    const std::size_t m = a.size();
    if (m == 0) return 1;
    if (m % 2 == 1) return 0;
    long double s = 0;
    for (std::size_t j = 1; j < m; ++j) {
        if (a[0][j] == 0) continue;
        std::vector<std::size_t> keep;
        for (std::size_t i = 1; i < m; ++i)
            if (i != j) keep.push_back(i);
        std::vector<std::vector<long double>> sub(keep.size(), std::vector<long double>(keep.size()));
        for (std::size_t r = 0; r < keep.size(); ++r)
            for (std::size_t c = 0; c < keep.size(); ++c) sub[r][c] = a[keep[r]][keep[c]];
        s += ((j % 2 == 1) ? 1 : -1) * a[0][j] * pfaffian(sub);
    }
    return s;
}

// (1/l!) omega^l evaluated on tangent vectors v[0..2l-1] in R^{2n}:
// Pf of G_ab = omega(v_a, v_b) with omega(x, y) = sum_i x_p y_q - x_q y_p.
inline long double volume_density(int n, const std::vector<std::vector<long double>>& v) {
    const std::size_t m = v.size();
    std::vector<std::vector<long double>> g(m, std::vector<long double>(m, 0));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            for (int i = 0; i < n; ++i)
                g[a][b] += v[a][n + i] * v[b][i] - v[a][i] * v[b][n + i];
    return pfaffian(g);
}

} // namespace oracle
