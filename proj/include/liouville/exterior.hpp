#pragma once

// Exterior algebra over a 2n-dimensional frame with generator order
// dq^1 < ... < dq^n < dp_1 < ... < dp_n. A blade is a bitmask over the
// generators; its canonical representative is the increasing sequence.

#include "liouville/errors.hpp"
#include "liouville/linalg.hpp"
#include "liouville/polynomial.hpp"
#include "liouville/rational.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace liouville {

inline constexpr int kMaxHalfDimension = kMaxVariables / 2;

class Frame {
public:
    enum class Labels { darboux, theta };

    explicit Frame(int n, Labels labels = Labels::darboux) : n_(n), labels_(labels) {
        if (n < 1 || n > kMaxHalfDimension)
            throw DomainError("frame half-dimension must be in [1, " +
                              std::to_string(kMaxHalfDimension) + "], got " + std::to_string(n));
    }

    int n() const noexcept { return n_; }
    int dimension() const noexcept { return 2 * n_; }
    Labels labels() const noexcept { return labels_; }

    int q(int i) const noexcept { return i; }       // generator index of dq^{i+1}
    int p(int i) const noexcept { return n_ + i; }  // generator index of dp_{i+1}

    /// Coordinate names q1..qn p1..pn (or x1..x2n for theta frames).
    std::vector<std::string> coordinate_names() const;
    std::string generator_name(int g) const;

    // Labels only affect printing.
    friend bool operator==(const Frame& a, const Frame& b) { return a.n_ == b.n_; }

private:
    int n_;
    Labels labels_;
};

using BladeMask = std::uint32_t;

constexpr int blade_degree(BladeMask m) noexcept { return std::popcount(m); }

/// Sign of e_a ^ e_b relative to the canonical blade a|b; 0 when they overlap.
constexpr int wedge_sign(BladeMask a, BladeMask b) noexcept {
    if (a & b) return 0;
    int swaps = 0;
    // Count pairs (i in a, j in b) with i > j.
    for (BladeMask rest = b; rest; rest &= rest - 1) {
        int j = std::countr_zero(rest);
        swaps += std::popcount(a >> (j + 1));
    }
    return (swaps & 1) ? -1 : 1;
}

/// Sign of i_{e_g} on the canonical blade m; 0 when g is absent.
constexpr int interior_sign(int g, BladeMask m) noexcept {
    if (!(m & (BladeMask{1} << g))) return 0;
    return (std::popcount(m & ((BladeMask{1} << g) - 1)) & 1) ? -1 : 1;
}

inline bool coefficient_is_zero(const Rational& c) { return c == 0; }
inline bool coefficient_is_zero(const Polynomial& c) { return c.is_zero(); }

/// Rationals built from (num, den) are not reduced until canonicalized.
inline Rational normalized(const Rational& c) {
    Rational r = c;
    r.canonicalize();
    return r;
}
inline const Polynomial& normalized(const Polynomial& c) { return c; }

template <typename C>
C constant_coefficient(const Frame& frame, const Rational& value);

template <>
inline Rational constant_coefficient<Rational>(const Frame&, const Rational& value) {
    return value;
}

template <>
inline Polynomial constant_coefficient<Polynomial>(const Frame& frame, const Rational& value) {
    return Polynomial(frame.dimension(), value);
}

/// Sparse form: blade mask -> coefficient, no zero coefficients stored.
/// C is Rational (invariant/constant forms) or Polynomial (fields on R^{2n}).
template <typename C>
class Form {
public:
    using Terms = std::map<BladeMask, C>;

    explicit Form(const Frame& frame) : frame_(frame) {}
    Form(const Frame& frame, BladeMask blade, C coefficient) : frame_(frame) {
        add_term(blade, std::move(coefficient));
    }

    static Form scalar(const Frame& frame, C value) { return Form(frame, 0, std::move(value)); }
    static Form generator(const Frame& frame, int g) {
        check_generator(frame, g);
        return Form(frame, BladeMask{1} << g, constant_coefficient<C>(frame, 1));
    }

    const Frame& frame() const noexcept { return frame_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    C coefficient(BladeMask blade) const {
        auto it = terms_.find(blade);
        return it == terms_.end() ? C{} : it->second;
    }

    /// Common degree of all blades; nullopt for mixed degree, 0 for the zero form.
    std::optional<int> degree() const {
        if (terms_.empty()) return 0;
        int d = blade_degree(terms_.begin()->first);
        for (const auto& [b, c] : terms_)
            if (blade_degree(b) != d) return std::nullopt;
        return d;
    }

    void add_term(BladeMask blade, const C& c) {
        if (blade >> frame_.dimension()) throw DomainError("blade outside frame");
        if (coefficient_is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(blade, normalized(c));
        if (!inserted) {
            it->second += c;
            if (coefficient_is_zero(it->second)) terms_.erase(it);
        }
    }

    Form& operator+=(const Form& o) {
        check_frame(o);
        for (const auto& [b, c] : o.terms_) add_term(b, c);
        return *this;
    }
    Form& operator-=(const Form& o) {
        check_frame(o);
        for (const auto& [b, c] : o.terms_) add_term(b, -c);
        return *this;
    }
    Form& operator*=(const Rational& s) {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [b, c] : terms_) c *= s;
        return *this;
    }
    Form operator-() const {
        Form r(frame_);
        for (const auto& [b, c] : terms_) r.terms_.emplace(b, -c);
        return r;
    }

    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    friend Form operator*(Form a, const Rational& s) { return a *= s; }
    friend Form operator*(const Rational& s, Form a) { return a *= s; }
    friend bool operator==(const Form& a, const Form& b) {
        return a.frame_ == b.frame_ && a.terms_ == b.terms_;
    }

    void check_frame(const Form& o) const {
        if (!(frame_ == o.frame_)) throw FrameMismatch("forms live on different frames");
    }

    static void check_generator(const Frame& frame, int g) {
        if (g < 0 || g >= frame.dimension())
            throw DomainError("generator index " + std::to_string(g) + " outside frame");
    }

private:
    Frame frame_;
    Terms terms_;
};

using ConstForm = Form<Rational>;
using PolyForm = Form<Polynomial>;

/// Pointwise product of a function with a form.
inline PolyForm operator*(const Polynomial& f, const PolyForm& a) {
    PolyForm r(a.frame());
    if (f.is_zero()) return r;
    for (const auto& [b, c] : a.terms()) r.add_term(b, f * c);
    return r;
}

template <typename C>
Form<C> wedge(const Form<C>& a, const Form<C>& b) {
    a.check_frame(b);
    Form<C> r(a.frame());
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            int s = wedge_sign(ma, mb);
            if (s == 0) continue;
            C c = ca * cb;
            if (s < 0) c = -c;
            r.add_term(ma | mb, c);
        }
    return r;
}

/// Interior product with the coordinate direction of generator g.
template <typename C>
Form<C> interior(int g, const Form<C>& a) {
    Form<C>::check_generator(a.frame(), g);
    Form<C> r(a.frame());
    const BladeMask bit = BladeMask{1} << g;
    for (const auto& [m, c] : a.terms()) {
        int s = interior_sign(g, m);
        if (s == 0) continue;
        r.add_term(m & ~bit, s > 0 ? c : -c);
    }
    return r;
}

/// Interior product with X = sum_g components[g] e_g.
template <typename C>
Form<C> interior(std::span<const C> components, const Form<C>& a) {
    if (static_cast<int>(components.size()) != a.frame().dimension())
        throw FrameMismatch("vector has " + std::to_string(components.size()) +
                            " components, frame has " + std::to_string(a.frame().dimension()));
    Form<C> r(a.frame());
    for (int g = 0; g < a.frame().dimension(); ++g) {
        if (coefficient_is_zero(components[g])) continue;
        const BladeMask bit = BladeMask{1} << g;
        for (const auto& [m, c] : a.terms()) {
            int s = interior_sign(g, m);
            if (s == 0) continue;
            C t = components[g] * c;
            r.add_term(m & ~bit, s > 0 ? t : -t);
        }
    }
    return r;
}

/// omega = sum_i dp_i ^ dq^i.
template <typename C = Rational>
Form<C> omega(const Frame& frame) {
    Form<C> w(frame);
    for (int i = 0; i < frame.n(); ++i) {
        BladeMask m = (BladeMask{1} << frame.q(i)) | (BladeMask{1} << frame.p(i));
        w.add_term(m, constant_coefficient<C>(frame, -1));  // dp^dq = -(dq^dp) in canonical order
    }
    return w;
}

template <typename C>
Form<C> power(const Form<C>& a, int k) {
    if (k < 0) throw DomainError("negative wedge power");
    Form<C> r = Form<C>::scalar(a.frame(), constant_coefficient<C>(a.frame(), 1));
    for (int i = 0; i < k; ++i) r = wedge(r, a);
    return r;
}

template <typename C = Rational>
Form<C> omega_power(const Frame& frame, int k) {
    return power(omega<C>(frame), k);
}

/// tau = omega^n / n!.
template <typename C = Rational>
Form<C> volume_form(const Frame& frame) {
    Form<C> w = omega_power<C>(frame, frame.n());
    mpz_class fact = 1;
    for (int i = 2; i <= frame.n(); ++i) fact *= i;
    return w * Rational(1, fact);
}

/// e(a) = a ^ omega.
template <typename C>
Form<C> op_e(const Form<C>& a) {
    return wedge(a, omega<C>(a.frame()));
}

/// f = sum_i i_{d/dq^i} i_{d/dp_i}.
template <typename C>
Form<C> op_f(const Form<C>& a) {
    Form<C> r(a.frame());
    for (int i = 0; i < a.frame().n(); ++i)
        r += interior(a.frame().q(i), interior(a.frame().p(i), a));
    return r;
}

/// h(a) = (deg a - n) a; a must be homogeneous.
template <typename C>
Form<C> op_h(const Form<C>& a) {
    auto d = a.degree();
    if (!d) throw DomainError("op_h requires a homogeneous form");
    return a * Rational(*d - a.frame().n());
}

/// i(Pi) = sum_{a<b} Pi^{ab} i_a i_b for an antisymmetric bivector matrix Pi.
/// With Pi = W^{-1} (W the matrix of omega) this reduces to op_f in Darboux frames.
template <typename C>
Form<C> contract_bivector(const RationalMatrix& pi, const Form<C>& a) {
    const int dim = a.frame().dimension();
    if (static_cast<int>(pi.rows()) != dim || static_cast<int>(pi.cols()) != dim)
        throw FrameMismatch("bivector size does not match frame");
    Form<C> r(a.frame());
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            if (pi(i, j) == 0) continue;
            r += interior(i, interior(j, a)) * pi(i, j);
        }
    return r;
}

/// Antisymmetric matrix W with omega = sum_{a<b} W_ab e^a ^ e^b.
RationalMatrix two_form_matrix(const ConstForm& w);
/// Pi = W^{-1}; throws DomainError when w is not a nondegenerate 2-form.
RationalMatrix poisson_bivector(const ConstForm& w);

/// Canonical blade basis of degree m: masks in increasing numeric order.
std::vector<BladeMask> blade_basis(const Frame& frame, int m);

/// Coefficients of a constant form in the given basis; throws on blades outside it.
std::vector<Rational> to_coordinates(const ConstForm& a, std::span<const BladeMask> basis);
ConstForm from_coordinates(const Frame& frame, std::span<const BladeMask> basis,
                           std::span<const Rational> coords);

/// Promotes a constant form to polynomial coefficients in the frame coordinates.
PolyForm to_poly_form(const ConstForm& a);

std::string blade_name(const Frame& frame, BladeMask blade);

/// Canonical text: `mask:coefficient` terms sorted by mask, space separated;
/// `0` for the zero form.
std::string to_canonical(const ConstForm& a);
std::string to_canonical(const PolyForm& a);
std::string pretty(const ConstForm& a);
std::string pretty(const PolyForm& a);

// --- sl(2) and injectivity certificates ---------------------------------

struct Sl2Failure {
    std::string identity;
    BladeMask blade = 0;
};

struct Sl2Report {
    int n = 0;
    int k = 0;
    std::size_t blades_checked = 0;
    std::optional<Sl2Failure> failure;
    bool passed() const noexcept { return !failure; }
};

/// Checks [h,e]=2e, [h,f]=-2f, [e,f]=h, [e^k,f]=k e^{k-1}(h+k-1) and
/// [e,f^k]=k f^{k-1}(h-k+1) on every basis blade. Requires 1 <= k <= n <= 4.
Sl2Report commutator_check(int n, int k);

/// Rank of alpha -> alpha ^ omega^k on 2-forms; requires 0 <= k <= n-2.
std::size_t iota_rank(int n, int k);

/// Rank of X -> i_X(omega^k) on constant vectors; requires 1 <= k <= n.
std::size_t contraction_rank(int n, int k);

} // namespace liouville
