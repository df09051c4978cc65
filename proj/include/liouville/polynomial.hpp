#pragma once

#include "liouville/rational.hpp"

#include <array>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace liouville {

inline constexpr int kMaxVariables = 16;

/// Exponent multi-index. Unused trailing slots stay zero so that the default
/// lexicographic ordering is the canonical monomial order.
struct Monomial {
    std::array<std::uint8_t, kMaxVariables> exponents{};

    int degree() const noexcept {
        int d = 0;
        for (auto e : exponents) d += e;
        return d;
    }
    auto operator<=>(const Monomial&) const = default;
};

/// Sparse multivariate polynomial with exact rational coefficients in a fixed
/// number of variables. No zero coefficients are ever stored.
class Polynomial {
public:
    using Terms = std::map<Monomial, Rational>;

    Polynomial() = default;
    explicit Polynomial(int nvars);
    Polynomial(int nvars, const Rational& constant);

    /// The single variable x_index.
    static Polynomial variable(int nvars, int index);
    /// c * prod x_i^{e_i}; exponents.size() must equal nvars.
    static Polynomial monomial(int nvars, const Rational& c,
                               std::span<const int> exponents);
    static Polynomial monomial(int nvars, const Rational& c,
                               std::initializer_list<int> exponents) {
        std::vector<int> e(exponents);
        return monomial(nvars, c, e);
    }

    int nvars() const noexcept { return nvars_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    /// -1 for the zero polynomial.
    int total_degree() const noexcept;
    Rational coefficient(const Monomial& m) const;
    Rational constant_term() const { return coefficient(Monomial{}); }

    void add_term(const Monomial& m, const Rational& c);

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Rational& c);
    Polynomial operator-() const;

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    /// Formal partial derivative in variable `index`.
    Polynomial derivative(int index) const;

    /// Exact evaluation at a rational point.
    Rational evaluate(std::span<const Rational> x) const;
    /// Floating evaluation; accumulates in long double.
    long double evaluate(std::span<const long double> x) const;

    /// Canonical monomial list `[[c, e1, ..., en], ...]` in lexicographic order.
    std::string to_canonical() const;
    /// Human-readable form using the supplied variable names.
    std::string pretty(std::span<const std::string> names) const;

private:
    void check_compatible(const Polynomial& o) const;

    int nvars_ = 0;
    Terms terms_;
};

} // namespace liouville
