#include "liouville/polynomial.hpp"

#include "liouville/errors.hpp"

#include <sstream>
#include <stdexcept>

namespace liouville {

Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto first = s.find_first_not_of(" \t");
    auto last = s.find_last_not_of(" \t");
    if (first == std::string::npos) throw std::invalid_argument("empty rational");
    s = s.substr(first, last - first + 1);
    if (!s.empty() && s.front() == '+') s.erase(0, 1);
    auto valid = [](const std::string& part) {
        if (part.empty()) return false;
        std::size_t i = (part[0] == '-') ? 1 : 0;
        if (i == part.size()) return false;
        for (; i < part.size(); ++i)
            if (part[i] < '0' || part[i] > '9') return false;
        return true;
    };
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid(num) || !valid(den) || den[0] == '-')
        throw std::invalid_argument("malformed rational '" + s + "'");
    mpz_class n(num, 10), d(den, 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

Polynomial::Polynomial(int nvars) : nvars_(nvars) {
    if (nvars < 0 || nvars > kMaxVariables)
        throw DomainError("polynomial variable count out of range: " + std::to_string(nvars));
}

Polynomial::Polynomial(int nvars, const Rational& constant) : Polynomial(nvars) {
    add_term(Monomial{}, constant);
}

Polynomial Polynomial::variable(int nvars, int index) {
    if (index < 0 || index >= nvars) throw DomainError("variable index out of range");
    Polynomial p(nvars);
    Monomial m;
    m.exponents[index] = 1;
    p.add_term(m, Rational(1));
    return p;
}

Polynomial Polynomial::monomial(int nvars, const Rational& c, std::span<const int> exponents) {
    if (static_cast<int>(exponents.size()) != nvars)
        throw DomainError("monomial has " + std::to_string(exponents.size()) +
                          " exponents, expected " + std::to_string(nvars));
    Polynomial p(nvars);
    Monomial m;
    for (int i = 0; i < nvars; ++i) {
        if (exponents[i] < 0 || exponents[i] > 255) throw DomainError("exponent out of range");
        m.exponents[i] = static_cast<std::uint8_t>(exponents[i]);
    }
    p.add_term(m, c);
    return p;
}

bool Polynomial::is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Monomial{});
}

int Polynomial::total_degree() const noexcept {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
}

Rational Polynomial::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    // mpq_class(num, den) is not reduced on construction.
    Rational v = c;
    v.canonicalize();
    auto [it, inserted] = terms_.try_emplace(m, std::move(v));
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

// A zero-variable polynomial is a bare constant and adopts the other operand's
// variable count.
void Polynomial::check_compatible(const Polynomial& o) const {
    if (nvars_ != o.nvars_ && nvars_ != 0 && o.nvars_ != 0)
        throw FrameMismatch("polynomials over different variable sets");
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    check_compatible(o);
    if (nvars_ == 0) nvars_ = o.nvars_;
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    check_compatible(o);
    if (nvars_ == 0) nvars_ = o.nvars_;
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

Polynomial Polynomial::operator-() const {
    Polynomial r = *this;
    for (auto& [m, v] : r.terms_) v = -v;
    return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_compatible(b);
    Polynomial r(std::max(a.nvars_, b.nvars_));
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            Monomial m;
            for (int i = 0; i < kMaxVariables; ++i) {
                int e = ma.exponents[i] + mb.exponents[i];
                if (e > 255) throw DomainError("exponent overflow in polynomial product");
                m.exponents[i] = static_cast<std::uint8_t>(e);
            }
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

Polynomial Polynomial::derivative(int index) const {
    if (index < 0 || index >= std::max(nvars_, 1))
        throw DomainError("derivative index out of range");
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) {
        int e = m.exponents[index];
        if (e == 0) continue;
        Monomial d = m;
        d.exponents[index] = static_cast<std::uint8_t>(e - 1);
        r.add_term(d, c * e);
    }
    return r;
}

Rational Polynomial::evaluate(std::span<const Rational> x) const {
    if (static_cast<int>(x.size()) < nvars_) throw DomainError("too few coordinates");
    Rational sum(0);
    for (const auto& [m, c] : terms_) {
        Rational t = c;
        for (int i = 0; i < nvars_; ++i)
            for (int e = 0; e < m.exponents[i]; ++e) t *= x[i];
        sum += t;
    }
    return sum;
}

long double Polynomial::evaluate(std::span<const long double> x) const {
    if (static_cast<int>(x.size()) < nvars_) throw DomainError("too few coordinates");
    long double sum = 0;
    for (const auto& [m, c] : terms_) {
        long double t = to_long_double(c);
        for (int i = 0; i < nvars_; ++i)
            for (int e = 0; e < m.exponents[i]; ++e) t *= x[i];
        sum += t;
    }
    return sum;
}

std::string Polynomial::to_canonical() const {
    std::ostringstream out;
    out << '[';
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) out << ", ";
        first = false;
        out << '[' << to_short_string(c);
        for (int i = 0; i < nvars_; ++i) out << ", " << int(m.exponents[i]);
        out << ']';
    }
    out << ']';
    return out.str();
}

std::string Polynomial::pretty(std::span<const std::string> names) const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rational mag = abs(c);
        bool neg = c < 0;
        if (first) {
            if (neg) out << '-';
        } else {
            out << (neg ? " - " : " + ");
        }
        first = false;
        bool unit = (mag == 1) && m.degree() > 0;
        if (!unit) out << to_short_string(mag);
        bool needs_star = !unit;
        for (int i = 0; i < nvars_; ++i) {
            if (m.exponents[i] == 0) continue;
            if (needs_star) out << '*';
            needs_star = true;
            out << (i < static_cast<int>(names.size()) ? names[i] : "x" + std::to_string(i + 1));
            if (m.exponents[i] > 1) out << '^' << int(m.exponents[i]);
        }
    }
    return out.str();
}

} // namespace liouville
