#include "liouville/exterior.hpp"

#include <sstream>

namespace liouville {

std::vector<std::string> Frame::coordinate_names() const {
    std::vector<std::string> names;
    for (int g = 0; g < dimension(); ++g) {
        if (labels_ == Labels::theta)
            names.push_back("x" + std::to_string(g + 1));
        else if (g < n_)
            names.push_back("q" + std::to_string(g + 1));
        else
            names.push_back("p" + std::to_string(g - n_ + 1));
    }
    return names;
}

std::string Frame::generator_name(int g) const {
    if (labels_ == Labels::theta) return "th" + std::to_string(g + 1);
    return "d" + coordinate_names()[g];
}

RationalMatrix two_form_matrix(const ConstForm& w) {
    auto d = w.degree();
    if (!d || (*d != 2 && !w.is_zero())) throw DomainError("expected a 2-form");
    const int dim = w.frame().dimension();
    RationalMatrix m(dim, dim);
    for (const auto& [blade, c] : w.terms()) {
        int a = std::countr_zero(blade);
        int b = std::countr_zero(blade & (blade - 1));
        m(a, b) = c;
        m(b, a) = -c;
    }
    return m;
}

RationalMatrix poisson_bivector(const ConstForm& w) {
    RationalMatrix m = two_form_matrix(w);
    const std::size_t dim = m.rows();
    RationalMatrix aug(dim, 2 * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) aug(i, j) = m(i, j);
        aug(i, dim + i) = 1;
    }
    auto ech = row_reduce(std::move(aug));
    if (ech.pivots.size() < dim || ech.pivots[dim - 1] != dim - 1)
        throw DomainError("2-form is degenerate");
    RationalMatrix inv(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) inv(i, j) = ech.reduced(i, dim + j);
    return inv;
}

std::vector<BladeMask> blade_basis(const Frame& frame, int m) {
    std::vector<BladeMask> basis;
    const BladeMask limit = BladeMask{1} << frame.dimension();
    for (BladeMask b = 0; b < limit; ++b)
        if (blade_degree(b) == m) basis.push_back(b);
    return basis;
}

std::vector<Rational> to_coordinates(const ConstForm& a, std::span<const BladeMask> basis) {
    std::vector<Rational> v(basis.size());
    std::size_t found = 0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        auto it = a.terms().find(basis[i]);
        if (it != a.terms().end()) {
            v[i] = it->second;
            ++found;
        }
    }
    if (found != a.terms().size()) throw DomainError("form has blades outside the basis");
    return v;
}

ConstForm from_coordinates(const Frame& frame, std::span<const BladeMask> basis,
                           std::span<const Rational> coords) {
    if (basis.size() != coords.size()) throw DomainError("coordinate length mismatch");
    ConstForm a(frame);
    for (std::size_t i = 0; i < basis.size(); ++i) a.add_term(basis[i], coords[i]);
    return a;
}

PolyForm to_poly_form(const ConstForm& a) {
    PolyForm r(a.frame());
    for (const auto& [b, c] : a.terms()) r.add_term(b, Polynomial(a.frame().dimension(), c));
    return r;
}

std::string blade_name(const Frame& frame, BladeMask blade) {
    if (blade == 0) return "1";
    std::string out;
    for (BladeMask rest = blade; rest; rest &= rest - 1) {
        if (!out.empty()) out += "^";
        out += frame.generator_name(std::countr_zero(rest));
    }
    return out;
}

std::string to_canonical(const ConstForm& a) {
    if (a.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [b, c] : a.terms()) {
        if (!first) out << ' ';
        first = false;
        out << b << ':' << to_short_string(c);
    }
    return out.str();
}

std::string to_canonical(const PolyForm& a) {
    if (a.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [b, c] : a.terms()) {
        if (!first) out << ' ';
        first = false;
        out << b << ':' << c.to_canonical();
    }
    return out.str();
}

std::string pretty(const ConstForm& a) {
    if (a.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [b, c] : a.terms()) {
        out << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
        first = false;
        Rational mag = abs(c);
        if (mag != 1 || b == 0) out << to_short_string(mag) << (b == 0 ? "" : " ");
        if (b != 0) out << blade_name(a.frame(), b);
    }
    return out.str();
}

std::string pretty(const PolyForm& a) {
    if (a.is_zero()) return "0";
    auto names = a.frame().coordinate_names();
    std::ostringstream out;
    bool first = true;
    for (const auto& [b, c] : a.terms()) {
        if (!first) out << " + ";
        first = false;
        out << '(' << c.pretty(names) << ')';
        if (b != 0) out << ' ' << blade_name(a.frame(), b);
    }
    return out.str();
}

Sl2Report commutator_check(int n, int k) {
    if (n < 1 || n > 4) throw DomainError("commutator_check requires 1 <= n <= 4");
    if (k < 1 || k > n) throw DomainError("commutator_check requires 1 <= k <= n");
    const Frame frame(n);
    auto e = [](const ConstForm& a) { return op_e(a); };
    auto f = [](const ConstForm& a) { return op_f(a); };
    auto h = [](const ConstForm& a) { return op_h(a); };
    auto repeat = [](auto op, ConstForm a, int times) {
        for (int i = 0; i < times; ++i) a = op(a);
        return a;
    };

    Sl2Report report;
    report.n = n;
    report.k = k;
    const BladeMask limit = BladeMask{1} << frame.dimension();
    for (BladeMask mask = 0; mask < limit; ++mask) {
        const ConstForm b(frame, mask, Rational(1));
        ++report.blades_checked;
        auto fail = [&](const char* identity) {
            report.failure = Sl2Failure{identity, mask};
        };
        if (!(h(e(b)) - e(h(b)) == e(b) * Rational(2))) { fail("[h,e]=2e"); break; }
        if (!(h(f(b)) - f(h(b)) == f(b) * Rational(-2))) { fail("[h,f]=-2f"); break; }
        if (!(e(f(b)) - f(e(b)) == h(b))) { fail("[e,f]=h"); break; }

        const ConstForm ek_f = repeat(e, f(b), k) - f(repeat(e, b, k));
        const ConstForm ek_rhs = repeat(e, h(b) + b * Rational(k - 1), k - 1) * Rational(k);
        if (!(ek_f == ek_rhs)) { fail("[e^k,f]=k e^(k-1)(h+k-1)"); break; }

        const ConstForm e_fk = e(repeat(f, b, k)) - repeat(f, e(b), k);
        const ConstForm fk_rhs = repeat(f, h(b) - b * Rational(k - 1), k - 1) * Rational(k);
        if (!(e_fk == fk_rhs)) { fail("[e,f^k]=k f^(k-1)(h-k+1)"); break; }
    }
    return report;
}

std::size_t iota_rank(int n, int k) {
    if (k < 0 || k > n - 2)
        throw DomainError("iota_rank requires 0 <= k <= n-2, got n=" + std::to_string(n) +
                          " k=" + std::to_string(k));
    const Frame frame(n);
    const ConstForm wk = omega_power(frame, k);
    const auto source = blade_basis(frame, 2);
    const auto target = blade_basis(frame, 2 + 2 * k);
    std::vector<std::vector<Rational>> columns;
    for (BladeMask b : source)
        columns.push_back(to_coordinates(wedge(ConstForm(frame, b, Rational(1)), wk), target));
    return rank(RationalMatrix::from_columns(target.size(), columns));
}

std::size_t contraction_rank(int n, int k) {
    if (k < 1 || k > n) throw DomainError("contraction_rank requires 1 <= k <= n");
    const Frame frame(n);
    const ConstForm wk = omega_power(frame, k);
    const auto target = blade_basis(frame, 2 * k - 1);
    std::vector<std::vector<Rational>> columns;
    for (int g = 0; g < frame.dimension(); ++g)
        columns.push_back(to_coordinates(interior(g, wk), target));
    return rank(RationalMatrix::from_columns(target.size(), columns));
}

} // namespace liouville
