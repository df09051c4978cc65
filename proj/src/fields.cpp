#include "liouville/fields.hpp"

#include <stdexcept>

namespace liouville {

void check_degree_cap(int degree, const char* what) {
    if (degree > kMaxInputDegree)
        throw DomainError(std::string(what) + " has total degree " + std::to_string(degree) +
                          ", above the supported maximum " + std::to_string(kMaxInputDegree));
}

PolyVectorField::PolyVectorField(const Frame& frame)
    : frame_(frame), components_(frame.dimension(), Polynomial(frame.dimension())) {}

PolyVectorField::PolyVectorField(const Frame& frame, std::vector<Polynomial> components)
    : frame_(frame), components_(std::move(components)) {
    if (static_cast<int>(components_.size()) != frame.dimension())
        throw FrameMismatch("vector field needs " + std::to_string(frame.dimension()) +
                            " components, got " + std::to_string(components_.size()));
    for (auto& c : components_) {
        if (c.nvars() == 0) c += Polynomial(frame.dimension());
        if (c.nvars() != frame.dimension())
            throw FrameMismatch("component polynomial has the wrong variable count");
    }
}

bool PolyVectorField::is_zero() const {
    for (const auto& c : components_)
        if (!c.is_zero()) return false;
    return true;
}

int PolyVectorField::total_degree() const {
    int d = -1;
    for (const auto& c : components_) d = std::max(d, c.total_degree());
    return d;
}

PolyVectorField& PolyVectorField::operator+=(const PolyVectorField& o) {
    if (!(frame_ == o.frame_)) throw FrameMismatch("vector fields on different frames");
    for (std::size_t g = 0; g < components_.size(); ++g) components_[g] += o.components_[g];
    return *this;
}

PolyVectorField& PolyVectorField::operator-=(const PolyVectorField& o) {
    if (!(frame_ == o.frame_)) throw FrameMismatch("vector fields on different frames");
    for (std::size_t g = 0; g < components_.size(); ++g) components_[g] -= o.components_[g];
    return *this;
}

PolyVectorField operator*(const Rational& s, PolyVectorField a) {
    for (auto& c : a.components_) c *= s;
    return a;
}

Polynomial coordinate(const Frame& frame, int g) {
    return Polynomial::variable(frame.dimension(), g);
}

PolyVectorField hamiltonian_field(const Frame& frame, const Polynomial& h) {
    std::vector<Polynomial> comps(frame.dimension());
    for (int i = 0; i < frame.n(); ++i) {
        comps[frame.q(i)] = h.derivative(frame.p(i));
        comps[frame.p(i)] = -h.derivative(frame.q(i));
    }
    return PolyVectorField(frame, std::move(comps));
}

PolyVectorField euler_field(const Frame& frame) {
    std::vector<Polynomial> comps;
    for (int g = 0; g < frame.dimension(); ++g) comps.push_back(coordinate(frame, g));
    return PolyVectorField(frame, std::move(comps));
}

PolyForm interior(const PolyVectorField& x, const PolyForm& a) {
    return interior(std::span<const Polynomial>(x.components()), a);
}

PolyForm exterior_derivative(const PolyForm& a) {
    PolyForm out(a.frame());
    const int dim = a.frame().dimension();
    for (const auto& [blade, c] : a.terms()) {
        for (int g = 0; g < dim; ++g) {
            const BladeMask bit = BladeMask{1} << g;
            int s = wedge_sign(bit, blade);
            if (s == 0) continue;
            Polynomial partial = c.derivative(g);
            if (partial.is_zero()) continue;
            out.add_term(bit | blade, s > 0 ? partial : -partial);
        }
    }
    return out;
}

PolyForm differential(const Frame& frame, const Polynomial& f) {
    return exterior_derivative(PolyForm::scalar(frame, f));
}

PolyForm el_form(const PolyVectorField& x, int k) {
    if (k < 1 || k > x.frame().n())
        throw DomainError("el_form requires 1 <= k <= n, got k=" + std::to_string(k));
    check_degree_cap(x.total_degree(), "vector field");
    return -interior(x, omega_power<Polynomial>(x.frame(), k));
}

PolyForm lie_derivative(const PolyVectorField& x, const PolyForm& a) {
    return interior(x, exterior_derivative(a)) + exterior_derivative(interior(x, a));
}

PolyForm poincare_potential(const PolyForm& a) {
    if (a.is_zero()) return a;
    auto deg = a.degree();
    if (!deg || *deg < 1) throw DomainError("poincare_potential needs a homogeneous form of degree >= 1");
    if (!exterior_derivative(a).is_zero()) throw NotClosed("form is not closed");
    const Frame& frame = a.frame();
    const int m = *deg;
    PolyForm beta(frame);
    for (const auto& [blade, c] : a.terms()) {
        // Coefficients are evaluated at t x, the (m-1)-form part pulls back t^{m-1},
        // so a monomial of degree r integrates to 1/(m + r).
        Polynomial scaled(frame.dimension());
        for (const auto& [mono, coef] : c.terms()) scaled.add_term(mono, coef / Rational(m + mono.degree()));
        for (BladeMask rest = blade; rest; rest &= rest - 1) {
            int g = std::countr_zero(rest);
            int s = interior_sign(g, blade);
            Polynomial term = coordinate(frame, g) * scaled;
            beta.add_term(blade & ~(BladeMask{1} << g), s > 0 ? term : -term);
        }
    }
    return beta;
}

Classification classify(const PolyVectorField& x, int k) {
    const int n = x.frame().n();
    if (k < 1 || k > n) throw DomainError("classify requires 1 <= k <= n, got k=" + std::to_string(k));
    check_degree_cap(x.total_degree(), "vector field");
    Classification out{k, false, false, false, el_form(x, k), std::nullopt};
    out.symplectic_like = exterior_derivative(out.el_form).is_zero();
    out.hamiltonian_like = out.symplectic_like;
    if (out.symplectic_like) out.potential = poincare_potential(out.el_form);
    out.preserves_omega = lie_derivative(x, omega<Polynomial>(x.frame())).is_zero();
    if (k < n && out.symplectic_like != out.preserves_omega)
        throw std::logic_error("closedness of E_X disagrees with L_X omega = 0 for k < n");
    return out;
}

Polynomial divergence(const PolyVectorField& x) {
    Polynomial div(x.frame().dimension());
    for (int g = 0; g < x.frame().dimension(); ++g) div += x.components()[g].derivative(g);
    return div;
}

TwoFormData::TwoFormData(const Frame& f) : frame(f) {
    const auto n = static_cast<std::size_t>(f.n());
    const std::vector<Polynomial> row(n, Polynomial(f.dimension()));
    q.assign(n, row);
    a.assign(n, row);
    p.assign(n, row);
}

void TwoFormData::validate() const {
    const auto n = static_cast<std::size_t>(frame.n());
    for (const auto* block : {&q, &a, &p}) {
        if (block->size() != n) throw DomainError("two-form block has wrong row count");
        for (const auto& row : *block)
            if (row.size() != n) throw DomainError("two-form block has wrong column count");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            if (!(q[i][j] + q[j][i]).is_zero())
                throw DomainError("Q is not antisymmetric at (" + std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + ")");
            if (!(p[i][j] + p[j][i]).is_zero())
                throw DomainError("P is not antisymmetric at (" + std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + ")");
        }
}

int TwoFormData::total_degree() const {
    int d = -1;
    for (const auto* block : {&q, &a, &p})
        for (const auto& row : *block)
            for (const auto& c : row) d = std::max(d, c.total_degree());
    return d;
}

PolyForm assemble(const TwoFormData& alpha) {
    alpha.validate();
    const Frame& f = alpha.frame;
    auto gen = [&](int g) { return PolyForm::generator(f, g); };
    const Rational half(1, 2);
    PolyForm out(f);
    for (int i = 0; i < f.n(); ++i)
        for (int j = 0; j < f.n(); ++j) {
            out += alpha.q[i][j] * wedge(gen(f.q(i)), gen(f.q(j))) * half;
            out += alpha.a[i][j] * wedge(gen(f.p(i)), gen(f.q(j)));
            out += alpha.p[i][j] * wedge(gen(f.p(i)), gen(f.p(j))) * half;
        }
    return out;
}

TwoFormData decompose(const PolyForm& alpha) {
    if (!alpha.is_zero() && alpha.degree() != 2) throw DomainError("decompose expects a 2-form");
    const Frame& f = alpha.frame();
    TwoFormData out(f);
    for (const auto& [blade, c] : alpha.terms()) {
        int lo = std::countr_zero(blade);
        int hi = std::countr_zero(blade & (blade - 1));
        const int n = f.n();
        if (hi < n) {  // dq^lo ^ dq^hi
            out.q[lo][hi] += c;
            out.q[hi][lo] -= c;
        } else if (lo >= n) {  // dp_lo ^ dp_hi
            out.p[lo - n][hi - n] += c;
            out.p[hi - n][lo - n] -= c;
        } else {  // dq^lo ^ dp_i = -dp_i ^ dq^lo
            out.a[hi - n][lo] -= c;
        }
    }
    return out;
}

PolyForm volume_identity_defect(const TwoFormData& alpha, const PolyVectorField& x) {
    const Frame& f = alpha.frame;
    const int n = f.n();
    PolyForm lhs = interior(x, omega_power<Polynomial>(f, n));
    PolyForm rhs = wedge(exterior_derivative(assemble(alpha)), omega_power<Polynomial>(f, n - 2));
    return lhs + rhs * Rational(n * (n - 1));
}

PolyVectorField vector_from_two_form(const TwoFormData& alpha) {
    const Frame& f = alpha.frame;
    const int n = f.n();
    if (n < 2) throw DomainError("vector_from_two_form requires n >= 2");
    alpha.validate();
    check_degree_cap(alpha.total_degree(), "two-form");

    Polynomial trace(f.dimension());
    for (int j = 0; j < n; ++j) trace += alpha.a[j][j];

    std::vector<Polynomial> comps(f.dimension(), Polynomial(f.dimension()));
    for (int i = 0; i < n; ++i) {
        Polynomial& qdot = comps[f.q(i)];
        Polynomial& pdot = comps[f.p(i)];
        qdot += trace.derivative(f.p(i));
        pdot -= trace.derivative(f.q(i));
        for (int j = 0; j < n; ++j) {
            qdot += alpha.p[i][j].derivative(f.q(j));
            qdot -= alpha.a[i][j].derivative(f.p(j));
            pdot += alpha.q[i][j].derivative(f.p(j));
            pdot += alpha.a[j][i].derivative(f.q(j));
        }
    }
    PolyVectorField x(f, std::move(comps));
    if (!volume_identity_defect(alpha, x).is_zero())
        throw std::logic_error("i_X(omega^n) + n(n-1) d alpha ^ omega^(n-2) != 0");
    return x;
}

bool LinearSystemSpec::is_hamiltonian() const {
    for (const auto& row : a)
        for (const auto& v : row)
            if (v != 0) return false;
    return true;
}

LinearSystemSpec build_linear_system(const std::vector<std::vector<Rational>>& k) {
    const std::size_t n = k.size();
    if (n == 0) throw DomainError("linear system needs a non-empty matrix");
    for (const auto& row : k)
        if (row.size() != n) throw DomainError("linear system matrix must be square");
    const Frame frame(static_cast<int>(n));
    std::vector<std::vector<Rational>> sym(n, std::vector<Rational>(n));
    std::vector<std::vector<Rational>> anti(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            sym[i][j] = (k[i][j] + k[j][i]) / 2;
            anti[i][j] = (k[i][j] - k[j][i]) / 2;
        }
    const Rational half(1, 2);
    Polynomial h(frame.dimension());
    for (int i = 0; i < frame.n(); ++i) {
        Polynomial pi = coordinate(frame, frame.p(i));
        h += pi * pi * half;
        for (int j = 0; j < frame.n(); ++j)
            h += coordinate(frame, frame.q(i)) * coordinate(frame, frame.q(j)) * (sym[i][j] * half);
    }
    std::vector<Polynomial> force(frame.dimension(), Polynomial(frame.dimension()));
    for (int i = 0; i < frame.n(); ++i)
        for (int j = 0; j < frame.n(); ++j)
            force[frame.p(i)] -= coordinate(frame, frame.q(j)) * anti[i][j];
    PolyVectorField x = hamiltonian_field(frame, h) + PolyVectorField(frame, std::move(force));
    return LinearSystemSpec{k, std::move(sym), std::move(anti), std::move(h), std::move(x)};
}

LinearSystemSpec coupled_oscillators(const Rational& m1, const Rational& m2, const Rational& k) {
    if (m1 == 0 || m2 == 0) throw DomainError("masses must be nonzero");
    return build_linear_system({{-k / m1, k / m1}, {k / m2, -k / m2}});
}

TwoFormData linear_system_two_form(const LinearSystemSpec& sys) {
    const Frame& frame = sys.field.frame();
    const int n = frame.n();
    if (n < 2) throw DomainError("the two-form model requires n >= 2");
    TwoFormData alpha(frame);
    Polynomial pq(frame.dimension());
    for (int i = 0; i < n; ++i) pq += coordinate(frame, frame.p(i)) * coordinate(frame, frame.q(i));
    for (int i = 0; i < n; ++i) {
        alpha.a[i][i] = sys.hamiltonian * Rational(1, n - 1);
        for (int j = 0; j < n; ++j) alpha.q[i][j] = pq * (-sys.a[i][j]);
    }
    return alpha;
}

} // namespace liouville
