#pragma once

// Symbolic calculus for polynomial vector fields on R^{2n} in Darboux
// coordinates (q^1..q^n, p_1..p_n).

#include "liouville/exterior.hpp"
#include "liouville/polynomial.hpp"

#include <optional>
#include <vector>

namespace liouville {

/// Inputs above this total degree are rejected.
inline constexpr int kMaxInputDegree = 12;

/// X = Q^i d/dq^i + P_i d/dp_i; components are stored in generator order.
class PolyVectorField {
public:
    explicit PolyVectorField(const Frame& frame);
    PolyVectorField(const Frame& frame, std::vector<Polynomial> components);

    const Frame& frame() const noexcept { return frame_; }
    const std::vector<Polynomial>& components() const noexcept { return components_; }
    const Polynomial& q_component(int i) const { return components_.at(frame_.q(i)); }
    const Polynomial& p_component(int i) const { return components_.at(frame_.p(i)); }
    bool is_zero() const;
    int total_degree() const;

    PolyVectorField& operator+=(const PolyVectorField& o);
    PolyVectorField& operator-=(const PolyVectorField& o);
    friend PolyVectorField operator+(PolyVectorField a, const PolyVectorField& b) { return a += b; }
    friend PolyVectorField operator-(PolyVectorField a, const PolyVectorField& b) { return a -= b; }
    friend PolyVectorField operator*(const Rational& s, PolyVectorField a);
    friend bool operator==(const PolyVectorField& a, const PolyVectorField& b) {
        return a.frame_ == b.frame_ && a.components_ == b.components_;
    }

private:
    Frame frame_;
    std::vector<Polynomial> components_;
};

/// Coordinate polynomial x_g on the frame.
Polynomial coordinate(const Frame& frame, int g);

/// Hamiltonian field of H: qdot = dH/dp, pdot = -dH/dq, so that -i_X omega = dH.
PolyVectorField hamiltonian_field(const Frame& frame, const Polynomial& hamiltonian);

/// Radial (Euler) field x^g d/dx^g.
PolyVectorField euler_field(const Frame& frame);

PolyForm interior(const PolyVectorField& x, const PolyForm& a);

/// Formal exterior derivative on polynomial coefficients.
PolyForm exterior_derivative(const PolyForm& a);

/// d of a function, as a 1-form.
PolyForm differential(const Frame& frame, const Polynomial& f);

/// E_X^{(2k-1)} = -i_X(omega^k); 1 <= k <= n.
PolyForm el_form(const PolyVectorField& x, int k);

/// Cartan formula L_X = i_X d + d i_X.
PolyForm lie_derivative(const PolyVectorField& x, const PolyForm& a);

/// beta with d beta = a for a closed form of degree m >= 1, via the radial
/// homotopy int_0^1 t^{m-1} (i_E a)(t x) dt. Throws NotClosed otherwise.
PolyForm poincare_potential(const PolyForm& a);

struct Classification {
    int k = 0;
    bool symplectic_like = false;   // d E_X^{(2k-1)} = 0
    bool hamiltonian_like = false;  // E_X^{(2k-1)} exact (equal to the above on R^{2n})
    bool preserves_omega = false;   // L_X omega = 0
    PolyForm el_form;
    std::optional<PolyForm> potential;
};

/// Classifies X as (2k-1)-symplectic(-like) / Hamiltonian(-like). For k < n the
/// result is cross-checked against L_X omega = 0 and a mismatch throws std::logic_error.
Classification classify(const PolyVectorField& x, int k);

/// Divergence sum_g dX^g/dx^g.
Polynomial divergence(const PolyVectorField& x);

/// alpha = 1/2 Q_ij dq^i^dq^j + A^i_j dp_i^dq^j + 1/2 P^ij dp_i^dp_j, with Q and P
/// antisymmetric. Matrices are n x n, indexed [i][j].
struct TwoFormData {
    Frame frame;
    std::vector<std::vector<Polynomial>> q;  // Q_ij
    std::vector<std::vector<Polynomial>> a;  // A^i_j
    std::vector<std::vector<Polynomial>> p;  // P^ij

    explicit TwoFormData(const Frame& f);
    /// Throws DomainError on shape mismatch or broken antisymmetry.
    void validate() const;
    int total_degree() const;
};

PolyForm assemble(const TwoFormData& alpha);
/// Reads the Q, A, P blocks back off a polynomial 2-form.
TwoFormData decompose(const PolyForm& alpha);

/// The field X with i_X(omega^n) = -n(n-1) d alpha ^ omega^{n-2}; requires n >= 2.
/// The identity is re-verified symbolically before returning.
PolyVectorField vector_from_two_form(const TwoFormData& alpha);

/// i_X(omega^n) + n(n-1) d alpha ^ omega^{n-2}; zero for X = vector_from_two_form(alpha).
PolyForm volume_identity_defect(const TwoFormData& alpha, const PolyVectorField& x);

/// qddot = -k q written as X = X_H - a_ij q^j d/dp_i, with s = sym(k), a = antisym(k).
struct LinearSystemSpec {
    std::vector<std::vector<Rational>> k;
    std::vector<std::vector<Rational>> s;
    std::vector<std::vector<Rational>> a;
    Polynomial hamiltonian;  // 1/2 sum p_i^2 + 1/2 s_ij q^i q^j
    PolyVectorField field;
    bool is_hamiltonian() const;  // a == 0
};

LinearSystemSpec build_linear_system(const std::vector<std::vector<Rational>>& k);

/// m1 q1'' = -k (q2 - q1), m2 q2'' = -k (q1 - q2): k11 = -k/m1, k12 = k/m1,
/// k21 = k/m2, k22 = -k/m2.
LinearSystemSpec coupled_oscillators(const Rational& m1, const Rational& m2, const Rational& k);

/// The 2-form Hw/(n-1) - 1/2 (p.q) a_ij dq^i^dq^j whose field is the linear system.
TwoFormData linear_system_two_form(const LinearSystemSpec& sys);

/// Rejects any polynomial input above kMaxInputDegree.
void check_degree_cap(int degree, const char* what);

} // namespace liouville
