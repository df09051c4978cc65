#pragma once

// Chevalley-Eilenberg complexes of Lie algebras given by structure constants,
// with de Rham (via invariant forms), Euler-Lagrange and symplectically
// harmonic cohomology dimensions.

#include "liouville/exterior.hpp"
#include "liouville/linalg.hpp"

#include <string>
#include <vector>

namespace liouville {

/// d theta^k += c theta^i ^ theta^j, generator indices 0-based with i < j.
struct StructureConstant {
    int i = 0;
    int j = 0;
    int k = 0;
    Rational c;
};

class LieAlgebraPresentation {
public:
    /// Indices are 0-based. Pairs with i > j are stored as (j, i, k, -c);
    /// repeated (i, j, k) entries accumulate.
    LieAlgebraPresentation(std::string name, int dim, std::vector<StructureConstant> structure,
                           ConstForm symplectic_form);

    const std::string& name() const noexcept { return name_; }
    int dim() const noexcept { return dim_; }
    const Frame& frame() const noexcept { return frame_; }
    const std::vector<StructureConstant>& structure() const noexcept { return structure_; }
    const ConstForm& symplectic_form() const noexcept { return omega_; }

    /// d theta^k as a 2-form.
    ConstForm generator_differential(int k) const;

private:
    std::string name_;
    int dim_;
    Frame frame_;
    std::vector<StructureConstant> structure_;
    ConstForm omega_;
};

/// Abelian algebra of dimension 2n with omega = sum dp_i ^ dq^i (flat torus model).
LieAlgebraPresentation torus_algebra(int n);
/// The 6-dimensional nilpotent algebra with F = th1^th6 + th2^th4 + th3^th5.
LieAlgebraPresentation nilmanifold_m6_algebra();

class CEComplex {
public:
    const LieAlgebraPresentation& algebra() const noexcept { return algebra_; }
    const Frame& frame() const noexcept { return algebra_.frame(); }
    int dim() const noexcept { return algebra_.dim(); }
    const std::vector<BladeMask>& basis(int m) const;
    /// Matrix of d from degree m to m+1 (0 columns for m < 0, 0 rows for m >= dim).
    RationalMatrix differential_matrix(int m) const;
    /// Poisson bivector of the symplectic form.
    const RationalMatrix& bivector() const noexcept { return bivector_; }

    ConstForm differential(const ConstForm& a) const;
    /// delta = [f, d] = f d - d f, with f the bivector contraction.
    ConstForm codifferential(const ConstForm& a) const;
    ConstForm lefschetz(const ConstForm& a) const { return wedge(a, algebra_.symplectic_form()); }

    bool is_closed(const ConstForm& a) const { return differential(a).is_zero(); }
    /// Membership in im d, decided by augmented rank against d_{m-1}.
    bool is_exact(const ConstForm& a) const;

private:
    friend CEComplex build_complex(const LieAlgebraPresentation& alg);
    explicit CEComplex(LieAlgebraPresentation alg);

    LieAlgebraPresentation algebra_;
    std::vector<std::vector<BladeMask>> basis_;
    std::vector<RationalMatrix> d_;
    RationalMatrix bivector_;
};

/// Builds all d matrices and validates d^2 = 0, d omega = 0, omega^n != 0.
/// Throws InvalidPresentation otherwise.
CEComplex build_complex(const LieAlgebraPresentation& alg);

struct CohomologySpace {
    int degree = 0;
    std::size_t dimension = 0;
    /// Closed representatives completing a basis of im d to one of ker d,
    /// chosen in column-pivot order over the canonical blade basis.
    std::vector<ConstForm> representatives;
};

CohomologySpace cohomology(const CEComplex& cx, int m);
std::size_t betti(const CEComplex& cx, int m);

/// Rank of [alpha] -> [alpha ^ omega^{k-1}] from H^1 to H^{2k-1}; 1 <= k <= n-1.
std::size_t lefschetz_rank(const CEComplex& cx, int k);

/// dim H_EL^{(2k-1)}: lefschetz_rank for k < n, betti(2n-1) for k = n.
std::size_t el_dim(const CEComplex& cx, int k);

/// dim Z/B with Z = {X in g : d i_X omega^k = 0}, B = {X in g : i_X omega^k exact},
/// computed directly on invariant vector fields.
std::size_t el_dim_from_fields(const CEComplex& cx, int k);

/// dim(ker d ^ ker delta) - dim(im d ^ ker delta) in degree m.
std::size_t harmonic_dim(const CEComplex& cx, int m);

} // namespace liouville
