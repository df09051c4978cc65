#include "liouville/cohomology.hpp"

#include <map>
#include <tuple>

namespace liouville {

namespace {

RationalMatrix operator_matrix(const CEComplex& cx, int from, int to,
                               const auto& op) {
    const int dim = cx.dim();
    const bool from_ok = from >= 0 && from <= dim;
    const bool to_ok = to >= 0 && to <= dim;
    const std::size_t rows = to_ok ? cx.basis(to).size() : 0;
    const std::size_t cols = from_ok ? cx.basis(from).size() : 0;
    RationalMatrix m(rows, cols);
    if (!from_ok || !to_ok) return m;
    const auto& src = cx.basis(from);
    const auto& dst = cx.basis(to);
    for (std::size_t c = 0; c < src.size(); ++c) {
        auto coords = to_coordinates(op(ConstForm(cx.frame(), src[c], Rational(1))), dst);
        for (std::size_t r = 0; r < rows; ++r) m(r, c) = coords[r];
    }
    return m;
}

std::size_t kernel_dim(const RationalMatrix& m) { return m.cols() - rank(m); }

void check_degree(const CEComplex& cx, int m) {
    if (m < 0 || m > cx.dim())
        throw DomainError("degree " + std::to_string(m) + " outside [0, " +
                          std::to_string(cx.dim()) + "]");
}

void check_k(int k, int upper) {
    if (k < 1 || k > upper)
        throw DomainError("k = " + std::to_string(k) + " outside [1, " + std::to_string(upper) + "]");
}

} // namespace

LieAlgebraPresentation::LieAlgebraPresentation(std::string name, int dim,
                                               std::vector<StructureConstant> structure,
                                               ConstForm symplectic_form)
    : name_(std::move(name)),
      dim_(dim),
      frame_((dim % 2 == 0 && dim >= 2) ? dim / 2 : 1, Frame::Labels::theta),
      omega_(std::move(symplectic_form)) {
    if (dim < 2 || dim % 2 != 0 || dim > 2 * kMaxHalfDimension)
        throw InvalidPresentation("dimension must be even and in [2, " +
                                  std::to_string(2 * kMaxHalfDimension) + "], got " +
                                  std::to_string(dim));
    if (!(omega_.frame() == frame_))
        throw InvalidPresentation("symplectic form is not over the algebra's generators");
    std::map<std::tuple<int, int, int>, Rational> merged;
    for (auto s : structure) {
        for (int idx : {s.i, s.j, s.k})
            if (idx < 0 || idx >= dim) throw InvalidPresentation("structure index out of range");
        if (s.i == s.j) throw InvalidPresentation("structure constant with i == j");
        if (s.i > s.j) {
            std::swap(s.i, s.j);
            s.c = -s.c;
        }
        merged[{s.k, s.i, s.j}] += s.c;
    }
    for (const auto& [key, c] : merged) {
        if (c == 0) continue;
        auto [k, i, j] = key;
        structure_.push_back({i, j, k, c});
    }
}

ConstForm LieAlgebraPresentation::generator_differential(int k) const {
    ConstForm d(frame_);
    for (const auto& s : structure_)
        if (s.k == k) d.add_term((BladeMask{1} << s.i) | (BladeMask{1} << s.j), s.c);
    return d;
}

LieAlgebraPresentation torus_algebra(int n) {
    const Frame frame(n, Frame::Labels::theta);
    return LieAlgebraPresentation("torus" + std::to_string(2 * n), 2 * n, {}, omega(frame));
}

LieAlgebraPresentation nilmanifold_m6_algebra() {
    const Frame frame(3, Frame::Labels::theta);
    auto th = [&](int i) { return ConstForm::generator(frame, i - 1); };
    ConstForm F = wedge(th(1), th(6)) + wedge(th(2), th(4)) + wedge(th(3), th(5));
    std::vector<StructureConstant> s = {
        {0, 1, 3, Rational(1)},                            // d th4 = th1^th2
        {0, 3, 4, Rational(1)}, {1, 2, 4, Rational(-1)},  // d th5 = th1^th4 - th2^th3
        {0, 4, 5, Rational(1)}, {2, 3, 5, Rational(1)},   // d th6 = th1^th5 + th3^th4
    };
    return LieAlgebraPresentation("nilm6", 6, std::move(s), std::move(F));
}

CEComplex::CEComplex(LieAlgebraPresentation alg) : algebra_(std::move(alg)) {
    for (int m = 0; m <= dim(); ++m) basis_.push_back(blade_basis(frame(), m));
}

const std::vector<BladeMask>& CEComplex::basis(int m) const {
    if (m < 0 || m > dim()) throw DomainError("degree outside complex");
    return basis_[m];
}

RationalMatrix CEComplex::differential_matrix(int m) const {
    if (m >= 0 && m < dim()) return d_[m];
    const std::size_t rows = (m + 1 >= 0 && m + 1 <= dim()) ? basis_[m + 1].size() : 0;
    const std::size_t cols = (m >= 0 && m <= dim()) ? basis_[m].size() : 0;
    return RationalMatrix(rows, cols);
}

ConstForm CEComplex::differential(const ConstForm& a) const {
    if (!(a.frame() == frame())) throw FrameMismatch("form is not over the algebra's generators");
    ConstForm out(frame());
    for (const auto& [blade, c] : a.terms()) {
        // Leibniz over the canonical factor order: sign (-1)^r for the r-th factor.
        int r = 0;
        for (BladeMask rest = blade; rest; rest &= rest - 1, ++r) {
            int g = std::countr_zero(rest);
            BladeMask before = blade & ((BladeMask{1} << g) - 1);
            BladeMask after = blade & ~((BladeMask{1} << (g + 1)) - 1);
            ConstForm term = wedge(wedge(ConstForm(frame(), before, Rational(1)),
                                         algebra_.generator_differential(g)),
                                   ConstForm(frame(), after, Rational(1)));
            out += term * ((r % 2 == 0) ? c : Rational(-c));
        }
    }
    return out;
}

ConstForm CEComplex::codifferential(const ConstForm& a) const {
    return contract_bivector(bivector_, differential(a)) -
           differential(contract_bivector(bivector_, a));
}

bool CEComplex::is_exact(const ConstForm& a) const {
    if (a.is_zero()) return true;
    auto deg = a.degree();
    if (!deg) throw DomainError("exactness test needs a homogeneous form");
    if (*deg == 0) return false;
    return in_column_space(differential_matrix(*deg - 1), to_coordinates(a, basis(*deg)));
}

CEComplex build_complex(const LieAlgebraPresentation& alg) {
    CEComplex cx(alg);
    for (int m = 0; m < cx.dim(); ++m)
        cx.d_.push_back(operator_matrix(cx, m, m + 1,
                                        [&](const ConstForm& a) { return cx.differential(a); }));
    for (int m = 0; m + 1 < cx.dim(); ++m)
        if (!(cx.d_[m + 1] * cx.d_[m]).is_zero())
            throw InvalidPresentation("d^2 != 0 on degree " + std::to_string(m) +
                                      " (structure constants violate the Jacobi identity)");
    const ConstForm& w = alg.symplectic_form();
    if (w.degree() != 2 || w.is_zero()) throw InvalidPresentation("symplectic form must be a 2-form");
    if (!cx.differential(w).is_zero()) throw InvalidPresentation("symplectic form is not closed");
    if (power(w, cx.frame().n()).is_zero()) throw InvalidPresentation("symplectic form is degenerate");
    cx.bivector_ = poisson_bivector(w);
    return cx;
}

CohomologySpace cohomology(const CEComplex& cx, int m) {
    check_degree(cx, m);
    const RationalMatrix dm = cx.differential_matrix(m);
    const RationalMatrix boundaries = cx.differential_matrix(m - 1);
    const auto cycles = nullspace(dm);
    const auto& basis = cx.basis(m);

    CohomologySpace space;
    space.degree = m;
    if (cycles.empty()) return space;
    const RationalMatrix z = RationalMatrix::from_columns(basis.size(), cycles);
    const auto ech = row_reduce(hconcat(boundaries, z));
    for (auto p : ech.pivots) {
        if (p < boundaries.cols()) continue;
        const auto& v = cycles[p - boundaries.cols()];
        space.representatives.push_back(from_coordinates(cx.frame(), basis, v));
    }
    space.dimension = space.representatives.size();
    return space;
}

std::size_t betti(const CEComplex& cx, int m) {
    check_degree(cx, m);
    return kernel_dim(cx.differential_matrix(m)) - rank(cx.differential_matrix(m - 1));
}

std::size_t lefschetz_rank(const CEComplex& cx, int k) {
    check_k(k, cx.frame().n() - 1);
    const auto h1 = cohomology(cx, 1);
    const ConstForm wk = power(cx.algebra().symplectic_form(), k - 1);
    const int target = 2 * k - 1;
    std::vector<std::vector<Rational>> images;
    for (const auto& alpha : h1.representatives)
        images.push_back(to_coordinates(wedge(alpha, wk), cx.basis(target)));
    const RationalMatrix boundaries = cx.differential_matrix(target - 1);
    if (images.empty()) return 0;
    const RationalMatrix v = RationalMatrix::from_columns(cx.basis(target).size(), images);
    return rank(hconcat(boundaries, v)) - rank(boundaries);
}

std::size_t el_dim(const CEComplex& cx, int k) {
    const int n = cx.frame().n();
    check_k(k, n);
    if (k == n) return betti(cx, 2 * n - 1);
    return lefschetz_rank(cx, k);
}

std::size_t el_dim_from_fields(const CEComplex& cx, int k) {
    const int n = cx.frame().n();
    check_k(k, n);
    const int deg = 2 * k - 1;
    const ConstForm wk = power(cx.algebra().symplectic_form(), k);
    std::vector<std::vector<Rational>> columns;
    for (int g = 0; g < cx.dim(); ++g) columns.push_back(to_coordinates(interior(g, wk), cx.basis(deg)));
    const RationalMatrix contraction = RationalMatrix::from_columns(cx.basis(deg).size(), columns);

    const std::size_t z_dim = kernel_dim(cx.differential_matrix(deg) * contraction);

    // X with contraction*X in im d_{deg-1}: project null vectors of [M | D] onto X.
    const RationalMatrix boundaries = cx.differential_matrix(deg - 1);
    const auto pairs = nullspace(hconcat(contraction, boundaries));
    RationalMatrix projected(cx.dim(), pairs.size());
    for (std::size_t c = 0; c < pairs.size(); ++c)
        for (int r = 0; r < cx.dim(); ++r) projected(r, c) = pairs[c][r];
    const std::size_t b_dim = rank(projected);
    return z_dim - b_dim;
}

std::size_t harmonic_dim(const CEComplex& cx, int m) {
    check_degree(cx, m);
    auto delta = [&](const ConstForm& a) { return cx.codifferential(a); };
    const RationalMatrix dm = cx.differential_matrix(m);
    const RationalMatrix delta_m = operator_matrix(cx, m, m - 1, delta);
    const RationalMatrix stacked = vconcat(dm, delta_m);
    const std::size_t harmonic = kernel_dim(stacked);

    const RationalMatrix d_prev = cx.differential_matrix(m - 1);
    std::size_t exact_harmonic = 0;
    if (d_prev.cols() > 0) {
        const auto null = nullspace(delta_m * d_prev);
        if (!null.empty())
            exact_harmonic = rank(d_prev * RationalMatrix::from_columns(d_prev.cols(), null));
    }
    return harmonic - exact_harmonic;
}

} // namespace liouville
