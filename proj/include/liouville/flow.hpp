#pragma once

// Numerical verification of Liouville-type conservation laws: fixed-step RK4
// flows, the variational (tangent) flow, and (1/l!) int omega^l over
// transported cube patches. All numerics run in long double.

#include "liouville/fields.hpp"
#include "liouville/quadrature.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace liouville {

using State = std::vector<long double>;

struct FlowConfig {
    long double t_final = 1;
    long double dt = 1e-3L;
    long double norm_cap = 1e9L;

    /// Throws DomainError unless dt > 0, t_final >= 0 and norm_cap > 0.
    void validate() const;
    /// Number of RK4 steps; the last step is shortened to land on t_final.
    std::size_t steps() const;
};

enum class FlowStatus { ok, blow_up };

/// A polynomial field lowered to long double for repeated evaluation.
class CompiledField {
public:
    explicit CompiledField(const PolyVectorField& x);

    int dimension() const noexcept { return dim_; }
    void evaluate(std::span<const long double> x, std::span<long double> out) const;
    /// Row-major Jacobian DX(x), out[r * dim + c] = dX^r/dx^c.
    void jacobian(std::span<const long double> x, std::span<long double> out) const;
    long double divergence(std::span<const long double> x) const;

private:
    struct Term {
        long double coef;
        std::array<std::uint8_t, kMaxVariables> exps;
    };
    using CompiledPoly = std::vector<Term>;
    static CompiledPoly compile(const Polynomial& p);
    long double eval(const CompiledPoly& p, std::span<const long double> x) const;

    int dim_;
    std::vector<CompiledPoly> components_;
    std::vector<CompiledPoly> jacobian_;
};

struct Trajectory {
    std::vector<long double> times;
    std::vector<State> states;
    FlowStatus status = FlowStatus::ok;
    std::optional<long double> blow_up_time;
};

/// RK4 samples at t = 0 and after every step. Exceeding the norm cap stops the
/// integration and marks the trajectory as blow-up.
Trajectory integrate(const PolyVectorField& x, const State& x0, const FlowConfig& cfg);

struct TangentPath {
    std::vector<long double> times;
    std::vector<State> states;
    std::vector<std::vector<long double>> jacobians;  // row-major J(t)
    /// int_0^t tr DX(x(s)) ds, integrated alongside as a consistency witness.
    std::vector<long double> log_volume;
    /// Max over every step (stored or not) of |det J - 1|.
    long double max_det_defect = 0;
    FlowStatus status = FlowStatus::ok;
    std::optional<long double> blow_up_time;
};

/// Integrates x' = X(x), J' = DX(x) J, J(0) = I with RK4. With keep_samples
/// false only the initial and final samples are stored.
TangentPath tangent_flow(const PolyVectorField& x, const State& x0, const FlowConfig& cfg,
                         bool keep_samples = true);

/// Determinant by partial-pivot LU.
long double determinant(std::span<const long double> m, int dim);

/// Polynomial map [0,1]^{2l} -> R^{2n}, one polynomial in 2l variables per
/// frame coordinate.
struct ChainPatch {
    int l = 1;
    std::vector<Polynomial> map;
    int order = 4;
    int sign = 1;  // orientation inside a chain

    /// Axis-aligned or skew box: origin + sum_a u_a edges[a].
    static ChainPatch affine(const State& origin, const std::vector<State>& edges, int order = 4);
    void validate(const Frame& frame) const;
};

/// Formal signed sum of patches.
using Chain = std::vector<ChainPatch>;

struct ChainIntegral {
    long double value = 0;
    bool degenerate = false;  // parametrization Jacobian rank-deficient at every node
};

/// (1/l!) int_sigma omega^l by tensor Gauss-Legendre quadrature of the pullback.
ChainIntegral chain_integral(const Frame& frame, const ChainPatch& sigma, int l);
ChainIntegral chain_integral(const Frame& frame, const Chain& sigma, int l);

struct ConservationReport {
    int l = 0;
    int k = 0;
    bool hypothesis_met = false;
    std::string hypothesis;
    long double initial = 0;
    long double final_value = 0;
    long double abs_drift = 0;
    long double rel_drift = 0;
    /// Max |det J - 1| over all nodes and steps; set when div X = 0.
    std::optional<long double> max_det_defect;
    bool blow_up = false;
};

/// Transports the chain by the flow of X (nodes by the flow, tangent vectors
/// by J), recomputes (1/l!) int omega^l and reports the drift. The conservation
/// law needs X in X_S^{(2k-1)}, plus a symplectic X when l < n.
ConservationReport verify_area_preservation(const PolyVectorField& x, const Chain& sigma, int l,
                                            int k, const FlowConfig& cfg);

/// Matrix Omega_ab = omega(e_a, e_b) of the standard symplectic form.
std::vector<long double> omega_matrix(const Frame& frame);

/// Max entry of |J^T Omega J - Omega| along the path.
long double max_symplecticity_defect(const Frame& frame, const TangentPath& path);

} // namespace liouville
