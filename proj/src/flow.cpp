#include "liouville/flow.hpp"

#include "liouville/errors.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <thread>

namespace liouville {

void FlowConfig::validate() const {
    if (!(dt > 0) || !std::isfinite(dt)) throw DomainError("flow: dt must be positive");
    if (!(t_final >= 0) || !std::isfinite(t_final))
        throw DomainError("flow: t_final must be non-negative");
    if (!(norm_cap > 0)) throw DomainError("flow: norm cap must be positive");
}

std::size_t FlowConfig::steps() const {
    validate();
    const long double r = t_final / dt;
    const long double nearest = std::round(r);
    // t_final a multiple of dt up to rounding: take exactly that many steps.
    if (std::fabs(r - nearest) < 1e-9L * std::max<long double>(1, r))
        return static_cast<std::size_t>(nearest);
    return static_cast<std::size_t>(std::ceil(r));
}

namespace {

// Step sizes: uniform when t_final is a multiple of dt, otherwise full steps
// followed by one shortened step.
std::vector<long double> step_sizes(const FlowConfig& cfg) {
    const std::size_t n = cfg.steps();
    std::vector<long double> h(n, cfg.dt);
    if (n == 0) return h;
    const long double full = static_cast<long double>(n) * cfg.dt;
    if (std::fabs(full - cfg.t_final) < 1e-9L * std::max<long double>(1, cfg.t_final)) {
        std::fill(h.begin(), h.end(), cfg.t_final / static_cast<long double>(n));
    } else {
        h.back() = cfg.t_final - static_cast<long double>(n - 1) * cfg.dt;
    }
    return h;
}

bool exceeds_cap(std::span<const long double> x, long double cap) {
    long double s = 0;
    for (auto v : x) {
        if (!std::isfinite(v)) return true;
        s += v * v;
    }
    return !(std::sqrt(s) <= cap);
}

// Classical RK4 step for y' = f(y), in place.
template <class F>
void rk4_step(std::vector<long double>& y, long double h, F&& f,
              std::array<std::vector<long double>, 5>& work) {
    const std::size_t m = y.size();
    auto& [k1, k2, k3, k4, tmp] = work;
    for (auto* v : {&k1, &k2, &k3, &k4, &tmp}) v->resize(m);
    f(y, k1);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + h / 2 * k1[i];
    f(tmp, k2);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + h / 2 * k2[i];
    f(tmp, k3);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + h * k3[i];
    f(tmp, k4);
    for (std::size_t i = 0; i < m; ++i)
        y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
}

void check_point(const PolyVectorField& x, const State& x0) {
    if (static_cast<int>(x0.size()) != x.frame().dimension())
        throw DomainError("flow: initial point has the wrong dimension");
}

} // namespace

CompiledField::CompiledField(const PolyVectorField& x) : dim_(x.frame().dimension()) {
    for (const auto& c : x.components()) components_.push_back(compile(c));
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c)
            jacobian_.push_back(compile(x.components()[r].derivative(c)));
}

CompiledField::CompiledPoly CompiledField::compile(const Polynomial& p) {
    CompiledPoly out;
    for (const auto& [m, c] : p.terms()) out.push_back({to_long_double(c), m.exponents});
    return out;
}

long double CompiledField::eval(const CompiledPoly& p, std::span<const long double> x) const {
    long double s = 0;
    for (const auto& t : p) {
        long double v = t.coef;
        for (int i = 0; i < dim_; ++i)
            for (int e = 0; e < t.exps[i]; ++e) v *= x[i];
        s += v;
    }
    return s;
}

void CompiledField::evaluate(std::span<const long double> x, std::span<long double> out) const {
    for (int g = 0; g < dim_; ++g) out[g] = eval(components_[g], x);
}

void CompiledField::jacobian(std::span<const long double> x, std::span<long double> out) const {
    for (std::size_t i = 0; i < jacobian_.size(); ++i) out[i] = eval(jacobian_[i], x);
}

long double CompiledField::divergence(std::span<const long double> x) const {
    long double s = 0;
    for (int g = 0; g < dim_; ++g) s += eval(jacobian_[g * dim_ + g], x);
    return s;
}

Trajectory integrate(const PolyVectorField& x, const State& x0, const FlowConfig& cfg) {
    check_point(x, x0);
    const auto hs = step_sizes(cfg);
    const CompiledField f(x);
    Trajectory out;
    State y = x0;
    out.times.push_back(0);
    out.states.push_back(y);
    if (exceeds_cap(y, cfg.norm_cap)) {
        out.status = FlowStatus::blow_up;
        out.blow_up_time = 0;
        return out;
    }
    std::array<std::vector<long double>, 5> work;
    auto rhs = [&](const std::vector<long double>& s, std::vector<long double>& d) {
        f.evaluate(s, d);
    };
    long double t = 0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        rk4_step(y, hs[i], rhs, work);
        t = (i + 1 == hs.size()) ? cfg.t_final : t + hs[i];
        out.times.push_back(t);
        out.states.push_back(y);
        if (exceeds_cap(y, cfg.norm_cap)) {
            out.status = FlowStatus::blow_up;
            out.blow_up_time = t;
            break;
        }
    }
    return out;
}

long double determinant(std::span<const long double> m, int dim) {
    std::vector<long double> a(m.begin(), m.end());
    long double det = 1;
    for (int c = 0; c < dim; ++c) {
        int piv = c;
        for (int r = c + 1; r < dim; ++r)
            if (std::fabs(a[r * dim + c]) > std::fabs(a[piv * dim + c])) piv = r;
        if (a[piv * dim + c] == 0) return 0;
        if (piv != c) {
            for (int k = 0; k < dim; ++k) std::swap(a[c * dim + k], a[piv * dim + k]);
            det = -det;
        }
        const long double d = a[c * dim + c];
        det *= d;
        for (int r = c + 1; r < dim; ++r) {
            const long double f = a[r * dim + c] / d;
            if (f == 0) continue;
            for (int k = c; k < dim; ++k) a[r * dim + k] -= f * a[c * dim + k];
        }
    }
    return det;
}

TangentPath tangent_flow(const PolyVectorField& x, const State& x0, const FlowConfig& cfg,
                         bool keep_samples) {
    check_point(x, x0);
    const auto hs = step_sizes(cfg);
    const CompiledField f(x);
    const int d = f.dimension();
    const std::size_t dd = static_cast<std::size_t>(d) * d;

    // Augmented state (x, J row-major, int tr DX).
    std::vector<long double> y(d + dd + 1, 0);
    std::copy(x0.begin(), x0.end(), y.begin());
    for (int i = 0; i < d; ++i) y[d + i * d + i] = 1;

    TangentPath out;
    auto record = [&](long double t) {
        out.times.push_back(t);
        out.states.emplace_back(y.begin(), y.begin() + d);
        out.jacobians.emplace_back(y.begin() + d, y.begin() + d + dd);
        out.log_volume.push_back(y.back());
    };
    auto jac_defect = [&] {
        return std::fabs(determinant(std::span<const long double>(y).subspan(d, dd), d) - 1);
    };

    std::vector<long double> dx(dd);
    auto rhs = [&](const std::vector<long double>& s, std::vector<long double>& ds) {
        std::span<const long double> xs(s.data(), d);
        f.evaluate(xs, std::span<long double>(ds.data(), d));
        f.jacobian(xs, dx);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                long double acc = 0;
                for (int k = 0; k < d; ++k) acc += dx[r * d + k] * s[d + k * d + c];
                ds[d + r * d + c] = acc;
            }
        long double tr = 0;
        for (int g = 0; g < d; ++g) tr += dx[g * d + g];
        ds.back() = tr;
    };

    record(0);
    if (exceeds_cap(x0, cfg.norm_cap)) {
        out.status = FlowStatus::blow_up;
        out.blow_up_time = 0;
        return out;
    }
    std::array<std::vector<long double>, 5> work;
    long double t = 0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        rk4_step(y, hs[i], rhs, work);
        const bool last = i + 1 == hs.size();
        t = last ? cfg.t_final : t + hs[i];
        const bool blown = exceeds_cap(std::span<const long double>(y).first(d), cfg.norm_cap);
        if (!blown) out.max_det_defect = std::max(out.max_det_defect, jac_defect());
        if (keep_samples || last || blown) record(t);
        if (blown) {
            out.status = FlowStatus::blow_up;
            out.blow_up_time = t;
            break;
        }
    }
    return out;
}

ChainPatch ChainPatch::affine(const State& origin, const std::vector<State>& edges, int order) {
    if (edges.empty() || edges.size() % 2 != 0)
        throw DomainError("chain: an affine patch needs an even, positive number of edges");
    const int dim = static_cast<int>(origin.size());
    const int vars = static_cast<int>(edges.size());
    ChainPatch p;
    p.l = vars / 2;
    p.order = order;
    for (int g = 0; g < dim; ++g) {
        // Doubles convert to mpq exactly.
        auto exact = [](long double v) { return Rational(static_cast<double>(v)); };
        Polynomial c(vars, exact(origin[g]));
        for (int a = 0; a < vars; ++a) {
            if (static_cast<int>(edges[a].size()) != dim)
                throw DomainError("chain: edge has the wrong dimension");
            c += exact(edges[a][g]) * Polynomial::variable(vars, a);
        }
        p.map.push_back(std::move(c));
    }
    return p;
}

void ChainPatch::validate(const Frame& frame) const {
    if (l < 1 || l > frame.n()) throw DomainError("chain: l must satisfy 1 <= l <= n");
    if (static_cast<int>(map.size()) != frame.dimension())
        throw DomainError("chain: parametrization must have one component per coordinate");
    for (const auto& c : map)
        if (c.nvars() != 2 * l && !c.is_constant())
            throw DomainError("chain: parametrization must use 2l parameters");
    if (order < 1 || order > 64) throw DomainError("chain: quadrature order must be in [1, 64]");
    if (sign != 1 && sign != -1) throw DomainError("chain: patch sign must be +1 or -1");
}

namespace {

// (1/l!) omega^l as (ascending rows, coefficient) pairs.
struct VolumeTerms {
    std::vector<std::pair<std::vector<int>, long double>> terms;
};

VolumeTerms volume_terms(const Frame& frame, int l) {
    ConstForm w = omega_power<Rational>(frame, l);
    Rational fact = 1;
    for (int i = 2; i <= l; ++i) fact *= i;
    VolumeTerms out;
    for (const auto& [mask, c] : w.terms()) {
        std::vector<int> rows;
        for (int g = 0; g < frame.dimension(); ++g)
            if (mask >> g & 1U) rows.push_back(g);
        out.terms.emplace_back(std::move(rows), to_long_double(Rational(c / fact)));
    }
    return out;
}

// Node data of a patch before transport: position and d sigma/du (dim x 2l).
struct PatchNode {
    State x;
    std::vector<long double> tangent;
    long double weight;
};

std::vector<PatchNode> patch_nodes(const Frame& frame, const ChainPatch& sigma) {
    const int dim = frame.dimension();
    const int vars = 2 * sigma.l;
    const auto rule = gauss_legendre(sigma.order);
    const auto q = static_cast<std::size_t>(sigma.order);
    std::vector<std::vector<Polynomial>> partials(dim);
    for (int g = 0; g < dim; ++g) {
        Polynomial c = sigma.map[g];
        if (c.nvars() != vars) c = Polynomial(vars, c.constant_term());
        for (int a = 0; a < vars; ++a) partials[g].push_back(c.derivative(a));
    }
    std::size_t total = 1;
    for (int a = 0; a < vars; ++a) total *= q;

    std::vector<PatchNode> nodes;
    nodes.reserve(total);
    std::vector<long double> u(vars);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        long double w = 1;
        for (int a = vars - 1; a >= 0; --a) {
            u[a] = rule.nodes[rest % q];
            w *= rule.weights[rest % q];
            rest /= q;
        }
        PatchNode node{State(dim), std::vector<long double>(dim * vars), w};
        for (int g = 0; g < dim; ++g) {
            const Polynomial& c = sigma.map[g];
            node.x[g] = c.nvars() == vars ? c.evaluate(std::span<const long double>(u))
                                          : to_long_double(c.constant_term());
            for (int a = 0; a < vars; ++a)
                node.tangent[g * vars + a] = partials[g][a].evaluate(std::span<const long double>(u));
        }
        nodes.push_back(std::move(node));
    }
    return nodes;
}

// Pullback density sum_I c_I det(V[I, :]) for V of shape dim x 2l.
long double density(const VolumeTerms& vt, std::span<const long double> v, int vars) {
    long double s = 0;
    std::vector<long double> minor(static_cast<std::size_t>(vars) * vars);
    for (const auto& [rows, c] : vt.terms) {
        for (int r = 0; r < vars; ++r)
            for (int a = 0; a < vars; ++a) minor[r * vars + a] = v[rows[r] * vars + a];
        s += c * determinant(minor, vars);
    }
    return s;
}

bool rank_deficient(std::span<const long double> v, int dim, int vars) {
    std::vector<long double> gram(static_cast<std::size_t>(vars) * vars, 0);
    long double scale = 0;
    for (int a = 0; a < vars; ++a)
        for (int b = 0; b < vars; ++b) {
            long double acc = 0;
            for (int g = 0; g < dim; ++g) acc += v[g * vars + a] * v[g * vars + b];
            gram[a * vars + b] = acc;
        }
    for (int a = 0; a < vars; ++a) scale = std::max(scale, gram[a * vars + a]);
    if (scale == 0) return true;
    return std::fabs(determinant(gram, vars)) <= 1e-24L * std::pow(scale, vars);
}

// Evaluates fn(i) for i in [0, count) on a few threads; results land in index
// order so any later reduction is schedule-independent.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn) {
    std::vector<T> out(count);
    const std::size_t workers =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
    if (count < 2 * workers || workers == 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w)
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < count; i += workers) out[i] = fn(i);
        }));
    for (auto& j : jobs) j.get();
    return out;
}

void check_l(const Frame& frame, const ChainPatch& sigma, int l) {
    if (sigma.l != l) throw DomainError("chain: l does not match the patch");
    sigma.validate(frame);
}

} // namespace

ChainIntegral chain_integral(const Frame& frame, const ChainPatch& sigma, int l) {
    check_l(frame, sigma, l);
    const int vars = 2 * l;
    const auto vt = volume_terms(frame, l);
    const auto nodes = patch_nodes(frame, sigma);
    ChainIntegral out;
    bool all_degenerate = true;
    for (const auto& node : nodes) {
        if (!rank_deficient(node.tangent, frame.dimension(), vars)) all_degenerate = false;
        out.value += node.weight * density(vt, node.tangent, vars);
    }
    if (all_degenerate) {
        out.value = 0;
        out.degenerate = true;
    }
    out.value *= sigma.sign;
    return out;
}

ChainIntegral chain_integral(const Frame& frame, const Chain& sigma, int l) {
    ChainIntegral out;
    if (sigma.empty()) return out;
    out.degenerate = true;
    for (const auto& p : sigma) {
        const auto r = chain_integral(frame, p, l);
        out.value += r.value;
        out.degenerate = out.degenerate && r.degenerate;
    }
    return out;
}

std::vector<long double> omega_matrix(const Frame& frame) {
    const int d = frame.dimension();
    const RationalMatrix w = two_form_matrix(omega<Rational>(frame));
    std::vector<long double> out(static_cast<std::size_t>(d) * d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) out[r * d + c] = to_long_double(w(r, c));
    return out;
}

long double max_symplecticity_defect(const Frame& frame, const TangentPath& path) {
    const int d = frame.dimension();
    const auto om = omega_matrix(frame);
    long double worst = 0;
    std::vector<long double> oj(static_cast<std::size_t>(d) * d);
    for (const auto& j : path.jacobians) {
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                long double acc = 0;
                for (int k = 0; k < d; ++k) acc += om[r * d + k] * j[k * d + c];
                oj[r * d + c] = acc;
            }
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                long double acc = 0;
                for (int k = 0; k < d; ++k) acc += j[k * d + r] * oj[k * d + c];
                worst = std::max(worst, std::fabs(acc - om[r * d + c]));
            }
    }
    return worst;
}

ConservationReport verify_area_preservation(const PolyVectorField& x, const Chain& sigma, int l,
                                            int k, const FlowConfig& cfg) {
    const Frame& frame = x.frame();
    const int n = frame.n();
    if (k < 1 || k > n) throw DomainError("verify: k must satisfy 1 <= k <= n");
    if (l < 1 || l > n) throw DomainError("verify: l must satisfy 1 <= l <= n");
    if (sigma.empty()) throw DomainError("verify: empty chain");
    for (const auto& p : sigma) check_l(frame, p, l);
    cfg.validate();

    ConservationReport rep;
    rep.l = l;
    rep.k = k;
    const bool sym_k = classify(x, k).symplectic_like;
    const bool sym_1 = (k == 1) ? sym_k : classify(x, 1).symplectic_like;
    rep.hypothesis_met = sym_k && (l == n || sym_1);
    if (rep.hypothesis_met) {
        rep.hypothesis = "met";
    } else if (!sym_k) {
        rep.hypothesis = "violated: X is not (2k-1)-symplectic";
    } else {
        rep.hypothesis = "violated: l < n requires a symplectic field";
    }
    const bool divergence_free = divergence(x).is_zero();

    const auto vt = volume_terms(frame, l);
    const int dim = frame.dimension();
    const int vars = 2 * l;

    struct NodeResult {
        long double before = 0;
        long double after = 0;
        long double det_defect = 0;
        bool blown = false;
    };
    long double initial = 0;
    long double final_value = 0;
    long double worst_det = 0;
    for (const auto& patch : sigma) {
        const auto nodes = patch_nodes(frame, patch);
        auto results = parallel_map<NodeResult>(nodes.size(), [&](std::size_t i) {
            const auto& node = nodes[i];
            NodeResult r;
            r.before = node.weight * density(vt, node.tangent, vars);
            const auto path = tangent_flow(x, node.x, cfg, false);
            if (path.status == FlowStatus::blow_up) {
                r.blown = true;
                return r;
            }
            const auto& j = path.jacobians.back();
            std::vector<long double> v(static_cast<std::size_t>(dim) * vars);
            for (int g = 0; g < dim; ++g)
                for (int a = 0; a < vars; ++a) {
                    long double acc = 0;
                    for (int h = 0; h < dim; ++h) acc += j[g * dim + h] * node.tangent[h * vars + a];
                    v[g * vars + a] = acc;
                }
            r.after = node.weight * density(vt, v, vars);
            r.det_defect = path.max_det_defect;
            return r;
        });
        long double before = 0;
        long double after = 0;
        for (const auto& r : results) {
            before += r.before;
            after += r.after;
            rep.blow_up = rep.blow_up || r.blown;
            worst_det = std::max(worst_det, r.det_defect);
        }
        initial += patch.sign * before;
        final_value += patch.sign * after;
    }
    rep.initial = initial;
    if (rep.blow_up) {
        rep.final_value = std::numeric_limits<long double>::quiet_NaN();
        rep.abs_drift = rep.rel_drift = std::numeric_limits<long double>::infinity();
        return rep;
    }
    rep.final_value = final_value;
    rep.abs_drift = std::fabs(final_value - initial);
    rep.rel_drift = initial != 0 ? rep.abs_drift / std::fabs(initial) : rep.abs_drift;
    if (divergence_free) rep.max_det_defect = worst_det;
    return rep;
}

} // namespace liouville
