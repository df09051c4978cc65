#include "commands.hpp"

#include "liouville/cohomology.hpp"
#include "liouville/errors.hpp"
#include "liouville/exterior.hpp"
#include "liouville/fields.hpp"
#include "liouville/flow.hpp"
#include "liouville/spec_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <future>
#include <ostream>
#include <random>
#include <sstream>

namespace liouville::cli {

void Report::section(std::string name, std::string title) {
    current_ = name;
    entries_.push_back({std::move(name), {}, {}, std::move(title), true, false});
}

void Report::field(const std::string& key, std::string value, std::string label) {
    entries_.push_back({current_, key, std::move(value), label.empty() ? key : std::move(label),
                        false, false});
}

void Report::note(std::string line) {
    entries_.push_back({current_, {}, {}, std::move(line), false, true});
}

void Report::print(std::ostream& out, Format format) const {
    for (const auto& e : entries_) {
        if (format == Format::machine) {
            if (e.heading || e.note) continue;
            if (!e.section.empty()) out << e.section << '.';
            out << e.key << '=' << e.value << '\n';
        } else if (e.heading) {
            out << "== " << e.label << '\n';
        } else if (e.note) {
            out << "  " << e.label << '\n';
        } else {
            out << "  " << e.label << ": " << e.value << '\n';
        }
    }
}

std::string format_real(long double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10Lg", v);
    return buf;
}

namespace {

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string join(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return s;
}

std::string field_text(const PolyVectorField& x) {
    std::string s;
    const auto names = x.frame().coordinate_names();
    for (int g = 0; g < x.frame().dimension(); ++g) {
        if (g) s += "; ";
        s += "d/d" + names[g] + ": " + x.components()[g].to_canonical();
    }
    return s;
}

void field_components(Report& rep, const PolyVectorField& x) {
    const auto names = x.frame().coordinate_names();
    for (int g = 0; g < x.frame().dimension(); ++g)
        rep.field("X." + names[g], x.components()[g].to_canonical());
}

} // namespace

int sl2_check(int n, Report& rep) {
    rep.section("sl2", "sl(2) identities, n=" + std::to_string(n));
    bool ok = true;
    for (int k = 1; k <= n; ++k) {
        const Sl2Report r = commutator_check(n, k);
        const std::string key = "k" + std::to_string(k);
        rep.field(key + ".blades", std::to_string(r.blades_checked));
        rep.field(key + ".passed", yes_no(r.passed()));
        if (!r.passed()) {
            ok = false;
            rep.field(key + ".failure", r.failure->identity + " on blade " +
                                            std::to_string(r.failure->blade));
        }
    }
    const Frame frame(n);
    const ConstForm fw = op_f(omega<Rational>(frame));
    const bool fw_ok = fw == ConstForm::scalar(frame, Rational(n));
    rep.field("f_omega", to_canonical(fw), "f omega");
    rep.field("f_omega.passed", yes_no(fw_ok));
    ok = ok && fw_ok;
    rep.field("status", ok ? "pass" : "fail");
    return ok ? kPass : kNumericalFailure;
}

int cohomology(const std::string& file, bool want_betti, bool want_el, bool want_harmonic,
               Report& rep) {
    const CEComplex cx = build_complex(load_algebra(file));
    if (!want_betti && !want_el && !want_harmonic) want_betti = want_el = want_harmonic = true;
    const int dim = cx.dim();
    const int n = dim / 2;
    rep.section("cohomology", "cohomology of " + cx.algebra().name());
    rep.field("dim", std::to_string(dim));
    if (want_betti) {
        std::vector<std::size_t> b;
        for (int m = 0; m <= dim; ++m) b.push_back(betti(cx, m));
        rep.field("betti", join(b));
    }
    if (want_el)
        for (int k = 1; k <= n; ++k)
            rep.field("el_dim." + std::to_string(k), std::to_string(el_dim(cx, k)),
                      "el_dim(" + std::to_string(k) + ")");
    if (want_harmonic) {
        std::vector<std::size_t> h;
        for (int m = 0; m <= dim; ++m) h.push_back(harmonic_dim(cx, m));
        rep.field("harmonic", join(h));
    }
    return kPass;
}

int classify(const std::string& file, int k, Report& rep) {
    const PolyVectorField x = load_field(file);
    const Classification c = liouville::classify(x, k);
    rep.section("classify", "classification at k=" + std::to_string(k));
    rep.field("n", std::to_string(x.frame().n()));
    rep.field("k", std::to_string(k));
    rep.field("symplectic_like", yes_no(c.symplectic_like));
    rep.field("hamiltonian_like", yes_no(c.hamiltonian_like));
    rep.field("preserves_omega", yes_no(c.preserves_omega));
    rep.field("divergence", divergence(x).to_canonical());
    rep.field("el_form", to_canonical(c.el_form));
    rep.field("potential", c.potential ? to_canonical(*c.potential) : "none");
    if (c.potential) rep.note("E_X = d(" + pretty(*c.potential) + ")");
    return kPass;
}

int from_two_form(const std::string& file, Report& rep) {
    const TwoFormData alpha = load_two_form(file);
    const PolyVectorField x = vector_from_two_form(alpha);
    const PolyForm defect = volume_identity_defect(alpha, x);
    const Polynomial div = divergence(x);
    rep.section("from_two_form", "field of a two-form, n=" + std::to_string(alpha.frame.n()));
    rep.field("alpha", to_canonical(assemble(alpha)));
    field_components(rep, x);
    rep.field("identity_defect", to_canonical(defect));
    rep.field("divergence", div.to_canonical());
    const bool ok = defect.is_zero() && div.is_zero();
    rep.field("status", ok ? "pass" : "fail");
    return ok ? kPass : kNumericalFailure;
}

namespace {

constexpr long double kDriftBudget = 1e-6L;

int conservation(Report& rep, const PolyVectorField& x, const ChainSpec& spec, int k,
                 const FlowConfig& cfg, const std::string& tag) {
    const ConservationReport r = verify_area_preservation(x, spec.chain, spec.l, k, cfg);
    rep.section(tag, "conservation of (1/l!) int omega^l, l=" + std::to_string(spec.l) +
                         ", k=" + std::to_string(k));
    rep.field("l", std::to_string(r.l));
    rep.field("k", std::to_string(r.k));
    rep.field("hypothesis", r.hypothesis);
    rep.field("initial", format_real(r.initial));
    rep.field("final", format_real(r.final_value));
    rep.field("abs_drift", format_real(r.abs_drift));
    rep.field("rel_drift", format_real(r.rel_drift));
    if (r.max_det_defect) rep.field("max_det_defect", format_real(*r.max_det_defect));
    rep.field("blow_up", yes_no(r.blow_up));
    if (r.blow_up) return kNumericalFailure;
    if (!r.hypothesis_met) {
        rep.field("status", "theorem not applicable");
        return kHypothesisNotMet;
    }
    const bool ok = r.rel_drift < kDriftBudget &&
                    (!r.max_det_defect || *r.max_det_defect < kDriftBudget);
    rep.field("status", ok ? "pass" : "fail");
    return ok ? kPass : kNumericalFailure;
}

int worst(int a, int b) {
    // A numerical failure outranks a hypothesis notice.
    if (a == kNumericalFailure || b == kNumericalFailure) return kNumericalFailure;
    return std::max(a, b);
}

} // namespace

int flow(const FlowOptions& opt, Report& rep) {
    SystemSpec sys = load_system(opt.file);
    const PolyVectorField& x = sys.field;
    const FlowConfig cfg{opt.t, opt.dt};
    cfg.validate();
    if (!opt.chain_file.empty()) {
        ChainSpec c = load_chain(opt.chain_file);
        if (c.n != x.frame().n())
            throw DomainError("chain n=" + std::to_string(c.n) + " does not match the system");
        if (opt.l != 0 && opt.l != c.l)
            throw DomainError("--l " + std::to_string(opt.l) + " does not match the chain (l=" +
                              std::to_string(c.l) + ")");
        sys.chains.push_back(std::move(c));
    } else if (opt.l != 0) {
        std::erase_if(sys.chains, [&](const ChainSpec& c) { return c.l != opt.l; });
    }
    if (!sys.x0 && sys.chains.empty()) throw DomainError("system has neither x0 nor chains");

    int status = kPass;
    const Polynomial div = divergence(x);
    rep.section("system", "system " + opt.file);
    rep.field("n", std::to_string(x.frame().n()));
    rep.field("field", field_text(x));
    rep.field("divergence", div.to_canonical());
    rep.field("t", format_real(cfg.t_final));
    rep.field("dt", format_real(cfg.dt));
    rep.field("steps", std::to_string(cfg.steps()));
    if (sys.x0) {
        const TangentPath path = tangent_flow(x, *sys.x0, cfg, false);
        rep.section("trajectory", "trajectory from x0");
        const auto names = x.frame().coordinate_names();
        for (int g = 0; g < x.frame().dimension(); ++g)
            rep.field("final." + names[g], format_real(path.states.back()[g]));
        rep.field("det_j_final", format_real(determinant(path.jacobians.back(),
                                                         x.frame().dimension())));
        rep.field("exp_int_trace", format_real(std::exp(path.log_volume.back())));
        rep.field("max_det_defect", format_real(path.max_det_defect));
        rep.field("blow_up", yes_no(path.status == FlowStatus::blow_up));
        if (path.blow_up_time) rep.field("blow_up_time", format_real(*path.blow_up_time));
        if (path.status == FlowStatus::blow_up) {
            status = kNumericalFailure;
        } else if (div.is_zero()) {
            const bool ok = path.max_det_defect < kDriftBudget;
            rep.field("status", ok ? "pass" : "fail");
            if (!ok) status = kNumericalFailure;
        }
    }
    for (std::size_t i = 0; i < sys.chains.size(); ++i) {
        const int k = opt.k != 0 ? opt.k : sys.chains[i].l;
        status = worst(status, conservation(rep, x, sys.chains[i], k, cfg,
                                            "chain" + std::to_string(i + 1)));
    }
    return status;
}

int chain(const std::string& file, int l, Report& rep) {
    const ChainSpec c = load_chain(file);
    if (l != 0 && l != c.l)
        throw DomainError("--l " + std::to_string(l) + " does not match the chain (l=" +
                          std::to_string(c.l) + ")");
    const Frame frame(c.n);
    const ChainIntegral r = chain_integral(frame, c.chain, c.l);
    rep.section("chain", "(1/l!) int omega^l over " + file);
    rep.field("l", std::to_string(c.l));
    rep.field("patches", std::to_string(c.chain.size()));
    rep.field("value", format_real(r.value));
    rep.field("degenerate", yes_no(r.degenerate));
    return kPass;
}

namespace {

using Detail = std::vector<std::pair<std::string, std::string>>;

struct Check {
    std::string name;
    std::function<bool(Detail&)> run;
};

// Random antisymmetric two-form data with small rational coefficients.
TwoFormData random_two_form(const Frame& f, int degree, std::mt19937& rng) {
    const int n = f.n();
    const int vars = f.dimension();
    std::uniform_int_distribution<int> coef(-3, 3), den(1, 3), exp(0, degree), terms(0, 3);
    auto poly = [&] {
        Polynomial p(vars);
        const int t = terms(rng);
        for (int i = 0; i < t; ++i) {
            std::vector<int> e(vars, 0);
            int budget = exp(rng);
            while (budget-- > 0) ++e[std::uniform_int_distribution<int>(0, vars - 1)(rng)];
            p += Polynomial::monomial(vars, Rational(coef(rng), den(rng)), e);
        }
        return p;
    };
    TwoFormData d(f);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            d.a[i][j] = poly();
            if (i < j) {
                d.q[i][j] = poly();
                d.q[j][i] = -d.q[i][j];
                d.p[i][j] = poly();
                d.p[j][i] = -d.p[i][j];
            }
        }
    return d;
}

std::size_t binomial(int n, int k) {
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

Polynomial harmonic_oscillator(const Frame& f) {
    Polynomial h(f.dimension());
    for (int g = 0; g < f.dimension(); ++g) {
        const Polynomial x = coordinate(f, g);
        h += Rational(1, 2) * (x * x);
    }
    return h;
}

std::vector<Check> paper_checks(const std::string& data_dir) {
    std::vector<Check> checks;
    checks.push_back({"sl2", [](Detail& d) {
        bool ok = true;
        for (int n = 1; n <= 4; ++n) {
            for (int k = 1; k <= n; ++k) ok = ok && commutator_check(n, k).passed();
            const Frame f(n);
            ok = ok && op_f(omega<Rational>(f)) == ConstForm::scalar(f, Rational(n));
        }
        d.emplace_back("n_max", "4");
        return ok;
    }});
    checks.push_back({"injectivity", [](Detail& d) {
        bool ok = true;
        for (int n = 1; n <= 4; ++n) {
            for (int k = 1; k <= n; ++k) ok = ok && contraction_rank(n, k) == std::size_t(2 * n);
            for (int k = 0; k <= n - 2; ++k) ok = ok && iota_rank(n, k) == binomial(2 * n, 2);
        }
        d.emplace_back("n_max", "4");
        return ok;
    }});
    checks.push_back({"nilmanifold", [data_dir](Detail& d) {
        const CEComplex cx = build_complex(load_algebra(data_dir + "/nilm6.alg"));
        const Frame& f = cx.frame();
        auto th = [&](int i) { return ConstForm::generator(f, i - 1); };
        const ConstForm& F = cx.algebra().symplectic_form();
        const ConstForm rel = wedge(F, th(1)) -
                              cx.differential(wedge(th(2), th(5)) + wedge(th(3), th(6)));
        const std::size_t b1 = betti(cx, 1), b2 = betti(cx, 2);
        const std::size_t e1 = el_dim(cx, 1), e2 = el_dim(cx, 2);
        d.emplace_back("betti1", std::to_string(b1));
        d.emplace_back("betti2", std::to_string(b2));
        d.emplace_back("el_dim1", std::to_string(e1));
        d.emplace_back("el_dim2", std::to_string(e2));
        return cx.is_closed(F) && !power(F, 3).is_zero() && rel.is_zero() && b1 == 3 &&
               b2 == 4 && e1 == 3 && e2 < e1 && e2 == el_dim_from_fields(cx, 2);
    }});
    checks.push_back({"torus", [data_dir](Detail& d) {
        const CEComplex cx = build_complex(load_algebra(data_dir + "/torus6.alg"));
        bool ok = true;
        std::vector<std::size_t> b;
        for (int m = 0; m <= 6; ++m) {
            b.push_back(betti(cx, m));
            ok = ok && b.back() == binomial(6, m);
        }
        const std::size_t e2 = el_dim(cx, 2), h3 = harmonic_dim(cx, 3);
        d.emplace_back("betti", join(b));
        d.emplace_back("el_dim2", std::to_string(e2));
        d.emplace_back("harmonic3", std::to_string(h3));
        return ok && e2 == 6 && e2 < b[3] && h3 == b[3];
    }});
    checks.push_back({"canonical_equations", [](Detail& d) {
        bool ok = true;
        for (int n = 2; n <= 3; ++n) {
            const Frame f(n);
            const Polynomial h = harmonic_oscillator(f);
            TwoFormData alpha(f);
            for (int i = 0; i < n; ++i) alpha.a[i][i] = Rational(1, n - 1) * h;
            ok = ok && vector_from_two_form(alpha) == hamiltonian_field(f, h);
        }
        d.emplace_back("n", "2 3");
        return ok;
    }});
    checks.push_back({"volume_identity", [](Detail& d) {
        std::mt19937 rng(20240607);
        int count = 0;
        bool ok = true;
        for (int n = 2; n <= 3; ++n) {
            const Frame f(n);
            for (int i = 0; i < 50; ++i, ++count) {
                const TwoFormData alpha = random_two_form(f, 3, rng);
                const PolyVectorField x = vector_from_two_form(alpha);
                ok = ok && volume_identity_defect(alpha, x).is_zero() && divergence(x).is_zero();
            }
        }
        d.emplace_back("samples", std::to_string(count));
        return ok;
    }});
    checks.push_back({"coupled_oscillators", [](Detail& d) {
        const LinearSystemSpec sys = coupled_oscillators(1, 2, 1);
        const bool symplectic = liouville::classify(sys.field, 1).symplectic_like;
        const bool div_free = divergence(sys.field).is_zero();
        const TangentPath p =
            tangent_flow(sys.field, {0.3L, -0.2L, 0.1L, 0.5L}, FlowConfig{10, 1e-3L}, false);
        d.emplace_back("symplectic", yes_no(symplectic));
        d.emplace_back("divergence_free", yes_no(div_free));
        d.emplace_back("max_det_defect", format_real(p.max_det_defect));
        return !symplectic && div_free && p.status == FlowStatus::ok &&
               p.max_det_defect < kDriftBudget;
    }});
    checks.push_back({"area_laws", [](Detail& d) {
        const Frame f(2);
        const PolyVectorField xh = hamiltonian_field(f, harmonic_oscillator(f));
        const PolyVectorField xc = coupled_oscillators(1, 2, 1).field;
        const FlowConfig cfg{2, 1e-3L};
        auto unit = [&](int g) {
            State e(4, 0);
            e[g] = 1;
            return e;
        };
        const State origin(4, 0);
        const Chain square{ChainPatch::affine(origin, {unit(f.q(0)), unit(f.p(0))})};
        const Chain cube{ChainPatch::affine(
            origin, {unit(f.q(0)), unit(f.p(0)), unit(f.q(1)), unit(f.p(1))})};
        const auto h1 = verify_area_preservation(xh, square, 1, 1, cfg);
        const auto h2 = verify_area_preservation(xh, cube, 2, 2, cfg);
        const auto c1 = verify_area_preservation(xc, square, 1, 1, cfg);
        const auto c2 = verify_area_preservation(xc, cube, 2, 2, cfg);
        d.emplace_back("hamiltonian.l1.rel_drift", format_real(h1.rel_drift));
        d.emplace_back("hamiltonian.l2.rel_drift", format_real(h2.rel_drift));
        d.emplace_back("coupled.l1.hypothesis", c1.hypothesis);
        d.emplace_back("coupled.l1.rel_drift", format_real(c1.rel_drift));
        d.emplace_back("coupled.l2.rel_drift", format_real(c2.rel_drift));
        return h1.hypothesis_met && h1.rel_drift < kDriftBudget && h2.hypothesis_met &&
               h2.rel_drift < kDriftBudget && !c1.hypothesis_met && c2.hypothesis_met &&
               c2.rel_drift < kDriftBudget;
    }});
    return checks;
}

} // namespace

int paper_verify(const std::string& data_dir, Report& rep) {
    const auto checks = paper_checks(data_dir);
    struct Outcome {
        bool ok = false;
        Detail detail;
        std::string error;
        bool input_error = false;
    };
    std::vector<std::future<Outcome>> jobs;
    for (const auto& c : checks)
        jobs.push_back(std::async(std::launch::async, [&c] {
            Outcome o;
            try {
                o.ok = c.run(o.detail);
            } catch (const ParseError& e) {
                o.error = e.what();
                o.input_error = true;
            } catch (const std::exception& e) {
                o.error = e.what();
            }
            return o;
        }));
    bool all = true;
    bool input_error = false;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        Outcome o = jobs[i].get();
        rep.section(checks[i].name, checks[i].name);
        for (const auto& [k, v] : o.detail) rep.field(k, v);
        if (!o.error.empty()) rep.field("error", o.error);
        rep.field("status", o.ok ? "pass" : "fail");
        all = all && o.ok;
        input_error = input_error || o.input_error;
    }
    rep.section("summary", "summary");
    rep.field("status", all ? "pass" : "fail");
    if (input_error) return kInputError;
    return all ? kPass : kNumericalFailure;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact and numerical checks for symplectic vector fields"};
    app.require_subcommand(1, 1);
    std::string format = "text";
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "machine"}))
        ->capture_default_str();

    int n = 1;
    auto* sl2 = app.add_subcommand("sl2-check", "Check the sl(2) relations on all blades");
    sl2->add_option("--n", n, "Half dimension (1..4)")->required()->check(CLI::Range(1, 4));

    std::string file;
    bool want_betti = false, want_el = false, want_harm = false;
    auto* coh = app.add_subcommand("cohomology", "Cohomology of a Lie algebra file");
    coh->add_option("file", file)->required();
    coh->add_flag("--betti", want_betti, "Betti numbers");
    coh->add_flag("--el", want_el, "Euler-Lagrange cohomology dimensions");
    coh->add_flag("--harmonic", want_harm, "Symplectically harmonic dimensions");

    int k = 1;
    auto* cls = app.add_subcommand("classify", "Classify a vector field");
    cls->add_option("file", file)->required();
    cls->add_option("--k", k, "Degree index k")->required();

    auto* ftf = app.add_subcommand("from-two-form", "Vector field of a two-form");
    ftf->add_option("file", file)->required();

    FlowOptions fo;
    double t = 1, dt = 1e-3;
    auto* flw = app.add_subcommand("flow", "Integrate a system and check conservation laws");
    flw->add_option("file", fo.file)->required();
    flw->add_option("--t", t, "Final time")->required();
    flw->add_option("--dt", dt, "Step size")->required();
    flw->add_option("--chain", fo.chain_file, "Chain file");
    flw->add_option("--l", fo.l, "Half degree of the chain");
    flw->add_option("--k", fo.k, "Degree index k for the hypothesis (default l)");

    int l = 0;
    auto* chn = app.add_subcommand("chain", "Integrate (1/l!) omega^l over a chain");
    chn->add_option("file", file)->required();
    chn->add_option("--l", l, "Half degree");

    std::string data_dir = LIOUVILLE_DATA_DIR;
    auto* pv = app.add_subcommand("paper-verify", "Run the bundled verification suite");
    pv->add_option("--data", data_dir, "Directory with the bundled inputs")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kInputError;
    }

    Report rep;
    int status = kPass;
    try {
        if (*sl2) status = sl2_check(n, rep);
        else if (*coh) status = cohomology(file, want_betti, want_el, want_harm, rep);
        else if (*cls) status = classify(file, k, rep);
        else if (*ftf) status = from_two_form(file, rep);
        else if (*flw) {
            fo.t = t;
            fo.dt = dt;
            status = flow(fo, rep);
        } else if (*chn) status = chain(file, l, rep);
        else if (*pv) status = paper_verify(data_dir, rep);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        err << "internal check failed: " << e.what() << '\n';
        return kNumericalFailure;
    }
    rep.print(out, format == "machine" ? Format::machine : Format::text);
    return status;
}

} // namespace liouville::cli
