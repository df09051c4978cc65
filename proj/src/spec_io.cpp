#include "liouville/spec_io.hpp"

#include "liouville/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

namespace liouville {

namespace {

class Reader {
public:
    explicit Reader(std::string name) : name_(std::move(name)) {}

    [[noreturn]] void fail(const YAML::Node& at, const std::string& what) const {
        const auto m = at.Mark();
        if (m.is_null()) throw ParseError(name_, 0, 0, what);
        throw ParseError(name_, m.line + 1, m.column + 1, what);
    }

    YAML::Node root(const std::string& text) const {
        try {
            YAML::Node n = YAML::Load(text);
            if (!n.IsMap()) throw ParseError(name_, 1, 1, "expected a mapping at top level");
            return n;
        } catch (const YAML::ParserException& e) {
            throw ParseError(name_, e.mark.line + 1, e.mark.column + 1, e.msg);
        }
    }

    YAML::Node require(const YAML::Node& map, const char* key) const {
        YAML::Node v = map[key];
        if (!v) fail(map, std::string("missing key '") + key + "'");
        return v;
    }

    void only_keys(const YAML::Node& map, std::initializer_list<const char*> keys) const {
        for (const auto& kv : map) {
            const auto k = kv.first.as<std::string>();
            bool ok = false;
            for (const char* allowed : keys) ok = ok || k == allowed;
            if (!ok) fail(kv.first, "unknown key '" + k + "'");
        }
    }

    const YAML::Node& sequence(const YAML::Node& n, const char* what) const {
        if (!n.IsSequence()) fail(n, std::string(what) + " must be a list");
        return n;
    }

    int integer(const YAML::Node& n, const char* what) const {
        if (!n.IsScalar()) fail(n, std::string(what) + " must be an integer");
        try {
            std::size_t used = 0;
            const auto s = n.Scalar();
            const int v = std::stoi(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            fail(n, std::string(what) + " must be an integer");
        }
    }

    int index(const YAML::Node& n, int count, const char* what) const {
        const int v = integer(n, what);
        if (v < 1 || v > count)
            fail(n, std::string(what) + " out of range [1, " + std::to_string(count) + "]");
        return v - 1;
    }

    // Integers, decimals (read exactly) or p/q strings.
    Rational rational(const YAML::Node& n) const {
        if (!n.IsScalar()) fail(n, "expected a rational number");
        std::string s = n.Scalar();
        try {
            const auto e = s.find_first_of("eE");
            if (e != std::string::npos) fail(n, "exponent notation is not accepted: " + s);
            const auto dot = s.find('.');
            if (dot == std::string::npos) return parse_rational(s);
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            if (digits.empty() || digits == "-" || digits == "+") fail(n, "malformed number " + s);
            const std::size_t places = s.size() - dot - 1;
            Rational r = parse_rational(digits);
            mpz_class den;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, places);
            r /= Rational(den);
            r.canonicalize();
            return r;
        } catch (const std::invalid_argument& ex) {
            fail(n, ex.what());
        }
    }

    long double real(const YAML::Node& n) const { return to_long_double(rational(n)); }

    std::vector<long double> vector(const YAML::Node& n, int size, const char* what) const {
        sequence(n, what);
        if (static_cast<int>(n.size()) != size)
            fail(n, std::string(what) + " must have " + std::to_string(size) + " entries");
        std::vector<long double> v;
        for (const auto& e : n) v.push_back(real(e));
        return v;
    }

    // [[coeff, e_1, ..., e_nvars], ...]; an empty list is the zero polynomial.
    Polynomial polynomial(const YAML::Node& n, int nvars) const {
        Polynomial p(nvars);
        if (n.IsScalar()) {
            p += Polynomial(nvars, rational(n));
            return p;
        }
        sequence(n, "polynomial");
        for (const auto& term : n) {
            sequence(term, "monomial");
            if (static_cast<int>(term.size()) != nvars + 1)
                fail(term, "monomial must be [coeff, " + std::to_string(nvars) + " exponents]");
            std::vector<int> e;
            for (std::size_t i = 1; i < term.size(); ++i) {
                const int v = integer(term[i], "exponent");
                if (v < 0 || v > kMaxInputDegree) fail(term[i], "exponent out of range");
                e.push_back(v);
            }
            p += Polynomial::monomial(nvars, rational(term[0]), e);
        }
        if (p.total_degree() > kMaxInputDegree)
            fail(n, "polynomial degree exceeds " + std::to_string(kMaxInputDegree));
        return p;
    }

    Frame frame(const YAML::Node& root) const {
        const YAML::Node nn = require(root, "n");
        const int n = integer(nn, "n");
        if (n < 1 || n > kMaxHalfDimension) fail(nn, "n out of range");
        return Frame(n);
    }

    // A field given by one of: hamiltonian, Q + P component lists, or a
    // linear system matrix k (qddot = -k q).
    PolyVectorField field(const YAML::Node& root, const Frame& f) const {
        const int n = f.n();
        const int vars = f.dimension();
        const int forms = (root["hamiltonian"] ? 1 : 0) + (root["Q"] || root["P"] ? 1 : 0) +
                          (root["linear"] ? 1 : 0);
        if (forms != 1) fail(root, "give exactly one of 'hamiltonian', 'Q'/'P' or 'linear'");
        if (root["hamiltonian"])
            return hamiltonian_field(f, polynomial(root["hamiltonian"], vars));
        if (root["linear"]) {
            const YAML::Node k = sequence(root["linear"], "linear");
            if (static_cast<int>(k.size()) != n) fail(k, "linear must be an n x n matrix");
            std::vector<std::vector<Rational>> m;
            for (const auto& row : k) {
                sequence(row, "matrix row");
                if (static_cast<int>(row.size()) != n) fail(row, "linear must be an n x n matrix");
                std::vector<Rational> r;
                for (const auto& e : row) r.push_back(rational(e));
                m.push_back(std::move(r));
            }
            return build_linear_system(m).field;
        }
        std::vector<Polynomial> comps(vars, Polynomial(vars));
        for (const char* key : {"Q", "P"}) {
            const YAML::Node list = require(root, key);
            sequence(list, key);
            if (static_cast<int>(list.size()) != n)
                fail(list, std::string(key) + " must list " + std::to_string(n) + " components");
            const int offset = key[0] == 'Q' ? 0 : n;
            for (int i = 0; i < n; ++i) comps[offset + i] = polynomial(list[i], vars);
        }
        return PolyVectorField(f, std::move(comps));
    }

    // Sparse antisymmetric or general block: [[i, j, poly], ...].
    void block(const YAML::Node& list, std::vector<std::vector<Polynomial>>& m, int n, int vars,
               bool antisymmetric, const char* what) const {
        sequence(list, what);
        for (const auto& e : list) {
            sequence(e, what);
            if (e.size() != 3) fail(e, std::string(what) + " entries are [i, j, polynomial]");
            const int i = index(e[0], n, "row index");
            const int j = index(e[1], n, "column index");
            Polynomial p = polynomial(e[2], vars);
            if (antisymmetric) {
                if (i == j) fail(e, std::string(what) + " is antisymmetric; diagonal must vanish");
                m[i][j] += p;
                m[j][i] -= p;
            } else {
                m[i][j] += p;
            }
        }
    }

    ChainSpec chain(const YAML::Node& node, const Frame& f) const {
        ChainSpec spec;
        spec.n = f.n();
        const YAML::Node ln = require(node, "l");
        spec.l = integer(ln, "l");
        if (spec.l < 1 || spec.l > f.n()) fail(ln, "l must satisfy 1 <= l <= n");
        int order = 4;
        if (node["order"]) {
            order = integer(node["order"], "order");
            if (order < 1 || order > 64) fail(node["order"], "order must be in [1, 64]");
        }
        const YAML::Node patches = sequence(require(node, "patches"), "patches");
        if (patches.size() == 0) fail(patches, "a chain needs at least one patch");
        const int dim = f.dimension();
        const int vars = 2 * spec.l;
        for (const auto& pn : patches) {
            if (!pn.IsMap()) fail(pn, "patch must be a mapping");
            only_keys(pn, {"sign", "origin", "edges", "map"});
            ChainPatch patch;
            if (pn["map"]) {
                if (pn["origin"] || pn["edges"]) fail(pn, "use either 'map' or 'origin'/'edges'");
                const YAML::Node m = sequence(pn["map"], "map");
                if (static_cast<int>(m.size()) != dim)
                    fail(m, "map needs one polynomial per coordinate");
                patch.l = spec.l;
                for (const auto& c : m) patch.map.push_back(polynomial(c, vars));
            } else {
                const auto origin = vector(require(pn, "origin"), dim, "origin");
                const YAML::Node en = sequence(require(pn, "edges"), "edges");
                if (static_cast<int>(en.size()) != vars)
                    fail(en, "edges must list 2l vectors");
                std::vector<State> edges;
                for (const auto& e : en) edges.push_back(vector(e, dim, "edge"));
                patch = ChainPatch::affine(origin, edges);
            }
            patch.order = order;
            if (pn["sign"]) {
                patch.sign = integer(pn["sign"], "sign");
                if (patch.sign != 1 && patch.sign != -1) fail(pn["sign"], "sign must be 1 or -1");
            }
            spec.chain.push_back(std::move(patch));
        }
        return spec;
    }

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, 0, 0, "cannot open file");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Library validation errors are reported against the file without a position.
template <class F>
auto guarded(const std::string& name, F&& f) {
    try {
        return f();
    } catch (const ParseError&) {
        throw;
    } catch (const YAML::Exception& e) {
        throw ParseError(name, e.mark.line + 1, e.mark.column + 1, e.msg);
    } catch (const Error& e) {
        throw ParseError(name, 0, 0, e.what());
    }
}

} // namespace

LieAlgebraPresentation parse_algebra(const std::string& text, const std::string& name) {
    return guarded(name, [&] {
        Reader r(name);
        const YAML::Node root = r.root(text);
        r.only_keys(root, {"name", "dim", "structure", "omega"});
        const YAML::Node dn = r.require(root, "dim");
        const int dim = r.integer(dn, "dim");
        if (dim < 2 || dim % 2 != 0 || dim > kMaxVariables)
            r.fail(dn, "dim must be even and in [2, " + std::to_string(kMaxVariables) + "]");
        std::vector<StructureConstant> sc;
        if (root["structure"]) {
            for (const auto& e : r.sequence(root["structure"], "structure")) {
                r.sequence(e, "structure entry");
                if (e.size() != 4) r.fail(e, "structure entries are [i, j, k, c]");
                const int i = r.index(e[0], dim, "i");
                const int j = r.index(e[1], dim, "j");
                const int k = r.index(e[2], dim, "k");
                if (i == j) r.fail(e, "structure entry needs i != j");
                sc.push_back({i, j, k, r.rational(e[3])});
            }
        }
        const Frame frame(dim / 2, Frame::Labels::theta);
        ConstForm w(frame);
        for (const auto& e : r.sequence(r.require(root, "omega"), "omega")) {
            r.sequence(e, "omega entry");
            if (e.size() != 3) r.fail(e, "omega entries are [i, j, c]");
            const int i = r.index(e[0], dim, "i");
            const int j = r.index(e[1], dim, "j");
            if (i == j) r.fail(e, "omega entry needs i != j");
            w += r.rational(e[2]) * wedge(ConstForm::generator(frame, i),
                                          ConstForm::generator(frame, j));
        }
        const std::string label = root["name"] ? root["name"].as<std::string>() : name;
        return LieAlgebraPresentation(label, dim, std::move(sc), std::move(w));
    });
}

PolyVectorField parse_field(const std::string& text, const std::string& name) {
    return guarded(name, [&] {
        Reader r(name);
        const YAML::Node root = r.root(text);
        r.only_keys(root, {"n", "hamiltonian", "Q", "P", "linear"});
        return r.field(root, r.frame(root));
    });
}

TwoFormData parse_two_form(const std::string& text, const std::string& name) {
    return guarded(name, [&] {
        Reader r(name);
        const YAML::Node root = r.root(text);
        r.only_keys(root, {"n", "Q", "A", "P"});
        const Frame f = r.frame(root);
        TwoFormData data(f);
        const int n = f.n();
        const int vars = f.dimension();
        if (root["Q"]) r.block(root["Q"], data.q, n, vars, true, "Q");
        if (root["A"]) r.block(root["A"], data.a, n, vars, false, "A");
        if (root["P"]) r.block(root["P"], data.p, n, vars, true, "P");
        data.validate();
        if (data.total_degree() > kMaxInputDegree)
            r.fail(root, "two-form degree exceeds " + std::to_string(kMaxInputDegree));
        return data;
    });
}

SystemSpec parse_system(const std::string& text, const std::string& name) {
    return guarded(name, [&] {
        Reader r(name);
        const YAML::Node root = r.root(text);
        r.only_keys(root, {"n", "hamiltonian", "Q", "P", "linear", "x0", "chains"});
        const Frame f = r.frame(root);
        SystemSpec spec{r.field(root, f), std::nullopt, {}};
        if (root["x0"]) spec.x0 = r.vector(root["x0"], f.dimension(), "x0");
        if (root["chains"])
            for (const auto& c : r.sequence(root["chains"], "chains")) {
                if (!c.IsMap()) r.fail(c, "chain must be a mapping");
                r.only_keys(c, {"l", "order", "patches"});
                spec.chains.push_back(r.chain(c, f));
            }
        return spec;
    });
}

ChainSpec parse_chain(const std::string& text, const std::string& name) {
    return guarded(name, [&] {
        Reader r(name);
        const YAML::Node root = r.root(text);
        r.only_keys(root, {"n", "l", "order", "patches"});
        return r.chain(root, r.frame(root));
    });
}

LieAlgebraPresentation load_algebra(const std::string& path) {
    return parse_algebra(slurp(path), path);
}
PolyVectorField load_field(const std::string& path) { return parse_field(slurp(path), path); }
TwoFormData load_two_form(const std::string& path) { return parse_two_form(slurp(path), path); }
SystemSpec load_system(const std::string& path) { return parse_system(slurp(path), path); }
ChainSpec load_chain(const std::string& path) { return parse_chain(slurp(path), path); }

} // namespace liouville
