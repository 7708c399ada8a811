#include "torflat/io.hpp"

#include "torflat/errors.hpp"

#include <cmath>
#include <limits>

namespace torflat::io {

namespace {

[[noreturn]] void schema(const std::string& msg) { throw SchemaError(msg); }

template <class F> auto guarded(const char* what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        schema(std::string(what) + ": " + e.what());
    }
}

const json& required(const json& j, const char* key) {
    if (!j.is_object())
        schema(std::string("expected an object with key '") + key + "'");
    auto it = j.find(key);
    if (it == j.end())
        schema(std::string("missing key '") + key + "'");
    return *it;
}

const json& array_at(const json& j, const char* key) {
    const json& a = required(j, key);
    if (!a.is_array())
        schema(std::string("'") + key + "' must be an array");
    return a;
}

/// The one non-rational field among the elements, if any.
class FieldScope {
  public:
    void add(const NFElem& x) {
        if (x.is_rational())
            return;
        if (!field_)
            field_ = x.field();
        else if (!same_field(field_, x.field()))
            fail(ErrorCode::FieldMismatch, "document mixes two number fields");
    }
    void add(const Poly& p) {
        for (const auto& [m, c] : p.terms())
            add(c);
    }
    void add(const Series& s) {
        for (const auto& [k, c] : s.terms())
            add(c);
    }
    void add(const ParamPtr& ps) {
        if (ps)
            for (const auto& c : ps->constraints())
                add(c);
    }
    void add(const Vec& v) {
        for (const auto& x : v)
            add(x);
    }
    void add(const PuiseuxBranch& b) {
        for (const auto& c : b.coords) {
            add(c);
            add(c.params());
        }
        add(b.params);
    }
    const FieldPtr& field() const { return field_; }
    void write(json& j) const {
        if (field_)
            j["field"] = field_to_json(field_);
    }

  private:
    FieldPtr field_;
};

FieldPtr field_in(const json& j, const FieldPtr& context) {
    auto it = j.find("field");
    if (it == j.end() || it->is_null())
        return context;
    return field_from_json(*it);
}

std::vector<std::string> names_from_json(const json& j) {
    std::vector<std::string> out;
    if (!j.is_array())
        schema("names must be an array of strings");
    for (const auto& n : j) {
        if (!n.is_string())
            schema("names must be strings");
        out.push_back(n.get<std::string>());
    }
    return out;
}

json params_json(const ParamPtr& ps, json& into) {
    json names = json::array(), cons = json::array();
    if (ps) {
        for (const auto& n : ps->names())
            names.push_back(n);
        for (const auto& c : ps->constraints())
            cons.push_back(poly_to_json(c));
    }
    into["params"] = names;
    into["constraints"] = cons;
    return into;
}

ParamPtr params_from(const json& j, const FieldPtr& field, std::uint64_t seed) {
    std::vector<std::string> names;
    if (j.contains("params"))
        names = names_from_json(j["params"]);
    std::vector<Poly> cons;
    if (j.contains("constraints"))
        for (const auto& c : array_at(j, "constraints"))
            cons.push_back(poly_from_json(c, static_cast<int>(names.size()), field, names));
    if (names.empty()) {
        if (!cons.empty())
            schema("constraints given without parameters");
        return no_parameters();
    }
    return std::make_shared<const ParameterSystem>(names, cons, seed);
}

json poly_list(const std::vector<Poly>& ps) {
    json a = json::array();
    for (const auto& p : ps)
        a.push_back(poly_to_json(p));
    return a;
}

std::vector<Poly> polys_from(const json& a, int nvars, const FieldPtr& f, const std::vector<std::string>& names) {
    if (!a.is_array())
        schema("expected an array of polynomials");
    std::vector<Poly> out;
    for (const auto& p : a)
        out.push_back(poly_from_json(p, nvars, f, names));
    return out;
}

json vec_json(const Vec& v) {
    json a = json::array();
    for (const auto& x : v)
        a.push_back(elem_to_json(x));
    return a;
}

Vec vec_from(const json& a, const FieldPtr& f) {
    if (!a.is_array())
        schema("expected an array of field elements");
    Vec v;
    for (const auto& x : a)
        v.push_back(elem_from_json(x, f));
    return v;
}

json opt_rational(const std::optional<Rational>& q) { return q ? to_json(*q) : json(nullptr); }

std::optional<Rational> opt_rational_from(const json& j) {
    if (j.is_null())
        return std::nullopt;
    return rational_from_json(j);
}

PuiseuxBranch branch_with(const json& j, const FieldPtr& context, const ParamPtr& given, std::uint64_t seed) {
    FieldPtr f = field_in(j, context);
    ParamPtr ps = given ? given : params_from(j, f, seed);
    const std::vector<std::string>& names = ps->names();
    const json& e_j = required(j, "ramification");
    if (!e_j.is_number_integer() || e_j.get<long>() < 1)
        schema("ramification must be a positive integer");
    const int e = e_j.get<int>();
    const json& coords = array_at(j, "coords");
    std::vector<std::optional<Rational>> truncs(coords.size());
    if (j.contains("truncations")) {
        const json& t = array_at(j, "truncations");
        if (t.size() != coords.size())
            schema("'truncations' must have one entry per coordinate");
        for (std::size_t i = 0; i < t.size(); ++i)
            truncs[i] = opt_rational_from(t[i]);
    } else if (j.contains("truncation")) {
        auto t = opt_rational_from(j["truncation"]);
        for (auto& x : truncs)
            x = t;
    }
    std::vector<Series> out;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (!coords[i].is_array())
            schema("each coordinate must be an array of terms");
        std::map<long, Poly> terms;
        for (const auto& t : coords[i]) {
            Rational q = rational_from_json(required(t, "exp"));
            Rational key = q * e;
            if (key.get_den() != 1 || !key.get_num().fits_slong_p())
                schema("exponent " + format_rational(q) + " is not a multiple of 1/ramification");
            Poly c = poly_from_json(required(t, "coeff"), ps->size(), f, names);
            auto [it, fresh] = terms.try_emplace(key.get_num().get_si(), c);
            if (!fresh)
                it->second += c;
        }
        out.push_back(Series::from_terms(ps, e, std::move(terms), truncs[i]));
    }
    int mult = 1;
    if (j.contains("multiplicity"))
        mult = j["multiplicity"].get<int>();
    return PuiseuxBranch(std::move(out), ps, mult);
}

json subtorus_json(const Subtorus& t) {
    json basis = json::array();
    for (const auto& row : t.lattice_basis) {
        json r = json::array();
        for (const auto& x : row)
            r.push_back(x.get_str());
        basis.push_back(r);
    }
    return json{{"component", t.component}, {"dim", t.dim}, {"lattice_basis", basis}};
}

json point_json(const PointRecord& p) {
    return json{{"id", p.id},
                {"source", p.source},
                {"radius", to_json(p.radius)},
                {"folded", p.folded},
                {"nearest", p.nearest},
                {"distance", {{"lo", to_json(p.distance.lo)}, {"hi", to_json(p.distance.hi)}}}};
}

PointRecord point_from(const json& j) {
    PointRecord p;
    p.id = required(j, "id").get<long>();
    p.source = required(j, "source").get<std::string>();
    p.radius = rational_from_json(required(j, "radius"));
    p.folded = required(j, "folded").get<std::vector<double>>();
    p.nearest = required(j, "nearest").get<std::string>();
    const json& d = required(j, "distance");
    p.distance = Interval(rational_from_json(required(d, "lo")), rational_from_json(required(d, "hi")));
    return p;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double double_or_inf(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

json version_tag(const char* kind) { return json{{"v", kVersion}, {"kind", kind}}; }

void check_version(const json& j) {
    if (!j.is_object())
        schema("document must be a JSON object");
    auto it = j.find("v");
    if (it != j.end() && (!it->is_string() || it->get<std::string>() != kVersion))
        schema("unsupported schema version");
}

} // namespace

// --------------------------------------------------------------- scalars

json to_json(const Rational& q) { return format_rational(q); }

Rational rational_from_json(const json& j) {
    if (j.is_number_integer())
        return Rational(Integer(j.get<long>()));
    if (!j.is_string())
        schema("rational must be a \"p/q\" string");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const std::exception&) {
        schema("malformed rational '" + j.get<std::string>() + "'");
    }
}

json field_to_json(const FieldPtr& f) {
    json mp = json::array();
    for (const auto& c : f->min_poly().c)
        mp.push_back(to_json(c));
    Complex r = f->root_approx();
    return json{{"min_poly", mp}, {"root_hint", {{"re", r.real()}, {"im", r.imag()}}}};
}

FieldPtr field_from_json(const json& j) {
    return guarded("field", [&] {
        std::vector<Rational> c;
        for (const auto& x : array_at(j, "min_poly"))
            c.push_back(rational_from_json(x));
        const json& h = required(j, "root_hint");
        Complex hint(required(h, "re").get<double>(), required(h, "im").get<double>());
        if (c.size() == 2 && c[1] == 1 && c[0] == 0)
            return NumberField::rationals();
        return NumberField::create(QPoly(c), hint);
    });
}

json elem_to_json(const NFElem& x) {
    json a = json::array();
    if (x.is_rational()) {
        a.push_back(to_json(x.rational_value()));
        return a;
    }
    for (const auto& c : x.coeffs())
        a.push_back(to_json(c));
    return a;
}

NFElem elem_from_json(const json& j, const FieldPtr& field) {
    if (j.is_string() || j.is_number_integer())
        return NFElem(rational_from_json(j));
    if (!j.is_array() || j.empty())
        schema("field element must be a non-empty coefficient list");
    std::vector<Rational> c;
    for (const auto& x : j)
        c.push_back(rational_from_json(x));
    if (c.size() == 1)
        return NFElem(c[0]);
    if (!field || static_cast<int>(c.size()) != field->degree())
        schema("coefficient list does not match the field degree");
    return NFElem(field, c);
}

json poly_to_json(const Poly& p) {
    json a = json::array();
    for (const auto& [m, c] : p.terms())
        a.push_back(json{{"mono", m}, {"coeff", elem_to_json(c)}});
    return a;
}

Poly poly_from_json(const json& j, int nvars, const FieldPtr& field, const std::vector<std::string>& names) {
    return guarded("polynomial", [&] {
        if (j.is_string()) {
            if (static_cast<int>(names.size()) != nvars)
                schema("expression polynomial needs named variables");
            try {
                return parse_poly(j.get<std::string>(), names, field);
            } catch (const std::exception& e) {
                schema(std::string("cannot parse polynomial: ") + e.what());
            }
        }
        if (!j.is_array())
            schema("polynomial must be a list of terms or an expression string");
        Poly p(nvars);
        for (const auto& t : j) {
            Monomial m = required(t, "mono").get<Monomial>();
            if (static_cast<int>(m.size()) != nvars)
                schema("monomial has the wrong number of exponents");
            for (int e : m)
                if (e < 0)
                    schema("negative exponent in a polynomial");
            p.add_term(m, elem_from_json(required(t, "coeff"), field));
        }
        return p;
    });
}

// ------------------------------------------------------- linear algebra

json lattice_to_json(const Lattice& l) {
    json basis = json::array();
    for (const auto& row : l.basis()) {
        json r = json::array();
        for (const auto& x : row)
            r.push_back(to_json(x));
        basis.push_back(r);
    }
    return json{{"dim", l.dim()}, {"basis", basis}};
}

Lattice lattice_from_json(const json& j) {
    return guarded("lattice", [&] {
        if (j.is_object() && j.contains("standard"))
            return Lattice::standard(j["standard"].get<int>());
        const int n = required(j, "dim").get<int>();
        const json& b = array_at(j, "basis");
        if (static_cast<int>(b.size()) != n || n < 1)
            schema("lattice basis must be dim x dim");
        RatMat m;
        for (const auto& row : b) {
            if (!row.is_array() || static_cast<int>(row.size()) != n)
                schema("lattice basis must be dim x dim");
            std::vector<Rational> r;
            for (const auto& x : row)
                r.push_back(rational_from_json(x));
            m.push_back(r);
        }
        return Lattice(m);
    });
}

json subspace_to_json(const Subspace& s) {
    const bool complex = s.mode() == ScalarMode::Complex;
    Mat rows = complex ? s.complex_basis() : s.basis();
    FieldScope scope;
    json basis = json::array();
    for (const auto& v : rows) {
        scope.add(v);
        basis.push_back(vec_json(v));
    }
    json j{{"mode", to_string(s.mode())}, {"dim", complex ? s.ambient() / 2 : s.ambient()}, {"basis", basis}};
    scope.write(j);
    return j;
}

Subspace subspace_from_json(const json& j, const FieldPtr& context) {
    return guarded("subspace", [&] {
        ScalarMode mode = mode_from_json(required(j, "mode"));
        FieldPtr f = field_in(j, context);
        const int n = required(j, "dim").get<int>();
        if (n < 1)
            schema("subspace dim must be positive");
        Mat rows;
        for (const auto& v : array_at(j, "basis")) {
            Vec x = vec_from(v, f);
            if (static_cast<int>(x.size()) != n)
                schema("subspace basis vector has the wrong length");
            rows.push_back(x);
        }
        return mode == ScalarMode::Complex ? Subspace::complex_span(n, rows) : Subspace::span(n, mode, rows);
    });
}

ScalarMode mode_from_json(const json& j) {
    if (j == "real")
        return ScalarMode::Real;
    if (j == "complex")
        return ScalarMode::Complex;
    schema("mode must be \"real\" or \"complex\"");
}

// --------------------------------------------------------------- branches

json branch_to_json(const PuiseuxBranch& b) {
    std::vector<Series> coords = unify(b.coords);
    ParamPtr ps = b.params ? b.params : no_parameters();
    for (const auto& c : coords)
        if (c.params())
            ps = common_parameters(ps, c.params());
    FieldScope scope;
    scope.add(b);
    json j;
    j["ramification"] = coords.empty() ? 1 : coords[0].ramification();
    j["truncation"] = opt_rational(b.truncation());
    json truncs = json::array(), cs = json::array();
    for (const auto& c : coords) {
        truncs.push_back(opt_rational(c.truncation()));
        json terms = json::array();
        for (const auto& [k, p] : c.terms())
            terms.push_back(json{{"exp", to_json(c.exponent(k))}, {"coeff", poly_to_json(p)}});
        cs.push_back(terms);
    }
    j["truncations"] = truncs;
    j["coords"] = cs;
    if (b.multiplicity != 1)
        j["multiplicity"] = b.multiplicity;
    params_json(ps, j);
    scope.write(j);
    return j;
}

PuiseuxBranch branch_from_json(const json& j, const FieldPtr& context, std::uint64_t seed) {
    return guarded("branch", [&] { return branch_with(j, context, nullptr, seed); });
}

json bundle_to_json(const BranchBundle& b) {
    json j = version_tag("branch_bundle");
    j["variables"] = b.variables;
    FieldScope scope;
    scope.add(b.curve);
    scope.write(j);
    j["curve"] = poly_to_json(b.curve);
    j["order"] = to_json(b.order);
    json bs = json::array();
    for (const auto& br : b.branches)
        bs.push_back(branch_to_json(br));
    j["branches"] = bs;
    return j;
}

BranchBundle bundle_from_json(const json& j, std::uint64_t seed) {
    return guarded("branch bundle", [&] {
        check_version(j);
        BranchBundle b;
        b.variables = names_from_json(required(j, "variables"));
        FieldPtr f = field_in(j, nullptr);
        b.curve = poly_from_json(required(j, "curve"), static_cast<int>(b.variables.size()), f, b.variables);
        b.order = rational_from_json(required(j, "order"));
        if (j.contains("branches"))
            for (const auto& br : array_at(j, "branches"))
                b.branches.push_back(branch_from_json(br, f, seed));
        return b;
    });
}

json flat_to_json(const AsymptoticFlat& f) {
    FieldScope scope;
    json j;
    j["mode"] = to_string(f.mode);
    for (const auto& p : f.base)
        scope.add(p);
    j["base"] = poly_list(f.base);
    json dirs = json::array(), exps = json::array();
    for (const auto& d : f.dirs) {
        for (const auto& p : d)
            scope.add(p);
        dirs.push_back(poly_list(d));
    }
    for (const auto& q : f.exponents)
        exps.push_back(to_json(q));
    j["dirs"] = dirs;
    j["exponents"] = exps;
    j["dim"] = f.dim;
    scope.add(f.params);
    scope.add(f.source);
    params_json(f.params, j);
    scope.write(j);
    j["source"] = branch_to_json(f.source);
    j["source"].erase("field");
    return j;
}

AsymptoticFlat flat_from_json(const json& j, const FieldPtr& context, std::uint64_t seed) {
    return guarded("flat", [&] {
        AsymptoticFlat f;
        FieldPtr fld = field_in(j, context);
        f.mode = mode_from_json(required(j, "mode"));
        f.params = params_from(j, fld, seed);
        const int k = f.params->size();
        const auto& names = f.params->names();
        f.base = polys_from(required(j, "base"), k, fld, names);
        for (const auto& d : array_at(j, "dirs")) {
            auto v = polys_from(d, k, fld, names);
            if (v.size() != f.base.size())
                schema("flat direction has the wrong length");
            f.dirs.push_back(std::move(v));
        }
        for (const auto& q : array_at(j, "exponents"))
            f.exponents.push_back(rational_from_json(q));
        if (f.exponents.size() != f.dirs.size())
            schema("one exponent per direction generator is required");
        f.dim = required(j, "dim").get<int>();
        if (j.contains("source"))
            f.source = branch_with(j["source"], fld, f.params, seed);
        return f;
    });
}

// ---------------------------------------------------------------- closure

json closure_input_to_json(const ClosureInput& in) {
    json j = version_tag("closure_input");
    FieldScope scope;
    for (const auto& p : in.variety)
        scope.add(p);
    for (const auto& fam : in.families)
        for (const auto& b : fam.branches)
            scope.add(b);
    scope.write(j);
    j["variables"] = in.variables;
    j["variety"] = poly_list(in.variety);
    j["lattice"] = lattice_to_json(in.lattice);
    j["mode"] = to_string(in.mode);
    j["dim_x"] = in.dim_x;
    json fams = json::array();
    for (const auto& fam : in.families) {
        json bs = json::array();
        for (const auto& b : fam.branches) {
            json bj = branch_to_json(b);
            bj.erase("field");
            bs.push_back(bj);
        }
        fams.push_back(json{{"name", fam.name}, {"branches", bs}});
    }
    j["families"] = fams;
    return j;
}

ClosureInput closure_input_from_json(const json& j, std::uint64_t seed) {
    return guarded("closure input", [&] {
        check_version(j);
        ClosureInput in;
        FieldPtr f = field_in(j, nullptr);
        if (j.contains("variables"))
            in.variables = names_from_json(j["variables"]);
        if (j.contains("variety"))
            in.variety = polys_from(j["variety"], static_cast<int>(in.variables.size()), f, in.variables);
        in.lattice = lattice_from_json(required(j, "lattice"));
        in.mode = j.contains("mode") ? mode_from_json(j["mode"]) : ScalarMode::Complex;
        in.dim_x = j.contains("dim_x") ? j["dim_x"].get<int>() : 1;
        for (const auto& fam : array_at(j, "families")) {
            BranchFamily bf;
            bf.name = required(fam, "name").get<std::string>();
            ParamPtr shared;
            for (const auto& b : array_at(fam, "branches")) {
                PuiseuxBranch br = branch_with(b, f, shared, seed);
                if (!shared && br.params && br.params->size() > 0)
                    shared = br.params;
                bf.branches.push_back(std::move(br));
            }
            if (bf.branches.empty())
                schema("family '" + bf.name + "' has no branches");
            in.families.push_back(std::move(bf));
        }
        return in;
    });
}

std::vector<FlatFamily> flat_families(const ClosureInput& in) {
    std::vector<FlatFamily> out;
    for (const auto& fam : in.families) {
        FlatFamily f{fam.name, {}};
        for (const auto& b : fam.branches)
            f.members.push_back(flat_of_branch(b, in.mode));
        out.push_back(std::move(f));
    }
    return out;
}

json closure_to_json(const ClosureDocument& d) {
    const ClosureDescription& desc = d.description;
    json j = version_tag("closure");
    FieldScope scope;
    for (const auto& p : desc.variety)
        scope.add(p);
    scope.write(j);
    j["variables"] = desc.variables;
    j["variety"] = poly_list(desc.variety);
    j["lattice"] = lattice_to_json(desc.lattice);
    j["mode"] = to_string(desc.mode);
    json comps = json::array();
    for (const auto& c : desc.components) {
        FieldScope cs;
        cs.add(c.c.params);
        json points = json::array();
        for (const auto& pt : c.c.points) {
            for (const auto& p : pt)
                cs.add(p);
            points.push_back(poly_list(pt));
        }
        json cj{{"base", points}};
        params_json(c.c.params ? c.c.params : no_parameters(), cj);
        cs.write(cj);
        comps.push_back(json{{"family", c.family},
                             {"V", subspace_to_json(c.v)},
                             {"V_lambda", subspace_to_json(c.v_lambda)},
                             {"C", cj},
                             {"maximal", c.maximal},
                             {"span_certified", c.span_certified}});
    }
    j["components"] = comps;
    json entries = json::array();
    for (const auto& e : d.clauses.entries)
        entries.push_back(json{{"component", e.component},
                               {"dim_C", e.dim_c},
                               {"dim_ok", e.dim_ok},
                               {"maximal", e.maximal},
                               {"finite", e.finite},
                               {"finite_ok", e.finite_ok}});
    j["clause_report"] = json{{"dim_x", d.clauses.dim_x}, {"entries", entries}, {"all_ok", d.clauses.all_ok()}};
    json tori = json::array();
    for (const auto& t : d.tori)
        tori.push_back(subtorus_json(t));
    j["tori"] = tori;
    j["notes"] = desc.notes;
    return j;
}

ClosureDocument closure_from_json(const json& j, std::uint64_t seed) {
    return guarded("closure", [&] {
        check_version(j);
        ClosureDocument d;
        ClosureDescription& desc = d.description;
        FieldPtr f = field_in(j, nullptr);
        desc.variables = names_from_json(required(j, "variables"));
        desc.variety = polys_from(required(j, "variety"), static_cast<int>(desc.variables.size()), f, desc.variables);
        desc.lattice = lattice_from_json(required(j, "lattice"));
        desc.mode = mode_from_json(required(j, "mode"));
        for (const auto& cj : array_at(j, "components")) {
            ClosureComponent c;
            c.family = required(cj, "family").get<std::string>();
            c.v = subspace_from_json(required(cj, "V"), f);
            c.v_lambda = subspace_from_json(required(cj, "V_lambda"), f);
            const json& cc = required(cj, "C");
            FieldPtr cf = field_in(cc, f);
            c.c.params = params_from(cc, cf, seed);
            for (const auto& pt : array_at(cc, "base"))
                c.c.points.push_back(polys_from(pt, c.c.params->size(), cf, c.c.params->names()));
            c.maximal = required(cj, "maximal").get<bool>();
            c.span_certified = cj.value("span_certified", false);
            desc.components.push_back(std::move(c));
        }
        if (j.contains("notes"))
            desc.notes = j["notes"].get<std::vector<std::string>>();
        if (j.contains("clause_report")) {
            const json& r = j["clause_report"];
            d.clauses.dim_x = required(r, "dim_x").get<int>();
            for (const auto& e : array_at(r, "entries")) {
                ClauseEntry ce;
                ce.component = required(e, "component").get<int>();
                ce.dim_c = required(e, "dim_C").get<int>();
                ce.dim_ok = required(e, "dim_ok").get<bool>();
                ce.maximal = required(e, "maximal").get<bool>();
                ce.finite = required(e, "finite").get<bool>();
                ce.finite_ok = required(e, "finite_ok").get<bool>();
                d.clauses.entries.push_back(ce);
            }
        }
        if (j.contains("tori"))
            for (const auto& tj : array_at(j, "tori")) {
                Subtorus t;
                t.component = required(tj, "component").get<int>();
                t.dim = required(tj, "dim").get<int>();
                for (const auto& row : array_at(tj, "lattice_basis")) {
                    std::vector<Integer> r;
                    for (const auto& x : row) {
                        Rational q = rational_from_json(x);
                        if (q.get_den() != 1)
                            schema("subtorus basis entries must be integers");
                        r.push_back(q.get_num());
                    }
                    t.lattice_basis.push_back(r);
                }
                if (t.component >= 0 && t.component < static_cast<int>(desc.components.size()))
                    t.c = desc.components[t.component].c;
                d.tori.push_back(std::move(t));
            }
        return d;
    });
}

// ----------------------------------------------------------------- reports

json report_to_json(const VerificationReport& r) {
    json j = version_tag("verification_report");
    j["test"] = r.kind;
    j["tol"] = to_json(r.tol);
    json radii = json::array();
    for (const auto& x : r.radii)
        radii.push_back(to_json(x));
    j["radii"] = radii;
    j["threshold"] = to_json(r.threshold);
    j["samples"] = r.samples;
    j["pass"] = r.pass;
    json comps = json::array();
    for (const auto& c : r.components)
        comps.push_back(json{{"name", c.name}, {"hits", c.hits}, {"max_upper", finite_or_null(c.max_upper)}});
    j["components"] = comps;
    json pts = json::array(), fails = json::array();
    for (const auto& p : r.points)
        pts.push_back(point_json(p));
    for (const auto& p : r.failures)
        fails.push_back(point_json(p));
    j["points"] = pts;
    j["failures"] = fails;
    json probes = json::array();
    for (const auto& [pt, d] : r.probes)
        probes.push_back(json{{"point", pt}, {"min_distance", finite_or_null(d)}});
    j["density"] = json{{"samples", r.density_samples},
                        {"grid_cells", r.grid_cells},
                        {"covered_cells", r.covered_cells},
                        {"max_distance_to_target", finite_or_null(r.max_distance_to_target)},
                        {"target_dim", r.target_dim},
                        {"probes", probes}};
    return j;
}

VerificationReport report_from_json(const json& j) {
    return guarded("verification report", [&] {
        check_version(j);
        VerificationReport r;
        r.kind = required(j, "test").get<std::string>();
        r.tol = rational_from_json(required(j, "tol"));
        for (const auto& x : array_at(j, "radii"))
            r.radii.push_back(rational_from_json(x));
        r.threshold = rational_from_json(required(j, "threshold"));
        r.samples = required(j, "samples").get<long>();
        r.pass = required(j, "pass").get<bool>();
        for (const auto& c : array_at(j, "components"))
            r.components.push_back({required(c, "name").get<std::string>(), required(c, "hits").get<long>(),
                                    double_or_inf(required(c, "max_upper"))});
        for (const auto& p : array_at(j, "points"))
            r.points.push_back(point_from(p));
        for (const auto& p : array_at(j, "failures"))
            r.failures.push_back(point_from(p));
        const json& d = required(j, "density");
        r.density_samples = required(d, "samples").get<long>();
        r.grid_cells = required(d, "grid_cells").get<long>();
        r.covered_cells = required(d, "covered_cells").get<long>();
        r.max_distance_to_target = double_or_inf(required(d, "max_distance_to_target"));
        r.target_dim = required(d, "target_dim").get<int>();
        for (const auto& p : array_at(d, "probes"))
            r.probes.emplace_back(required(p, "point").get<std::vector<double>>(),
                                  double_or_inf(required(p, "min_distance")));
        return r;
    });
}

json error_to_json(const std::string& code, const std::string& message, int exit_code) {
    json j = version_tag("error");
    j["error"] = json{{"code", code}, {"message", message}, {"exit", exit_code}};
    return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace torflat::io
