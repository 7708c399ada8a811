#include "torflat/errors.hpp"
#include "torflat/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace torflat;
using io::json;

namespace {

struct Options {
    std::string input;
    std::string output;
    std::string csv;
    std::uint64_t seed = 1;
    long precision_bits = 64;
    std::string truncation;
    std::string tol;
    long samples = 0;
    std::string radius_schedule;
    std::string threshold;
    std::vector<std::string> omit;
};

json read_input(const std::string& arg) {
    if (arg.empty())
        throw SchemaError("--input is required");
    if (arg.front() == '{' || arg.front() == '[')
        return json::parse(arg);
    std::ifstream in(arg);
    if (!in)
        throw SchemaError("cannot open input '" + arg + "'");
    return json::parse(in);
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw SchemaError(std::string("missing key '") + key + "'");
    return j.at(key);
}

std::vector<Rational> parse_schedule(const std::string& s) {
    std::vector<Rational> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(io::rational_from_json(item));
    if (out.empty())
        throw SchemaError("empty radius schedule");
    return out;
}

json cmd_saturate(const json& in, const Options&) {
    Lattice l = io::lattice_from_json(field(in, "lattice"));
    Subspace h = io::subspace_from_json(field(in, "subspace"));
    json out = io::subspace_to_json(lambda_saturate(h, l));
    out["v"] = io::kVersion;
    out["kind"] = "subspace";
    return out;
}

json cmd_branches(const json& in, const Options& o) {
    json doc = in;
    if (!doc.contains("order") && o.truncation.empty())
        throw SchemaError("missing key 'order'");
    if (!o.truncation.empty())
        doc["order"] = o.truncation;
    io::BranchBundle b = io::bundle_from_json(doc, o.seed);
    if (b.variables.size() != 2)
        fail(ErrorCode::PreconditionFailed, "branches are computed for plane curves only");
    b.branches = newton_puiseux_at_infinity(b.curve, b.order, o.seed);
    return io::bundle_to_json(b);
}

json cmd_flat(const json& in, const Options& o) {
    io::BranchBundle b = io::bundle_from_json(in, o.seed);
    ScalarMode mode = in.contains("mode") ? io::mode_from_json(in["mode"]) : ScalarMode::Complex;
    json flats = json::array(), bounded = json::array();
    for (const auto& br : b.branches) {
        flats.push_back(io::flat_to_json(flat_of_branch(br, mode)));
        bounded.push_back(is_bounded(br));
    }
    return json{{"v", io::kVersion}, {"kind", "flats"}, {"flats", flats}, {"bounded", bounded}};
}

io::ClosureDocument closure_of(const io::ClosureInput& in) {
    io::ClosureDocument d;
    d.description = assemble_closure(io::flat_families(in), in.lattice, in.variety, in.variables);
    d.clauses = clause_checks(d.description, in.dim_x);
    d.tori = torus_description(d.description);
    return d;
}

json cmd_closure(const json& in, const Options& o) {
    return io::closure_to_json(closure_of(io::closure_input_from_json(in, o.seed)));
}

VerificationReport attraction_job(const json& in, const Options& o) {
    io::ClosureInput ci = io::closure_input_from_json(in, o.seed);
    io::ClosureDocument d = closure_of(ci);
    std::vector<FoldedComponent> comps;
    for (const auto& c : d.description.components)
        if (std::find(o.omit.begin(), o.omit.end(), c.family) == o.omit.end())
            comps.push_back(FoldedComponent::of(c, ci.lattice, ci.mode));
    std::vector<SampledBranch> branches;
    for (const auto& f : ci.families)
        for (const auto& b : f.branches)
            branches.push_back({f.name, b});
    AttractionOptions opt;
    if (!o.tol.empty())
        opt.tol = io::rational_from_json(o.tol);
    if (!o.radius_schedule.empty())
        opt.radii = parse_schedule(o.radius_schedule);
    if (!o.threshold.empty())
        opt.threshold = io::rational_from_json(o.threshold);
    if (o.samples > 0)
        opt.points_per_radius = static_cast<int>(o.samples);
    opt.precision_bits = o.precision_bits;
    return attraction_test(branches, comps, ci.lattice, ci.mode, opt);
}

VerificationReport density_job(const json& in, const Options& o) {
    Lattice l = io::lattice_from_json(field(in, "lattice"));
    Subspace v = io::subspace_from_json(field(in, "subspace"));
    DensityOptions opt;
    opt.seed = o.seed;
    if (in.contains("epsilon"))
        opt.epsilon = io::rational_from_json(in["epsilon"]).get_d();
    if (!o.tol.empty())
        opt.epsilon = io::rational_from_json(o.tol).get_d();
    if (o.samples > 0)
        opt.max_samples = o.samples;
    if (in.contains("probes"))
        for (const auto& p : in["probes"]) {
            std::vector<double> pt;
            for (const auto& x : p)
                pt.push_back(io::rational_from_json(x).get_d());
            if (static_cast<int>(pt.size()) != l.dim())
                throw SchemaError("probe has the wrong dimension");
            opt.probes.push_back(pt);
        }
    return density_test(v, l, opt);
}

json cmd_verify(const json& in, const Options& o) {
    const std::string kind = in.is_object() && in.contains("kind") ? in["kind"].get<std::string>() : "";
    VerificationReport r;
    if (kind == "closure_input" || (kind.empty() && in.contains("families")))
        r = attraction_job(in, o);
    else if (kind == "density_input" || (kind.empty() && in.contains("subspace")))
        r = density_job(in, o);
    else
        throw SchemaError("verify expects a closure_input or density_input document");
    std::string csv = o.csv;
    if (csv.empty() && !o.output.empty() && o.output != "-") {
        csv = o.output;
        auto dot = csv.rfind('.');
        csv = (dot == std::string::npos ? csv : csv.substr(0, dot)) + ".csv";
    }
    if (!csv.empty()) {
        std::ostringstream os;
        write_csv(r, os);
        write_text(csv, os.str());
    }
    return io::report_to_json(r);
}

int report_error(const std::string& code, const std::string& msg, int exit_code) {
    std::cout << io::dump(io::error_to_json(code, msg, exit_code));
    std::cerr << "torflat: " << msg << "\n";
    return exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closures of lattice translates of algebraic varieties"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--input,-i", o.input, "input JSON file or inline document")->required();
        sub->add_option("--output,-o", o.output, "output JSON file (stdout by default)");
        sub->add_option("--seed", o.seed, "seed for every randomized step");
        sub->add_option("--precision-bits", o.precision_bits, "initial interval precision");
    };
    auto* sat = app.add_subcommand("saturate", "Lambda-saturation of a subspace");
    auto* br = app.add_subcommand("branches", "Puiseux branches at infinity of a plane curve");
    auto* fl = app.add_subcommand("flat", "asymptotic flat of each branch in a bundle");
    auto* cl = app.add_subcommand("closure", "components of the closure of X + Lambda");
    auto* ve = app.add_subcommand("verify", "numerical attraction or density test");
    for (auto* s : {sat, br, fl, cl, ve})
        add_common(s);
    br->add_option("--truncation", o.truncation, "residual order, e.g. 6 or 7/2");
    ve->add_option("--tol", o.tol, "distance tolerance (attraction) or epsilon (density)");
    ve->add_option("--samples", o.samples, "points per radius (attraction) or max samples (density)");
    ve->add_option("--radius-schedule", o.radius_schedule, "comma-separated radii, e.g. 100,1000,10000");
    ve->add_option("--threshold", o.threshold, "radius from which distances must be within tol");
    ve->add_option("--omit", o.omit, "component families left out of the prediction");
    ve->add_option("--csv", o.csv, "CSV point cloud path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        json in = read_input(o.input);
        json out;
        if (*sat)
            out = cmd_saturate(in, o);
        else if (*br)
            out = cmd_branches(in, o);
        else if (*fl)
            out = cmd_flat(in, o);
        else if (*cl)
            out = cmd_closure(in, o);
        else
            out = cmd_verify(in, o);
        write_text(o.output, io::dump(out));
        return 0;
    } catch (const SchemaError& e) {
        return report_error(std::string(to_string(ErrorCode::Schema)), e.what(), 2);
    } catch (const json::exception& e) {
        return report_error(std::string(to_string(ErrorCode::Schema)), e.what(), 2);
    } catch (const MathError& e) {
        return report_error(std::string(to_string(e.code())), e.what(), 3);
    } catch (const InvariantError& e) {
        return report_error(std::string(to_string(ErrorCode::Internal)), e.what(), 4);
    } catch (const std::exception& e) {
        return report_error(std::string(to_string(ErrorCode::Internal)), e.what(), 4);
    }
}
