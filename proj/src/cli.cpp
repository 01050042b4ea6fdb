#include "ks/cli.hpp"

#include "ks/errors.hpp"
#include "ks/io.hpp"
#include "ks/plot.hpp"
#include "ks/sphere_geom.hpp"
#include "ks/witness.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

#ifndef KS_DEFAULT_DATA_DIR
#define KS_DEFAULT_DATA_DIR "data"
#endif

namespace ks::cli {

namespace fs = std::filesystem;

fs::path data_dir() {
    if (const char* env = std::getenv("KS_DATA_DIR"); env != nullptr && *env != '\0') return env;
    return KS_DEFAULT_DATA_DIR;
}

fs::path resolve_input(const std::string& name) {
    const fs::path given(name);
    if (fs::exists(given)) return given;
    if (given.has_parent_path()) return given;
    fs::path file = given;
    if (file.extension() != ".json") file += ".json";
    for (const fs::path& dir : {data_dir(), data_dir() / "oracles"}) {
        if (fs::exists(dir / file)) return dir / file;
    }
    return given;
}

double parse_angle(const std::string& text, const std::string& what) {
    for (const char* marker : {"deg", "DEG", "Deg", "\xC2\xB0"}) {
        if (text.find(marker) != std::string::npos) {
            throw ParseError(what + ": angles are radians only, got '" + text + "'");
        }
    }
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ParseError(what + ": not a number: '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(value)) throw ParseError(what + ": not a number: '" + text + "'");
    return value;
}

std::string format_fixed(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", x);
    std::string s = buf;
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

namespace {

io::Json load_document(const std::string& arg) {
    if (!arg.empty() && arg.front() == '{') {
        try {
            return io::Json::parse(arg);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("inline JSON: ") + e.what());
        }
    }
    return io::read_json_file(resolve_input(arg));
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") out << text;
    else io::write_text_file(path, text);
}

struct CheckSetArgs {
    std::string set;
    bool bases = false;
    std::size_t count = 0;
    std::string output;
};

int cmd_check_set(const CheckSetArgs& a, std::ostream& out) {
    const RaySet rs = io::parse_ray_set(load_document(a.set));
    const io::CheckSetOutcome res = io::check_ray_set(rs, {a.bases, a.count});
    emit(io::dump(res.report), a.output, out);
    return res.colorable ? kOk : kUncolorable;
}

struct WitnessArgs {
    std::string spec;
    std::uint64_t seed = 0;
    std::size_t budget = WitnessConfig{}.max_descent_probes;
    std::size_t meridians = WitnessConfig{}.meridian_samples;
    std::size_t latitudes = WitnessConfig{}.latitude_samples;
    double resolution = WitnessConfig{}.bisection_resolution;
    bool antipodal_first = false;
    bool no_evaluations = false;
    std::string output;
};

int cmd_witness(const WitnessArgs& a, std::ostream& out) {
    const io::Json spec = load_document(a.spec);
    const auto oracle = io::parse_oracle(spec);
    WitnessConfig cfg;
    cfg.rng_seed = a.seed;
    cfg.max_descent_probes = a.budget;
    cfg.meridian_samples = a.meridians;
    cfg.latitude_samples = a.latitudes;
    cfg.bisection_resolution = a.resolution;
    cfg.antipodal_first = a.antipodal_first;
    validate(cfg);

    const WitnessReport report = extract_witness(*oracle, cfg);
    const bool verified = report.found() && certificate_holds(*oracle, report);
    if (report.found() && !verified) throw Error("certificate failed re-verification");

    io::Json doc;
    doc["schema"] = io::kSchemaVersion;
    doc["command"] = "witness";
    doc["oracle"] = spec;
    doc["config"] = io::witness_config_to_json(cfg);
    doc["verified"] = verified;
    const io::Json body = io::witness_report_to_json(report, {!a.no_evaluations});
    for (const auto& [k, v] : body.items()) doc[k] = v;
    emit(io::dump(doc), a.output, out);
    return report.found() ? kOk : kWitnessNotFound;
}

struct GeomArgs {
    std::string theta_p;
    std::string phi_p = "0";
    std::string phi;
    std::string theta_q;
    int zig = 1;
};

int cmd_geom(const std::string& which, const GeomArgs& a, std::ostream& out) {
    const double theta_p = parse_angle(a.theta_p, "--theta-p");
    if (which == "delta-phi") {
        out << format_fixed(two_step_delta_phi(theta_p, parse_angle(a.theta_q, "--theta-q"))) << '\n';
        return kOk;
    }
    const SphPoint p = SphPoint::make(theta_p, parse_angle(a.phi_p, "--phi-p"));
    if (which == "descend") {
        out << format_fixed(descent_theta(DescentCircle(p), parse_angle(a.phi, "--phi"))) << '\n';
    } else if (which == "chain") {
        if (a.zig != 1 && a.zig != -1) throw DomainError("--zig must be 1 or -1");
        const TwoStepChain c = two_step_chain(p, parse_angle(a.theta_q, "--theta-q"), a.zig);
        out << "delta_phi " << format_fixed(c.delta_phi) << '\n';
        out << "r " << format_fixed(c.r.theta()) << ' ' << format_fixed(c.r.phi()) << '\n';
        out << "q " << format_fixed(c.q.theta()) << ' ' << format_fixed(c.q.phi()) << '\n';
    } else if (which == "crossings") {
        const auto [s1, s2] = equator_crossings(DescentCircle(p));
        for (const UnitVec3& s : {s1, s2}) {
            out << format_fixed(s.x()) << ' ' << format_fixed(s.y()) << ' ' << format_fixed(s.z()) << '\n';
        }
    }
    return kOk;
}

struct PlotArgs {
    std::string figure;
    std::string oracle;
    std::string out;
    std::string format = "csv";
    std::size_t n_theta = 90;
    std::size_t n_phi = 180;
    std::size_t points = 361;
    std::string theta_p, phi_p, theta_q, theta_star, phi_star, width;
};

int cmd_plot(PlotArgs& a, std::ostream& out, std::ostream& err) {
    plot::FigureParams prm;
    prm.n_theta = a.n_theta;
    prm.n_phi = a.n_phi;
    prm.curve_points = a.points;
    const std::pair<const char*, const std::string*> named[] = {
        {"theta_p", &a.theta_p},       {"phi_p", &a.phi_p},       {"theta_q", &a.theta_q},
        {"theta_star", &a.theta_star}, {"phi_star", &a.phi_star}, {"width", &a.width}};
    for (const auto& [key, value] : named) {
        if (!value->empty()) prm.values[key] = parse_angle(*value, key);
    }

    plot::Figure fig;
    if (!a.oracle.empty()) {
        if (!a.figure.empty() && a.figure != "oracle") {
            err << "error: give either a figure name or --oracle, not both\n";
            return kInputError;
        }
        const auto v = io::parse_oracle(load_document(a.oracle));
        fig = plot::oracle_figure("oracle", *v, prm);
    } else {
        if (a.figure.empty()) {
            err << "error: a figure name or --oracle is required\n";
            return kInputError;
        }
        fig = plot::make_figure(a.figure, prm);
    }
    emit(a.format == "svg" ? plot::to_svg(fig) : plot::to_csv(fig), a.out, out);
    return kOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kochen-Specker toolkit: finite set checks, witness extraction, sphere geometry"};
    app.name(args.empty() ? "kstool" : args.front());
    app.require_subcommand(1);

    CheckSetArgs cs;
    auto* check = app.add_subcommand("check-set", "Decide {0,1}-colorability of a ray set");
    check->add_option("set", cs.set, "Ray set JSON file, or a name in the data directory")->required();
    check->add_flag("--bases", cs.bases, "Include the basis list in the report");
    check->add_option("--count", cs.count, "Also count valuations, stopping at this many");
    check->add_option("-o,--output", cs.output, "Write the report here instead of stdout");

    WitnessArgs wa;
    auto* witness = app.add_subcommand("witness", "Extract a certificate that an oracle is not a valuation");
    witness->add_option("spec", wa.spec, "Oracle spec JSON file, name, or inline JSON")->required();
    witness->add_option("--seed", wa.seed, "Seed for the sampling offsets");
    witness->add_option("--budget", wa.budget, "Maximum number of oracle evaluations");
    witness->add_option("--meridians", wa.meridians, "Meridian samples");
    witness->add_option("--latitudes", wa.latitudes, "Latitude samples");
    witness->add_option("--resolution", wa.resolution, "Bisection resolution in radians");
    witness->add_flag("--antipodal-first", wa.antipodal_first, "Report antipodal mismatches immediately");
    witness->add_flag("--no-evaluations", wa.no_evaluations, "Omit per-step evaluations from the trace");
    witness->add_option("-o,--output", wa.output, "Write the report here instead of stdout");

    GeomArgs ga;
    auto* geom = app.add_subcommand("geom", "Descent-circle geometry (angles in radians)");
    geom->require_subcommand(1);
    auto* descend = geom->add_subcommand("descend", "Latitude of C(p) at longitude phi");
    descend->add_option("--theta-p", ga.theta_p)->required();
    descend->add_option("--phi-p", ga.phi_p);
    descend->add_option("--phi", ga.phi)->required();
    auto* dphi = geom->add_subcommand("delta-phi", "Zig azimuth of the two-step descent");
    dphi->add_option("--theta-p", ga.theta_p)->required();
    dphi->add_option("--theta-q", ga.theta_q)->required();
    auto* chain = geom->add_subcommand("chain", "Two-step chain p -> r -> q");
    chain->add_option("--theta-p", ga.theta_p)->required();
    chain->add_option("--phi-p", ga.phi_p);
    chain->add_option("--theta-q", ga.theta_q)->required();
    chain->add_option("--zig", ga.zig, "Side of the zig, 1 or -1");
    auto* crossings = geom->add_subcommand("crossings", "Equator crossings of C(p)");
    crossings->add_option("--theta-p", ga.theta_p)->required();
    crossings->add_option("--phi-p", ga.phi_p);

    PlotArgs pa;
    auto* plt = app.add_subcommand("plot", "Emit figure data as CSV or SVG");
    plt->add_option("figure", pa.figure, "One of: " + [] {
        std::string names;
        for (const auto& n : plot::figure_names()) names += (names.empty() ? "" : ", ") + n;
        return names;
    }());
    plt->add_option("--oracle", pa.oracle, "Plot an oracle spec instead of a named figure");
    plt->add_option("-o,--out", pa.out, "Output file (stdout if omitted)");
    plt->add_option("--format", pa.format)->check(CLI::IsMember({"csv", "svg"}));
    plt->add_option("--n-theta", pa.n_theta, "Latitude cells");
    plt->add_option("--n-phi", pa.n_phi, "Longitude cells");
    plt->add_option("--points", pa.points, "Points per curve");
    plt->add_option("--theta-p", pa.theta_p);
    plt->add_option("--phi-p", pa.phi_p);
    plt->add_option("--theta-q", pa.theta_q);
    plt->add_option("--theta-star", pa.theta_star);
    plt->add_option("--phi-star", pa.phi_star);
    plt->add_option("--width", pa.width, "Width of the ones interval for the longitudes figure");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    if (args.empty()) argv.push_back("kstool");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (check->parsed()) return cmd_check_set(cs, out);
        if (witness->parsed()) return cmd_witness(wa, out);
        if (plt->parsed()) return cmd_plot(pa, out, err);
        for (auto* sub : {descend, dphi, chain, crossings}) {
            if (sub->parsed()) return cmd_geom(sub->get_name(), ga, out);
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const DuplicateRay& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const NotABasis& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const Error& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kInputError;
}

} // namespace ks::cli
