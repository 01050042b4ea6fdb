#include "ks/cli.hpp"
#include "ks/errors.hpp"
#include "ks/io.hpp"
#include "ks/kssets.hpp"
#include "ks/sphere_geom.hpp"
#include "ks/witness.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;

namespace {

std::tuple<double, double, double> as_tuple(const ks::Vec3& v) { return {v.x, v.y, v.z}; }

ks::io::Json parse_text(const std::string& text) {
    try {
        return ks::io::Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ks::ParseError(e.what());
    }
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Kochen-Specker toolkit core";

    py::register_exception<ks::Error>(m, "KsError", PyExc_ValueError);

    m.def("descent_theta", [](double theta_p, double phi_p, double phi) {
        return ks::descent_theta(ks::DescentCircle(ks::SphPoint::make(theta_p, phi_p)), phi);
    }, py::arg("theta_p"), py::arg("phi_p"), py::arg("phi"));

    m.def("two_step_delta_phi", &ks::two_step_delta_phi, py::arg("theta_p"), py::arg("theta_q"));

    m.def("two_step_chain", [](double theta_p, double phi_p, double theta_q, int zig) {
        const auto c = ks::two_step_chain(ks::SphPoint::make(theta_p, phi_p), theta_q, zig);
        py::dict out;
        out["delta_phi"] = c.delta_phi;
        out["r"] = py::make_tuple(c.r.theta(), c.r.phi());
        out["q"] = py::make_tuple(c.q.theta(), c.q.phi());
        return out;
    }, py::arg("theta_p"), py::arg("phi_p"), py::arg("theta_q"), py::arg("zig") = 1);

    m.def("equator_crossings", [](double theta_p, double phi_p) {
        const auto [a, b] = ks::equator_crossings(ks::DescentCircle(ks::SphPoint::make(theta_p, phi_p)));
        return py::make_tuple(as_tuple(a), as_tuple(b));
    }, py::arg("theta_p"), py::arg("phi_p"));

    m.def("check_set_json", [](const std::string& doc, bool include_bases, std::size_t count_limit) {
        const ks::RaySet rs = ks::io::parse_ray_set(parse_text(doc));
        py::gil_scoped_release release;
        return ks::io::check_ray_set(rs, {include_bases, count_limit}).report.dump();
    }, py::arg("doc"), py::arg("include_bases") = false, py::arg("count_limit") = 0);

    m.def("witness_json", [](const std::string& spec, std::uint64_t seed, std::size_t budget,
                             bool include_evaluations) {
        const auto oracle = ks::io::parse_oracle(parse_text(spec));
        ks::WitnessConfig cfg;
        cfg.rng_seed = seed;
        cfg.max_descent_probes = budget;
        ks::validate(cfg);
        ks::WitnessReport report;
        bool verified = false;
        {
            py::gil_scoped_release release;
            report = ks::extract_witness(*oracle, cfg);
            verified = report.found() && ks::certificate_holds(*oracle, report);
        }
        ks::io::Json doc = ks::io::witness_report_to_json(report, {include_evaluations});
        doc["verified"] = verified;
        return doc.dump();
    }, py::arg("spec"), py::arg("seed") = 0, py::arg("budget") = ks::WitnessConfig{}.max_descent_probes,
       py::arg("include_evaluations") = false);

    m.def("resolve_input", [](const std::string& name) { return ks::cli::resolve_input(name).string(); },
          py::arg("name"));

    m.def("run_cli", [](std::vector<std::string> args) {
        args.insert(args.begin(), "kstool");
        std::ostringstream out;
        std::ostringstream err;
        const int code = ks::cli::run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"));
}
