#include "ks/io.hpp"

#include "ks/errors.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace ks::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw ParseError(what); }

void require_keys(const Json& doc, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!doc.is_object()) bad(where + ": expected a JSON object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : doc.items()) {
        if (ok.count(key)) continue;
        if (key.find("deg") != std::string::npos) {
            bad(where + ": key '" + key + "' looks like a degree value; angles are radians only");
        }
        bad(where + ": unknown key '" + key + "'");
    }
}

void check_schema(const Json& doc) {
    if (doc.contains("schema") && doc["schema"] != kSchemaVersion) {
        bad("unsupported schema version " + doc["schema"].dump());
    }
}

const Json& field(const Json& doc, const char* key, const std::string& where) {
    if (!doc.contains(key)) bad(where + ": missing '" + key + "'");
    return doc[key];
}

double number(const Json& v, const std::string& what) {
    if (!v.is_number()) bad(what + " must be a number (radians for angles)");
    return v.get<double>();
}

std::int64_t integer(const Json& v, const std::string& what) {
    if (!v.is_number_integer()) bad(what + " must be an integer");
    return v.get<std::int64_t>();
}

Vec3 vec3(const Json& v, const std::string& what) {
    if (!v.is_array() || v.size() != 3) bad(what + " must be an array of 3 numbers");
    return {number(v[0], what), number(v[1], what), number(v[2], what)};
}

RationalSurd coordinate(const Json& v, const std::string& what) {
    if (v.is_number_integer()) return RationalSurd{v.get<std::int64_t>(), 1, 0, 1};
    if (v.is_string()) return parse_surd(v.get<std::string>());
    bad(what + " must be an integer or a string like \"1/2\" or \"sqrt2\"");
}

} // namespace

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return Json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

// ---------------------------------------------------------------------------

RaySet parse_ray_set(const Json& doc) {
    const std::string where = "ray set";
    require_keys(doc, where, {"schema", "name", "dimension", "vectors", "bases", "provenance"});
    check_schema(doc);
    RaySet rs;
    const Json& name = field(doc, "name", where);
    if (!name.is_string()) bad("ray set: 'name' must be a string");
    rs.name = name.get<std::string>();
    const std::int64_t d = integer(field(doc, "dimension", where), "ray set: 'dimension'");
    if (d < 2) bad("ray set: 'dimension' must be at least 2");
    rs.dimension = static_cast<std::size_t>(d);
    if (doc.contains("provenance")) {
        if (!doc["provenance"].is_string()) bad("ray set: 'provenance' must be a string");
        rs.provenance = doc["provenance"].get<std::string>();
    }

    const Json& vectors = field(doc, "vectors", where);
    if (!vectors.is_array() || vectors.empty()) bad("ray set: 'vectors' must be a nonempty array");
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const Json& row = vectors[i];
        const std::string what = "ray set: vector " + std::to_string(i);
        if (!row.is_array()) bad(what + " must be an array");
        if (row.size() != rs.dimension) {
            bad(what + " has " + std::to_string(row.size()) + " entries, expected " + std::to_string(rs.dimension));
        }
        std::vector<RationalSurd> parsed;
        for (const Json& c : row) parsed.push_back(coordinate(c, what));
        rs.rays.push_back(clear_denominators(parsed));
    }

    if (doc.contains("bases")) {
        const Json& bases = doc["bases"];
        if (!bases.is_array()) bad("ray set: 'bases' must be an array");
        BasisList list;
        for (std::size_t b = 0; b < bases.size(); ++b) {
            const std::string what = "ray set: basis " + std::to_string(b);
            if (!bases[b].is_array()) bad(what + " must be an array");
            Basis basis;
            for (const Json& idx : bases[b]) {
                const std::int64_t k = integer(idx, what + " index");
                if (k < 0 || static_cast<std::size_t>(k) >= rs.rays.size()) bad(what + ": index out of range");
                basis.push_back(static_cast<std::size_t>(k));
            }
            list.push_back(std::move(basis));
        }
        rs.bases = std::move(list);
    }
    try {
        validate(rs);
    } catch (const DomainError& e) {
        bad(std::string("ray set: ") + e.what());
    }
    return rs;
}

Json ray_set_to_json(const RaySet& rs) {
    Json doc;
    doc["schema"] = kSchemaVersion;
    doc["name"] = rs.name;
    doc["dimension"] = rs.dimension;
    Json vectors = Json::array();
    for (const Ray& r : rs.rays) {
        Json row = Json::array();
        for (const Surd& s : r) {
            if (s.b == 0) row.push_back(s.a);
            else row.push_back(s.to_string());
        }
        vectors.push_back(std::move(row));
    }
    doc["vectors"] = std::move(vectors);
    if (rs.bases) doc["bases"] = *rs.bases;
    doc["provenance"] = rs.provenance;
    return doc;
}

Json coloring_to_json(const ColoringResult& result) {
    Json doc;
    doc["outcome"] = result.colorable ? "colorable" : "uncolorable";
    if (result.colorable) doc["assignment"] = result.assignment;
    doc["solver"] = {{"nodes", result.stats.nodes},
                     {"backtracks", result.stats.backtracks},
                     {"propagations", result.stats.propagations}};
    return doc;
}

CheckSetOutcome check_ray_set(const RaySet& rs, const CheckSetOptions& opts) {
    const OrthoGraph g = build_ortho_graph(rs);
    const BasisList bases = resolve_bases(rs, g);
    const ColoringResult result = find_valuation(g, bases);
    const auto mult = basis_multiplicity(bases, g.size());

    Json doc;
    doc["schema"] = kSchemaVersion;
    doc["command"] = "check-set";
    doc["name"] = rs.name;
    doc["dimension"] = rs.dimension;
    doc["rays"] = g.size();
    doc["edges"] = g.edge_count();
    doc["bases"] = bases.size();
    doc["bases_source"] = rs.bases ? "supplied" : "enumerated";
    doc["basis_multiplicity"] = mult;
    doc["parity_obstruction"] = parity_obstruction(bases, g.size());
    if (opts.include_bases) doc["basis_list"] = bases;
    const Json coloring = coloring_to_json(result);
    for (const auto& [k, v] : coloring.items()) doc[k] = v;
    if (result.colorable) doc["verified"] = verify_assignment(g, bases, result.assignment);
    if (opts.count_limit > 0) {
        const std::size_t n = count_valuations(g, bases, opts.count_limit);
        doc["valuation_count"] = n;
        doc["count_limit_reached"] = n >= opts.count_limit;
    }
    doc["provenance"] = rs.provenance;
    return {std::move(doc), result.colorable};
}

// ---------------------------------------------------------------------------

Json generator_to_json(const Generator2D& g) {
    Json out = Json::array();
    for (const auto& [a, b] : g.intervals()) out.push_back({a, b});
    return out;
}

Generator2D generator_from_json(const Json& doc) {
    if (!doc.is_array()) bad("generator must be an array of [start, end] intervals");
    std::vector<Generator2D::Interval> ones;
    for (const Json& iv : doc) {
        if (!iv.is_array() || iv.size() != 2) bad("generator interval must be [start, end]");
        ones.emplace_back(number(iv[0], "generator bound"), number(iv[1], "generator bound"));
    }
    return Generator2D(std::move(ones));
}

std::shared_ptr<const Valuation3> parse_oracle(const Json& doc) {
    if (!doc.is_object()) bad("oracle spec: expected a JSON object");
    check_schema(doc);
    const Json& kind_json = field(doc, "kind", "oracle spec");
    if (!kind_json.is_string()) bad("oracle spec: 'kind' must be a string");
    const std::string kind = kind_json.get<std::string>();

    std::shared_ptr<const Valuation3> v;
    if (kind == "four_segment") {
        require_keys(doc, "four_segment", {"schema", "kind", "pole_value", "rotation", "perturbations"});
        int pole = 1;
        if (doc.contains("pole_value")) pole = static_cast<int>(integer(doc["pole_value"], "pole_value"));
        if (pole != 0 && pole != 1) bad("four_segment: 'pole_value' must be 0 or 1");
        v = std::make_shared<FourSegmentValuation>(pole);
    } else if (kind == "step_meridian") {
        require_keys(doc, "step_meridian", {"schema", "kind", "theta_star", "boundary", "rotation", "perturbations"});
        const double ts = number(field(doc, "theta_star", "step_meridian"), "theta_star");
        StepBoundary boundary = StepBoundary::ClosedAtStar;
        if (doc.contains("boundary")) {
            const Json& b = doc["boundary"];
            if (b == "closed") boundary = StepBoundary::ClosedAtStar;
            else if (b == "open") boundary = StepBoundary::OpenAtStar;
            else bad("step_meridian: 'boundary' must be \"closed\" or \"open\"");
        }
        v = std::make_shared<StepMeridianValuation>(ts, boundary);
    } else if (kind == "polar_cap") {
        require_keys(doc, "polar_cap", {"schema", "kind", "half_angle", "rotation", "perturbations"});
        v = std::make_shared<PolarCapValuation>(number(field(doc, "half_angle", "polar_cap"), "half_angle"));
    } else if (kind == "valuation2d_rotated") {
        require_keys(doc, "valuation2d_rotated", {"schema", "kind", "generator", "rotation", "perturbations"});
        v = std::make_shared<MeridianValuation2D>(generator_from_json(field(doc, "generator", "valuation2d_rotated")));
    } else {
        bad("oracle spec: unknown kind '" + kind + "'");
    }

    if (doc.contains("rotation")) {
        const Json& r = doc["rotation"];
        require_keys(r, "rotation", {"axis", "angle"});
        const Vec3 axis = vec3(field(r, "axis", "rotation"), "rotation axis");
        const double angle = number(field(r, "angle", "rotation"), "rotation angle");
        v = std::make_shared<RotatedValuation>(v, Rotation::axis_angle(axis, angle));
    }
    if (doc.contains("perturbations")) {
        const Json& list = doc["perturbations"];
        if (!list.is_array()) bad("oracle spec: 'perturbations' must be an array");
        for (const Json& p : list) {
            require_keys(p, "perturbation", {"type", "center", "radius", "antipodal"});
            if (field(p, "type", "perturbation") != "flip_cap") bad("perturbation: only \"flip_cap\" is supported");
            const Vec3 center = vec3(field(p, "center", "flip_cap"), "flip_cap center");
            const double radius = number(field(p, "radius", "flip_cap"), "flip_cap radius");
            bool antipodal = true;
            if (p.contains("antipodal")) {
                if (!p["antipodal"].is_boolean()) bad("flip_cap: 'antipodal' must be a boolean");
                antipodal = p["antipodal"].get<bool>();
            }
            v = std::make_shared<FlippedCapValuation>(v, UnitVec3::normalize(center), radius, antipodal);
        }
    }
    return v;
}

// ---------------------------------------------------------------------------

Json vec_to_json(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

Json witness_config_to_json(const WitnessConfig& cfg) {
    return {{"meridian_samples", cfg.meridian_samples},
            {"latitude_samples", cfg.latitude_samples},
            {"max_descent_probes", cfg.max_descent_probes},
            {"rng_seed", cfg.rng_seed},
            {"bisection_resolution", cfg.bisection_resolution},
            {"antipodal_first", cfg.antipodal_first}};
}

Json witness_report_to_json(const WitnessReport& report, const ReportOptions& opts) {
    Json doc;
    doc["found"] = report.found();
    Json outcome;
    if (const auto* vb = std::get_if<ViolatingBasis>(&report.outcome)) {
        outcome["type"] = "violating_basis";
        Json triad = Json::array();
        for (const UnitVec3& n : vb->triad.vectors()) triad.push_back(vec_to_json(n.vec()));
        outcome["triad"] = std::move(triad);
        outcome["sum"] = vb->sum;
    } else if (const auto* av = std::get_if<AntipodalViolation>(&report.outcome)) {
        outcome["type"] = "antipodal_violation";
        outcome["n"] = vec_to_json(av->n.vec());
        outcome["value"] = av->value;
        outcome["antipode_value"] = av->antipode_value;
    } else {
        outcome["type"] = "not_found";
    }
    doc["outcome"] = std::move(outcome);

    const SearchStats& s = report.stats;
    doc["stats"] = {{"evaluations", s.evaluations},
                    {"pole_samples", s.pole_samples},
                    {"meridians_classified", s.meridians_classified},
                    {"competing_meridians", s.competing_meridians},
                    {"triads_sampled", s.triads_sampled},
                    {"budget_exhausted", s.budget_exhausted}};

    Json trace = Json::array();
    for (const TraceStep& step : report.trace) {
        Json t;
        t["step"] = to_string(step.kind);
        t["note"] = step.note;
        t["evaluation_count"] = step.evaluations.size();
        if (opts.include_evaluations) {
            Json evals = Json::array();
            for (const Evaluation& e : step.evaluations) {
                evals.push_back({{"point", vec_to_json(e.point)}, {"value", e.value}});
            }
            t["evaluations"] = std::move(evals);
        }
        trace.push_back(std::move(t));
    }
    doc["trace"] = std::move(trace);
    return doc;
}

} // namespace ks::io
