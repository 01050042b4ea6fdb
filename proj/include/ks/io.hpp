#pragma once

// JSON documents read and written by the command line tool. Every emitted
// document carries "schema": 1 and uses insertion-ordered keys, so equal
// inputs give byte-identical output.

#include "ks/kssets.hpp"
#include "ks/valuation.hpp"
#include "ks/witness.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace ks::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Reads and parses a file. Throws IoError if it cannot be read and
/// ParseError if it is not JSON.
Json read_json_file(const std::filesystem::path& path);

/// Two-space indented with a trailing newline.
std::string dump(const Json& doc);

/// Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& text);

// ---------------------------------------------------------------------------
// Ray sets

/// { "name", "dimension", "vectors", "bases"?, "provenance"? }. Coordinates
/// are integers or strings such as "1/2" or "-sqrt2". Throws ParseError.
RaySet parse_ray_set(const Json& doc);

Json ray_set_to_json(const RaySet& rs);

struct CheckSetOptions {
    bool include_bases = false;
    /// Also count valuations, up to this many; 0 disables counting.
    std::size_t count_limit = 0;
};

struct CheckSetOutcome {
    Json report;
    bool colorable = false;
};

/// Builds the graph, resolves the bases and runs the solver.
CheckSetOutcome check_ray_set(const RaySet& rs, const CheckSetOptions& opts = {});

Json coloring_to_json(const ColoringResult& result);

// ---------------------------------------------------------------------------
// Oracle specs

/// Builds the valuation described by an oracle spec:
///   {"kind": "four_segment", "pole_value"?: 0|1}
///   {"kind": "step_meridian", "theta_star": rad, "boundary"?: "closed"|"open"}
///   {"kind": "polar_cap", "half_angle": rad}
///   {"kind": "valuation2d_rotated", "generator": [[a, b], ...]}
/// plus optional "rotation": {"axis": [x, y, z], "angle": rad} and
/// "perturbations": [{"type": "flip_cap", "center": [x, y, z],
/// "radius": rad, "antipodal"?: bool}]. Unknown keys are rejected.
/// Throws ParseError or DomainError.
std::shared_ptr<const Valuation3> parse_oracle(const Json& doc);

Json generator_to_json(const Generator2D& g);
Generator2D generator_from_json(const Json& doc);

struct ReportOptions {
    bool include_evaluations = true;
};

Json witness_config_to_json(const WitnessConfig& cfg);
Json witness_report_to_json(const WitnessReport& report, const ReportOptions& opts = {});

Json vec_to_json(const Vec3& v);

} // namespace ks::io
