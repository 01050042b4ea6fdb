#pragma once

#include "ks/sphere_geom.hpp"
#include "ks/valuation.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ks {

/// Deterministic low-discrepancy points on S^2: a Halton (2, 3) sequence with
/// a seed-derived Cranley-Patterson shift, mapped area-uniformly.
class SphereSampler {
public:
    explicit SphereSampler(std::uint64_t seed);
    UnitVec3 operator()(std::size_t index) const;
    /// Seed-derived offset in [0, 1), used to jitter 1D grids.
    double offset(std::size_t which) const { return shift_[which % shift_.size()]; }

private:
    std::array<double, 4> shift_{};
};

struct WitnessConfig {
    std::size_t meridian_samples = 64;
    std::size_t latitude_samples = 256;
    /// Hard cap on the total number of oracle evaluations.
    std::size_t max_descent_probes = 10000;
    std::uint64_t rng_seed = 0;
    double bisection_resolution = 1e-6;
    /// Report an antipodal mismatch as soon as one is seen instead of
    /// preferring a violating triad.
    bool antipodal_first = false;
};

/// Throws DomainError if any count is zero or the resolution is not positive.
void validate(const WitnessConfig& cfg);

struct Evaluation {
    Vec3 point;
    int value = 0;
};

enum class StepKind {
    PoleSearch,          ///< sampling for a point with v = 1
    PoleFound,           ///< that point, rotated to the north pole
    AntipodeCheck,
    EquatorProbe,
    MeridianScan,        ///< latitude samples along one meridian
    MeridianClassified,  ///< transition latitude located by bisection
    Standardized,        ///< frame rotated to the standard meridian form
    CompetingMeridian,   ///< probes of a second meridian's descent circles
    DescentChain,        ///< zero propagation along descent circles
    TriadSampling,       ///< fallback: direct triad sampling
    FinalTriad,
};

std::string to_string(StepKind kind);

struct TraceStep {
    StepKind kind;
    std::string note;
    std::vector<Evaluation> evaluations;  ///< world coordinates, in call order
};

struct SearchStats {
    std::size_t evaluations = 0;
    std::size_t pole_samples = 0;
    std::size_t meridians_classified = 0;
    std::size_t competing_meridians = 0;
    std::size_t triads_sampled = 0;
    bool budget_exhausted = false;
};

struct ViolatingBasis {
    Triad triad;
    int sum = 0;
};

struct AntipodalViolation {
    UnitVec3 n;
    int value = 0;
    int antipode_value = 0;
};

struct NotFound {
    SearchStats stats;
};

struct WitnessReport {
    std::variant<ViolatingBasis, AntipodalViolation, NotFound> outcome{NotFound{}};
    std::vector<TraceStep> trace;
    SearchStats stats;

    bool found() const { return !std::holds_alternative<NotFound>(outcome); }
};

/// Re-checks a report's certificate against fresh oracle calls. Returns true
/// for NotFound (there is nothing to check).
bool certificate_holds(const Valuation& v, const WitnessReport& report,
                       const Tolerances& tol = kDefaultTolerances);

// ---------------------------------------------------------------------------
// Great-circle classification

enum class CircleKind { AllZero, FiftyFifty, ViolationFound };

struct GreatCircleClass {
    CircleKind kind = CircleKind::AllZero;
    std::optional<Triad> triad;  ///< set for ViolationFound
    std::size_t points_sampled = 0;
    std::size_t ones = 0;
    int normal_value = 0;
};

/// Sample-based classification of the great circle orthogonal to normal.
/// With v(normal) = 1 every circle point must be 0; with v(normal) = 0 every
/// dyad in the circle must sum to 1. The first failure yields a triad with
/// the normal. samples >= 2 dyads are taken over the half circle.
GreatCircleClass classify_great_circle(const Valuation& v, const UnitVec3& normal, std::size_t samples);

// ---------------------------------------------------------------------------
// Zero propagation along a descent circle

struct ZeroCircleConfirmed {
    std::size_t points_sampled = 0;
};

struct DescentViolation {
    Triad triad;
    int sum = 0;
};

using DescentCheck = std::variant<ZeroCircleConfirmed, DescentViolation>;

/// With v(north pole) = 1 and v(p) = 0, the descent circle C(p) must be 0
/// everywhere: its equator crossing s is 0, so p_perp completes {p, s} and
/// is 1, making C(p) the zero equator of p_perp. Samples C(p) and returns the
/// triad exposing any break in that chain. Throws PreconditionFailed if p is
/// on the equator or a pole, v(p) != 0, or v(north pole) != 1.
DescentCheck propagate_zero_along_descent(const Valuation& v, const SphPoint& p, std::size_t samples = 256);

// ---------------------------------------------------------------------------

/// Follows the descent contradiction on a candidate 3D valuation until it
/// produces a concrete certificate or the budgets run out. Every
/// ViolatingBasis returned has been re-evaluated through check_basis.
WitnessReport extract_witness(const Valuation& v, const WitnessConfig& cfg = {});

/// Runs the argument from a given point with v = 1 as the pole (steps after
/// the pole search). Exposed so the descent stages can be exercised on
/// oracles whose pole is known. A pole with v != 1 gives NotFound.
WitnessReport extract_witness_from_pole(const Valuation& v, const UnitVec3& pole, const WitnessConfig& cfg = {});

} // namespace ks
