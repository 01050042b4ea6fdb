#include "ks/errors.hpp"
#include "ks/witness.hpp"

#include <doctest.h>

#include <random>

using namespace ks;

namespace {

const UnitVec3 kNorth = UnitVec3::checked({0, 0, 1});

/// Independent re-check of a report: orthogonality by plain dot products,
/// the sum by fresh oracle calls.
bool certificate_rechecks(const Valuation& v, const WitnessReport& r) {
    if (const auto* vb = std::get_if<ViolatingBasis>(&r.outcome)) {
        const auto t = vb->triad.vectors();
        for (int i = 0; i < 3; ++i) {
            if (std::abs(norm(t[i].vec()) - 1.0) > 1e-12) return false;
            for (int j = i + 1; j < 3; ++j) {
                if (std::abs(dot(t[i].vec(), t[j].vec())) >= 1e-9) return false;
            }
        }
        int sum = 0;
        for (const auto& n : t) sum += evaluate(v, n.vec());
        return sum != 1 && sum == vb->sum;
    }
    if (const auto* av = std::get_if<AntipodalViolation>(&r.outcome)) {
        return evaluate(v, av->n.vec()) != evaluate(v, -av->n.vec());
    }
    return true;
}

bool trace_replays(const Valuation& v, const WitnessReport& r) {
    for (const auto& step : r.trace) {
        for (const auto& e : step.evaluations) {
            if (evaluate(v, e.point) != e.value) return false;
        }
    }
    return true;
}

std::size_t trace_evaluations(const WitnessReport& r) {
    std::size_t n = 0;
    for (const auto& s : r.trace) n += s.evaluations.size();
    return n;
}

bool has_step(const WitnessReport& r, StepKind k) {
    for (const auto& s : r.trace) {
        if (s.kind == k) return true;
    }
    return false;
}

} // namespace

TEST_CASE("WitnessConfig validation") {
    WitnessConfig c;
    CHECK_NOTHROW(validate(c));
    c.meridian_samples = 0;
    CHECK_THROWS_AS(validate(c), DomainError);
    c = {};
    c.bisection_resolution = 0.0;
    CHECK_THROWS_AS(validate(c), DomainError);
    c = {};
    c.max_descent_probes = 0;
    CHECK_THROWS_AS(validate(c), DomainError);
}

TEST_CASE("SphereSampler is deterministic and spread over the sphere") {
    const SphereSampler a(5);
    const SphereSampler b(5);
    const SphereSampler c(6);
    CHECK(a(17).vec() == b(17).vec());
    CHECK_FALSE(a(17).vec() == c(17).vec());
    double zsum = 0;
    int north = 0;
    const int n = 4096;
    for (int i = 0; i < n; ++i) {
        const UnitVec3 x = a(i);
        CHECK(std::abs(norm(x.vec()) - 1.0) < 1e-12);
        zsum += x.z();
        north += x.z() > 0;
    }
    CHECK(std::abs(zsum / n) < 0.01);
    CHECK(std::abs(north / double(n) - 0.5) < 0.01);
}

TEST_CASE("classify_great_circle") {
    const FourSegmentValuation four;
    const GreatCircleClass eq = classify_great_circle(four, kNorth, 64);
    CHECK(eq.kind == CircleKind::AllZero);
    CHECK(eq.normal_value == 1);
    CHECK(eq.ones == 0);

    const GreatCircleClass mer = classify_great_circle(four, UnitVec3::checked({1, 0, 0}), 64);
    CHECK(mer.kind == CircleKind::FiftyFifty);
    CHECK(mer.normal_value == 0);
    CHECK(mer.ones * 2 == mer.points_sampled);

    const ConstantValuation zero(3, 0);
    const GreatCircleClass z = classify_great_circle(zero, UnitVec3::normalize({1, 2, 3}), 16);
    REQUIRE(z.kind == CircleKind::ViolationFound);
    REQUIRE(z.triad.has_value());
    CHECK(check_basis(zero, *z.triad) == 0);

    const PolarCapValuation cap(0.5);
    const GreatCircleClass c = classify_great_circle(cap, UnitVec3::normalize({1, 0, 0.1}), 64);
    REQUIRE(c.kind == CircleKind::ViolationFound);
    CHECK(check_basis(cap, *c.triad) != 1);

    CHECK_THROWS_AS(classify_great_circle(four, kNorth, 1), DomainError);
}

TEST_CASE("propagate_zero_along_descent") {
    auto four = std::make_shared<FourSegmentValuation>();
    const SphPoint p = SphPoint::make(kPi / 4, 0.0);
    const DescentCheck ok = propagate_zero_along_descent(*four, p);
    REQUIRE(std::holds_alternative<ZeroCircleConfirmed>(ok));
    CHECK(std::get<ZeroCircleConfirmed>(ok).points_sampled == 256);

    // plant a 1 on C(p), away from p and the pole
    const UnitVec3 spot = DescentCircle(p).point_at_arc(1.1);
    const FlippedCapValuation planted(four, spot, 0.05, true);
    const DescentCheck bad = propagate_zero_along_descent(planted, p);
    REQUIRE(std::holds_alternative<DescentViolation>(bad));
    const auto& dv = std::get<DescentViolation>(bad);
    CHECK(check_basis(planted, dv.triad) == dv.sum);
    CHECK(dv.sum != 1);

    CHECK_THROWS_AS(propagate_zero_along_descent(*four, SphPoint::make(0.0, 0.3)), PreconditionFailed);
    CHECK_THROWS_AS(propagate_zero_along_descent(*four, SphPoint::make(kHalfPi, 0.0)), PreconditionFailed);
    CHECK_THROWS_AS(propagate_zero_along_descent(*four, SphPoint::make(0.5, 2.0)), PreconditionFailed);
    CHECK_THROWS_AS(propagate_zero_along_descent(FourSegmentValuation(0), p), PreconditionFailed);
}

TEST_CASE("extract_witness on the built-in families") {
    auto four = std::make_shared<FourSegmentValuation>();
    const std::vector<std::shared_ptr<const Valuation>> family{
        four,
        std::make_shared<StepMeridianValuation>(0.0),
        std::make_shared<StepMeridianValuation>(0.7, StepBoundary::OpenAtStar),
        std::make_shared<PolarCapValuation>(0.5),
        std::make_shared<PolarCapValuation>(0.05),
        std::make_shared<MeridianValuation2D>(Generator2D({{0.0, kPi / 8}, {0.9, 1.2}})),
        std::make_shared<ConstantValuation>(3, 0),
        std::make_shared<ConstantValuation>(3, 1),
        std::make_shared<RotatedValuation>(four, Rotation::axis_angle({1, 2, 3}, 0.8)),
    };
    for (const auto& v : family) {
        const WitnessReport r = extract_witness(*v);
        CHECK(r.found());
        CHECK(std::holds_alternative<ViolatingBasis>(r.outcome));
        CHECK(certificate_rechecks(*v, r));
        CHECK(certificate_holds(*v, r));
        CHECK(trace_replays(*v, r));
        CHECK(r.stats.evaluations == trace_evaluations(r));
        CHECK(r.stats.evaluations <= WitnessConfig{}.max_descent_probes);
    }
}

TEST_CASE("four-segment from the pole goes through the meridian argument") {
    const FourSegmentValuation four;
    const WitnessReport r = extract_witness_from_pole(four, kNorth);
    REQUIRE(r.found());
    CHECK(certificate_rechecks(four, r));
    CHECK(has_step(r, StepKind::PoleFound));
    CHECK(has_step(r, StepKind::EquatorProbe));
    CHECK(has_step(r, StepKind::MeridianScan));
    CHECK(has_step(r, StepKind::Standardized));
    CHECK(has_step(r, StepKind::CompetingMeridian));
    CHECK(has_step(r, StepKind::FinalTriad));
    CHECK(trace_replays(four, r));
}

TEST_CASE("step meridian from the pole") {
    for (double ts : {0.0, 0.2, 0.6, 1.2}) {
        const StepMeridianValuation v(ts);
        const WitnessReport r = extract_witness_from_pole(v, kNorth);
        REQUIRE(r.found());
        CHECK(certificate_rechecks(v, r));
    }
    const StepMeridianValuation v(0.3);
    const WitnessReport off = extract_witness_from_pole(v, UnitVec3::checked({1, 0, 0}));
    CHECK_FALSE(off.found());
    CHECK(off.stats.evaluations == 1);
}

TEST_CASE("planted antipodal mismatch is reported") {
    auto four = std::make_shared<FourSegmentValuation>();
    WitnessConfig cfg;
    cfg.rng_seed = 9;
    cfg.antipodal_first = true;
    const UnitVec3 first = SphereSampler(cfg.rng_seed)(0);
    const FlippedCapValuation planted(four, first, 0.01, false);
    const WitnessReport r = extract_witness(planted, cfg);
    REQUIRE(std::holds_alternative<AntipodalViolation>(r.outcome));
    const auto& av = std::get<AntipodalViolation>(r.outcome);
    CHECK(av.value != av.antipode_value);
    CHECK(certificate_rechecks(planted, r));
    CHECK(certificate_holds(planted, r));
}

TEST_CASE("tiny budgets give NotFound, reproducibly") {
    const PolarCapValuation cap(0.5);
    WitnessConfig cfg;
    cfg.max_descent_probes = 2;
    cfg.rng_seed = 4;
    const WitnessReport a = extract_witness(cap, cfg);
    const WitnessReport b = extract_witness(cap, cfg);
    CHECK_FALSE(a.found());
    CHECK(a.stats.budget_exhausted);
    CHECK(a.stats.evaluations == 2);
    CHECK(certificate_holds(cap, a));
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        REQUIRE(a.trace[i].evaluations.size() == b.trace[i].evaluations.size());
        for (std::size_t k = 0; k < a.trace[i].evaluations.size(); ++k) {
            CHECK(a.trace[i].evaluations[k].point == b.trace[i].evaluations[k].point);
        }
    }
}

TEST_CASE("identical seeds give identical reports") {
    auto four = std::make_shared<FourSegmentValuation>();
    const FlippedCapValuation v(four, UnitVec3::normalize({0.3, -0.2, 0.9}), 0.3, true);
    for (std::uint64_t seed : {0u, 1u, 99u}) {
        WitnessConfig cfg;
        cfg.rng_seed = seed;
        const WitnessReport a = extract_witness(v, cfg);
        const WitnessReport b = extract_witness(v, cfg);
        CHECK(a.outcome.index() == b.outcome.index());
        CHECK(a.stats.evaluations == b.stats.evaluations);
        if (const auto* x = std::get_if<ViolatingBasis>(&a.outcome)) {
            const auto& y = std::get<ViolatingBasis>(b.outcome);
            CHECK(x->triad.n1 == y.triad.n1);
            CHECK(x->triad.n2 == y.triad.n2);
            CHECK(x->triad.n3 == y.triad.n3);
        }
    }
}

TEST_CASE("seeded perturbations never yield a false certificate") {
    auto four = std::make_shared<FourSegmentValuation>();
    std::mt19937_64 rng(31);
    std::normal_distribution<> g;
    std::uniform_real_distribution<> u(0.0, 1.0);
    int found = 0;
    const int runs = 40;
    for (int i = 0; i < runs; ++i) {
        std::shared_ptr<const Valuation> v = std::make_shared<RotatedValuation>(
            four, Rotation::axis_angle({g(rng), g(rng), g(rng)}, 3.0 * u(rng)));
        v = std::make_shared<FlippedCapValuation>(v, UnitVec3::normalize({g(rng), g(rng), g(rng)}), 0.4 * u(rng),
                                                  i % 2 == 0);
        WitnessConfig cfg;
        cfg.rng_seed = static_cast<std::uint64_t>(i);
        const WitnessReport r = extract_witness(*v, cfg);
        found += r.found();
        CHECK(certificate_rechecks(*v, r));
        CHECK(trace_replays(*v, r));
    }
    CHECK(found == runs);
}

TEST_CASE("extract_witness rejects non-3D oracles") {
    const ConstantValuation four_d(4, 0);
    CHECK_THROWS_AS(extract_witness(four_d), DomainError);
}

TEST_CASE("step names") {
    CHECK(to_string(StepKind::PoleSearch) == "pole_search");
    CHECK(to_string(StepKind::FinalTriad) == "final_triad");
    CHECK(to_string(StepKind::CompetingMeridian) == "competing_meridian");
}
