#include "ks/errors.hpp"
#include "ks/valuation.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace ks;

namespace {

std::vector<double> v2(double t) { return {std::cos(t), std::sin(t)}; }

/// Branch formula for the two-dimensional valuation, evaluated directly.
int reference_2d(const std::vector<std::pair<double, double>>& ones, double theta) {
    auto g = [&](double t) {
        for (auto [a, b] : ones) {
            if (t >= a && t < b) return 1;
        }
        return 0;
    };
    double t = std::fmod(theta, 2 * kPi);
    if (t < 0) t += 2 * kPi;
    if (t < kHalfPi) return g(t);
    if (t < kPi) return 1 - g(t - kHalfPi);
    if (t < 3 * kHalfPi) return g(t - kPi);
    return 1 - g(t - 3 * kHalfPi);
}

Generator2D random_generator(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> count(0, 6);
    std::uniform_real_distribution<double> u(0.0, kHalfPi);
    std::vector<double> cuts;
    const int k = 2 * count(rng);
    for (int i = 0; i < k; ++i) cuts.push_back(u(rng));
    std::sort(cuts.begin(), cuts.end());
    std::vector<Generator2D::Interval> ones;
    for (int i = 0; i + 1 < k; i += 2) {
        if (cuts[i] < cuts[i + 1]) ones.emplace_back(cuts[i], cuts[i + 1]);
    }
    return Generator2D(ones);
}

UnitVec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<> g;
    return UnitVec3::normalize({g(rng), g(rng), g(rng)});
}

} // namespace

TEST_CASE("one-dimensional valuations") {
    const auto v = make_valuation_1d(1);
    CHECK(v->dimension() == 1);
    const std::vector<double> n{1.0};
    const std::vector<double> m{-1.0};
    CHECK(v->evaluate(n) == 1);
    CHECK(v->evaluate(m) == 1);

    const auto z = make_valuation_1d(0);
    CHECK(z->evaluate(n) == 0);
    CHECK(z->evaluate(m) == 0);
    CHECK(z->evaluate(n) == z->evaluate(m));

    CHECK_THROWS_AS(make_valuation_1d(2), DomainError);
}

TEST_CASE("Generator2D validation") {
    CHECK_NOTHROW(Generator2D());
    CHECK_NOTHROW(Generator2D({{0.0, 0.5}, {0.7, 1.5}}));
    CHECK_THROWS_AS(Generator2D({{0.5, 0.5}}), DomainError);
    CHECK_THROWS_AS(Generator2D({{0.7, 1.0}, {0.1, 0.2}}), DomainError);
    CHECK_THROWS_AS(Generator2D({{0.1, 0.5}, {0.4, 0.6}}), DomainError);
    CHECK_THROWS_AS(Generator2D({{-0.1, 0.5}}), DomainError);
    CHECK_THROWS_AS(Generator2D({{1.0, 2.0}}), DomainError);

    const Generator2D g({{0.1, 0.3}, {0.5, 0.6}});
    CHECK(g(0.0) == 0);
    CHECK(g(0.1) == 1);
    CHECK(g(0.3) == 0);
    CHECK(g(0.55) == 1);
    CHECK(g.ones_measure() == doctest::Approx(0.3));
    CHECK_THROWS_AS(g(kHalfPi), DomainError);
}

TEST_CASE("Valuation2D with g = 0") {
    const Valuation2D v = make_valuation_2d(Generator2D());
    CHECK(v.value_at(0.0) == 0);
    CHECK(v.value_at(kHalfPi) == 1);
    CHECK(v.value_at(0.0) + v.value_at(kHalfPi) == 1);
    CHECK(v.value_at(0.3) == v.value_at(0.3 + kPi));
}

TEST_CASE("Valuation2D matches the branch formula and its invariants") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    for (int gen = 0; gen < 50; ++gen) {
        const Generator2D g = random_generator(rng);
        const Valuation2D v(g);
        for (int i = 0; i < 1000; ++i) {
            const double t = angle(rng);
            REQUIRE(v.value_at(t) == reference_2d(g.intervals(), t));
            CHECK(v.value_at(t) == v.value_at(t + kPi));
            CHECK(v.value_at(t) + v.value_at(t + kHalfPi) == 1);
            CHECK(v.value_at(t) + v.value_at(t - kHalfPi) == 1);
            CHECK(v.evaluate(v2(t)) == v.evaluate(v2(t + kPi)));
        }
    }
}

TEST_CASE("Valuation2D image is half ones") {
    const Valuation2D v(Generator2D({{0.0, kPi / 4}}));
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
    int ones = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) ones += v.value_at(angle(rng));
    CHECK(std::abs(ones / double(n) - 0.5) < 0.02);
}

TEST_CASE("check_basis") {
    const FourSegmentValuation four;
    const Triad t = make_triad(UnitVec3::checked({0, 0, 1}), UnitVec3::checked({1, 0, 0}), UnitVec3::checked({0, 1, 0}));
    CHECK(evaluate(four, Vec3{0, 0, 1}) == 1);
    CHECK(evaluate(four, Vec3{1, 0, 0}) == 0);
    CHECK(evaluate(four, Vec3{0, 1, 0}) == 0);
    CHECK(check_basis(four, t) == 1);

    const ConstantValuation zero(3, 0);
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) CHECK(check_basis(zero, complete_triad(random_unit(rng))) == 0);

    const Valuation2D v(Generator2D({{0.2, 0.9}}));
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int i = 0; i < 1000; ++i) {
        const double a = angle(rng);
        const std::vector<std::vector<double>> dyad{v2(a), v2(a + kHalfPi)};
        CHECK(check_basis(v, dyad) == 1);
    }

    const std::vector<std::vector<double>> skew{{1.0, 0.0}, {std::sqrt(0.5), std::sqrt(0.5)}};
    CHECK_THROWS_AS(check_basis(v, skew), NotABasis);
    const std::vector<std::vector<double>> short_basis{{1.0, 0.0}};
    CHECK_THROWS_AS(check_basis(v, short_basis), NotABasis);
    const std::vector<std::vector<double>> unnormalized{{2.0, 0.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(check_basis(v, unnormalized), NotABasis);
}

TEST_CASE("StepMeridianValuation profiles") {
    const double ts = 0.4;
    const StepMeridianValuation closed(ts, StepBoundary::ClosedAtStar);
    const StepMeridianValuation open(ts, StepBoundary::OpenAtStar);

    CHECK(closed.value_at_latitude(kHalfPi) == 1);
    CHECK(closed.value_at_latitude(ts) == 1);
    CHECK(closed.value_at_latitude(ts - 1e-9) == 0);
    CHECK(closed.value_at_latitude(ts - kHalfPi) == 0);
    CHECK(closed.value_at_latitude(ts - kHalfPi - 1e-9) == 1);
    CHECK(closed.value_at_latitude(-kHalfPi) == 1);

    CHECK(open.value_at_latitude(ts) == 0);
    CHECK(open.value_at_latitude(ts + 1e-9) == 1);
    CHECK(open.value_at_latitude(ts - kHalfPi) == 1);
    CHECK(open.value_at_latitude(ts - kHalfPi + 1e-9) == 0);

    CHECK_THROWS_AS(StepMeridianValuation(-0.1), DomainError);
    CHECK_THROWS_AS(StepMeridianValuation(1.6), DomainError);

    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> star(0.0, kHalfPi);
    std::uniform_real_distribution<double> lat(-kHalfPi, 0.0);
    for (int i = 0; i < 200; ++i) {
        for (StepBoundary b : {StepBoundary::ClosedAtStar, StepBoundary::OpenAtStar}) {
            const StepMeridianValuation v(star(rng), b);
            for (int k = 0; k < 50; ++k) {
                const double t = lat(rng);
                CHECK(v.value_at_latitude(t) + v.value_at_latitude(t + kHalfPi) == 1);
            }
            // one 1 -> 0 and one 0 -> 1 transition going down the meridian
            int changes = 0;
            int prev = v.value_at_latitude(kHalfPi);
            for (int k = 1; k <= 2000; ++k) {
                const int cur = v.value_at_latitude(kHalfPi - kPi * k / 2000.0);
                changes += cur != prev;
                prev = cur;
            }
            CHECK(changes <= 2);
        }
    }

    const StepMeridianValuation rot(0.3);
    CHECK(evaluate(rot, to_cartesian(SphPoint::make(0.5, 1.0))) == 1);
    CHECK(evaluate(rot, to_cartesian(SphPoint::make(0.1, -2.0))) == 0);
}

TEST_CASE("FourSegmentValuation regions, symmetry and area") {
    const FourSegmentValuation v;
    CHECK(evaluate(v, to_cartesian(SphPoint::make(0.5, 0.2))) == 0);
    CHECK(evaluate(v, to_cartesian(SphPoint::make(0.5, 2.0))) == 1);
    CHECK(evaluate(v, to_cartesian(SphPoint::make(-0.5, 0.2))) == 1);
    CHECK(evaluate(v, to_cartesian(SphPoint::make(-0.5, 2.0))) == 0);
    CHECK(evaluate(v, Vec3{0, 0, 1}) == 1);
    CHECK(evaluate(v, Vec3{0, 0, -1}) == 1);
    CHECK(evaluate(FourSegmentValuation(0), Vec3{0, 0, 1}) == 0);
    CHECK(evaluate(v, Vec3{std::sqrt(0.5), std::sqrt(0.5), 0}) == 0);

    std::mt19937_64 rng(25);
    int ones = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const UnitVec3 x = random_unit(rng);
        const int a = evaluate(v, x.vec());
        CHECK(a == evaluate(v, -x.vec()));
        ones += a;
    }
    CHECK(std::abs(ones / double(n) - 0.5) < 0.01);

    // boundary arcs keep the antipodal symmetry as well
    for (double z : {-0.9, -0.3, 0.3, 0.9}) {
        const double r = std::sqrt(1 - z * z);
        for (const Vec3 x : {Vec3{0, r, z}, Vec3{0, -r, z}, Vec3{r, 0, 0}, Vec3{0, 1, 0}}) {
            CHECK(evaluate(v, x) == evaluate(v, -x));
        }
    }
}

TEST_CASE("PolarCapValuation") {
    const PolarCapValuation v(0.5);
    CHECK(evaluate(v, Vec3{0, 0, 1}) == 1);
    CHECK(evaluate(v, Vec3{0, 0, -1}) == 1);
    CHECK(evaluate(v, to_cartesian(SphPoint::make(kHalfPi - 0.4, 1.0))) == 1);
    CHECK(evaluate(v, to_cartesian(SphPoint::make(kHalfPi - 0.6, 1.0))) == 0);
    CHECK(evaluate(v, Vec3{1, 0, 0}) == 0);
    CHECK_THROWS_AS(PolarCapValuation(-0.1), DomainError);
}

TEST_CASE("MeridianValuation2D is symmetric and dyad-consistent on each meridian") {
    const Generator2D g({{0.1, 0.6}, {1.0, 1.3}});
    const MeridianValuation2D v(g);
    const Valuation2D circle(g);
    std::mt19937_64 rng(26);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    CHECK(evaluate(v, Vec3{0, 0, 1}) == 1);
    for (int i = 0; i < 2000; ++i) {
        const UnitVec3 x = random_unit(rng);
        CHECK(evaluate(v, x.vec()) == evaluate(v, -x.vec()));

        const double phi = u(rng) / 2;  // reference half
        const double beta = std::abs(u(rng));
        const Vec3 m{std::sin(beta) * std::cos(phi), std::sin(beta) * std::sin(phi), std::cos(beta)};
        const Vec3 n{std::sin(beta + kHalfPi) * std::cos(phi), std::sin(beta + kHalfPi) * std::sin(phi),
                     std::cos(beta + kHalfPi)};
        if (std::abs(std::cos(phi)) > 1e-6 && std::abs(std::sin(beta)) > 1e-6 && std::abs(std::cos(beta)) > 1e-6) {
            CHECK(evaluate(v, m) + evaluate(v, n) == 1);
            if (beta < kPi) CHECK(evaluate(v, m) == circle.value_at(beta));
        }
    }
}

TEST_CASE("RotatedValuation and FlippedCapValuation") {
    auto four = std::make_shared<FourSegmentValuation>();
    const Rotation r = rotation_about_polar_axis(kPi);
    const RotatedValuation rv(four, r);
    const Vec3 x = to_cartesian(SphPoint::make(0.5, 0.2)).vec();
    CHECK(evaluate(rv, x) == evaluate(*four, r.apply(x)));
    CHECK(evaluate(rv, x) == 1);

    const UnitVec3 c = to_cartesian(SphPoint::make(0.5, 0.2));
    const FlippedCapValuation sym(four, c, 0.1, true);
    const FlippedCapValuation one_sided(four, c, 0.1, false);
    CHECK(evaluate(sym, c.vec()) == 1);
    CHECK(evaluate(sym, -c.vec()) == 1);
    CHECK(evaluate(one_sided, c.vec()) == 1);
    CHECK(evaluate(one_sided, -c.vec()) == 0);
    CHECK(evaluate(sym, Vec3{0, 0, 1}) == 1);
}

TEST_CASE("FunctionValuation validates its results") {
    const FunctionValuation bad(3, [](std::span<const double>) { return 2; });
    CHECK_THROWS_AS(evaluate(bad, Vec3{1, 0, 0}), DomainError);
    const FunctionValuation ok(3, [](std::span<const double> n) { return n[2] > 0.5 ? 1 : 0; }, false);
    CHECK_FALSE(ok.concurrent_safe());
    CHECK(evaluate(ok, Vec3{0, 0, 1}) == 1);
    CHECK_THROWS_AS(evaluate(ConstantValuation(4, 0), Vec3{1, 0, 0}), DomainError);
}

TEST_CASE("reduce_dimension in d = 4") {
    auto last = std::make_shared<FunctionValuation>(4, [](std::span<const double> n) { return n[3] * n[3] > 0.5 ? 1 : 0; });
    const std::vector<double> e1{1, 0, 0, 0};
    const std::vector<double> e4{0, 0, 0, 1};

    CHECK_THROWS_AS(reduce_dimension(last, {e4}), ZeroSetInvalid);
    CHECK_THROWS_AS(reduce_dimension(last, {{0.6, 0.0, 0.0, 0.0}}), ZeroSetInvalid);
    CHECK_THROWS_AS(reduce_dimension(last, {}), ZeroSetInvalid);
    CHECK_THROWS_AS(reduce_dimension(std::make_shared<ConstantValuation>(3, 0), {}), DomainError);

    const auto red = reduce_dimension(last, {e1});
    REQUIRE(red->frame().size() == 3);
    std::mt19937_64 rng(27);
    for (int i = 0; i < 1000; ++i) {
        const UnitVec3 x = random_unit(rng);
        std::vector<double> embedded(4, 0.0);
        for (int k = 0; k < 3; ++k) {
            for (int c = 0; c < 4; ++c) embedded[c] += (k == 0 ? x.x() : k == 1 ? x.y() : x.z()) * red->frame()[k][c];
        }
        CHECK(std::abs(embedded[0]) < 1e-12);
        const auto mine = red->embed(x.vec());
        for (int c = 0; c < 4; ++c) CHECK(std::abs(mine[c] - embedded[c]) < 1e-12);
        CHECK(red->evaluate(x.vec()) == last->evaluate(embedded));

        const auto basis = red->lift(complete_triad(x));
        REQUIRE(basis.size() == 4);
        for (int a = 0; a < 4; ++a) {
            double nn = 0;
            for (double c : basis[a]) nn += c * c;
            CHECK(std::abs(nn - 1) < 1e-12);
            for (int b = a + 1; b < 4; ++b) {
                double s = 0;
                for (int c = 0; c < 4; ++c) s += basis[a][c] * basis[b][c];
                CHECK(std::abs(s) < 1e-9);
            }
        }
    }
}

TEST_CASE("orthonormal_complement") {
    const double h = std::sqrt(0.5);
    const std::vector<std::vector<double>> given{{h, h, 0, 0, 0}};
    const auto comp = orthonormal_complement(given, 5);
    REQUIRE(comp.size() == 4);
    auto all = given;
    all.insert(all.end(), comp.begin(), comp.end());
    for (std::size_t a = 0; a < all.size(); ++a) {
        for (std::size_t b = 0; b < all.size(); ++b) {
            double s = 0;
            for (int c = 0; c < 5; ++c) s += all[a][c] * all[b][c];
            CHECK(std::abs(s - (a == b ? 1.0 : 0.0)) < 1e-12);
        }
    }
}

TEST_CASE("find_zero_orthogonal_set") {
    const FunctionValuation spike(4, [](std::span<const double> n) { return std::abs(n[0]) > 1 - 1e-12 ? 1 : 0; });
    const auto res = find_zero_orthogonal_set(spike, 100, 1);
    REQUIRE(std::holds_alternative<ZeroSetFound>(res));
    const auto& found = std::get<ZeroSetFound>(res);
    CHECK(found.draws == 1);
    CHECK(found.zeros.size() == 1);
    auto ptr = std::make_shared<FunctionValuation>(spike);
    CHECK_NOTHROW(reduce_dimension(ptr, found.zeros));

    const ConstantValuation ones(4, 1);
    const auto bad = find_zero_orthogonal_set(ones, 100, 1);
    REQUIRE(std::holds_alternative<ViolatingFrame>(bad));
    const auto& frame = std::get<ViolatingFrame>(bad);
    CHECK(frame.sum == 4);
    CHECK(check_basis(ones, frame.basis) == 4);

    auto five = std::make_shared<FunctionValuation>(5, [](std::span<const double> n) { return n[4] * n[4] > 0.8 ? 1 : 0; });
    const auto r5 = find_zero_orthogonal_set(*five, 100, 7);
    REQUIRE(std::holds_alternative<ZeroSetFound>(r5));
    CHECK(std::get<ZeroSetFound>(r5).zeros.size() == 2);
    CHECK_NOTHROW(reduce_dimension(five, std::get<ZeroSetFound>(r5).zeros));

    CHECK_THROWS_AS(find_zero_orthogonal_set(spike, 0), DomainError);
}
