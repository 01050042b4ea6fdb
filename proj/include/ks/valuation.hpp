#pragma once

#include "ks/sphere_geom.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace ks {

/// A candidate assignment v : S^(d-1) -> {0, 1}.
///
/// Implementations promise v(-n) = v(n). For a black-box oracle this cannot be
/// proven, only spot-checked, so nothing here relies on it: certificates are
/// always re-evaluated on the exact vectors they name.
class Valuation {
public:
    virtual ~Valuation() = default;

    virtual std::size_t dimension() const = 0;

    /// n has dimension() entries and unit norm. Returns 0 or 1.
    virtual int evaluate(std::span<const double> n) const = 0;

    /// False when concurrent evaluate() calls are unsafe; callers then
    /// serialize access.
    virtual bool concurrent_safe() const { return true; }
};

using ValuationPtr = std::shared_ptr<const Valuation>;

/// Evaluates a 3-dimensional valuation at a Cartesian point.
int evaluate(const Valuation& v, const Vec3& n);

/// Convenience base for valuations on S^2.
class Valuation3 : public Valuation {
public:
    std::size_t dimension() const final { return 3; }
    int evaluate(std::span<const double> n) const final;
    virtual int evaluate(const Vec3& n) const = 0;
};

class ConstantValuation final : public Valuation {
public:
    ConstantValuation(std::size_t dimension, int value);
    std::size_t dimension() const override { return dimension_; }
    int evaluate(std::span<const double>) const override { return value_; }

private:
    std::size_t dimension_;
    int value_;
};

/// Wraps a user callable. The callable's results are validated to be 0/1.
class FunctionValuation final : public Valuation {
public:
    using Fn = std::function<int(std::span<const double>)>;
    FunctionValuation(std::size_t dimension, Fn fn, bool concurrent_safe = true);
    std::size_t dimension() const override { return dimension_; }
    int evaluate(std::span<const double> n) const override;
    bool concurrent_safe() const override { return concurrent_safe_; }

private:
    std::size_t dimension_;
    Fn fn_;
    bool concurrent_safe_;
};

// ---------------------------------------------------------------------------
// One and two dimensions

/// In one dimension S^0 = {n, -n}. A standalone 1D space forces v(n) = 1; a
/// 1D subspace of a larger space leaves the value free, so 0 is accepted too.
ValuationPtr make_valuation_1d(int value_of_basis);

/// g : [0, pi/2) -> {0, 1}, stored as the sorted, disjoint half-open
/// intervals where g = 1.
class Generator2D {
public:
    using Interval = std::pair<double, double>;

    Generator2D() = default;
    /// Throws DomainError unless every interval is nonempty, inside
    /// [0, pi/2), sorted and pairwise disjoint.
    explicit Generator2D(std::vector<Interval> ones);

    const std::vector<Interval>& intervals() const { return ones_; }

    /// theta must lie in [0, pi/2).
    int operator()(double theta) const;

    /// Measure of {g = 1}.
    double ones_measure() const;

private:
    std::vector<Interval> ones_;
};

/// The dyad-consistent valuation on S^1 built from g by quarter turns:
/// g on [0, pi/2), 1 - g(. - pi/2) on [pi/2, pi), g(. - pi) on [pi, 3pi/2),
/// 1 - g(. - 3pi/2) on [3pi/2, 2pi).
class Valuation2D final : public Valuation {
public:
    explicit Valuation2D(Generator2D g) : g_(std::move(g)) {}

    std::size_t dimension() const override { return 2; }
    int evaluate(std::span<const double> n) const override;

    /// Value at polar angle theta, any real.
    int value_at(double theta) const;

    const Generator2D& generator() const { return g_; }

private:
    Generator2D g_;
};

Valuation2D make_valuation_2d(Generator2D g);

// ---------------------------------------------------------------------------
// Three-dimensional forms

/// Which of the two half-open boundary conventions a step meridian uses.
enum class StepBoundary {
    ClosedAtStar,  ///< 1 on [theta*, pi/2], 0 on [theta* - pi/2, theta*), 1 below
    OpenAtStar,    ///< 1 on (theta*, pi/2], 0 on (theta* - pi/2, theta*], 1 below
};

/// Meridian profile with a single 1 -> 0 -> 1 pattern. As a 3D valuation it
/// is extended rotationally about the polar axis, i.e. v depends on the
/// latitude only (such an extension is generally not antipodally symmetric).
class StepMeridianValuation final : public Valuation3 {
public:
    /// theta_star must lie in [0, pi/2].
    StepMeridianValuation(double theta_star, StepBoundary boundary = StepBoundary::ClosedAtStar);

    using Valuation3::evaluate;
    int evaluate(const Vec3& n) const override;

    /// theta in [-pi/2, pi/2].
    int value_at_latitude(double theta) const;

    double theta_star() const { return theta_star_; }
    StepBoundary boundary() const { return boundary_; }

private:
    double theta_star_;
    StepBoundary boundary_;
};

/// The four-segment partition: v = 0 on {theta > 0, |phi| < pi/2} and
/// {theta < 0, |phi| > pi/2}; v = 1 on the two complementary segments.
///
/// Boundary arcs: the equator is 0, the poles carry pole_value, and on the
/// phi = ±pi/2 meridians the northern half of +pi/2 and the southern half of
/// -pi/2 are 0 (the other halves 1). This keeps v(-n) = v(n) exact and makes
/// each of those meridian circles dyad-consistent.
class FourSegmentValuation final : public Valuation3 {
public:
    explicit FourSegmentValuation(int pole_value = 1);

    using Valuation3::evaluate;
    int evaluate(const Vec3& n) const override;

private:
    int pole_value_;
};

/// 1 within angular distance half_angle of either pole, 0 elsewhere.
class PolarCapValuation final : public Valuation3 {
public:
    explicit PolarCapValuation(double half_angle);

    using Valuation3::evaluate;
    int evaluate(const Vec3& n) const override;

    double half_angle() const { return half_angle_; }

private:
    double half_angle_;
};

/// Poles 1 and every meridian circle carrying the two-dimensional valuation
/// of g, measured as the arc angle from the north pole. Longitudes in
/// [-pi/2, pi/2) are the reference half; the other half is obtained through
/// the antipodal map, so v(-n) = v(n) holds by construction.
class MeridianValuation2D final : public Valuation3 {
public:
    explicit MeridianValuation2D(Generator2D g) : circle_(std::move(g)) {}

    using Valuation3::evaluate;
    int evaluate(const Vec3& n) const override;

private:
    Valuation2D circle_;
};

/// v'(x) = base(R x).
class RotatedValuation final : public Valuation3 {
public:
    RotatedValuation(std::shared_ptr<const Valuation> base, Rotation rotation);

    using Valuation3::evaluate;
    int evaluate(const Vec3& n) const override;
    bool concurrent_safe() const override { return base_->concurrent_safe(); }

private:
    std::shared_ptr<const Valuation> base_;
    Rotation rotation_;
};

/// Flips the base value inside the spherical cap of the given angular
/// radius around center; with antipodal = true the cap around -center is
/// flipped as well, preserving antipodal symmetry.
class FlippedCapValuation final : public Valuation3 {
public:
    FlippedCapValuation(std::shared_ptr<const Valuation> base, const UnitVec3& center, double radius,
                        bool antipodal);

    using Valuation3::evaluate;
    int evaluate(const Vec3& n) const override;
    bool concurrent_safe() const override { return base_->concurrent_safe(); }

private:
    std::shared_ptr<const Valuation> base_;
    UnitVec3 center_;
    double cos_radius_;
    bool antipodal_;
};

// ---------------------------------------------------------------------------
// Sum rule

/// Sum of v over a basis of dimension() mutually orthogonal unit vectors.
/// The Kochen-Specker condition holds on this basis iff the result is 1.
/// Throws NotABasis if the vectors are not an orthonormal basis.
int check_basis(const Valuation& v, std::span<const std::vector<double>> basis,
                const Tolerances& tol = kDefaultTolerances);

int check_basis(const Valuation& v, const Triad& triad, const Tolerances& tol = kDefaultTolerances);

// ---------------------------------------------------------------------------
// Reduction of d >= 4 to d = 3

/// The restriction of a d-dimensional valuation to the unit 2-sphere
/// orthogonal to d - 3 mutually orthogonal zeros.
class ReducedValuation final : public Valuation3 {
public:
    using Valuation3::evaluate;
    int evaluate(const Vec3& n) const override;
    bool concurrent_safe() const override { return base_->concurrent_safe(); }

    /// x in the reduced 3-frame -> the corresponding d-dimensional unit vector.
    std::vector<double> embed(const Vec3& x) const;

    /// A reduced triad padded with the zeros: a full d-dimensional basis.
    std::vector<std::vector<double>> lift(const Triad& t) const;

    const std::vector<std::vector<double>>& zeros() const { return zeros_; }
    const std::vector<std::vector<double>>& frame() const { return frame_; }
    const Valuation& base() const { return *base_; }

private:
    friend std::shared_ptr<const ReducedValuation> reduce_dimension(ValuationPtr, std::vector<std::vector<double>>,
                                                                    const Tolerances&);
    ReducedValuation(ValuationPtr base, std::vector<std::vector<double>> zeros,
                     std::vector<std::vector<double>> frame);

    ValuationPtr base_;
    std::vector<std::vector<double>> zeros_;
    std::vector<std::vector<double>> frame_;
};

/// Throws ZeroSetInvalid unless zeros holds d - 3 orthonormal vectors on
/// which v evaluates to 0. The complementary 3-frame is built by
/// Gram-Schmidt over the standard basis, always taking the axis with the
/// largest remaining component.
std::shared_ptr<const ReducedValuation> reduce_dimension(ValuationPtr v, std::vector<std::vector<double>> zeros,
                                                         const Tolerances& tol = kDefaultTolerances);

struct ZeroSetFound {
    std::vector<std::vector<double>> zeros;
    std::size_t draws = 0;
};

/// A full d-basis met during the search whose sum is not 1.
struct ViolatingFrame {
    std::vector<std::vector<double>> basis;
    int sum = 0;
};

struct ZeroSetNotFound {
    std::size_t draws = 0;
    std::size_t ones_seen = 0;
    std::size_t zeros_kept = 0;
};

using ZeroSetSearch = std::variant<ZeroSetFound, ViolatingFrame, ZeroSetNotFound>;

/// Greedy search for d - 3 orthonormal zeros: draw a random unit vector in
/// the orthogonal complement of the zeros kept so far, keep it if v = 0.
/// Whenever a draw evaluates to 1 the kept zeros plus that draw are completed
/// to a full basis and checked; a sum other than 1 ends the search early.
ZeroSetSearch find_zero_orthogonal_set(const Valuation& v, std::size_t budget, std::uint64_t seed = 0);

/// Orthonormal basis of the complement of span(vectors) in R^d, grown from
/// the standard axes by always taking the one with the largest residual.
/// vectors must already be orthonormal.
std::vector<std::vector<double>> orthonormal_complement(const std::vector<std::vector<double>>& vectors,
                                                        std::size_t d);

} // namespace ks
