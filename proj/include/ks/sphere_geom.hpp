#pragma once

// Geometry on the unit 2-sphere.
//
// Coordinates follow the LATITUDE convention throughout: theta = +pi/2 is the
// north pole, theta = 0 the equator, theta = -pi/2 the south pole, and
//
//     x = (cos(theta) cos(phi), cos(theta) sin(phi), sin(theta)).
//
// Most geometry libraries use colatitude instead; do not mix the two.

#include <array>
#include <cmath>
#include <numbers>
#include <utility>

namespace ks {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

/// Numerical slack for floating-point geometry. The underlying mathematics
/// is exact; these only absorb rounding.
struct Tolerances {
    double norm = 1e-12;  ///< |‖v‖ - 1|, rotation orthogonality
    double ortho = 1e-9;  ///< |⟨a, b⟩| for vectors declared orthogonal
};

inline constexpr Tolerances kDefaultTolerances{};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// A Vec3 with ‖v‖ = 1 to within the norm tolerance.
class UnitVec3 {
public:
    /// Wraps an already-unit vector; throws DomainError otherwise.
    static UnitVec3 checked(const Vec3& v, const Tolerances& tol = kDefaultTolerances);
    /// Scales v to unit length; throws DomainError for a (near) zero vector.
    static UnitVec3 normalize(const Vec3& v);

    const Vec3& vec() const { return v_; }
    operator const Vec3&() const { return v_; }  // NOLINT(google-explicit-constructor)
    double x() const { return v_.x; }
    double y() const { return v_.y; }
    double z() const { return v_.z; }

    UnitVec3 operator-() const { return UnitVec3(-v_); }
    friend bool operator==(const UnitVec3&, const UnitVec3&) = default;

private:
    explicit UnitVec3(const Vec3& v) : v_(v) {}
    Vec3 v_;
};

/// Latitude/longitude point on S^2. phi is kept in [-pi, pi); at the poles
/// phi is canonicalized to 0 so that equality is well defined.
class SphPoint {
public:
    /// Throws DomainError if theta is outside [-pi/2, pi/2] or either
    /// coordinate is not finite. phi may be any finite angle.
    static SphPoint make(double theta, double phi);

    double theta() const { return theta_; }
    double phi() const { return phi_; }

    friend bool operator==(const SphPoint&, const SphPoint&) = default;

private:
    SphPoint(double theta, double phi) : theta_(theta), phi_(phi) {}
    double theta_;
    double phi_;
};

/// Reduces an angle to [-pi, pi).
double normalize_angle(double phi);

UnitVec3 to_cartesian(const SphPoint& p);
SphPoint from_cartesian(const Vec3& v);

/// The normal p_perp of the descent circle with apex p:
/// (sin(theta_p) cos(phi_p), sin(theta_p) sin(phi_p), -cos(theta_p)).
UnitVec3 perp_of_apex(const SphPoint& p);

/// Great circle whose northernmost (or southernmost) point is the apex.
/// Apexes on the equator or at a pole are rejected: the first degenerates to
/// the equator itself, the second has no well-defined descent direction.
class DescentCircle {
public:
    explicit DescentCircle(const SphPoint& apex);

    const SphPoint& apex() const { return apex_; }
    UnitVec3 normal() const { return perp_of_apex(apex_); }

    /// Point reached after travelling an arc of length t from the apex; the
    /// direction of travel is toward the first equator crossing.
    UnitVec3 point_at_arc(double t) const;

    bool contains(const Vec3& x, const Tolerances& tol = kDefaultTolerances) const;

private:
    SphPoint apex_;
};

/// theta(phi) = atan(tan(theta_p) cos(phi - phi_p)) along C(p).
double descent_theta(const DescentCircle& c, double phi);

/// The two points where C(p) crosses the equator, ±(-sin(phi_p), cos(phi_p), 0).
std::pair<UnitVec3, UnitVec3> equator_crossings(const DescentCircle& c);

/// |phi_r - phi_p| = acos(sqrt(tan(theta_q) / tan(theta_p))) for the two-step
/// zig-zag from latitude theta_p down to theta_q on the same meridian.
/// Both latitudes must lie in the open interval (0, pi/2) and theta_q <=
/// theta_p. Callers mirror southern-hemisphere problems before calling.
double two_step_delta_phi(double theta_p, double theta_q);

struct TwoStepChain {
    SphPoint r;          ///< intermediate point, on C(p)
    SphPoint q;          ///< target point, on C(r) and on p's meridian
    double delta_phi;    ///< nonnegative zig azimuth
};

/// Builds the two-step descent p -> r -> q. zig selects the side (+1 or -1)
/// to which r is displaced in longitude. The result is checked: r must lie
/// on C(p) and q on C(r) within the orthogonality tolerance.
TwoStepChain two_step_chain(const SphPoint& p, double theta_q, int zig = +1);

/// Proper orthogonal 3x3 matrix, row-major.
class Rotation {
public:
    Rotation();  // identity

    /// Validates orthogonality and det = +1; throws DomainError otherwise.
    static Rotation from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2,
                              const Tolerances& tol = kDefaultTolerances);
    /// Right-handed rotation by angle about the given (nonzero) axis.
    static Rotation axis_angle(const Vec3& axis, double angle);

    Vec3 apply(const Vec3& v) const;
    UnitVec3 apply(const UnitVec3& v) const;
    Rotation inverse() const;
    double determinant() const;
    double operator()(int row, int col) const { return m_[static_cast<std::size_t>(3 * row + col)]; }

    friend Rotation operator*(const Rotation& a, const Rotation& b);

private:
    explicit Rotation(const std::array<double, 9>& m) : m_(m) {}
    std::array<double, 9> m_;
};

/// R with R p = (0, 0, 1). The south pole maps via a half turn about x.
Rotation rotation_to_pole(const UnitVec3& p);

/// Rotation about the z axis shifting every longitude by delta_phi.
Rotation rotation_about_polar_axis(double delta_phi);

struct Triad {
    UnitVec3 n1;
    UnitVec3 n2;
    UnitVec3 n3;

    std::array<UnitVec3, 3> vectors() const { return {n1, n2, n3}; }
};

/// Throws NotOrthogonal unless the three vectors are pairwise orthogonal.
Triad make_triad(const UnitVec3& a, const UnitVec3& b, const UnitVec3& c,
                 const Tolerances& tol = kDefaultTolerances);

/// Completes n1 to a triad: the coordinate axis least aligned with n1 (ties
/// resolved x < y < z) is Gram-Schmidt orthogonalized, then a cross product
/// supplies the third vector.
Triad complete_triad(const UnitVec3& n1);

/// Completes an orthogonal pair with n1 x n2. Throws NotOrthogonal.
Triad complete_triad(const UnitVec3& n1, const UnitVec3& n2,
                     const Tolerances& tol = kDefaultTolerances);

} // namespace ks
