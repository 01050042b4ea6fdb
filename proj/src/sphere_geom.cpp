#include "ks/sphere_geom.hpp"

#include "ks/errors.hpp"

#include <algorithm>
#include <string>

namespace ks {

namespace {

std::string describe(const Vec3& v) {
    return "(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ", " + std::to_string(v.z) + ")";
}

} // namespace

UnitVec3 UnitVec3::checked(const Vec3& v, const Tolerances& tol) {
    const double n = norm(v);
    if (!(std::abs(n - 1.0) <= tol.norm)) {
        throw DomainError("vector " + describe(v) + " is not unit length");
    }
    return UnitVec3(v);
}

UnitVec3 UnitVec3::normalize(const Vec3& v) {
    const double n = norm(v);
    if (!(n > 1e-300) || !std::isfinite(n)) {
        throw DomainError("cannot normalize " + describe(v));
    }
    return UnitVec3((1.0 / n) * v);
}

double normalize_angle(double phi) {
    double r = std::fmod(phi + kPi, 2.0 * kPi);
    if (r < 0.0) r += 2.0 * kPi;
    r -= kPi;
    // fmod can land exactly on +pi after the shift through rounding
    if (r >= kPi) r -= 2.0 * kPi;
    return r;
}

SphPoint SphPoint::make(double theta, double phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi)) {
        throw DomainError("non-finite spherical coordinate");
    }
    if (theta < -kHalfPi || theta > kHalfPi) {
        throw DomainError("latitude " + std::to_string(theta) + " outside [-pi/2, pi/2]");
    }
    if (theta == kHalfPi || theta == -kHalfPi) return SphPoint(theta, 0.0);
    return SphPoint(theta, normalize_angle(phi));
}

UnitVec3 to_cartesian(const SphPoint& p) {
    const double ct = std::cos(p.theta());
    return UnitVec3::normalize({ct * std::cos(p.phi()), ct * std::sin(p.phi()), std::sin(p.theta())});
}

SphPoint from_cartesian(const Vec3& v) {
    const double rho = std::hypot(v.x, v.y);
    const double theta = std::atan2(v.z, rho);
    if (rho == 0.0) return SphPoint::make(v.z >= 0.0 ? kHalfPi : -kHalfPi, 0.0);
    return SphPoint::make(theta, std::atan2(v.y, v.x));
}

UnitVec3 perp_of_apex(const SphPoint& p) {
    const double st = std::sin(p.theta());
    return UnitVec3::normalize({st * std::cos(p.phi()), st * std::sin(p.phi()), -std::cos(p.theta())});
}

DescentCircle::DescentCircle(const SphPoint& apex) : apex_(apex) {
    if (apex.theta() == 0.0) {
        throw DomainError("descent circle apex on the equator is degenerate");
    }
    if (std::abs(apex.theta()) == kHalfPi) {
        throw DomainError("descent circle apex at a pole has no descent direction");
    }
}

UnitVec3 DescentCircle::point_at_arc(double t) const {
    const Vec3 p = to_cartesian(apex_);
    const Vec3 s = equator_crossings(*this).first;
    return UnitVec3::normalize(std::cos(t) * p + std::sin(t) * s);
}

bool DescentCircle::contains(const Vec3& x, const Tolerances& tol) const {
    return std::abs(dot(x, normal().vec())) <= tol.ortho;
}

double descent_theta(const DescentCircle& c, double phi) {
    const double dphi = normalize_angle(phi - c.apex().phi());
    return std::atan(std::tan(c.apex().theta()) * std::cos(dphi));
}

std::pair<UnitVec3, UnitVec3> equator_crossings(const DescentCircle& c) {
    const double phi_p = c.apex().phi();
    const UnitVec3 s = UnitVec3::normalize({-std::sin(phi_p), std::cos(phi_p), 0.0});
    return {s, -s};
}

double two_step_delta_phi(double theta_p, double theta_q) {
    const auto in_open_quadrant = [](double t) { return std::isfinite(t) && t > 0.0 && t < kHalfPi; };
    if (!in_open_quadrant(theta_p) || !in_open_quadrant(theta_q)) {
        throw DomainError("two-step descent latitudes must lie strictly between 0 and pi/2");
    }
    if (theta_q > theta_p) {
        throw DescentAwayFromEquator("two-step descent can only move toward the equator");
    }
    const double ratio = std::tan(theta_q) / std::tan(theta_p);
    return std::acos(std::sqrt(std::clamp(ratio, 0.0, 1.0)));
}

TwoStepChain two_step_chain(const SphPoint& p, double theta_q, int zig) {
    if (p.theta() == 0.0 || std::abs(p.theta()) == kHalfPi) {
        throw DomainError("two-step chain start must be off the equator and the poles");
    }
    if (theta_q == 0.0 || (theta_q > 0.0) != (p.theta() > 0.0)) {
        throw DomainError("two-step chain target must be in the same open hemisphere as the start");
    }
    const double sign = p.theta() > 0.0 ? 1.0 : -1.0;
    const double dphi = two_step_delta_phi(sign * p.theta(), sign * theta_q);
    const double phi_r = p.phi() + (zig >= 0 ? dphi : -dphi);

    const DescentCircle cp(p);
    const SphPoint r = SphPoint::make(descent_theta(cp, phi_r), phi_r);
    const SphPoint q = SphPoint::make(theta_q, p.phi());

    const UnitVec3 rv = to_cartesian(r);
    if (!cp.contains(rv)) {
        throw Error("two-step chain: r not on C(p)");
    }
    // r == p when dphi == 0; C(r) is then C(p) and q == p.
    if (!(r == p)) {
        const DescentCircle cr(r);
        if (!cr.contains(to_cartesian(q))) {
            throw Error("two-step chain: q not on C(r)");
        }
    }
    return {r, q, dphi};
}

Rotation::Rotation() : m_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}

Rotation Rotation::from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2, const Tolerances& tol) {
    const Rotation r({r0.x, r0.y, r0.z, r1.x, r1.y, r1.z, r2.x, r2.y, r2.z});
    const std::array<Vec3, 3> rows{r0, r1, r2};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double expected = i == j ? 1.0 : 0.0;
            if (std::abs(dot(rows[i], rows[j]) - expected) > tol.norm) {
                throw DomainError("rotation rows are not orthonormal");
            }
        }
    }
    if (std::abs(r.determinant() - 1.0) > tol.norm) {
        throw DomainError("rotation determinant is not +1");
    }
    return r;
}

Rotation Rotation::axis_angle(const Vec3& axis, double angle) {
    const Vec3 k = UnitVec3::normalize(axis);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double t = 1.0 - c;
    return Rotation({t * k.x * k.x + c, t * k.x * k.y - s * k.z, t * k.x * k.z + s * k.y,
                     t * k.x * k.y + s * k.z, t * k.y * k.y + c, t * k.y * k.z - s * k.x,
                     t * k.x * k.z - s * k.y, t * k.y * k.z + s * k.x, t * k.z * k.z + c});
}

Vec3 Rotation::apply(const Vec3& v) const {
    return {m_[0] * v.x + m_[1] * v.y + m_[2] * v.z,
            m_[3] * v.x + m_[4] * v.y + m_[5] * v.z,
            m_[6] * v.x + m_[7] * v.y + m_[8] * v.z};
}

UnitVec3 Rotation::apply(const UnitVec3& v) const { return UnitVec3::normalize(apply(v.vec())); }

Rotation Rotation::inverse() const {
    return Rotation({m_[0], m_[3], m_[6], m_[1], m_[4], m_[7], m_[2], m_[5], m_[8]});
}

double Rotation::determinant() const {
    return m_[0] * (m_[4] * m_[8] - m_[5] * m_[7]) - m_[1] * (m_[3] * m_[8] - m_[5] * m_[6]) +
           m_[2] * (m_[3] * m_[7] - m_[4] * m_[6]);
}

Rotation operator*(const Rotation& a, const Rotation& b) {
    std::array<double, 9> m{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) acc += a(i, k) * b(k, j);
            m[static_cast<std::size_t>(3 * i + j)] = acc;
        }
    }
    return Rotation(m);
}

Rotation rotation_to_pole(const UnitVec3& p) {
    const Vec3 pole{0.0, 0.0, 1.0};
    const Vec3 axis = cross(p.vec(), pole);
    const double s = norm(axis);
    const double c = dot(p.vec(), pole);
    if (s < 1e-15) {
        if (c > 0.0) return Rotation();
        return Rotation::axis_angle({1.0, 0.0, 0.0}, kPi);
    }
    return Rotation::axis_angle(axis, std::atan2(s, c));
}

Rotation rotation_about_polar_axis(double delta_phi) {
    return Rotation::axis_angle({0.0, 0.0, 1.0}, delta_phi);
}

Triad make_triad(const UnitVec3& a, const UnitVec3& b, const UnitVec3& c, const Tolerances& tol) {
    if (std::abs(dot(a, b)) > tol.ortho || std::abs(dot(a, c)) > tol.ortho || std::abs(dot(b, c)) > tol.ortho) {
        throw NotOrthogonal("triad vectors are not pairwise orthogonal");
    }
    return {a, b, c};
}

Triad complete_triad(const UnitVec3& n1) {
    const std::array<double, 3> mag{std::abs(n1.x()), std::abs(n1.y()), std::abs(n1.z())};
    std::size_t axis = 0;
    for (std::size_t i = 1; i < 3; ++i) {
        if (mag[i] < mag[axis]) axis = i;
    }
    Vec3 e{};
    if (axis == 0) e.x = 1.0;
    else if (axis == 1) e.y = 1.0;
    else e.z = 1.0;
    const UnitVec3 n2 = UnitVec3::normalize(e - dot(e, n1) * n1.vec());
    const UnitVec3 n3 = UnitVec3::normalize(cross(n1, n2));
    return {n1, n2, n3};
}

Triad complete_triad(const UnitVec3& n1, const UnitVec3& n2, const Tolerances& tol) {
    if (std::abs(dot(n1, n2)) > tol.ortho) {
        throw NotOrthogonal("cannot complete a triad from non-orthogonal vectors");
    }
    return {n1, n2, UnitVec3::normalize(cross(n1, n2))};
}

} // namespace ks
