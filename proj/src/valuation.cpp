#include "ks/valuation.hpp"

#include "ks/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

namespace ks {

namespace {

int require_bit(int value) {
    if (value != 0 && value != 1) {
        throw DomainError("valuation returned " + std::to_string(value) + ", expected 0 or 1");
    }
    return value;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double latitude_of(const Vec3& n) { return std::atan2(n.z, std::hypot(n.x, n.y)); }

} // namespace

int evaluate(const Valuation& v, const Vec3& n) {
    if (v.dimension() != 3) {
        throw DomainError("expected a valuation on S^2, got dimension " + std::to_string(v.dimension()));
    }
    const std::array<double, 3> coords{n.x, n.y, n.z};
    return require_bit(v.evaluate(coords));
}

int Valuation3::evaluate(std::span<const double> n) const {
    if (n.size() != 3) throw DomainError("expected a 3-vector");
    return evaluate(Vec3{n[0], n[1], n[2]});
}

ConstantValuation::ConstantValuation(std::size_t dimension, int value)
    : dimension_(dimension), value_(value) {
    if (dimension == 0) throw DomainError("valuation dimension must be at least 1");
    require_bit(value);
}

FunctionValuation::FunctionValuation(std::size_t dimension, Fn fn, bool concurrent_safe)
    : dimension_(dimension), fn_(std::move(fn)), concurrent_safe_(concurrent_safe) {
    if (dimension == 0) throw DomainError("valuation dimension must be at least 1");
    if (!fn_) throw DomainError("empty valuation callable");
}

int FunctionValuation::evaluate(std::span<const double> n) const { return require_bit(fn_(n)); }

ValuationPtr make_valuation_1d(int value_of_basis) {
    return std::make_shared<ConstantValuation>(1, require_bit(value_of_basis));
}

Generator2D::Generator2D(std::vector<Interval> ones) : ones_(std::move(ones)) {
    double previous_end = 0.0;
    for (const auto& [lo, hi] : ones_) {
        if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
            throw DomainError("generator interval must be nonempty and finite");
        }
        if (lo < previous_end || hi > kHalfPi) {
            throw DomainError("generator intervals must be sorted, disjoint and inside [0, pi/2)");
        }
        previous_end = hi;
    }
}

int Generator2D::operator()(double theta) const {
    if (!(theta >= 0.0 && theta < kHalfPi)) {
        throw DomainError("generator argument outside [0, pi/2)");
    }
    auto it = std::upper_bound(ones_.begin(), ones_.end(), theta,
                               [](double t, const Interval& iv) { return t < iv.first; });
    if (it == ones_.begin()) return 0;
    --it;
    return theta < it->second ? 1 : 0;
}

double Generator2D::ones_measure() const {
    double total = 0.0;
    for (const auto& [lo, hi] : ones_) total += hi - lo;
    return total;
}

int Valuation2D::value_at(double theta) const {
    double t = std::fmod(theta, 2.0 * kPi);
    if (t < 0.0) t += 2.0 * kPi;
    if (t >= 2.0 * kPi) t = 0.0;
    int quarter = static_cast<int>(std::floor(t / kHalfPi));
    quarter = std::clamp(quarter, 0, 3);
    double r = t - quarter * kHalfPi;
    if (r < 0.0) r = 0.0;
    if (r >= kHalfPi) r = std::nextafter(kHalfPi, 0.0);
    const int g = g_(r);
    return quarter % 2 == 0 ? g : 1 - g;
}

int Valuation2D::evaluate(std::span<const double> n) const {
    if (n.size() != 2) throw DomainError("expected a 2-vector");
    return value_at(std::atan2(n[1], n[0]));
}

Valuation2D make_valuation_2d(Generator2D g) { return Valuation2D(std::move(g)); }

StepMeridianValuation::StepMeridianValuation(double theta_star, StepBoundary boundary)
    : theta_star_(theta_star), boundary_(boundary) {
    if (!(theta_star >= 0.0 && theta_star <= kHalfPi)) {
        throw DomainError("theta_star must lie in [0, pi/2]");
    }
}

int StepMeridianValuation::value_at_latitude(double theta) const {
    if (!(theta >= -kHalfPi && theta <= kHalfPi)) throw DomainError("latitude outside [-pi/2, pi/2]");
    const double lower = theta_star_ - kHalfPi;
    if (boundary_ == StepBoundary::ClosedAtStar) {
        if (theta >= theta_star_) return 1;
        return theta >= lower ? 0 : 1;
    }
    if (theta > theta_star_) return 1;
    return theta > lower ? 0 : 1;
}

int StepMeridianValuation::evaluate(const Vec3& n) const { return value_at_latitude(latitude_of(n)); }

FourSegmentValuation::FourSegmentValuation(int pole_value) : pole_value_(require_bit(pole_value)) {}

int FourSegmentValuation::evaluate(const Vec3& n) const {
    if (n.x == 0.0 && n.y == 0.0) return pole_value_;
    if (n.z == 0.0) return 0;
    // x > 0 <=> |phi| < pi/2; x == 0 is one of the phi = ±pi/2 meridians.
    if (n.z > 0.0) {
        if (n.x != 0.0) return n.x > 0.0 ? 0 : 1;
        return n.y > 0.0 ? 0 : 1;
    }
    if (n.x != 0.0) return n.x > 0.0 ? 1 : 0;
    return n.y < 0.0 ? 0 : 1;
}

PolarCapValuation::PolarCapValuation(double half_angle) : half_angle_(half_angle) {
    if (!(half_angle >= 0.0 && half_angle <= kHalfPi)) {
        throw DomainError("polar cap half angle must lie in [0, pi/2]");
    }
}

int PolarCapValuation::evaluate(const Vec3& n) const {
    return std::abs(n.z) >= std::cos(half_angle_) ? 1 : 0;
}

int MeridianValuation2D::evaluate(const Vec3& n) const {
    if (n.x == 0.0 && n.y == 0.0) return 1;
    const double from_north = std::atan2(std::hypot(n.x, n.y), n.z);
    const bool reference_half = n.x > 0.0 || (n.x == 0.0 && n.y < 0.0);
    return circle_.value_at(reference_half ? from_north : 2.0 * kPi - from_north);
}

RotatedValuation::RotatedValuation(std::shared_ptr<const Valuation> base, Rotation rotation)
    : base_(std::move(base)), rotation_(rotation) {
    if (!base_ || base_->dimension() != 3) throw DomainError("rotated valuation needs a 3D base");
}

int RotatedValuation::evaluate(const Vec3& n) const { return ks::evaluate(*base_, rotation_.apply(n)); }

FlippedCapValuation::FlippedCapValuation(std::shared_ptr<const Valuation> base, const UnitVec3& center,
                                         double radius, bool antipodal)
    : base_(std::move(base)), center_(center), cos_radius_(std::cos(radius)), antipodal_(antipodal) {
    if (!base_ || base_->dimension() != 3) throw DomainError("flipped cap needs a 3D base");
    if (!(radius >= 0.0 && radius < kHalfPi)) throw DomainError("cap radius must lie in [0, pi/2)");
}

int FlippedCapValuation::evaluate(const Vec3& n) const {
    const int base = ks::evaluate(*base_, n);
    const double c = dot(n, center_.vec());
    const bool inside = c >= cos_radius_ || (antipodal_ && -c >= cos_radius_);
    return inside ? 1 - base : base;
}

int check_basis(const Valuation& v, std::span<const std::vector<double>> basis, const Tolerances& tol) {
    const std::size_t d = v.dimension();
    if (basis.size() != d) {
        throw NotABasis("basis has " + std::to_string(basis.size()) + " vectors, expected " + std::to_string(d));
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (basis[i].size() != d) throw NotABasis("basis vector has the wrong dimension");
        if (std::abs(std::sqrt(dot(basis[i], basis[i])) - 1.0) > tol.ortho) {
            throw NotABasis("basis vector " + std::to_string(i) + " is not unit length");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(dot(basis[i], basis[j])) > tol.ortho) {
                throw NotABasis("basis vectors " + std::to_string(j) + " and " + std::to_string(i) +
                                " are not orthogonal");
            }
        }
    }
    int sum = 0;
    for (const auto& n : basis) sum += require_bit(v.evaluate(n));
    return sum;
}

int check_basis(const Valuation& v, const Triad& triad, const Tolerances& tol) {
    std::vector<std::vector<double>> basis;
    for (const UnitVec3& n : triad.vectors()) basis.push_back({n.x(), n.y(), n.z()});
    return check_basis(v, basis, tol);
}

std::vector<std::vector<double>> orthonormal_complement(const std::vector<std::vector<double>>& vectors,
                                                        std::size_t d) {
    std::vector<std::vector<double>> spanned = vectors;
    std::vector<std::vector<double>> result;
    std::vector<bool> used(d, false);
    while (spanned.size() < d) {
        std::size_t best = d;
        double best_norm = -1.0;
        std::vector<double> best_residual;
        for (std::size_t axis = 0; axis < d; ++axis) {
            if (used[axis]) continue;
            std::vector<double> r(d, 0.0);
            r[axis] = 1.0;
            // two passes of modified Gram-Schmidt keep the residual orthogonal
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& b : spanned) {
                    const double c = dot(r, b);
                    for (std::size_t k = 0; k < d; ++k) r[k] -= c * b[k];
                }
            }
            const double rn = std::sqrt(dot(r, r));
            if (rn > best_norm) {
                best_norm = rn;
                best = axis;
                best_residual = std::move(r);
            }
        }
        if (best == d || best_norm < 1e-8) throw DomainError("vectors do not span an orthonormal set");
        used[best] = true;
        for (double& c : best_residual) c /= best_norm;
        spanned.push_back(best_residual);
        result.push_back(std::move(best_residual));
    }
    return result;
}

ReducedValuation::ReducedValuation(ValuationPtr base, std::vector<std::vector<double>> zeros,
                                   std::vector<std::vector<double>> frame)
    : base_(std::move(base)), zeros_(std::move(zeros)), frame_(std::move(frame)) {}

std::vector<double> ReducedValuation::embed(const Vec3& x) const {
    const std::size_t d = base_->dimension();
    std::vector<double> out(d, 0.0);
    const std::array<double, 3> c{x.x, x.y, x.z};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t k = 0; k < d; ++k) out[k] += c[i] * frame_[i][k];
    }
    return out;
}

int ReducedValuation::evaluate(const Vec3& n) const { return require_bit(base_->evaluate(embed(n))); }

std::vector<std::vector<double>> ReducedValuation::lift(const Triad& t) const {
    std::vector<std::vector<double>> basis = zeros_;
    for (const UnitVec3& n : t.vectors()) basis.push_back(embed(n));
    return basis;
}

std::shared_ptr<const ReducedValuation> reduce_dimension(ValuationPtr v, std::vector<std::vector<double>> zeros,
                                                         const Tolerances& tol) {
    if (!v) throw DomainError("null valuation");
    const std::size_t d = v->dimension();
    if (d < 4) throw DomainError("dimension reduction needs d >= 4");
    if (zeros.size() != d - 3) {
        throw ZeroSetInvalid("expected " + std::to_string(d - 3) + " zero vectors, got " +
                             std::to_string(zeros.size()));
    }
    for (std::size_t i = 0; i < zeros.size(); ++i) {
        if (zeros[i].size() != d) throw ZeroSetInvalid("zero vector has the wrong dimension");
        if (std::abs(std::sqrt(dot(zeros[i], zeros[i])) - 1.0) > tol.ortho) {
            throw ZeroSetInvalid("zero vector " + std::to_string(i) + " is not unit length");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(dot(zeros[i], zeros[j])) > tol.ortho) {
                throw ZeroSetInvalid("zero vectors are not mutually orthogonal");
            }
        }
        if (require_bit(v->evaluate(zeros[i])) != 0) {
            throw ZeroSetInvalid("valuation is 1 on zero vector " + std::to_string(i));
        }
    }
    auto frame = orthonormal_complement(zeros, d);
    return std::shared_ptr<const ReducedValuation>(new ReducedValuation(std::move(v), std::move(zeros),
                                                                        std::move(frame)));
}

ZeroSetSearch find_zero_orthogonal_set(const Valuation& v, std::size_t budget, std::uint64_t seed) {
    if (budget == 0) throw DomainError("search budget must be at least 1");
    const std::size_t d = v.dimension();
    const std::size_t needed = d >= 3 ? d - 3 : 0;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<std::vector<double>> kept;
    std::size_t draws = 0;
    std::size_t ones = 0;
    while (kept.size() < needed && draws < budget) {
        const auto complement = orthonormal_complement(kept, d);
        std::vector<double> x(d, 0.0);
        for (const auto& b : complement) {
            const double g = gauss(rng);
            for (std::size_t k = 0; k < d; ++k) x[k] += g * b[k];
        }
        const double xn = std::sqrt(dot(x, x));
        ++draws;
        if (xn < 1e-12) continue;
        for (double& c : x) c /= xn;

        if (require_bit(v.evaluate(x)) == 0) {
            kept.push_back(std::move(x));
            continue;
        }
        ++ones;
        std::vector<std::vector<double>> basis = kept;
        basis.push_back(x);
        for (auto& c : orthonormal_complement(basis, d)) basis.push_back(std::move(c));
        const int sum = check_basis(v, basis);
        if (sum != 1) return ViolatingFrame{std::move(basis), sum};
    }
    if (kept.size() == needed) return ZeroSetFound{std::move(kept), draws};
    return ZeroSetNotFound{draws, ones, kept.size()};
}

} // namespace ks
