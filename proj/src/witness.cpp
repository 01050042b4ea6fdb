#include "ks/witness.hpp"

#include "ks/errors.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace ks {

namespace {

constexpr Vec3 kNorth{0.0, 0.0, 1.0};

double radical_inverse(std::size_t index, std::size_t base) {
    double result = 0.0;
    double f = 1.0 / static_cast<double>(base);
    while (index > 0) {
        result += f * static_cast<double>(index % base);
        index /= base;
        f /= static_cast<double>(base);
    }
    return result;
}

double frac(double x) { return x - std::floor(x); }

Vec3 sph(double theta, double phi) { return to_cartesian(SphPoint::make(theta, phi)); }

struct BudgetExhausted {};

using FrameTriad = std::array<Vec3, 3>;

/// Oracle access for the extractor: counts calls against the budget, records
/// every call in the current trace step, and translates between a working
/// frame (where the current pole is (0, 0, 1)) and world coordinates.
class Probe {
public:
    Probe(const Valuation& v, std::size_t budget, std::vector<TraceStep>& trace)
        : v_(v), budget_(budget), trace_(trace) {}

    void set_frame(const Rotation& world_to_frame) {
        frame_ = world_to_frame;
        to_world_ = world_to_frame.inverse();
    }
    const Rotation& frame() const { return frame_; }

    /// The world point a frame vector denotes. Every evaluation and every
    /// emitted certificate goes through here, so they agree bit for bit.
    UnitVec3 world_point(const Vec3& f) const { return UnitVec3::normalize(to_world_.apply(f)); }

    int operator()(const Vec3& f) { return eval_world(world_point(f)); }

    int eval_world(const UnitVec3& w) {
        if (count_ >= budget_) throw BudgetExhausted{};
        ++count_;
        return record(w);
    }

    /// Evaluation outside the budget, used to re-verify a certificate.
    int verify_world(const UnitVec3& w) {
        ++count_;
        return record(w);
    }

    void begin(StepKind kind, std::string note = {}) { trace_.push_back({kind, std::move(note), {}}); }
    void annotate(std::string note) {
        if (!trace_.empty()) trace_.back().note = std::move(note);
    }
    std::size_t count() const { return count_; }

private:
    int record(const UnitVec3& w) {
        const int value = evaluate(v_, w.vec());
        if (trace_.empty()) begin(StepKind::PoleSearch);
        trace_.back().evaluations.push_back({w.vec(), value});
        return value;
    }

    const Valuation& v_;
    std::size_t budget_;
    std::vector<TraceStep>& trace_;
    Rotation frame_;
    Rotation to_world_;
    std::size_t count_ = 0;
};

/// Given v(pole) = 1, v(apex) = 0 and x on C(apex) with v(x) = 1, one of
/// three triads breaks the sum rule:
///   v(s) = 1 at the equator crossing      -> {pole, s, pole x s}   sum >= 2
///   v(p_perp) = 0                          -> {apex, s, p_perp}     sum = 0
///   v(p_perp) = 1                          -> {p_perp, x, p_perp x x} sum >= 2
/// Returns nothing if v(apex) = 1 or v(x) = 0 (no conflict to exploit).
std::optional<FrameTriad> zero_circle_certificate(Probe& probe, const SphPoint& apex, const Vec3& x) {
    const Vec3 p = to_cartesian(apex);
    if (probe(p) != 0) return std::nullopt;
    if (probe(x) != 1) return std::nullopt;
    const DescentCircle circle(apex);
    const Vec3 s = equator_crossings(circle).first;
    if (probe(s) == 1) return FrameTriad{kNorth, s, UnitVec3::normalize(cross(kNorth, s))};
    const Vec3 n = circle.normal();
    if (probe(n) == 0) return FrameTriad{p, s, n};
    return FrameTriad{n, x, UnitVec3::normalize(cross(n, x))};
}

bool usable_apex(double theta) { return std::isfinite(theta) && theta > 1e-9 && theta < kHalfPi - 1e-9; }

class Extractor {
public:
    Extractor(const Valuation& v, const WitnessConfig& cfg)
        : v_(v), cfg_(cfg), probe_(v, cfg.max_descent_probes, report_.trace), sampler_(cfg.rng_seed) {
        report_.outcome = NotFound{};
    }

    WitnessReport run() {
        try {
            if (search()) return finish();
        } catch (const BudgetExhausted&) {
            report_.stats.budget_exhausted = true;
        }
        return finish();
    }

    WitnessReport run_from(const UnitVec3& pole) {
        try {
            if (from_pole(pole)) return finish();
        } catch (const BudgetExhausted&) {
            report_.stats.budget_exhausted = true;
        }
        return finish();
    }

private:
    bool search() {
        probe_.begin(StepKind::PoleSearch);
        std::vector<UnitVec3> zeros;
        std::vector<UnitVec3> ones;
        for (std::size_t i = 0; i < cfg_.latitude_samples; ++i) {
            const UnitVec3 x = sampler_(i);
            ++report_.stats.pole_samples;
            const int value = probe_.eval_world(x);
            if (cfg_.antipodal_first && check_antipode(x, value)) return true;
            if (value == 1) {
                ones.push_back(x);
                break;
            }
            zeros.push_back(x);
        }

        if (ones.empty()) {
            // every sample was 0: a triad grown from one of them sums to 0
            // unless the completion happens to land on a 1
            probe_.begin(StepKind::TriadSampling, "all pole samples evaluated to 0");
            for (const UnitVec3& x : zeros) {
                const Triad t = complete_triad(x);
                const int sum = probe_.eval_world(t.n2) + probe_.eval_world(t.n3);
                if (sum != 1 && emit({t.n1.vec(), t.n2.vec(), t.n3.vec()})) return true;
            }
        } else if (from_pole(ones.front())) {
            return true;
        }
        return sample_triads();
    }

    bool from_pole(const UnitVec3& pole) {
        probe_.set_frame(rotation_to_pole(pole));
        probe_.begin(StepKind::PoleFound);
        if (probe_(kNorth) != 1) {
            probe_.annotate("rotated pole does not evaluate to 1");
            return false;
        }
        probe_.begin(StepKind::AntipodeCheck);
        if (check_antipode(probe_.world_point(kNorth), 1) && cfg_.antipodal_first) return true;

        if (probe_equator()) return true;

        const std::size_t meridians = cfg_.meridian_samples;
        const double offset = sampler_.offset(2);
        for (std::size_t m = 0; m < meridians; ++m) {
            const double phi = -kPi + 2.0 * kPi * (static_cast<double>(m) + offset) / static_cast<double>(meridians);
            const auto theta_star = classify_meridian(phi);
            if (done_) return true;
            if (!theta_star) continue;
            if (standardize_and_compete(*theta_star, phi)) return true;
        }
        return false;
    }

    // v(pole) = 1 forces the whole equator to 0.
    bool probe_equator() {
        probe_.begin(StepKind::EquatorProbe);
        const std::size_t n = cfg_.latitude_samples;
        const double offset = sampler_.offset(1);
        for (std::size_t k = 0; k < n; ++k) {
            const double t = kPi * (static_cast<double>(k) + offset) / static_cast<double>(n);
            const Vec3 e{std::cos(t), std::sin(t), 0.0};
            if (probe_(e) == 1) {
                return emit({kNorth, e, UnitVec3::normalize(cross(kNorth, e))});
            }
        }
        return false;
    }

    /// Scans the northern half of the meridian at phi. Returns the lowest
    /// latitude known to carry a 1 after bisecting the 1 -> 0 transition, or
    /// nothing when the meridian produced a certificate (done_ is then set).
    std::optional<double> classify_meridian(double phi) {
        ++report_.stats.meridians_classified;
        probe_.begin(StepKind::MeridianScan, "phi=" + std::to_string(phi));
        const std::size_t n = cfg_.latitude_samples;
        std::optional<double> highest_zero;
        std::optional<double> lowest_one;
        for (std::size_t j = 0; j < n; ++j) {
            const double theta = kHalfPi * static_cast<double>(n - j) / static_cast<double>(n + 1);
            const int value = probe_(sph(theta, phi));
            if (value == 0) {
                if (!highest_zero) highest_zero = theta;
                continue;
            }
            if (highest_zero) {
                // 0 above a 1 on one meridian: the two-step descent from the
                // zero must carry the 0 down to this point
                probe_.begin(StepKind::DescentChain, "two-step descent along phi=" + std::to_string(phi));
                if (two_step_certificate(SphPoint::make(*highest_zero, phi), theta)) return std::nullopt;
                return std::nullopt;
            }
            lowest_one = theta;
        }

        // dyads within the meridian circle, completed by the east vector on
        // the equator, must each sum to 1
        const Vec3 east{-std::sin(phi), std::cos(phi), 0.0};
        const std::size_t stride = std::max<std::size_t>(1, n / 32);
        for (std::size_t j = 0; j < n; j += stride) {
            const double theta = kHalfPi * static_cast<double>(n - j) / static_cast<double>(n + 1);
            const Vec3 upper = sph(theta, phi);
            const Vec3 lower = sph(theta - kHalfPi, phi);
            const int sum = probe_(upper) + probe_(lower) + probe_(east);
            if (sum != 1) {
                if (emit({upper, lower, east})) return std::nullopt;
            }
        }

        double lo = 0.0;
        double hi = kHalfPi;
        if (highest_zero) {
            lo = *highest_zero;
        } else {
            const Vec3 e = sph(0.0, phi);
            if (probe_(e) == 1) {
                emit({kNorth, e, UnitVec3::normalize(cross(kNorth, e))});
                return std::nullopt;
            }
        }
        if (lowest_one) hi = *lowest_one;

        probe_.begin(StepKind::MeridianClassified);
        while (hi - lo > cfg_.bisection_resolution) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (probe_(sph(mid, phi)) == 1) hi = mid;
            else lo = mid;
        }
        probe_.annotate("phi=" + std::to_string(phi) + " theta_star=" + std::to_string(hi));
        return hi;
    }

    bool two_step_certificate(const SphPoint& p, double theta_q) {
        const TwoStepChain chain = two_step_chain(p, theta_q);
        const Vec3 r = to_cartesian(chain.r);
        const Vec3 q = to_cartesian(chain.q);
        if (probe_(r) == 1) {
            if (auto t = zero_circle_certificate(probe_, p, r)) return emit(*t);
            return false;
        }
        if (auto t = zero_circle_certificate(probe_, chain.r, q)) return emit(*t);
        return false;
    }

    /// Rotates the point at (theta_star, phi) to the pole with the meridian
    /// arc below it as the new prime meridian. In that frame the meridian
    /// reads 1 at the pole, 0 down to the equator, 1 below; descent circles
    /// from the prime meridian then force v = 0 on {theta > 0, |phi| < pi/2}
    /// and {theta < 0, |phi| > pi/2}. A competing meridian phi* forces the
    /// same pattern shifted by phi*, and the two disagree on
    /// {theta < 0, |phi| < pi/2, |phi - phi*| > pi/2}.
    bool standardize_and_compete(double theta_star, double phi) {
        const Vec3 pole = sph(theta_star, phi);
        const Vec3 prime = sph(theta_star - kHalfPi, phi);
        const Vec3 third = UnitVec3::normalize(cross(pole, prime));
        Rotation standard;
        try {
            standard = Rotation::from_rows(prime, third, pole);
        } catch (const DomainError&) {
            return false;
        }
        const Rotation previous = probe_.frame();
        probe_.set_frame(standard * previous);
        probe_.begin(StepKind::Standardized, "theta_star=" + std::to_string(theta_star));
        if (probe_(kNorth) != 1) {
            probe_.set_frame(previous);
            return false;
        }

        const std::size_t k_max = cfg_.meridian_samples;
        static constexpr std::array<double, 3> kDepths{-kPi / 8.0, -kPi / 4.0, -3.0 * kPi / 8.0};
        for (std::size_t k = 0; k < k_max; ++k) {
            const double magnitude = kHalfPi * static_cast<double>(k + 1) / static_cast<double>(k_max + 1);
            const double phi_star = (k % 2 == 0) ? magnitude : -magnitude;
            ++report_.stats.competing_meridians;
            probe_.begin(StepKind::CompetingMeridian, "phi_star=" + std::to_string(phi_star));
            // middle of the conflict window in longitude
            const double phi_x = phi_star > 0.0 ? -kHalfPi + 0.5 * phi_star : kHalfPi + 0.5 * phi_star;
            for (double theta_x : kDepths) {
                if (resolve_conflict(theta_x, phi_x, phi_star)) return true;
            }
        }
        probe_.set_frame(previous);
        return false;
    }

    bool resolve_conflict(double theta_x, double phi_x, double phi_star) {
        const Vec3 x = sph(theta_x, phi_x);
        if (probe_(x) == 1) {
            // x lies on the descent circle of a point on the competing meridian
            const double theta_c = std::atan(std::tan(theta_x) / std::cos(phi_x - phi_star));
            if (!usable_apex(theta_c)) return false;
            const SphPoint competing = SphPoint::make(theta_c, phi_star);
            if (auto t = zero_circle_certificate(probe_, competing, x)) return emit(*t);
            // v = 1 on the competing meridian: that point in turn lies on the
            // descent circle of a prime-meridian point
            const double theta_p = std::atan(std::tan(theta_c) / std::cos(phi_star));
            if (!usable_apex(theta_p)) return false;
            if (auto t = zero_circle_certificate(probe_, SphPoint::make(theta_p, 0.0), to_cartesian(competing))) {
                return emit(*t);
            }
            return false;
        }
        // x = 0 where the prime meridian forces 1: its dyad partner on the
        // same meridian plus the east vector must supply the 1
        const Vec3 y = sph(theta_x + kHalfPi, phi_x);
        const Vec3 e{-std::sin(phi_x), std::cos(phi_x), 0.0};
        const int vy = probe_(y);
        const int ve = probe_(e);
        if (vy + ve != 1) return emit({x, y, e});
        if (ve == 1) return emit({kNorth, e, UnitVec3::normalize(cross(kNorth, e))});
        const double theta_p = std::atan(std::tan(theta_x + kHalfPi) / std::cos(phi_x));
        if (!usable_apex(theta_p)) return false;
        if (auto t = zero_circle_certificate(probe_, SphPoint::make(theta_p, 0.0), y)) return emit(*t);
        return false;
    }

    bool sample_triads() {
        probe_.set_frame(Rotation());
        probe_.begin(StepKind::TriadSampling);
        const double offset = sampler_.offset(3);
        for (std::size_t k = 0;; ++k) {
            ++report_.stats.triads_sampled;
            const Triad base = complete_triad(sampler_(cfg_.latitude_samples + k));
            const double t = 2.0 * kPi * frac(static_cast<double>(k) * 0.6180339887498949 + offset);
            const Vec3 a = std::cos(t) * base.n2.vec() + std::sin(t) * base.n3.vec();
            const Vec3 b = UnitVec3::normalize(cross(base.n1, a));
            const FrameTriad triad{base.n1.vec(), UnitVec3::normalize(a).vec(), b};
            int sum = 0;
            for (const Vec3& n : triad) sum += probe_(n);
            if (sum != 1 && emit(triad)) return true;
        }
    }

    /// Records an antipodal mismatch at x; returns true if one was found.
    bool check_antipode(const UnitVec3& x, int value) {
        const int opposite = probe_.eval_world(-x);
        if (opposite == value) return false;
        if (!antipodal_) antipodal_ = AntipodalViolation{x, value, opposite};
        if (cfg_.antipodal_first) done_ = true;
        return true;
    }

    /// Converts a frame triad to world coordinates and re-evaluates it from
    /// scratch. Only a triad whose fresh sum differs from 1 is accepted.
    bool emit(const FrameTriad& f) {
        try {
            const Triad t = make_triad(probe_.world_point(f[0]), probe_.world_point(f[1]),
                                       probe_.world_point(f[2]));
            probe_.begin(StepKind::FinalTriad);
            int sum = 0;
            for (const UnitVec3& n : t.vectors()) sum += probe_.verify_world(n);
            if (sum != 1 && check_basis(v_, t) == sum) {
                report_.outcome = ViolatingBasis{t, sum};
                done_ = true;
                return true;
            }
            probe_.annotate("candidate triad sums to 1, discarded");
        } catch (const NotOrthogonal&) {
        }
        return false;
    }

    WitnessReport finish() {
        if (!std::holds_alternative<ViolatingBasis>(report_.outcome) && antipodal_) {
            report_.outcome = *antipodal_;
        }
        report_.stats.evaluations = probe_.count();
        if (auto* nf = std::get_if<NotFound>(&report_.outcome)) nf->stats = report_.stats;
        return std::move(report_);
    }

    const Valuation& v_;
    WitnessConfig cfg_;
    WitnessReport report_;
    Probe probe_;
    SphereSampler sampler_;
    std::optional<AntipodalViolation> antipodal_;
    bool done_ = false;
};

} // namespace

SphereSampler::SphereSampler(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (double& s : shift_) s = static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

UnitVec3 SphereSampler::operator()(std::size_t index) const {
    const double u = frac(radical_inverse(index + 1, 2) + shift_[0]);
    const double w = frac(radical_inverse(index + 1, 3) + shift_[1]);
    const double z = 2.0 * u - 1.0;
    const double phi = 2.0 * kPi * w - kPi;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return UnitVec3::normalize({r * std::cos(phi), r * std::sin(phi), z});
}

void validate(const WitnessConfig& cfg) {
    if (cfg.meridian_samples == 0 || cfg.latitude_samples == 0 || cfg.max_descent_probes == 0) {
        throw DomainError("witness budgets must be at least 1");
    }
    if (!(cfg.bisection_resolution > 0.0)) throw DomainError("bisection resolution must be positive");
}

std::string to_string(StepKind kind) {
    switch (kind) {
    case StepKind::PoleSearch: return "pole_search";
    case StepKind::PoleFound: return "pole_found";
    case StepKind::AntipodeCheck: return "antipode_check";
    case StepKind::EquatorProbe: return "equator_probe";
    case StepKind::MeridianScan: return "meridian_scan";
    case StepKind::MeridianClassified: return "meridian_classified";
    case StepKind::Standardized: return "standardized";
    case StepKind::CompetingMeridian: return "competing_meridian";
    case StepKind::DescentChain: return "descent_chain";
    case StepKind::TriadSampling: return "triad_sampling";
    case StepKind::FinalTriad: return "final_triad";
    }
    return "unknown";
}

bool certificate_holds(const Valuation& v, const WitnessReport& report, const Tolerances& tol) {
    if (const auto* vb = std::get_if<ViolatingBasis>(&report.outcome)) {
        try {
            const int sum = check_basis(v, vb->triad, tol);
            return sum != 1 && sum == vb->sum;
        } catch (const NotABasis&) {
            return false;
        }
    }
    if (const auto* av = std::get_if<AntipodalViolation>(&report.outcome)) {
        return evaluate(v, av->n.vec()) == av->value && evaluate(v, (-av->n).vec()) == av->antipode_value &&
               av->value != av->antipode_value;
    }
    return true;
}

GreatCircleClass classify_great_circle(const Valuation& v, const UnitVec3& normal, std::size_t samples) {
    if (samples < 2) throw DomainError("great circle classification needs at least 2 samples");
    GreatCircleClass out;
    out.normal_value = evaluate(v, normal.vec());
    const Triad frame = complete_triad(normal);
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = kPi * static_cast<double>(i) / static_cast<double>(samples);
        const Vec3 x = std::cos(t) * frame.n2.vec() + std::sin(t) * frame.n3.vec();
        const Vec3 y = -std::sin(t) * frame.n2.vec() + std::cos(t) * frame.n3.vec();
        const int vx = evaluate(v, x);
        const int vy = evaluate(v, y);
        out.points_sampled += 2;
        out.ones += static_cast<std::size_t>(vx + vy);
        const bool broken = out.normal_value == 1 ? (vx == 1 || vy == 1) : (vx + vy != 1);
        if (broken) {
            out.kind = CircleKind::ViolationFound;
            out.triad = make_triad(normal, UnitVec3::normalize(x), UnitVec3::normalize(y));
            return out;
        }
    }
    out.kind = out.normal_value == 1 ? CircleKind::AllZero : CircleKind::FiftyFifty;
    return out;
}

DescentCheck propagate_zero_along_descent(const Valuation& v, const SphPoint& p, std::size_t samples) {
    if (p.theta() == 0.0 || std::abs(p.theta()) == kHalfPi) {
        throw PreconditionFailed("descent apex must be off the equator and the poles");
    }
    if (evaluate(v, kNorth) != 1) throw PreconditionFailed("v(north pole) must be 1");
    const Vec3 pv = to_cartesian(p);
    if (evaluate(v, pv) != 0) throw PreconditionFailed("v(p) must be 0");

    const auto violation = [&](const Vec3& a, const Vec3& b, const Vec3& c) -> DescentCheck {
        const Triad t = make_triad(UnitVec3::normalize(a), UnitVec3::normalize(b), UnitVec3::normalize(c));
        return DescentViolation{t, check_basis(v, t)};
    };

    const DescentCircle circle(p);
    const Vec3 s = equator_crossings(circle).first;
    if (evaluate(v, s) == 1) return violation(kNorth, s, cross(kNorth, s));
    const Vec3 n = circle.normal();
    if (evaluate(v, n) == 0) return violation(pv, s, n);
    for (std::size_t k = 1; k < samples; ++k) {
        const Vec3 x = circle.point_at_arc(2.0 * kPi * static_cast<double>(k) / static_cast<double>(samples));
        if (evaluate(v, x) == 1) return violation(n, x, cross(n, x));
    }
    return ZeroCircleConfirmed{samples};
}

WitnessReport extract_witness(const Valuation& v, const WitnessConfig& cfg) {
    validate(cfg);
    if (v.dimension() != 3) throw DomainError("witness extraction needs a valuation on S^2");
    Extractor ex(v, cfg);
    return ex.run();
}

WitnessReport extract_witness_from_pole(const Valuation& v, const UnitVec3& pole, const WitnessConfig& cfg) {
    validate(cfg);
    if (v.dimension() != 3) throw DomainError("witness extraction needs a valuation on S^2");
    Extractor ex(v, cfg);
    return ex.run_from(pole);
}

} // namespace ks
