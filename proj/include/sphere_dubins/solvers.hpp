#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "sphere_dubins/geometry.hpp"
#include "sphere_dubins/tolerances.hpp"

namespace sphere_dubins {

/// Path classes of the free-terminal-heading candidate set. The declaration
/// order is the tie-break order used when two candidates have equal length.
enum class PathType { LG, RG, LR, RL, L, R, G, TRIVIAL };

inline constexpr std::array<PathType, 8> kAllPathTypes{PathType::LG, PathType::RG, PathType::LR, PathType::RL,
                                                       PathType::L,  PathType::R,  PathType::G,  PathType::TRIVIAL};

inline std::string_view to_string(PathType t) {
    switch (t) {
    case PathType::LG: return "LG";
    case PathType::RG: return "RG";
    case PathType::LR: return "LR";
    case PathType::RL: return "RL";
    case PathType::L: return "L";
    case PathType::R: return "R";
    case PathType::G: return "G";
    case PathType::TRIVIAL: return "TRIVIAL";
    }
    return "?";
}

/// Segment types making up a path class (empty for TRIVIAL).
inline std::vector<SegmentType> segment_types(PathType t) {
    using S = SegmentType;
    switch (t) {
    case PathType::LG: return {S::L, S::G};
    case PathType::RG: return {S::R, S::G};
    case PathType::LR: return {S::L, S::R};
    case PathType::RL: return {S::R, S::L};
    case PathType::L: return {S::L};
    case PathType::R: return {S::R};
    case PathType::G: return {S::G};
    case PathType::TRIVIAL: return {};
    }
    return {};
}

/// Target location expressed in the initial frame (so the start is I).
class TargetLocal {
public:
    explicit TargetLocal(const Vec3& x, double tol = kDefaultTolerances.unit_norm) : x_(x) {
        if (!x.allFinite() || std::abs(x.norm() - 1.0) > tol) {
            throw std::domain_error("target must be a unit vector");
        }
    }
    const Vec3& vec() const { return x_; }

private:
    Vec3 x_;
};

struct SolutionBranch {
    PathType type = PathType::TRIVIAL;
    double phi1 = 0.0;
    double phi2 = 0.0; // zero for single-segment classes
    double residual = 0.0;
};

namespace detail {

inline const Vec3 kE1 = Vec3::UnitX();

inline Vec3 mirror(const Vec3& v) { return {v.x(), v.y(), -v.z()}; }

inline Vec3 two_segment_endpoint(SegmentType first, SegmentType second, double r, double phi1, double phi2) {
    return segment_rotation_unchecked(first, r, phi1) * segment_rotation_unchecked(second, r, phi2).col(0);
}

inline double snap(double angle, double tol) {
    const double w = wrap_angle(angle);
    return (w < tol || kTwoPi - w < tol) ? 0.0 : w;
}

// Gauss-Newton polish of (φ1, φ2) on the endpoint equation. Never accepts a
// step that increases the residual.
inline void polish(SegmentType first, SegmentType second, const TurnRadius& r, const Vec3& target, double& phi1,
                   double& phi2) {
    const Vec3 a1 = segment_axis(first, r);
    const Vec3 a2 = segment_axis(second, r);
    Vec3 p = two_segment_endpoint(first, second, r.value(), phi1, phi2);
    double res = (p - target).norm();
    for (int it = 0; it < 8 && res > 1e-15; ++it) {
        const Mat3 s1 = segment_rotation_unchecked(first, r.value(), phi1);
        const Vec3 q = segment_rotation_unchecked(second, r.value(), phi2).col(0);
        Eigen::Matrix<double, 3, 2> jac;
        jac.col(0) = a1.cross(p);
        jac.col(1) = s1 * a2.cross(q);
        const Eigen::Vector2d step = jac.colPivHouseholderQr().solve(target - p);
        if (!step.allFinite()) break;
        const double n1 = phi1 + step(0);
        const double n2 = phi2 + step(1);
        const Vec3 pn = two_segment_endpoint(first, second, r.value(), n1, n2);
        const double rn = (pn - target).norm();
        if (!(rn < res)) break;
        phi1 = n1;
        phi2 = n2;
        p = pn;
        res = rn;
    }
    phi1 = wrap_angle(phi1);
    phi2 = wrap_angle(phi2);
}

// Shared acceptance step: polish, snap near-zero angles when that keeps the
// endpoint within tolerance, enforce the final-angle floor, residual-check
// and append unless an equivalent branch is already present.
inline void accept_branch(std::vector<SolutionBranch>& out, PathType type, const TurnRadius& r, const Vec3& target,
                          double phi1, double phi2, double min_phi2, const Tolerances& tol) {
    const auto types = segment_types(type);
    polish(types[0], types[1], r, target, phi1, phi2);

    auto residual = [&](double a, double b) {
        return (two_segment_endpoint(types[0], types[1], r.value(), a, b) - target).norm();
    };
    const double s1 = snap(phi1, tol.angle_snap);
    const double s2 = snap(phi2, tol.angle_snap);
    if ((s1 != phi1 || s2 != phi2) && residual(s1, s2) <= tol.endpoint) {
        phi1 = s1;
        phi2 = s2;
    }
    if (phi2 < min_phi2 && phi2 >= min_phi2 - tol.endpoint) phi2 = min_phi2;
    if (phi2 < min_phi2) return;

    const double res = residual(phi1, phi2);
    if (!(res <= tol.endpoint)) return;
    for (auto& b : out) {
        if (b.type == type && angle_distance(b.phi1, phi1) < 1e-9 && angle_distance(b.phi2, phi2) < 1e-9) {
            if (res < b.residual) b = {type, phi1, phi2, res};
            return;
        }
    }
    out.push_back({type, phi1, phi2, res});
}

inline SolutionBranch mirrored(SolutionBranch b, PathType type, const TurnRadius& r, const Vec3& target) {
    const auto types = segment_types(type);
    b.type = type;
    b.residual = (two_segment_endpoint(types[0], types[1], r.value(), b.phi1, b.phi2) - target).norm();
    return b;
}

} // namespace detail

/// All (φ1, φ2) with R_L(φ1)·R_G(φ2)·e1 = x_f.
///
/// With (x, y, z) the composed first column, x + r·z/√(1−r²) collapses to
/// cos φ2. For each of the two φ2 roots the first two components are linear
/// in (cos φ1, sin φ1), which fixes φ1.
inline std::vector<SolutionBranch> solve_LG(const TargetLocal& target, const TurnRadius& radius,
                                            const Tolerances& tol = kDefaultTolerances) {
    const Vec3& x = target.vec();
    const double r = radius.value();
    const double q = radius.axial();
    std::vector<SolutionBranch> out;

    double c2 = x.x() + r * x.z() / q;
    if (std::abs(c2) > 1.0 + 1e-9) return out;
    c2 = std::clamp(c2, -1.0, 1.0);
    const double base = std::acos(c2);
    for (const double phi2 : {base, kTwoPi - base}) {
        const double k = std::cos(phi2);
        const double m = std::sin(phi2);
        // [k r²   −m r] [cos φ1]   [x − k(1 − r²)]
        // [m       k r] [sin φ1] = [y            ]
        Eigen::Matrix2d a;
        a << k * r * r, -m * r, m, k * r;
        const Eigen::Vector2d rhs(x.x() - k * (1.0 - r * r), x.y());
        const Eigen::Vector2d cs = a.colPivHouseholderQr().solve(rhs);
        const double phi1 = wrap_angle(std::atan2(cs(1), cs(0)));
        detail::accept_branch(out, PathType::LG, radius, x, phi1, wrap_angle(phi2), 0.0, tol);
    }
    return out;
}

/// Mirror image of solve_LG through the plane z = 0.
inline std::vector<SolutionBranch> solve_RG(const TargetLocal& target, const TurnRadius& radius,
                                            const Tolerances& tol = kDefaultTolerances) {
    const Vec3& x = target.vec();
    std::vector<SolutionBranch> out;
    for (const auto& b : solve_LG(TargetLocal(detail::mirror(x)), radius, tol)) {
        const auto m = detail::mirrored(b, PathType::RG, radius, x);
        if (m.residual <= tol.endpoint) out.push_back(m);
    }
    return out;
}

/// Bracketed 1-D scan for the final angle of a two-turn path `first` then
/// `second`, restricted to φ2 ∈ [lo, hi).
///
/// Rotation about the first segment's axis preserves the inner product with
/// that axis, so ⟨R_second(φ2)·e1, a_first⟩ = ⟨x_f, a_first⟩ is an equation
/// in φ2 alone. Sign changes at `resolution` spacing are refined by bisection
/// to 1e-12 (tangential roots are caught as near-zero grid minima), then φ1 is
/// recovered as the rotation about a_first.
inline std::vector<SolutionBranch> solve_two_turn_scan(PathType type, const TargetLocal& target,
                                                       const TurnRadius& radius, double lo, double hi,
                                                       double resolution = 1e-3,
                                                       const Tolerances& tol = kDefaultTolerances) {
    const auto types = segment_types(type);
    const Vec3& x = target.vec();
    const Vec3 a1 = segment_axis(types[0], radius);
    const double level = x.dot(a1);
    auto g = [&](double phi2) {
        return detail::segment_rotation_unchecked(types[1], radius.value(), phi2).col(0).dot(a1) - level;
    };

    std::vector<double> roots;
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / resolution));
    const double h = (hi - lo) / static_cast<double>(n);
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i <= n; ++i) vals[i] = g(lo + h * static_cast<double>(i));
    for (std::size_t i = 0; i < n; ++i) {
        double a = lo + h * static_cast<double>(i);
        double b = a + h;
        double ga = vals[i];
        const double gb = vals[i + 1];
        if (ga == 0.0) {
            roots.push_back(a);
            continue;
        }
        if (ga * gb < 0.0) {
            while (b - a > 1e-12) {
                const double mid = 0.5 * (a + b);
                const double gm = g(mid);
                if ((gm < 0.0) == (ga < 0.0)) {
                    a = mid;
                    ga = gm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
            continue;
        }
        // Tangential root: |g| has a grid-local minimum that golden-section
        // search drives to zero.
        const double prev = i > 0 ? std::abs(vals[i - 1]) : std::abs(g(a - h));
        if (std::abs(ga) <= prev && std::abs(ga) <= std::abs(gb) && std::abs(ga) < 1e-4) {
            double l = std::max(lo, a - h);
            double u = std::min(hi, a + h);
            constexpr double kInvPhi = 0.6180339887498949;
            for (int it = 0; it < 200 && u - l > 1e-13; ++it) {
                const double m1 = u - kInvPhi * (u - l);
                const double m2 = l + kInvPhi * (u - l);
                if (std::abs(g(m1)) < std::abs(g(m2))) u = m2; else l = m1;
            }
            const double m = 0.5 * (l + u);
            if (std::abs(g(m)) < 1e-10) roots.push_back(m);
        }
    }

    std::vector<SolutionBranch> out;
    for (const double phi2 : roots) {
        const Vec3 v = detail::segment_rotation_unchecked(types[1], radius.value(), phi2).col(0);
        const double phi1 = angle_about_axis(a1, v, x);
        detail::accept_branch(out, type, radius, x, phi1, phi2, lo, tol);
    }
    return out;
}

/// All (φ1, φ2) with R_L(φ1)·R_R(φ2)·e1 = x_f and φ2 ≥ π.
///
/// The axis invariant of the L rotation eliminates φ1:
///   √(1−r²)·(1 − 2r²(1 − cos φ2)) = ⟨x_f, a_L⟩,
/// leaving a closed form for cos φ2. When the closed form yields nothing
/// (e.g. cos φ2 sits on ±1 up to rounding) the bracketed scan decides.
inline std::vector<SolutionBranch> solve_LR(const TargetLocal& target, const TurnRadius& radius,
                                            const Tolerances& tol = kDefaultTolerances) {
    const Vec3& x = target.vec();
    const double r = radius.value();
    const Vec3 a1 = segment_axis(SegmentType::L, radius);
    std::vector<SolutionBranch> out;

    const double c2 = 1.0 - (1.0 - x.dot(a1) / radius.axial()) / (2.0 * r * r);
    if (std::abs(c2) <= 1.0 + 1e-9) {
        const double base = std::acos(std::clamp(c2, -1.0, 1.0));
        for (const double phi2 : {base, kTwoPi - base}) {
            if (phi2 >= kTwoPi || phi2 < kPi - 1e-9) continue;
            const Vec3 v = detail::segment_rotation_unchecked(SegmentType::R, r, phi2).col(0);
            const double phi1 = angle_about_axis(a1, v, x);
            detail::accept_branch(out, PathType::LR, radius, x, phi1, std::max(phi2, kPi), kPi, tol);
        }
    }
    if (out.empty() && std::abs(c2) <= 1.0 + 1e-6) {
        out = solve_two_turn_scan(PathType::LR, target, radius, kPi, kTwoPi, 1e-3, tol);
    }
    return out;
}

/// Mirror image of solve_LR through the plane z = 0.
inline std::vector<SolutionBranch> solve_RL(const TargetLocal& target, const TurnRadius& radius,
                                            const Tolerances& tol = kDefaultTolerances) {
    const Vec3& x = target.vec();
    std::vector<SolutionBranch> out;
    for (const auto& b : solve_LR(TargetLocal(detail::mirror(x)), radius, tol)) {
        const auto m = detail::mirrored(b, PathType::RL, radius, x);
        if (m.residual <= tol.endpoint) out.push_back(m);
    }
    return out;
}

/// Degenerate classes: the trivial path and single L, R or G arcs.
inline std::vector<SolutionBranch> solve_single(const TargetLocal& target, const TurnRadius& radius,
                                                const Tolerances& tol = kDefaultTolerances) {
    const Vec3& x = target.vec();
    std::vector<SolutionBranch> out;
    const double trivial = (x - detail::kE1).norm();
    if (trivial <= tol.endpoint) {
        out.push_back({PathType::TRIVIAL, 0.0, 0.0, trivial});
        return out;
    }
    const std::array<std::pair<PathType, SegmentType>, 3> singles{
        {{PathType::L, SegmentType::L}, {PathType::R, SegmentType::R}, {PathType::G, SegmentType::G}}};
    for (const auto& [ptype, stype] : singles) {
        const Vec3 axis = segment_axis(stype, radius);
        if (std::abs(x.dot(axis) - detail::kE1.dot(axis)) > tol.endpoint) continue;
        double phi = detail::snap(angle_about_axis(axis, detail::kE1, x), tol.angle_snap);
        const double res =
            (detail::segment_rotation_unchecked(stype, radius.value(), phi).col(0) - x).norm();
        if (phi > 0.0 && res <= tol.endpoint) out.push_back({ptype, phi, 0.0, res});
    }
    return out;
}

} // namespace sphere_dubins
