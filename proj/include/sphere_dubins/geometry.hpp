#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sphere_dubins/tolerances.hpp"

namespace sphere_dubins {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into [0, 2π).
inline double wrap_angle(double angle) {
    double w = std::fmod(angle, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

/// Smallest absolute difference between two angles on the circle.
inline double angle_distance(double a, double b) {
    const double d = wrap_angle(a - b);
    return std::min(d, kTwoPi - d);
}

/// Rotation angle in [0, 2π) about unit `axis` taking `from` to `to`,
/// measured between their projections onto the plane orthogonal to the axis.
/// Returns 0 when either vector lies on the axis.
inline double angle_about_axis(const Vec3& axis, const Vec3& from, const Vec3& to) {
    const Vec3 f = from - from.dot(axis) * axis;
    const Vec3 t = to - to.dot(axis) * axis;
    if (f.norm() < 1e-14 || t.norm() < 1e-14) return 0.0;
    return wrap_angle(std::atan2(axis.dot(f.cross(t)), f.dot(t)));
}

/// Nearest proper rotation to `m` in the Frobenius norm (polar factor).
inline Mat3 project_to_rotation(const Mat3& m) {
    Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 u = svd.matrixU();
    const Mat3 v = svd.matrixV();
    if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
    return u * v.transpose();
}

/// Max-norm distance of `m` from SO(3): max(‖mᵀm − I‖∞, |det m − 1|).
inline double so3_defect(const Mat3& m) {
    const double ortho = (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
    return std::max(ortho, std::abs(m.determinant() - 1.0));
}

/// Vehicle configuration on the unit sphere: the rotation [X, T, N] holding
/// position, tangent and tangent-normal as columns.
class Configuration {
public:
    Configuration() : m_(Mat3::Identity()) {}

    /// Validates `m` against `tol`; never repairs it.
    static Configuration from_matrix(const Mat3& m, double tol = kDefaultTolerances.configuration) {
        if (!m.allFinite()) throw std::domain_error("configuration contains non-finite entries");
        const double ortho = (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
        if (ortho > tol) {
            throw std::domain_error("configuration columns are not orthonormal (defect " +
                                    std::to_string(ortho) + ")");
        }
        if (std::abs(m.determinant() - 1.0) > tol) {
            throw std::domain_error("configuration is not a proper rotation (det " +
                                    std::to_string(m.determinant()) + ")");
        }
        return Configuration(m);
    }

    /// Opt-in repair: snaps `m` onto SO(3) via polar decomposition first.
    static Configuration reprojected(const Mat3& m) { return Configuration(project_to_rotation(m)); }

    static Configuration identity() { return Configuration(); }

    const Mat3& matrix() const { return m_; }
    Vec3 position() const { return m_.col(0); }
    Vec3 tangent() const { return m_.col(1); }
    Vec3 normal() const { return m_.col(2); }

private:
    explicit Configuration(const Mat3& m) : m_(m) {}
    Mat3 m_;
};

enum class SegmentType { L, R, G };

inline char to_char(SegmentType t) {
    switch (t) {
    case SegmentType::L: return 'L';
    case SegmentType::R: return 'R';
    case SegmentType::G: return 'G';
    }
    return '?';
}

inline SegmentType segment_type_from_char(char c) {
    switch (c) {
    case 'L': return SegmentType::L;
    case 'R': return SegmentType::R;
    case 'G': return SegmentType::G;
    default: throw std::invalid_argument(std::string("unknown segment type '") + c + "'");
    }
}

/// Radius of a tight turn on the unit sphere, r = 1/√(1 + U²max).
class TurnRadius {
public:
    static constexpr double kMax = 0.70710678118654752440; // 1/√2

    explicit TurnRadius(double r) : r_(r) {
        if (!(r > 0.0) || r > kMax + 1e-15) {
            throw std::domain_error("turn radius must lie in (0, 1/sqrt(2)], got " + std::to_string(r));
        }
        r_ = std::min(r, kMax);
    }

    double value() const { return r_; }
    /// Maximum geodesic curvature √(1/r² − 1).
    double u_max() const { return std::sqrt(1.0 / (r_ * r_) - 1.0); }
    /// √(1 − r²), the axial offset of the tight-turn circle.
    double axial() const { return std::sqrt(1.0 - r_ * r_); }

private:
    double r_;
};

struct Segment {
    SegmentType type = SegmentType::G;
    double angle = 0.0; // radians in [0, 2π)

    double arc_length(const TurnRadius& r) const {
        return type == SegmentType::G ? angle : r.value() * angle;
    }
};

inline double path_length(const std::vector<Segment>& segments, const TurnRadius& r) {
    double total = 0.0;
    for (const auto& s : segments) total += s.arc_length(r);
    return total;
}

/// Geodesic curvature commanded by a segment type.
inline double geodesic_curvature(SegmentType t, const TurnRadius& r) {
    switch (t) {
    case SegmentType::L: return r.u_max();
    case SegmentType::R: return -r.u_max();
    case SegmentType::G: return 0.0;
    }
    return 0.0;
}

/// Unit rotation axis of a segment, expressed in the frame at its start.
inline Vec3 segment_axis(SegmentType t, const TurnRadius& r) {
    switch (t) {
    case SegmentType::L: return {r.axial(), 0.0, r.value()};
    case SegmentType::R: return {-r.axial(), 0.0, r.value()};
    case SegmentType::G: return {0.0, 0.0, 1.0};
    }
    return {0.0, 0.0, 1.0};
}

namespace detail {

// Closed-form segment matrices; no range checks on the angle so that
// internal callers can evaluate at arbitrary φ.
inline Mat3 segment_rotation_unchecked(SegmentType t, double r, double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    Mat3 m;
    if (t == SegmentType::G) {
        m << c, -s, 0.0,
             s, c, 0.0,
             0.0, 0.0, 1.0;
        return m;
    }
    const double q = std::sqrt(1.0 - r * r);
    const double b11 = 1.0 - (1.0 - c) * r * r;
    const double b13 = (1.0 - c) * r * q;
    const double b23 = s * q;
    const double b33 = c + (1.0 - c) * r * r;
    if (t == SegmentType::L) {
        m << b11, -r * s, b13,
             r * s, c, -b23,
             b13, b23, b33;
    } else {
        m << b11, -r * s, -b13,
             r * s, c, b23,
             -b13, -b23, b33;
    }
    return m;
}

} // namespace detail

/// Rotation R_S(φ) carrying the frame at the start of a segment to its end.
inline Mat3 segment_rotation(SegmentType t, const TurnRadius& r, double phi) {
    if (!(phi >= 0.0) || !(phi < kTwoPi)) {
        throw std::domain_error("segment angle must lie in [0, 2pi), got " + std::to_string(phi));
    }
    return detail::segment_rotation_unchecked(t, r.value(), phi);
}

inline Mat3 segment_rotation(const Segment& seg, const TurnRadius& r) {
    return segment_rotation(seg.type, r, seg.angle);
}

/// Product of the segment rotations, i.e. the final frame when starting at I.
inline Mat3 compose(const std::vector<Segment>& segments, const TurnRadius& r) {
    Mat3 m = Mat3::Identity();
    for (const auto& s : segments) m = m * segment_rotation(s, r);
    return m;
}

inline Vec3 path_endpoint(const Configuration& start, const std::vector<Segment>& segments,
                          const TurnRadius& r) {
    return start.matrix() * compose(segments, r).col(0);
}

/// Sabban-frame generator: R' = R·Ω(u_g).
inline Mat3 frame_generator(double u_g) {
    Mat3 omega;
    omega << 0.0, -1.0, 0.0,
             1.0, 0.0, -u_g,
             0.0, u_g, 0.0;
    return omega;
}

/// Fixed-step RK4 integration of the frame equations with the frame pushed
/// back onto SO(3) after every step. Reference solution for cross-checks.
inline Configuration integrate_frame(const Configuration& start, double u_g, double arc, double step) {
    if (!(step > 0.0)) throw std::domain_error("integration step must be positive");
    if (!(arc >= 0.0)) throw std::domain_error("arc length must be non-negative");
    if (arc == 0.0) return start;

    const Mat3 omega = frame_generator(u_g);
    const auto steps = static_cast<std::size_t>(std::ceil(arc / step));
    const double h = arc / static_cast<double>(steps);
    Mat3 m = start.matrix();
    for (std::size_t i = 0; i < steps; ++i) {
        const Mat3 k1 = m * omega;
        const Mat3 k2 = (m + 0.5 * h * k1) * omega;
        const Mat3 k3 = (m + 0.5 * h * k2) * omega;
        const Mat3 k4 = (m + h * k3) * omega;
        m += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        m = project_to_rotation(m);
    }
    return Configuration::from_matrix(m);
}

struct PathSample {
    double arc = 0.0;          // arc length from the start of the path
    Configuration frame;
    std::size_t segment = 0;   // index of the segment containing the sample
};

/// `n` frames spaced uniformly in arc length along the path, both ends
/// included.
inline std::vector<PathSample> sample_path(const Configuration& start, const std::vector<Segment>& segments,
                                           const TurnRadius& r, std::size_t n) {
    if (n < 2) throw std::domain_error("sample count must be at least 2");

    std::vector<double> seg_len;
    seg_len.reserve(segments.size());
    for (const auto& s : segments) seg_len.push_back(s.arc_length(r));
    const double total = path_length(segments, r);

    std::vector<PathSample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double arc = (i + 1 == n) ? total : total * static_cast<double>(i) / static_cast<double>(n - 1);
        Mat3 m = start.matrix();
        double remaining = arc;
        std::size_t k = 0;
        for (; k < segments.size(); ++k) {
            const bool last = k + 1 == segments.size();
            if (remaining < seg_len[k] || last) {
                const double local = std::min(remaining, seg_len[k]);
                const double phi = segments[k].type == SegmentType::G ? local : local / r.value();
                m = m * detail::segment_rotation_unchecked(segments[k].type, r.value(),
                                                           std::min(phi, segments[k].angle));
                break;
            }
            m = m * segment_rotation(segments[k], r);
            remaining -= seg_len[k];
        }
        out.push_back({arc, Configuration::from_matrix(m), segments.empty() ? 0 : std::min(k, segments.size() - 1)});
    }
    return out;
}

} // namespace sphere_dubins
