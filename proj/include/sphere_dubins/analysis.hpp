#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sphere_dubins/geometry.hpp"

namespace sphere_dubins::analysis {

/// Costate triple ψ = (A, B, C) of the minimum-principle extremals.
struct AdjointState {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;

    Vec3 vec() const { return {A, B, C}; }
    static AdjointState from(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
    double norm2() const { return A * A + B * B + C * C; }
};

/// Generator of ψ' = Ω·ψ for geodesic curvature `u_g`.
inline Mat3 adjoint_generator(double u_g) {
    Mat3 omega;
    omega << 0.0, 1.0, 0.0,
             -1.0, 0.0, u_g,
             0.0, -u_g, 0.0;
    return omega;
}

/// exp(Ω(u_g)·Δs) via the Rodrigues formula. Ω is skew with axial vector
/// (−u_g, 0, −1), so the flow is a rotation by √(1+u_g²)·Δs.
inline Mat3 adjoint_propagator(double u_g, double ds) {
    const Vec3 w(-u_g, 0.0, -1.0);
    const double rate = w.norm();
    const Vec3 n = w / rate;
    Mat3 k;
    k << 0.0, -n.z(), n.y(),
         n.z(), 0.0, -n.x(),
         -n.y(), n.x(), 0.0;
    const double theta = rate * ds;
    return Mat3::Identity() + std::sin(theta) * k + (1.0 - std::cos(theta)) * (k * k);
}

struct ControlPiece {
    double u_g = 0.0;
    double length = 0.0;
};

struct AdjointSample {
    double arc = 0.0;
    double u_g = 0.0;
    AdjointState psi;
};

/// Piecewise closed-form costate flow. Samples every `step` inside each piece
/// and at every piece boundary; the first sample is ψ0 at arc 0.
inline std::vector<AdjointSample> adjoint_flow(const AdjointState& psi0, const std::vector<ControlPiece>& controls,
                                               double step) {
    if (!(step > 0.0)) throw std::domain_error("sampling step must be positive");
    std::vector<AdjointSample> out;
    Vec3 psi = psi0.vec();
    double arc = 0.0;
    out.push_back({0.0, controls.empty() ? 0.0 : controls.front().u_g, psi0});
    for (const auto& piece : controls) {
        if (!(piece.length >= 0.0)) throw std::domain_error("control piece length must be non-negative");
        const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(piece.length / step)));
        for (std::size_t i = 1; i <= n; ++i) {
            const double local = piece.length * static_cast<double>(i) / static_cast<double>(n);
            out.push_back({arc + local, piece.u_g, AdjointState::from(adjoint_propagator(piece.u_g, local) * psi)});
        }
        psi = adjoint_propagator(piece.u_g, piece.length) * psi;
        arc += piece.length;
    }
    return out;
}

/// H = e + C + u_g·A.
inline double hamiltonian(const AdjointState& psi, double u_g, double e) { return e + psi.C + u_g * psi.A; }

/// A² + (dA/ds)²/(1 + U²max); equals λ² along abnormal bang arcs.
inline double phase_invariant(double a, double da, double u_max) { return a * a + da * da / (1.0 + u_max * u_max); }

/// A(s) = λ·sin(√(1+U²max)·s − φ) and its derivative.
struct AbnormalSolution {
    double lambda = 1.0;
    double phase = 0.0;

    double A(double s, double u_max) const { return lambda * std::sin(std::sqrt(1.0 + u_max * u_max) * s - phase); }
    double dA(double s, double u_max) const {
        const double w = std::sqrt(1.0 + u_max * u_max);
        return lambda * w * std::cos(w * s - phase);
    }
};

struct ExtremalTrace {
    std::vector<AdjointSample> samples;
    std::vector<double> switches; // arc lengths where A crosses zero
};

namespace detail {

// Smallest θ > θ_min with α + β·cos θ + γ·sin θ = 0, or a negative value.
inline double next_trig_zero(double alpha, double beta, double gamma, double theta_min) {
    const double rho = std::hypot(beta, gamma);
    if (rho < 1e-300 || std::abs(alpha) > rho) return -1.0;
    const double delta = std::atan2(gamma, beta);
    const double spread = std::acos(std::clamp(-alpha / rho, -1.0, 1.0));
    double best = -1.0;
    for (const double base : {delta + spread, delta - spread}) {
        for (int k = -1; k <= 2; ++k) {
            const double t = base + kTwoPi * k;
            if (t > theta_min && (best < 0.0 || t < best)) best = t;
        }
    }
    return best;
}

} // namespace detail

/// Simulates an extremal whose control follows the switching law
/// u_g = −U·sgn(A). At A = 0 the sign of B decides which way A leaves zero;
/// with A = B = 0 the arc is singular (u_g = 0, a great circle). Switch
/// points are located in closed form: on a bang piece A is a shifted
/// sinusoid of the rotation angle.
inline ExtremalTrace simulate_extremal(const AdjointState& psi0, double u_max, double length, double step) {
    if (!(step > 0.0)) throw std::domain_error("sampling step must be positive");
    constexpr double kZero = 1e-12;
    ExtremalTrace trace;
    Vec3 psi = psi0.vec();
    double arc = 0.0;

    auto control = [&](const Vec3& p) {
        if (std::abs(p.x()) > kZero) return p.x() > 0.0 ? -u_max : u_max;
        if (std::abs(p.y()) > kZero) return p.y() > 0.0 ? -u_max : u_max;
        return 0.0;
    };

    trace.samples.push_back({0.0, control(psi), psi0});
    while (arc < length) {
        const double u = control(psi);
        double piece = length - arc;
        bool switching = false;
        if (u != 0.0) {
            const Vec3 w(-u, 0.0, -1.0);
            const double rate = w.norm();
            const Vec3 n = w / rate;
            const double alpha = n.x() * n.dot(psi);
            const double beta = psi.x() - alpha;
            const double gamma = n.cross(psi).x();
            const double theta = detail::next_trig_zero(alpha, beta, gamma, 1e-9);
            if (theta > 0.0 && theta / rate < piece) {
                piece = theta / rate;
                switching = true;
            }
        }
        const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(piece / step)));
        for (std::size_t i = 1; i <= n; ++i) {
            const double local = piece * static_cast<double>(i) / static_cast<double>(n);
            trace.samples.push_back(
                {arc + local, u, AdjointState::from(adjoint_propagator(u, local) * psi)});
        }
        psi = adjoint_propagator(u, piece) * psi;
        if (switching) psi.x() = 0.0; // exact zero at the switch
        arc += piece;
        if (switching) trace.switches.push_back(arc);
    }
    return trace;
}

struct ReplacementAngles {
    double phi1 = 0.0;
    double phi2 = 0.0;
};

/// Endpoint of L_π R_π from the identity, (1 + 8r⁴ − 8r², 0, 4(1 − 2r²)·r·√(1 − r²)).
inline Vec3 lpi_rpi_endpoint(double r) {
    const double r2 = r * r;
    return {1.0 + 8.0 * r2 * r2 - 8.0 * r2, 0.0, 4.0 * (1.0 - 2.0 * r2) * r * std::sqrt(1.0 - r2)};
}

inline void require_replacement_range(double r) {
    if (!(r >= 0.0) || r > TurnRadius::kMax + 1e-15) {
        throw std::domain_error("r must lie in [0, 1/sqrt(2)], got " + std::to_string(r));
    }
}

/// Angles of the L G path that reaches the L_π R_π endpoint:
/// cos φ2 = 1 − 4r² with φ2 ∈ [0, π], and φ1 = π/2 + γ where
/// sin γ = (1 − 4r²)/(3 − 4r²), cos γ = 2√2·√(1 − 2r²)/(3 − 4r²).
/// At r = 0 the continuous extension sin γ = 1/3, cos γ = 2√2/3 is used.
inline ReplacementAngles lg_replacement_angles(double r) {
    require_replacement_range(r);
    const double r2 = std::min(r * r, 0.5);
    const double phi2 = std::acos(std::clamp(1.0 - 4.0 * r2, -1.0, 1.0));
    double sg = 1.0 / 3.0;
    double cg = 2.0 * std::sqrt(2.0) / 3.0;
    if (r > 0.0) {
        sg = (1.0 - 4.0 * r2) / (3.0 - 4.0 * r2);
        cg = 2.0 * std::sqrt(2.0) * std::sqrt(1.0 - 2.0 * r2) / (3.0 - 4.0 * r2);
    }
    return {kPi / 2.0 + std::atan2(sg, cg), phi2};
}

/// Length saved by replacing L_π R_π with the L G path: 2πr − r·φ1 − φ2.
inline double delta_l(double r) {
    const auto a = lg_replacement_angles(r);
    return 2.0 * kPi * r - r * a.phi1 - a.phi2;
}

/// d(Δl)/dr = 3π/2 − atan((1 − 4r²)/(2√(2(1 − 2r²)))) − 6√(2(1 − 2r²))/(3 − 4r²).
/// Undefined at r = 1/2 and at r = 1/√2.
inline double delta_l_prime(double r) {
    if (!(r >= 0.0) || !(r < TurnRadius::kMax) || r == 0.5) {
        throw std::domain_error("delta_l_prime is defined on [0, 1/2) and (1/2, 1/sqrt(2)), got " +
                                std::to_string(r));
    }
    const double r2 = r * r;
    const double root = std::sqrt(2.0 * (1.0 - 2.0 * r2));
    return 1.5 * kPi - std::atan((1.0 - 4.0 * r2) / (2.0 * root)) - 6.0 * root / (3.0 - 4.0 * r2);
}

/// Lower bound 3π/2 − atan(1/(2√2)) − 3 on delta_l_prime.
inline double delta_l_prime_lower_bound() { return 1.5 * kPi - std::atan(1.0 / (2.0 * std::sqrt(2.0))) - 3.0; }

} // namespace sphere_dubins::analysis
