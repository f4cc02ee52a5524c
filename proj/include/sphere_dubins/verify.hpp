#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sphere_dubins/analysis.hpp"
#include "sphere_dubins/geometry.hpp"

namespace sphere_dubins::analysis {

struct VerifyOptions {
    int dl_samples = 1000;
    std::optional<double> tolerance; // overrides every drift threshold when set
    std::uint64_t seed = 20231116;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }
};

namespace detail {

inline CheckResult at_most(std::string name, double measured, double threshold, std::string detail = {}) {
    return {std::move(name), measured <= threshold, measured, threshold, std::move(detail)};
}

inline CheckResult above(std::string name, double measured, double threshold, std::string detail = {}) {
    return {std::move(name), measured > threshold, measured, threshold, std::move(detail)};
}

} // namespace detail

/// ‖ψ‖² drift along random piecewise-constant admissible controls over
/// arc length 10.
inline double conservation_drift(std::mt19937_64& rng, int trials = 50) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const double r = 0.1 + 0.6 * unit(rng);
        const double u_max = TurnRadius(r).u_max();
        std::vector<ControlPiece> pieces;
        double used = 0.0;
        while (used < 10.0) {
            const double len = std::min(10.0 - used, 0.05 + 2.0 * unit(rng));
            const double pick = unit(rng);
            const double u = pick < 0.3 ? u_max : pick < 0.6 ? -u_max : pick < 0.8 ? 0.0 : u_max * (2.0 * unit(rng) - 1.0);
            pieces.push_back({u, len});
            used += len;
        }
        const AdjointState psi0{2.0 * unit(rng) - 1.0, 2.0 * unit(rng) - 1.0, 2.0 * unit(rng) - 1.0};
        const double n0 = psi0.norm2();
        for (const auto& s : adjoint_flow(psi0, pieces, 0.01)) worst = std::max(worst, std::abs(s.psi.norm2() - n0));
    }
    return worst;
}

/// Max |H| along switching extremals started with H = 0 (normal, e = 1).
inline double hamiltonian_drift(std::mt19937_64& rng, int trials = 50) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const double u_max = TurnRadius(0.1 + 0.6 * unit(rng)).u_max();
        const AdjointState psi0{0.0, 4.0 * unit(rng) - 2.0, -1.0};
        const auto trace = simulate_extremal(psi0, u_max, 10.0, 0.01);
        for (const auto& s : trace.samples) worst = std::max(worst, std::abs(hamiltonian(s.psi, s.u_g, 1.0)));
    }
    return worst;
}

/// Max deviation of the spacing of consecutive zeros of A from π/√(1+U²)
/// on abnormal (e = 0) bang-bang extremals with λ = 1.
inline double inflection_spacing_error(double r) {
    const double u_max = TurnRadius(r).u_max();
    const double w = std::sqrt(1.0 + u_max * u_max);
    const auto trace = simulate_extremal({0.0, -w, 0.0}, u_max, 10.0, 0.01);
    double worst = 0.0;
    double prev = 0.0;
    for (const double s : trace.switches) {
        worst = std::max(worst, std::abs((s - prev) - kPi / w));
        prev = s;
    }
    return trace.switches.empty() ? std::numeric_limits<double>::infinity() : worst;
}

/// Max deviation of the phase invariant from λ² = 1 along the same arcs.
inline double phase_invariant_drift(double r) {
    const double u_max = TurnRadius(r).u_max();
    const double w = std::sqrt(1.0 + u_max * u_max);
    const auto trace = simulate_extremal({0.0, -w, 0.0}, u_max, 10.0, 0.01);
    double worst = 0.0;
    for (const auto& s : trace.samples) worst = std::max(worst, std::abs(phase_invariant(s.psi.A, s.psi.B, u_max) - 1.0));
    return worst;
}

/// Runs every proof-quantity check and reports measured values.
inline VerifyReport run_verification(const VerifyOptions& opts = {}) {
    auto tol = [&](double def) { return opts.tolerance.value_or(def); };
    std::mt19937_64 rng(opts.seed);
    VerifyReport report;

    report.checks.push_back(detail::at_most("adjoint norm conservation", conservation_drift(rng), tol(1e-10),
                                            "max |‖ψ(s)‖² − ‖ψ(0)‖²| over arc length 10"));
    report.checks.push_back(detail::at_most("hamiltonian stays zero", hamiltonian_drift(rng), tol(1e-9),
                                            "max |H| on switching extremals, e = 1"));

    double spacing = 0.0;
    double phase = 0.0;
    for (const double r : {0.1, 0.25, 0.4, 0.5, 0.6, 0.7}) {
        spacing = std::max(spacing, inflection_spacing_error(r));
        phase = std::max(phase, phase_invariant_drift(r));
    }
    report.checks.push_back(detail::at_most("inflection spacing", spacing, tol(1e-10),
                                            "max |Δs − π/√(1+U²)| between zeros of A, e = 0"));
    report.checks.push_back(detail::at_most("phase invariant", phase, tol(1e-10),
                                            "max |A² + A'²/(1+U²) − λ²| along e = 0 arcs"));

    const auto half = lg_replacement_angles(0.5);
    const auto edge = lg_replacement_angles(TurnRadius::kMax);
    const double ident = std::max({std::abs(half.phi1 - kPi / 2), std::abs(half.phi2 - kPi / 2), std::abs(edge.phi1),
                                   std::abs(edge.phi2 - kPi)});
    report.checks.push_back(detail::at_most("replacement angles at r = 1/2, 1/sqrt2", ident, tol(1e-10)));
    const double dl_ident = std::max(std::abs(delta_l(0.5) - kPi / 4),
                                     std::abs(delta_l(TurnRadius::kMax) - (std::sqrt(2.0) - 1.0) * kPi));
    report.checks.push_back(detail::at_most("delta_l at r = 1/2, 1/sqrt2", dl_ident, tol(1e-12)));

    const int n = std::max(1, opts.dl_samples);
    double min_dl = std::numeric_limits<double>::infinity();
    double min_dlp = std::numeric_limits<double>::infinity();
    double fd = 0.0;
    double path = 0.0;
    bool shorter = true;
    for (int i = 0; i < n; ++i) {
        const double r = 0.001 + (TurnRadius::kMax - 0.001) * static_cast<double>(i + 1) / n;
        min_dl = std::min(min_dl, delta_l(r));
        const double rp = TurnRadius::kMax * (static_cast<double>(i) + 0.5) / n;
        if (rp != 0.5) min_dlp = std::min(min_dlp, delta_l_prime(rp));

        const auto ang = lg_replacement_angles(r);
        const TurnRadius radius(r);
        const std::vector<Segment> lg{{SegmentType::L, std::max(0.0, ang.phi1)}, {SegmentType::G, std::max(0.0, ang.phi2)}};
        path = std::max(path, (path_endpoint(Configuration::identity(), lg, radius) - lpi_rpi_endpoint(r)).norm());
        shorter = shorter && path_length(lg, radius) < 2.0 * kPi * r;
    }
    for (int i = 0; i <= 40; ++i) {
        const double r = 0.05 + 0.4 * i / 40.0;
        fd = std::max(fd, std::abs((delta_l(r + 1e-5) - delta_l(r - 1e-5)) / 2e-5 - delta_l_prime(r)));
        const double r2 = 0.55 + 0.14 * i / 40.0;
        fd = std::max(fd, std::abs((delta_l(r2 + 1e-5) - delta_l(r2 - 1e-5)) / 2e-5 - delta_l_prime(r2)));
    }
    report.checks.push_back(detail::above("delta_l positivity", min_dl, 0.0,
                                          std::to_string(n) + " samples on (0.001, 1/sqrt2]"));
    report.checks.push_back(detail::above("delta_l_prime lower bound", min_dlp, delta_l_prime_lower_bound(),
                                          std::to_string(n) + " samples on [0, 1/sqrt2) without 1/2"));
    report.checks.push_back(detail::at_most("delta_l_prime vs finite differences", fd, tol(1e-6),
                                            "central difference, step 1e-5"));
    report.checks.push_back(detail::at_most("LG replacement reaches L_pi R_pi endpoint", path, tol(1e-9)));
    report.checks.push_back({"LG replacement is shorter than 2 pi r", shorter, shorter ? 1.0 : 0.0, 1.0, {}});
    return report;
}

} // namespace sphere_dubins::analysis
