#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "sphere_dubins/geometry.hpp"
#include "sphere_dubins/solvers.hpp"
#include "sphere_dubins/tolerances.hpp"

namespace sphere_dubins {

/// Largest turn radius for which {LG, RG, LR, RL} plus degenerates is known
/// to contain the shortest path.
inline constexpr double kMaxPlanningRadius = 0.5;

/// Raised when enumeration comes back empty on valid input. That can only
/// happen through a solver defect, so callers treat it as an internal error.
class EmptyCandidateSet : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PathCandidate {
    PathType type = PathType::TRIVIAL;
    std::vector<Segment> segments; // zero-angle segments are dropped
    double radius = 0.0;
    double length = 0.0;
    double residual = 0.0;

    double phi1() const { return segments.empty() ? 0.0 : segments[0].angle; }
    double phi2() const { return segments.size() < 2 ? 0.0 : segments[1].angle; }
};

struct Plan {
    Configuration start;
    Vec3 target = Vec3::UnitX();
    double radius = 0.0;
    std::vector<PathCandidate> candidates; // ascending length
    std::size_t optimal = 0;

    const PathCandidate& best() const { return candidates.at(optimal); }
};

namespace detail {

inline void require_planning_radius(const TurnRadius& r) {
    if (r.value() > kMaxPlanningRadius) {
        throw std::domain_error("r must be ≤ 0.5 (outside proven candidate-set range), got " +
                                std::to_string(r.value()));
    }
}

inline PathType single_type(SegmentType t) {
    switch (t) {
    case SegmentType::L: return PathType::L;
    case SegmentType::R: return PathType::R;
    case SegmentType::G: return PathType::G;
    }
    return PathType::TRIVIAL;
}

// Drops zero-angle segments and relabels the branch with its degenerate class.
inline PathCandidate to_candidate(const SolutionBranch& b, const TurnRadius& r, const Vec3& target) {
    const auto types = segment_types(b.type);
    const std::array<double, 2> angles{b.phi1, b.phi2};
    PathCandidate c;
    c.radius = r.value();
    for (std::size_t i = 0; i < types.size(); ++i) {
        if (angles[i] > 0.0) c.segments.push_back({types[i], angles[i]});
    }
    if (c.segments.empty()) {
        c.type = PathType::TRIVIAL;
    } else if (c.segments.size() == 1) {
        c.type = single_type(c.segments[0].type);
    } else {
        c.type = b.type;
    }
    c.length = path_length(c.segments, r);
    c.residual = (path_endpoint(Configuration::identity(), c.segments, r) - target).norm();
    return c;
}

inline bool same_path(const PathCandidate& a, const PathCandidate& b) {
    if (a.type != b.type || a.segments.size() != b.segments.size()) return false;
    for (std::size_t i = 0; i < a.segments.size(); ++i) {
        if (angle_distance(a.segments[i].angle, b.segments[i].angle) > 1e-9) return false;
    }
    return true;
}

inline auto order_key(const PathCandidate& c) {
    return std::make_tuple(static_cast<int>(c.type), c.phi1(), c.phi2());
}

} // namespace detail

/// Union of all solver branches for a target in the initial frame, reduced
/// to distinct canonical candidates sorted by ascending length.
inline std::vector<PathCandidate> enumerate_candidates(const TargetLocal& target, const TurnRadius& r,
                                                       const Tolerances& tol = kDefaultTolerances) {
    detail::require_planning_radius(r);
    const Vec3& x = target.vec();

    std::vector<SolutionBranch> branches = solve_single(target, r, tol);
    const bool trivial = !branches.empty() && branches.front().type == PathType::TRIVIAL;
    if (!trivial) {
        for (auto* solver : {&solve_LG, &solve_RG, &solve_LR, &solve_RL}) {
            auto found = (*solver)(target, r, tol);
            branches.insert(branches.end(), found.begin(), found.end());
        }
    }

    std::vector<PathCandidate> out;
    for (const auto& b : branches) {
        PathCandidate c = detail::to_candidate(b, r, x);
        if (c.residual > tol.endpoint) continue;
        auto dup = std::find_if(out.begin(), out.end(), [&](const PathCandidate& o) { return detail::same_path(o, c); });
        if (dup == out.end()) {
            out.push_back(std::move(c));
        } else if (c.residual < dup->residual) {
            *dup = std::move(c);
        }
    }
    std::sort(out.begin(), out.end(), [](const PathCandidate& a, const PathCandidate& b) {
        if (a.length != b.length) return a.length < b.length;
        return detail::order_key(a) < detail::order_key(b);
    });
    return out;
}

/// Shortest path from `start` to the location `target` (free final heading).
inline Plan plan(const Configuration& start, const Vec3& target, const TurnRadius& r,
                 const Tolerances& tol = kDefaultTolerances) {
    detail::require_planning_radius(r);
    if (!target.allFinite() || std::abs(target.norm() - 1.0) > tol.unit_norm) {
        throw std::domain_error("target must be a unit vector");
    }
    const TargetLocal local(start.matrix().transpose() * target, 10.0 * tol.unit_norm);

    Plan p;
    p.start = start;
    p.target = target;
    p.radius = r.value();
    p.candidates = enumerate_candidates(local, r, tol);
    if (p.candidates.empty()) {
        throw EmptyCandidateSet("no candidate path reaches the target; solver defect");
    }
    const double shortest = p.candidates.front().length;
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.candidates.size(); ++i) {
        const auto& c = p.candidates[i];
        if (c.length > shortest + tol.tie) break;
        if (detail::order_key(c) < detail::order_key(p.candidates[best])) best = i;
    }
    p.optimal = best;
    return p;
}

} // namespace sphere_dubins
