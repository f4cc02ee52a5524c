#pragma once

namespace sphere_dubins {

// Shared numeric tolerances. Tests, the CLI and the library all read from
// here so a threshold only ever changes in one place.
struct Tolerances {
    double endpoint = 1e-9;      // max ‖endpoint − target‖ for a feasible path
    double matrix = 1e-12;       // SO(3) membership of closed-form rotations
    double configuration = 1e-9; // validation of caller-supplied frames
    double unit_norm = 1e-9;     // |‖x‖ − 1| for caller-supplied targets
    double angle_snap = 1e-7;    // angles this close to 0 or 2π become 0
    double tie = 1e-10;          // candidate lengths closer than this are tied
};

inline constexpr Tolerances kDefaultTolerances{};

} // namespace sphere_dubins
