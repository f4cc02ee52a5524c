#pragma once

// Instance and report formats shared by the command-line tool and any
// other implementation that wants to interoperate with it.
//
// Instance (JSON, "format": 1):
//   {"format": 1, "r": 0.4, "target": [x, y, z],
//    "r0": [[..], [..], [..]],                       optional, row-major, default I
//    "options": {"samples": N, "grid_step": h, "max_segments": k}}   optional
// Unknown keys are rejected at every level.

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sphere_dubins/geometry.hpp"
#include "sphere_dubins/oracle.hpp"
#include "sphere_dubins/planner.hpp"

namespace sphere_dubins::io {

inline constexpr int kFormatVersion = 1;

/// Targets whose norm is within this of 1 are normalized; others rejected.
/// Loose enough for coordinates printed to four decimals.
inline constexpr double kTargetNormalizeTol = 1e-3;

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct InstanceOptions {
    std::optional<int> samples;
    std::optional<double> grid_step;
    std::optional<int> max_segments;
};

struct Instance {
    double r = 0.0;
    Vec3 target = Vec3::UnitX();
    Mat3 r0 = Mat3::Identity();
    InstanceOptions options;
};

inline Vec3 normalize_target(const Vec3& x) {
    if (!x.allFinite()) throw InputError("target has non-finite components");
    const double n = x.norm();
    if (std::abs(n - 1.0) > kTargetNormalizeTol) {
        throw InputError("target must be a unit vector (norm " + std::to_string(n) + ", tolerance " +
                         std::to_string(kTargetNormalizeTol) + ")");
    }
    return x / n;
}

namespace detail {

inline void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) throw InputError("unknown field '" + key + "' in " + where);
    }
}

inline double number(const nlohmann::json& v, const std::string& what) {
    if (!v.is_number()) throw InputError(what + " must be a number");
    return v.get<double>();
}

inline int integer(const nlohmann::json& v, const std::string& what) {
    if (!v.is_number_integer()) throw InputError(what + " must be an integer");
    return v.get<int>();
}

} // namespace detail

inline Instance parse_instance(const nlohmann::json& j) {
    if (!j.is_object()) throw InputError("instance must be a JSON object");
    detail::reject_unknown(j, {"format", "r", "target", "r0", "options"}, "instance");
    if (!j.contains("format") || detail::integer(j["format"], "format") != kFormatVersion) {
        throw InputError("instance must declare \"format\": 1");
    }
    if (!j.contains("r")) throw InputError("instance is missing \"r\"");
    if (!j.contains("target")) throw InputError("instance is missing \"target\"");

    Instance inst;
    inst.r = detail::number(j["r"], "r");
    const auto& t = j["target"];
    if (!t.is_array() || t.size() != 3) throw InputError("target must be an array of 3 numbers");
    inst.target = normalize_target({detail::number(t[0], "target"), detail::number(t[1], "target"),
                                    detail::number(t[2], "target")});
    if (j.contains("r0")) {
        const auto& m = j["r0"];
        if (!m.is_array() || m.size() != 3) throw InputError("r0 must be a 3x3 array of rows");
        for (int i = 0; i < 3; ++i) {
            if (!m[i].is_array() || m[i].size() != 3) throw InputError("r0 must be a 3x3 array of rows");
            for (int k = 0; k < 3; ++k) inst.r0(i, k) = detail::number(m[i][k], "r0");
        }
    }
    if (j.contains("options")) {
        const auto& o = j["options"];
        if (!o.is_object()) throw InputError("options must be an object");
        detail::reject_unknown(o, {"samples", "grid_step", "max_segments"}, "options");
        if (o.contains("samples")) inst.options.samples = detail::integer(o["samples"], "options.samples");
        if (o.contains("grid_step")) inst.options.grid_step = detail::number(o["grid_step"], "options.grid_step");
        if (o.contains("max_segments")) {
            inst.options.max_segments = detail::integer(o["max_segments"], "options.max_segments");
        }
    }
    return inst;
}

inline Instance parse_instance_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("malformed instance JSON: ") + e.what());
    }
    return parse_instance(j);
}

inline nlohmann::ordered_json to_json(const Instance& inst) {
    nlohmann::ordered_json j;
    j["format"] = kFormatVersion;
    j["r"] = inst.r;
    j["target"] = {inst.target.x(), inst.target.y(), inst.target.z()};
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int i = 0; i < 3; ++i) rows.push_back({inst.r0(i, 0), inst.r0(i, 1), inst.r0(i, 2)});
    j["r0"] = rows;
    return j;
}

/// Parses "a,b,c,..." into exactly `count` numbers.
inline std::vector<double> parse_list(const std::string& text, std::size_t count, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InputError(what + ": '" + item + "' is not a number");
        }
    }
    if (out.size() != count) {
        throw InputError(what + " needs " + std::to_string(count) + " comma-separated numbers, got " +
                         std::to_string(out.size()));
    }
    return out;
}

inline nlohmann::ordered_json to_json(const PathCandidate& c) {
    nlohmann::ordered_json j;
    j["type"] = std::string(to_string(c.type));
    j["phi1"] = c.phi1();
    j["phi2"] = c.phi2();
    j["length"] = c.length;
    j["residual"] = c.residual;
    return j;
}

inline nlohmann::ordered_json to_json(const OracleResult& o, const std::optional<double>& planner_length) {
    nlohmann::ordered_json j;
    j["feasible"] = o.feasible;
    if (!o.feasible) {
        j["status"] = "infeasible at this resolution";
    } else {
        j["word"] = o.word.empty() ? std::string("TRIVIAL") : o.word;
        nlohmann::ordered_json angles = nlohmann::ordered_json::array();
        for (const auto& s : o.segments) angles.push_back(s.angle);
        j["angles"] = angles;
        j["length"] = o.length;
        j["grid_length"] = o.grid_length;
        j["residual"] = o.residual;
    }
    j["chord_tolerance"] = o.chord_tolerance;
    j["resolution_bound"] = o.resolution_bound;
    if (planner_length && o.feasible) {
        j["gap"] = *planner_length - o.length; // planner − oracle; ≤ resolution_bound when consistent
        j["consistent"] = *planner_length <= o.length + o.resolution_bound;
    }
    return j;
}

/// Machine-readable plan report with stable key order.
inline nlohmann::ordered_json plan_report(const Instance& inst, const Plan& p) {
    nlohmann::ordered_json j;
    j["format"] = kFormatVersion;
    j["instance"] = to_json(inst);
    nlohmann::ordered_json cands = nlohmann::ordered_json::array();
    for (const auto& c : p.candidates) cands.push_back(to_json(c));
    j["candidates"] = cands;
    j["sorted"] = true;
    j["optimal"] = p.optimal;
    j["optimal_type"] = std::string(to_string(p.best().type));
    j["optimal_length"] = p.best().length;
    return j;
}

inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Human-readable rendering of a plan report.
inline std::string plan_text(const Instance& inst, const Plan& p) {
    std::ostringstream os;
    os << "r = " << format_number(inst.r) << ", target = (" << format_number(inst.target.x()) << ", "
       << format_number(inst.target.y()) << ", " << format_number(inst.target.z()) << ")\n";
    for (std::size_t i = 0; i < p.candidates.size(); ++i) {
        const auto& c = p.candidates[i];
        os << (i == p.optimal ? "* " : "  ") << to_string(c.type) << "  phi1 = " << format_number(c.phi1())
           << "  phi2 = " << format_number(c.phi2()) << "  length = " << format_number(c.length)
           << "  residual = " << format_number(c.residual) << "\n";
    }
    return os.str();
}

/// Waypoint table: one header line, then one row per sample
///   s x y z tx ty tz segment type
/// `segment` is the index of the segment containing the sample and `type`
/// its letter (L, R, G, or - for an empty path); a change in `segment`
/// marks a segment boundary.
inline void write_waypoints(std::ostream& os, std::span<const PathSample> samples, std::span<const Segment> segments) {
    os << "s x y z tx ty tz segment type\n";
    char buf[256];
    for (const auto& s : samples) {
        const Vec3 x = s.frame.position();
        const Vec3 t = s.frame.tangent();
        const char type = segments.empty() ? '-' : to_char(segments[s.segment].type);
        std::snprintf(buf, sizeof buf, "%.15g %.15g %.15g %.15g %.15g %.15g %.15g %zu %c\n", s.arc, x.x(), x.y(),
                      x.z(), t.x(), t.y(), t.z(), s.segment, type);
        os << buf;
    }
}

} // namespace sphere_dubins::io
