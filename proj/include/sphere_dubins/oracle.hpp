#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sphere_dubins/geometry.hpp"
#include "sphere_dubins/tolerances.hpp"

namespace sphere_dubins {

struct GridSpec {
    int max_segments = 3;
    double angle_step = kTwoPi / 2000.0;
    double refine_tol = 1e-10;

    void validate() const {
        if (max_segments < 1) throw std::domain_error("max_segments must be at least 1");
        if (!(angle_step > 0.0) || angle_step > kPi) throw std::domain_error("angle_step must lie in (0, pi]");
        if (!(refine_tol > 0.0)) throw std::domain_error("refine_tol must be positive");
    }
};

struct OracleResult {
    bool feasible = false;       // false: nothing found at this resolution
    std::string word;            // e.g. "LRL"; empty for the trivial path
    std::vector<Segment> segments;
    double length = std::numeric_limits<double>::infinity();
    double grid_length = std::numeric_limits<double>::infinity(); // before refinement
    double residual = std::numeric_limits<double>::infinity();
    double chord_tolerance = 0.0;
    double resolution_bound = 0.0;
};

/// All words over {L, R, G} of length ≤ max_len without an immediate repeat,
/// shortest first, lexicographic within a length. The empty word comes first.
inline std::vector<std::string> oracle_words(int max_len) {
    std::vector<std::string> words{""};
    std::vector<std::string> frontier{""};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<std::string> next;
        for (const auto& w : frontier) {
            for (const char c : {'G', 'L', 'R'}) {
                if (!w.empty() && w.back() == c) continue;
                next.push_back(w + c);
            }
        }
        std::sort(next.begin(), next.end());
        words.insert(words.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return words;
}

namespace detail {

struct OracleWord {
    std::vector<SegmentType> types;
    Vec3 last_axis;
    double last_level = 0.0; // ⟨e1, last_axis⟩, the level kept by the final arc
};

// Reachability of the final arc: with the frame M after all but the last
// segment, the target is reachable iff ⟨Mᵀy, a_last⟩ equals ⟨e1, a_last⟩.
class OracleSearch {
public:
    OracleSearch(const Vec3& target, const TurnRadius& r, const GridSpec& grid)
        : y_(target), r_(r), grid_(grid),
          cells_(std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(kTwoPi / grid.angle_step - 1e-9)))) {}

    OracleResult run() {
        OracleResult best;
        const double tie = kDefaultTolerances.endpoint;
        for (const auto& word : oracle_words(grid_.max_segments)) {
            auto found = search_word(word);
            if (!found) continue;
            canonicalize(*found);
            const bool shorter = found->length < best.length - tie;
            const bool tied = std::abs(found->length - best.length) <= tie &&
                              std::make_pair(found->word.size(), found->word) < std::make_pair(best.word.size(), best.word);
            if (!best.feasible || shorter || tied) best = *found;
            best_length_ = std::min(best_length_, best.length);
        }
        best.chord_tolerance = grid_.max_segments * grid_.angle_step;
        best.resolution_bound = grid_.max_segments * grid_.angle_step * std::max(1.0, r_.value());
        return best;
    }

private:
    double arc(SegmentType t, double phi) const { return t == SegmentType::G ? phi : r_.value() * phi; }
    double grid_angle(std::size_t i) const { return kTwoPi * static_cast<double>(i) / static_cast<double>(cells_); }

    OracleWord make_word(const std::string& w) const {
        OracleWord ow;
        for (const char c : w) ow.types.push_back(segment_type_from_char(c));
        ow.last_axis = segment_axis(ow.types.back(), r_);
        ow.last_level = ow.last_axis.x();
        return ow;
    }

    // Closes the path with the final arc from local target `z`.
    std::optional<OracleResult> finish(const OracleWord& w, const std::string& word, std::vector<double> angles,
                                       const Vec3& z) const {
        angles.push_back(snap_full(angle_about_axis(w.last_axis, Vec3::UnitX(), z)));
        OracleResult res;
        res.feasible = true;
        res.word = word;
        for (std::size_t i = 0; i < angles.size(); ++i) res.segments.push_back({w.types[i], angles[i]});
        res.length = path_length(res.segments, r_);
        res.grid_length = res.length;
        res.residual = (compose(res.segments, r_).col(0) - y_).norm();
        if (res.residual > grid_.max_segments * grid_.angle_step) return std::nullopt;
        return res;
    }

    // Drops zero-angle segments and merges the neighbours they separated, so
    // e.g. G₀LG reports as LG.
    void canonicalize(OracleResult& res) const {
        std::vector<Segment> out;
        for (const auto& s : res.segments) {
            if (s.angle < grid_.refine_tol) continue;
            if (!out.empty() && out.back().type == s.type) {
                out.back().angle = wrap_angle(out.back().angle + s.angle);
            } else {
                out.push_back(s);
            }
        }
        if (out.size() == res.segments.size()) return;
        res.segments = std::move(out);
        res.word.clear();
        for (const auto& s : res.segments) res.word += to_char(s.type);
        res.length = path_length(res.segments, r_);
        res.grid_length = std::max(res.grid_length, res.length);
        res.residual = (compose(res.segments, r_).col(0) - y_).norm();
    }

    static double snap_full(double a) { return (a >= kTwoPi - 1e-12) ? 0.0 : a; }

    // Roots of h(θ) = ⟨z, S(θ)·a⟩ − level on [0, 2π): sign changes on the
    // grid refined by bisection, plus tangential roots caught as grid-local
    // minima of |h|.
    template <class H>
    std::vector<double> roots_on_circle(H&& h, const std::vector<double>& vals) const {
        std::vector<double> roots;
        const std::size_t n = vals.size();
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = (i + 1) % n;
            double a = grid_angle(i);
            double b = a + kTwoPi / static_cast<double>(n);
            double ha = vals[i];
            const double hb = vals[j];
            if (ha == 0.0) {
                roots.push_back(a);
                continue;
            }
            if (ha * hb < 0.0) {
                while (b - a > grid_.refine_tol * 0.1) {
                    const double m = 0.5 * (a + b);
                    const double hm = h(m);
                    if ((hm < 0.0) == (ha < 0.0)) {
                        a = m;
                        ha = hm;
                    } else {
                        b = m;
                    }
                }
                roots.push_back(wrap_angle(0.5 * (a + b)));
                continue;
            }
            const double prev = std::abs(vals[(i + n - 1) % n]);
            if (std::abs(ha) <= prev && std::abs(ha) <= std::abs(hb) && std::abs(ha) < grid_.angle_step) {
                double l = a - kTwoPi / static_cast<double>(n);
                double u = b;
                constexpr double kInvPhi = 0.6180339887498949;
                for (int it = 0; it < 200 && u - l > grid_.refine_tol; ++it) {
                    const double m1 = u - kInvPhi * (u - l);
                    const double m2 = l + kInvPhi * (u - l);
                    if (std::abs(h(m1)) < std::abs(h(m2))) u = m2; else l = m1;
                }
                const double m = 0.5 * (l + u);
                if (std::abs(h(m)) < 1e-11) roots.push_back(wrap_angle(m));
            }
        }
        return roots;
    }

    std::vector<double> middle_roots(const OracleWord& w, SegmentType mid, const Vec3& z) const {
        const double r = r_.value();
        std::vector<double> vals(cells_);
        for (std::size_t i = 0; i < cells_; ++i) vals[i] = z.dot(table_[i]) - w.last_level;
        auto h = [&](double t) {
            return z.dot(segment_rotation_unchecked(mid, r, t) * w.last_axis) - w.last_level;
        };
        return roots_on_circle(h, vals);
    }

    std::optional<OracleResult> search_word(const std::string& word) {
        const double r = r_.value();
        if (word.empty()) {
            const double res = (y_ - Vec3::UnitX()).norm();
            if (res > kDefaultTolerances.endpoint) return std::nullopt;
            OracleResult out;
            out.feasible = true;
            out.length = out.grid_length = 0.0;
            out.residual = res;
            return out;
        }
        const OracleWord w = make_word(word);

        if (w.types.size() == 1) {
            if (std::abs(y_.dot(w.last_axis) - w.last_level) > kDefaultTolerances.endpoint) return std::nullopt;
            auto res = finish(w, word, {}, y_);
            if (res && res->residual > kDefaultTolerances.endpoint) return std::nullopt;
            return res;
        }

        if (w.types.size() == 2) {
            table_.resize(cells_);
            for (std::size_t i = 0; i < cells_; ++i) {
                table_[i] = segment_rotation_unchecked(w.types[0], r, grid_angle(i)) * w.last_axis;
            }
            std::optional<OracleResult> best;
            for (const double t : middle_roots(w, w.types[0], y_)) {
                const Vec3 z = segment_rotation_unchecked(w.types[0], r, t).transpose() * y_;
                auto res = finish(w, word, {t}, z);
                if (res && (!best || res->length < best->length)) best = res;
            }
            return best;
        }

        return search_three(w, word);
    }

    // Three segments: grid over φ1, exact roots in φ2, closed final arc.
    // Coordinate descent along the feasible curve then refines φ1.
    std::optional<OracleResult> search_three(const OracleWord& w, const std::string& word) {
        const double r = r_.value();
        table_.resize(cells_);
        for (std::size_t i = 0; i < cells_; ++i) {
            table_[i] = segment_rotation_unchecked(w.types[1], r, grid_angle(i)) * w.last_axis;
        }
        std::optional<OracleResult> best;
        double best_phi1 = 0.0;
        for (std::size_t i = 0; i < cells_; ++i) {
            const double phi1 = grid_angle(i);
            const double len1 = arc(w.types[0], phi1);
            // Words that cannot beat the incumbent of an earlier word are cut;
            // the margin leaves room for refinement to undercut the grid.
            const double bound = std::min(best ? best->length : best_length_, best_length_ + grid_.angle_step);
            if (len1 > bound) break;
            const Mat3 s1 = segment_rotation_unchecked(w.types[0], r, phi1);
            const Vec3 z1 = s1.transpose() * y_;
            if (len1 + std::acos(std::clamp(z1.x(), -1.0, 1.0)) > bound + 1e-12) continue;
            for (const double phi2 : middle_roots(w, w.types[1], z1)) {
                const Vec3 z2 = segment_rotation_unchecked(w.types[1], r, phi2).transpose() * z1;
                auto res = finish(w, word, {phi1, phi2}, z2);
                if (res && (!best || res->length < best->length)) {
                    best = res;
                    best_phi1 = phi1;
                }
            }
        }
        if (!best) return best;
        return refine_three(w, word, *best, best_phi1);
    }

    // Length of the shortest feasible completion for fixed φ1 whose middle
    // angle lies within `window` of `near`.
    std::optional<OracleResult> completion(const OracleWord& w, const std::string& word, double phi1, double near,
                                           double window) const {
        const double r = r_.value();
        const Vec3 z1 = segment_rotation_unchecked(w.types[0], r, phi1).transpose() * y_;
        auto h = [&](double t) {
            return z1.dot(segment_rotation_unchecked(w.types[1], r, t) * w.last_axis) - w.last_level;
        };
        constexpr int kSub = 16;
        const double step = 2.0 * window / kSub;
        std::optional<OracleResult> best;
        double a = near - window;
        double ha = h(a);
        for (int k = 0; k < kSub; ++k) {
            double lo = a;
            double b = a + step;
            const double hb = h(b);
            double hlo = ha;
            if (hlo * hb <= 0.0) {
                double hi = b;
                while (hi - lo > grid_.refine_tol * 0.1) {
                    const double m = 0.5 * (lo + hi);
                    const double hm = h(m);
                    if ((hm < 0.0) == (hlo < 0.0)) {
                        lo = m;
                        hlo = hm;
                    } else {
                        hi = m;
                    }
                }
                const double phi2 = wrap_angle(0.5 * (lo + hi));
                const Vec3 z2 = segment_rotation_unchecked(w.types[1], r, phi2).transpose() * z1;
                auto res = finish(w, word, {wrap_angle(phi1), phi2}, z2);
                if (res && (!best || std::abs(phi2 - wrap_angle(near)) <
                                         std::abs(best->segments[1].angle - wrap_angle(near)))) {
                    best = res;
                }
            }
            a = b;
            ha = hb;
        }
        return best;
    }

    OracleResult refine_three(const OracleWord& w, const std::string& word, OracleResult current, double phi1) const {
        const double grid_length = current.length;
        double delta = grid_.angle_step;
        while (delta >= grid_.refine_tol) {
            bool improved = false;
            for (const double dir : {+1.0, -1.0}) {
                const double cand = phi1 + dir * delta;
                auto next = completion(w, word, cand, current.segments[1].angle, 4.0 * grid_.angle_step);
                if (next && next->length < current.length && next->residual <= kDefaultTolerances.endpoint) {
                    current = *next;
                    phi1 = cand;
                    improved = true;
                    break;
                }
            }
            if (!improved) delta *= 0.5;
        }
        current.grid_length = grid_length;
        return current;
    }

    Vec3 y_;
    TurnRadius r_;
    GridSpec grid_;
    std::size_t cells_;
    std::vector<Vec3> table_;
    double best_length_ = std::numeric_limits<double>::infinity();
};

} // namespace detail

/// Brute-force shortest path over all {L, R, G} words of up to
/// `grid.max_segments` segments. Independent of the closed-form solvers;
/// used to certify planner output.
///
/// The reported length is within `resolution_bound` of the best path in the
/// searched family. An infeasible result (feasible == false) means nothing
/// was found at this resolution, not that the target is unreachable.
inline OracleResult oracle_search(const Configuration& start, const Vec3& target, const TurnRadius& r,
                                  const GridSpec& grid = {}) {
    grid.validate();
    if (!target.allFinite() || std::abs(target.norm() - 1.0) > kDefaultTolerances.unit_norm) {
        throw std::domain_error("target must be a unit vector");
    }
    const Vec3 local = start.matrix().transpose() * target;
    return detail::OracleSearch(local, r, grid).run();
}

} // namespace sphere_dubins
