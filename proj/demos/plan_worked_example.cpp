// Plans from the identity frame to (0.6942, 0.5498, 0.4646) with r = 0.4 and
// prints every candidate, then cross-checks the winner against the oracle.

#include <cstdio>

#include "sphere_dubins/sphere_dubins.hpp"

int main() {
    namespace sd = sphere_dubins;
    const sd::Vec3 target = sd::Vec3(0.6942, 0.5498, 0.4646).normalized();
    const sd::TurnRadius r(0.4);
    const auto start = sd::Configuration::identity();

    const auto p = sd::plan(start, target, r);
    for (std::size_t i = 0; i < p.candidates.size(); ++i) {
        const auto& c = p.candidates[i];
        std::printf("%c %-7s phi1=%.6f phi2=%.6f length=%.6f\n", i == p.optimal ? '*' : ' ',
                    std::string(sd::to_string(c.type)).c_str(), c.phi1(), c.phi2(), c.length);
    }

    const auto o = sd::oracle_search(start, target, r);
    std::printf("oracle: %s length=%.6f (bound %.2e)\n", o.word.c_str(), o.length, o.resolution_bound);
    return 0;
}
