#pragma once

#include <string>

#include "padicds/errors.hpp"

namespace padicds {

/// The five stage-set families. A and C take reduced fractions with numerator
/// bounded by (resp. bounding) the denominator; B is their union; FrakK runs
/// over divisor pairs of n and FrakA over its unitary splits.
enum class Family { A, C, B, FrakA, FrakK };

inline std::string family_name(Family f) {
    switch (f) {
    case Family::A: return "a";
    case Family::C: return "c";
    case Family::B: return "b";
    case Family::FrakA: return "fa";
    case Family::FrakK: return "fk";
    }
    return "?";
}

inline Family parse_family(const std::string& s) {
    if (s == "a") return Family::A;
    if (s == "c") return Family::C;
    if (s == "b") return Family::B;
    if (s == "fa") return Family::FrakA;
    if (s == "fk") return Family::FrakK;
    throw InvalidInput("unknown family \"" + s + "\" (expected a|c|b|fa|fk)");
}

} // namespace padicds
