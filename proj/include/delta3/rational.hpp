#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace delta3 {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Raised when externally supplied data (files, CLI arguments, tables) is malformed.
struct input_error : std::runtime_error {
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when two internal computation paths that must agree do not.
struct internal_error : std::logic_error {
    explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

/// Canonical "num/den" form, always with an explicit positive denominator.
inline std::string rat_to_string(const Rat& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

/// Accepts "n" or "n/d" with optional sign; d must be nonzero.
inline Rat rat_from_string(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(BigInt(s));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw input_error("rational with zero denominator: " + s);
        return Rat(num, den);
    } catch (const std::runtime_error&) {
        throw input_error("malformed rational: " + s);
    }
}

}  // namespace delta3
