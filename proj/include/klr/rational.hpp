#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace klr {

using Rational = mpq_class;

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline Rational parse_rational(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

}  // namespace klr
