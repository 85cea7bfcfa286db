#pragma once

#include "jostforge/exact/rational_function.hpp"

#include <complex>
#include <string>

namespace testing_fixtures {

using jostforge::exact::GaussianRational;
using jostforge::exact::Poly;
using jostforge::exact::RationalFunction;

inline GaussianRational q(long p, long d = 1) { return GaussianRational(mpq_class(p, d)); }

inline RationalFunction pole_term(const GaussianRational& c, const GaussianRational& s, int order) {
    return RationalFunction::normalize(Poly(c), jostforge::exact::pow(Poly::linear_factor(s), order));
}

// -5/16 x^-2 - 5/16 (x-1)^-2 - 7/8 x^-1 + 5/24 (x-1)^-1
inline RationalFunction two_pole_potential() {
    return pole_term(q(-5, 16), q(0), 2) + pole_term(q(-5, 16), q(1), 2) + pole_term(q(-7, 8), q(0), 1) +
           pole_term(q(5, 24), q(1), 1);
}

inline std::string data_path(const std::string& name) { return std::string(JOSTFORGE_DATA_DIR) + "/" + name; }

}  // namespace testing_fixtures
