#ifndef CRNORM_TEST_HELPERS_HPP
#define CRNORM_TEST_HELPERS_HPP

#include "crnorm/series.hpp"

#include <random>

namespace crnorm_test {

using namespace crnorm;

inline Scalar random_rational(std::mt19937_64& rng, int max_num = 6, int max_den = 3) {
    std::uniform_int_distribution<int> num(-max_num, max_num);
    std::uniform_int_distribution<int> den(1, max_den);
    return Scalar(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
}

inline Scalar random_real_rational(std::mt19937_64& rng, int max_num = 6, int max_den = 3) {
    std::uniform_int_distribution<int> num(-max_num, max_num);
    std::uniform_int_distribution<int> den(1, max_den);
    return Scalar(Rational(num(rng), den(rng)));
}

// Random series on the real side (z, zb, s), arbitrary terms.
inline Series random_real_side_series(std::mt19937_64& rng, WeightProfile p, int max_terms = 12,
                                      int min_weight = 0) {
    Series s(p);
    std::uniform_int_distribution<int> nd(1, max_terms);
    std::uniform_int_distribution<int> ed(0, 3);
    std::uniform_int_distribution<int> sd(0, 2);
    int n = nd(rng);
    for (int i = 0; i < n; ++i) {
        Monomial m = make_mono(ed(rng), ed(rng), ed(rng), ed(rng), sd(rng));
        if (m.weighted_degree(p) > p.truncation_order) continue;
        if (m.weighted_degree(p) < min_weight) continue;
        Series t = Series::monomial(p, m, random_rational(rng), {VarTag::S, VarTag::None});
        s += t;
    }
    return s;
}

// Random real-valued series with min(k,l) >= 1 on every monomial and
// weighted order >= 2: a valid regular defining function.
inline Series random_regular_phi(std::mt19937_64& rng, WeightProfile p, int max_terms = 10) {
    Series s(p);
    std::uniform_int_distribution<int> nd(2, max_terms);
    std::uniform_int_distribution<int> ed(0, 2);
    std::uniform_int_distribution<int> e1(1, 2);
    std::uniform_int_distribution<int> sd(0, 1);
    int n = nd(rng);
    for (int i = 0; i < n; ++i) {
        int a1 = e1(rng), a2 = ed(rng), b1 = e1(rng), b2 = ed(rng);
        Monomial m = make_mono(a1, a2, b1, b2, sd(rng));
        if (m.weighted_degree(p) > p.truncation_order) continue;
        Scalar c = random_rational(rng, 4, 2);
        Series t = Series::monomial(p, m, c, {VarTag::S, VarTag::None});
        // add the mirror term so the sum is real
        Monomial mm = make_mono(b1, b2, a1, a2, m.e[4]);
        Series tm = Series::monomial(p, mm, c.conj(), {VarTag::S, VarTag::None});
        s += t;
        s += tm;
    }
    return s;
}

} // namespace crnorm_test

#endif
