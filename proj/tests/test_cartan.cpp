#include "klr/cartan.hpp"
#include "klr/lyndon.hpp"
#include "klr/word.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace klr;

namespace {

RootVector rv(std::vector<int> v) { return RootVector(std::move(v)); }

// Independent root enumeration: reflect simple roots under the Weyl group until closure.
std::set<std::vector<int>> weyl_orbit_roots(const CartanDatum& D) {
    std::size_t r = D.size();
    std::set<std::vector<int>> all, frontier;
    for (std::size_t i = 0; i < r; ++i) {
        std::vector<int> e(r, 0);
        e[i] = 1;
        frontier.insert(e);
    }
    while (!frontier.empty()) {
        std::set<std::vector<int>> next;
        for (const auto& b : frontier) {
            if (!all.insert(b).second) continue;
            for (std::size_t i = 0; i < r; ++i) {
                int s = 0;
                for (std::size_t k = 0; k < r; ++k) s += b[k] * D.pairing[k][i];
                int coeff = 2 * s / D.pairing[i][i];
                std::vector<int> c = b;
                c[i] -= coeff;
                if (!all.count(c)) next.insert(c);
            }
        }
        frontier = next;
    }
    std::set<std::vector<int>> pos;
    for (const auto& b : all)
        if (std::all_of(b.begin(), b.end(), [](int x) { return x >= 0; })) pos.insert(b);
    return pos;
}

const std::vector<std::pair<char, int>> kTypes = {{'A', 1}, {'A', 2}, {'A', 5}, {'B', 2}, {'B', 4}, {'C', 3}, {'C', 5},
                                                   {'D', 4}, {'D', 6}, {'E', 6}, {'E', 7}, {'E', 8}, {'F', 4}, {'G', 2}};

}  // namespace

TEST(Cartan, RankTwoRootsA2) {
    auto D = build_cartan('A', 2);
    ASSERT_EQ(D.positive_roots.size(), 3u);
    EXPECT_TRUE(D.is_positive_root(rv({1, 0})));
    EXPECT_TRUE(D.is_positive_root(rv({0, 1})));
    EXPECT_TRUE(D.is_positive_root(rv({1, 1})));
}

TEST(Cartan, RootsB2) {
    auto D = build_cartan('B', 2);
    std::set<RootVector> got(D.positive_roots.begin(), D.positive_roots.end());
    std::set<RootVector> want = {rv({1, 0}), rv({0, 1}), rv({1, 1}), rv({2, 1})};
    EXPECT_EQ(got, want);
}

TEST(Cartan, E8Has120Roots) { EXPECT_EQ(build_cartan('E', 8).positive_roots.size(), 120u); }

TEST(Cartan, C3Has9RootsMatchingClosedForm) {
    auto D = build_cartan('C', 3);
    ASSERT_EQ(D.positive_roots.size(), 9u);
    // long node 0: 2a1+...+2a_j+a0 style roots appear as 2 on node 1 with 1 on node 0
    EXPECT_TRUE(D.is_positive_root(rv({1, 2, 0})));
    EXPECT_TRUE(D.is_positive_root(rv({1, 2, 2})));
    EXPECT_FALSE(D.is_positive_root(rv({2, 1, 0})));
}

TEST(Cartan, D4ContainsHighestRoot) {
    auto D = build_cartan('D', 4);
    EXPECT_EQ(D.positive_roots.size(), 12u);
    EXPECT_TRUE(D.is_positive_root(rv({1, 1, 2, 1})));
}

TEST(Cartan, A1SingleRoot) {
    auto D = build_cartan('A', 1);
    ASSERT_EQ(D.positive_roots.size(), 1u);
    EXPECT_EQ(D.positive_roots[0], rv({1}));
}

TEST(Cartan, InvalidTypesRejected) {
    EXPECT_THROW(build_cartan('D', 3), std::invalid_argument);
    EXPECT_THROW(build_cartan('E', 9), std::invalid_argument);
    EXPECT_THROW(build_cartan('F', 5), std::invalid_argument);
    EXPECT_THROW(build_cartan('B', 1), std::invalid_argument);
    EXPECT_THROW(build_cartan('X', 2), std::invalid_argument);
}

TEST(Cartan, PairingSymmetricAndCartanIntegral) {
    for (auto [s, r] : kTypes) {
        auto D = build_cartan(s, r);
        for (int i = 0; i < r; ++i) {
            int di = D.form(i, i) / 2;
            EXPECT_TRUE(di >= 1 && di <= 3) << D.name();
            EXPECT_EQ(D.d[static_cast<std::size_t>(i)], di);
            for (int j = 0; j < r; ++j) {
                EXPECT_EQ(D.form(i, j), D.form(j, i));
                int aij = 2 * D.form(i, j) / D.form(i, i);
                EXPECT_EQ(2 * D.form(i, j) % D.form(i, i), 0);
                if (i == j) EXPECT_EQ(aij, 2);
                else EXPECT_EQ(aij < 0, D.adjacent(i, j)) << D.name();
            }
        }
    }
}

TEST(Cartan, OrientationOneArrowPerEdgeSmallerToLarger) {
    for (auto [s, r] : kTypes) {
        auto D = build_cartan(s, r);
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < r; ++j) {
                if (D.adjacent(i, j)) {
                    EXPECT_TRUE(D.arrow(i, j));
                    EXPECT_FALSE(D.arrow(j, i));
                } else {
                    EXPECT_FALSE(D.arrow(i, j) || D.arrow(j, i));
                }
            }
    }
}

TEST(Cartan, CustomOrientationValidated) {
    auto D = build_cartan('A', 3);
    auto E = with_orientation(D, {{1, 0}, {1, 2}});
    EXPECT_TRUE(E.arrow(1, 0));
    EXPECT_THROW(with_orientation(D, {{1, 0}}), std::invalid_argument);
    EXPECT_THROW(with_orientation(D, {{0, 1}, {1, 0}, {1, 2}}), std::invalid_argument);
}

TEST(Cartan, RootsAgreeWithWeylOrbit) {
    for (auto [s, r] : kTypes) {
        auto D = build_cartan(s, r);
        std::set<std::vector<int>> got;
        for (const auto& b : D.positive_roots) got.insert(b.c);
        EXPECT_EQ(got.size(), D.positive_roots.size()) << "duplicates in " << D.name();
        EXPECT_EQ(got, weyl_orbit_roots(D)) << D.name();
    }
}

TEST(Cartan, RootStringsClosed) {
    for (auto [s, r] : kTypes) {
        auto D = build_cartan(s, r);
        for (const auto& b : D.positive_roots)
            for (int i = 0; i < r; ++i) {
                if (b == D.simple(i)) continue;
                // the alpha_i string through b has length -<b, alpha_i^vee> plus the steps down
                int p = 0, q = 0;
                RootVector x = b;
                while (true) {
                    x -= D.simple(i);
                    if (!x.nonnegative() || !D.is_positive_root(x)) break;
                    ++p;
                }
                x = b;
                while (true) {
                    x += D.simple(i);
                    if (!D.is_positive_root(x)) break;
                    ++q;
                }
                EXPECT_EQ(p - q, 2 * D.form_simple(b, i) / D.form(i, i)) << D.name() << " " << b.to_string();
            }
    }
}

TEST(Cartan, SerializationRoundTrip) {
    for (auto [s, r] : kTypes) {
        auto D = build_cartan(s, r);
        auto E = cartan_from_json(nlohmann::json::parse(D.serialize()));
        EXPECT_EQ(E.serialize(), D.serialize());
        EXPECT_EQ(E.positive_roots.size(), D.positive_roots.size());
    }
}

TEST(Cartan, ContentAndHeight) {
    auto D = build_cartan('B', 2);
    auto c = content(D, Word{0, 1, 0});
    EXPECT_EQ(c, rv({2, 1}));
    EXPECT_EQ(height(c), 3);
    EXPECT_TRUE(content(D, Word()).is_zero());
    EXPECT_EQ(height(content(D, Word())), 0);
    EXPECT_THROW(content(D, Word{0, 2}), std::invalid_argument);
}

TEST(Cartan, ContentOfGoodLyndonWordsB4AreRoots) {
    auto D = build_cartan('B', 4);
    auto T = good_lyndon_table(D);
    for (const auto& [b, w] : T.map) {
        EXPECT_TRUE(D.is_positive_root(content(D, w)));
        EXPECT_EQ(content(D, w), b);
    }
}
