#include "klr/golden.hpp"
#include "klr/lyndon.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <random>

using namespace klr;

namespace {

const std::vector<std::pair<char, int>> kSupported = {{'A', 1}, {'A', 4}, {'A', 8}, {'B', 2}, {'B', 5}, {'C', 2}, {'C', 5},
                                                       {'D', 4}, {'D', 6}, {'E', 6}, {'E', 7}, {'E', 8}, {'F', 4}, {'G', 2}};

std::set<std::string> words_of(const LyndonTable& T) {
    std::set<std::string> s;
    for (const auto& [b, w] : T.map) s.insert(w.compact());
    return s;
}

// Right order: larger than every proper left factor. Left order: smaller than every proper right factor.
bool brute_lyndon(const Word& w, Order ord) {
    for (std::size_t k = 1; k < w.size(); ++k) {
        if (ord == Order::Right && word_cmp(w.sub(0, k), w, ord) >= 0) return false;
        if (ord == Order::Left && word_cmp(w.sub(k), w, ord) <= 0) return false;
    }
    return true;
}

// All factorizations into Lyndon words that are non-increasing; must be exactly one.
std::vector<std::vector<Word>> brute_factorizations(const Word& w, Order ord) {
    std::vector<std::vector<Word>> out;
    std::vector<Word> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
        if (pos == w.size()) {
            out.push_back(cur);
            return;
        }
        for (std::size_t e = pos + 1; e <= w.size(); ++e) {
            Word f = w.sub(pos, e - pos);
            if (!brute_lyndon(f, ord)) continue;
            if (!cur.empty() && word_cmp(cur.back(), f, ord) < 0) continue;
            cur.push_back(f);
            rec(e);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

// Number of multisets of positive roots summing to nu.
long kostant(const CartanDatum& D, const RootVector& nu) {
    std::vector<RootVector> roots = D.positive_roots;
    std::function<long(std::size_t, RootVector)> rec = [&](std::size_t from, RootVector rest) -> long {
        if (rest.is_zero()) return 1;
        long n = 0;
        for (std::size_t k = from; k < roots.size(); ++k) {
            RootVector r = rest;
            r -= roots[k];
            if (r.nonnegative()) n += rec(k, r);
        }
        return n;
    };
    return rec(0, nu);
}

std::vector<RootVector> weights_up_to(const CartanDatum& D, int h) {
    std::vector<RootVector> out;
    std::function<void(std::size_t, RootVector, int)> rec = [&](std::size_t i, RootVector v, int left) {
        if (i == D.size()) {
            if (!v.is_zero()) out.push_back(v);
            return;
        }
        for (int c = 0; c <= left; ++c) {
            RootVector w = v;
            w.c[i] = c;
            rec(i + 1, w, left - c);
        }
    };
    rec(0, D.zero(), h);
    return out;
}

}  // namespace

TEST(Lyndon, IsLyndonExamples) {
    EXPECT_TRUE(is_lyndon(Word{0, 1}));
    EXPECT_FALSE(is_lyndon(Word{1, 0}));
    EXPECT_TRUE(is_lyndon(Word{3}));
    EXPECT_TRUE(is_lyndon(Word{0, 0, 1}));
    EXPECT_THROW(is_lyndon(Word()), std::invalid_argument);
}

TEST(Lyndon, IsLyndonMatchesDefinition) {
    std::mt19937 rng(1);
    std::uniform_int_distribution<int> len(1, 7), let(0, 2);
    for (int t = 0; t < 2000; ++t) {
        Word w;
        for (int n = len(rng); n > 0; --n) w.push_back(let(rng));
        for (Order o : {Order::Right, Order::Left}) EXPECT_EQ(is_lyndon(w, o), brute_lyndon(w, o)) << w.to_string();
    }
}

TEST(Lyndon, StandardFactorizations) {
    EXPECT_EQ(std_factorization(Word{0, 1, 2}), std::make_pair(Word{0}, Word{1, 2}));
    EXPECT_EQ(std_factorization(Word{0, 1}), std::make_pair(Word{0}, Word{1}));
    EXPECT_EQ(std_factorization(Word{0, 0, 1}), std::make_pair(Word{0}, Word{0, 1}));
    EXPECT_THROW(std_factorization(Word{1}), std::invalid_argument);
    EXPECT_THROW(std_factorization(Word{1, 0}), std::invalid_argument);
}

TEST(Lyndon, StandardFactorizationPartsAreLyndon) {
    std::mt19937 rng(2);
    std::uniform_int_distribution<int> len(2, 8), let(0, 3);
    int n = 0;
    for (int t = 0; t < 3000; ++t) {
        Word w;
        for (int k = len(rng); k > 0; --k) w.push_back(let(rng));
        for (Order o : {Order::Right, Order::Left}) {
            if (!is_lyndon(w, o)) continue;
            auto [a, b] = std_factorization(w, o);
            EXPECT_EQ(a + b, w);
            EXPECT_TRUE(is_lyndon(a, o) && is_lyndon(b, o)) << w.to_string();
            ++n;
        }
    }
    EXPECT_GT(n, 100);
}

TEST(Lyndon, CanonicalFactorizationUniqueAndCorrect) {
    EXPECT_EQ(canonical_factorization(Word{1, 0}), (std::vector<Word>{Word{1}, Word{0}}));
    EXPECT_EQ(canonical_factorization(Word{0, 1, 2}), (std::vector<Word>{Word{0, 1, 2}}));
    EXPECT_THROW(canonical_factorization(Word()), std::invalid_argument);
    // exhaustive over words of length <= 8 on two letters and <= 5 on three
    for (int alpha : {2, 3}) {
        int maxlen = alpha == 2 ? 8 : 5;
        for (int len = 1; len <= maxlen; ++len) {
            int total = 1;
            for (int k = 0; k < len; ++k) total *= alpha;
            for (int code = 0; code < total; ++code) {
                Word w;
                for (int k = 0, c = code; k < len; ++k, c /= alpha) w.push_back(c % alpha);
                for (Order o : {Order::Right, Order::Left}) {
                    auto all = brute_factorizations(w, o);
                    ASSERT_EQ(all.size(), 1u) << w.to_string();
                    EXPECT_EQ(canonical_factorization(w, o), all[0]) << w.to_string();
                }
            }
        }
    }
}

TEST(Lyndon, SmallTables) {
    EXPECT_EQ(words_of(good_lyndon_table(build_cartan('B', 2))), (std::set<std::string>{"0", "1", "01", "001"}));
    EXPECT_EQ(words_of(good_lyndon_table(build_cartan('C', 3))),
              (std::set<std::string>{"0", "1", "2", "01", "12", "012", "1012", "011", "01212"}));
    EXPECT_EQ(words_of(good_lyndon_table(build_cartan('G', 2))),
              (std::set<std::string>{"0", "1", "01", "001", "0001", "00101"}));
    EXPECT_EQ(words_of(good_lyndon_table(build_cartan('A', 1))), (std::set<std::string>{"0"}));
}

TEST(Lyndon, ClassicalTablesMatchClosedForms) {
    for (int r = 1; r <= 8; ++r) EXPECT_TRUE(golden::check_table(good_lyndon_table(build_cartan('A', r))).diffs.empty());
    for (int r = 2; r <= 6; ++r) {
        EXPECT_TRUE(golden::check_table(good_lyndon_table(build_cartan('B', r))).diffs.empty()) << r;
        EXPECT_TRUE(golden::check_table(good_lyndon_table(build_cartan('C', r))).diffs.empty()) << r;
    }
    for (int r = 4; r <= 6; ++r) EXPECT_TRUE(golden::check_table(good_lyndon_table(build_cartan('D', r))).diffs.empty()) << r;
}

TEST(Lyndon, ExceptionalTablesMatchReference) {
    EXPECT_TRUE(golden::check_table(good_lyndon_table(build_cartan('F', 4))).diffs.empty());
    EXPECT_TRUE(golden::check_table(good_lyndon_table(build_cartan('G', 2))).diffs.empty());
    auto E = good_lyndon_table(build_cartan('E', 8));
    EXPECT_EQ(E.map.size(), 120u);
    EXPECT_TRUE(golden::check_table(E).ok());  // remaining differences are all quarantined
}

TEST(Lyndon, TableInvariants) {
    for (auto [s, r] : kSupported) {
        auto D = build_cartan(s, r);
        for (Order o : {Order::Right, Order::Left}) {
            auto T = good_lyndon_table(D, o);
            ASSERT_EQ(T.map.size(), D.positive_roots.size());
            ASSERT_EQ(T.inverse.size(), T.map.size());
            for (const auto& [b, w] : T.map) {
                EXPECT_EQ(content(D, w), b);
                EXPECT_TRUE(is_lyndon(w, o));
            }
            for (int i = 0; i < r; ++i) EXPECT_EQ(T.word(D.simple(i)), Word::letter(i));
        }
    }
}

TEST(Lyndon, RootOrderIsConvex) {
    for (auto [s, r] : kSupported) {
        auto D = build_cartan(s, r);
        for (Order o : {Order::Right, Order::Left}) {
            auto T = good_lyndon_table(D, o);
            int n = 0;
            for (const auto& a : D.positive_roots)
                for (const auto& b : D.positive_roots) {
                    RootVector c = a;
                    c += b;
                    if (T.root_cmp(a, b) >= 0 || !D.is_positive_root(c)) continue;
                    EXPECT_LT(T.root_cmp(a, c), 0) << D.name();
                    EXPECT_LT(T.root_cmp(c, b), 0) << D.name();
                    ++n;
                }
            EXPECT_TRUE(n > 0 || D.rank == 1);
        }
    }
}

TEST(Lyndon, ConcatenationDominatesLyndonWord) {
    for (auto [s, r] : kSupported) {
        auto D = build_cartan(s, r);
        auto T = good_lyndon_table(D);
        for (const auto& a : D.positive_roots)
            for (const auto& b : D.positive_roots) {
                RootVector c = a;
                c += b;
                if (!D.is_positive_root(c) || word_cmp(T.word(a), T.word(b)) >= 0) continue;
                EXPECT_GE(word_cmp(T.word(a) + T.word(b), T.word(c)), 0);
            }
    }
}

TEST(Lyndon, LyndonWordIsLargestGoodWordOfItsWeight) {
    const std::vector<std::pair<char, int>> types = {{'A', 3}, {'B', 3}, {'C', 3}, {'D', 4}, {'F', 4}, {'G', 2}};
    for (auto [s, r] : types) {
        auto D = build_cartan(s, r);
        auto T = good_lyndon_table(D);
        for (const auto& b : D.positive_roots) {
            if (b.height() > 6) continue;
            auto gw = good_words(T, b);
            ASSERT_FALSE(gw.empty());
            EXPECT_EQ(gw.back(), T.word(b)) << D.name() << " " << b.to_string();
        }
    }
}

TEST(Lyndon, GoodWordsCountIsKostantPartitionCount) {
    const std::vector<std::pair<char, int>> types = {{'A', 3}, {'B', 3}, {'C', 3}, {'D', 4}, {'G', 2}};
    for (auto [s, r] : types) {
        auto D = build_cartan(s, r);
        auto T = good_lyndon_table(D);
        for (const auto& nu : weights_up_to(D, 5)) {
            auto gw = good_words(T, nu);
            EXPECT_EQ(static_cast<long>(gw.size()), kostant(D, nu)) << D.name() << " " << nu.to_string();
            for (std::size_t k = 1; k < gw.size(); ++k) EXPECT_LT(word_cmp(gw[k - 1], gw[k]), 0);
            for (const auto& g : gw) {
                EXPECT_TRUE(is_good(T, g));
                EXPECT_EQ(content(D, g), nu);
                // every factor of the canonical factorization is a good Lyndon word
                for (const auto& f : canonical_factorization(g)) EXPECT_TRUE(T.contains(f));
            }
        }
        EXPECT_EQ(good_words(T, D.simple(0)), std::vector<Word>{Word{0}});
        RootVector two = D.simple(0);
        two += D.simple(0);
        EXPECT_EQ(good_words(T, two), std::vector<Word>{(Word{0, 0})});
    }
}

TEST(Lyndon, SubwordsOfGoodWordsAreGood) {
    auto D = build_cartan('B', 3);
    auto T = good_lyndon_table(D);
    for (const auto& nu : weights_up_to(D, 6))
        for (const auto& g : good_words(T, nu))
            for (std::size_t a = 0; a < g.size(); ++a)
                for (std::size_t len = 1; a + len <= g.size(); ++len) EXPECT_TRUE(is_good(T, g.sub(a, len))) << g.to_string();
}

TEST(Lyndon, OppositeTableIsReversal) {
    for (auto [s, r] : kSupported) {
        auto D = build_cartan(s, r);
        auto R = good_lyndon_table(D), L = opposite_table(D);
        for (const auto& [b, w] : R.map) EXPECT_EQ(L.word(b), w.reversed()) << D.name();
    }
}

TEST(Lyndon, TypeATableSymmetricUnderReversalAndRelabel) {
    for (int r = 1; r <= 4; ++r) {
        auto D = build_cartan('A', r);
        auto R = good_lyndon_table(D), L = opposite_table(D);
        std::set<std::string> relabeled;
        for (const auto& [b, w] : L.map) {
            Word x;
            for (int c : w.letters()) x.push_back(r - 1 - c);
            relabeled.insert(x.compact());
        }
        EXPECT_EQ(relabeled, words_of(R));
    }
}

TEST(Lyndon, G2ReversalStable) {
    auto D = build_cartan('G', 2);
    EXPECT_EQ(words_of(good_lyndon_table(D)).size(), 6u);
    std::set<std::string> rev;
    for (const auto& w : words_of(opposite_table(D))) rev.insert(std::string(w.rbegin(), w.rend()));
    EXPECT_EQ(rev, words_of(good_lyndon_table(D)));
}
