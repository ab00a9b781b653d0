#include "klr/klr_core.hpp"
#include "poly_oracle.hpp"

#include <gtest/gtest.h>

#include <random>
#include <tuple>

using namespace klr;

namespace {

struct GenWord {
    std::vector<std::pair<int, int>> g;  // (kind, index): kind 0 = phi, 1 = y, 2 = e
    Word idem;
};

GenWord random_gen_word(std::mt19937& rng, int d, int maxlen, const std::vector<Word>& idems) {
    GenWord G;
    int len = static_cast<int>(rng() % static_cast<unsigned>(maxlen + 1));
    for (int k = 0; k < len; ++k) {
        int t = static_cast<int>(rng() % 2);
        G.g.push_back({t, t == 1 ? 1 + static_cast<int>(rng() % static_cast<unsigned>(d)) : 1 + static_cast<int>(rng() % static_cast<unsigned>(d - 1))});
    }
    G.idem = idems[rng() % idems.size()];
    return G;
}

KlrElement build(KlrEngine& E, const GenWord& G) {
    KlrElement X = E.e(G.idem);
    for (auto it = G.g.rbegin(); it != G.g.rend(); ++it) X = it->first == 1 ? E.mul_y(it->second, X) : E.mul_phi(it->second, X);
    return X;
}

KlrElement random_element(KlrEngine& E, std::mt19937& rng, int maxlen) {
    KlrElement X = E.zero();
    for (int k = 0; k < 2; ++k) X += build(E, random_gen_word(rng, E.d(), maxlen, E.idempotents())) * Rational(static_cast<long>(1 + rng() % 3));
    return X;
}

RootVector random_weight(std::mt19937& rng, const CartanDatum& D, int d) {
    RootVector nu(D.size());
    for (int k = 0; k < d; ++k) nu.c[rng() % std::min<std::size_t>(D.size(), 3)]++;
    return nu;
}

const std::vector<std::pair<char, int>> kTypes = {{'A', 3}, {'B', 2}, {'C', 3}, {'G', 2}, {'B', 3}, {'F', 4}, {'D', 4}};

}  // namespace

TEST(KlrCore, QPolynomials) {
    auto F = build_cartan('F', 4);
    EXPECT_TRUE(q_ij(F, 2, 2).is_zero());
    EXPECT_EQ(q_ij(F, 0, 3).to_string(), "1");
    EXPECT_EQ(q_ij(F, 1, 2).to_string(), "u^2 - v");
    EXPECT_EQ(q_ij(F, 2, 1), q_ij(F, 1, 2).swapped());
    for (char s : {'A', 'B', 'C', 'D', 'G'}) {
        auto D = build_cartan(s, s == 'G' ? 2 : 4);
        for (int i = 0; i < D.rank; ++i)
            for (int j = 0; j < D.rank; ++j) EXPECT_EQ(q_ij(D, i, j), q_ij(D, j, i).swapped()) << D.name();
    }
    EXPECT_THROW(q_ij(F, 0, 4), std::invalid_argument);
}

TEST(KlrCore, GeneratorDegrees) {
    auto A = build_cartan('A', 3);
    EXPECT_EQ(gen_degree(A, Gen::E, 0, Word{0, 1}), 0);
    EXPECT_EQ(gen_degree(A, Gen::Phi, 1, Word{0, 1}), 1);
    EXPECT_EQ(gen_degree(A, Gen::Phi, 1, Word{0, 2}), 0);
    EXPECT_EQ(gen_degree(A, Gen::Y, 2, Word{0, 1}), 2);
    auto C = build_cartan('C', 3);
    EXPECT_EQ(gen_degree(C, Gen::Phi, 1, Word{0, 0}), -4);
    EXPECT_EQ(gen_degree(C, Gen::Phi, 1, Word{1, 1}), -2);
    EXPECT_THROW(gen_degree(C, Gen::Phi, 2, Word{1, 1}), std::out_of_range);
}

TEST(KlrCore, EngineMatchesFaithfulPolynomialRepresentation) {
    std::mt19937 rng(7);
    int total = 0;
    for (auto [s, rk] : kTypes) {
        CartanDatum D = build_cartan(s, rk);
        for (int trial = 0; trial < 30; ++trial) {
            int d = 2 + static_cast<int>(rng() % 4);
            RootVector nu = random_weight(rng, D, d);
            int split = (trial % 2) ? 1 + static_cast<int>(rng() % static_cast<unsigned>(d - 1)) : 0;
            KlrEngine E(D, nu, split);
            oracle::Rep R{&D, d};
            auto G = random_gen_word(rng, d, 10, E.idempotents());
            G.g.clear();
            int len = 1 + static_cast<int>(rng() % 10);
            for (int k = 0; k < len; ++k) {
                int t = static_cast<int>(rng() % 3);
                G.g.push_back({t, t == 1 ? 1 + static_cast<int>(rng() % static_cast<unsigned>(d)) : 1 + static_cast<int>(rng() % static_cast<unsigned>(d - 1))});
            }
            KlrElement X = E.one();
            for (auto it = G.g.rbegin(); it != G.g.rend(); ++it) X = it->first == 1 ? E.mul_y(it->second, X) : E.mul_phi(it->second, X);
            for (const auto& i : E.idempotents())
                for (int f = 0; f < 3; ++f) {
                    oracle::Vec v;
                    std::vector<int> m(static_cast<std::size_t>(d), 0);
                    if (f == 1) m[0] = 1;
                    if (f == 2) {
                        m[static_cast<std::size_t>(d - 1)] = 2;
                        m[0] = 1;
                    }
                    v[i.s][m] = 1;
                    oracle::Vec a = v;
                    for (auto it = G.g.rbegin(); it != G.g.rend(); ++it) a = it->first == 1 ? R.y(it->second, a) : R.phi(it->second, a);
                    ASSERT_EQ(a, R.act(E, X, v)) << D.name() << " split " << split << " " << X.to_string();
                    ++total;
                }
        }
    }
    EXPECT_GT(total, 1000);
}

TEST(KlrCore, IdempotentsAndUnit) {
    auto D = build_cartan('A', 2);
    KlrEngine E(D, RootVector(std::vector<int>{1, 1}));
    auto e01 = E.e(Word{0, 1}), e10 = E.e(Word{1, 0});
    EXPECT_EQ(E.mul(e01, e01), e01);
    EXPECT_TRUE(E.mul(e01, e10).is_zero());
    EXPECT_EQ(E.one(), e01 + e10);
    std::mt19937 rng(1);
    for (int t = 0; t < 20; ++t) {
        auto x = random_element(E, rng, 4);
        EXPECT_EQ(E.mul(E.one(), x), x);
        EXPECT_EQ(E.mul(x, E.one()), x);
    }
}

TEST(KlrCore, QuadraticAndNilHeckeRelations) {
    auto D = build_cartan('B', 3);
    KlrEngine E(D, RootVector(std::vector<int>{2, 1, 0}));
    auto x = E.mul_phi(1, E.mul_phi(1, E.e(Word{0, 0, 1})));
    EXPECT_TRUE(x.is_zero());
    // phi_1 y_2 e(i) = (y_1 phi_1 + 1) e(i) for equal letters
    auto lhs = E.mul_phi(1, E.mul_y(2, E.e(Word{0, 0, 1})));
    auto rhs = E.mul_y(1, E.mul_phi(1, E.e(Word{0, 0, 1}))) + E.e(Word{0, 0, 1});
    EXPECT_EQ(lhs, rhs);
}

TEST(KlrCore, BraidRelationAndDefect) {
    for (auto [s, rk] : kTypes) {
        auto D = build_cartan(s, rk);
        for (int a = 0; a < std::min(rk, 3); ++a)
            for (int b = 0; b < std::min(rk, 3); ++b)
                for (int c = 0; c < std::min(rk, 3); ++c) {
                    Word i{a, b, c};
                    KlrEngine E(D, content(D, i));
                    auto ei = E.e(i);
                    auto x = E.mul_phi(2, E.mul_phi(1, E.mul_phi(2, ei))) - E.mul_phi(1, E.mul_phi(2, E.mul_phi(1, ei)));
                    if (a != c) {
                        EXPECT_TRUE(x.is_zero()) << D.name() << " " << i.to_string();
                    } else {
                        auto want = E.mul_poly(braid_defect(q_ij(D, a, b), 1, 3), ei);
                        EXPECT_EQ(x, want) << D.name() << " " << i.to_string();
                    }
                }
    }
}

TEST(KlrCore, BraidDefectIsExactDivision) {
    // (Q(y3,y2) - Q(y1,y2)) equals (y3 - y1) times the defect polynomial
    for (auto [s, rk] : kTypes) {
        auto D = build_cartan(s, rk);
        for (int a = 0; a < rk; ++a)
            for (int b = 0; b < rk; ++b) {
                auto Q = q_ij(D, a, b);
                YPoly lhs;
                for (const auto& [e, c] : Q.t) {
                    lhs[{0, e.second, e.first}] += Rational(static_cast<long>(c));
                    lhs[{e.first, e.second, 0}] -= Rational(static_cast<long>(c));
                }
                YPoly rhs;
                for (const auto& [m, c] : braid_defect(Q, 1, 3)) {
                    auto up = m, down = m;
                    up[2]++;
                    down[0]++;
                    rhs[up] += c;
                    rhs[down] -= c;
                }
                for (auto* P : {&lhs, &rhs})
                    for (auto it = P->begin(); it != P->end();) it = it->second == 0 ? P->erase(it) : std::next(it);
                EXPECT_EQ(lhs, rhs) << D.name() << " " << a << b;
            }
    }
}

TEST(KlrCore, AssociativityOnRandomTriples) {
    std::mt19937 rng(42);
    int n = 0;
    for (int t = 0; t < 200; ++t) {
        auto [s, rk] = kTypes[static_cast<std::size_t>(t) % kTypes.size()];
        auto D = build_cartan(s, rk);
        int d = 2 + static_cast<int>(rng() % 3);
        KlrEngine E(D, random_weight(rng, D, d));
        auto x = random_element(E, rng, 3), y = random_element(E, rng, 3), z = random_element(E, rng, 3);
        EXPECT_EQ(E.mul(E.mul(x, y), z), E.mul(x, E.mul(y, z))) << D.name();
        ++n;
    }
    EXPECT_EQ(n, 200);
}

TEST(KlrCore, PsiAndTau) {
    std::mt19937 rng(5);
    for (auto [s, rk] : kTypes) {
        auto D = build_cartan(s, rk);
        for (int t = 0; t < 8; ++t) {
            int d = 2 + static_cast<int>(rng() % 3);
            KlrEngine E(D, random_weight(rng, D, d));
            auto x = random_element(E, rng, 3), y = random_element(E, rng, 3);
            EXPECT_EQ(E.psi(E.mul(x, y)), E.mul(E.psi(y), E.psi(x)));
            EXPECT_EQ(E.psi(E.psi(x)), x);
            EXPECT_EQ(E.tau(E.tau(x)), x);
            EXPECT_EQ(E.tau(E.mul(x, y)), E.mul(E.tau(x), E.tau(y)));
            for (const auto& i : E.idempotents()) EXPECT_EQ(E.psi(E.e(i)), E.e(i));
        }
    }
    auto D = build_cartan('A', 2);
    KlrEngine E(D, RootVector(std::vector<int>{1, 1}));
    EXPECT_EQ(E.psi(E.mul(E.phi(1), E.y(2))), E.mul(E.y(2), E.phi(1)));
}

TEST(KlrCore, NormalFormIsStable) {
    std::mt19937 rng(3);
    auto D = build_cartan('C', 3);
    for (int t = 0; t < 30; ++t) {
        KlrEngine E(D, random_weight(rng, D, 4));
        auto x = random_element(E, rng, 5);
        for (const auto& [k, c] : x.terms()) {
            auto mo = E.decode(k);
            auto b = E.basis(mo.w, mo.m, mo.i);
            // rebuilding the monomial from generators reproduces exactly the stored basis element
            auto W = E.canonical_word(mo.w);
            KlrElement r = E.e(mo.i);
            for (int p = 0; p < E.d(); ++p)
                for (int q = 0; q < mo.m[static_cast<std::size_t>(p)]; ++q) r = E.mul_y(p + 1, r);
            for (auto it = W.rbegin(); it != W.rend(); ++it) r = E.mul_phi(*it, r);
            EXPECT_EQ(r, b);
            EXPECT_EQ(E.mul(E.one(), b), b);
        }
    }
}

TEST(KlrCore, LowDegreeMonomialsIndependent) {
    // normal-form monomials with y-degree <= 2 at height 3 act independently on the faithful representation
    for (auto [s, rk] : std::vector<std::pair<char, int>>{{'B', 2}, {'A', 2}}) {
        auto D = build_cartan(s, rk);
        KlrEngine E(D, RootVector(std::vector<int>{2, 1}));
        oracle::Rep R{&D, 3};
        std::vector<Perm> perms;
        Perm p = identity_perm(3);
        do perms.push_back(p);
        while (std::next_permutation(p.begin(), p.end()));
        std::vector<std::vector<int>> ms;
        for (int a = 0; a <= 2; ++a)
            for (int b = 0; a + b <= 2; ++b)
                for (int c = 0; a + b + c <= 2; ++c) ms.push_back({a, b, c});
        // probe vectors: monomials of degree <= 3 at every weight
        std::vector<oracle::Vec> probes;
        for (const auto& i : E.idempotents())
            for (int a = 0; a <= 3; ++a)
                for (int b = 0; a + b <= 3; ++b)
                    for (int c = 0; a + b + c <= 3; ++c) {
                        oracle::Vec v;
                        v[i.s][{a, b, c}] = 1;
                        probes.push_back(v);
                    }
        using Row = std::map<std::tuple<std::size_t, std::string, std::vector<int>>, Rational>;
        std::vector<Row> rows;
        for (const auto& i : E.idempotents())
            for (const auto& w : perms)
                for (const auto& m : ms) {
                    auto x = E.basis(w, m, i);
                    Row row;
                    for (std::size_t k = 0; k < probes.size(); ++k)
                        for (const auto& [j, poly] : R.act(E, x, probes[k]))
                            for (const auto& [mono, c] : poly) row[{k, j, mono}] = c;
                    rows.push_back(row);
                }
        // reduced row echelon form; every basis row owns a pivot absent from the others
        using Key = Row::key_type;
        auto eliminate = [](Row& target, const Key& piv, const Row& src) {
            auto it = target.find(piv);
            if (it == target.end()) return;
            Rational f = it->second / src.at(piv);
            for (const auto& [k, c] : src) {
                auto& x = target[k];
                x -= f * c;
                if (x == 0) target.erase(k);
            }
        };
        std::vector<std::pair<Key, Row>> basis;
        for (Row r : rows) {
            for (const auto& [piv, b] : basis) eliminate(r, piv, b);
            if (r.empty()) continue;
            Key piv = r.begin()->first;
            for (auto& [p2, b] : basis) eliminate(b, piv, r);
            basis.emplace_back(piv, r);
        }
        EXPECT_EQ(basis.size(), rows.size()) << D.name();
    }
}

TEST(KlrCore, MinimalCosetRepresentatives) {
    auto r11 = minimal_coset_reps(1, 1);
    ASSERT_EQ(r11.size(), 2u);
    EXPECT_TRUE(is_identity(r11[0]));
    EXPECT_EQ(perm_length(r11[1]), 1);
    auto r21 = minimal_coset_reps(2, 1);
    ASSERT_EQ(r21.size(), 3u);
    EXPECT_EQ(perm_length(r21[0]), 0);
    EXPECT_EQ(perm_length(r21[1]), 1);
    EXPECT_EQ(perm_length(r21[2]), 2);
    auto binom = [](int n, int k) {
        long r = 1;
        for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
        return r;
    };
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; ++b) {
            auto reps = minimal_coset_reps(a, b);
            EXPECT_EQ(static_cast<long>(reps.size()), binom(a + b, a));
            for (std::size_t k = 0; k < reps.size(); ++k) {
                EXPECT_TRUE(is_min_coset_rep(reps[k], a));
                if (k) EXPECT_LE(perm_length(reps[k - 1]), perm_length(reps[k]));
            }
        }
}

TEST(KlrCore, RelationSuiteOnSmallModules) {
    auto D = build_cartan('B', 2);
    ModuleAction M;
    M.datum = &D;
    M.nu = D.simple(1);
    M.d = 1;
    M.weight = {Word{1}};
    M.degree = {0};
    M.y = {SparseMat(1)};
    auto rep = relation_suite(M);
    EXPECT_TRUE(rep.ok()) << rep.summary();
    EXPECT_GT(rep.instances(), 0);

    // the doubled-letter module on [0,0,1] and a single-sign mutation of it
    ModuleAction N;
    N.datum = &D;
    N.nu = RootVector(std::vector<int>{2, 1});
    N.d = 3;
    N.weight = {Word{0, 0, 1}, Word{0, 0, 1}};
    N.degree = {1, -1};
    N.y = {SparseMat(2), SparseMat(2), SparseMat(2)};
    N.phi = {SparseMat(2), SparseMat(2)};
    N.phi[0].set(1, 0, 1);
    N.y[0].set(0, 1, -1);
    N.y[1].set(0, 1, 1);
    auto good = relation_suite(N, 2);
    EXPECT_TRUE(good.ok()) << good.summary();
    ModuleAction bad = N;
    bad.y[0].set(0, 1, 1);
    auto rb = relation_suite(bad);
    ASSERT_FALSE(rb.ok());
    EXPECT_FALSE(rb.failures.front().relation.empty());
    EXPECT_EQ(rb.failures.front().idem, (Word{0, 0, 1}));
    EXPECT_TRUE(rb.to_json()["failures"].size() >= 1);
    ModuleAction wrong = N;
    wrong.y.pop_back();
    EXPECT_THROW(relation_suite(wrong), std::invalid_argument);
}
