#pragma once

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace klr {

/// Element of the positive root lattice, coefficients indexed by node label.
struct RootVector {
    std::vector<int> c;

    RootVector() = default;
    explicit RootVector(std::size_t rank) : c(rank, 0) {}
    explicit RootVector(std::vector<int> v) : c(std::move(v)) {}

    static RootVector simple(std::size_t rank, int i) {
        RootVector r(rank);
        r.c.at(static_cast<std::size_t>(i)) = 1;
        return r;
    }

    std::size_t rank() const { return c.size(); }
    int operator[](std::size_t i) const { return c[i]; }
    int height() const {
        int h = 0;
        for (int x : c) h += x;
        return h;
    }
    bool is_zero() const { return height() == 0 && std::all_of(c.begin(), c.end(), [](int x) { return x == 0; }); }
    bool nonnegative() const { return std::all_of(c.begin(), c.end(), [](int x) { return x >= 0; }); }

    RootVector& operator+=(const RootVector& o) {
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
        return *this;
    }
    RootVector& operator-=(const RootVector& o) {
        for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
        return *this;
    }
    friend RootVector operator+(RootVector a, const RootVector& b) { return a += b; }
    friend RootVector operator-(RootVector a, const RootVector& b) { return a -= b; }
    friend bool operator==(const RootVector& a, const RootVector& b) { return a.c == b.c; }
    friend bool operator!=(const RootVector& a, const RootVector& b) { return a.c != b.c; }
    friend bool operator<(const RootVector& a, const RootVector& b) {
        int ha = a.height(), hb = b.height();
        if (ha != hb) return ha < hb;
        return a.c < b.c;
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] == 0) continue;
            if (!s.empty()) s += "+";
            if (c[i] != 1) s += std::to_string(c[i]);
            s += "a" + std::to_string(i);
        }
        return s.empty() ? "0" : s;
    }
};

struct RootVectorHash {
    std::size_t operator()(const RootVector& r) const {
        std::size_t h = 1469598103934665603ull;
        for (int x : r.c) h = (h ^ static_cast<std::size_t>(x + 7)) * 1099511628211ull;
        return h;
    }
};

/// Finite-type root datum with fixed node labels 0..rank-1.
struct CartanDatum {
    char series = 'A';
    int rank = 0;
    std::vector<int> labels;
    std::vector<std::vector<int>> pairing;  // (alpha_i, alpha_j)
    std::vector<std::vector<int>> cartan;   // a_ij = 2 (alpha_i, alpha_j) / (alpha_i, alpha_i)
    std::vector<int> d;                     // (alpha_i, alpha_i) / 2
    std::set<std::pair<int, int>> orientation;
    std::vector<RootVector> positive_roots;

    std::string name() const { return std::string(1, series) + std::to_string(rank); }
    std::size_t size() const { return static_cast<std::size_t>(rank); }

    int form(int i, int j) const { return pairing[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }

    int form(const RootVector& a, const RootVector& b) const {
        int s = 0;
        for (std::size_t i = 0; i < a.c.size(); ++i) {
            if (a.c[i] == 0) continue;
            for (std::size_t j = 0; j < b.c.size(); ++j)
                if (b.c[j] != 0) s += a.c[i] * b.c[j] * pairing[i][j];
        }
        return s;
    }

    int form_simple(const RootVector& a, int j) const {
        int s = 0;
        for (std::size_t i = 0; i < a.c.size(); ++i) s += a.c[i] * pairing[i][static_cast<std::size_t>(j)];
        return s;
    }

    bool arrow(int i, int j) const { return orientation.count({i, j}) > 0; }
    bool adjacent(int i, int j) const { return i != j && form(i, j) != 0; }

    bool is_positive_root(const RootVector& b) const {
        return std::find(positive_roots.begin(), positive_roots.end(), b) != positive_roots.end();
    }

    RootVector zero() const { return RootVector(size()); }
    RootVector simple(int i) const { return RootVector::simple(size(), i); }

    /// N(nu) = ((nu,nu) - sum_i c_i (alpha_i, alpha_i)) / 2
    int N(const RootVector& nu) const {
        int s = form(nu, nu);
        for (std::size_t i = 0; i < nu.c.size(); ++i) s -= nu.c[i] * pairing[i][i];
        return s / 2;
    }

    nlohmann::json to_json() const;
    std::string serialize() const { return to_json().dump(); }
};

namespace detail {

inline void finish_datum(CartanDatum& D) {
    std::size_t r = D.size();
    D.labels.resize(r);
    for (std::size_t i = 0; i < r; ++i) D.labels[i] = static_cast<int>(i);
    D.cartan.assign(r, std::vector<int>(r, 0));
    D.d.assign(r, 0);
    for (std::size_t i = 0; i < r; ++i) {
        if (D.pairing[i][i] % 2 != 0) throw std::logic_error("odd diagonal pairing");
        D.d[i] = D.pairing[i][i] / 2;
        for (std::size_t j = 0; j < r; ++j) {
            if ((2 * D.pairing[i][j]) % D.pairing[i][i] != 0) throw std::logic_error("non-integral Cartan entry");
            D.cartan[i][j] = 2 * D.pairing[i][j] / D.pairing[i][i];
        }
    }
}

inline std::vector<RootVector> close_roots(const CartanDatum& D) {
    std::size_t r = D.size();
    std::vector<RootVector> roots;
    std::set<std::vector<int>> seen;
    std::vector<RootVector> layer;
    for (std::size_t i = 0; i < r; ++i) {
        layer.push_back(RootVector::simple(r, static_cast<int>(i)));
        seen.insert(layer.back().c);
    }
    while (!layer.empty()) {
        std::vector<RootVector> next;
        for (const auto& b : layer) {
            roots.push_back(b);
            for (std::size_t i = 0; i < r; ++i) {
                // alpha_i string through b: b - p alpha_i, ..., b + q alpha_i with p - q = <b, alpha_i^vee>
                int p = 0;
                while (true) {
                    RootVector t = b;
                    t.c[i] -= p + 1;
                    if (!t.nonnegative() || t.is_zero() || !seen.count(t.c)) break;
                    ++p;
                }
                int pair = 2 * D.form_simple(b, static_cast<int>(i)) / D.pairing[i][i];
                int q = p - pair;
                if (q > 0) {
                    RootVector t = b;
                    t.c[i] += 1;
                    if (seen.insert(t.c).second) next.push_back(t);
                }
            }
        }
        std::sort(next.begin(), next.end());
        layer = std::move(next);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

inline std::size_t expected_root_count(char s, int r) {
    switch (s) {
        case 'A': return static_cast<std::size_t>(r * (r + 1) / 2);
        case 'B':
        case 'C': return static_cast<std::size_t>(r * r);
        case 'D': return static_cast<std::size_t>(r * (r - 1));
        case 'E': return r == 6 ? 36 : r == 7 ? 63 : 120;
        case 'F': return 24;
        case 'G': return 6;
        default: return 0;
    }
}

}  // namespace detail

/// Builds the root datum with the default orientation i -> j for every edge with i < j.
inline CartanDatum build_cartan(char series, int rank) {
    bool ok = (series == 'A' && rank >= 1) || ((series == 'B' || series == 'C') && rank >= 2) ||
              (series == 'D' && rank >= 4) || (series == 'E' && rank >= 6 && rank <= 8) ||
              (series == 'F' && rank == 4) || (series == 'G' && rank == 2);
    if (!ok) throw std::invalid_argument(std::string("invalid Cartan type ") + series + std::to_string(rank));
    CartanDatum D;
    D.series = series;
    D.rank = rank;
    std::size_t r = static_cast<std::size_t>(rank);
    D.pairing.assign(r, std::vector<int>(r, 0));
    auto edge = [&](int i, int j, int v) {
        D.pairing[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
        D.pairing[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
    };
    auto diag = [&](int i, int v) { D.pairing[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = v; };
    switch (series) {
        case 'A':
            for (int i = 0; i < rank; ++i) diag(i, 2);
            for (int i = 0; i + 1 < rank; ++i) edge(i, i + 1, -1);
            break;
        case 'B':  // node 0 short
            diag(0, 2);
            for (int i = 1; i < rank; ++i) diag(i, 4);
            for (int i = 0; i + 1 < rank; ++i) edge(i, i + 1, -2);
            break;
        case 'C':  // node 0 long
            diag(0, 4);
            for (int i = 1; i < rank; ++i) diag(i, 2);
            edge(0, 1, -2);
            for (int i = 1; i + 1 < rank; ++i) edge(i, i + 1, -1);
            break;
        case 'D':  // 0 and 1 both attached to 2
            for (int i = 0; i < rank; ++i) diag(i, 2);
            edge(0, 2, -1);
            edge(1, 2, -1);
            for (int i = 2; i + 1 < rank; ++i) edge(i, i + 1, -1);
            break;
        case 'E':  // chain 0-2-3-4-...-(rank-1), node 1 attached to the branch node 3
            for (int i = 0; i < rank; ++i) diag(i, 2);
            edge(0, 2, -1);
            edge(1, 3, -1);
            edge(2, 3, -1);
            for (int i = 3; i + 1 < rank; ++i) edge(i, i + 1, -1);
            break;
        case 'F':  // 0,1 short; 2,3 long
            diag(0, 2);
            diag(1, 2);
            diag(2, 4);
            diag(3, 4);
            edge(0, 1, -1);
            edge(1, 2, -2);
            edge(2, 3, -2);
            break;
        case 'G':  // 0 short, 1 long
            diag(0, 2);
            diag(1, 6);
            edge(0, 1, -3);
            break;
        default: break;
    }
    detail::finish_datum(D);
    for (int i = 0; i < rank; ++i)
        for (int j = i + 1; j < rank; ++j)
            if (D.form(i, j) != 0) D.orientation.insert({i, j});
    D.positive_roots = detail::close_roots(D);
    if (D.positive_roots.size() != detail::expected_root_count(series, rank))
        throw std::logic_error("positive root count mismatch for " + D.name());
    return D;
}

/// Same datum with a caller-chosen orientation (one arrow per edge).
inline CartanDatum with_orientation(CartanDatum D, const std::set<std::pair<int, int>>& arrows) {
    for (int i = 0; i < D.rank; ++i)
        for (int j = i + 1; j < D.rank; ++j) {
            bool e = D.form(i, j) != 0;
            int n = static_cast<int>(arrows.count({i, j}) + arrows.count({j, i}));
            if ((e && n != 1) || (!e && n != 0)) throw std::invalid_argument("orientation must pick one arrow per edge");
        }
    D.orientation = arrows;
    return D;
}

inline nlohmann::json CartanDatum::to_json() const {
    nlohmann::json j;
    j["series"] = std::string(1, series);
    j["rank"] = rank;
    j["pairing"] = pairing;
    nlohmann::json o = nlohmann::json::array();
    for (const auto& [a, b] : orientation) o.push_back({a, b});
    j["orientation"] = o;
    return j;
}

inline CartanDatum cartan_from_json(const nlohmann::json& j) {
    std::string s = j.at("series").get<std::string>();
    CartanDatum D = build_cartan(s.at(0), j.at("rank").get<int>());
    if (j.at("pairing").get<std::vector<std::vector<int>>>() != D.pairing)
        throw std::invalid_argument("serialized pairing does not match the series");
    std::set<std::pair<int, int>> arrows;
    for (const auto& e : j.at("orientation")) arrows.insert({e.at(0).get<int>(), e.at(1).get<int>()});
    return with_orientation(D, arrows);
}

}  // namespace klr
