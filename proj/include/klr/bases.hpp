#pragma once

#include "lyndon.hpp"
#include "shuffle.hpp"

#include <mutex>
#include <optional>
#include <unordered_map>

namespace klr {

/// Lyndon basis, dual PBW basis and the normalizing scalars for one datum and word order.
class Bases {
public:
    Bases(const CartanDatum& D, Order ord = Order::Right) : D_(&D), T_(good_lyndon_table(D, ord)) {}
    Bases(const CartanDatum& D, LyndonTable T) : D_(&D), T_(std::move(T)) {}

    const CartanDatum& datum() const { return *D_; }
    const LyndonTable& table() const { return T_; }
    Order order() const { return T_.order; }

    ShuffleElement letter(int i) const { return ShuffleElement(*D_, Word::letter(i)); }

    /// Iterated q-bracketing along the standard factorization (free algebra element).
    ShuffleElement bracket(const Word& l) {
        if (!is_lyndon(l, order())) throw std::invalid_argument("bracket: not Lyndon: " + l.to_string());
        if (auto it = bracket_.find(l); it != bracket_.end()) return it->second;
        ShuffleElement out;
        if (l.size() == 1) out = letter(l[0]);
        else {
            auto [l1, l2] = std_factorization(l, order());
            out = qbracket(bracket(l1), bracket(l2));
        }
        bracket_.emplace(l, out);
        return out;
    }

    /// r_l: the bracket with concatenation replaced by the shuffle product.
    ShuffleElement r_lyndon(const Word& l) {
        if (!is_lyndon(l, order())) throw std::invalid_argument("r_lyndon: not Lyndon: " + l.to_string());
        if (auto it = r_.find(l); it != r_.end()) return it->second;
        ShuffleElement out;
        if (l.size() == 1) out = letter(l[0]);
        else {
            auto [l1, l2] = std_factorization(l, order());
            ShuffleElement a = r_lyndon(l1), b = r_lyndon(l2);
            int e = D_->form(content(*D_, l1), content(*D_, l2));
            out = shuffle(a, b) - LaurentPoly::q(e) * shuffle(b, a);
        }
        r_.emplace(l, out);
        return out;
    }

    ShuffleElement r_basis(const Word& g) {
        if (!is_good(T_, g)) throw std::invalid_argument("r_basis: not a good word: " + g.to_string());
        ShuffleElement out(*D_, Word());
        for (const auto& f : canonical_factorization(g, order())) out = shuffle(out, r_lyndon(f));
        return out;
    }

    RatFunc form_norm(const RootVector& beta) const {
        if (!D_->is_positive_root(beta)) throw std::invalid_argument("form_norm: not a positive root");
        LaurentPoly num(1);
        for (std::size_t i = 0; i < beta.c.size(); ++i)
            num *= (LaurentPoly(1) - LaurentPoly::q(D_->pairing[i][i])).pow(static_cast<unsigned>(beta.c[i]));
        return RatFunc(num, LaurentPoly(1) - LaurentPoly::q(D_->form(beta, beta)));
    }

    /// (-1)^{ht-1} rho_l / (q^{N(beta)} (E_l, E_l)), whose square root is kappa_l.
    LaurentPoly kappa_radicand(const Word& l) {
        RootVector beta = T_.root(l);
        LaurentPoly rho = r_lyndon(l).coefficient_of(l);
        if (rho.is_zero()) throw ArithmeticError("r_l has no term on l for " + l.to_string());
        RatFunc denom = RatFunc(LaurentPoly::q(D_->N(beta))) * form_norm(beta);
        RatFunc rad = RatFunc(rho) / denom;
        if (beta.height() % 2 == 0) rad = RatFunc(LaurentPoly(-1)) * rad;
        return rad.to_laurent();
    }

    LaurentPoly kappa_lyndon(const Word& l) {
        if (auto it = kappa_.find(l); it != kappa_.end()) return it->second;
        if (!T_.contains(l)) throw std::invalid_argument("kappa_lyndon: not a good Lyndon word: " + l.to_string());
        LaurentPoly k = laurent_sqrt(kappa_radicand(l));
        kappa_.emplace(l, k);
        return k;
    }

    /// E_l^* = kappa_l / rho_l * r_l, i.e. the multiple of r_l with coefficient kappa_l on l.
    ShuffleElement dual_pbw_lyndon(const Word& l) {
        if (auto it = dual_.find(l); it != dual_.end()) return it->second;
        if (!T_.contains(l)) throw std::invalid_argument("dual_pbw_lyndon: not a good Lyndon word: " + l.to_string());
        ShuffleElement r = r_lyndon(l);
        LaurentPoly rho = r.coefficient_of(l);
        LaurentPoly kappa = kappa_lyndon(l);
        ShuffleElement out(*D_);
        for (const auto& [w, c] : r.terms()) out.add(w, divide_exact(c * kappa, rho));
        dual_.emplace(l, out);
        return out;
    }

    int d_lyndon(const Word& l) const {
        RootVector beta = T_.root(l);
        return D_->form(beta, beta) / 2;
    }

    /// Canonical factorization grouped as (l_i, a_i) with l_1 > ... > l_k.
    std::vector<std::pair<Word, int>> grouped_factors(const Word& g) const {
        if (!is_good(T_, g)) throw std::invalid_argument("not a good word: " + g.to_string());
        std::vector<std::pair<Word, int>> out;
        for (const auto& f : canonical_factorization(g, order())) {
            if (!out.empty() && out.back().first == f) ++out.back().second;
            else out.emplace_back(f, 1);
        }
        return out;
    }

    int c_shift(const Word& g) const {
        int c = 0;
        for (const auto& [l, a] : grouped_factors(g)) c += a * (a - 1) / 2 * d_lyndon(l);
        return c;
    }

    LaurentPoly kappa_g(const Word& g) {
        LaurentPoly k(1);
        for (const auto& [l, a] : grouped_factors(g))
            k *= kappa_lyndon(l).pow(static_cast<unsigned>(a)) * q_factorial(a, d_lyndon(l));
        return k;
    }

    /// E_g^* = q^{c_g} (E_{l_k}^*)^{*a_k} * ... * (E_{l_1}^*)^{*a_1}, smallest factor first.
    ShuffleElement dual_pbw(const Word& g) {
        auto fs = grouped_factors(g);
        ShuffleElement out(*D_, Word());
        for (auto it = fs.rbegin(); it != fs.rend(); ++it)
            for (int k = 0; k < it->second; ++k) out = shuffle(out, dual_pbw_lyndon(it->first));
        return out * LaurentPoly::q(c_shift(g));
    }

    /// Triangular elimination of x against the E_g^* with q specialised to q0. A returned word
    /// is the minimal word of a nonzero residual that is not good, which proves x lies outside
    /// the shuffle subalgebra. nullopt means x(q0) lies in its specialisation.
    std::optional<Word> subalgebra_witness(const ShuffleElement& x, const Rational& q0 = 2) {
        using Vec = std::map<Word, Rational, WordLess>;
        auto spec = [&](const ShuffleElement& y) {
            Vec v{WordLess{order()}};
            for (const auto& [w, c] : y.terms())
                if (Rational r = c.at(q0); r != 0) v.emplace(w, r);
            return v;
        };
        Vec r = spec(x);
        // the leading word is the minimum, or under the opposite order the maximum
        auto lead = [&]() { return order() == Order::Right ? r.begin() : std::prev(r.end()); };
        while (!r.empty()) {
            Word g = lead()->first;
            if (!is_good(T_, g)) return g;
            Vec e = spec(dual_pbw(g));
            Rational f = lead()->second / e.at(g);
            for (const auto& [w, c] : e) {
                auto it = r.emplace(w, 0).first;
                it->second -= f * c;
                if (it->second == 0) r.erase(it);
            }
        }
        return std::nullopt;
    }

private:
    const CartanDatum* D_;
    LyndonTable T_;
    std::unordered_map<Word, ShuffleElement, WordHash> bracket_, r_, dual_;
    std::unordered_map<Word, LaurentPoly, WordHash> kappa_;
};

}  // namespace klr
