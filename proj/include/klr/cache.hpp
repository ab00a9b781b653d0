#pragma once

#include "lyndon.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace klr {

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t x) {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << x;
    return os.str();
}

inline nlohmann::json table_payload(const LyndonTable& T) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [b, w] : T.map) rows.push_back({{"root", b.c}, {"word", w.letters()}});
    return {{"datum", T.datum->name()}, {"order", T.order == Order::Right ? "right" : "left"}, {"entries", rows}};
}

inline LyndonTable table_from_payload(const CartanDatum& D, Order ord, const nlohmann::json& p) {
    LyndonTable T;
    T.datum = &D;
    T.order = ord;
    for (const auto& e : p.at("entries")) {
        RootVector b(e.at("root").get<std::vector<int>>());
        Word w = Word::from_vector(e.at("word").get<std::vector<int>>());
        if (b.rank() != D.size() || !D.is_positive_root(b) || content(D, w) != b)
            throw std::runtime_error("cached table entry inconsistent with datum");
        T.map[b] = w;
        T.inverse.emplace(w, b);
    }
    if (T.map.size() != D.positive_roots.size()) throw std::runtime_error("cached table has wrong size");
    T.sorted_roots = D.positive_roots;
    std::sort(T.sorted_roots.begin(), T.sorted_roots.end(),
              [&T](const RootVector& a, const RootVector& b) { return T.root_cmp(a, b) < 0; });
    return T;
}

/// On-disk cache of good Lyndon tables keyed by (series, rank, order), hash-stamped.
class TableCache {
public:
    /// Directory from the argument, else KLR_CACHE_DIR, else $HOME/.cache/klr.
    explicit TableCache(std::string dir = "", bool enabled = true) : enabled_(enabled) {
        if (dir.empty()) {
            if (const char* e = std::getenv("KLR_CACHE_DIR")) dir = e;
            else if (const char* h = std::getenv("HOME")) dir = std::string(h) + "/.cache/klr";
            else dir = ".klr-cache";
        }
        dir_ = dir;
    }

    const std::filesystem::path& dir() const { return dir_; }
    bool enabled() const { return enabled_; }
    int hits() const { return hits_; }

    std::filesystem::path path_for(const CartanDatum& D, Order ord) const {
        return dir_ / (D.name() + (ord == Order::Right ? "-right" : "-left") + ".json");
    }

    LyndonTable get(const CartanDatum& D, Order ord = Order::Right) {
        if (!enabled_) return good_lyndon_table(D, ord);
        auto p = path_for(D, ord);
        if (std::filesystem::exists(p)) {
            try {
                std::ifstream in(p);
                nlohmann::json j = nlohmann::json::parse(in);
                const auto& payload = j.at("payload");
                if (j.at("hash") == hex64(fnv1a(payload.dump())) && payload.at("datum") == D.name()) {
                    ++hits_;
                    return table_from_payload(D, ord, payload);
                }
            } catch (const std::exception&) {
                // unreadable or stale entry: recompute and overwrite
            }
        }
        LyndonTable T = good_lyndon_table(D, ord);
        store(T, p);
        return T;
    }

private:
    void store(const LyndonTable& T, const std::filesystem::path& p) const {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) return;  // cache is best effort
        nlohmann::json payload = table_payload(T);
        nlohmann::json j = {{"hash", hex64(fnv1a(payload.dump()))}, {"payload", payload}};
        auto tmp = p;
        tmp += ".tmp" + std::to_string(static_cast<unsigned long>(fnv1a(p.string() + std::to_string(std::rand()))));
        {
            std::ofstream out(tmp);
            if (!out) return;
            out << j.dump() << "\n";
        }
        std::filesystem::rename(tmp, p, ec);
        if (ec) std::filesystem::remove(tmp, ec);
    }

    std::filesystem::path dir_;
    bool enabled_;
    int hits_ = 0;
};

}  // namespace klr
