#include "klr/cache.hpp"
#include "klr/golden.hpp"
#include "klr/klr_modules.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace klr;

namespace {

struct Common {
    std::string type = "A";
    int rank = 2;
    bool opposite = false;
    bool structured = false;
    int max_height = 0;
    int jobs = 1;
    bool no_cache = false;
    std::string cache_dir;
    std::string format = "text";
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void add_datum_opts(CLI::App* c, Common& o) {
    c->add_option("--type", o.type, "Cartan type letter (A, B, C, D, E, F, G)")->required();
    c->add_option("--rank", o.rank, "rank")->required();
}

CartanDatum make_datum(const Common& o) {
    if (o.type.size() != 1) throw UsageError("--type takes a single letter");
    try {
        return build_cartan(static_cast<char>(std::toupper(static_cast<unsigned char>(o.type[0]))), o.rank);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

Word user_word(const CartanDatum& D, const std::string& s) {
    try {
        Word w = parse_word(s);
        check_letters(D, w);
        return w;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

LyndonTable load_table(const CartanDatum& D, const Common& o) {
    TableCache cache(o.cache_dir, !o.no_cache);
    return cache.get(D, o.opposite ? Order::Left : Order::Right);
}

void emit(const Common& o, const nlohmann::json& rec, const std::string& text) {
    if (o.structured) std::cout << rec.dump() << "\n";
    else std::cout << text << "\n";
}

std::string word_list(const std::vector<Word>& ws) {
    std::string s;
    for (std::size_t k = 0; k < ws.size(); ++k) s += (k ? ", " : "") + ws[k].to_string();
    return s;
}

// ---------------------------------------------------------------------------

int cmd_good_lyndon(const Common& o, bool check) {
    CartanDatum D = make_datum(o);
    LyndonTable T = load_table(D, o);
    for (const auto& [h, ws] : T.by_height()) {
        nlohmann::json rec = {{"record", "height"}, {"type", D.name()}, {"height", h}, {"words", nlohmann::json::array()}};
        for (const auto& w : ws) rec["words"].push_back(w.compact());
        emit(o, rec, std::to_string(h) + "\t" + word_list(ws));
    }
    emit(o, {{"record", "summary"}, {"type", D.name()}, {"count", T.map.size()}}, "total " + std::to_string(T.map.size()));
    if (!check) return 0;
    auto res = golden::check_table(T);
    for (const auto& d : res.diffs)
        emit(o, {{"record", "diff"}, {"height", d.height}, {"word", d.word}, {"kind", d.kind}, {"note", d.note}},
             "diff\t" + d.kind + "\theight " + std::to_string(d.height) + "\t" + d.word + (d.note.empty() ? "" : "\t" + d.note));
    bool ok = res.ok();
    if (D.series == 'E' && D.rank == 8) {
        auto [hits, total] = golden::e8_featured_hits(T);
        ok = ok && hits == total;
        emit(o, {{"record", "featured"}, {"present", hits}, {"listed", total}},
             "featured words present verbatim: " + std::to_string(hits) + "/" + std::to_string(total));
    }
    emit(o, {{"record", "check"}, {"ok", ok}}, ok ? "check: PASS" : "check: FAIL");
    return ok ? 0 : 1;
}

int cmd_root_vector(const Common& o, const std::string& word) {
    CartanDatum D = make_datum(o);
    Bases B(D, load_table(D, o));
    if (o.max_height > 0) shuffle_height_cap() = o.max_height;
    std::vector<Word> ws;
    if (!word.empty()) {
        Word l = user_word(D, word);
        if (!B.table().contains(l)) throw UsageError("not a good Lyndon word: " + l.to_string());
        ws.push_back(l);
    } else {
        for (const auto& [h, v] : B.table().by_height())
            for (const auto& w : v) ws.push_back(w);
    }
    for (const auto& l : ws) {
        if (o.max_height > 0 && static_cast<int>(l.size()) > o.max_height) {
            emit(o, {{"record", "skipped"}, {"word", l.compact()}, {"reason", "max-height"}}, "b*" + l.to_string() + " skipped (max-height)");
            continue;
        }
        ShuffleElement b = B.dual_pbw_lyndon(l);
        emit(o, {{"record", "root_vector"}, {"word", l.compact()}, {"kappa", B.kappa_lyndon(l).to_string()}, {"terms", b.size()}, {"value", b.to_string(B.order())}},
             "b*" + l.to_string() + " = " + b.to_string(B.order()));
    }
    return 0;
}

int cmd_verify_cuspidal(const Common& o, const std::string& word, int char_height) {
    CartanDatum D = make_datum(o);
    ModuleFactory F(D, load_table(D, o));
    std::vector<Word> ws;
    if (!word.empty()) {
        Word l = user_word(D, word);
        if (!F.bases().table().contains(l)) throw UsageError("not a good Lyndon word: " + l.to_string());
        ws.push_back(l);
    } else {
        for (const auto& [h, v] : F.bases().table().by_height())
            for (const auto& w : v) ws.push_back(w);
    }
    int pass = 0, fail = 0, skipped = 0;
    for (const auto& l : ws) {
        if (o.max_height > 0 && static_cast<int>(l.size()) > o.max_height) {
            ++skipped;
            emit(o, {{"record", "skipped"}, {"word", l.compact()}, {"reason", "max-height"}}, l.to_string() + "\tskipped (max-height)");
            continue;
        }
        CuspidalReport r = F.verify(l, char_height, o.jobs);
        (r.ok() ? pass : fail)++;
        std::string text = l.to_string() + "\t" + (r.ok() ? "PASS" : "FAIL (" + r.failing_component() + ")") + "\tdim " +
                           std::to_string(r.dim) + "\t" + r.rel.summary();
        if (!r.ok() && !r.error.empty()) text += "\t" + r.error;
        if (!r.ok() && !r.rel.ok()) text += "\twitness " + r.rel.failures.front().to_json().dump();
        nlohmann::json rec = r.to_json();
        rec["record"] = "cuspidal";
        emit(o, rec, text);
    }
    emit(o, {{"record", "summary"}, {"type", D.name()}, {"pass", pass}, {"fail", fail}, {"skipped", skipped}},
         D.name() + ": " + std::to_string(pass) + " pass, " + std::to_string(fail) + " fail, " + std::to_string(skipped) + " skipped");
    return fail ? 1 : 0;
}

Word parse_good_word(const CartanDatum& D, const std::string& text, std::vector<Word>& factors) {
    std::stringstream ss(text);
    std::string part;
    Word g;
    while (std::getline(ss, part, '.')) {
        Word f = user_word(D, part);
        if (f.empty()) throw UsageError("empty factor in " + text);
        factors.push_back(f);
        g = g + f;
    }
    if (g.empty()) throw UsageError("empty good word");
    return g;
}

int cmd_standard(const Common& o, const std::string& text, bool build) {
    CartanDatum D = make_datum(o);
    ModuleFactory F(D, load_table(D, o));
    std::vector<Word> factors;
    Word g = parse_good_word(D, text, factors);
    if (!is_good(F.bases().table(), g)) throw UsageError("not a good word: " + g.to_string());
    auto canon = canonical_factorization(g, F.bases().order());
    if (factors.size() > 1 && canon != factors) throw UsageError("factors are not the canonical factorization of " + g.to_string());
    if (o.max_height > 0 && static_cast<int>(g.size()) > o.max_height) throw ResourceError("height exceeds --max-height");
    ShuffleElement E = F.bases().dual_pbw(g);
    LaurentPoly kappa = F.bases().kappa_g(g);
    nlohmann::json rec = {{"record", "standard"}, {"word", g.compact()}, {"c_shift", F.bases().c_shift(g)}, {"kappa", kappa.to_string()}, {"character", E.to_string(F.bases().order())}};
    std::string txt = "E*" + g.to_string() + " = " + E.to_string(F.bases().order()) + "\nkappa = " + kappa.to_string();
    int rc = 0;
    if (build) {
        GradedModule M = F.standard(g, o.max_height);
        RelationReport rel = relation_suite(M, o.jobs, 5);
        bool ch_ok = character(M) == E;
        LaurentPoly low;
        for (int v = 0; v < M.dim(); ++v)
            if (M.weight[static_cast<std::size_t>(v)] == g) low += LaurentPoly::q(M.degree[static_cast<std::size_t>(v)]);
        bool k_ok = low == kappa;
        rec["module"] = {{"dim", M.dim()}, {"relations", rel.ok()}, {"character_matches", ch_ok}, {"lowest_weight_dim", low.to_string()}, {"kappa_matches", k_ok}};
        txt += "\nmodule dim " + std::to_string(M.dim()) + ", relations " + rel.summary() + ", character " +
               (ch_ok ? "matches" : "DIFFERS") + ", lowest weight space " + low.to_string() + (k_ok ? "" : " (kappa DIFFERS)");
        rc = rel.ok() && ch_ok && k_ok ? 0 : 1;
    }
    emit(o, rec, txt);
    return rc;
}

int cmd_shuffle(const Common& o, const std::vector<std::string>& words) {
    CartanDatum D = make_datum(o);
    if (o.max_height > 0) shuffle_height_cap() = o.max_height;
    ShuffleElement acc(D, Word());
    for (const auto& s : words) acc = shuffle(acc, ShuffleElement(D, user_word(D, s)));
    emit(o, {{"record", "shuffle"}, {"value", acc.to_string()}}, acc.to_string());
    return 0;
}

int cmd_export(const Common& o, const std::string& word, const std::string& good, const std::string& out) {
    CartanDatum D = make_datum(o);
    ModuleFactory F(D, load_table(D, o));
    GradedModule M;
    if (!word.empty() == !good.empty()) throw UsageError("give exactly one of --word or --good-word");
    if (!word.empty()) {
        Word l = user_word(D, word);
        if (!F.bases().table().contains(l)) throw UsageError("not a good Lyndon word: " + l.to_string());
        M = F.cuspidal(l);
    } else {
        std::vector<Word> factors;
        Word g = parse_good_word(D, good, factors);
        if (!is_good(F.bases().table(), g)) throw UsageError("not a good word: " + g.to_string());
        M = F.standard(g, o.max_height);
    }
    gate(M, o.jobs);
    std::string text = module_to_string(M);
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        std::ofstream f(out);
        if (!f) throw UsageError("cannot write " + out);
        f << text;
        std::cerr << "wrote " << M.label << " (dim " << M.dim() << ") to " << out << "\n";
    }
    return 0;
}

int cmd_verify_module(const Common& o, const std::string& file) {
    std::ifstream in(file);
    if (!in) throw UsageError("cannot read " + file);
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw UsageError(std::string("malformed module file: ") + e.what());
    }
    const CartanDatum* dp = nullptr;
    std::vector<std::unique_ptr<CartanDatum>> owned;
    GradedModule M;
    try {
        M = module_from_json(j, dp, owned);
    } catch (const std::exception& e) {
        throw UsageError(std::string("malformed module file: ") + e.what());
    }
    RelationReport rel = relation_suite(M, o.jobs, 20);
    nlohmann::json rec = rel.to_json();
    rec["record"] = "module";
    rec["label"] = M.label;
    rec["dim"] = M.dim();
    rec["character"] = character(M).to_string();
    std::string txt = M.label + " dim " + std::to_string(M.dim()) + ": " + rel.summary();
    for (const auto& f : rel.failures) txt += "\n  witness " + f.to_json().dump();
    emit(o, rec, txt);
    return rel.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Good Lyndon words, root vectors and KLR modules"};
    app.require_subcommand(1);
    Common o;
    std::string format = "text";
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "structured"}));
    app.add_option("--max-height", o.max_height, "resource cap on word height (0 = none)");
    app.add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--no-cache", o.no_cache, "bypass the table cache");
    app.add_option("--cache-dir", o.cache_dir, "table cache directory (default $KLR_CACHE_DIR or ~/.cache/klr)");
    app.fallthrough();

    bool check = false;
    auto* gl = app.add_subcommand("good-lyndon", "table of good Lyndon words by height");
    add_datum_opts(gl, o);
    gl->add_flag("--opposite", o.opposite, "use the opposite letter order");
    gl->add_flag("--check-paper", check, "compare against the reference tables");

    std::string word;
    auto* rv = app.add_subcommand("root-vector", "dual PBW root vectors");
    add_datum_opts(rv, o);
    rv->add_option("--word", word, "good Lyndon word (default: all)");
    rv->add_flag("--opposite", o.opposite, "use the opposite letter order");

    int char_height = 12;
    auto* vc = app.add_subcommand("verify-cuspidal", "build and check cuspidal modules");
    add_datum_opts(vc, o);
    vc->add_option("--word", word, "good Lyndon word (default: all)");
    vc->add_option("--char-height", char_height, "above this height compare multiplicities instead of characters");
    vc->add_flag("--opposite", o.opposite, "use the opposite letter order");

    std::string good;
    bool build = false;
    auto* sc = app.add_subcommand("standard-character", "character of a standard module");
    add_datum_opts(sc, o);
    sc->add_option("--good-word", good, "good word, factors separated by dots")->required();
    sc->add_flag("--module", build, "also build the module by induction and compare");

    std::vector<std::string> words;
    auto* sh = app.add_subcommand("shuffle", "quantum shuffle product of words");
    add_datum_opts(sh, o);
    sh->add_option("words", words, "words to multiply")->required();

    std::string out;
    auto* ex = app.add_subcommand("export-module", "write a module file");
    add_datum_opts(ex, o);
    ex->add_option("--word", word, "good Lyndon word (cuspidal module)");
    ex->add_option("--good-word", good, "good word (standard module)");
    ex->add_option("--out", out, "output path (default stdout)");

    std::string file;
    auto* vm = app.add_subcommand("verify-module", "run the relation suite on a module file");
    vm->add_option("file", file, "module file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    o.structured = format == "structured";

    try {
        if (gl->parsed()) return cmd_good_lyndon(o, check);
        if (rv->parsed()) return cmd_root_vector(o, word);
        if (vc->parsed()) return cmd_verify_cuspidal(o, word, char_height);
        if (sc->parsed()) return cmd_standard(o, good, build);
        if (sh->parsed()) return cmd_shuffle(o, words);
        if (ex->parsed()) return cmd_export(o, word, good, out);
        if (vm->parsed()) return cmd_verify_module(o, file);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return 1;
    } catch (const ModuleError& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
