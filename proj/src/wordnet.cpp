#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "argsem/lexical.hpp"
#include "argsem/util.hpp"

// Parser for the WordNet 3.0 database files (data.noun / data.verb /
// data.adj / data.adv). Each data line is
//   offset lex_filenum ss_type w_cnt word lex_id [word lex_id...] p_cnt ptr...
// with w_cnt in 2-digit hex and p_cnt in 3-digit decimal. A pointer is
//   symbol target_offset pos source/target
// where source/target packs two 2-digit hex word numbers; 0000 relates the
// whole synsets, in which case lemmas are cross-expanded.

namespace argsem {
namespace {

const char* relation_name(const std::string& sym) {
    static const std::unordered_map<std::string, const char*> names = {
        {"!", "antonym"},        {"@", "hypernym"},          {"@i", "instance_hypernym"},
        {"~", "hyponym"},        {"~i", "instance_hyponym"}, {"#m", "member_holonym"},
        {"#s", "substance_holonym"}, {"#p", "part_holonym"}, {"%m", "member_meronym"},
        {"%s", "substance_meronym"}, {"%p", "part_meronym"}, {"=", "attribute"},
        {"+", "derivation"},     {";c", "domain_topic"},     {"-c", "member_topic"},
        {";r", "domain_region"}, {"-r", "member_region"},    {";u", "domain_usage"},
        {"-u", "member_usage"},  {"*", "entailment"},        {">", "cause"},
        {"^", "also_see"},       {"$", "verb_group"},        {"&", "similar_to"},
        {"<", "participle"},     {"\\", "pertainym"},
    };
    auto it = names.find(sym);
    return it == names.end() ? nullptr : it->second;
}

// data.adj entries carry syntactic markers like "attributable(p)"
std::string clean_lemma(std::string w) {
    auto paren = w.find('(');
    if (paren != std::string::npos && w.back() == ')') w.erase(paren);
    return lowercase_ascii(w);
}

char normalize_pos(char p) { return p == 's' ? 'a' : p; }

struct Pointer {
    std::string relation;
    char target_pos;
    uint64_t target_offset;
    int source_word;  // 0 = whole synset
    int target_word;
};

struct Synset {
    std::vector<std::string> lemmas;
    std::vector<Pointer> pointers;
};

bool parse_hex(const std::string& s, uint64_t& out) {
    if (s.empty()) return false;
    out = 0;
    for (char c : s) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else return false;
        out = out * 16 + static_cast<uint64_t>(d);
    }
    return true;
}

bool parse_dec(const std::string& s, uint64_t& out) {
    if (s.empty()) return false;
    out = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
        out = out * 10 + static_cast<uint64_t>(c - '0');
    }
    return true;
}

uint64_t synset_key(char pos, uint64_t offset) {
    return (static_cast<uint64_t>(normalize_pos(pos)) << 56) | offset;
}

void parse_data_file(const std::string& path, std::unordered_map<uint64_t, Synset>& synsets) {
    std::string content = read_file(path);
    size_t pos = 0;
    while (pos < content.size()) {
        size_t line_start = pos;
        size_t eol = content.find('\n', pos);
        if (eol == std::string::npos) eol = content.size();
        std::string line = content.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty() || line[0] == ' ') continue;  // license header block

        auto bad = [&](const std::string& what, size_t field_hint) {
            throw std::runtime_error(path + ": byte offset " + std::to_string(line_start + field_hint) +
                                     ": " + what);
        };

        auto fields = split_ws(line);
        size_t f = 0;
        auto next_field = [&](const char* what) -> const std::string& {
            if (f >= fields.size()) bad(std::string("truncated record, missing ") + what, line.size());
            return fields[f++];
        };

        uint64_t offset;
        if (!parse_dec(next_field("synset offset"), offset)) bad("bad synset offset", 0);
        next_field("lex_filenum");
        const std::string& ss_type = next_field("ss_type");
        if (ss_type.size() != 1) bad("bad ss_type", 0);
        char spos = normalize_pos(ss_type[0]);

        uint64_t w_cnt;
        if (!parse_hex(next_field("word count"), w_cnt) || w_cnt == 0) bad("bad word count", 0);
        Synset syn;
        for (uint64_t w = 0; w < w_cnt; ++w) {
            syn.lemmas.push_back(clean_lemma(next_field("word")));
            next_field("lex_id");
        }

        uint64_t p_cnt;
        if (!parse_dec(next_field("pointer count"), p_cnt)) bad("bad pointer count", 0);
        for (uint64_t p = 0; p < p_cnt; ++p) {
            size_t ptr_hint = f < fields.size() ? line.find(fields[f]) : line.size();
            const std::string& sym = next_field("pointer symbol");
            uint64_t toff;
            if (!parse_dec(next_field("pointer target offset"), toff))
                bad("malformed pointer record (target offset)", ptr_hint);
            const std::string& tpos = next_field("pointer pos");
            if (tpos.size() != 1 || std::string("nvasr").find(tpos[0]) == std::string::npos)
                bad("malformed pointer record (pos)", ptr_hint);
            const std::string& st = next_field("pointer source/target");
            uint64_t st_val;
            if (st.size() != 4 || !parse_hex(st, st_val))
                bad("malformed pointer record (source/target)", ptr_hint);
            const char* rel = relation_name(sym);
            Pointer ptr;
            ptr.relation = rel ? rel : sym;
            ptr.target_pos = tpos[0];
            ptr.target_offset = toff;
            ptr.source_word = static_cast<int>(st_val >> 8);
            ptr.target_word = static_cast<int>(st_val & 0xff);
            syn.pointers.push_back(std::move(ptr));
        }
        // frame section (verbs) and gloss are not needed for projection

        synsets.emplace(synset_key(spos, offset), std::move(syn));
    }
}

}  // namespace

SemanticNetwork parse_wordnet_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    fs::path base(dir);
    if (fs::exists(base / "dict" / "data.noun")) base /= "dict";

    const char* parts[] = {"noun", "verb", "adj", "adv"};
    std::unordered_map<uint64_t, Synset> synsets;
    for (const char* part : parts) {
        fs::path data = base / (std::string("data.") + part);
        if (!fs::exists(data))
            throw std::runtime_error("WordNet database file missing: " + data.string());
        parse_data_file(data.string(), synsets);
    }

    SemanticNetwork net;
    std::unordered_set<std::string> edge_keys;
    auto add_edge = [&](const std::string& src, const std::string& rel, const std::string& tgt) {
        if (src == tgt) return;
        std::string key = src;
        key.push_back('\x01');
        key += rel;
        key.push_back('\x01');
        key += tgt;
        if (edge_keys.insert(std::move(key)).second) net.edges.push_back({src, rel, tgt});
    };

    for (const auto& [key, syn] : synsets)
        for (const auto& lemma : syn.lemmas) net.nodes.insert(lemma);

    for (const auto& [key, syn] : synsets) {
        for (const auto& ptr : syn.pointers) {
            auto it = synsets.find(synset_key(ptr.target_pos, ptr.target_offset));
            if (it == synsets.end())
                throw std::runtime_error("dangling synset reference: " +
                                         std::to_string(ptr.target_offset) + std::string(1, ptr.target_pos));
            const Synset& target = it->second;
            if (ptr.source_word > 0 && ptr.target_word > 0) {
                if (static_cast<size_t>(ptr.source_word) > syn.lemmas.size() ||
                    static_cast<size_t>(ptr.target_word) > target.lemmas.size())
                    throw std::runtime_error("pointer word number out of range in synset " +
                                             std::to_string(ptr.target_offset));
                add_edge(syn.lemmas[ptr.source_word - 1], ptr.relation,
                         target.lemmas[ptr.target_word - 1]);
            } else {
                for (const auto& src : syn.lemmas)
                    for (const auto& tgt : target.lemmas) add_edge(src, ptr.relation, tgt);
            }
        }
    }
    return net;
}

}  // namespace argsem
