#include "argsem/lexical.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "argsem/util.hpp"

namespace argsem {

NetworkFormat parse_network_format(const std::string& s) {
    if (s == "wordnet_db") return NetworkFormat::WordnetDb;
    if (s == "edge_tsv") return NetworkFormat::EdgeTsv;
    throw std::runtime_error("unknown network format '" + s + "'");
}

namespace {

SemanticNetwork parse_edge_tsv(const std::string& path) {
    SemanticNetwork n;
    auto lines = read_lines(path);
    size_t row = 0;
    std::set<Edge> seen;
    for (const auto& line : lines) {
        ++row;
        if (strip(line).empty()) continue;
        auto fields = split_on(line, '\t');
        if (fields.size() != 3)
            throw std::runtime_error(path + ": line " + std::to_string(row) +
                                     ": expected 3 tab-separated fields, got " + std::to_string(fields.size()));
        Edge e{fields[0], fields[1], fields[2]};
        if (e.source.empty() || e.relation.empty() || e.target.empty())
            throw std::runtime_error(path + ": line " + std::to_string(row) + ": empty field");
        n.nodes.insert(e.source);
        n.nodes.insert(e.target);
        if (seen.insert(e).second) n.edges.push_back(e);
    }
    return n;
}

// minimal RFC4180-style row reader: quoted fields may contain commas and
// doubled quotes; embedded newlines are not supported
std::vector<std::string> parse_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

// responses become single corpus tokens: lowercased, inner whitespace
// joined with underscores
std::string normalize_unit(const std::string& raw) {
    auto parts = split_ws(lowercase_ascii(strip(raw)));
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out.push_back('_');
        out += parts[i];
    }
    return out;
}

}  // namespace

SemanticNetwork parse_semantic_network(const std::string& path, NetworkFormat format) {
    if (!file_exists(path)) throw std::runtime_error("lexical resource not found: " + path);
    if (format == NetworkFormat::EdgeTsv) return parse_edge_tsv(path);
    return parse_wordnet_dir(path);
}

AssociationTable parse_association_table(const std::string& path) {
    if (!file_exists(path)) throw std::runtime_error("association file not found: " + path);
    auto lines = read_lines(path);
    if (lines.empty()) throw std::runtime_error("empty association file: " + path);

    auto header = parse_csv_row(lines[0]);
    int cue_col = -1, r_col[3] = {-1, -1, -1};
    for (size_t i = 0; i < header.size(); ++i) {
        std::string h = strip(header[i]);
        if (h == "cue") cue_col = static_cast<int>(i);
        if (h == "R1") r_col[0] = static_cast<int>(i);
        if (h == "R2") r_col[1] = static_cast<int>(i);
        if (h == "R3") r_col[2] = static_cast<int>(i);
    }
    if (cue_col < 0) throw std::runtime_error(path + ": header has no 'cue' column");
    if (r_col[0] < 0 && r_col[1] < 0 && r_col[2] < 0)
        throw std::runtime_error(path + ": header has none of R1/R2/R3 columns");

    AssociationTable t;
    bool any_row = false;
    for (size_t row = 1; row < lines.size(); ++row) {
        if (strip(lines[row]).empty()) continue;
        auto fields = parse_csv_row(lines[row]);
        if (static_cast<size_t>(cue_col) >= fields.size())
            throw std::runtime_error(path + ": line " + std::to_string(row + 1) + ": missing cue field");
        std::string cue = normalize_unit(fields[cue_col]);
        if (cue.empty())
            throw std::runtime_error(path + ": line " + std::to_string(row + 1) + ": empty cue");
        any_row = true;
        auto it = t.entries.find(cue);
        if (it == t.entries.end()) {
            t.cues.push_back(cue);
            it = t.entries.emplace(cue, std::vector<std::string>{}).first;
        }
        for (int k = 0; k < 3; ++k) {
            if (r_col[k] < 0 || static_cast<size_t>(r_col[k]) >= fields.size()) continue;
            std::string raw = strip(fields[r_col[k]]);
            if (raw.empty() || raw == "NA") continue;  // blank / missing response
            std::string resp = normalize_unit(raw);
            if (!resp.empty()) it->second.push_back(resp);
        }
    }
    if (!any_row) throw std::runtime_error(path + ": no data rows");
    return t;
}

ProjectedCorpus project_network(const SemanticNetwork& n) {
    if (n.nodes.empty()) throw std::runtime_error("project_network: empty network");

    // undirected neighborhood: (relation, lemma) pairs from both directions
    std::unordered_map<std::string, std::set<std::pair<std::string, std::string>>> neighbors;
    for (const auto& e : n.edges) {
        neighbors[e.source].insert({e.relation, e.target});
        neighbors[e.target].insert({e.relation, e.source});
    }

    ProjectedCorpus c;
    c.source = CorpusSource::Network;
    c.lines.reserve(n.nodes.size());
    for (const auto& node : n.nodes) {
        std::vector<std::string> line{node};
        auto it = neighbors.find(node);
        if (it != neighbors.end())
            for (const auto& [rel, lemma] : it->second) line.push_back(lemma);
        c.lines.push_back(std::move(line));
    }
    return c;
}

ProjectedCorpus project_associations(const AssociationTable& t) {
    if (t.cues.empty()) throw std::runtime_error("project_associations: empty table");
    ProjectedCorpus c;
    c.source = CorpusSource::Association;
    c.lines.reserve(t.cues.size());
    for (const auto& cue : t.cues) {
        std::vector<std::string> line{cue};
        const auto& responses = t.entries.at(cue);
        line.insert(line.end(), responses.begin(), responses.end());
        c.lines.push_back(std::move(line));
    }
    return c;
}

void write_corpus(const ProjectedCorpus& c, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write corpus: " + path);
    for (const auto& line : c.lines) {
        for (size_t i = 0; i < line.size(); ++i) {
            if (i) out << ' ';
            out << line[i];
        }
        out << '\n';
    }
}

void save_edge_tsv(const SemanticNetwork& n, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write edges: " + path);
    for (const auto& e : n.edges) out << e.source << '\t' << e.relation << '\t' << e.target << '\n';
}

}  // namespace argsem
