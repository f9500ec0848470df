#pragma once

#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace argsem {

struct Edge {
    std::string source;
    std::string relation;
    std::string target;

    auto operator<=>(const Edge&) const = default;
};

struct SemanticNetwork {
    std::set<std::string> nodes;
    std::vector<Edge> edges;
};

struct AssociationTable {
    std::vector<std::string> cues;  // first-appearance order
    std::unordered_map<std::string, std::vector<std::string>> entries;
};

enum class CorpusSource { Network, Association };

struct ProjectedCorpus {
    std::vector<std::vector<std::string>> lines;
    CorpusSource source = CorpusSource::Network;
};

enum class NetworkFormat { WordnetDb, EdgeTsv };

NetworkFormat parse_network_format(const std::string& s);

// wordnet_db: path is the WordNet 3.0 dict directory (data.noun etc.);
// edge_tsv: rows `lemma<TAB>relation<TAB>lemma`
SemanticNetwork parse_semantic_network(const std::string& path, NetworkFormat format);

// CSV with a header containing cue,R1,R2,R3 (extra columns ignored)
AssociationTable parse_association_table(const std::string& path);

// one line per node: lemma followed by neighbors over both edge directions,
// ordered by (relation label, lemma)
ProjectedCorpus project_network(const SemanticNetwork& n);

// one line per cue: cue followed by its responses in file order
ProjectedCorpus project_associations(const AssociationTable& t);

void write_corpus(const ProjectedCorpus& c, const std::string& path);

void save_edge_tsv(const SemanticNetwork& n, const std::string& path);

// internal to the wordnet_db parser, exposed for parse_semantic_network
SemanticNetwork parse_wordnet_dir(const std::string& dir);

}  // namespace argsem
