#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "argsem/lexical.hpp"
#include "argsem/util.hpp"

using namespace argsem;

namespace {

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p.string();
}

std::string corpus_text(const ProjectedCorpus& c) {
    std::string out;
    for (const auto& line : c.lines) {
        for (size_t i = 0; i < line.size(); ++i) {
            if (i) out += ' ';
            out += line[i];
        }
        out += '\n';
    }
    return out;
}

}  // namespace

TEST_CASE("edge tsv parses nodes and edges") {
    auto n = parse_semantic_network(fixture("toy_edges.tsv"), NetworkFormat::EdgeTsv);
    CHECK(n.nodes.size() == 3);
    CHECK(n.edges.size() == 2);
    CHECK(n.nodes.count("dog") == 1);
    CHECK(n.edges[0].relation == "hypernym");
}

TEST_CASE("edge tsv reports the offending line") {
    auto path = temp_file("argsem_bad_edges.tsv", "a\thypernym\tb\nc\tbroken\n");
    try {
        parse_semantic_network(path, NetworkFormat::EdgeTsv);
        FAIL("expected an error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("edge tsv round trips through serialization") {
    auto n = parse_semantic_network(fixture("toy_edges.tsv"), NetworkFormat::EdgeTsv);
    auto path = temp_file("argsem_roundtrip_edges.tsv", "");
    save_edge_tsv(n, path);
    auto again = parse_semantic_network(path, NetworkFormat::EdgeTsv);
    CHECK(again.nodes == n.nodes);
    CHECK(again.edges == n.edges);
}

TEST_CASE("wordnet db parser expands synset lemmas into edges") {
    auto n = parse_semantic_network(fixture("toy_wordnet"), NetworkFormat::WordnetDb);
    CHECK(n.nodes.size() == 9);
    CHECK(n.nodes.count("domestic_dog") == 1);  // multiword lemma keeps the underscore
    CHECK(n.nodes.count("fast") == 1);          // adjective marker "(p)" stripped

    auto has_edge = [&](const std::string& s, const std::string& r, const std::string& t) {
        for (const auto& e : n.edges)
            if (e.source == s && e.relation == r && e.target == t) return true;
        return false;
    };
    CHECK(n.edges.size() == 7);
    CHECK(has_edge("dog", "hypernym", "canine"));
    CHECK(has_edge("domestic_dog", "hypernym", "canine"));
    CHECK(has_edge("dog", "member_holonym", "pack"));
    CHECK(has_edge("domestic_dog", "member_holonym", "pack"));
    CHECK(has_edge("pack", "member_meronym", "dog"));      // word-level pointer: dog only
    CHECK_FALSE(has_edge("pack", "member_meronym", "domestic_dog"));
    CHECK(has_edge("run", "hypernym", "move"));
    CHECK(has_edge("fast", "similar_to", "quick"));
}

TEST_CASE("wordnet db parser rejects dangling synset references") {
    auto dir = std::filesystem::temp_directory_path() / "argsem_wn_dangling";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "data.noun") << "00000001 03 n 01 dog 0 001 @ 00000099 n 0000 | gloss\n";
    std::ofstream(dir / "data.verb") << "";
    std::ofstream(dir / "data.adj") << "";
    std::ofstream(dir / "data.adv") << "";
    try {
        parse_semantic_network(dir.string(), NetworkFormat::WordnetDb);
        FAIL("expected an error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("dangling") != std::string::npos);
    }
}

TEST_CASE("wordnet db parser reports byte offsets for malformed pointers") {
    auto dir = std::filesystem::temp_directory_path() / "argsem_wn_malformed";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "data.noun")
        << "00000001 03 n 01 dog 0 001 @ zzz n 0000 | gloss\n";
    std::ofstream(dir / "data.verb") << "";
    std::ofstream(dir / "data.adj") << "";
    std::ofstream(dir / "data.adv") << "";
    try {
        parse_semantic_network(dir.string(), NetworkFormat::WordnetDb);
        FAIL("expected an error");
    } catch (const std::exception& e) {
        std::string msg = e.what();
        CHECK(msg.find("byte offset") != std::string::npos);
        CHECK(msg.find("malformed pointer") != std::string::npos);
    }
}

TEST_CASE("association table concatenates responses in file order") {
    auto t = parse_association_table(fixture("toy_swow.csv"));
    CHECK(t.cues == std::vector<std::string>{"bread", "dog"});
    CHECK(t.entries.at("bread") ==
          std::vector<std::string>{"butter", "food", "toast", "jam", "knife"});
    CHECK(t.entries.at("dog") == std::vector<std::string>{"bark", "bone"});  // blank R2 skipped
}

TEST_CASE("association table requires the cue column") {
    auto path = temp_file("argsem_nocue.csv", "word,R1,R2,R3\nbread,butter,,\n");
    CHECK_THROWS(parse_association_table(path));
    auto empty = temp_file("argsem_emptyassoc.csv", "");
    CHECK_THROWS(parse_association_table(empty));
}

TEST_CASE("project_network emits one sorted neighbor line per node") {
    auto n = parse_semantic_network(fixture("toy_edges.tsv"), NetworkFormat::EdgeTsv);
    auto c = project_network(n);
    CHECK(c.source == CorpusSource::Network);
    CHECK(c.lines.size() == n.nodes.size());
    CHECK(corpus_text(c) == read_file(fixture("expected_network_corpus.txt")));
}

TEST_CASE("project_network handles isolated nodes and symmetric pairs") {
    SemanticNetwork n;
    n.nodes = {"a", "b", "qux"};
    n.edges = {{"a", "rel", "b"}};
    auto c = project_network(n);
    CHECK(corpus_text(c) == "a b\nb a\nqux\n");
}

TEST_CASE("project_associations emits cue plus responses") {
    auto t = parse_association_table(fixture("toy_swow.csv"));
    auto c = project_associations(t);
    CHECK(c.source == CorpusSource::Association);
    CHECK(c.lines.size() == t.cues.size());
    CHECK(corpus_text(c) == read_file(fixture("expected_assoc_corpus.txt")));

    AssociationTable empty_responses;
    empty_responses.cues = {"lone"};
    empty_responses.entries["lone"] = {};
    CHECK(corpus_text(project_associations(empty_responses)) == "lone\n");

    AssociationTable wide;
    wide.cues = {"hub"};
    for (int i = 0; i < 100; ++i) wide.entries["hub"].push_back("r" + std::to_string(i));
    auto line = project_associations(wide).lines[0];
    CHECK(line.size() == 101);
    CHECK(line[0] == "hub");
}

TEST_CASE("projection is deterministic") {
    auto n = parse_semantic_network(fixture("toy_wordnet"), NetworkFormat::WordnetDb);
    CHECK(corpus_text(project_network(n)) == corpus_text(project_network(n)));
}

TEST_CASE("write_corpus produces the byte-exact text form") {
    auto n = parse_semantic_network(fixture("toy_edges.tsv"), NetworkFormat::EdgeTsv);
    auto path = temp_file("argsem_corpus_out.txt", "");
    write_corpus(project_network(n), path);
    CHECK(read_file(path) == read_file(fixture("expected_network_corpus.txt")));
}
