#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "argsem/dataset.hpp"

using namespace argsem;

namespace {

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

LabeledDataset synthetic(size_t n_arg, size_t n_non) {
    LabeledDataset d;
    d.name = "synthetic";
    for (size_t i = 0; i < n_arg + n_non; ++i) {
        Sentence s;
        s.id = "s" + std::to_string(i);
        s.text = "token" + std::to_string(i) + " filler";
        s.tokens = tokenize(s.text);
        s.label = i < n_arg ? Label::Argument : Label::NonArgument;
        d.sentences.push_back(std::move(s));
    }
    d.recount();
    return d;
}

std::set<std::string> ids_of(const LabeledDataset& d) {
    std::set<std::string> out;
    for (const auto& s : d.sentences) out.insert(s.id);
    return out;
}

}  // namespace

TEST_CASE("load_dataset counts classes from tsv") {
    auto d = load_dataset(fixture("tiny.tsv"), DatasetFormat::Tsv);
    CHECK(d.size() == 3);
    CHECK(d.count(Label::Argument) == 2);
    CHECK(d.count(Label::NonArgument) == 1);
    CHECK(d.sentences[0].tokens == std::vector<std::string>{"we", "need", "a", "safe", "solution"});
    CHECK(d.name == "tiny");
}

TEST_CASE("load_dataset rejects unknown label naming the row") {
    try {
        load_dataset(fixture("bad_label.tsv"), DatasetFormat::Tsv);
        FAIL("expected an error");
    } catch (const std::exception& e) {
        std::string msg = e.what();
        CHECK(msg.find("row 1") != std::string::npos);
        CHECK(msg.find("maybe") != std::string::npos);
    }
}

TEST_CASE("load_dataset reads json lines") {
    auto d = load_dataset(fixture("tiny.jsonl"), DatasetFormat::Jsonl);
    CHECK(d.size() == 2);
    CHECK(d.count(Label::Argument) == 1);
    CHECK(d.sentences[1].id == "j2");
}

TEST_CASE("load_dataset errors on missing and empty files") {
    CHECK_THROWS(load_dataset("/nonexistent/path.tsv", DatasetFormat::Tsv));
    auto tmp = std::filesystem::temp_directory_path() / "argsem_empty.tsv";
    std::ofstream(tmp).close();
    CHECK_THROWS(load_dataset(tmp.string(), DatasetFormat::Tsv));
}

TEST_CASE("tokenize lowercases and splits on non-alphanumerics") {
    CHECK(tokenize("We need a safe, genuinely sustainable") ==
          std::vector<std::string>{"we", "need", "a", "safe", "genuinely", "sustainable"});
    CHECK(tokenize("") == std::vector<std::string>{});
    CHECK(tokenize("text-to-text") == std::vector<std::string>{"text", "to", "text"});
    CHECK(tokenize("  padded	words \n") == tokenize("padded words"));
}

TEST_CASE("undersample balances to the minority count") {
    auto d = synthetic(10, 4);
    auto b = undersample(d, 7);
    CHECK(b.count(Label::Argument) == 4);
    CHECK(b.count(Label::NonArgument) == 4);
    CHECK(b.size() == 8);

    auto b2 = undersample(d, 7);
    CHECK(ids_of(b) == ids_of(b2));  // same seed, same selection

    auto other = undersample(d, 8);
    CHECK(other.count(Label::Argument) == 4);

    auto again = undersample(b, 3);
    CHECK(ids_of(again) == ids_of(b));  // idempotent on balanced input
}

TEST_CASE("undersample requires both classes") {
    LabeledDataset d = synthetic(5, 0);
    CHECK_THROWS(undersample(d, 1));
}

TEST_CASE("split partitions 3000 sentences as 2100/300/600") {
    auto d = synthetic(1500, 1500);
    auto sp = split(d, 42);
    CHECK(sp.train.size() == 2100);
    CHECK(sp.dev.size() == 300);
    CHECK(sp.test.size() == 600);
    // stratified: per-class ratios within one sentence of the global ones
    CHECK(sp.train.count(Label::Argument) == 1050);
    CHECK(sp.test.count(Label::NonArgument) == 300);
}

TEST_CASE("split of 10 balanced sentences is 7/1/2 with both labels in train") {
    auto d = synthetic(5, 5);
    auto sp = split(d, 3);
    CHECK(sp.train.size() == 7);
    CHECK(sp.dev.size() == 1);
    CHECK(sp.test.size() == 2);
    CHECK(sp.train.count(Label::Argument) >= 1);
    CHECK(sp.train.count(Label::NonArgument) >= 1);
}

TEST_CASE("split is deterministic and preserves the id multiset") {
    auto d = synthetic(40, 25);
    auto a = split(d, 9);
    auto b = split(d, 9);
    CHECK(ids_of(a.train) == ids_of(b.train));
    CHECK(ids_of(a.dev) == ids_of(b.dev));
    CHECK(ids_of(a.test) == ids_of(b.test));

    std::set<std::string> all = ids_of(a.train);
    for (const auto& id : ids_of(a.dev)) CHECK(all.insert(id).second);
    for (const auto& id : ids_of(a.test)) CHECK(all.insert(id).second);
    CHECK(all == ids_of(d));
}

TEST_CASE("split rejects datasets that cannot fill three splits") {
    CHECK_THROWS(split(synthetic(4, 4), 1));
}

TEST_CASE("oov_rate is the fraction of missing token occurrences") {
    // 10 sentences x 3 tokens, exactly 3 occurrences outside the vocabulary
    LabeledDataset d;
    d.name = "oov";
    std::unordered_set<std::string> vocab;
    for (size_t i = 0; i < 10; ++i) {
        Sentence s;
        s.id = "s" + std::to_string(i);
        s.text = i == 0 ? "rare rare rare" : "common words here";
        s.tokens = tokenize(s.text);
        s.label = Label::Argument;
        d.sentences.push_back(s);
    }
    d.recount();
    vocab = {"common", "words", "here"};
    CHECK(oov_rate(d, vocab) == doctest::Approx(0.10).epsilon(1e-12));

    vocab.insert("rare");
    CHECK(oov_rate(d, vocab) == 0.0);

    CHECK(oov_rate(d, {}) == 1.0);
}

TEST_CASE("oov_rate never increases as the vocabulary grows") {
    auto d = synthetic(6, 6);
    std::unordered_set<std::string> vocab;
    double prev = oov_rate(d, vocab);
    for (const auto& s : d.sentences) {
        for (const auto& t : s.tokens) vocab.insert(t);
        double now = oov_rate(d, vocab);
        CHECK(now <= prev + 1e-12);
        prev = now;
    }
    CHECK(prev == 0.0);
}

TEST_CASE("build_vocab counts tokens and applies min_count") {
    LabeledDataset d;
    Sentence s;
    s.id = "x";
    s.text = "a a b";
    s.tokens = tokenize(s.text);
    s.label = Label::Argument;
    d.sentences.push_back(s);
    d.recount();

    auto v1 = build_vocab(d, 1);
    CHECK(v1.size() == 2);
    CHECK(v1.at("a") == 2);
    CHECK(v1.at("b") == 1);

    auto v2 = build_vocab(d, 2);
    CHECK(v2.size() == 1);
    CHECK(v2.at("a") == 2);
}
