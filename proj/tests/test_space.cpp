#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "argsem/space.hpp"
#include "argsem/util.hpp"

using namespace argsem;

namespace {

SemanticSpace toy_space() {
    SemanticSpace s({"x", "y", "xy"}, 2);
    s.row(0)[0] = 1.0f;  // (1, 0)
    s.row(1)[1] = 1.0f;  // (0, 1)
    s.row(2)[0] = 1.0f;  // (1, 1)
    s.row(2)[1] = 1.0f;
    return s;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("cosine on identical, orthogonal and 45-degree vectors") {
    auto s = toy_space();
    CHECK(cosine(s, "x", "x") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cosine(s, "x", "y") == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(cosine(s, "x", "xy") == doctest::Approx(0.70711).epsilon(1e-5));  // 1/sqrt(2)
    CHECK(cosine(s, "x", "xy") == cosine(s, "xy", "x"));
}

TEST_CASE("cosine names the missing word and rejects zero vectors") {
    auto s = toy_space();
    try {
        cosine(s, "x", "ghost");
        FAIL("expected an error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("ghost") != std::string::npos);
    }
    SemanticSpace z({"zero", "one"}, 2);
    z.row(1)[0] = 1.0f;
    CHECK_THROWS(cosine(z, "zero", "one"));
}

TEST_CASE("embed_sequence pads, masks and truncates") {
    auto s = toy_space();
    auto e = embed_sequence(s, {"x", "y", "xy"}, 5);
    CHECK(e.mask == std::vector<uint8_t>{1, 1, 1, 0, 0});
    CHECK(e.row(0)[0] == 1.0f);
    CHECK(e.row(3)[0] == 0.0f);
    CHECK(e.row(4)[1] == 0.0f);

    std::vector<std::string> forty(40, "x");
    auto t = embed_sequence(s, forty, 30);
    CHECK(t.seq_len == 30);
    CHECK(t.mask[29] == 1);

    // in-vocabulary rows are exact copies of the matrix rows
    for (size_t k = 0; k < s.dim(); ++k) CHECK(e.row(2)[k] == s.row(2)[k]);
}

TEST_CASE("embed_sequence maps every OOV token to the same unknown vector") {
    auto s = toy_space();
    auto e = embed_sequence(s, {"ghost", "phantom"}, 2);
    auto unk = unknown_vector(s.dim());
    for (size_t t = 0; t < 2; ++t)
        for (size_t k = 0; k < s.dim(); ++k) CHECK(e.row(t)[k] == unk[k]);

    auto z = embed_sequence(s, {"ghost"}, 1, OovPolicy::ZeroVector);
    CHECK(z.row(0)[0] == 0.0f);
    CHECK(z.mask[0] == 1);
}

TEST_CASE("save/load round trip preserves words and values to 1e-6") {
    auto s = toy_space();
    s.row(2)[0] = 0.1234567f;
    auto path = temp_path("argsem_space.txt");
    save_space(s, path);
    auto l = load_space(path);
    REQUIRE(l.size() == s.size());
    REQUIRE(l.dim() == s.dim());
    for (size_t i = 0; i < s.size(); ++i) {
        CHECK(l.words()[i] == s.words()[i]);
        for (size_t k = 0; k < s.dim(); ++k)
            CHECK(std::fabs(l.row(i)[k] - s.row(i)[k]) < 1e-6);
    }
}

TEST_CASE("load_space reports arity mismatches with the line number") {
    auto path = temp_path("argsem_badspace.txt");
    std::ofstream(path) << "2 3\nalpha 0.1 0.2 0.3\nbeta 0.1 0.2\n";
    try {
        load_space(path);
        FAIL("expected an error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    std::ofstream(path) << "1 2\nalpha 0.1 oops\n";
    CHECK_THROWS(load_space(path));

    std::ofstream(path) << "not a header\n";
    CHECK_THROWS(load_space(path));
}

TEST_CASE("load_space tolerates CRLF and a trailing newline") {
    auto path = temp_path("argsem_crlf_space.txt");
    std::ofstream(path, std::ios::binary) << "1 2\r\nword 0.5 -0.5\r\n";
    auto s = load_space(path);
    CHECK(s.size() == 1);
    CHECK(s.row(0)[0] == doctest::Approx(0.5));
}

TEST_CASE("random_space is seeded, bounded and tagged") {
    std::vector<std::string> vocab{"a", "b", "c", "d"};
    auto s1 = random_space(vocab, 10, 99);
    auto s2 = random_space(vocab, 10, 99);
    CHECK(std::memcmp(s1.matrix().data(), s2.matrix().data(),
                      s1.matrix().size() * sizeof(float)) == 0);
    auto s3 = random_space(vocab, 10, 100);
    CHECK(std::memcmp(s1.matrix().data(), s3.matrix().data(),
                      s1.matrix().size() * sizeof(float)) != 0);

    double bound = 0.5 / 10.0;
    for (float v : s1.matrix()) {
        CHECK(v >= -bound);
        CHECK(v <= bound);
    }
    CHECK(s1.meta.family == SpaceFamily::Random);
}

TEST_CASE("nearest-neighbor ranking survives the 6-decimal round trip") {
    std::vector<std::string> vocab;
    for (int i = 0; i < 20; ++i) vocab.push_back("w" + std::to_string(i));
    auto s = random_space(vocab, 16, 7);
    auto path = temp_path("argsem_rank_space.txt");
    save_space(s, path);
    auto l = load_space(path);

    auto nearest = [](const SemanticSpace& sp, const std::string& probe) {
        std::string best;
        double best_cos = -2;
        for (const auto& w : sp.words()) {
            if (w == probe) continue;
            double c = cosine(sp, probe, w);
            if (c > best_cos) {
                best_cos = c;
                best = w;
            }
        }
        return best;
    };
    for (const auto& probe : vocab) CHECK(nearest(s, probe) == nearest(l, probe));
}
