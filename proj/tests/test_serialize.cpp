#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <numbers>

#include "spincavity/model.hpp"
#include "spincavity/rng.hpp"
#include "spincavity/serialize.hpp"

using namespace spincavity;
using Catch::Approx;

TEST_CASE("model parameters round-trip bit exactly") {
    SplitMix64 rng(88);
    for (int trial = 0; trial < 20; ++trial) {
        ModelParams p = ModelParams::ordered_chain(6 + static_cast<int>(rng.next_u64() % 5),
                                                   {2, 4}, 0.0, 0.0);
        for (double& d : p.delta_c) d = rng.uniform(-1, 1);
        for (double& d : p.delta_n) d = rng.uniform(-1, 1);
        for (double& j : p.J_c) j = rng.uniform(0, 2);
        for (double& g : p.g_left) g = rng.uniform(0, 1);
        for (double& g : p.g_right) g = rng.uniform(0, 1);
        for (double& f : p.phi) f = rng.uniform(0, std::numbers::pi / 2);
        for (double& w : p.omega) w = rng.uniform(0, 1);
        const std::string text = to_json(p).dump();
        const ModelParams q = model_params_from_json(json::parse(text));
        REQUIRE(q.delta_c == p.delta_c);
        REQUIRE(q.delta_n == p.delta_n);
        REQUIRE(q.J_c == p.J_c);
        REQUIRE(q.g_left == p.g_left);
        REQUIRE(q.g_right == p.g_right);
        REQUIRE(q.phi == p.phi);
        REQUIRE(q.omega == p.omega);
        REQUIRE(q.pos == p.pos);
        REQUIRE(to_json(q).dump() == text);
    }
}

TEST_CASE("unknown configuration keys are rejected") {
    auto j = to_json(ModelParams::ordered_chain(6, {2, 4}, 0.1, 0.0));
    j["couplings"] = 1.0;
    REQUIRE_THROWS_AS(model_params_from_json(j), ParameterError);
}

TEST_CASE("sha1 matches the reference vectors") {
    REQUIRE(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
    REQUIRE(sha1_hex("") == "da39a3ee5e6b4b0d3255bfef95601890afd80709");
    REQUIRE(sha1_hex("The quick brown fox jumps over the lazy dog") ==
            "2fd4e1c67a2d28fced849ee1bb76e7391b93eb12");
}

TEST_CASE("csv writer emits stable bytes with empty cells for NaN") {
    const std::string path = "test_csv_writer.tmp.csv";
    {
        CsvWriter csv(path);
        csv.header({"a", "b", "c"});
        csv.row({1.5, std::nan(""), 0.25});
        csv.row({-3.0, 2e-9, 1.0 / 3.0});
    }
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    REQUIRE(text == "a,b,c\n1.5,,0.25\n-3,2e-09,0.333333333333\n");
    std::remove(path.c_str());
}

TEST_CASE("fixture files load and map onto valid parameters") {
    const std::string dir = std::string(SPINCAVITY_DATA_DIR) + "/fixtures/";
    const char* names[] = {"onsite_r0.1.json",  "onsite_r0.4.json",  "onsite_r1.json",
                           "hopping_r0.1.json", "hopping_r0.2.json", "hopping_r0.4.json",
                           "hopping_r1.json"};
    for (const char* name : names) {
        const auto set = load_optimized_set(dir + name);
        REQUIRE(set.rows.size() == 12);
        REQUIRE(set.base.L == 10);
        for (const auto& row : set.rows) {
            const ModelParams p = set.apply(row);
            p.validate();
            if (set.mode == "onsite") {
                for (double d : p.delta_c) REQUIRE(std::abs(d) <= set.r + 1e-12);
            } else {
                for (double j : p.J_c) REQUIRE(j <= set.r + 1e-12);
            }
        }
    }
    SECTION("spot values") {
        const auto set = load_optimized_set(dir + "onsite_r1.json");
        const auto& row = set.row_for(30.0);
        REQUIRE(row.delta_c[0] == -0.85);
        REQUIRE(row.delta_n[0] == 0.11);
        REQUIRE(row.delta_n[1] == 0.10);
    }
}
