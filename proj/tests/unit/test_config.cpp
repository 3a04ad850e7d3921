// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The factx Authors

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "factx/config.hpp"

using namespace factx;

TEST_CASE("defaults validate") {
    const RunConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.pipeline_config().method == Method::combined);
    CHECK(c.provider_config().temperature == 0.0);
}

TEST_CASE("file, override and environment precedence") {
    const auto path = std::filesystem::temp_directory_path() / "factx_config_test.json";
    {
        std::ofstream out(path);
        out << R"({"pipeline":{"method":"advanced","concurrency_bound":2},"provider":{"temperature":0.5,"api_key_env":"FACTX_TEST_KEY"}})";
    }
    auto c = apply_config_file(RunConfig{}, path);
    CHECK(c.pipeline.method == "advanced");
    CHECK(c.pipeline.concurrency_bound == 2);
    CHECK(c.provider.temperature == 0.5);
    c = apply_override(c, "pipeline.method=llm");
    c = apply_override(c, "provider.temperature=0");
    CHECK(c.pipeline.method == "llm");
    CHECK(c.provider.temperature == 0.0);
    CHECK(c.pipeline.concurrency_bound == 2);

    ::setenv("FACTX_TEST_KEY", "secret-value", 1);
    c = apply_environment(c);
    CHECK(c.api_key == "secret-value");
    CHECK(to_json(c).dump().find("secret-value") == std::string::npos);
    ::unsetenv("FACTX_TEST_KEY");
    std::filesystem::remove(path);
}

TEST_CASE("unknown keys and wrong types are errors") {
    CHECK_THROWS_AS(apply_override(RunConfig{}, "pipeline.mehtod=llm"), ConfigError);
    CHECK_THROWS_AS(apply_override(RunConfig{}, "pipeline.concurrency_bound=\"four\""), ConfigError);
    CHECK_THROWS_AS(apply_override(RunConfig{}, "pipeline.concurrency_bound=1.5"), ConfigError);
    CHECK_THROWS_AS(apply_override(RunConfig{}, "no_equals_sign"), ConfigError);
    CHECK_THROWS_AS(apply_config_json(RunConfig{}, nlohmann::json{{"nope", 1}}), ConfigError);
    CHECK_THROWS_AS(apply_config_file(RunConfig{}, "/nonexistent/config.json"), ConfigError);
    CHECK_NOTHROW(apply_override(RunConfig{}, "provider.chars_per_token=4"));

    auto c = apply_override(RunConfig{}, "pipeline.method=regex");
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = apply_override(RunConfig{}, "ingest.year_from=2030");
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("printed configuration reproduces the run") {
    auto c = apply_override(RunConfig{}, "pipeline.ground_threshold=0.8");
    c = apply_override(c, "provider.model_name=other-model");
    const auto printed = to_json(c);
    const auto back = apply_config_json(RunConfig{}, printed);
    CHECK(to_json(back) == printed);
    CHECK_FALSE(printed["provider"].contains("api_key"));
}
