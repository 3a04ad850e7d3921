// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The factx Authors

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "factx/fixtures.hpp"
#include "factx/pipeline.hpp"

using namespace factx;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

VerdictDocument doc_of(std::string text, std::string id = "d") {
    return {std::move(id), "Súd", "1T/1/2020", 2020, std::move(text), DocumentSource::dump};
}

StubProvider raw(std::string output) {
    return StubProvider([output = std::move(output)](const GenerationRequest&) { return LlmResult{LlmStatus::ok, output, 0, 0, {}}; });
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "factx_pipeline_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

// Clean and noisy documents; `broken` of them carry an unmarked fact the rules cannot reach.
FixtureCorpus corpus_needing_llm(std::size_t n, std::size_t broken, std::uint64_t seed) {
    FixtureSpec spec;
    spec.n_docs = n;
    spec.seed = seed;
    spec.pathological_fraction = static_cast<double>(broken) / static_cast<double>(n);
    spec.clean_fraction = 0.5 * (1.0 - spec.pathological_fraction);
    spec.noisy_fraction = 1.0 - spec.clean_fraction - spec.pathological_fraction;
    spec.absent_fact_fraction = 0.0;
    return generate_corpus(spec);
}

}  // namespace

TEST_CASE("combined: rules success never calls the provider") {
    auto stub = StubProvider::echo("unused");
    const auto o = extract_combined(doc_of("X is found guilty that he stole a bicycle, therefore sentenced."), default_marker_set(), stub);
    REQUIRE(o.extracted());
    CHECK(*o.text == "he stole a bicycle,");
    CHECK(o.method == Method::combined);
    CHECK(o.diagnostics == "rules");
    CHECK(stub.calls() == 0);
}

TEST_CASE("combined: rules failure falls through to a grounded model answer") {
    const std::string text = "The accused took a red bicycle from the yard of the house. Sentence follows.";
    auto stub = StubProvider::echo("took a red bicycle from the yard");
    const auto o = extract_combined(doc_of(text), default_marker_set(), stub);
    REQUIRE(o.extracted());
    CHECK(stub.calls() == 1);
    CHECK(o.diagnostics == "llm");
    CHECK(*o.text == "took a red bicycle from the yard");
    CHECK(is_verbatim(o, text));
}

TEST_CASE("combined: model answers are regrounded in the source") {
    const std::string text = "The accused took a red bicycle from the yard of the house. Sentence follows.";
    auto stub = StubProvider::echo("took a red bicycle frm the yard");
    const auto o = extract_combined(doc_of(text), default_marker_set(), stub);
    REQUIRE(o.extracted());
    CHECK(is_verbatim(o, text));
    CHECK(*o.score < 1.0);
}

TEST_CASE("combined: failure statuses") {
    const auto doc = doc_of("Nothing in here matches any marker at all.");
    auto safety = StubProvider::refusing(LlmStatus::safety_flagged);
    auto o = extract_combined(doc, default_marker_set(), safety);
    CHECK(o.status == Status::failed);
    CHECK(o.diagnostics == "llm:safety_flagged");

    auto garbage = raw("I could not do it");
    o = extract_combined(doc, default_marker_set(), garbage);
    CHECK(o.status == Status::failed);
    CHECK(o.diagnostics == "llm:parse_error");

    auto invented = StubProvider::echo("zzqx wvvk plmm ttrr jjhh");
    o = extract_combined(doc, default_marker_set(), invented);
    CHECK(o.status == Status::failed);
    CHECK(o.diagnostics == "llm:ground_no_match");

    auto none = raw(nlohmann::json{{std::string(kFactField), nullptr}}.dump());
    o = extract_combined(doc, default_marker_set(), none);
    CHECK(o.status == Status::no_match);
    CHECK(o.diagnostics == "llm:no_fact");
    CHECK_FALSE(o.text.has_value());
}

TEST_CASE("methods without a provider") {
    PipelineConfig rules_cfg;
    rules_cfg.method = Method::advanced;
    const Extractor rules_only(rules_cfg);
    LlmUsage usage;
    CHECK_NOTHROW(rules_only.extract(doc_of("x"), nullptr, usage));
    PipelineConfig llm_cfg;
    llm_cfg.method = Method::llm;
    const Extractor needs_llm(llm_cfg);
    CHECK_THROWS_AS(needs_llm.extract(doc_of("x"), nullptr, usage), ConfigError);
}

TEST_CASE("empty corpus") {
    auto stub = StubProvider::echo("x");
    const auto path = scratch("empty.jsonl");
    const auto s = run_corpus(std::vector<VerdictDocument>{}, PipelineConfig{}, &stub, path);
    CHECK(s.documents == 0);
    CHECK(s.provider_calls == 0);
    CHECK(s.estimated_cost_usd == 0.0);
    CHECK(s.extraction_rate() == 0.0);
    CHECK(slurp(path).empty());
}

TEST_CASE("only documents the rules miss reach the provider") {
    const auto corpus = corpus_needing_llm(100, 5, 41);
    const auto docs = corpus.verdicts();
    const auto replay = generate_replay(corpus.documents, ReplayBehavior{}, default_prompt_spec(default_marker_set()));
    ReplayProvider provider(replay.records);
    const PipelineConfig config;
    const Extractor extractor(config);
    const auto path = scratch("five.jsonl");
    const auto s = run_corpus(docs, config, &provider, path);
    CHECK(s.provider_calls == 5);
    CHECK(provider.calls() == 5);
    CHECK(provider.misses() == 0);
    CHECK(s.documents == 100);
    CHECK(s.rules_extracted == 95);
    CHECK(s.llm_extracted == 5);
    double expected = 0.0;
    for (const auto& fd : corpus.documents) {
        if (fd.kind == FixtureKind::pathological_fact) expected += extractor.estimated_cost(fd.doc);
    }
    CHECK(s.estimated_cost_usd == Catch::Approx(expected).epsilon(1e-12));

    const auto results = load_results(path);
    REQUIRE(results.size() == 100);
    for (std::size_t i = 0; i < results.size(); ++i) {
        CHECK(results[i].doc_id == docs[i].doc_id);
        CHECK(is_verbatim(results[i], docs[i].raw_text));
    }
}

TEST_CASE("runs are deterministic and independent of concurrency") {
    const auto corpus = corpus_needing_llm(60, 6, 5);
    const auto docs = corpus.verdicts();
    const auto replay = generate_replay(corpus.documents, ReplayBehavior{}, default_prompt_spec(default_marker_set()));
    PipelineConfig one;
    one.concurrency_bound = 1;
    PipelineConfig many;
    many.concurrency_bound = 6;
    ReplayProvider p1(replay.records), p2(replay.records), p3(replay.records);
    run_corpus(docs, one, &p1, scratch("seq.jsonl"));
    run_corpus(docs, many, &p2, scratch("par.jsonl"));
    run_corpus(docs, many, &p3, scratch("par2.jsonl"));
    CHECK(slurp(scratch("seq.jsonl")) == slurp(scratch("par.jsonl")));
    CHECK(slurp(scratch("par.jsonl")) == slurp(scratch("par2.jsonl")));
}

TEST_CASE("resume after an interruption gives the uninterrupted file") {
    const auto corpus = corpus_needing_llm(50, 5, 77);
    const auto docs = corpus.verdicts();
    const auto replay = generate_replay(corpus.documents, ReplayBehavior{}, default_prompt_spec(default_marker_set()));
    const PipelineConfig config;
    ReplayProvider full_provider(replay.records);
    const auto full = scratch("full.jsonl");
    const auto full_summary = run_corpus(docs, config, &full_provider, full);

    const auto partial = scratch("partial.jsonl");
    ReplayProvider a(replay.records);
    const auto first = run_corpus(docs, config, &a, partial, {.resume = false, .stop_after = 25});
    CHECK_FALSE(first.complete);
    CHECK(first.processed == 25);
    {
        std::ofstream torn(partial, std::ios::app | std::ios::binary);
        torn << R"({"doc_id":"half-writ)";
    }
    ReplayProvider b(replay.records);
    const auto second = run_corpus(docs, config, &b, partial, {.resume = true});
    CHECK(second.complete);
    CHECK(second.resumed == 25);
    CHECK(second.processed == 25);
    CHECK(slurp(partial) == slurp(full));
    CHECK(second.by_status == full_summary.by_status);

    ReplayProvider c(replay.records);
    const auto third = run_corpus(docs, config, &c, partial, {.resume = true});
    CHECK(third.processed == 0);
    CHECK(c.calls() == 0);
    CHECK(slurp(partial) == slurp(full));
}

TEST_CASE("unwritable output is a setup error") {
    auto stub = StubProvider::echo("x");
    const std::vector<VerdictDocument> docs{doc_of("x")};
    CHECK_THROWS_AS(run_corpus(docs, PipelineConfig{}, &stub, "/nonexistent-dir/results.jsonl"), SetupError);
}

TEST_CASE("invalid pipeline configuration") {
    PipelineConfig bad;
    bad.concurrency_bound = 0;
    CHECK_THROWS_AS(Extractor(bad), ConfigError);
    bad = PipelineConfig{};
    bad.ground_threshold = 1.5;
    CHECK_THROWS_AS(Extractor(bad), ConfigError);
}
