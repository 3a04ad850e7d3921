// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The factx Authors

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "factx/config.hpp"
#include "factx/evaluate.hpp"
#include "factx/extract_llm.hpp"
#include "factx/fixtures.hpp"
#include "factx/http_backends.hpp"
#include "factx/ingest.hpp"
#include "factx/pipeline.hpp"
#include "factx/prompt_defaults.hpp"
#include "factx/sparing.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
    std::string config_path;
    std::vector<std::string> overrides;
    bool print_config = false;
};

factx::RunConfig effective_config(const Globals& g, const std::vector<std::string>& flag_overrides) {
    factx::RunConfig config;
    if (!g.config_path.empty()) config = factx::apply_config_file(config, g.config_path);
    for (const auto& o : g.overrides) config = factx::apply_override(config, o);
    for (const auto& o : flag_overrides) config = factx::apply_override(config, o);
    config = factx::apply_environment(config);
    config.validate();
    return config;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw factx::SetupError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

std::vector<factx::VerdictDocument> load_documents(const fs::path& corpus, const factx::RunConfig& config) {
    auto parsed = factx::read_corpus(corpus, {config.ingest.year_from, config.ingest.year_to});
    if (parsed.corrupt > 0 || parsed.duplicates > 0 || parsed.out_of_range > 0) {
        std::cerr << "corpus: " << parsed.documents.size() << " documents, skipped " << parsed.corrupt << " corrupt, " << parsed.duplicates
                  << " duplicate, " << parsed.out_of_range << " out-of-range records\n";
    }
    return std::move(parsed.documents);
}

std::unique_ptr<factx::GenerationClient> make_provider(const factx::RunConfig& config, std::unique_ptr<factx::GenerationClient>& inner) {
    if (config.provider.backend == "replay") {
        if (config.provider.replay_path.empty()) throw factx::ConfigError("provider.replay_path is required for the replay backend");
        inner = std::make_unique<factx::ReplayProvider>(factx::ReplayProvider::load(config.provider.replay_path));
    } else {
        if (config.api_key.empty()) throw factx::ConfigError("environment variable " + config.provider.api_key_env + " is not set");
        inner = std::make_unique<factx::HttpProvider>(config.provider.endpoint, config.api_key, std::chrono::seconds(config.provider.timeout_s),
                                                      config.provider.max_retries);
    }
    if (config.provider.record_path.empty()) return nullptr;
    return std::make_unique<factx::RecordingProvider>(*inner, config.provider.record_path);
}

std::string one_line(std::string s) {
    for (auto& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"factx: factual statement extraction from court decisions"};
    app.require_subcommand(0, 1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config_path, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--set", g.overrides, "Override one setting, e.g. --set pipeline.ground_threshold=0.6");
    app.add_flag("--print-config", g.print_config, "Print the effective configuration as JSON and exit");

    // ingest -----------------------------------------------------------------
    auto* ingest = app.add_subcommand("ingest", "Parse a dump, link it to the registry and report coverage");
    std::string dump_path, admin_path, corpus_out, linkage_out, unmatched_out, ingest_dir;
    ingest->add_option("--dump", dump_path, "Dump file or directory of .jsonl files")->required();
    ingest->add_option("--admin", admin_path, "Registry CSV/TSV")->required()->check(CLI::ExistingFile);
    ingest->add_option("--corpus-out", corpus_out, "Write linked documents as JSONL");
    ingest->add_option("--report", linkage_out, "Write the linkage report as JSON");
    ingest->add_option("--unmatched-out", unmatched_out, "Write unmatched registry rows as CSV");
    ingest->add_option("--out", ingest_dir, "Directory for corpus.jsonl, linkage.json and unmatched.csv");

    // fetch ------------------------------------------------------------------
    auto* fetch = app.add_subcommand("fetch", "Retrieve registry decisions missing from the dump");
    std::string fetch_admin, fetch_out, fetch_endpoint;
    std::optional<int> fetch_retries;
    fetch->add_option("--unmatched,--admin", fetch_admin, "Unmatched registry rows (CSV/TSV)")->required()->check(CLI::ExistingFile);
    fetch->add_option("--out", fetch_out, "Fetched documents as JSONL")->required();
    fetch->add_option("--endpoint", fetch_endpoint, "Retrieval endpoint (overrides ingest.endpoint)");
    fetch->add_option("--max-retries", fetch_retries, "Retries per record on transient errors");

    // markers mine -----------------------------------------------------------
    auto* markers = app.add_subcommand("markers", "Marker inventory tools");
    markers->require_subcommand(1);
    auto* mine = markers->add_subcommand("mine", "Rank letter-spaced expressions across a corpus");
    std::string mine_corpus, mine_out;
    std::size_t mine_top = 40;
    mine->add_option("--corpus", mine_corpus, "Corpus file or directory")->required();
    mine->add_option("--top", mine_top, "Number of candidates to print");
    mine->add_option("--out", mine_out, "Write all candidates as JSON");

    // extract ----------------------------------------------------------------
    auto* extract = app.add_subcommand("extract", "Extract factual statements from a corpus");
    std::string method, ex_corpus, ex_markers, ex_out, ex_replay;
    std::optional<double> ex_threshold;
    std::optional<int> ex_concurrency;
    bool resume = false;
    extract->add_option("--method", method, "baseline | advanced | llm | combined")->check(CLI::IsMember({"baseline", "advanced", "llm", "combined"}));
    extract->add_option("--corpus", ex_corpus, "Corpus file or directory")->required();
    extract->add_option("--markers", ex_markers, "Marker set JSON")->check(CLI::ExistingFile);
    extract->add_option("--replay", ex_replay, "Replay fixture (selects the replay backend)")->check(CLI::ExistingFile);
    extract->add_option("--threshold", ex_threshold, "Grounding threshold");
    extract->add_option("--concurrency", ex_concurrency, "Documents processed in parallel");
    extract->add_option("--out", ex_out, "Results JSONL")->required();
    extract->add_flag("--resume", resume, "Keep existing results and skip their documents");

    // evaluate ---------------------------------------------------------------
    auto* evaluate = app.add_subcommand("evaluate", "Score results against gold annotations");
    std::vector<std::string> ev_results;
    std::string ev_gold, ev_out;
    evaluate->add_option("--results", ev_results, "Results JSONL (repeatable, one per method)")->required();
    evaluate->add_option("--gold", ev_gold, "Gold JSONL")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--out", ev_out, "Write the report as JSON");

    // fixtures generate ------------------------------------------------------
    auto* fixtures = app.add_subcommand("fixtures", "Synthetic corpora");
    fixtures->require_subcommand(1);
    auto* generate = fixtures->add_subcommand("generate", "Generate a corpus, gold annotations and a provider replay");
    std::string fx_spec, fx_out;
    generate->add_option("--spec", fx_spec, "Fixture spec JSON (optional \"replay\" block)")->required()->check(CLI::ExistingFile);
    generate->add_option("--out", fx_out, "Output directory")->required();

    // report -----------------------------------------------------------------
    auto* report = app.add_subcommand("report", "Render tables");
    report->require_subcommand(1);
    auto* rep_cov = report->add_subcommand("coverage", "Coverage table from a linkage report");
    std::string rep_linkage;
    rep_cov->add_option("--linkage", rep_linkage, "Linkage report JSON")->required()->check(CLI::ExistingFile);
    auto* rep_methods = report->add_subcommand("methods", "Method and band tables");
    std::vector<std::string> rep_results;
    std::string rep_gold;
    rep_methods->add_option("--results", rep_results, "Results JSONL (repeatable)")->required();
    rep_methods->add_option("--gold", rep_gold, "Gold JSONL")->required()->check(CLI::ExistingFile);
    auto* rep_hall = report->add_subcommand("hallucination", "Similarity of raw model answers to their sources");
    std::string rep_replay, rep_corpus, rep_markers;
    rep_hall->add_option("--replay", rep_replay, "Replay fixture")->required()->check(CLI::ExistingFile);
    rep_hall->add_option("--corpus", rep_corpus, "Corpus file or directory")->required();
    rep_hall->add_option("--markers", rep_markers, "Marker set JSON used for the prompts")->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "factx: usage error: " << one_line(e.what()) << "\nRun with --help for more information.\n";
        return 2;
    }
    if (app.get_subcommands().empty() && !g.print_config) {
        std::cerr << "factx: usage error: a subcommand is required\nRun with --help for more information.\n";
        return 2;
    }

    try {
        std::vector<std::string> flags;
        if (!method.empty()) flags.push_back("pipeline.method=" + method);
        if (!ex_markers.empty()) flags.push_back("markers.path=" + json(ex_markers).dump());
        if (!rep_markers.empty()) flags.push_back("markers.path=" + json(rep_markers).dump());
        if (!ex_replay.empty()) {
            flags.push_back("provider.backend=replay");
            flags.push_back("provider.replay_path=" + json(ex_replay).dump());
        }
        if (ex_threshold) flags.push_back("pipeline.ground_threshold=" + json(*ex_threshold).dump());
        if (ex_concurrency) flags.push_back("pipeline.concurrency_bound=" + std::to_string(*ex_concurrency));
        if (!fetch_endpoint.empty()) flags.push_back("ingest.endpoint=" + json(fetch_endpoint).dump());
        if (fetch_retries) flags.push_back("ingest.max_retries=" + std::to_string(*fetch_retries));
        const auto config = effective_config(g, flags);
        if (g.print_config) {
            std::cout << factx::to_json(config).dump(2) << '\n';
            return 0;
        }
        const factx::YearRange years{config.ingest.year_from, config.ingest.year_to};

        if (*ingest) {
            if (!ingest_dir.empty()) {
                fs::create_directories(ingest_dir);
                if (corpus_out.empty()) corpus_out = (fs::path(ingest_dir) / "corpus.jsonl").string();
                if (linkage_out.empty()) linkage_out = (fs::path(ingest_dir) / "linkage.json").string();
                if (unmatched_out.empty()) unmatched_out = (fs::path(ingest_dir) / "unmatched.csv").string();
            }
            auto parsed = factx::read_corpus(dump_path, years);
            const auto admin = factx::load_admin_file(admin_path);
            const auto linked = factx::link_corpus(parsed.documents, admin);
            std::cout << "dump: " << parsed.documents.size() << " documents (" << parsed.corrupt << " corrupt, " << parsed.duplicates
                      << " duplicate, " << parsed.out_of_range << " out of range)\n";
            std::cout << factx::coverage_report(linked.report);
            if (!corpus_out.empty()) {
                std::vector<std::string> lines;
                std::map<std::string, const factx::VerdictDocument*> by_id;
                for (const auto& d : parsed.documents) by_id.emplace(d.doc_id, &d);
                for (const auto& p : linked.pairs) lines.push_back(factx::to_json(*by_id.at(p.doc_id)).dump());
                factx::write_lines(corpus_out, lines);
            }
            if (!linkage_out.empty()) write_json(linkage_out, factx::to_json(linked.report));
            if (!unmatched_out.empty()) {
                std::ofstream out(unmatched_out, std::ios::binary | std::ios::trunc);
                if (!out) throw factx::SetupError("cannot write " + unmatched_out);
                factx::write_admin(out, linked.unmatched);
            }
        } else if (*fetch) {
            const auto admin = factx::load_admin_file(fetch_admin);
            const auto retrieval = config.retrieval_config();
            if (retrieval.endpoint.empty()) throw factx::ConfigError("ingest.endpoint is not set");
            factx::HttpRetriever retriever(retrieval.endpoint);
            const auto result = factx::fetch_missing(admin, retriever, retrieval);
            std::vector<std::string> lines;
            for (const auto& d : result.documents) lines.push_back(factx::to_json(d).dump());
            factx::write_lines(fetch_out, lines);
            std::cout << "fetched " << result.documents.size() << " of " << admin.size() << " (" << result.failures.size() << " failed, "
                      << result.requests << " requests)\n";
        } else if (*mine) {
            const auto docs = load_documents(mine_corpus, config);
            const auto candidates = factx::mine_markers(docs);
            json all = json::array();
            for (const auto& c : candidates) all.push_back(factx::to_json(c));
            for (std::size_t i = 0; i < std::min(mine_top, candidates.size()); ++i) {
                const auto& c = candidates[i];
                std::printf("%4zu  %-50s %6zu  %.3f\n", i + 1, c.expression.c_str(), c.document_count, c.mean_relative_position);
            }
            if (!mine_out.empty()) write_json(mine_out, all);
        } else if (*extract) {
            const auto docs = load_documents(ex_corpus, config);
            const auto pipeline = config.pipeline_config();
            std::unique_ptr<factx::GenerationClient> inner;
            std::unique_ptr<factx::GenerationClient> recorder;
            factx::GenerationClient* client = nullptr;
            if (pipeline.method == factx::Method::llm || pipeline.method == factx::Method::combined) {
                recorder = make_provider(config, inner);
                client = recorder ? recorder.get() : inner.get();
            }
            const auto summary = factx::run_corpus(docs, pipeline, client, ex_out, {resume});
            const auto rate = summary.documents == 0 ? std::string("n/a")
                                                     : factx::format_percent(summary.by_status.count("extracted") ? summary.by_status.at("extracted") : 0,
                                                                             summary.documents, config.evaluation.decimals);
            std::cout << "method: " << summary.method << "\ndocuments: " << summary.documents << " (processed " << summary.processed << ", resumed "
                      << summary.resumed << ")\nextraction rate: " << rate << "\nrules extracted: " << summary.rules_extracted
                      << "\nllm extracted: " << summary.llm_extracted << "\nprovider calls: " << summary.provider_calls << "\nestimated cost (USD): " << std::fixed
                      << std::setprecision(6) << summary.estimated_cost_usd << "\ntoken cost (USD): " << summary.token_cost_usd << '\n';
            std::cout << "summary: " << factx::to_json(summary).dump() << '\n';
        } else if (*evaluate || *rep_methods) {
            const auto& result_paths = *evaluate ? ev_results : rep_results;
            const auto gold = factx::load_gold(*evaluate ? ev_gold : rep_gold);
            std::vector<factx::MethodReport> reports;
            json out = {{"reports", json::array()}, {"comparisons", json::object()}};
            for (const auto& path : result_paths) {
                const auto outcomes = factx::load_results(path);
                const auto tag = outcomes.empty() ? factx::Method::combined : outcomes.front().method;
                std::size_t unmatched = 0;
                std::vector<factx::Comparison> comparisons;
                for (const auto& c : factx::compare_all(outcomes, gold, tag, &unmatched)) comparisons.push_back(c);
                if (config.metric() != factx::Metric::levenshtein) {
                    comparisons.clear();
                    std::map<std::string, const factx::ExtractionOutcome*> by_id;
                    for (const auto& o : outcomes) by_id.emplace(o.doc_id, &o);
                    for (const auto& gd : gold) {
                        auto it = by_id.find(gd.doc_id);
                        if (it != by_id.end()) comparisons.push_back(factx::compare(*it->second, gd, config.metric()));
                    }
                }
                if (unmatched > 0) std::cerr << path << ": " << unmatched << " results without gold annotation ignored\n";
                reports.push_back(factx::method_report(comparisons, factx::to_string(tag)));
                out["reports"].push_back(factx::to_json(reports.back()));
                json per_doc = json::array();
                for (const auto& c : comparisons) per_doc.push_back(factx::to_json(c));
                out["comparisons"][factx::to_string(tag)] = per_doc;
            }
            std::cout << factx::render_method_table(reports) << '\n' << factx::render_band_table(reports);
            if (*evaluate && !ev_out.empty()) write_json(ev_out, out);
        } else if (*generate) {
            std::ifstream in(fx_spec, std::ios::binary);
            const auto j = json::parse(in, nullptr, false);
            if (j.is_discarded()) throw factx::ConfigError("fixture spec is not valid JSON");
            json corpus_part = j;
            corpus_part.erase("replay");
            const auto spec = factx::fixture_spec_from_json(corpus_part);
            const auto corpus = factx::generate_corpus(spec);
            std::optional<factx::ReplayFixture> replay;
            if (j.contains("replay")) {
                const auto behavior = factx::replay_behavior_from_json(j["replay"]);
                const auto prompt = factx::default_prompt_spec(factx::profile_marker_set(factx::language_profile(spec.language_profile)));
                const factx::Extractor extractor(config.pipeline_config());
                replay = factx::generate_replay(corpus.documents, behavior, prompt, config.provider_config(), extractor.document_budget());
            }
            factx::write_fixture_set(fx_out, corpus, replay ? &*replay : nullptr);
            std::cout << "wrote " << corpus.documents.size() << " documents to " << fx_out << (replay ? " with replay" : "") << '\n';
        } else if (*rep_cov) {
            std::ifstream in(rep_linkage, std::ios::binary);
            const auto j = json::parse(in, nullptr, false);
            if (j.is_discarded()) throw factx::ConfigError("linkage report is not valid JSON");
            std::cout << factx::coverage_report(factx::linkage_report_from_json(j));
        } else if (*rep_hall) {
            const auto docs = load_documents(rep_corpus, config);
            auto replay = factx::ReplayProvider::load(rep_replay);
            const factx::Extractor extractor(config.pipeline_config());
            std::vector<std::pair<std::string, std::string>> pairs;
            std::size_t skipped = 0;
            for (const auto& d : docs) {
                const auto prompt = factx::build_prompt(d, extractor.prompt_spec(), extractor.document_budget());
                const auto result = factx::llm_extract(d, prompt, replay, config.provider_config());
                std::optional<std::string> answer;
                if (result.status == factx::LlmStatus::ok) {
                    try {
                        answer = factx::parse_model_output(*result.raw_output);
                    } catch (const factx::ModelOutputError&) {
                    }
                }
                if (answer) {
                    pairs.emplace_back(*answer, d.raw_text);
                } else {
                    ++skipped;
                }
            }
            if (pairs.empty()) throw factx::ConfigError("no usable model answers in the replay for this corpus");
            const auto r = factx::hallucination_report(pairs);
            std::cout << factx::render_hallucination_table(r);
            if (skipped > 0) std::cout << "documents without a usable answer: " << skipped << '\n';
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "factx: error: " << one_line(e.what()) << '\n';
        return 1;
    }
}
