// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The factx Authors
//
// factx_acceptance [N|all]: one PASS/FAIL line per acceptance criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cwctype>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "factx/align.hpp"
#include "factx/evaluate.hpp"
#include "factx/extract_llm.hpp"
#include "factx/extract_rules.hpp"
#include "factx/fixtures.hpp"
#include "factx/percent.hpp"
#include "factx/pipeline.hpp"
#include "factx/prompt_defaults.hpp"
#include "oracles.hpp"

using namespace factx;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (!pass) {
            detail += "; ";
        } else {
            detail.clear();
        }
        pass = false;
        detail += why;
    }
};

struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Verdict()> run;
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::filesystem::path work_dir() {
    auto dir = std::filesystem::temp_directory_path() / "factx_acceptance";
    std::filesystem::create_directories(dir);
    return dir;
}

// ---------------------------------------------------------------------------

Verdict c1_arithmetic() {
    struct Cell {
        const char* label;
        std::size_t part, whole;
        int decimals;
        const char* printed;
    };
    const Cell cells[] = {
        {"coverage: dump direct match", 98'500, 126'795, 2, "77.64%"},
        {"coverage: API re-download", 15'742, 126'795, 2, "12.42%"},
        {"coverage: linked total", 112'864, 126'795, 2, "88.06%"},
        {"coverage: not linked", 13'931, 126'795, 1, "11.0%"},
        {"regimes: simple regex", 35'767, 112'864, 2, "31.69%"},
        {"regimes: automatic", 109'292, 112'864, 2, "96.80%"},
        {"methods: baseline rate", 162, 400, 1, "40.5%"},
        {"methods: baseline quality", 138, 400, 1, "34.5%"},
        {"methods: advanced rate", 388, 400, 1, "97.0%"},
        {"methods: advanced quality", 358, 400, 1, "89.5%"},
        {"methods: llm rate", 395, 400, 2, "98.75%"},
        {"methods: llm quality", 367, 400, 2, "91.75%"},
        {"methods: combined rate", 398, 400, 1, "99.5%"},
        {"methods: combined quality", 368, 400, 1, "92.0%"},
        {"difficult: perfect", 163, 200, 1, "81.5%"},
        {"difficult: 95-100", 5, 200, 1, "2.5%"},
        {"difficult: 80-95", 7, 200, 1, "3.5%"},
        {"difficult: 50-80", 1, 200, 1, "0.5%"},
        {"difficult: failed", 24, 200, 1, "12.0%"},
        {"difficult: high quality", 168, 200, 1, "84.0%"},
        {"hallucination: 100", 26, 100, 1, "26.0%"},
        {"hallucination: 95-99", 71, 100, 1, "71.0%"},
        {"hallucination: 90-94", 2, 100, 1, "2.0%"},
        {"hallucination: 80-89", 1, 100, 1, "1.0%"},
        {"hallucination: <80", 0, 100, 1, "0.0%"},
    };
    Verdict v;
    std::size_t ok = 0;
    for (const auto& c : cells) {
        const auto got = format_percent(c.part, c.whole, c.decimals);
        if (got == c.printed) {
            ++ok;
        } else {
            v.fail(std::string(c.label) + " " + std::to_string(c.part) + "/" + std::to_string(c.whole) + " = " + got + ", printed " + c.printed);
        }
    }
    // The renderers must carry the same cells.
    std::vector<Comparison> difficult;
    auto add = [&](std::size_t n, std::optional<double> s) {
        for (std::size_t i = 0; i < n; ++i) {
            Comparison c;
            c.score = s;
            c.band = band(s);
            c.gold_present = true;
            difficult.push_back(c);
        }
    };
    add(163, 1.0);
    add(5, 0.97);
    add(7, 0.85);
    add(1, 0.6);
    add(24, std::nullopt);
    const std::vector<MethodReport> reports{method_report(difficult, "LLM")};
    const auto table = render_band_table(reports);
    for (const char* cell : {"81.50%", "2.50%", "3.50%", "0.50%", "12.00%", "84.00%"}) {
        if (table.find(cell) == std::string::npos) v.fail(std::string("band table lacks ") + cell);
    }
    if (v.pass) v.detail = std::to_string(ok) + " cells reproduced";
    else v.detail = std::to_string(ok) + "/" + std::to_string(std::size(cells)) + " cells reproduced; " + v.detail;
    return v;
}

Verdict c2_cost() {
    ProviderConfig config;
    config.chars_per_token = 4.0;
    config.pricing = {0.10, 0.40};
    const double cost = estimate_cost(4083, 10'497, 1257, config);
    const double prompt_chars = static_cast<double>(build_prompt(VerdictDocument{}, default_prompt_spec()).template_chars);
    Verdict v;
    char buf[160];
    std::snprintf(buf, sizeof buf, "cost %.7f USD (target 0.00049 +/- 0.00002); shipped template %.0f chars", cost, prompt_chars);
    v.detail = buf;
    if (std::abs(cost - 0.00049) > 0.00002) v.fail(buf);
    return v;
}

Verdict c3_verbatim() {
    FixtureSpec spec;
    spec.n_docs = 40;
    spec.seed = 303;
    spec.clean_fraction = 0.3;
    spec.noisy_fraction = 0.6;
    spec.pathological_fraction = 0.1;
    spec.language_profile = "sk";
    const auto corpus = generate_corpus(spec);
    std::mt19937_64 rng(3);
    const std::u32string invented_alphabet = U"abcdefghijklmnopqrstuvwxyzáčďéíľňóôšťúýž ,.\n";
    std::size_t calls = 0, grounded = 0, violations = 0;
    for (int t = 0; t < 10'000; ++t) {
        const auto& fd = corpus.documents[static_cast<std::size_t>(t) % corpus.documents.size()];
        const auto full = decode_utf8(fd.doc.raw_text);
        // Mostly slices of a document, every tenth call the whole document.
        std::size_t s0 = 0, s1 = full.size();
        if (t % 10 != 0) {
            std::uniform_int_distribution<std::size_t> len(150, std::min<std::size_t>(900, full.size()));
            const auto n = len(rng);
            s0 = std::uniform_int_distribution<std::size_t>(0, full.size() - n)(rng);
            s1 = s0 + n;
        }
        const std::string source(full.bytes(fd.doc.raw_text, s0, s1));
        const auto src = decode_utf8(source);
        std::u32string candidate;
        const int kind = t % 4;
        if (kind == 3) {
            candidate = oracle::random_string(rng, invented_alphabet, 1, 200);
        } else {
            std::uniform_int_distribution<std::size_t> pos(0, src.size() - 1);
            std::size_t a = pos(rng), b = pos(rng);
            if (a > b) std::swap(a, b);
            b = std::min(src.size(), b + 1);
            candidate = src.chars.substr(a, b - a);
            if (kind == 1 && candidate.size() > 4) candidate = candidate.substr(candidate.size() / 3);  // truncated
            const auto edits = std::uniform_int_distribution<int>(0, 1 + static_cast<int>(candidate.size()) / 5)(rng);
            for (int e = 0; e < edits && !candidate.empty(); ++e) {
                const auto at = std::uniform_int_distribution<std::size_t>(0, candidate.size() - 1)(rng);
                switch (rng() % 4) {
                    case 0: candidate[at] = invented_alphabet[rng() % invented_alphabet.size()]; break;
                    case 1: candidate.insert(candidate.begin() + static_cast<std::ptrdiff_t>(at), U' '); break;
                    case 2: candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(at)); break;
                    default: candidate[at] = static_cast<char32_t>(std::towupper(static_cast<wint_t>(candidate[at]))); break;
                }
            }
            if (kind == 2) candidate += U" and later invented text";
        }
        const double threshold = (t % 3 == 0) ? 0.0 : kDefaultGroundThreshold;
        ++calls;
        const auto g = ground(encode_utf8(candidate), source, threshold);
        if (!g) continue;
        ++grounded;
        const bool verbatim = g->match.end_offset <= src.size() && g->text == src.bytes(source, g->match.start_offset, g->match.end_offset) &&
                              source.find(g->text) != std::string::npos && !g->text.empty();
        if (!verbatim) ++violations;
    }
    Verdict v;
    v.detail = std::to_string(calls) + " calls, " + std::to_string(grounded) + " grounded, " + std::to_string(violations) + " violations";
    if (violations != 0) v.fail(v.detail);
    return v;
}

Verdict c4_oracle() {
    std::mt19937_64 rng(404);
    const std::u32string alphabet = U"abcdeáčéíôABC \n";
    std::size_t score_mismatch = 0, span_mismatch = 0, sim_mismatch = 0, checked = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto source = oracle::random_string(rng, alphabet, 1, 500);
        std::u32string candidate;
        if (t % 3 != 2 && source.size() > 2) {
            const auto a = std::uniform_int_distribution<std::size_t>(0, source.size() - 1)(rng);
            const auto n = std::uniform_int_distribution<std::size_t>(1, 60)(rng);
            candidate = source.substr(a, n);
            const auto edits = std::uniform_int_distribution<std::size_t>(0, candidate.size() / 4 + 1)(rng);
            for (std::size_t e = 0; e < edits && !candidate.empty(); ++e) candidate[rng() % candidate.size()] = alphabet[rng() % alphabet.size()];
        } else {
            candidate = oracle::random_string(rng, alphabet, 1, 40);
        }
        const auto nc = normalize_text(std::u32string_view(candidate));
        const auto ns = normalize_text(std::u32string_view(source));
        if (nc.folded.empty() || ns.folded.empty()) continue;
        ++checked;
        const auto got = locate_span(nc, ns);
        const auto want = oracle::best_substring(nc.folded, ns.folded);
        if (!want.found || got.score != want.value()) ++score_mismatch;
        const auto r = ns.project(want.begin, want.end);
        if (got.start_offset != r.start || got.end_offset != r.end) ++span_mismatch;
        const auto other = oracle::random_string(rng, alphabet, 0, 80);
        const auto fa = normalize_text(std::u32string_view(candidate)).folded;
        const auto fb = normalize_text(std::u32string_view(other)).folded;
        if (similarity(encode_utf8(candidate), encode_utf8(other)) != oracle::score(fa, fb)) ++sim_mismatch;
    }
    Verdict v;
    v.detail = std::to_string(checked) + " pairs: " + std::to_string(score_mismatch) + " score, " + std::to_string(span_mismatch) + " span, " +
               std::to_string(sim_mismatch) + " similarity mismatches";
    if (score_mismatch + span_mismatch + sim_mismatch != 0) v.fail(v.detail);
    return v;
}

std::size_t count_extracted(const std::vector<ExtractionOutcome>& v) {
    std::size_t n = 0;
    for (const auto& o : v) n += o.extracted() ? 1 : 0;
    return n;
}

Verdict c5_calibration() {
    FixtureSpec spec;
    spec.n_docs = 400;
    spec.seed = 2024;
    spec.clean_fraction = 0.405;
    spec.noisy_fraction = 0.565;
    spec.pathological_fraction = 0.03;
    spec.absent_fact_fraction = 1.0 / 6.0;
    const auto corpus = generate_corpus(spec);
    const auto docs = corpus.verdicts();
    const auto replay = generate_replay(corpus.documents, ReplayBehavior{}, default_prompt_spec());

    PipelineConfig base_cfg;
    base_cfg.method = Method::baseline;
    PipelineConfig adv_cfg;
    adv_cfg.method = Method::advanced;
    const PipelineConfig comb_cfg;
    const auto base = extract_all(docs, Extractor(base_cfg), nullptr);
    const auto adv = extract_all(docs, Extractor(adv_cfg), nullptr);
    ReplayProvider provider(replay.records);
    std::size_t calls = 0;
    const auto comb = extract_all(docs, Extractor(comb_cfg), &provider, &calls);

    std::size_t rule_no_match = 0;
    for (const auto& o : adv) rule_no_match += o.status == Status::no_match ? 1 : 0;
    const double n = static_cast<double>(docs.size());
    const double b = 100.0 * static_cast<double>(count_extracted(base)) / n;
    const double a = 100.0 * static_cast<double>(count_extracted(adv)) / n;
    const double c = 100.0 * static_cast<double>(count_extracted(comb)) / n;
    Verdict v;
    char buf[240];
    std::snprintf(buf, sizeof buf, "baseline %.2f%% (target 40.5 +/- 3), advanced %.2f%%, combined %.2f%%, provider calls %zu, rule no_match %zu", b, a, c,
                  calls, rule_no_match);
    v.detail = buf;
    if (std::abs(b - 40.5) > 3.0) v.fail(std::string("baseline off target: ") + buf);
    if (a < 97.0) v.fail(std::string("advanced below 97%: ") + buf);
    if (c < 99.0 || c <= a) v.fail(std::string("combined below 99% or not above advanced: ") + buf);
    if (calls != rule_no_match || provider.calls() != calls) v.fail(std::string("provider calls differ from rule failures: ") + buf);
    return v;
}

Verdict c6_replays() {
    Verdict v;
    // Difficult cases: answers from a scripted model, regrounded by the pipeline.
    FixtureSpec spec;
    spec.n_docs = 200;
    spec.seed = 606;
    spec.clean_fraction = 0.5;
    spec.noisy_fraction = 0.5;
    const auto corpus = generate_corpus(spec);
    ReplayBehavior hard;
    hard.perfect_fraction = 0.815;
    hard.mutated_fraction = 0.065;
    hard.refuse_fraction = 0.12;
    hard.style = MutationStyle::boundary;
    hard.mutation_bands = {{5, 0.95, 1.0}, {7, 0.80, 0.95}, {1, 0.50, 0.80}};
    hard.seed = 6;
    PipelineConfig llm_cfg;
    llm_cfg.method = Method::llm;
    const Extractor llm(llm_cfg);
    const auto replay = generate_replay(corpus.documents, hard, llm.prompt_spec(), llm_cfg.provider, llm.document_budget());
    ReplayProvider provider(replay.records);
    const auto outcomes = extract_all(corpus.verdicts(), llm, &provider);
    const auto comparisons = compare_all(outcomes, corpus.gold(), Method::llm);
    const auto report = method_report(comparisons, "LLM");
    const auto q = format_percent(report.high_quality(), report.n, 1);
    const auto failed = format_percent(report.count(MatchBand::not_extracted), report.n, 1);
    if (q != "84.0%") v.fail("difficult-case quality >=95% " + q);
    if (failed != "12.0%") v.fail("difficult-case failed " + failed);
    const std::vector<MethodReport> reports{report};
    const auto table = render_band_table(reports);
    if (table.find("84.00%") == std::string::npos || table.find("12.00%") == std::string::npos) v.fail("band table cells missing");

    // Hallucination: raw answers against their sources.
    FixtureSpec hspec;
    hspec.n_docs = 100;
    hspec.seed = 707;
    const auto hcorpus = generate_corpus(hspec);
    ReplayBehavior edits;
    edits.perfect_fraction = 0.26;
    edits.mutated_fraction = 0.74;
    edits.refuse_fraction = 0.0;
    edits.style = MutationStyle::edits;
    edits.mutation_bands = {{71, 0.985, 1.0}, {2, 0.90, 0.95}, {1, 0.80, 0.90}};
    edits.seed = 7;
    const auto hreplay = generate_replay(hcorpus.documents, edits, llm.prompt_spec(), llm_cfg.provider, llm.document_budget());
    ReplayProvider hprovider(hreplay.records);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& fd : hcorpus.documents) {
        const auto prompt = build_prompt(fd.doc, llm.prompt_spec(), llm.document_budget());
        const auto result = llm_extract(fd.doc, prompt, hprovider, llm_cfg.provider);
        if (result.status != LlmStatus::ok) continue;
        const auto answer = parse_model_output(*result.raw_output);
        if (answer) pairs.emplace_back(*answer, fd.doc.raw_text);
    }
    const auto h = hallucination_report(pairs);
    const std::array<std::size_t, 5> want{26, 71, 2, 1, 0};
    if (h.bins != want) {
        std::string got;
        for (auto b : h.bins) got += std::to_string(b) + " ";
        v.fail("hallucination bins " + got);
    }
    if (h.mean < 0.985) v.fail("hallucination mean " + std::to_string(h.mean));
    if (v.pass) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "difficult: quality %s, failed %s; hallucination {26,71,2,1,0}, mean %.4f", q.c_str(), failed.c_str(), h.mean);
        v.detail = buf;
    }
    return v;
}

Verdict c7_tolerant() {
    const auto phrases = default_baseline_phrases();
    std::vector<std::pair<std::string, bool>> all;  // phrase, is start phrase
    for (const auto& p : phrases.start_phrases) all.emplace_back(p, true);
    for (const auto& p : phrases.end_phrases) all.emplace_back(p, false);
    std::mt19937_64 rng(707);
    static const std::u32string breaks[] = {U" ", U"\n", U"  ", U"\r\n", U"\t", U" \n "};
    std::size_t variants = 0, false_negatives = 0, in_document_misses = 0, baseline_hits = 0;
    for (const auto& [phrase, is_start] : all) {
        const auto pattern = compile_tolerant(phrase);
        const auto chars = decode_utf8(phrase).chars;
        for (int t = 0; t < 500; ++t) {
            auto variant = chars;
            const int insertions = std::uniform_int_distribution<int>(1, 5)(rng);
            for (int i = 0; i < insertions; ++i) {
                const auto at = std::uniform_int_distribution<std::size_t>(1, variant.size() - 1)(rng);
                variant.insert(at, breaks[rng() % std::size(breaks)]);
            }
            const auto text = encode_utf8(variant);
            ++variants;
            if (!pattern.matches(text)) ++false_negatives;
            // Whitespace-sensitive matching of this phrase alone, inside a document.
            const std::string doc_text = is_start ? "The defendant " + text + " he took the goods, therefore he is sentenced."
                                                  : "The defendant is found guilty that he took the goods, " + text + " he is sentenced.";
            const VerdictDocument doc{"v", "court", "1T/1/2020", 2020, doc_text, DocumentSource::dump};
            const BaselinePhrases single = is_start ? BaselinePhrases{{phrase}, phrases.end_phrases} : BaselinePhrases{phrases.start_phrases, {phrase}};
            if (baseline_extract(doc, single).extracted()) ++baseline_hits;
            const CompiledMarkers markers(make_marker_set(single.start_phrases, single.end_phrases));
            const auto adv = advanced_extract(doc, markers);
            if (!adv.extracted() || *adv.text != "he took the goods,") ++in_document_misses;
        }
    }
    Verdict v;
    v.detail = std::to_string(all.size()) + " phrases x 500: " + std::to_string(false_negatives) + " false negatives, " + std::to_string(in_document_misses) +
               " in-document misses, baseline matched " + std::to_string(baseline_hits) + "/" + std::to_string(variants);
    if (false_negatives + in_document_misses + baseline_hits != 0) v.fail(v.detail);
    return v;
}

Verdict c8_determinism() {
    FixtureSpec spec;
    spec.n_docs = 300;
    spec.seed = 808;
    spec.clean_fraction = 0.4;
    spec.noisy_fraction = 0.5;
    spec.pathological_fraction = 0.1;
    const auto corpus = generate_corpus(spec);
    const auto docs = corpus.verdicts();
    ReplayBehavior mixed;
    mixed.perfect_fraction = 0.8;
    mixed.mutated_fraction = 0.1;
    mixed.refuse_fraction = 0.1;
    mixed.mutation_bands = {{1, 0.9, 1.0}};
    const PipelineConfig config;
    const auto replay = generate_replay(corpus.documents, mixed, Extractor(config).prompt_spec());
    const auto dir = work_dir();
    const auto a = dir / "run_a.jsonl", b = dir / "run_b.jsonl", r = dir / "run_resumed.jsonl";
    ReplayProvider pa(replay.records), pb(replay.records), pr1(replay.records), pr2(replay.records);
    run_corpus(docs, config, &pa, a);
    PipelineConfig serial = config;
    serial.concurrency_bound = 1;
    run_corpus(docs, serial, &pb, b);
    const auto half = run_corpus(docs, config, &pr1, r, {.resume = false, .stop_after = docs.size() / 2});
    {
        std::ofstream torn(r, std::ios::app | std::ios::binary);
        torn << R"({"doc_id":"interrupted","method":"comb)";
    }
    const auto rest = run_corpus(docs, config, &pr2, r, {.resume = true});
    Verdict v;
    const auto fa = slurp(a);
    if (fa.empty() || fa != slurp(b)) v.fail("two complete runs differ");
    if (fa != slurp(r)) v.fail("resumed run differs from uninterrupted run");
    if (half.processed != docs.size() / 2 || rest.resumed != docs.size() / 2 || !rest.complete) v.fail("resume bookkeeping off");
    if (v.pass) v.detail = std::to_string(docs.size()) + " documents, identical files; resumed " + std::to_string(rest.resumed) + " + " + std::to_string(rest.processed);
    std::filesystem::remove_all(dir);
    return v;
}

Verdict c9_normalization() {
    std::mt19937_64 rng(909);
    const std::u32string alphabet = U"aáäbcčdďeéfghiíjklĺľmnňoóôpqrŕsštťuúvwxyýzžAÁÄČĎÉÍĽŇÓÔŔŠŤÚÝŽ \n\t ";
    std::size_t idempotence = 0, roundtrip = 0, symmetry = 0, bounds = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto raw = oracle::random_string(rng, alphabet, 0, 80);
        const auto n = normalize_text(std::u32string_view(raw));
        if (normalize_text(std::u32string_view(n.folded)).folded != n.folded) ++idempotence;
        if (!n.folded.empty()) {
            std::size_t a = rng() % n.folded.size(), b = rng() % n.folded.size();
            if (a > b) std::swap(a, b);
            ++b;
            const auto r = n.project(a, b);
            const auto again = normalize_text(std::u32string_view(raw).substr(r.start, r.end - r.start)).folded;
            std::u32string expected = n.folded.substr(a, b - a);
            while (!expected.empty() && expected.front() == U' ') expected.erase(expected.begin());
            while (!expected.empty() && expected.back() == U' ') expected.pop_back();
            if (again != expected) ++roundtrip;
        }
        const auto x = encode_utf8(oracle::random_string(rng, alphabet, 0, 60));
        const auto y = encode_utf8(oracle::random_string(rng, alphabet, 0, 60));
        const double sxy = similarity(x, y), syx = similarity(y, x);
        if (sxy != syx) ++symmetry;
        if (!(sxy >= 0.0 && sxy <= 1.0)) ++bounds;
    }
    Verdict v;
    v.detail = "1000 strings/pairs: " + std::to_string(idempotence) + " idempotence, " + std::to_string(roundtrip) + " round-trip, " +
               std::to_string(symmetry) + " symmetry, " + std::to_string(bounds) + " bounds failures";
    if (idempotence + roundtrip + symmetry + bounds != 0) v.fail(v.detail);
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "arithmetic reproduction", 1, c1_arithmetic},   {2, "cost model", 1, c2_cost},
        {3, "verbatim grounding", 60, c3_verbatim},         {4, "oracle equivalence", 120, c4_oracle},
        {5, "regime calibration", 120, c5_calibration},     {6, "replay reproduction", 60, c6_replays},
        {7, "tolerant patterns", 30, c7_tolerant},          {8, "determinism and resume", 120, c8_determinism},
        {9, "normalization properties", 30, c9_normalization},
    };
    int only = 0;
    if (argc > 1 && std::string(argv[1]) != "all") only = std::atoi(argv[1]);
    if (argc > 1 && std::string(argv[1]) != "all" && (only < 1 || only > 9)) {
        std::fprintf(stderr, "usage: factx_acceptance [1-9|all]\n");
        return 2;
    }
    int failures = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.limit_s) v.fail("runtime " + std::to_string(secs) + " s over the " + std::to_string(c.limit_s) + " s limit");
        std::printf("%s  C%d %-26s %7.2fs  %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs, v.detail.c_str());
        std::fflush(stdout);
        failures += v.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
