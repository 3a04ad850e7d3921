// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The factx Authors

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <sstream>

#include "factx/fixtures.hpp"
#include "factx/ingest.hpp"
#include "factx/percent.hpp"
#include "oracles.hpp"

using namespace factx;

namespace {

std::string record(const std::string& id, const std::string& docket, const std::string& text = "Some decision text.") {
    return nlohmann::json{{"id", id}, {"court", "Okresný súd Nitra"}, {"docket", docket}, {"year", 2020}, {"text", text}}.dump();
}

std::vector<AdminRecord> admin_from(const std::string& csv) {
    std::istringstream in(csv);
    return load_admin(in);
}

}  // namespace

TEST_CASE("parse_dump keeps good records and counts bad ones") {
    std::istringstream three(record("a", "1T/1/2020") + "\n" + record("b", "1T/2/2020") + "\n" + record("c", "1T/3/2020") + "\n");
    auto r = parse_dump(three);
    CHECK(r.documents.size() == 3);
    CHECK(r.corrupt == 0);

    nlohmann::json no_text{{"id", "x"}, {"court", "c"}, {"docket", "d"}, {"year", 2020}};
    std::istringstream one_bad(record("a", "1T/1/2020") + "\n" + no_text.dump() + "\n" + record("c", "1T/3/2020") + "\n");
    r = parse_dump(one_bad);
    CHECK(r.documents.size() == 2);
    CHECK(r.corrupt == 1);

    std::istringstream other(record("a", "1T/1/2020") + "\n{broken\n\n" + record("a", "1T/1/2020") + "\n");
    r = parse_dump(other);
    CHECK(r.documents.size() == 1);
    CHECK(r.corrupt == 1);
    CHECK(r.duplicates == 1);
    CHECK(r.documents[0].source == DocumentSource::dump);
}

TEST_CASE("parse_dump applies the year range") {
    nlohmann::json old{{"id", "o"}, {"court", "c"}, {"docket", "1T/1/2015"}, {"year", 2015}, {"text", "t"}};
    std::istringstream in(old.dump() + "\n" + record("a", "1T/1/2020") + "\n");
    const auto r = parse_dump(in);
    CHECK(r.documents.size() == 1);
    CHECK(r.out_of_range == 1);
}

TEST_CASE("fixture dump with truncated records") {
    FixtureSpec spec;
    spec.n_docs = 45;
    spec.truncated_records = 5;
    spec.seed = 50;
    const auto corpus = generate_corpus(spec);
    const auto lines = render_dump(corpus);
    REQUIRE(lines.size() == 50);
    std::ostringstream joined;
    for (const auto& l : lines) joined << l << '\n';
    std::istringstream in(joined.str());
    const auto r = parse_dump(in);
    CHECK(r.documents.size() == 45);
    CHECK(r.corrupt == 5);
}

TEST_CASE("normalize_docket") {
    CHECK(normalize_docket("2T/45/2020") == "2t/45/2020");
    CHECK(normalize_docket("  2T /45/ 2020 ") == "2t /45/ 2020");
    CHECK_THROWS_AS(normalize_docket(""), KeyError);
    CHECK_THROWS_AS(normalize_docket("   "), KeyError);
    std::mt19937_64 rng(23);
    for (int t = 0; t < 1000; ++t) {
        const auto raw = encode_utf8(oracle::random_string(rng, U"0123456789TtSsČč/ \t\nÁá-", 1, 25));
        std::string once;
        try {
            once = normalize_docket(raw);
        } catch (const KeyError&) {
            continue;
        }
        CHECK(normalize_docket(once) == once);
    }
}

TEST_CASE("admin registry loading") {
    const auto comma = admin_from("docket_number,court_name,decision_year\n1T/1/2020,Okresný súd Nitra,2020\n\"2T/2/2021\",\"Súd, Trnava\",2021\n");
    REQUIRE(comma.size() == 2);
    CHECK(comma[1].court_name == "Súd, Trnava");
    const auto tab = admin_from("court_name\tdecision_year\tdocket_number\nSúd A\t2019\t3T/3/2019\n");
    REQUIRE(tab.size() == 1);
    CHECK(tab[0].docket_number == "3T/3/2019");
    CHECK(tab[0].decision_year == 2019);
    CHECK_THROWS_AS(admin_from("docket_number,court_name,decision_year\n1T/1/2020,Súd,2020\n1t/1/2020 ,SÚD,2020\n"), IngestError);
    CHECK_THROWS_AS(admin_from("docket,court\n1,2\n"), IngestError);
    CHECK_THROWS_AS(admin_from("docket_number,court_name,decision_year\n1T/1/2020,Súd,20x0\n"), IngestError);
}

TEST_CASE("link_corpus basic cases") {
    const std::vector<AdminRecord> admin{{"1T/1/2020", "Súd A", 2020}, {"1T/2/2020", "Súd A", 2020}, {"1T/3/2020", "Súd B", 2020}};
    auto empty = link_corpus({}, admin);
    CHECK(empty.report.unmatched == 3);
    CHECK(empty.report.consistent());

    std::vector<VerdictDocument> docs{
        {"d1", "SÚD  A", " 1t/1/2020", 2020, "text", DocumentSource::dump},
        {"d2", "Súd B", "1T/3/2020", 2020, "text", DocumentSource::dump},
        {"d3", "Súd B", "1T/3/2020", 2020, "text", DocumentSource::dump},  // same key: one admin row, one document
        {"d4", "Súd C", "9T/9/2020", 2020, "text", DocumentSource::dump},
    };
    const auto linked = link_corpus(docs, admin);
    CHECK(linked.report.matched_dump == 2);
    CHECK(linked.report.unmatched == 1);
    CHECK(linked.report.consistent());
    REQUIRE(linked.pairs.size() == 2);
    CHECK(linked.pairs[0].doc_id == "d1");
    CHECK(linked.pairs[1].doc_id == "d2");
    REQUIRE(linked.unmatched.size() == 1);
    CHECK(linked.unmatched[0].docket_number == "1T/2/2020");
    CHECK(linked.report.per_court.at("Súd A").rate == 0.5);

    std::vector<AdminRecord> dup{{"1T/1/2020", "Súd A", 2020}, {"1t/1/2020", "súd a", 2020}};
    CHECK_THROWS_AS(link_corpus(docs, dup), IngestError);
}

TEST_CASE("link_corpus on a fixture with planted matches, order independent") {
    FixtureSpec spec;
    spec.n_docs = 78;
    spec.unlinked_admin = 22;
    spec.seed = 78;
    const auto corpus = generate_corpus(spec);
    REQUIRE(corpus.admin.size() == 100);
    const auto docs = corpus.verdicts();
    const auto r = link_corpus(docs, corpus.admin);
    CHECK(r.report.matched_dump == 78);
    CHECK(r.report.unmatched == 22);
    CHECK(r.report.consistent());

    auto docs2 = docs;
    auto admin2 = corpus.admin;
    std::mt19937_64 rng(1);
    std::shuffle(docs2.begin(), docs2.end(), rng);
    std::shuffle(admin2.begin(), admin2.end(), rng);
    const auto r2 = link_corpus(docs2, admin2);
    CHECK(to_json(r2.report) == to_json(r.report));
}

TEST_CASE("linkage percentages from registry counts") {
    CHECK(format_percent(15'742, 126'795) == "12.42%");
    CHECK(format_percent(13'931, 126'795, 1) == "11.0%");
    CHECK(format_percent(98'500, 126'795) == "77.68%");
    CHECK(format_percent(1, 8) == "12.50%");
    CHECK(format_percent(1, 3) == "33.33%");
    CHECK(format_percent(2, 3) == "66.67%");
    CHECK(format_percent(1, 800) == "0.13%");  // 0.125 rounds half up
    CHECK(format_percent(7, 7) == "100.00%");
    CHECK_THROWS(format_percent(1, 0));
}

TEST_CASE("fetch_missing with a stub retriever") {
    StubRetriever stub;
    RetrievalConfig config;
    config.request_interval = std::chrono::milliseconds(0);
    auto none = fetch_missing({}, stub, config);
    CHECK(none.documents.empty());
    CHECK(stub.calls() == 0);

    std::vector<AdminRecord> missing;
    for (int i = 0; i < 16; ++i) missing.push_back({"5T/" + std::to_string(i) + "/2021", "Súd D", 2021});
    for (int i = 0; i < 12; ++i) {
        stub.add_document({"", "Súd D", "5T/" + std::to_string(i) + "/2021", 2021, "fetched text", DocumentSource::dump});
    }
    const auto r = fetch_missing(missing, stub, config);
    CHECK(r.documents.size() == 12);
    REQUIRE(r.failures.size() == 4);
    for (const auto& f : r.failures) CHECK(f.reason == FetchStatus::not_found);
    for (const auto& d : r.documents) CHECK(d.source == DocumentSource::api_fetch);
    CHECK(r.requests == 16);
}

TEST_CASE("fetch_missing retries transient errors at most max_retries times") {
    StubRetriever stub;
    RetrievalConfig config;
    config.request_interval = std::chrono::milliseconds(0);
    config.max_retries = 2;
    const AdminRecord flaky{"1T/1/2020", "Súd", 2020};
    const AdminRecord hopeless{"1T/2/2020", "Súd", 2020};
    stub.add_document({"", "Súd", "1T/1/2020", 2020, "text", DocumentSource::dump});
    stub.add_transient(flaky, FetchStatus::rate_limited, 2);
    stub.add_transient(hopeless, FetchStatus::transport_error, 10);
    const std::vector<AdminRecord> records{flaky, hopeless};
    const auto r = fetch_missing(records, stub, config);
    CHECK(r.documents.size() == 1);
    REQUIRE(r.failures.size() == 1);
    CHECK(r.failures[0].reason == FetchStatus::transport_error);
    CHECK(stub.calls_for(flaky) == 3);
    CHECK(stub.calls_for(hopeless) == 3);

    RetrievalConfig bad;
    bad.max_retries = -1;
    CHECK_THROWS_AS(fetch_missing(records, stub, bad), SetupError);
}

TEST_CASE("fetched documents count as API matches") {
    const std::vector<AdminRecord> admin{{"1T/1/2020", "Súd A", 2020}, {"1T/2/2020", "Súd A", 2020}};
    std::vector<VerdictDocument> docs{{"d1", "Súd A", "1T/1/2020", 2020, "t", DocumentSource::dump},
                                      {"api1", "Súd A", "1T/2/2020", 2020, "t", DocumentSource::api_fetch}};
    const auto r = link_corpus(docs, admin);
    CHECK(r.report.matched_dump == 1);
    CHECK(r.report.matched_api == 1);
    CHECK(r.report.unmatched == 0);
}

TEST_CASE("coverage_report rows and court thresholds") {
    LinkageReport full;
    full.total_admin = 5;
    full.matched_dump = 5;
    full.per_court["A"] = {5, 5, 1.0};
    CHECK(coverage_report(full).find("100.00%") != std::string::npos);

    LinkageReport r;
    for (int c = 0; c < 54; ++c) {
        const std::size_t matched = c < 40 ? 100 : 80;
        r.per_court["Court " + std::to_string(c)] = {100, matched, static_cast<double>(matched) / 100.0};
        r.total_admin += 100;
        r.matched_dump += matched;
    }
    r.unmatched = r.total_admin - r.matched_dump;
    const auto text = coverage_report(r);
    CHECK(text.find("above 90%: 40/54") != std::string::npos);
    CHECK(text.find("above 60%: 54/54") != std::string::npos);

    LinkageReport reference;
    reference.total_admin = 126'795;
    reference.matched_dump = 112'864;
    reference.unmatched = 13'931;
    const auto t = coverage_report(reference);
    CHECK(t.find("89.01%") != std::string::npos);
    CHECK(t.find("11.0%") != std::string::npos);

    LinkageReport broken = reference;
    broken.unmatched = 1;
    CHECK_THROWS(coverage_report(broken));
}
