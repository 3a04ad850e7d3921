// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The factx Authors

#ifndef FACTX_INGEST_HPP
#define FACTX_INGEST_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "factx/align.hpp"
#include "factx/document.hpp"
#include "factx/percent.hpp"

namespace factx {

using json = nlohmann::json;

struct YearRange {
    int first = 2018;
    int last = 2022;

    bool contains(int year) const noexcept { return year >= first && year <= last; }
};

// ---------------------------------------------------------------------------
// Dump parsing

struct DumpParseResult {
    std::vector<VerdictDocument> documents;
    std::size_t corrupt = 0;       // unparsable or missing required fields
    std::size_t duplicates = 0;    // repeated id, later copies dropped
    std::size_t out_of_range = 0;  // decision year outside the configured range
    std::vector<std::string> problems;
};

namespace detail {

inline std::optional<int> trailing_year(std::string_view docket) {
    for (std::size_t i = docket.size(); i >= 4; --i) {
        auto digits = docket.substr(i - 4, 4);
        bool all = std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; });
        bool bounded = (i == docket.size() || !std::isdigit(static_cast<unsigned char>(docket[i]))) &&
                       (i == 4 || !std::isdigit(static_cast<unsigned char>(docket[i - 5])));
        if (all && bounded) return std::stoi(std::string(digits));
    }
    return std::nullopt;
}

inline const std::string* string_field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) return nullptr;
    return it->get_ptr<const std::string*>();
}

}  // namespace detail

inline json to_json(const VerdictDocument& d) {
    return json{{"id", d.doc_id}, {"court", d.court_name}, {"docket", d.docket_number},
                {"year", d.decision_year}, {"text", d.raw_text}, {"source", to_string(d.source)}};
}

/// Decode one dump record. Returns nullopt with `reason` set when the record is unusable.
inline std::optional<VerdictDocument> document_from_json(const json& j, std::string& reason) {
    if (!j.is_object()) {
        reason = "record is not an object";
        return std::nullopt;
    }
    const auto* text = detail::string_field(j, "text");
    const auto* court = detail::string_field(j, "court");
    const auto* docket = detail::string_field(j, "docket");
    if (text == nullptr || text->empty()) {
        reason = "missing text";
        return std::nullopt;
    }
    if (court == nullptr || docket == nullptr) {
        reason = "missing court or docket";
        return std::nullopt;
    }
    VerdictDocument doc;
    doc.raw_text = *text;
    doc.court_name = *court;
    doc.docket_number = *docket;
    if (const auto* id = detail::string_field(j, "id"); id != nullptr && !id->empty()) {
        doc.doc_id = *id;
    } else if (auto it = j.find("id"); it != j.end() && it->is_number_integer()) {
        doc.doc_id = std::to_string(it->get<long long>());
    } else {
        doc.doc_id = *court + "|" + *docket;
    }
    if (auto it = j.find("year"); it != j.end() && it->is_number_integer()) {
        doc.decision_year = it->get<int>();
    } else if (auto year = detail::trailing_year(*docket)) {
        doc.decision_year = *year;
    } else {
        reason = "missing year";
        return std::nullopt;
    }
    if (const auto* source = detail::string_field(j, "source"); source != nullptr && *source == "api_fetch") {
        doc.source = DocumentSource::api_fetch;
    }
    return doc;
}

/// Parse newline-delimited JSON records. Malformed records are counted, never fatal.
inline DumpParseResult parse_dump(std::istream& in, YearRange years = {}) {
    if (!in) throw IngestError("dump stream is not readable");
    DumpParseResult result;
    std::unordered_map<std::string, bool> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
        const json j = json::parse(line, nullptr, false);
        std::string reason;
        std::optional<VerdictDocument> doc;
        if (j.is_discarded()) {
            reason = "malformed JSON";
        } else {
            doc = document_from_json(j, reason);
        }
        if (!doc) {
            ++result.corrupt;
            result.problems.push_back("line " + std::to_string(line_no) + ": " + reason);
            continue;
        }
        if (!years.contains(doc->decision_year)) {
            ++result.out_of_range;
            result.problems.push_back("line " + std::to_string(line_no) + ": year " + std::to_string(doc->decision_year) +
                                      " outside range");
            continue;
        }
        if (!seen.emplace(doc->doc_id, true).second) {
            ++result.duplicates;
            result.problems.push_back("line " + std::to_string(line_no) + ": duplicate id " + doc->doc_id);
            continue;
        }
        result.documents.push_back(std::move(*doc));
    }
    if (in.bad()) throw IngestError("error while reading dump stream");
    return result;
}

inline DumpParseResult read_dump_file(const std::filesystem::path& path, YearRange years = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open dump " + path.string());
    return parse_dump(in, years);
}

/// A corpus is either a single JSONL file or a directory of them (read in name order).
inline DumpParseResult read_corpus(const std::filesystem::path& path, YearRange years = {}) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(path)) return read_dump_file(path, years);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IngestError("no .jsonl files in corpus directory " + path.string());
    DumpParseResult merged;
    std::unordered_map<std::string, bool> seen;
    for (const auto& file : files) {
        auto part = read_dump_file(file, years);
        merged.corrupt += part.corrupt;
        merged.duplicates += part.duplicates;
        merged.out_of_range += part.out_of_range;
        for (auto& p : part.problems) merged.problems.push_back(file.filename().string() + ": " + p);
        for (auto& doc : part.documents) {
            if (!seen.emplace(doc.doc_id, true).second) {
                ++merged.duplicates;
                continue;
            }
            merged.documents.push_back(std::move(doc));
        }
    }
    return merged;
}

// ---------------------------------------------------------------------------
// Linkage keys

struct KeyError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Canonical docket key: trimmed, whitespace runs collapsed, case-folded and
/// diacritic-folded. Idempotent.
inline std::string normalize_docket(std::string_view raw) {
    auto key = normalize_text(raw).utf8();
    if (key.empty()) throw KeyError("normalize_docket: empty docket number");
    return key;
}

inline std::string normalize_court(std::string_view raw) {
    auto key = normalize_text(raw).utf8();
    if (key.empty()) throw KeyError("normalize_court: empty court name");
    return key;
}

// ---------------------------------------------------------------------------
// Administrative registry

namespace detail {

inline std::vector<std::string> split_delimited(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == delimiter) {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

inline std::string quote_csv(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos) return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    return out + "\"";
}

}  // namespace detail

/// Load a comma- or tab-separated registry; the delimiter is detected from
/// the header line. Duplicate linkage keys are rejected.
inline std::vector<AdminRecord> load_admin(std::istream& in) {
    if (!in) throw IngestError("admin registry stream is not readable");
    std::string header;
    if (!std::getline(in, header)) throw IngestError("admin registry is empty");
    if (header.rfind("\xEF\xBB\xBF", 0) == 0) header.erase(0, 3);
    const char delimiter = header.find('\t') != std::string::npos ? '\t' : ',';
    const auto columns = detail::split_delimited(header, delimiter);
    auto column = [&](std::string_view name) -> std::size_t {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (normalize_text(columns[i]).utf8() == name) return i;
        }
        throw IngestError("admin registry lacks column " + std::string(name));
    };
    const std::size_t docket_col = column("docket_number");
    const std::size_t court_col = column("court_name");
    const std::size_t year_col = column("decision_year");

    std::vector<AdminRecord> records;
    std::unordered_map<std::string, std::size_t> keys;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = detail::split_delimited(line, delimiter);
        const std::size_t needed = std::max({docket_col, court_col, year_col}) + 1;
        if (fields.size() < needed) throw IngestError("admin registry line " + std::to_string(line_no) + ": too few columns");
        AdminRecord record;
        record.docket_number = fields[docket_col];
        record.court_name = fields[court_col];
        try {
            std::size_t used = 0;
            record.decision_year = std::stoi(fields[year_col], &used);
            if (used != fields[year_col].size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw IngestError("admin registry line " + std::to_string(line_no) + ": bad decision_year '" + fields[year_col] + "'");
        }
        std::string key;
        try {
            key = normalize_docket(record.docket_number) + '\x1f' + normalize_court(record.court_name);
        } catch (const KeyError& e) {
            throw IngestError("admin registry line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!keys.emplace(key, records.size()).second) {
            throw IngestError("admin registry line " + std::to_string(line_no) + ": duplicate key (" + record.docket_number + ", " +
                              record.court_name + ")");
        }
        records.push_back(std::move(record));
    }
    return records;
}

inline std::vector<AdminRecord> load_admin_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open admin registry " + path.string());
    return load_admin(in);
}

inline void write_admin(std::ostream& out, std::span<const AdminRecord> records) {
    out << "docket_number,court_name,decision_year\n";
    for (const auto& r : records) {
        out << detail::quote_csv(r.docket_number) << ',' << detail::quote_csv(r.court_name) << ',' << r.decision_year << '\n';
    }
}

// ---------------------------------------------------------------------------
// Linkage

struct CourtCoverage {
    std::size_t attempted = 0;
    std::size_t matched = 0;
    double rate = 0.0;
};

struct LinkageReport {
    std::size_t total_admin = 0;
    std::size_t matched_dump = 0;
    std::size_t matched_api = 0;
    std::size_t unmatched = 0;
    std::map<std::string, CourtCoverage> per_court;

    bool consistent() const {
        if (matched_dump + matched_api + unmatched != total_admin) return false;
        for (const auto& [court, c] : per_court) {
            if (c.matched > c.attempted || c.rate < 0.0 || c.rate > 1.0) return false;
            const double expected = c.attempted == 0 ? 0.0 : static_cast<double>(c.matched) / static_cast<double>(c.attempted);
            if (c.rate != expected) return false;
        }
        return true;
    }
};

inline json to_json(const LinkageReport& r) {
    json courts = json::object();
    for (const auto& [name, c] : r.per_court) {
        courts[name] = {{"attempted", c.attempted}, {"matched", c.matched}, {"rate", c.rate}};
    }
    return json{{"total_admin", r.total_admin}, {"matched_dump", r.matched_dump}, {"matched_api", r.matched_api},
                {"unmatched", r.unmatched}, {"per_court", courts}};
}

inline LinkageReport linkage_report_from_json(const json& j) {
    LinkageReport r;
    r.total_admin = j.at("total_admin").get<std::size_t>();
    r.matched_dump = j.at("matched_dump").get<std::size_t>();
    r.matched_api = j.at("matched_api").get<std::size_t>();
    r.unmatched = j.at("unmatched").get<std::size_t>();
    for (const auto& [name, c] : j.at("per_court").items()) {
        r.per_court[name] = {c.at("attempted").get<std::size_t>(), c.at("matched").get<std::size_t>(), c.at("rate").get<double>()};
    }
    return r;
}

struct LinkedPair {
    std::size_t admin_index = 0;
    std::string doc_id;
};

struct LinkageResult {
    LinkageReport report;
    std::vector<LinkedPair> pairs;         // ordered by admin index
    std::vector<AdminRecord> unmatched;    // registry order
};

/// Match documents to registry rows on (normalized docket, normalized court).
/// When several documents share a key, dump copies win over fetched ones and
/// then the smallest doc_id wins, so the result does not depend on input order.
inline LinkageResult link_corpus(std::span<const VerdictDocument> docs, std::span<const AdminRecord> admin) {
    auto key_of = [](std::string_view docket, std::string_view court) -> std::optional<std::string> {
        try {
            return normalize_docket(docket) + '\x1f' + normalize_court(court);
        } catch (const KeyError&) {
            return std::nullopt;
        }
    };

    std::unordered_map<std::string, std::size_t> admin_by_key;
    for (std::size_t i = 0; i < admin.size(); ++i) {
        auto key = key_of(admin[i].docket_number, admin[i].court_name);
        if (!key) throw IngestError("admin record " + std::to_string(i) + " has an empty key");
        if (!admin_by_key.emplace(*key, i).second) {
            throw IngestError("duplicate admin key (" + admin[i].docket_number + ", " + admin[i].court_name + ")");
        }
    }

    std::vector<const VerdictDocument*> chosen(admin.size(), nullptr);
    for (const auto& doc : docs) {
        auto key = key_of(doc.docket_number, doc.court_name);
        if (!key) continue;
        auto it = admin_by_key.find(*key);
        if (it == admin_by_key.end()) continue;
        const VerdictDocument*& slot = chosen[it->second];
        if (slot == nullptr) {
            slot = &doc;
            continue;
        }
        const bool doc_dump = doc.source == DocumentSource::dump;
        const bool slot_dump = slot->source == DocumentSource::dump;
        if ((doc_dump && !slot_dump) || (doc_dump == slot_dump && doc.doc_id < slot->doc_id)) slot = &doc;
    }

    LinkageResult result;
    auto& report = result.report;
    report.total_admin = admin.size();
    std::map<std::string, std::string> display;  // normalized court -> smallest raw spelling
    std::map<std::string, CourtCoverage> by_norm;
    for (std::size_t i = 0; i < admin.size(); ++i) {
        const auto norm = normalize_court(admin[i].court_name);
        auto [it, inserted] = display.emplace(norm, admin[i].court_name);
        if (!inserted && admin[i].court_name < it->second) it->second = admin[i].court_name;
        auto& court = by_norm[norm];
        ++court.attempted;
        if (chosen[i] == nullptr) {
            ++report.unmatched;
            result.unmatched.push_back(admin[i]);
            continue;
        }
        ++court.matched;
        if (chosen[i]->source == DocumentSource::dump) {
            ++report.matched_dump;
        } else {
            ++report.matched_api;
        }
        result.pairs.push_back({i, chosen[i]->doc_id});
    }
    for (auto& [norm, court] : by_norm) {
        court.rate = static_cast<double>(court.matched) / static_cast<double>(court.attempted);
        report.per_court[display[norm]] = court;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Retrieval of missing documents

enum class FetchStatus { ok, not_found, transport_error, rate_limited };

inline const char* to_string(FetchStatus s) {
    switch (s) {
        case FetchStatus::ok: return "ok";
        case FetchStatus::not_found: return "not_found";
        case FetchStatus::transport_error: return "transport_error";
        case FetchStatus::rate_limited: return "rate_limited";
    }
    return "unknown";
}

struct FetchResponse {
    FetchStatus status = FetchStatus::not_found;
    std::optional<VerdictDocument> document;
    std::string detail;
};

/// Document retrieval backend. Implementations must be safe to call from
/// several threads at once.
class DocumentRetriever {
public:
    virtual ~DocumentRetriever() = default;
    virtual FetchResponse fetch(const AdminRecord& record) = 0;
};

struct SetupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RetrievalConfig {
    std::string endpoint;
    int max_retries = 3;
    std::chrono::milliseconds request_interval{500};
    int max_in_flight = 4;

    void validate() const {
        if (max_retries < 0) throw SetupError("retrieval: max_retries must be >= 0");
        if (request_interval.count() < 0) throw SetupError("retrieval: request_interval must be >= 0");
        if (max_in_flight < 1) throw SetupError("retrieval: max_in_flight must be >= 1");
    }
};

struct FetchFailure {
    AdminRecord record;
    FetchStatus reason = FetchStatus::not_found;
    int attempts = 0;
    std::string detail;
};

struct FetchResult {
    std::vector<VerdictDocument> documents;  // registry order
    std::vector<FetchFailure> failures;      // registry order
    std::size_t requests = 0;
};

/// Query each record at most 1 + max_retries times. `not_found` is final;
/// transport errors and rate limiting are retried after the fixed interval.
inline FetchResult fetch_missing(std::span<const AdminRecord> unmatched, DocumentRetriever& retriever, const RetrievalConfig& config) {
    config.validate();
    FetchResult result;
    if (unmatched.empty()) return result;

    struct Slot {
        std::optional<VerdictDocument> document;
        std::optional<FetchFailure> failure;
        int attempts = 0;
    };
    std::vector<Slot> slots(unmatched.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < unmatched.size(); i = next.fetch_add(1)) {
            const auto& record = unmatched[i];
            auto& slot = slots[i];
            FetchResponse last;
            for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
                if (attempt > 0 && config.request_interval.count() > 0) std::this_thread::sleep_for(config.request_interval);
                ++slot.attempts;
                try {
                    last = retriever.fetch(record);
                } catch (const std::exception& e) {
                    last = {FetchStatus::transport_error, std::nullopt, e.what()};
                }
                if (last.status == FetchStatus::ok && !last.document) {
                    last = {FetchStatus::transport_error, std::nullopt, "ok response without document"};
                }
                if (last.status == FetchStatus::ok || last.status == FetchStatus::not_found) break;
            }
            if (last.status == FetchStatus::ok) {
                VerdictDocument doc = std::move(*last.document);
                doc.source = DocumentSource::api_fetch;
                if (doc.court_name.empty()) doc.court_name = record.court_name;
                if (doc.docket_number.empty()) doc.docket_number = record.docket_number;
                if (doc.decision_year == 0) doc.decision_year = record.decision_year;
                if (doc.doc_id.empty()) doc.doc_id = "api:" + record.court_name + "|" + record.docket_number;
                if (doc.raw_text.empty()) {
                    slot.failure = FetchFailure{record, FetchStatus::not_found, slot.attempts, "empty text"};
                } else {
                    slot.document = std::move(doc);
                }
            } else {
                slot.failure = FetchFailure{record, last.status, slot.attempts, last.detail};
            }
        }
    };

    const auto threads = std::min<std::size_t>(static_cast<std::size_t>(config.max_in_flight), unmatched.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    for (auto& slot : slots) {
        result.requests += static_cast<std::size_t>(slot.attempts);
        if (slot.document) result.documents.push_back(std::move(*slot.document));
        if (slot.failure) result.failures.push_back(std::move(*slot.failure));
    }
    return result;
}

/// Scripted retriever for tests and offline runs. Responses are keyed by
/// normalized (docket, court); a key may carry a queue of transient statuses
/// that are returned before the final answer.
class StubRetriever final : public DocumentRetriever {
public:
    void add_document(VerdictDocument doc) {
        auto key = key_for(doc.docket_number, doc.court_name);
        std::lock_guard lock(mutex_);
        documents_[key] = std::move(doc);
    }

    void add_transient(const AdminRecord& record, FetchStatus status, int times) {
        std::lock_guard lock(mutex_);
        auto& queue = transient_[key_for(record.docket_number, record.court_name)];
        for (int i = 0; i < times; ++i) queue.push_back(status);
    }

    FetchResponse fetch(const AdminRecord& record) override {
        const auto key = key_for(record.docket_number, record.court_name);
        std::lock_guard lock(mutex_);
        ++calls_;
        ++calls_by_key_[key];
        if (auto it = transient_.find(key); it != transient_.end() && !it->second.empty()) {
            const auto status = it->second.front();
            it->second.erase(it->second.begin());
            return {status, std::nullopt, "scripted"};
        }
        if (auto it = documents_.find(key); it != documents_.end()) return {FetchStatus::ok, it->second, {}};
        return {FetchStatus::not_found, std::nullopt, "no such decision"};
    }

    std::size_t calls() const {
        std::lock_guard lock(mutex_);
        return calls_;
    }

    std::size_t calls_for(const AdminRecord& record) const {
        std::lock_guard lock(mutex_);
        auto it = calls_by_key_.find(key_for(record.docket_number, record.court_name));
        return it == calls_by_key_.end() ? 0 : it->second;
    }

private:
    static std::string key_for(std::string_view docket, std::string_view court) {
        return normalize_docket(docket) + '\x1f' + normalize_court(court);
    }

    mutable std::mutex mutex_;
    std::unordered_map<std::string, VerdictDocument> documents_;
    std::unordered_map<std::string, std::vector<FetchStatus>> transient_;
    std::unordered_map<std::string, std::size_t> calls_by_key_;
    std::size_t calls_ = 0;
};

// ---------------------------------------------------------------------------
// Coverage table

struct CoverageOptions {
    std::vector<double> court_thresholds{0.90, 0.60};
    int decimals = 2;
    int unlinked_decimals = 1;
};

/// Number of courts whose match rate is strictly above `threshold`.
inline std::size_t courts_above(const LinkageReport& report, double threshold) {
    return static_cast<std::size_t>(std::count_if(report.per_court.begin(), report.per_court.end(),
                                                  [&](const auto& entry) { return entry.second.rate > threshold; }));
}

inline std::string coverage_report(const LinkageReport& report, const CoverageOptions& options = {}) {
    if (!report.consistent()) throw std::logic_error("coverage_report: linkage report violates its invariants");
    const std::size_t total = report.total_admin;
    const std::size_t linked = report.matched_dump + report.matched_api;
    auto pct = [&](std::size_t n, int decimals) { return total == 0 ? std::string("n/a") : format_percent(n, total, decimals); };

    std::ostringstream out;
    const std::string total_header = "% of " + std::to_string(total);
    out << std::left << std::setw(46) << "Download / linkage step" << std::right << std::setw(10) << "n cases" << std::setw(14)
        << total_header << '\n';
    out << std::string(70, '-') << '\n';
    auto row = [&](std::string_view label, std::size_t n, int decimals) {
        out << std::left << std::setw(46) << label << std::right << std::setw(10) << n << std::setw(14) << pct(n, decimals) << '\n';
    };
    row("JSON dump (direct match)", report.matched_dump, options.decimals);
    row("API re-download (matched via docket number)", report.matched_api, options.decimals);
    out << std::string(70, '-') << '\n';
    row("Linked total", linked, options.decimals);
    row("Not linked (missing / corrupt / API errors)", report.unmatched, options.unlinked_decimals);
    out << std::string(70, '-') << '\n';
    for (double threshold : options.court_thresholds) {
        out << "Courts with success rate above " << format_percent(static_cast<std::uint64_t>(threshold * 1000 + 0.5), 1000, 0)
            << ": " << courts_above(report, threshold) << '/' << report.per_court.size() << '\n';
    }
    return out.str();
}

}  // namespace factx

#endif  // FACTX_INGEST_HPP
