// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The factx Authors

#ifndef FACTX_EVALUATE_HPP
#define FACTX_EVALUATE_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "factx/align.hpp"
#include "factx/document.hpp"
#include "factx/extract_rules.hpp"
#include "factx/percent.hpp"

namespace factx {

struct GoldAnnotation {
    std::string doc_id;
    std::string gold_text;
    bool present = false;
};

inline nlohmann::json to_json(const GoldAnnotation& g) { return {{"doc_id", g.doc_id}, {"present", g.present}, {"gold_text", g.gold_text}}; }

inline GoldAnnotation gold_from_json(const nlohmann::json& j) {
    GoldAnnotation g;
    g.doc_id = j.at("doc_id").get<std::string>();
    g.present = j.at("present").get<bool>();
    if (j.contains("gold_text") && !j["gold_text"].is_null()) g.gold_text = j["gold_text"].get<std::string>();
    if (g.doc_id.empty()) throw std::invalid_argument("gold annotation without doc_id");
    if (g.present != !g.gold_text.empty()) throw std::invalid_argument("gold annotation " + g.doc_id + ": present must match a non-empty gold_text");
    return g;
}

inline std::vector<GoldAnnotation> load_gold(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open gold file " + path.string());
    std::vector<GoldAnnotation> gold;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": invalid JSON");
        try {
            gold.push_back(gold_from_json(j));
        } catch (const std::exception& e) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return gold;
}

inline std::vector<ExtractionOutcome> load_results(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open results file " + path.string());
    std::vector<ExtractionOutcome> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": invalid JSON");
        try {
            out.push_back(outcome_from_json(j));
        } catch (const std::exception& e) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bands

enum class MatchBand { perfect, exact, high, medium, low, not_extracted };

inline constexpr std::array<MatchBand, 6> kAllBands{MatchBand::perfect, MatchBand::exact, MatchBand::high,
                                                    MatchBand::medium, MatchBand::low, MatchBand::not_extracted};

inline const char* to_string(MatchBand b) {
    switch (b) {
        case MatchBand::perfect: return "perfect";
        case MatchBand::exact: return "exact";
        case MatchBand::high: return "high";
        case MatchBand::medium: return "medium";
        case MatchBand::low: return "low";
        case MatchBand::not_extracted: return "not_extracted";
    }
    return "unknown";
}

inline const char* band_label(MatchBand b) {
    switch (b) {
        case MatchBand::perfect: return "Perfect match (100%)";
        case MatchBand::exact: return "Near-exact match (95-99%)";
        case MatchBand::high: return "High similarity (80-94%)";
        case MatchBand::medium: return "Medium similarity (50-79%)";
        case MatchBand::low: return "Low similarity (<50%)";
        case MatchBand::not_extracted: return "Failed extraction";
    }
    return "unknown";
}

/// Cutoffs are left-inclusive: 0.95 is exact, 0.80 is high, 0.50 is medium.
inline MatchBand band(std::optional<double> score) {
    if (!score) return MatchBand::not_extracted;
    const double s = *score;
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("band: score outside [0,1]");
    if (s == 1.0) return MatchBand::perfect;
    if (s >= 0.95) return MatchBand::exact;
    if (s >= 0.80) return MatchBand::high;
    if (s >= 0.50) return MatchBand::medium;
    return MatchBand::low;
}

// ---------------------------------------------------------------------------
// Comparison

struct Comparison {
    std::string doc_id;
    std::optional<double> score;  // present when something was extracted
    MatchBand band = MatchBand::not_extracted;
    bool gold_present = false;
    bool correct_absence = false;
    std::string diagnostics;

    bool extracted() const noexcept { return score.has_value(); }
};

inline Comparison compare(const ExtractionOutcome& outcome, const GoldAnnotation& gold, Metric metric = Metric::levenshtein) {
    if (outcome.doc_id != gold.doc_id) throw std::invalid_argument("compare: doc_id mismatch (" + outcome.doc_id + " vs " + gold.doc_id + ")");
    Comparison c;
    c.doc_id = gold.doc_id;
    c.gold_present = gold.present;
    const bool extracted = outcome.status == Status::extracted && outcome.text.has_value();
    if (gold.present && extracted) {
        c.score = similarity(*outcome.text, gold.gold_text, metric);
        c.band = band(c.score);
    } else if (gold.present) {
        c.band = MatchBand::not_extracted;
        c.diagnostics = "missed";
    } else if (!extracted) {
        c.band = MatchBand::not_extracted;
        c.correct_absence = true;
        c.diagnostics = "correct_absence";
    } else {
        c.score = 0.0;
        c.band = MatchBand::low;
        c.diagnostics = "spurious";
    }
    return c;
}

inline nlohmann::json to_json(const Comparison& c) {
    return {{"doc_id", c.doc_id},
            {"score", c.score ? nlohmann::json(*c.score) : nlohmann::json(nullptr)},
            {"band", to_string(c.band)},
            {"gold_present", c.gold_present},
            {"correct_absence", c.correct_absence},
            {"diagnostics", c.diagnostics}};
}

/// Pair every gold annotation with the outcome for the same doc_id. A gold
/// document without an outcome counts as not extracted.
inline std::vector<Comparison> compare_all(std::span<const ExtractionOutcome> outcomes, std::span<const GoldAnnotation> gold,
                                           Method method, std::size_t* unmatched_results = nullptr) {
    std::map<std::string, const ExtractionOutcome*> by_id;
    for (const auto& o : outcomes) by_id.emplace(o.doc_id, &o);
    std::vector<Comparison> out;
    out.reserve(gold.size());
    std::size_t matched = 0;
    for (const auto& g : gold) {
        auto it = by_id.find(g.doc_id);
        if (it == by_id.end()) {
            out.push_back(compare(detail::no_match(VerdictDocument{g.doc_id, {}, {}, 0, {}, {}}, method, "missing result"), g));
        } else {
            ++matched;
            out.push_back(compare(*it->second, g));
        }
    }
    if (unmatched_results) *unmatched_results = by_id.size() - matched;
    return out;
}

// ---------------------------------------------------------------------------
// Reports

struct MethodReport {
    std::string method;
    std::size_t n = 0;
    std::size_t extracted = 0;
    double extraction_rate = 0.0;
    double quality_ge_95 = 0.0;
    std::map<MatchBand, std::size_t> band_counts;
    std::size_t correct_absence = 0;
    std::size_t spurious = 0;
    double mean_score = 0.0;  // over extracted documents

    std::size_t count(MatchBand b) const {
        auto it = band_counts.find(b);
        return it == band_counts.end() ? 0 : it->second;
    }
    std::size_t high_quality() const { return count(MatchBand::perfect) + count(MatchBand::exact); }
};

inline MethodReport method_report(std::span<const Comparison> comparisons, std::string method = {}) {
    if (comparisons.empty()) throw std::invalid_argument("method_report: no comparisons");
    MethodReport r;
    r.method = std::move(method);
    r.n = comparisons.size();
    for (auto b : kAllBands) r.band_counts[b] = 0;
    std::vector<double> scores;
    for (const auto& c : comparisons) {
        ++r.band_counts[c.band];
        if (c.correct_absence) ++r.correct_absence;
        if (c.diagnostics == "spurious") ++r.spurious;
        if (c.extracted()) {
            ++r.extracted;
            scores.push_back(*c.score);
        }
    }
    // Sorted summation keeps the report independent of input order.
    std::sort(scores.begin(), scores.end());
    double sum = 0.0;
    for (double s : scores) sum += s;
    r.mean_score = scores.empty() ? 0.0 : sum / static_cast<double>(scores.size());
    r.extraction_rate = static_cast<double>(r.extracted) / static_cast<double>(r.n);
    r.quality_ge_95 = static_cast<double>(r.high_quality()) / static_cast<double>(r.n);
    return r;
}

inline nlohmann::json to_json(const MethodReport& r) {
    nlohmann::json bands = nlohmann::json::object();
    for (const auto& [b, count] : r.band_counts) bands[to_string(b)] = count;
    return {{"method", r.method},
            {"n", r.n},
            {"extracted", r.extracted},
            {"extraction_rate", r.extraction_rate},
            {"quality_ge_95", r.quality_ge_95},
            {"band_counts", bands},
            {"correct_absence", r.correct_absence},
            {"spurious", r.spurious},
            {"mean_score", r.mean_score}};
}

// Similarity bins used for generated-vs-source checks.
inline constexpr std::array<const char*, 5> kHallucinationBins{"100%", "95-99%", "90-94%", "80-89%", "<80%"};

inline std::size_t hallucination_bin(double score) {
    if (score == 1.0) return 0;
    if (score >= 0.95) return 1;
    if (score >= 0.90) return 2;
    if (score >= 0.80) return 3;
    return 4;
}

struct HallucinationReport {
    std::size_t n = 0;
    std::array<std::size_t, 5> bins{};
    double mean = 0.0;
    std::vector<double> scores;  // input order
};

/// Score each generated string against its best-matching span of the source.
inline HallucinationReport hallucination_report(std::span<const std::pair<std::string, std::string>> pairs) {
    if (pairs.empty()) throw std::invalid_argument("hallucination_report: no pairs");
    HallucinationReport r;
    r.n = pairs.size();
    for (const auto& [generated, source] : pairs) {
        const double s = generated.empty() || source.empty() ? 0.0 : locate_span(generated, source).score;
        r.scores.push_back(s);
        ++r.bins[hallucination_bin(s)];
    }
    auto sorted = r.scores;
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (double s : sorted) sum += s;
    r.mean = sum / static_cast<double>(r.n);
    return r;
}

inline nlohmann::json to_json(const HallucinationReport& r) {
    nlohmann::json bins = nlohmann::json::object();
    for (std::size_t i = 0; i < r.bins.size(); ++i) bins[kHallucinationBins[i]] = r.bins[i];
    return {{"n", r.n}, {"bins", bins}, {"mean", r.mean}};
}

// ---------------------------------------------------------------------------
// Plain-text tables

namespace detail {

inline std::string pad(std::string_view s, std::size_t width) {
    std::string out(s);
    const std::size_t len = utf8_length(s);
    if (len < width) out.append(width - len, ' ');
    return out;
}

}  // namespace detail

/// Method, extraction rate and share of extractions with similarity >= 95%.
inline std::string render_method_table(std::span<const MethodReport> reports) {
    std::ostringstream out;
    out << detail::pad("Method", 12) << detail::pad("Extraction Rate", 17) << "Quality >=95%\n";
    for (const auto& r : reports) {
        out << detail::pad(r.method, 12) << detail::pad(format_percent(r.extracted, r.n), 17) << format_percent(r.high_quality(), r.n) << '\n';
    }
    return out.str();
}

/// Band distribution side by side for several methods.
inline std::string render_band_table(std::span<const MethodReport> reports) {
    std::ostringstream out;
    out << detail::pad("Band", 28);
    for (const auto& r : reports) out << detail::pad(r.method, 18);
    out << '\n';
    for (auto b : kAllBands) {
        out << detail::pad(band_label(b), 28);
        for (const auto& r : reports) {
            out << detail::pad(std::to_string(r.count(b)) + " (" + format_percent(r.count(b), r.n) + ")", 18);
        }
        out << '\n';
    }
    out << detail::pad("Total high quality (>=95%)", 28);
    for (const auto& r : reports) out << detail::pad(format_percent(r.high_quality(), r.n), 18);
    out << '\n';
    return out.str();
}

inline std::string render_hallucination_table(const HallucinationReport& r) {
    std::ostringstream out;
    out << detail::pad("Similarity", 12) << detail::pad("Count", 8) << "Share\n";
    for (std::size_t i = 0; i < r.bins.size(); ++i) {
        out << detail::pad(kHallucinationBins[i], 12) << detail::pad(std::to_string(r.bins[i]), 8) << format_percent(r.bins[i], r.n) << '\n';
    }
    out << "Mean similarity: " << std::fixed << std::setprecision(4) << r.mean << '\n';
    return out.str();
}

}  // namespace factx

#endif  // FACTX_EVALUATE_HPP
