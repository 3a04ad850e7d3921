// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The factx Authors

#ifndef FACTX_FIXTURES_HPP
#define FACTX_FIXTURES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "factx/align.hpp"
#include "factx/document.hpp"
#include "factx/evaluate.hpp"
#include "factx/extract_llm.hpp"
#include "factx/ingest.hpp"
#include "factx/sparing.hpp"
#include "factx/text.hpp"

namespace factx {

struct FixtureSpecError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Seeded randomness. Integer draws avoid std::uniform_int_distribution so the
// output is identical across standard libraries.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

class FixtureRng {
public:
    explicit FixtureRng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("FixtureRng::below(0)");
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % n;
    }

    /// Uniform integer in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) { return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1)); }

    /// Uniform in [0, 1) with 53 bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return unit() < p; }

    template <class T>
    const T& pick(const std::vector<T>& items) {
        return items[static_cast<std::size_t>(below(items.size()))];
    }

    template <class T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[static_cast<std::size_t>(below(i))]);
    }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Exact integer counts for fractions of n (largest remainder, ties to the lower index).
inline std::vector<std::size_t> allocate_counts(std::size_t n, std::span<const double> fractions) {
    std::vector<std::size_t> counts(fractions.size());
    std::vector<std::pair<double, std::size_t>> rest;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        const double quota = fractions[i] * static_cast<double>(n);
        counts[i] = static_cast<std::size_t>(std::floor(quota + 1e-9));
        assigned += counts[i];
        rest.emplace_back(quota - static_cast<double>(counts[i]), i);
    }
    std::stable_sort(rest.begin(), rest.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < n && k < rest.size(); ++k, ++assigned) ++counts[rest[k].second];
    return counts;
}

// ---------------------------------------------------------------------------
// Phrase inventories

struct LanguageProfile {
    std::string name;
    std::vector<std::string> start_phrases;
    std::vector<std::string> end_phrases;
    std::string heading_judgment;
    std::string heading_republic;
    std::string heading_reasoning;
    std::string heading_appeal;
    std::string court_prefix;
    std::string docket_label;
    std::vector<std::string> towns;
    std::vector<std::string> streets;
    std::vector<std::string> first_names;
    std::vector<std::string> surnames;
    std::vector<std::string> months;
    std::vector<std::string> acts;        // {object} {victim} {town}
    std::vector<std::string> objects;     // {amount}
    std::vector<std::string> extras;
    std::vector<std::string> offences;
    std::vector<std::string> sentences;   // {n} {m} {amount}
    std::vector<std::string> reasoning;   // {victim} {n}
    std::vector<std::string> responsible_intros;  // marker-free openings, {name}
    std::string fact_opening;   // {day} {month} {year} {hh} {mm} {town} {street} {num}
    std::string damage_clause;  // {victim} {amount}
    std::string chain_word;     // joins further acts
    std::string intro;          // {court} {judge} {name} {born} {town} {street} {num} {offence} {section} {hearing}
    std::string defendant_line; // {name}
    std::string qualification;  // {offence} {section} {paragraph}
    std::string sentence_line;  // {sentence}
    std::string acquittal;      // {name} {offence} {section}
    std::string appeal;
    std::string signature;      // {town} {date} {judge}
};

inline const LanguageProfile& english_profile() {
    static const LanguageProfile p{
        "en",
        {"is found guilty that", "is found guilty", "they are guilty that", "is acknowledged as guilty that", "is acknowledged guilty that"},
        {"therefore", "thus"},
        "J U D G M E N T",
        "I N   T H E   N A M E   O F   T H E   S L O V A K   R E P U B L I C",
        "R E A S O N I N G",
        "I N S T R U C T I O N   O N   A P P E A L",
        "District Court",
        "Docket No.:",
        {"Trnava", "Žilina", "Košice", "Nitra", "Prešov", "Martin", "Poprad", "Senica", "Piešťany", "Levice", "Zvolen", "Šaľa", "Trenčín", "Banská Bystrica"},
        {"Hlavná", "Štúrova", "Mierová", "Záhradná", "Športová", "Nová", "Krátka", "Dlhá", "Hviezdoslavova", "Ružová"},
        {"Ján", "Peter", "Michal", "Lukáš", "Tomáš", "Marek", "Jozef", "Martin", "Ľubomír", "Štefan", "Dušan", "Radoslav", "Igor", "Matúš"},
        {"Novák", "Kováč", "Horváth", "Varga", "Tóth", "Baláž", "Szabó", "Molnár", "Lukáč", "Šimko", "Kráľ", "Hudák", "Oravec", "Čech", "Ďurica"},
        {"January", "February", "March", "April", "May", "June", "July", "August", "September", "October", "November", "December"},
        {"he entered the family house of the injured party {victim} through the unlocked back door and took {object}",
         "he broke the lock on the garage door with his own tool and removed {object}",
         "he removed {object} from the parked motor vehicle after breaking its side window",
         "he took {object} from the counter of the shop without paying for it",
         "he struck the injured party {victim} several times in the face with his fist, causing injuries that required medical treatment",
         "he threatened the injured party {victim} with the kitchen knife, saying that he would kill her, which caused her justified fear",
         "he drove the passenger car along the public road while under the influence of alcohol, with the breath test showing 1.2 per mille",
         "he forged the signature of the injured party {victim} on the loan agreement and obtained {object}",
         "he persuaded the injured party {victim} to transfer {object} to his bank account, claiming false facts about his financial situation",
         "he climbed over the fence of the construction site in {town} and carried away {object}"},
        {"the mobile phone of the brand Samsung", "the bicycle of the brand Author", "cash in the amount of EUR {amount}", "the laptop computer of the brand Lenovo",
         "the gold necklace with the pendant", "power tools of the brand Makita", "the catalytic converter", "two bottles of spirits", "the wallet with personal documents",
         "building material worth EUR {amount}"},
        {"after which he left the scene on foot", "while the injured party was not present", "despite being warned by the neighbour",
         "and later sold the items to an unknown person", "with the intention of keeping the items for himself", "during the night hours when the street was empty",
         "even though he had been convicted for similar conduct in the past", "which was recorded by the security camera"},
        {"theft", "burglary", "fraud", "bodily harm", "dangerous threatening", "endangering under the influence of an addictive substance", "forgery of documents", "violation of domestic freedom"},
        {"imprisonment for the term of {n} months, conditionally suspended for the probation period of {m} months",
         "community service in the extent of {n} hours", "the monetary penalty of EUR {amount}", "imprisonment for the term of {n} months, to be served in the minimum security prison"},
        {"The court took evidence by hearing the defendant, the injured party {victim} and {n} witnesses, and by reading the documentary evidence.",
         "The defendant admitted the act in full and expressed regret for his conduct.",
         "On the basis of the evidence taken, the court considered the act to be reliably proven.",
         "When deciding on the type and length of the penalty, the court took into account the criminal record of the defendant and his personal circumstances.",
         "The injured party {victim} joined the criminal proceedings with the claim for damages, which the court referred to civil proceedings.",
         "The expert opinion on the value of the property was read at the main hearing without objection from the parties.",
         "The court did not find any circumstances excluding the criminal liability of the defendant.",
         "The statements of the witnesses were consistent with each other and with the documentary evidence."},
        {"The defendant {name} is held responsible for the following conduct:", "The court holds the defendant {name} liable for the following act:",
         "The defendant {name} committed the following act:"},
        "on {day} {month} {year} at around {hh}:{mm} in {town}, at {street} street number {num},",
        ", causing damage to the injured party {victim} in the amount of EUR {amount}",
        ", and subsequently",
        "The {court}, by the single judge {judge}, in the criminal matter against the defendant {name}, born on {born} in {town}, residing at {street} {num}, {town}, "
        "for the offence of {offence} under Section {section} of the Criminal Code, at the main hearing held on {hearing}, has decided as follows:",
        "The defendant {name}",
        "committed the offence of {offence} under Section {section} paragraph {paragraph} of the Criminal Code,",
        "and is sentenced to {sentence}.",
        "The defendant {name} is acquitted of the charge for the offence of {offence} under Section {section} of the Criminal Code, because it has not been proven "
        "that the act was committed by the defendant.",
        "The parties may lodge an appeal against this judgment within fifteen days of its delivery, with the court that issued the judgment. "
        "The appeal shall state the points of the judgment that are challenged and the defects of the proceedings.",
        "{town}, {date}\n{judge}, judge",
    };
    return p;
}

inline const LanguageProfile& slovak_profile() {
    static const LanguageProfile p{
        "sk",
        {"je vinný, že", "sú vinní, že", "je uznaný za vinného, že"},
        {"teda", "tak"},
        "R O Z S U D O K",
        "V   M E N E   S L O V E N S K E J   R E P U B L I K Y",
        "O D Ô V O D N E N I E",
        "P O U Č E N I E",
        "Okresný súd",
        "Spisová značka:",
        {"Trnava", "Žilina", "Košice", "Nitra", "Prešov", "Martin", "Poprad", "Senica", "Piešťany", "Levice", "Zvolen", "Šaľa", "Trenčín"},
        {"Hlavná", "Štúrova", "Mierová", "Záhradná", "Športová", "Nová", "Krátka", "Dlhá", "Ružová"},
        {"Ján", "Peter", "Michal", "Lukáš", "Tomáš", "Marek", "Jozef", "Martin", "Ľubomír", "Štefan", "Dušan", "Matúš"},
        {"Novák", "Kováč", "Horváth", "Varga", "Tóth", "Baláž", "Molnár", "Lukáč", "Šimko", "Kráľ", "Hudák", "Oravec", "Čech"},
        {"januára", "februára", "marca", "apríla", "mája", "júna", "júla", "augusta", "septembra", "októbra", "novembra", "decembra"},
        {"vnikol zadnými dverami do rodinného domu poškodeného {victim} odkiaľ zobral {object}",
         "vlastným náradím poškodil zámok na dverách garáže odkiaľ odcudzil {object}",
         "po rozbití bočného okna zaparkovaného motorového vozidla odcudzil {object}",
         "zobral zo pulta predajne {object} bez toho, aby ho zaplatil",
         "opakovane udrel poškodeného {victim} päsťou do tváre, pričom mu spôsobil zranenia vyžadujúce lekárske ošetrenie",
         "viedol osobné motorové vozidlo po verejnej ceste pod vplyvom alkoholu",
         "sfalšoval podpis poškodeného {victim} na zmluve pôvodne uzavretej medzi nimi, následne získal {object}",
         "prelozil oplotenie staveniska pri meste {town} odkiaľ odniesol {object}"},
        {"mobilný telefón značky Samsung", "bicykel značky Author", "finančnú hotovosť vo výške {amount} eur", "notebook značky Lenovo",
         "zlatú retiazku", "elektrické náradie značky Makita", "katalyzátor", "peňaženku osobnými dokladmi"},
        {"následne ušiel miesta činu", "hoci poškodený nebol prítomný", "napriek upozorneniu suseda", "pričom vec neskôr predal neznámej osobe",
         "počas nočných hodín", "hoci bol pre podobné konanie predtým odsúdený"},
        {"krádeže", "porušovania domovej slobody", "podvodu", "ublíženia na zdraví", "nebezpečného vyhrážania", "ohrozenia pod vplyvom návykovej látky"},
        {"trest odňatia slobody vo výmere {n} mesiacov, ktorého výkon sa podmienečne odkladá na skúšobnú dobu {m} mesiacov",
         "trest povinnej práce vo výmere {n} hodín", "peňažný trest vo výške {amount} eur"},
        {"Súd vykonal dokazovanie výsluchom obžalovaného, poškodeného {victim} ako aj {n} svedkov, ďalej oboznámením listinných dôkazov.",
         "Obžalovaný sklonil svoje konanie bez výhrad, pričom ho úprimne ľutoval.",
         "Na základe vykonaného dokazovania mal súd skutok spoľahlivo preukázaný.",
         "Pri rozhodovaní druhu ako aj výmere trestu súd prihliadol na osobu obžalovaného.",
         "Poškodený {victim} sa pripojil nárokom na náhradu škody, ktorý súd odkázal na občianske súdne konanie."},
        {"Obžalovaný {name} zodpovedá za nasledujúce konanie:", "Obžalovaný {name} spáchal nasledujúci skutok:"},
        "dňa {day}. {month} {year} okolo {hh}:{mm} hod. na ulici {street} číslo {num} pri meste {town},",
        ", pričom spôsobil poškodenému {victim} škodu vo výške {amount} eur",
        ", následne",
        "{court} samosudcom {judge} trestnej veci proti obžalovanému {name}, nar. {born}, trvale bytom {street} {num}, {town}, "
        "pre prečin {offence} podľa § {section} Trestného zákona, na hlavnom pojednávaní konanom dňa {hearing}, takto rozhodol:",
        "Obžalovaný {name}",
        "spáchal prečin {offence} podľa § {section} ods. {paragraph} Trestného zákona,",
        "za čo sa mu ukladá {sentence}.",
        "Obžalovaný {name} sa oslobodzuje spod obžaloby pre prečin {offence} podľa § {section} Trestného zákona, pretože nebolo dokázané, že skutok spáchal obžalovaný.",
        "Proti tomuto rozsudku možno podať odvolanie do pätnástich dní odo dňa jeho doručenia na súde, ktorý rozsudok vydal.",
        "{town}, {date}\n{judge}, sudca",
    };
    return p;
}

inline const LanguageProfile& language_profile(std::string_view name) {
    if (name == "en") return english_profile();
    if (name == "sk") return slovak_profile();
    throw FixtureSpecError("unknown language profile '" + std::string(name) + "'");
}

inline MarkerSet profile_marker_set(const LanguageProfile& profile) { return make_marker_set(profile.start_phrases, profile.end_phrases); }

// ---------------------------------------------------------------------------
// Corpus specification

struct FixtureSpec {
    std::size_t n_docs = 100;
    std::uint64_t seed = 1;
    double clean_fraction = 1.0;
    double noisy_fraction = 0.0;
    double pathological_fraction = 0.0;
    double absent_fact_fraction = 0.5;  // share of pathological documents with no fact at all
    double end_noise_fraction = 0.25;   // share of noisy documents whose end marker is broken
    std::string language_profile = "en";
    std::size_t corrupt_records = 0;     // garbage lines in the rendered dump
    std::size_t truncated_records = 0;   // cut-off records of extra documents
    std::size_t unlinked_admin = 0;      // registry rows with no document

    void validate() const {
        for (double f : {clean_fraction, noisy_fraction, pathological_fraction, absent_fact_fraction, end_noise_fraction}) {
            if (!(f >= 0.0 && f <= 1.0)) throw FixtureSpecError("fixture spec: fractions must lie in [0,1]");
        }
        if (std::abs(clean_fraction + noisy_fraction + pathological_fraction - 1.0) > 1e-9) {
            throw FixtureSpecError("fixture spec: clean, noisy and pathological fractions must sum to 1");
        }
        if (n_docs == 0) throw FixtureSpecError("fixture spec: n_docs must be positive");
        language_profile_checked();
    }

private:
    void language_profile_checked() const { (void)factx::language_profile(language_profile); }
};

inline nlohmann::json to_json(const FixtureSpec& s) {
    return {{"n_docs", s.n_docs},
            {"seed", s.seed},
            {"clean_fraction", s.clean_fraction},
            {"noisy_fraction", s.noisy_fraction},
            {"pathological_fraction", s.pathological_fraction},
            {"absent_fact_fraction", s.absent_fact_fraction},
            {"end_noise_fraction", s.end_noise_fraction},
            {"language_profile", s.language_profile},
            {"corrupt_records", s.corrupt_records},
            {"truncated_records", s.truncated_records},
            {"unlinked_admin", s.unlinked_admin}};
}

inline FixtureSpec fixture_spec_from_json(const nlohmann::json& j) {
    FixtureSpec s;
    try {
        s.n_docs = j.value("n_docs", s.n_docs);
        s.seed = j.value("seed", s.seed);
        s.clean_fraction = j.value("clean_fraction", s.clean_fraction);
        s.noisy_fraction = j.value("noisy_fraction", s.noisy_fraction);
        s.pathological_fraction = j.value("pathological_fraction", s.pathological_fraction);
        s.absent_fact_fraction = j.value("absent_fact_fraction", s.absent_fact_fraction);
        s.end_noise_fraction = j.value("end_noise_fraction", s.end_noise_fraction);
        s.language_profile = j.value("language_profile", s.language_profile);
        s.corrupt_records = j.value("corrupt_records", s.corrupt_records);
        s.truncated_records = j.value("truncated_records", s.truncated_records);
        s.unlinked_admin = j.value("unlinked_admin", s.unlinked_admin);
    } catch (const nlohmann::json::exception& e) {
        throw FixtureSpecError(std::string("fixture spec: ") + e.what());
    }
    s.validate();
    return s;
}

enum class FixtureKind { clean, noisy, pathological_fact, pathological_absent };

inline const char* to_string(FixtureKind k) {
    switch (k) {
        case FixtureKind::clean: return "clean";
        case FixtureKind::noisy: return "noisy";
        case FixtureKind::pathological_fact: return "pathological_fact";
        case FixtureKind::pathological_absent: return "pathological_absent";
    }
    return "unknown";
}

struct PlantedHeader {
    std::size_t start_offset = 0;
    std::size_t end_offset = 0;
    std::string collapsed;
};

struct FixtureDocument {
    VerdictDocument doc;
    GoldAnnotation gold;
    FixtureKind kind = FixtureKind::clean;
    std::optional<CharRange> gold_span;  // code points into doc.raw_text
    std::string start_phrase;            // as written, possibly broken
    std::string end_phrase;
    std::string noise;                   // description of the planted break
    std::vector<PlantedHeader> headers;
};

struct FixtureCorpus {
    FixtureSpec spec;
    std::vector<FixtureDocument> documents;
    std::vector<VerdictDocument> truncated_extras;
    std::vector<AdminRecord> admin;

    std::vector<VerdictDocument> verdicts() const {
        std::vector<VerdictDocument> out;
        out.reserve(documents.size());
        for (const auto& d : documents) out.push_back(d.doc);
        return out;
    }
    std::vector<GoldAnnotation> gold() const {
        std::vector<GoldAnnotation> out;
        out.reserve(documents.size());
        for (const auto& d : documents) out.push_back(d.gold);
        return out;
    }
};

namespace detail {

inline void replace_all(std::string& s, std::string_view key, std::string_view value) {
    for (std::size_t pos = s.find(key); pos != std::string::npos; pos = s.find(key, pos + value.size())) s.replace(pos, key.size(), value);
}

// Append-only text builder that tracks code-point length.
struct TextBuilder {
    std::string text;
    std::size_t length = 0;

    std::size_t append(std::string_view s) {
        const std::size_t at = length;
        text += s;
        length += utf8_length(s);
        return at;
    }
};

inline std::string person(FixtureRng& rng, const LanguageProfile& p) { return rng.pick(p.first_names) + " " + rng.pick(p.surnames); }

inline std::string date_text(FixtureRng& rng, const LanguageProfile& p, int year) {
    const auto day = rng.between(1, 28);
    const auto& month = p.months[static_cast<std::size_t>(rng.below(12))];
    return p.name == "sk" ? std::to_string(day) + ". " + month + " " + std::to_string(year) : std::to_string(day) + " " + month + " " + std::to_string(year);
}

inline std::string two_digits(std::int64_t v) { return (v < 10 ? "0" : "") + std::to_string(v); }

inline std::string fill(std::string t, FixtureRng& rng, const LanguageProfile& p, const std::string& victim) {
    replace_all(t, "{object}", rng.pick(p.objects));
    replace_all(t, "{amount}", std::to_string(rng.between(60, 9800)));
    replace_all(t, "{victim}", victim);
    replace_all(t, "{town}", rng.pick(p.towns));
    replace_all(t, "{n}", std::to_string(rng.between(2, 24)));
    replace_all(t, "{m}", std::to_string(rng.between(12, 36)));
    return t;
}

// Fact sentence of roughly 400 to 1100 characters, no markers, no single-letter words.
inline std::string fact_sentence(FixtureRng& rng, const LanguageProfile& p, int year) {
    std::string fact = p.fact_opening;
    replace_all(fact, "{day}", std::to_string(rng.between(1, 28)));
    replace_all(fact, "{month}", p.months[static_cast<std::size_t>(rng.below(12))]);
    replace_all(fact, "{year}", std::to_string(year));
    replace_all(fact, "{hh}", two_digits(rng.between(0, 23)));
    replace_all(fact, "{mm}", two_digits(rng.between(0, 59)));
    replace_all(fact, "{town}", rng.pick(p.towns));
    replace_all(fact, "{street}", rng.pick(p.streets));
    replace_all(fact, "{num}", std::to_string(rng.between(2, 180)));
    const std::string victim = person(rng, p);
    const auto target = static_cast<std::size_t>(rng.between(360, 1000));
    fact += " " + fill(rng.pick(p.acts), rng, p, victim);
    if (rng.chance(0.7)) fact += ", " + rng.pick(p.extras);
    while (utf8_length(fact) < target) {
        fact += p.chain_word + " " + fill(rng.pick(p.acts), rng, p, victim);
        if (rng.chance(0.5)) fact += ", " + rng.pick(p.extras);
    }
    std::string damage = p.damage_clause;
    replace_all(damage, "{victim}", victim);
    replace_all(damage, "{amount}", std::to_string(rng.between(60, 9800)));
    fact += damage;
    // Occasional hard line breaks, as left behind by PDF conversion.
    for (std::size_t pos = fact.find(' ', 60); pos != std::string::npos; pos = fact.find(' ', pos + 60)) {
        if (rng.chance(0.25)) fact[pos] = '\n';
    }
    return fact;
}

inline bool contains_any(std::string_view text, std::span<const std::string> phrases) {
    return std::any_of(phrases.begin(), phrases.end(), [&](const std::string& ph) { return text.find(ph) != std::string_view::npos; });
}

inline const std::vector<std::string>& break_spacers() {
    static const std::vector<std::string> s{"  ", "\n", " \n", "\n ", "   ", "\r\n", "\t"};
    return s;
}

// Insert a whitespace break so the phrase (and every phrase in `must_break`)
// no longer occurs literally. Breaks go between words or inside words,
// leaving two letters on each side (one for words shorter than four).
inline std::string break_phrase(FixtureRng& rng, const std::string& phrase, std::span<const std::string> must_break, std::string& description) {
    const auto decoded = decode_utf8(phrase);
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<std::size_t> word_gaps;
        std::vector<std::size_t> inner;
        std::size_t word_start = 0;
        for (std::size_t i = 0; i <= decoded.size(); ++i) {
            if (i == decoded.size() || decoded.chars[i] == U' ') {
                if (i < decoded.size()) word_gaps.push_back(i);
                const std::size_t len = i - word_start;
                const std::size_t margin = len >= 4 ? 2 : 1;  // short words ("tak") still need a split point
                for (std::size_t k = margin; len >= 2 && k + margin <= len; ++k) inner.push_back(word_start + k);
                word_start = i + 1;
            }
        }
        const bool inside = !inner.empty() && (word_gaps.empty() || rng.chance(0.5));
        std::string out;
        if (inside) {
            const std::size_t at = inner[static_cast<std::size_t>(rng.below(inner.size()))];
            const std::string spacer = rng.chance(0.5) ? " " : rng.pick(break_spacers());
            out = std::string(decoded.bytes(phrase, 0, at)) + spacer + std::string(decoded.bytes(phrase, at, decoded.size()));
            description = "split word at " + std::to_string(at);
        } else {
            const std::size_t at = word_gaps[static_cast<std::size_t>(rng.below(word_gaps.size()))];
            out = std::string(decoded.bytes(phrase, 0, at)) + rng.pick(break_spacers()) + std::string(decoded.bytes(phrase, at + 1, decoded.size()));
            description = "widened gap at " + std::to_string(at);
        }
        if (!contains_any(out, must_break)) return out;
    }
    throw std::logic_error("break_phrase: could not break '" + phrase + "'");
}

inline VerdictDocument make_verdict(std::string id, std::string court, std::string docket, int year, std::string text) {
    VerdictDocument d;
    d.doc_id = std::move(id);
    d.court_name = std::move(court);
    d.docket_number = std::move(docket);
    d.decision_year = year;
    d.raw_text = std::move(text);
    return d;
}

inline FixtureDocument build_document(const FixtureSpec& spec, const LanguageProfile& p, std::size_t index, FixtureKind kind) {
    FixtureRng rng(spec.seed ^ splitmix64(index + 1));
    FixtureDocument fd;
    fd.kind = kind;
    const int year = static_cast<int>(rng.between(2018, 2022));
    const std::string town = rng.pick(p.towns);
    const std::string court = p.court_prefix + " " + town;
    const std::string docket = std::to_string(rng.between(1, 9)) + "T/" + std::to_string(rng.between(10, 999)) + "/" + std::to_string(year);
    const std::string judge = "JUDr. " + person(rng, p);
    const std::string defendant = person(rng, p);
    const std::string offence = rng.pick(p.offences);
    const std::string section = std::to_string(rng.between(150, 380));

    TextBuilder b;
    b.append(court + "\n" + p.docket_label + " " + docket + "\n\n");
    auto header = [&](const std::string& h) {
        const std::size_t at = b.append(h);
        fd.headers.push_back({at, at + utf8_length(h), collapse(std::string_view(h))});
        b.append("\n\n");
    };
    header(p.heading_judgment);
    if (rng.chance(0.6)) header(p.heading_republic);

    std::string intro = p.intro;
    replace_all(intro, "{court}", court);
    replace_all(intro, "{judge}", judge);
    replace_all(intro, "{name}", defendant);
    replace_all(intro, "{born}", date_text(rng, p, static_cast<int>(rng.between(1960, 2001))));
    replace_all(intro, "{town}", rng.pick(p.towns));
    replace_all(intro, "{street}", rng.pick(p.streets));
    replace_all(intro, "{num}", std::to_string(rng.between(2, 180)));
    replace_all(intro, "{offence}", offence);
    replace_all(intro, "{section}", section);
    replace_all(intro, "{hearing}", date_text(rng, p, year));
    b.append(intro + "\n\n");

    std::string qualification = p.qualification;
    replace_all(qualification, "{offence}", offence);
    replace_all(qualification, "{section}", section);
    replace_all(qualification, "{paragraph}", std::to_string(rng.between(1, 4)));
    std::string sentence = p.sentence_line;
    replace_all(sentence, "{sentence}", fill(rng.pick(p.sentences), rng, p, {}));

    std::string defendant_line = p.defendant_line;
    replace_all(defendant_line, "{name}", defendant);

    if (kind == FixtureKind::pathological_absent) {
        std::string acquittal = p.acquittal;
        replace_all(acquittal, "{name}", defendant);
        replace_all(acquittal, "{offence}", offence);
        replace_all(acquittal, "{section}", section);
        b.append(acquittal + "\n\n");
    } else {
        const std::string fact = fact_sentence(rng, p, year);
        fd.end_phrase = rng.pick(p.end_phrases);
        std::string end_text = fd.end_phrase;
        if (kind == FixtureKind::pathological_fact) {
            std::string opening = rng.pick(p.responsible_intros);
            replace_all(opening, "{name}", defendant);
            b.append(opening + "\n");
        } else {
            fd.start_phrase = rng.pick(p.start_phrases);
            std::string start_text = fd.start_phrase;
            if (kind == FixtureKind::noisy) {
                if (rng.chance(spec.end_noise_fraction)) {
                    end_text = break_phrase(rng, fd.end_phrase, p.end_phrases, fd.noise);
                    fd.noise = "end: " + fd.noise;
                } else {
                    start_text = break_phrase(rng, fd.start_phrase, p.start_phrases, fd.noise);
                    fd.noise = "start: " + fd.noise;
                }
            }
            b.append(defendant_line + "\n" + start_text + " ");
        }
        const std::size_t fact_at = b.append(fact);
        fd.gold_span = CharRange{fact_at, fact_at + utf8_length(fact)};
        fd.gold = {{}, fact, true};
        b.append(" " + end_text + " " + qualification + "\n" + sentence + "\n\n");
    }

    header(p.heading_reasoning);
    const auto paragraphs = rng.between(2, 4);
    for (std::int64_t k = 0; k < paragraphs; ++k) {
        std::string para;
        const auto sentences = rng.between(2, 4);
        for (std::int64_t s = 0; s < sentences; ++s) {
            if (!para.empty()) para += " ";
            para += fill(rng.pick(p.reasoning), rng, p, person(rng, p));
        }
        b.append(para + "\n\n");
    }
    header(p.heading_appeal);
    b.append(p.appeal + "\n\n");
    std::string signature = p.signature;
    replace_all(signature, "{town}", town);
    replace_all(signature, "{date}", date_text(rng, p, year));
    replace_all(signature, "{judge}", judge);
    b.append(signature + "\n");

    char id[32];
    std::snprintf(id, sizeof id, "fx-%06zu", index + 1);
    fd.doc = make_verdict(id, court, docket, year, std::move(b.text));
    fd.gold.doc_id = fd.doc.doc_id;
    return fd;
}

}  // namespace detail

/// Build a seeded synthetic corpus with gold annotations and planted metadata.
inline FixtureCorpus generate_corpus(const FixtureSpec& spec) {
    spec.validate();
    const auto& profile = language_profile(spec.language_profile);
    FixtureCorpus corpus;
    corpus.spec = spec;

    const std::vector<double> fractions{spec.clean_fraction, spec.noisy_fraction, spec.pathological_fraction};
    const auto counts = allocate_counts(spec.n_docs, fractions);
    const std::vector<double> patho{1.0 - spec.absent_fact_fraction, spec.absent_fact_fraction};
    const auto patho_counts = allocate_counts(counts[2], patho);
    std::vector<FixtureKind> kinds;
    kinds.insert(kinds.end(), counts[0], FixtureKind::clean);
    kinds.insert(kinds.end(), counts[1], FixtureKind::noisy);
    kinds.insert(kinds.end(), patho_counts[0], FixtureKind::pathological_fact);
    kinds.insert(kinds.end(), patho_counts[1], FixtureKind::pathological_absent);
    FixtureRng rng(spec.seed);
    rng.shuffle(kinds);

    corpus.documents.reserve(spec.n_docs);
    for (std::size_t i = 0; i < spec.n_docs; ++i) corpus.documents.push_back(detail::build_document(spec, profile, i, kinds[i]));

    for (std::size_t i = 0; i < spec.truncated_records; ++i) {
        auto extra = detail::build_document(spec, profile, spec.n_docs + i, FixtureKind::clean).doc;
        extra.doc_id = "fx-truncated-" + std::to_string(i + 1);
        corpus.truncated_extras.push_back(std::move(extra));
    }

    for (const auto& d : corpus.documents) corpus.admin.push_back({d.doc.docket_number, d.doc.court_name, d.doc.decision_year});
    for (std::size_t i = 0; i < spec.unlinked_admin; ++i) {
        const int year = static_cast<int>(rng.between(2018, 2022));
        corpus.admin.push_back({std::to_string(rng.between(1, 9)) + "T/" + std::to_string(1000 + i) + "/" + std::to_string(year),
                                profile.court_prefix + " " + rng.pick(profile.towns), year});
    }
    // Registry keys must stay unique.
    std::vector<std::pair<std::string, std::string>> keys;
    std::vector<AdminRecord> unique;
    for (auto& r : corpus.admin) {
        auto key = std::make_pair(normalize_court(r.court_name), normalize_docket(r.docket_number));
        if (std::find(keys.begin(), keys.end(), key) != keys.end()) continue;
        keys.push_back(std::move(key));
        unique.push_back(std::move(r));
    }
    corpus.admin = std::move(unique);
    return corpus;
}

/// Dump lines: every document, interleaved with the configured corrupt and truncated records.
inline std::vector<std::string> render_dump(const FixtureCorpus& corpus) {
    std::vector<std::string> lines;
    for (const auto& d : corpus.documents) lines.push_back(to_json(d.doc).dump());
    FixtureRng rng(corpus.spec.seed ^ 0xD0C5ULL);
    auto insert_at_random = [&](std::string line) {
        const auto at = static_cast<std::size_t>(rng.below(lines.size() + 1));
        lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(at), std::move(line));
    };
    for (const auto& extra : corpus.truncated_extras) {
        const auto full = to_json(extra).dump();
        insert_at_random(full.substr(0, full.size() / 2));
    }
    for (std::size_t i = 0; i < corpus.spec.corrupt_records; ++i) insert_at_random(i % 2 == 0 ? "{\"id\": \"broken record" : "not a json record");
    return lines;
}

inline nlohmann::json planted_json(const FixtureCorpus& corpus) {
    nlohmann::json docs = nlohmann::json::array();
    for (const auto& d : corpus.documents) {
        nlohmann::json headers = nlohmann::json::array();
        for (const auto& h : d.headers) headers.push_back({{"start", h.start_offset}, {"end", h.end_offset}, {"collapsed", h.collapsed}});
        nlohmann::json entry{{"doc_id", d.doc.doc_id}, {"kind", to_string(d.kind)}, {"start_phrase", d.start_phrase}, {"end_phrase", d.end_phrase},
                             {"noise", d.noise}, {"headers", headers}};
        if (d.gold_span) {
            entry["gold_start"] = d.gold_span->start;
            entry["gold_end"] = d.gold_span->end;
        }
        docs.push_back(std::move(entry));
    }
    return {{"spec", to_json(corpus.spec)}, {"documents", docs}};
}

// ---------------------------------------------------------------------------
// Scripted provider replays

enum class MutationStyle { edits, boundary };

inline const char* to_string(MutationStyle s) { return s == MutationStyle::edits ? "edits" : "boundary"; }

/// Target score range [min_score, max_score) for a share of the mutated answers.
struct ReplayBand {
    double weight = 1.0;
    double min_score = 0.95;
    double max_score = 1.0;
};

struct ReplayBehavior {
    double perfect_fraction = 1.0;
    double mutated_fraction = 0.0;
    double refuse_fraction = 0.0;
    MutationStyle style = MutationStyle::edits;
    std::vector<ReplayBand> mutation_bands{ReplayBand{}};
    std::uint64_t seed = 1;

    void validate() const {
        for (double f : {perfect_fraction, mutated_fraction, refuse_fraction}) {
            if (!(f >= 0.0 && f <= 1.0)) throw FixtureSpecError("replay behavior: fractions must lie in [0,1]");
        }
        if (std::abs(perfect_fraction + mutated_fraction + refuse_fraction - 1.0) > 1e-9) {
            throw FixtureSpecError("replay behavior: fractions must sum to 1");
        }
        if (mutated_fraction > 0.0 && mutation_bands.empty()) throw FixtureSpecError("replay behavior: mutation bands required");
        for (const auto& b : mutation_bands) {
            if (!(b.weight > 0.0) || !(b.min_score >= 0.0 && b.min_score < b.max_score && b.max_score <= 1.0)) {
                throw FixtureSpecError("replay behavior: invalid mutation band");
            }
        }
    }
};

inline nlohmann::json to_json(const ReplayBehavior& b) {
    nlohmann::json bands = nlohmann::json::array();
    for (const auto& band : b.mutation_bands) bands.push_back({{"weight", band.weight}, {"min_score", band.min_score}, {"max_score", band.max_score}});
    return {{"perfect_fraction", b.perfect_fraction}, {"mutated_fraction", b.mutated_fraction}, {"refuse_fraction", b.refuse_fraction},
            {"style", to_string(b.style)},           {"mutation_bands", bands},                 {"seed", b.seed}};
}

inline ReplayBehavior replay_behavior_from_json(const nlohmann::json& j) {
    ReplayBehavior b;
    try {
        b.perfect_fraction = j.value("perfect_fraction", b.perfect_fraction);
        b.mutated_fraction = j.value("mutated_fraction", b.mutated_fraction);
        b.refuse_fraction = j.value("refuse_fraction", b.refuse_fraction);
        const auto style = j.value("style", std::string("edits"));
        if (style != "edits" && style != "boundary") throw FixtureSpecError("replay behavior: unknown style '" + style + "'");
        b.style = style == "edits" ? MutationStyle::edits : MutationStyle::boundary;
        if (j.contains("mutation_bands")) {
            b.mutation_bands.clear();
            for (const auto& band : j["mutation_bands"]) {
                b.mutation_bands.push_back({band.value("weight", 1.0), band.at("min_score").get<double>(), band.at("max_score").get<double>()});
            }
        }
        b.seed = j.value("seed", b.seed);
    } catch (const nlohmann::json::exception& e) {
        throw FixtureSpecError(std::string("replay behavior: ") + e.what());
    }
    b.validate();
    return b;
}

/// What the replay was built to do for one document, with the score it achieves.
struct ReplayPlan {
    std::string doc_id;
    std::string behavior;  // perfect | mutated | refuse | absent
    std::optional<ReplayBand> band;
    std::optional<std::string> answer;  // fact string the scripted model reports
    std::optional<double> measured;     // score the answer was tuned to
};

struct ReplayFixture {
    std::vector<ReplayRecord> records;
    std::vector<ReplayPlan> plan;
};

namespace detail {

inline char32_t random_letter(FixtureRng& rng) {
    static constexpr std::u32string_view letters = U"abcdefghijklmnoprstuvyzáčďéíľňóôšťúýž";
    return letters[static_cast<std::size_t>(rng.below(letters.size()))];
}

// k random character edits (substitute, insert, delete) on non-space letters.
inline std::string apply_edits(std::string_view text, std::size_t k, std::uint64_t seed) {
    FixtureRng rng(seed);
    auto chars = decode_utf8(text).chars;
    for (std::size_t e = 0; e < k && chars.size() > 2; ++e) {
        std::size_t at = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(chars.size()) - 2));
        while (at + 1 < chars.size() && !is_letter(chars[at])) ++at;
        switch (rng.below(3)) {
            case 0: {
                char32_t c = random_letter(rng);
                while (c == chars[at]) c = random_letter(rng);
                chars[at] = c;
                break;
            }
            case 1: chars.insert(chars.begin() + static_cast<std::ptrdiff_t>(at), random_letter(rng)); break;
            default: chars.erase(chars.begin() + static_cast<std::ptrdiff_t>(at)); break;
        }
    }
    return encode_utf8(chars);
}

// Shift the gold span's boundary by `amount` code points: cut the tail, cut
// the head, or run on into the following source text.
inline std::optional<std::string> shift_boundary(const FixtureDocument& fd, std::size_t amount, int mode) {
    const auto decoded = decode_utf8(fd.doc.raw_text);
    std::size_t begin = fd.gold_span->start;
    std::size_t end = fd.gold_span->end;
    if (mode == 0) {
        if (amount + 1 >= end - begin) return std::nullopt;
        end -= amount;
    } else if (mode == 1) {
        if (amount + 1 >= end - begin) return std::nullopt;
        begin += amount;
    } else {
        if (end + amount > decoded.size()) return std::nullopt;
        end += amount;
    }
    trim_range(decoded.chars, begin, end);
    if (begin >= end) return std::nullopt;
    return std::string(decoded.bytes(fd.doc.raw_text, begin, end));
}

// Score of an answer as the evaluation will see it.
inline std::optional<double> measured_score(const FixtureDocument& fd, const std::string& answer, MutationStyle style) {
    if (style == MutationStyle::edits) return locate_span(answer, fd.doc.raw_text).score;
    const auto grounded = ground(answer, fd.doc.raw_text, kDefaultGroundThreshold);
    if (!grounded) return std::nullopt;
    return similarity(grounded->text, fd.gold.gold_text);
}

inline std::optional<std::pair<std::string, double>> tune_mutation(const FixtureDocument& fd, const ReplayBand& band, MutationStyle style, FixtureRng& rng) {
    const auto folded_len = static_cast<double>(normalize_text(fd.gold.gold_text).folded.size());
    const double mid = (band.min_score + band.max_score) / 2.0;
    const auto estimate = std::max<std::int64_t>(1, std::llround((1.0 - mid) * folded_len));
    for (int attempt = 0; attempt < 12; ++attempt) {
        const std::uint64_t seed = rng.next();
        const int mode = static_cast<int>(rng.below(3));
        // Walk outward from the estimate: estimate, +1, -1, +2, -2, ...
        for (std::int64_t step = 0; step < 2 * estimate + 40; ++step) {
            const std::int64_t delta = (step % 2 == 0 ? 1 : -1) * ((step + 1) / 2);
            const std::int64_t k = estimate + delta;
            if (k < 1) continue;
            std::optional<std::string> answer;
            if (style == MutationStyle::edits) {
                answer = apply_edits(fd.gold.gold_text, static_cast<std::size_t>(k), seed);
            } else {
                answer = shift_boundary(fd, static_cast<std::size_t>(k), mode);
            }
            if (!answer || answer->empty()) continue;
            const auto score = measured_score(fd, *answer, style);
            if (score && *score >= band.min_score && *score < band.max_score) return std::make_pair(*answer, *score);
        }
    }
    return std::nullopt;
}

// Model-like packaging of a JSON answer.
inline std::string wrap_answer(const nlohmann::json& payload, FixtureRng& rng) {
    const auto body = payload.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    switch (rng.below(4)) {
        case 0: return body;
        case 1: return "```json\n" + payload.dump(2) + "\n```";
        case 2: return "Here is the extracted statement:\n" + body + "\n";
        default: return "```\n" + body + "\n```\nThe statement was copied from the dispositive part.";
    }
}

}  // namespace detail

/// Script one provider answer per document, keyed by the hash of the prompt
/// the pipeline will send for it.
inline ReplayFixture generate_replay(std::span<const FixtureDocument> docs, const ReplayBehavior& behavior, const PromptSpec& prompt_spec,
                                     const ProviderConfig& provider = {}, std::size_t max_document_chars = 0) {
    behavior.validate();
    ReplayFixture fixture;
    const std::vector<double> fractions{behavior.refuse_fraction, behavior.perfect_fraction, behavior.mutated_fraction};
    const auto counts = allocate_counts(docs.size(), fractions);
    std::vector<double> weights;
    double weight_sum = 0.0;
    for (const auto& b : behavior.mutation_bands) weight_sum += b.weight;
    for (const auto& b : behavior.mutation_bands) weights.push_back(b.weight / weight_sum);
    const auto band_counts = behavior.mutation_bands.empty() ? std::vector<std::size_t>{} : allocate_counts(counts[2], weights);

    // Role per document: refusals first, then perfect answers, then each mutation band.
    std::vector<int> roles;  // -2 refuse, -1 perfect, >= 0 band index
    roles.insert(roles.end(), counts[0], -2);
    roles.insert(roles.end(), counts[1], -1);
    for (std::size_t b = 0; b < band_counts.size(); ++b) roles.insert(roles.end(), band_counts[b], static_cast<int>(b));
    FixtureRng rng(behavior.seed);
    rng.shuffle(roles);

    for (std::size_t i = 0; i < docs.size(); ++i) {
        const auto& fd = docs[i];
        const auto prompt = build_prompt(fd.doc, prompt_spec, max_document_chars);
        ReplayRecord record;
        record.prompt_hash = sha256_hex(prompt.text);
        record.doc_id = fd.doc.doc_id;
        record.input_tokens = estimate_tokens(static_cast<std::int64_t>(prompt.char_count), provider.chars_per_token);
        ReplayPlan plan;
        plan.doc_id = fd.doc.doc_id;
        const int role = roles[i];
        if (role == -2) {
            record.status = rng.chance(0.5) ? LlmStatus::safety_flagged : LlmStatus::token_limit_exceeded;
            plan.behavior = "refuse";
        } else {
            std::optional<std::string> answer;
            if (!fd.gold.present) {
                plan.behavior = "absent";
            } else if (role == -1) {
                plan.behavior = "perfect";
                answer = fd.gold.gold_text;
                plan.measured = detail::measured_score(fd, *answer, behavior.style);
            } else {
                plan.behavior = "mutated";
                plan.band = behavior.mutation_bands[static_cast<std::size_t>(role)];
                auto tuned = detail::tune_mutation(fd, *plan.band, behavior.style, rng);
                if (!tuned) throw std::runtime_error("generate_replay: cannot reach the target band for " + fd.doc.doc_id);
                answer = std::move(tuned->first);
                plan.measured = tuned->second;
            }
            plan.answer = answer;
            const nlohmann::json payload{{std::string(kFactField), answer ? nlohmann::json(*answer) : nlohmann::json(nullptr)}};
            record.status = LlmStatus::ok;
            record.raw_output = detail::wrap_answer(payload, rng);
            record.output_tokens = estimate_tokens(static_cast<std::int64_t>(utf8_length(*record.raw_output)), provider.chars_per_token);
        }
        fixture.records.push_back(std::move(record));
        fixture.plan.push_back(std::move(plan));
    }
    return fixture;
}

inline nlohmann::json to_json(const ReplayPlan& p) {
    nlohmann::json j{{"doc_id", p.doc_id}, {"behavior", p.behavior}};
    if (p.band) j["band"] = {{"min_score", p.band->min_score}, {"max_score", p.band->max_score}};
    if (p.measured) j["measured"] = *p.measured;
    return j;
}

// ---------------------------------------------------------------------------
// Writing a fixture set to disk

inline void write_lines(const std::filesystem::path& path, std::span<const std::string> lines) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw SetupError("cannot write " + path.string());
    for (const auto& l : lines) out << l << '\n';
    if (!out) throw SetupError("write failed for " + path.string());
}

/// corpus/documents.jsonl, gold.jsonl, admin.csv, planted.json, markers.json
/// and, when given, replay.jsonl under `dir`.
inline void write_fixture_set(const std::filesystem::path& dir, const FixtureCorpus& corpus, const ReplayFixture* replay) {
    std::filesystem::create_directories(dir / "corpus");
    write_lines(dir / "corpus" / "documents.jsonl", render_dump(corpus));
    std::vector<std::string> gold;
    for (const auto& g : corpus.gold()) gold.push_back(to_json(g).dump());
    write_lines(dir / "gold.jsonl", gold);
    {
        std::ofstream admin(dir / "admin.csv", std::ios::binary | std::ios::trunc);
        if (!admin) throw SetupError("cannot write admin.csv");
        write_admin(admin, corpus.admin);
    }
    const std::string planted = planted_json(corpus).dump(2);
    const std::string markers = to_json(profile_marker_set(language_profile(corpus.spec.language_profile))).dump(2);
    write_lines(dir / "planted.json", std::span<const std::string>(&planted, 1));
    write_lines(dir / "markers.json", std::span<const std::string>(&markers, 1));
    if (replay) {
        std::vector<std::string> lines;
        for (const auto& r : replay->records) lines.push_back(to_json(r).dump());
        write_lines(dir / "replay.jsonl", lines);
    }
}

}  // namespace factx

#endif  // FACTX_FIXTURES_HPP
