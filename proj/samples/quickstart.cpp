// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The factx Authors
//
// Extract the factual statement from a few synthetic verdicts with the rules
// and a scripted provider, then score the results.

#include <iostream>

#include "factx/evaluate.hpp"
#include "factx/fixtures.hpp"
#include "factx/pipeline.hpp"

int main() {
    factx::FixtureSpec spec;
    spec.n_docs = 20;
    spec.seed = 11;
    spec.clean_fraction = 0.4;
    spec.noisy_fraction = 0.5;
    spec.pathological_fraction = 0.1;
    const auto corpus = factx::generate_corpus(spec);

    const factx::PipelineConfig config;  // combined: rules, then the provider
    const factx::Extractor extractor(config);
    const auto replay = factx::generate_replay(corpus.documents, factx::ReplayBehavior{}, extractor.prompt_spec());
    factx::ReplayProvider provider(replay.records);

    std::size_t calls = 0;
    const auto outcomes = factx::extract_all(corpus.verdicts(), extractor, &provider, &calls);
    for (const auto& o : outcomes) {
        std::cout << o.doc_id << "  " << factx::to_string(o.status) << "  " << o.diagnostics;
        if (o.text) std::cout << "\n    " << o.text->substr(0, 100) << (o.text->size() > 100 ? "..." : "");
        std::cout << '\n';
    }

    const auto comparisons = factx::compare_all(outcomes, corpus.gold(), config.method);
    const std::vector<factx::MethodReport> reports{factx::method_report(comparisons, "combined")};
    std::cout << '\n' << factx::render_method_table(reports) << "provider calls: " << calls << '\n';
}
