// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The factx Authors

#ifndef FACTX_DOCUMENT_HPP
#define FACTX_DOCUMENT_HPP

#include <stdexcept>
#include <string>

namespace factx {

enum class DocumentSource { dump, api_fetch };

inline const char* to_string(DocumentSource s) { return s == DocumentSource::dump ? "dump" : "api_fetch"; }

/// One court decision.
struct VerdictDocument {
    std::string doc_id;
    std::string court_name;
    std::string docket_number;  // as published
    int decision_year = 0;
    std::string raw_text;       // UTF-8, never empty
    DocumentSource source = DocumentSource::dump;
};

/// One row of the administrative registry. (docket_number, court_name) is the linkage key.
struct AdminRecord {
    std::string docket_number;
    std::string court_name;
    int decision_year = 0;
};

struct IngestError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace factx

#endif  // FACTX_DOCUMENT_HPP
