#pragma once

#include <string>

#include <json.hpp>

#include "csi/wire/canonical.hpp"
#include "csi/wire/dialect.hpp"

namespace csi::wire {

enum class ErrorKind {
    MalformedBody,       // unparseable or missing required field; path included
    UnsupportedFeature,  // construct this translator rejects by design
    Unrepresentable,     // canonical construct the target dialect cannot express
    MissingUsage,        // response body carries no usage accounting
};

std::string to_string(ErrorKind k);

class TranslateError : public std::runtime_error {
public:
    TranslateError(ErrorKind kind, std::string path, const std::string& detail)
        : std::runtime_error(to_string(kind) + " at " + (path.empty() ? "$" : path) + ": " + detail),
          kind_(kind),
          path_(std::move(path)) {}

    ErrorKind kind() const { return kind_; }
    const std::string& path() const { return path_; }

private:
    ErrorKind kind_;
    std::string path_;
};

/// Parse a dialect body into the canonical model. Unknown top-level fields
/// land in extras (tagged with the source dialect).
CanonicalExchange to_canonical(Dialect d, const nlohmann::json& body, ExchangeKind kind);
CanonicalExchange to_canonical(Dialect d, const std::string& body, ExchangeKind kind);

/// Emit a dialect body from the canonical model. Extras are re-emitted only
/// when `d` matches the exchange's source dialect; cross-dialect extras are
/// dropped (the caller is expected to surface a warning).
nlohmann::json from_canonical(Dialect d, const CanonicalExchange& ex);

/// Extract usage accounting from a response body without a full translation.
/// Throws TranslateError(MissingUsage) when absent.
TokenUsage usage_of(Dialect d, const nlohmann::json& response);

/// True when emitting `ex` toward `target` would drop a non-empty extras bag.
bool drops_extras(Dialect target, const CanonicalExchange& ex);

/// Dialect-shaped error document (used by the proxy for upstream failures).
nlohmann::json error_document(Dialect d, const std::string& message);

} // namespace csi::wire
