#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace parley {

// Schema or content problem in an input file. Carries the 1-based line
// number and the offending field when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t line = 0, std::string field = {})
        : std::runtime_error(format(msg, line, field)),
          line_(line),
          field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    static std::string format(const std::string& msg, std::size_t line,
                              const std::string& field) {
        std::string out = msg;
        if (line > 0) out += " (line " + std::to_string(line) + ")";
        if (!field.empty()) out += " [field: " + field + "]";
        return out;
    }

    std::size_t line_;
    std::string field_;
};

// Semantic-oracle failure: remote transport, unfitted model, empty input.
class ProviderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace parley
