#pragma once

#include <stdexcept>
#include <string>

namespace cryptonet {

// Error categories map 1:1 onto CLI exit codes and the machine-readable
// `category=` token printed on stderr.
enum class ErrorCategory {
    Parse = 2,       // malformed input file
    Validation = 3,  // data violates an invariant (duplicates, bad values)
    Degenerate = 4,  // statistic undefined on this sample
    Config = 5,      // bad configuration / flag combination
    File = 6,        // missing or unwritable file
};

inline const char* category_name(ErrorCategory c) {
    switch (c) {
    case ErrorCategory::Parse: return "parse";
    case ErrorCategory::Validation: return "validation";
    case ErrorCategory::Degenerate: return "degenerate";
    case ErrorCategory::Config: return "config";
    case ErrorCategory::File: return "file";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}
    ErrorCategory category() const { return category_; }

private:
    ErrorCategory category_;
};

struct ParseError : Error {
    explicit ParseError(const std::string& m) : Error(ErrorCategory::Parse, m) {}
};
struct ValidationError : Error {
    explicit ValidationError(const std::string& m) : Error(ErrorCategory::Validation, m) {}
};
// Thrown when a statistic is undefined on its sample (e.g. a constant margin).
struct DegenerateSampleError : Error {
    explicit DegenerateSampleError(const std::string& m) : Error(ErrorCategory::Degenerate, m) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error(ErrorCategory::Config, m) {}
};
struct FileError : Error {
    explicit FileError(const std::string& m) : Error(ErrorCategory::File, m) {}
};

} // namespace cryptonet
