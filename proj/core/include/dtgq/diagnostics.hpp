#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dtgq {

/// 1-based source positions; end is inclusive of the last character's column.
struct SourceSpan {
    std::string file;
    int startLine = 1;
    int startCol = 1;
    int endLine = 1;
    int endCol = 1;
};

enum class Severity { Error, Warning };

/// A positioned message with a stable machine-readable code.
/// The closed set of codes is listed in the top-level README.
struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    SourceSpan span;
};

/// Thrown by checking/evaluation operations. `code()` is stable and
/// documented; `what()` is the human-readable explanation.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

inline std::string format_span(const SourceSpan& s) {
    return s.file + ":" + std::to_string(s.startLine) + ":" + std::to_string(s.startCol);
}

} // namespace dtgq
