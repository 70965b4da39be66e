#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bbgraph {

/// Machine-readable failure categories. Messages carry the details
/// (offending id, file position, violated clause); the code is the
/// stable part callers and the CLI exit-code map dispatch on.
enum class ErrorCode {
    DuplicateId,
    NonDenseIds,
    DanglingEndpoint,
    UnknownNode,
    UnknownEdge,
    EdgeNotIncident,
    EmptyQuery,
    DisconnectedQuery,
    ParseError,
    ValidationError,
    IoError,
    BudgetExceeded,
    Timeout,
    InfeasibleSpec,
    ExtractionFailed,
    InvalidEmbedding,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::NonDenseIds: return "NonDenseIds";
        case ErrorCode::DanglingEndpoint: return "DanglingEndpoint";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::UnknownEdge: return "UnknownEdge";
        case ErrorCode::EdgeNotIncident: return "EdgeNotIncident";
        case ErrorCode::EmptyQuery: return "EmptyQuery";
        case ErrorCode::DisconnectedQuery: return "DisconnectedQuery";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::Timeout: return "Timeout";
        case ErrorCode::InfeasibleSpec: return "InfeasibleSpec";
        case ErrorCode::ExtractionFailed: return "ExtractionFailed";
        case ErrorCode::InvalidEmbedding: return "InvalidEmbedding";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace bbgraph
