#pragma once

#include <stdexcept>
#include <string>

namespace dpg {

// Every precondition violation in the library throws Error with one of these
// codes. The CLI maps any Error to a nonzero exit with the code name on stderr;
// tests assert on codes rather than message text.
enum class ErrorCode {
    LoopEdge,
    DuplicateEdge,
    UnknownVertex,
    MissingEdge,
    EmptyGraph,
    TooSmall,
    TooLarge,
    SizeInfeasible,
    NotBipartite,
    InvalidState,
    NoMatching,
    StubMismatch,
    BadR,
    SeedTooSmall,
    StaleCertificate,
    NotIndependent,
    NotThreeSatThree,
    PaddingTooLarge,
    KTooSmall,
    NotFourRegular,
    DegreeTooHigh,
    BadParams,
    WrongProtocol,
    HypothesisFailed,
    InsufficientData,
    TraceMismatch,
    ConfigError,
    IoError,
    BadFormat,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::LoopEdge: return "LoopEdge";
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::UnknownVertex: return "UnknownVertex";
        case ErrorCode::MissingEdge: return "MissingEdge";
        case ErrorCode::EmptyGraph: return "EmptyGraph";
        case ErrorCode::TooSmall: return "TooSmall";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::SizeInfeasible: return "SizeInfeasible";
        case ErrorCode::NotBipartite: return "NotBipartite";
        case ErrorCode::InvalidState: return "InvalidState";
        case ErrorCode::NoMatching: return "NoMatching";
        case ErrorCode::StubMismatch: return "StubMismatch";
        case ErrorCode::BadR: return "BadR";
        case ErrorCode::SeedTooSmall: return "SeedTooSmall";
        case ErrorCode::StaleCertificate: return "StaleCertificate";
        case ErrorCode::NotIndependent: return "NotIndependent";
        case ErrorCode::NotThreeSatThree: return "NotThreeSatThree";
        case ErrorCode::PaddingTooLarge: return "PaddingTooLarge";
        case ErrorCode::KTooSmall: return "KTooSmall";
        case ErrorCode::NotFourRegular: return "NotFourRegular";
        case ErrorCode::DegreeTooHigh: return "DegreeTooHigh";
        case ErrorCode::BadParams: return "BadParams";
        case ErrorCode::WrongProtocol: return "WrongProtocol";
        case ErrorCode::HypothesisFailed: return "HypothesisFailed";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::TraceMismatch: return "TraceMismatch";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::BadFormat: return "BadFormat";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace dpg
