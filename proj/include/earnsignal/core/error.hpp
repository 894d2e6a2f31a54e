#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace earnsignal {

enum class ErrorKind {
    // input / IO
    Io,
    BadConfig,
    // data contract
    MissingColumn,
    BadRow,
    DuplicateDate,
    DuplicateDocId,
    SelectorSyntax,
    EmptyTrainingSet,
    BadAlpha,
    BadThresholds,
    EmptySeries,
    NoOverlap,
    EmptyTable,
    BadK,
    BadParams,
    SingleClass,
    DimensionMismatch,
    ZeroVector,
    TooFewMinority,
    DegenerateSplit,
    EmptyInput,
    LengthMismatch,
    FeatureMismatch,
    // persisted artifacts
    BadMagic,
    VersionMismatch,
    CorruptArtifact,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Io: return "Io";
    case ErrorKind::BadConfig: return "BadConfig";
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::BadRow: return "BadRow";
    case ErrorKind::DuplicateDate: return "DuplicateDate";
    case ErrorKind::DuplicateDocId: return "DuplicateDocId";
    case ErrorKind::SelectorSyntax: return "SelectorSyntax";
    case ErrorKind::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorKind::BadAlpha: return "BadAlpha";
    case ErrorKind::BadThresholds: return "BadThresholds";
    case ErrorKind::EmptySeries: return "EmptySeries";
    case ErrorKind::NoOverlap: return "NoOverlap";
    case ErrorKind::EmptyTable: return "EmptyTable";
    case ErrorKind::BadK: return "BadK";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::SingleClass: return "SingleClass";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::TooFewMinority: return "TooFewMinority";
    case ErrorKind::DegenerateSplit: return "DegenerateSplit";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::FeatureMismatch: return "FeatureMismatch";
    case ErrorKind::BadMagic: return "BadMagic";
    case ErrorKind::VersionMismatch: return "VersionMismatch";
    case ErrorKind::CorruptArtifact: return "CorruptArtifact";
    }
    return "Unknown";
}

/// Process exit code for an error: 2 input/IO, 3 data contract, 4 artifact/version.
inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Io:
    case ErrorKind::BadConfig:
        return 2;
    case ErrorKind::BadMagic:
    case ErrorKind::VersionMismatch:
    case ErrorKind::CorruptArtifact:
        return 4;
    default:
        return 3;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace earnsignal
