#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace omlprob {

enum class ErrorCode {
    // lattice construction and validation
    MalformedTables,
    DuplicateElementName,
    ReservedName,
    NotAPartialOrder,
    NotALattice,
    OrthoNotInvolution,
    OrthoNotAntitone,
    ComplementNotUnique,
    OrthomodularLawViolated,
    BlockNotBoolean,
    DuplicateAtomName,
    EmptyAtoms,
    TooFewBlocks,
    TrivialBlock,
    UnknownElement,
    // states and s-maps
    OutOfRange,
    NotNormalized,
    AdditivityViolated,
    MissingAtomPair,
    DecompositionMismatch,
    S1Violated,
    S2Violated,
    S3Violated,
    P2Violated,
    NoFallbackState,
    C1Violated,
    C2Violated,
    C3Violated,
    // observables
    NotOrthogonal,
    JoinNotTop,
    DuplicateSpectrumValue,
    NotCompatible,
    NotBoolean,
    ZeroMassConditioner,
    // causality
    BaseNotBoolean,
    UnknownSeriesOrStamp,
    MarginalMismatch,
    EmptyExperiment,
    LabelMismatch,
    ReconciliationFailed,
    DegenerateDesign,
    TooFewObservations,
    // documents
    ParseError,
    UnknownKind,
    SchemaVersionUnsupported,
};

inline std::string_view error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedTables: return "MalformedTables";
        case ErrorCode::DuplicateElementName: return "DuplicateElementName";
        case ErrorCode::ReservedName: return "ReservedName";
        case ErrorCode::NotAPartialOrder: return "NotAPartialOrder";
        case ErrorCode::NotALattice: return "NotALattice";
        case ErrorCode::OrthoNotInvolution: return "OrthoNotInvolution";
        case ErrorCode::OrthoNotAntitone: return "OrthoNotAntitone";
        case ErrorCode::ComplementNotUnique: return "ComplementNotUnique";
        case ErrorCode::OrthomodularLawViolated: return "OrthomodularLawViolated";
        case ErrorCode::BlockNotBoolean: return "BlockNotBoolean";
        case ErrorCode::DuplicateAtomName: return "DuplicateAtomName";
        case ErrorCode::EmptyAtoms: return "EmptyAtoms";
        case ErrorCode::TooFewBlocks: return "TooFewBlocks";
        case ErrorCode::TrivialBlock: return "TrivialBlock";
        case ErrorCode::UnknownElement: return "UnknownElement";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::AdditivityViolated: return "AdditivityViolated";
        case ErrorCode::MissingAtomPair: return "MissingAtomPair";
        case ErrorCode::DecompositionMismatch: return "DecompositionMismatch";
        case ErrorCode::S1Violated: return "S1Violated";
        case ErrorCode::S2Violated: return "S2Violated";
        case ErrorCode::S3Violated: return "S3Violated";
        case ErrorCode::P2Violated: return "P2Violated";
        case ErrorCode::NoFallbackState: return "NoFallbackState";
        case ErrorCode::C1Violated: return "C1Violated";
        case ErrorCode::C2Violated: return "C2Violated";
        case ErrorCode::C3Violated: return "C3Violated";
        case ErrorCode::NotOrthogonal: return "NotOrthogonal";
        case ErrorCode::JoinNotTop: return "JoinNotTop";
        case ErrorCode::DuplicateSpectrumValue: return "DuplicateSpectrumValue";
        case ErrorCode::NotCompatible: return "NotCompatible";
        case ErrorCode::NotBoolean: return "NotBoolean";
        case ErrorCode::ZeroMassConditioner: return "ZeroMassConditioner";
        case ErrorCode::BaseNotBoolean: return "BaseNotBoolean";
        case ErrorCode::UnknownSeriesOrStamp: return "UnknownSeriesOrStamp";
        case ErrorCode::MarginalMismatch: return "MarginalMismatch";
        case ErrorCode::EmptyExperiment: return "EmptyExperiment";
        case ErrorCode::LabelMismatch: return "LabelMismatch";
        case ErrorCode::ReconciliationFailed: return "ReconciliationFailed";
        case ErrorCode::DegenerateDesign: return "DegenerateDesign";
        case ErrorCode::TooFewObservations: return "TooFewObservations";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::UnknownKind: return "UnknownKind";
        case ErrorCode::SchemaVersionUnsupported: return "SchemaVersionUnsupported";
    }
    return "Unknown";
}

/// Every failure in the library is reported through this type. The witness
/// holds the element names (or other labels) that exhibit the violation.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, std::vector<std::string> witness = {})
        : std::runtime_error(std::string(error_name(code)) + ": " + message),
          code_(code),
          witness_(std::move(witness)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::vector<std::string>& witness() const noexcept { return witness_; }

private:
    ErrorCode code_;
    std::vector<std::string> witness_;
};

}  // namespace omlprob
