#include "syncgrid/errors.hpp"

namespace syncgrid {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
        case ErrorCode::DegenerateGraph: return "DegenerateGraph";
        case ErrorCode::InvalidGraph: return "InvalidGraph";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonZeroMeanFrequencies: return "NonZeroMeanFrequencies";
        case ErrorCode::GammaOutOfRange: return "GammaOutOfRange";
        case ErrorCode::NotAcyclic: return "NotAcyclic";
        case ErrorCode::NotACycle: return "NotACycle";
        case ErrorCode::PsiOutOfRange: return "PsiOutOfRange";
        case ErrorCode::NotAnEquilibrium: return "NotAnEquilibrium";
        case ErrorCode::NonFiniteState: return "NonFiniteState";
        case ErrorCode::InvalidNetwork: return "InvalidNetwork";
        case ErrorCode::NoSyncInBracket: return "NoSyncInBracket";
        case ErrorCode::ConnectivityRetryExceeded: return "ConnectivityRetryExceeded";
        case ErrorCode::MarginRetryExceeded: return "MarginRetryExceeded";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InconsistentCase: return "InconsistentCase";
        case ErrorCode::NonLosslessCase: return "NonLosslessCase";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::NoAdjustableSources: return "NoAdjustableSources";
        case ErrorCode::IslandingDetected: return "IslandingDetected";
        case ErrorCode::InvalidLevel: return "InvalidLevel";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace syncgrid
