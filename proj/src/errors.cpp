#include "prosokit/errors.hpp"

namespace prosokit {

const char* errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::MalformedTextGrid: return "MalformedTextGrid";
    case Errc::OverlappingIntervals: return "OverlappingIntervals";
    case Errc::EncodingError: return "EncodingError";
    case Errc::UnknownTier: return "UnknownTier";
    case Errc::NotIntervalTier: return "NotIntervalTier";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::CorruptHeader: return "CorruptHeader";
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::NyquistViolation: return "NyquistViolation";
    case Errc::SignalTooShort: return "SignalTooShort";
    case Errc::NonUniformSpacing: return "NonUniformSpacing";
    case Errc::NegativeF0: return "NegativeF0";
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::UnknownFrameStep: return "UnknownFrameStep";
    case Errc::NoVoicedFrames: return "NoVoicedFrames";
    case Errc::InsufficientPoints: return "InsufficientPoints";
    case Errc::DegenerateAbscissa: return "DegenerateAbscissa";
    case Errc::NumericalFailure: return "NumericalFailure";
    case Errc::EvenWidth: return "EvenWidth";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::ZeroMean: return "ZeroMean";
    case Errc::NonPositiveDuration: return "NonPositiveDuration";
    case Errc::SequenceShorterThanWindow: return "SequenceShorterThanWindow";
    case Errc::EmptyGroup: return "EmptyGroup";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::NonPositiveFrequency: return "NonPositiveFrequency";
    case Errc::InvalidToneSymbol: return "InvalidToneSymbol";
    case Errc::EmptyStats: return "EmptyStats";
    case Errc::EmptySeries: return "EmptySeries";
    }
    return "UnknownError";
}

} // namespace prosokit
