#pragma once

#include <stdexcept>
#include <string>

namespace prosokit {

// Every failure mode the library reports. The CLI maps these to exit code 2.
enum class Errc {
    // annotation
    MalformedTextGrid,
    OverlappingIntervals,
    EncodingError,
    UnknownTier,
    NotIntervalTier,
    // signal
    UnsupportedFormat,
    CorruptHeader,
    InvalidParameter,
    NyquistViolation,
    SignalTooShort,
    NonUniformSpacing,
    NegativeF0,
    MalformedRow,
    UnknownFrameStep,
    NoVoicedFrames,
    // stylize
    InsufficientPoints,
    DegenerateAbscissa,
    NumericalFailure,
    EvenWidth,
    // metrics
    InsufficientData,
    ZeroMean,
    NonPositiveDuration,
    SequenceShorterThanWindow,
    EmptyGroup,
    EmptyInput,
    // scales
    NonPositiveFrequency,
    // tonefst
    InvalidToneSymbol,
    // render
    EmptyStats,
    EmptySeries,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace prosokit
