#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace prosokit {

/// Two-state transducer for terraced tone: total progressive assimilation
/// of each tone to its lexical predecessor (an H after L surfaces
/// downstepped as l, an L after H upstepped as h), with an optional
/// faithful final syllable.
///
/// Lexical tones are upper-case H/L; phonetic tones are lower-case h/l.
struct ToneFst {
    enum class State { High, Low };

    struct Transition {
        State from;
        char input;  // lexical tone
        char output; // phonetic tone
        State to;
    };

    // Two self-loops (the terraces) and a loop between the states (the
    // terracing pattern). Deterministic: one transition per (state, input).
    static constexpr std::array<Transition, 4> transitions{{
        {State::High, 'H', 'h', State::High},
        {State::High, 'L', 'h', State::Low},
        {State::Low, 'L', 'l', State::Low},
        {State::Low, 'H', 'l', State::High},
    }};
};

/// Run the transducer over a lexical tone string. The start state matches
/// the first tone, so the first syllable is realised faithfully. With
/// final_faithful the last output is overridden to the faithful image of
/// the last lexical tone.
std::string transduce(std::string_view lexical, bool final_faithful = true);

/// Equivalent rewrite-rule formulation: each output from position 1 on is
/// determined by the preceding lexical tone (h after H, l after L); the
/// first output is faithful. Same final_faithful override as transduce.
std::string apply_rules(std::string_view lexical, bool final_faithful = true);

enum class ToneStep { Plain, Downstep, Upstep };

/// Mark where assimilation steps the contour: H after L is downstepped,
/// L after H upstepped, same-tone continuations and the first syllable
/// plain. A final H escapes the downstep mark (the final syllable is
/// realised faithfully).
std::vector<ToneStep> annotate_steps(std::string_view lexical);

} // namespace prosokit
