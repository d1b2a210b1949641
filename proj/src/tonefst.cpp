#include "prosokit/tonefst.hpp"
#include "prosokit/errors.hpp"

namespace prosokit {

namespace {

void check_tone_string(std::string_view lexical) {
    if (lexical.empty())
        raise(Errc::EmptyInput, "empty tone string");
    for (std::size_t i = 0; i < lexical.size(); ++i)
        if (lexical[i] != 'H' && lexical[i] != 'L')
            raise(Errc::InvalidToneSymbol,
                  std::string("tone symbol '") + lexical[i] + "' at position " +
                      std::to_string(i) + " (expected H or L)");
}

char faithful(char lexical) {
    return lexical == 'H' ? 'h' : 'l';
}

} // namespace

std::string transduce(std::string_view lexical, bool final_faithful) {
    check_tone_string(lexical);

    auto state = (lexical.front() == 'H') ? ToneFst::State::High : ToneFst::State::Low;
    std::string out;
    out.reserve(lexical.size());
    for (char tone : lexical) {
        for (const ToneFst::Transition& t : ToneFst::transitions) {
            if (t.from == state && t.input == tone) {
                out.push_back(t.output);
                state = t.to;
                break;
            }
        }
    }
    if (final_faithful)
        out.back() = faithful(lexical.back());
    return out;
}

std::string apply_rules(std::string_view lexical, bool final_faithful) {
    check_tone_string(lexical);

    std::string out;
    out.reserve(lexical.size());
    out.push_back(faithful(lexical.front()));
    for (std::size_t i = 1; i < lexical.size(); ++i)
        out.push_back(lexical[i - 1] == 'H' ? 'h' : 'l');
    if (final_faithful)
        out.back() = faithful(lexical.back());
    return out;
}

std::vector<ToneStep> annotate_steps(std::string_view lexical) {
    check_tone_string(lexical);

    std::vector<ToneStep> steps(lexical.size(), ToneStep::Plain);
    for (std::size_t i = 1; i < lexical.size(); ++i) {
        if (lexical[i] == 'L' && lexical[i - 1] == 'H')
            steps[i] = ToneStep::Upstep;
        else if (lexical[i] == 'H' && lexical[i - 1] == 'L' && i + 1 < lexical.size())
            steps[i] = ToneStep::Downstep;
    }
    return steps;
}

} // namespace prosokit
