// Compares the serial reference paths against the OpenMP paths on
// synthetic material and checks that both produce identical results.

#include "prosokit/signal.hpp"
#include "prosokit/stylize.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

// Voiced stretches of a slowly wandering tone with silent gaps between.
prosokit::SampledSignal make_signal(double seconds, int sample_rate) {
    prosokit::SampledSignal signal;
    signal.sample_rate = sample_rate;
    const auto n = static_cast<std::size_t>(seconds * sample_rate);
    signal.samples.resize(n);
    double phase = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        const bool voiced = std::fmod(t, 2.5) < 2.0;
        const double f = 140.0 + 60.0 * std::sin(2.0 * M_PI * 0.31 * t);
        phase += 2.0 * M_PI * f / sample_rate;
        signal.samples[i] = voiced ? 0.6 * std::sin(phase) : 0.0;
    }
    return signal;
}

template <typename Fn>
double best_of(int reps, Fn&& fn) {
    double best = 1e30;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = clock_type::now();
        fn();
        best = std::min(best, seconds_since(t0));
    }
    return best;
}

} // namespace

int main(int argc, char** argv) {
    double seconds = 120.0;
    if (argc > 1) seconds = std::stod(argv[1]);

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif

    const prosokit::SampledSignal signal = make_signal(seconds, 16000);
    const prosokit::F0Params params;

    prosokit::F0Track serial_track, parallel_track;
    const double t_serial = best_of(3, [&] {
        serial_track = prosokit::estimate_f0(signal, params, prosokit::Exec::Serial);
    });
    const double t_parallel = best_of(3, [&] {
        parallel_track = prosokit::estimate_f0(signal, params, prosokit::Exec::Parallel);
    });
    const bool f0_match = (serial_track == parallel_track);
    std::printf("estimate_f0  %6.1f s audio: serial %7.1f ms, parallel %7.1f ms, "
                "speedup %.2fx, identical: %s\n",
                seconds, t_serial * 1e3, t_parallel * 1e3, t_serial / t_parallel,
                f0_match ? "yes" : "NO");

    // Per-syllable domains over the same track.
    std::vector<prosokit::TimeSpan> domains;
    for (double t = 0.0; t + 0.25 < seconds; t += 0.25)
        domains.push_back({t, t + 0.25});

    prosokit::StylizationResult serial_fit, parallel_fit;
    const double t_fit_serial = best_of(3, [&] {
        serial_fit = prosokit::stylize(serial_track, domains, 6, 2, prosokit::Exec::Serial);
    });
    const double t_fit_parallel = best_of(3, [&] {
        parallel_fit = prosokit::stylize(serial_track, domains, 6, 2, prosokit::Exec::Parallel);
    });
    const bool fit_match = serial_fit.locals == parallel_fit.locals &&
                           serial_fit.residual == parallel_fit.residual;
    std::printf("stylize      %5zu domains: serial %7.1f ms, parallel %7.1f ms, "
                "speedup %.2fx, identical: %s\n",
                domains.size(), t_fit_serial * 1e3, t_fit_parallel * 1e3,
                t_fit_serial / t_fit_parallel, fit_match ? "yes" : "NO");

    return (f0_match && fit_match) ? 0 : 1;
}
