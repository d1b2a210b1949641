#pragma once

#include "prosokit/signal.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace prosokit {

struct F0Point {
    double t = 0.0;  // s
    double f0 = 0.0; // Hz
};

/// Simple regression line f0 = intercept + slope * t.
struct LinearModel {
    double intercept = 0.0;   // Hz, the baseline
    double slope = 0.0;       // Hz per unit of t
    double sd_residual = 0.0; // Hz, RMS of residuals about the line
};

/// Least-squares polynomial over one time domain. Coefficients live in
/// normalized time: evaluation maps t to x = (t - t0) / (t1 - t0) first,
/// which keeps high degrees well conditioned.
struct PolyModel {
    double t0 = 0.0;
    double t1 = 0.0;
    std::vector<double> coeffs; // a_0 .. a_n
    double rmse = 0.0;          // Hz

    std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }

    double operator()(double t) const;

    bool operator==(const PolyModel&) const = default;
};

struct SkippedDomain {
    std::size_t index = 0; // position in the requested domain list
    TimeSpan span;
    std::string reason;
};

/// Simultaneous global and per-domain polynomial models of one track, plus
/// the residual against the global model.
struct StylizationResult {
    PolyModel global;
    std::vector<PolyModel> locals; // fitted domains, in request order
    std::vector<SkippedDomain> skipped;
    F0Track residual; // same grid and voicing pattern as the input
};

LinearModel linear_fit(std::span<const F0Point> points);

/// Fit a polynomial of the given degree; the domain is the t-range of the
/// points. Requires at least degree + 1 distinct abscissae.
PolyModel poly_fit(std::span<const F0Point> points, std::size_t degree);

/// Same, with an explicit normalization domain (used for per-interval fits
/// so that coefficients refer to the interval, not to the voiced span).
PolyModel poly_fit(std::span<const F0Point> points, std::size_t degree,
                   double t0, double t1);

/// Degree rule of thumb: one per contour-shaping event, floor of 2.
std::size_t default_degree(std::size_t n_events);

/// Fit voiced frames globally and over each half-open domain [t0, t1).
/// Domains with fewer voiced frames than local_degree + 1 are skipped and
/// reported, not fatal. The residual is taken against the global model.
/// Per-domain fits are independent; the parallel path is bit-identical to
/// the serial one.
StylizationResult stylize(const F0Track& track, std::span<const TimeSpan> domains,
                          std::size_t global_degree, std::size_t local_degree,
                          Exec exec = Exec::Parallel);

/// Running median over each voiced frame's neighbourhood. The window
/// shrinks symmetrically at track edges and at unvoiced gaps, so the count
/// stays odd and the output value is always one of the input values.
/// Voicing pattern is unchanged. Width must be odd.
F0Track median_filter(const F0Track& track, std::size_t width);

} // namespace prosokit
