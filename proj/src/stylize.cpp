#include "prosokit/stylize.hpp"
#include "prosokit/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

namespace prosokit {

namespace {

std::size_t count_distinct_t(std::span<const F0Point> points) {
    std::vector<double> ts;
    ts.reserve(points.size());
    for (const F0Point& p : points) ts.push_back(p.t);
    std::sort(ts.begin(), ts.end());
    return static_cast<std::size_t>(std::unique(ts.begin(), ts.end()) - ts.begin());
}

PolyModel fit_impl(std::span<const F0Point> points, std::size_t degree,
                   double t0, double t1) {
    const std::size_t n = points.size();
    const std::size_t cols = degree + 1;
    if (count_distinct_t(points) < cols)
        raise(Errc::InsufficientPoints,
              "need " + std::to_string(cols) + " distinct abscissae for degree " +
                  std::to_string(degree) + ", got " + std::to_string(count_distinct_t(points)));
    if (degree >= 1 && t1 <= t0)
        raise(Errc::DegenerateAbscissa, "zero-length fit domain");

    const double scale = (t1 > t0) ? (t1 - t0) : 1.0;
    Eigen::MatrixXd design(n, cols);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = (points[i].t - t0) / scale;
        double power = 1.0;
        for (std::size_t j = 0; j < cols; ++j) {
            design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = power;
            power *= x;
        }
        y(static_cast<Eigen::Index>(i)) = points[i].f0;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < static_cast<Eigen::Index>(cols))
        raise(Errc::NumericalFailure,
              "design matrix is rank deficient (rank " + std::to_string(qr.rank()) +
                  " of " + std::to_string(cols) + ")");
    Eigen::VectorXd solution = qr.solve(y);

    PolyModel model;
    model.t0 = t0;
    model.t1 = t1;
    model.coeffs.assign(solution.data(), solution.data() + cols);
    model.rmse = (design * solution - y).norm() / std::sqrt(static_cast<double>(n));
    return model;
}

std::vector<F0Point> voiced_points(const F0Track& track) {
    std::vector<F0Point> points;
    points.reserve(track.frames.size());
    for (std::size_t i = 0; i < track.frames.size(); ++i)
        if (track.frames[i]) points.push_back({track.time_at(i), *track.frames[i]});
    return points;
}

} // namespace

double PolyModel::operator()(double t) const {
    const double scale = (t1 > t0) ? (t1 - t0) : 1.0;
    const double x = (t - t0) / scale;
    double value = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        value = value * x + *it;
    return value;
}

LinearModel linear_fit(std::span<const F0Point> points) {
    if (points.size() < 2)
        raise(Errc::InsufficientPoints,
              "linear fit needs at least 2 points, got " + std::to_string(points.size()));

    const auto n = static_cast<double>(points.size());
    double mean_t = 0.0, mean_y = 0.0;
    for (const F0Point& p : points) {
        mean_t += p.t;
        mean_y += p.f0;
    }
    mean_t /= n;
    mean_y /= n;

    double s_tt = 0.0, s_ty = 0.0;
    for (const F0Point& p : points) {
        const double dt = p.t - mean_t;
        s_tt += dt * dt;
        s_ty += dt * (p.f0 - mean_y);
    }
    if (s_tt == 0.0)
        raise(Errc::DegenerateAbscissa, "all abscissae are equal");

    LinearModel model;
    model.slope = s_ty / s_tt;
    model.intercept = mean_y - model.slope * mean_t;

    double ss_residual = 0.0;
    for (const F0Point& p : points) {
        const double r = p.f0 - (model.intercept + model.slope * p.t);
        ss_residual += r * r;
    }
    model.sd_residual = std::sqrt(ss_residual / n);
    return model;
}

PolyModel poly_fit(std::span<const F0Point> points, std::size_t degree) {
    if (points.empty())
        raise(Errc::InsufficientPoints, "no points to fit");
    auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                        [](const F0Point& a, const F0Point& b) { return a.t < b.t; });
    return fit_impl(points, degree, lo->t, hi->t);
}

PolyModel poly_fit(std::span<const F0Point> points, std::size_t degree,
                   double t0, double t1) {
    if (points.empty())
        raise(Errc::InsufficientPoints, "no points to fit");
    return fit_impl(points, degree, t0, t1);
}

std::size_t default_degree(std::size_t n_events) {
    return std::max<std::size_t>(2, n_events);
}

StylizationResult stylize(const F0Track& track, std::span<const TimeSpan> domains,
                          std::size_t global_degree, std::size_t local_degree,
                          Exec exec) {
    const std::vector<F0Point> all = voiced_points(track);
    if (all.empty())
        raise(Errc::NoVoicedFrames, "track has no voiced frames");

    StylizationResult result;
    result.global = poly_fit(all, global_degree, all.front().t, all.back().t);

    struct LocalOutcome {
        bool fitted = false;
        PolyModel model;
        std::string reason;
    };
    std::vector<LocalOutcome> outcomes(domains.size());

    auto fit_domain = [&](std::size_t d) {
        const TimeSpan& span = domains[d];
        std::vector<F0Point> points;
        for (const F0Point& p : all)
            if (p.t >= span.t0 && p.t < span.t1) points.push_back(p);
        if (points.size() < local_degree + 1) {
            outcomes[d].reason = "only " + std::to_string(points.size()) +
                                 " voiced frames for degree " + std::to_string(local_degree);
            return;
        }
        try {
            outcomes[d].model = fit_impl(points, local_degree, span.t0, span.t1);
            outcomes[d].fitted = true;
        } catch (const Error& e) {
            outcomes[d].reason = e.what();
        }
    };

    if (exec == Exec::Parallel) {
        const auto count = static_cast<std::ptrdiff_t>(domains.size());
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t d = 0; d < count; ++d)
            fit_domain(static_cast<std::size_t>(d));
    } else {
        for (std::size_t d = 0; d < domains.size(); ++d) fit_domain(d);
    }

    for (std::size_t d = 0; d < outcomes.size(); ++d) {
        if (outcomes[d].fitted)
            result.locals.push_back(std::move(outcomes[d].model));
        else
            result.skipped.push_back({d, domains[d], std::move(outcomes[d].reason)});
    }

    result.residual = track;
    for (std::size_t i = 0; i < result.residual.frames.size(); ++i)
        if (result.residual.frames[i])
            result.residual.frames[i] = *result.residual.frames[i] -
                                        result.global(result.residual.time_at(i));
    result.residual.f_min.reset();
    result.residual.f_max.reset();
    return result;
}

F0Track median_filter(const F0Track& track, std::size_t width) {
    if (width % 2 == 0)
        raise(Errc::EvenWidth, "filter width must be odd, got " + std::to_string(width));

    F0Track out = track;
    const std::size_t half = width / 2;
    const std::size_t n = track.frames.size();
    std::vector<double> window;
    window.reserve(width);

    for (std::size_t i = 0; i < n; ++i) {
        if (!track.frames[i]) continue;

        std::size_t left = 0;
        while (left < half && i >= left + 1 && track.frames[i - left - 1]) ++left;
        std::size_t right = 0;
        while (right < half && i + right + 1 < n && track.frames[i + right + 1]) ++right;
        const std::size_t reach = std::min(left, right); // symmetric, keeps the count odd

        window.clear();
        for (std::size_t k = i - reach; k <= i + reach; ++k)
            window.push_back(*track.frames[k]);
        std::nth_element(window.begin(), window.begin() + static_cast<std::ptrdiff_t>(reach),
                         window.end());
        out.frames[i] = window[reach];
    }
    return out;
}

} // namespace prosokit
