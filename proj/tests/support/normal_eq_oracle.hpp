#pragma once

// Independent least-squares oracle used only by tests: builds the normal
// equations at long double precision and solves them with Gaussian
// elimination and partial pivoting. Deliberately shares no code with the
// library's QR-based fitter.

#include "prosokit/stylize.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace testsupport {

// Coefficients of the least-squares polynomial in the same normalized
// coordinates the library uses: x = (t - t0) / (t1 - t0).
inline std::vector<double> normal_equation_fit(std::span<const prosokit::F0Point> points,
                                               std::size_t degree, double t0, double t1) {
    const std::size_t cols = degree + 1;
    const long double scale = (t1 > t0) ? static_cast<long double>(t1 - t0) : 1.0L;

    std::vector<std::vector<long double>> ata(cols, std::vector<long double>(cols, 0.0L));
    std::vector<long double> aty(cols, 0.0L);

    for (const prosokit::F0Point& p : points) {
        const long double x = (static_cast<long double>(p.t) - t0) / scale;
        std::vector<long double> row(cols);
        long double power = 1.0L;
        for (std::size_t j = 0; j < cols; ++j) {
            row[j] = power;
            power *= x;
        }
        for (std::size_t i = 0; i < cols; ++i) {
            for (std::size_t j = 0; j < cols; ++j) ata[i][j] += row[i] * row[j];
            aty[i] += row[i] * static_cast<long double>(p.f0);
        }
    }

    // Gaussian elimination with partial pivoting on [A^T A | A^T y].
    for (std::size_t col = 0; col < cols; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < cols; ++r)
            if (std::fabs(static_cast<double>(ata[r][col])) >
                std::fabs(static_cast<double>(ata[pivot][col])))
                pivot = r;
        if (ata[pivot][col] == 0.0L)
            throw std::runtime_error("oracle: singular normal equations");
        std::swap(ata[col], ata[pivot]);
        std::swap(aty[col], aty[pivot]);
        for (std::size_t r = col + 1; r < cols; ++r) {
            const long double factor = ata[r][col] / ata[col][col];
            for (std::size_t c = col; c < cols; ++c) ata[r][c] -= factor * ata[col][c];
            aty[r] -= factor * aty[col];
        }
    }
    std::vector<long double> solution(cols, 0.0L);
    for (std::size_t r = cols; r-- > 0;) {
        long double acc = aty[r];
        for (std::size_t c = r + 1; c < cols; ++c) acc -= ata[r][c] * solution[c];
        solution[r] = acc / ata[r][r];
    }

    std::vector<double> out(cols);
    for (std::size_t i = 0; i < cols; ++i) out[i] = static_cast<double>(solution[i]);
    return out;
}

} // namespace testsupport
