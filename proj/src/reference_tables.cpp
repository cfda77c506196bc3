#include "plr/reference_tables.hpp"

#include <stdexcept>

namespace plr {

namespace {

// Published values of B at three significant digits, b = 2, m = 4..16.
// Each row holds alpha = 0.5 for s = 1, 5, 50, 100, then alpha = 1 for the
// same s. "top" is the CBC rule, "bottom" the comparison digital net
// (equidistributed points for s = 1, Niederreiter-Xing for s = 5, Sobol for
// s = 50 and 100). Strings are kept verbatim as printed.

struct Row {
    const char* top[8];
    const char* bottom[8];
};

// Table 1: gamma_j = 1.
constexpr Row kTable1[13] = {
    {{"3.91e-03", "1.46e+00", "7.04e+13", "7.92e+28", "8.14e-05", "4.37e-02", "1.10e+05", "1.95e+11"},
     {"3.91e-03", "1.48e+00", "7.04e+13", "7.92e+28", "8.14e-05", "4.90e-02", "1.10e+05", "1.95e+11"}},  // m = 4
    {{"9.77e-04", "6.16e-01", "3.52e+13", "3.96e+28", "1.02e-05", "1.09e-02", "5.52e+04", "9.74e+10"},
     {"9.77e-04", "6.34e-01", "3.52e+13", "3.96e+28", "1.02e-05", "1.32e-02", "5.52e+04", "9.74e+10"}},  // m = 5
    {{"2.44e-04", "2.66e-01", "1.76e+13", "1.98e+28", "1.27e-06", "3.45e-03", "2.76e+04", "4.87e+10"},
     {"2.44e-04", "2.61e-01", "1.76e+13", "1.98e+28", "1.27e-06", "3.17e-03", "2.76e+04", "4.87e+10"}},  // m = 6
    {{"6.10e-05", "1.08e-01", "8.80e+12", "9.90e+27", "1.59e-07", "9.05e-04", "1.38e+04", "2.44e+10"},
     {"6.10e-05", "1.04e-01", "8.80e+12", "9.90e+27", "1.59e-07", "7.19e-04", "1.38e+04", "2.44e+10"}},  // m = 7
    {{"1.53e-05", "4.24e-02", "4.40e+12", "4.95e+27", "1.99e-08", "2.36e-04", "6.90e+03", "1.22e+10"},
     {"1.53e-05", "3.93e-02", "4.40e+12", "4.95e+27", "1.99e-08", "1.48e-04", "6.90e+03", "1.22e+10"}},  // m = 8
    {{"3.81e-06", "1.74e-02", "2.20e+12", "2.48e+27", "2.48e-09", "6.10e-05", "3.45e+03", "6.09e+09"},
     {"3.81e-06", "1.44e-02", "2.20e+12", "2.48e+27", "2.48e-09", "2.86e-05", "3.45e+03", "6.09e+09"}},  // m = 9
    {{"9.54e-07", "6.41e-03", "1.10e+12", "1.24e+27", "3.10e-10", "1.29e-05", "1.72e+03", "3.04e+09"},
     {"9.54e-07", "5.21e-03", "1.10e+12", "1.24e+27", "3.10e-10", "5.56e-06", "1.72e+03", "3.04e+09"}},  // m = 10
    {{"2.38e-07", "2.29e-03", "5.50e+11", "6.19e+26", "3.88e-11", "2.56e-06", "8.62e+02", "1.52e+09"},
     {"2.38e-07", "1.82e-03", "5.50e+11", "6.19e+26", "3.88e-11", "1.01e-06", "8.62e+02", "1.52e+09"}},  // m = 11
    {{"5.96e-08", "8.39e-04", "2.75e+11", "3.09e+26", "4.85e-12", "5.03e-07", "4.31e+02", "7.61e+08"},
     {"5.96e-08", "6.17e-04", "2.75e+11", "3.09e+26", "4.85e-12", "1.78e-07", "4.31e+02", "7.61e+08"}},  // m = 12
    {{"1.49e-08", "3.09e-04", "1.37e+11", "1.55e+26", "6.06e-13", "1.05e-07", "2.15e+02", "3.81e+08"},
     {"1.49e-08", "2.06e-04", "1.37e+11", "1.55e+26", "6.06e-13", "3.07e-08", "2.16e+02", "3.81e+08"}},  // m = 13
    {{"3.73e-09", "1.12e-04", "6.87e+10", "7.74e+25", "7.58e-14", "2.56e-08", "1.08e+02", "1.90e+08"},
     {"3.73e-09", "6.76e-05", "6.87e+10", "7.74e+25", "7.57e-14", "5.17e-09", "1.08e+02", "1.90e+08"}},  // m = 14
    {{"9.31e-10", "3.66e-05", "3.44e+10", "3.87e+25", "9.27e-15", "4.98e-09", "5.38e+01", "9.52e+07"},
     {"9.31e-10", "2.18e-05", "3.44e+10", "3.87e+25", "9.33e-15", "8.54e-10", "5.39e+01", "9.52e+07"}},  // m = 15
    {{"2.33e-10", "1.29e-05", "1.72e+10", "1.93e+25", "1.22e-15", "8.92e-10", "2.69e+01", "4.76e+07"},
     {"2.33e-10", "6.94e-06", "1.72e+10", "1.93e+25", "1.11e-15", "1.38e-10", "2.69e+01", "4.76e+07"}},  // m = 16
};

// Table 2: gamma_j = 0.875^j.
constexpr Row kTable2[13] = {
    {{"3.42e-03", "4.64e-01", "2.03e+01", "2.04e+01", "7.12e-05", "1.47e-02", "2.82e-01", "2.83e-01"},
     {"3.42e-03", "4.84e-01", "2.04e+01", "2.06e+01", "7.12e-05", "1.83e-02", "3.46e-01", "3.48e-01"}},  // m = 4
    {{"8.54e-04", "1.87e-01", "9.99e+00", "1.01e+01", "8.90e-06", "3.54e-03", "1.16e-01", "1.17e-01"},
     {"8.54e-04", "1.95e-01", "1.01e+01", "1.01e+01", "8.90e-06", "4.45e-03", "1.38e-01", "1.39e-01"}},  // m = 5
    {{"2.14e-04", "7.75e-02", "4.91e+00", "4.95e+00", "1.11e-06", "1.04e-03", "4.78e-02", "4.82e-02"},
     {"2.14e-04", "7.46e-02", "4.94e+00", "4.98e+00", "1.11e-06", "9.29e-04", "5.30e-02", "5.34e-02"}},  // m = 6
    {{"5.34e-05", "2.96e-02", "2.40e+00", "2.42e+00", "1.39e-07", "2.54e-04", "1.85e-02", "1.87e-02"},
     {"5.34e-05", "2.80e-02", "2.44e+00", "2.47e+00", "1.39e-07", "1.97e-04", "2.39e-02", "2.41e-02"}},  // m = 7
    {{"1.34e-05", "1.17e-02", "1.17e+00", "1.18e+00", "1.74e-08", "5.77e-05", "7.39e-03", "7.45e-03"},
     {"1.34e-05", "1.01e-02", "1.20e+00", "1.21e+00", "1.74e-08", "3.79e-05", "1.08e-02", "1.09e-02"}},  // m = 8
    {{"3.34e-06", "4.43e-03", "5.66e-01", "5.71e-01", "2.17e-09", "1.29e-05", "2.84e-03", "2.87e-03"},
     {"3.34e-06", "3.54e-03", "5.89e-01", "5.95e-01", "2.17e-09", "6.98e-06", "4.94e-03", "4.97e-03"}},  // m = 9
    {{"8.34e-07", "1.56e-03", "2.72e-01", "2.75e-01", "2.72e-10", "3.03e-06", "1.08e-03", "1.09e-03"},
     {"8.34e-07", "1.22e-03", "2.88e-01", "2.90e-01", "2.72e-10", "1.28e-06", "2.24e-03", "2.26e-03"}},  // m = 10
    {{"2.09e-07", "5.45e-04", "1.30e-01", "1.31e-01", "3.40e-11", "6.24e-07", "4.01e-04", "4.06e-04"},
     {"2.09e-07", "4.10e-04", "1.42e-01", "1.43e-01", "3.40e-11", "2.22e-07", "9.58e-04", "9.66e-04"}},  // m = 11
    {{"5.22e-08", "1.93e-04", "6.20e-02", "6.26e-02", "4.24e-12", "1.16e-07", "1.49e-04", "1.51e-04"},
     {"5.22e-08", "1.35e-04", "6.73e-02", "6.80e-02", "4.24e-12", "3.79e-08", "3.59e-04", "3.64e-04"}},  // m = 12
    {{"1.30e-08", "7.07e-05", "2.94e-02", "2.97e-02", "5.31e-13", "2.48e-08", "5.43e-05", "5.51e-05"},
     {"1.30e-08", "4.38e-05", "3.33e-02", "3.36e-02", "5.30e-13", "6.34e-09", "2.11e-04", "2.13e-04"}},  // m = 13
    {{"3.26e-09", "2.27e-05", "1.39e-02", "1.40e-02", "6.62e-14", "4.56e-09", "1.99e-05", "2.02e-05"},
     {"3.26e-09", "1.40e-05", "1.58e-02", "1.60e-02", "6.62e-14", "1.04e-09", "8.23e-05", "8.31e-05"}},  // m = 14
    {{"8.15e-10", "8.01e-06", "6.49e-03", "6.57e-03", "8.49e-15", "1.10e-09", "7.15e-06", "7.26e-06"},
     {"8.15e-10", "4.41e-06", "7.70e-03", "7.78e-03", "8.22e-15", "1.67e-10", "4.44e-05", "4.48e-05"}},  // m = 15
    {{"2.04e-10", "2.68e-06", "3.02e-03", "3.06e-03", "9.99e-16", "1.81e-10", "2.57e-06", "2.61e-06"},
     {"2.04e-10", "1.37e-06", "3.76e-03", "3.80e-03", "8.88e-16", "2.64e-11", "2.14e-05", "2.15e-05"}},  // m = 16
};

// Table 3: gamma_j = j^-2.
constexpr Row kTable3[13] = {
    {{"3.91e-03", "2.75e-02", "4.75e-02", "4.90e-02", "8.14e-05", "7.68e-04", "1.80e-03", "1.88e-03"},
     {"3.91e-03", "3.20e-02", "5.97e-02", "6.17e-02", "8.14e-05", "1.27e-03", "4.40e-03", "4.62e-03"}},  // m = 4
    {{"9.77e-04", "8.98e-03", "1.78e-02", "1.84e-02", "1.02e-05", "1.48e-04", "4.88e-04", "5.20e-04"},
     {"9.77e-04", "1.25e-02", "2.22e-02", "2.30e-02", "1.02e-05", "3.13e-04", "1.23e-03", "1.30e-03"}},  // m = 5
    {{"2.44e-04", "2.95e-03", "6.29e-03", "6.56e-03", "1.27e-06", "3.37e-05", "1.20e-04", "1.31e-04"},
     {"2.44e-04", "3.20e-03", "7.23e-03", "7.66e-03", "1.27e-06", "3.62e-05", "2.47e-04", "2.89e-04"}},  // m = 6
    {{"6.10e-05", "8.96e-04", "2.22e-03", "2.35e-03", "1.59e-07", "5.05e-06", "2.91e-05", "3.31e-05"},
     {"6.10e-05", "1.11e-03", "2.65e-03", "2.88e-03", "1.59e-07", "8.38e-06", "6.91e-05", "9.12e-05"}},  // m = 7
    {{"1.53e-05", "2.96e-04", "7.86e-04", "8.36e-04", "1.99e-08", "1.04e-06", "6.94e-06", "8.16e-06"},
     {"1.53e-05", "3.44e-04", "1.00e-03", "1.12e-03", "1.99e-08", "1.37e-06", "2.16e-05", "3.52e-05"}},  // m = 8
    {{"3.81e-06", "9.34e-05", "2.81e-04", "3.02e-04", "2.48e-09", "1.90e-07", "1.67e-06", "2.02e-06"},
     {"3.81e-06", "9.15e-05", "3.27e-04", "3.64e-04", "2.48e-09", "1.60e-07", "4.70e-06", "6.18e-06"}},  // m = 9
    {{"9.54e-07", "2.78e-05", "9.54e-05", "1.03e-04", "3.10e-10", "4.07e-08", "4.20e-07", "5.14e-07"},
     {"9.54e-07", "2.69e-05", "1.19e-04", "1.32e-04", "3.10e-10", "2.49e-08", "1.83e-06", "2.37e-06"}},  // m = 10
    {{"2.38e-07", "8.95e-06", "3.34e-05", "3.64e-05", "3.88e-11", "6.34e-09", "9.59e-08", "1.21e-07"},
     {"2.38e-07", "8.25e-06", "4.10e-05", "4.71e-05", "3.88e-11", "3.76e-09", "3.25e-07", "5.44e-07"}},  // m = 11
    {{"5.96e-08", "2.68e-06", "1.18e-05", "1.30e-05", "4.85e-12", "1.30e-09", "2.36e-08", "3.03e-08"},
     {"5.96e-08", "2.54e-06", "1.46e-05", "1.68e-05", "4.85e-12", "6.34e-10", "1.16e-07", "1.64e-07"}},  // m = 12
    {{"1.49e-08", "8.29e-07", "4.05e-06", "4.50e-06", "6.06e-13", "2.04e-10", "5.79e-09", "7.61e-09"},
     {"1.49e-08", "7.08e-07", "4.69e-06", "5.76e-06", "6.06e-13", "9.21e-11", "2.45e-08", "5.16e-08"}},  // m = 13
    {{"3.73e-09", "2.50e-07", "1.40e-06", "1.57e-06", "7.58e-14", "4.11e-11", "1.40e-09", "1.88e-09"},
     {"3.73e-09", "1.97e-07", "1.60e-06", "1.98e-06", "7.57e-14", "1.29e-11", "7.04e-09", "2.04e-08"}},  // m = 14
    {{"9.31e-10", "7.70e-08", "4.91e-07", "5.54e-07", "9.27e-15", "6.15e-12", "3.45e-10", "4.79e-10"},
     {"9.31e-10", "5.59e-08", "5.50e-07", "7.09e-07", "9.33e-15", "1.74e-12", "2.52e-09", "4.52e-09"}},  // m = 15
    {{"2.33e-10", "2.34e-08", "1.71e-07", "1.95e-07", "1.22e-15", "1.00e-12", "8.51e-11", "1.22e-10"},
     {"2.33e-10", "1.69e-08", "1.89e-07", "2.52e-07", "1.11e-15", "2.70e-13", "9.54e-10", "1.45e-09"}},  // m = 16
};

constexpr int kS[4] = {1, 5, 50, 100};

const Row& row_of(int table, int m) {
    if (m < kReferenceMinM || m > kReferenceMaxM) throw std::out_of_range("reference tables cover m = 4..16");
    const auto i = static_cast<std::size_t>(m - kReferenceMinM);
    switch (table) {
        case 1: return kTable1[i];
        case 2: return kTable2[i];
        case 3: return kTable3[i];
        default: throw std::out_of_range("reference table must be 1, 2 or 3");
    }
}

std::size_t column_of(double alpha, int s) {
    std::size_t col = 0;
    if (alpha == 1.0) col = 4;
    else if (alpha != 0.5) throw std::out_of_range("reference tables cover alpha = 0.5 and 1");
    for (std::size_t k = 0; k < 4; ++k)
        if (kS[k] == s) return col + k;
    throw std::out_of_range("reference tables cover s = 1, 5, 50, 100");
}

}  // namespace

std::span<const int> reference_dimensions() { return kS; }

WeightSequence reference_weights(int table) {
    switch (table) {
        case 1: return WeightSequence::constant(1.0);
        case 2: return WeightSequence::geometric(0.875);
        case 3: return WeightSequence::polynomial(2.0);
        default: throw std::out_of_range("reference table must be 1, 2 or 3");
    }
}

ReferenceCell reference_cell(int table, double alpha, int s, int m) {
    const Row& r = row_of(table, m);
    const auto c = column_of(alpha, s);
    return {r.top[c], r.bottom[c], std::stod(r.top[c]), std::stod(r.bottom[c])};
}

bool is_known_print_anomaly(int table, double alpha, int s, int m) {
    // s = 1, alpha = 1 cells whose printed CBC value differs from the exact
    // closed form at the displayed precision (values around 1e-14 and below).
    if (s != 1 || alpha != 1.0) return false;
    if (table == 2) return m >= 14;
    return (table == 1 || table == 3) && m >= 15;
}

}  // namespace plr
