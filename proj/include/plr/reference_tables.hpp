#pragma once

// Published reference values for b = 2: Table 1 (gamma_j = 1), Table 2
// (gamma_j = 0.875^j) and Table 3 (gamma_j = j^-2); alpha in {0.5, 1},
// s in {1, 5, 50, 100}, m = 4..16.

#include <span>
#include <string>

#include "plr/weights.hpp"

namespace plr {

inline constexpr int kReferenceMinM = 4;
inline constexpr int kReferenceMaxM = 16;

struct ReferenceCell {
    std::string top_text;     // CBC value as printed
    std::string bottom_text;  // digital-net value as printed
    double top;
    double bottom;
};

/// Throws std::out_of_range outside the tabulated grid.
ReferenceCell reference_cell(int table, double alpha, int s, int m);

std::span<const int> reference_dimensions();

WeightSequence reference_weights(int table);

/// s = 1 cells whose printed CBC value disagrees with the exact closed form at
/// the displayed three digits: alpha = 1, m >= 15 in Tables 1 and 3, and
/// m >= 14 in Table 2.
bool is_known_print_anomaly(int table, double alpha, int s, int m);

}  // namespace plr
