#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace plr {

/// Product weights gamma_1 >= gamma_2 >= ... > 0.
///
/// Specs on the command line: "const:c", "geom:c" (gamma_j = c^j),
/// "poly:e" (gamma_j = j^-e) and "list:g1,g2,...". An optional trailing
/// "^x" raises every weight to the power x.
class WeightSequence {
public:
    enum class Kind { constant, geometric, polynomial, list };

    static WeightSequence constant(double c);
    static WeightSequence geometric(double c);
    static WeightSequence polynomial(double e);
    static WeightSequence list(std::vector<double> values);
    /// Throws std::invalid_argument on a malformed spec.
    static WeightSequence parse(std::string_view spec);

    Kind kind() const { return kind_; }
    /// gamma_j for j >= 1. Throws std::out_of_range past the end of a list.
    double operator()(std::size_t j) const;
    /// (gamma_1, ..., gamma_s)
    std::vector<double> first(std::size_t s) const;
    /// Every weight raised to `exponent` (composes with an existing power).
    WeightSequence powered(double exponent) const;

    /// Canonical spec string; parse(to_string()) reproduces the sequence.
    std::string to_string() const;

private:
    WeightSequence(Kind kind, double param, std::vector<double> values);

    Kind kind_;
    double param_;
    std::vector<double> values_;
    double exponent_ = 1.0;
};

}  // namespace plr
