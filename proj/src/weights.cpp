#include "plr/weights.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace plr {

namespace {

double parse_double(std::string_view text, std::string_view what) {
    // std::from_chars for double is available in libstdc++ >= 11.
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw std::invalid_argument("malformed number '" + std::string(text) + "' in " + std::string(what));
    return v;
}

std::string format_double(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

}  // namespace

WeightSequence::WeightSequence(Kind kind, double param, std::vector<double> values)
    : kind_(kind), param_(param), values_(std::move(values)) {
    switch (kind_) {
        case Kind::constant:
            if (!(param_ > 0.0) || !std::isfinite(param_))
                throw std::invalid_argument("constant weight must be positive");
            break;
        case Kind::geometric:
            if (!(param_ > 0.0 && param_ <= 1.0))
                throw std::invalid_argument("geometric weight ratio must lie in (0, 1]");
            break;
        case Kind::polynomial:
            if (!(param_ >= 0.0) || !std::isfinite(param_))
                throw std::invalid_argument("polynomial weight exponent must be >= 0");
            break;
        case Kind::list:
            if (values_.empty()) throw std::invalid_argument("weight list is empty");
            for (std::size_t i = 0; i < values_.size(); ++i) {
                if (!(values_[i] > 0.0) || !std::isfinite(values_[i]))
                    throw std::invalid_argument("weights must be positive");
                if (i > 0 && values_[i] > values_[i - 1])
                    throw std::invalid_argument("weights must be non-increasing");
            }
            break;
    }
}

WeightSequence WeightSequence::constant(double c) { return {Kind::constant, c, {}}; }
WeightSequence WeightSequence::geometric(double c) { return {Kind::geometric, c, {}}; }
WeightSequence WeightSequence::polynomial(double e) { return {Kind::polynomial, e, {}}; }
WeightSequence WeightSequence::list(std::vector<double> values) { return {Kind::list, 0.0, std::move(values)}; }

WeightSequence WeightSequence::parse(std::string_view spec) {
    double exponent = 1.0;
    if (const auto caret = spec.rfind('^'); caret != std::string_view::npos) {
        exponent = parse_double(spec.substr(caret + 1), "weight exponent");
        spec = spec.substr(0, caret);
    }
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos)
        throw std::invalid_argument("weight spec '" + std::string(spec) + "' needs the form kind:value");
    const auto kind = spec.substr(0, colon);
    const auto arg = spec.substr(colon + 1);

    auto make = [&]() -> WeightSequence {
        if (kind == "const") return constant(parse_double(arg, "const weight"));
        if (kind == "geom") return geometric(parse_double(arg, "geom weight"));
        if (kind == "poly") return polynomial(parse_double(arg, "poly weight"));
        if (kind == "list") {
            std::vector<double> values;
            std::size_t start = 0;
            while (start <= arg.size()) {
                const auto comma = arg.find(',', start);
                const auto piece = arg.substr(start, comma == std::string_view::npos ? arg.npos : comma - start);
                values.push_back(parse_double(piece, "weight list"));
                if (comma == std::string_view::npos) break;
                start = comma + 1;
            }
            return list(std::move(values));
        }
        throw std::invalid_argument("unknown weight kind '" + std::string(kind) + "'");
    };
    WeightSequence w = make();
    if (exponent != 1.0) w = w.powered(exponent);
    return w;
}

double WeightSequence::operator()(std::size_t j) const {
    if (j == 0) throw std::out_of_range("weights are indexed from 1");
    double g = 0.0;
    switch (kind_) {
        case Kind::constant: g = param_; break;
        case Kind::geometric: g = std::pow(param_, static_cast<double>(j)); break;
        case Kind::polynomial: g = std::pow(static_cast<double>(j), -param_); break;
        case Kind::list:
            if (j > values_.size())
                throw std::out_of_range("weight list has only " + std::to_string(values_.size()) + " entries");
            g = values_[j - 1];
            break;
    }
    return exponent_ == 1.0 ? g : std::pow(g, exponent_);
}

std::vector<double> WeightSequence::first(std::size_t s) const {
    std::vector<double> out(s);
    for (std::size_t j = 0; j < s; ++j) out[j] = (*this)(j + 1);
    return out;
}

WeightSequence WeightSequence::powered(double exponent) const {
    if (!(exponent > 0.0) || !std::isfinite(exponent))
        throw std::invalid_argument("weight exponent must be positive");
    WeightSequence w = *this;
    w.exponent_ *= exponent;
    return w;
}

std::string WeightSequence::to_string() const {
    std::string s;
    switch (kind_) {
        case Kind::constant: s = "const:" + format_double(param_); break;
        case Kind::geometric: s = "geom:" + format_double(param_); break;
        case Kind::polynomial: s = "poly:" + format_double(param_); break;
        case Kind::list:
            s = "list:";
            for (std::size_t i = 0; i < values_.size(); ++i) s += (i ? "," : "") + format_double(values_[i]);
            break;
    }
    if (exponent_ != 1.0) s += "^" + format_double(exponent_);
    return s;
}

}  // namespace plr
