#pragma once

// Text formats for point sets, generating matrices and construction results.
//
//   points       header "b m s", then one row of numerators per point
//   scrambled    header "b m s scrambled", then real rows (17 significant digits)
//   matrices     header "b m s", then s blocks of m lines of m digits
//   construction "plr-construction 1" followed by key/value lines, the q_j
//                (digit strings, one per line) and per-dimension B values
//
// Readers throw InputError on malformed content.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plr/ff_poly.hpp"
#include "plr/pointset.hpp"
#include "plr/scramble.hpp"

namespace plr {

/// Invalid flags or parameter combinations (exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unreadable or malformed input file (exit code 3).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Format { text, csv };

/// Throws ConfigError for anything other than "text" or "csv".
Format parse_format(const std::string& name);

void write_points(std::ostream& out, const PointSet& points, Format format = Format::text);
PointSet read_points(std::istream& in);

void write_scrambled(std::ostream& out, const ScrambledPointSet& points, int m, Format format = Format::text);

void write_matrices(std::ostream& out, const GeneratingMatrixSet& M);
GeneratingMatrixSet read_matrices(std::istream& in);

struct ConstructionRecord {
    std::uint32_t b = 2;
    int m = 1;
    double alpha = 1.0;
    std::string weights;
    std::string method;
    Poly p{2};
    std::optional<Poly> g;
    std::vector<Poly> q;
    std::vector<double> per_dim_B;

    std::size_t dimension() const { return q.size(); }
    GeneratingVector generating_vector() const;
};

void write_construction(std::ostream& out, const ConstructionRecord& rec);
ConstructionRecord read_construction(std::istream& in);

/// Reads a whole file; throws InputError if it cannot be opened.
std::string slurp(const std::string& path);

/// 17 significant digits in scientific notation.
std::string format_sci(double v);

}  // namespace plr
