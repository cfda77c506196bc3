#include "plr/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace plr {

namespace {

std::uint64_t to_uint(const std::string& tok, const std::string& what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
        throw InputError("expected a non-negative integer for " + what + ", got '" + tok + "'");
    return v;
}

double to_double(const std::string& tok, const std::string& what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
        throw InputError("expected a number for " + what + ", got '" + tok + "'");
    return v;
}

struct Header {
    std::uint32_t b;
    int m;
    std::size_t s;
    std::vector<std::string> extra;
};

Header read_header(std::istream& in) {
    std::string line;
    // Leading blank lines and '#' comment lines (config echo) are skipped.
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first != std::string::npos && line[first] != '#') break;
        line.clear();
    }
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.size() < 3) throw InputError("header must read 'b m s', got '" + line + "'");
    Header h{};
    const auto b = to_uint(tok[0], "b");
    const auto m = to_uint(tok[1], "m");
    h.s = static_cast<std::size_t>(to_uint(tok[2], "s"));
    if (b < 2 || b > kMaxBase || !is_prime(b)) throw InputError("header base b = " + tok[0] + " is not a supported prime");
    if (m < 1 || m > 32) throw InputError("header m = " + tok[1] + " is out of range");
    if (h.s == 0) throw InputError("header dimension s must be >= 1");
    h.b = static_cast<std::uint32_t>(b);
    h.m = static_cast<int>(m);
    h.extra.assign(tok.begin() + 3, tok.end());
    return h;
}

}  // namespace

Format parse_format(const std::string& name) {
    if (name == "text") return Format::text;
    if (name == "csv") return Format::csv;
    throw ConfigError("unknown output format '" + name + "' (expected text or csv)");
}

std::string format_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void write_points(std::ostream& out, const PointSet& points, Format format) {
    const char sep = format == Format::csv ? ',' : ' ';
    if (format == Format::csv) {
        out << "h";
        for (std::size_t j = 0; j < points.dimension(); ++j) out << ",x" << j + 1;
        out << '\n';
    } else {
        out << points.base() << ' ' << points.m() << ' ' << points.dimension() << '\n';
    }
    for (std::size_t h = 0; h < points.size(); ++h) {
        if (format == Format::csv) out << h << sep;
        const auto row = points.row(h);
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? std::string(1, sep) : "") << row[j];
        out << '\n';
    }
}

PointSet read_points(std::istream& in) {
    const auto h = read_header(in);
    if (!h.extra.empty()) throw InputError("point file header has unexpected fields");
    PointSet pts(h.b, h.m, h.s);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < h.s; ++j) {
            std::string tok;
            if (!(in >> tok)) throw InputError("point file ends early at row " + std::to_string(i));
            const auto v = to_uint(tok, "point numerator");
            if (v >= pts.denominator()) throw InputError("point numerator " + tok + " is not below b^m");
            pts.at(i, j) = static_cast<std::uint32_t>(v);
        }
    std::string tok;
    if (in >> tok) throw InputError("point file has trailing content '" + tok + "'");
    return pts;
}

void write_scrambled(std::ostream& out, const ScrambledPointSet& points, int m, Format format) {
    const char sep = format == Format::csv ? ',' : ' ';
    if (format == Format::csv) {
        out << "h";
        for (std::size_t j = 0; j < points.dimension(); ++j) out << ",x" << j + 1;
        out << '\n';
    } else {
        out << points.base() << ' ' << m << ' ' << points.dimension() << " scrambled\n";
    }
    char buf[40];
    for (std::size_t h = 0; h < points.size(); ++h) {
        if (format == Format::csv) out << h << sep;
        const auto row = points.row(h);
        for (std::size_t j = 0; j < row.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", row[j]);
            out << (j ? std::string(1, sep) : "") << buf;
        }
        out << '\n';
    }
}

void write_matrices(std::ostream& out, const GeneratingMatrixSet& M) {
    const auto m = static_cast<std::size_t>(M.m());
    out << M.base() << ' ' << M.m() << ' ' << M.dimension() << '\n';
    for (std::size_t j = 0; j < M.dimension(); ++j) {
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t c = 0; c < m; ++c) out << (c ? " " : "") << M.at(j, r, c);
            out << '\n';
        }
        if (j + 1 < M.dimension()) out << '\n';
    }
}

GeneratingMatrixSet read_matrices(std::istream& in) {
    const auto h = read_header(in);
    if (!h.extra.empty()) throw InputError("matrix file header has unexpected fields");
    GeneratingMatrixSet M(h.b, h.m, h.s);
    const auto m = static_cast<std::size_t>(h.m);
    for (std::size_t j = 0; j < h.s; ++j)
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < m; ++c) {
                std::string tok;
                if (!(in >> tok)) throw InputError("matrix file ends early in matrix " + std::to_string(j + 1));
                const auto v = to_uint(tok, "matrix entry");
                if (v >= h.b) throw InputError("matrix entry " + tok + " is not a digit in base " + std::to_string(h.b));
                M.set(j, r, c, static_cast<std::uint32_t>(v));
            }
    std::string tok;
    if (in >> tok) throw InputError("matrix file has trailing content '" + tok + "'");
    return M;
}

GeneratingVector ConstructionRecord::generating_vector() const {
    try {
        return GeneratingVector(Modulus(p), q);
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("construction record is inconsistent: ") + e.what());
    }
}

void write_construction(std::ostream& out, const ConstructionRecord& rec) {
    char alpha[40];
    std::snprintf(alpha, sizeof alpha, "%.17g", rec.alpha);
    out << "plr-construction 1\n";
    out << "b " << rec.b << '\n';
    out << "m " << rec.m << '\n';
    out << "s " << rec.q.size() << '\n';
    out << "alpha " << alpha << '\n';
    out << "weights " << rec.weights << '\n';
    out << "method " << rec.method << '\n';
    out << "p " << rec.p.to_digit_string() << '\n';
    out << "g " << (rec.g ? rec.g->to_digit_string() : std::string("-")) << '\n';
    out << "q\n";
    for (const auto& qj : rec.q) out << qj.to_digit_string() << '\n';
    out << "B\n";
    for (double v : rec.per_dim_B) out << format_sci(v) << '\n';
    out << "end\n";
}

ConstructionRecord read_construction(std::istream& in) {
    std::vector<std::string> tok;
    for (std::string t; in >> t;) tok.push_back(t);
    std::size_t pos = 0;
    auto next = [&](const std::string& what) -> const std::string& {
        if (pos >= tok.size()) throw InputError("construction file ends before " + what);
        return tok[pos++];
    };
    auto expect = [&](const std::string& key) -> const std::string& {
        const auto& k = next(key);
        if (k != key) throw InputError("construction file: expected '" + key + "', found '" + k + "'");
        return next(key + " value");
    };
    if (next("magic") != "plr-construction" || next("version") != "1")
        throw InputError("not a construction file (missing 'plr-construction 1')");
    ConstructionRecord rec;
    const auto b = to_uint(expect("b"), "b");
    if (b < 2 || b > kMaxBase || !is_prime(b)) throw InputError("construction base is not a supported prime");
    rec.b = static_cast<std::uint32_t>(b);
    rec.m = static_cast<int>(to_uint(expect("m"), "m"));
    const auto s = static_cast<std::size_t>(to_uint(expect("s"), "s"));
    rec.alpha = to_double(expect("alpha"), "alpha");
    rec.weights = expect("weights");
    rec.method = expect("method");
    try {
        rec.p = Poly::parse(rec.b, expect("p"));
        const auto& g = expect("g");
        if (g != "-") rec.g = Poly::parse(rec.b, g);
        if (next("q") != "q") throw InputError("construction file: expected 'q'");
        for (std::size_t j = 0; j < s; ++j) rec.q.push_back(Poly::parse(rec.b, next("q_" + std::to_string(j + 1))));
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("construction file: ") + e.what());
    }
    if (rec.p.degree() != rec.m) throw InputError("construction file: deg(p) does not match m");
    if (next("B") != "B") throw InputError("construction file: expected 'B'");
    while (pos < tok.size() && tok[pos] != "end") rec.per_dim_B.push_back(to_double(tok[pos++], "B value"));
    if (pos >= tok.size()) throw InputError("construction file: missing 'end'");
    if (rec.per_dim_B.size() != s) throw InputError("construction file: expected one B value per dimension");
    return rec;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace plr
