#include "spgemm/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace spgemm {

namespace {

enum class Field { Real, Integer, Pattern };
enum class Symmetry { General, Symmetric, SkewSymmetric };

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

template <class N>
N parse_number(std::string_view tok, std::size_t line, const char* what) {
    N value{};
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError(std::string("bad ") + what + " '" + std::string(tok) + "'", line);
    }
    return value;
}

bool blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

TriplesMatrix<double> read_matrix_market(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) throw ParseError("empty input, expected %%MatrixMarket banner", 0);
    ++lineno;
    const auto banner = split_ws(line);
    if (banner.size() != 5 || lower(banner[0]) != "%%matrixmarket" || lower(banner[1]) != "matrix") {
        throw ParseError("expected '%%MatrixMarket matrix coordinate <field> <symmetry>'", lineno);
    }
    if (lower(banner[2]) != "coordinate") throw ParseError("only coordinate format is supported", lineno);

    Field field;
    const auto f = lower(banner[3]);
    if (f == "real" || f == "double") field = Field::Real;
    else if (f == "integer") field = Field::Integer;
    else if (f == "pattern") field = Field::Pattern;
    else throw ParseError("unsupported field '" + f + "'", lineno);

    Symmetry sym;
    const auto s = lower(banner[4]);
    if (s == "general") sym = Symmetry::General;
    else if (s == "symmetric") sym = Symmetry::Symmetric;
    else if (s == "skew-symmetric") sym = Symmetry::SkewSymmetric;
    else throw ParseError("unsupported symmetry '" + s + "'", lineno);

    // Size line: first non-comment, non-blank line.
    std::vector<std::string_view> size_tokens;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.starts_with('%') || blank(line)) continue;
        size_tokens = split_ws(line);
        break;
    }
    if (size_tokens.size() != 3) throw ParseError("expected size line '<rows> <cols> <entries>'", lineno);
    const auto nrows = parse_number<index_t>(size_tokens[0], lineno, "row count");
    const auto ncols = parse_number<index_t>(size_tokens[1], lineno, "column count");
    const auto count = parse_number<index_t>(size_tokens[2], lineno, "entry count");
    if (nrows < 0 || ncols < 0 || count < 0) throw ParseError("negative size", lineno);
    if (sym != Symmetry::General && nrows != ncols) throw ParseError("symmetric matrix must be square", lineno);

    TriplesMatrix<double> t(nrows, ncols);
    t.entries.reserve(static_cast<std::size_t>(sym == Symmetry::General ? count : 2 * count));
    const std::size_t expected_tokens = field == Field::Pattern ? 2 : 3;

    index_t seen = 0;
    while (seen < count && std::getline(in, line)) {
        ++lineno;
        if (line.starts_with('%') || blank(line)) continue;
        const auto tok = split_ws(line);
        if (tok.size() != expected_tokens) {
            throw ParseError("expected " + std::to_string(expected_tokens) + " fields, got " +
                                 std::to_string(tok.size()),
                             lineno);
        }
        const auto i = parse_number<index_t>(tok[0], lineno, "row index");
        const auto j = parse_number<index_t>(tok[1], lineno, "column index");
        if (i < 1 || i > nrows || j < 1 || j > ncols) {
            throw ParseError("index (" + std::string(tok[0]) + ", " + std::string(tok[1]) + ") out of range", lineno);
        }
        double v = 1.0;
        if (field == Field::Real) v = parse_number<double>(tok[2], lineno, "value");
        else if (field == Field::Integer) v = static_cast<double>(parse_number<long long>(tok[2], lineno, "value"));

        t.entries.push_back({i - 1, j - 1, v});
        if (i != j && sym == Symmetry::Symmetric) t.entries.push_back({j - 1, i - 1, v});
        if (i != j && sym == Symmetry::SkewSymmetric) t.entries.push_back({j - 1, i - 1, -v});
        ++seen;
    }
    if (seen < count) {
        throw ParseError("premature end of file: " + std::to_string(seen) + " of " + std::to_string(count) +
                             " entries read",
                         lineno);
    }
    return t;
}

TriplesMatrix<double> read_matrix_market(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const TriplesMatrix<double>& t) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << t.nrows << ' ' << t.ncols << ' ' << t.nnz() << '\n';
    char buf[64];
    for (const auto& e : t.entries) {
        auto res = std::to_chars(buf, buf + sizeof buf, e.val);
        out << (e.row + 1) << ' ' << (e.col + 1) << ' ' << std::string_view(buf, res.ptr - buf) << '\n';
    }
}

void write_matrix_market(const std::filesystem::path& path, const TriplesMatrix<double>& t) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    write_matrix_market(out, t);
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace spgemm
