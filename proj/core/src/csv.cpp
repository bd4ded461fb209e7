#include "ssrc/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <system_error>

#include "ssrc/errors.hpp"

namespace ssrc {

std::string format_double(double v) {
    char buf[40];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_number(std::string_view s, std::size_t line_no) {
    double v = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw ParseError("malformed number '" + std::string(s) + "'", line_no);
    return v;
}

}  // namespace

LabeledSeries read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");

    std::string line;
    std::size_t line_no = 0;
    // header (after any comment lines)
    std::size_t n_cols = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_fields(line);
        if (fields.size() < 2 || fields[0] != "i" || fields[1] != "x")
            throw ParseError("expected header 'i,x[,q,xi]'", line_no);
        if (fields.size() > 4) throw ParseError("too many header columns", line_no);
        if (fields.size() >= 3 && fields[2] != "q") throw ParseError("third column must be 'q'", line_no);
        if (fields.size() == 4 && fields[3] != "xi") throw ParseError("fourth column must be 'xi'", line_no);
        n_cols = fields.size();
        break;
    }
    if (n_cols == 0) throw ParseError("missing header 'i,x[,q,xi]'", line_no);

    LabeledSeries out;
    if (n_cols >= 3) out.truth_signal.emplace();
    if (n_cols == 4) out.truth_noise.emplace();

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_fields(line);
        if (fields.size() != n_cols)
            throw ParseError("expected " + std::to_string(n_cols) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        const double idx = parse_number(fields[0], line_no);
        if (idx != static_cast<double>(out.observed.size()))
            throw ParseError("non-contiguous index " + std::string(fields[0]), line_no);
        out.observed.values.push_back(parse_number(fields[1], line_no));
        if (n_cols >= 3) out.truth_signal->values.push_back(parse_number(fields[2], line_no));
        if (n_cols == 4) out.truth_noise->values.push_back(parse_number(fields[3], line_no));
    }

    if (out.observed.size() < 2)
        throw DegenerateInputError("'" + path.string() + "' holds fewer than 2 samples");
    if (!all_finite(out.observed.span()))
        throw ParseError("non-finite sample in '" + path.string() + "'");
    return out;
}

void write_csv(const LabeledSeries& series, const std::filesystem::path& path,
               const std::vector<std::string>& comments) {
    const bool has_q = series.truth_signal.has_value();
    const bool has_xi = series.truth_noise.has_value();
    if (has_xi && !has_q) throw ContractError("write_csv: truth_noise requires truth_signal");
    if (has_q && series.truth_signal->size() != series.observed.size())
        throw ContractError("write_csv: truth_signal length mismatch");
    if (has_xi && series.truth_noise->size() != series.observed.size())
        throw ContractError("write_csv: truth_noise length mismatch");

    std::ofstream outf(path);
    if (!outf) throw IoError("cannot write '" + path.string() + "'");
    for (const auto& c : comments) outf << "# " << c << '\n';
    outf << (has_xi ? "i,x,q,xi" : has_q ? "i,x,q" : "i,x") << '\n';
    for (std::size_t i = 0; i < series.observed.size(); ++i) {
        outf << i << ',' << format_double(series.observed[i]);
        if (has_q) outf << ',' << format_double((*series.truth_signal)[i]);
        if (has_xi) outf << ',' << format_double((*series.truth_noise)[i]);
        outf << '\n';
    }
    if (!outf) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace ssrc
