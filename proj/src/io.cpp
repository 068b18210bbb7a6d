#include "minresmon/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "minresmon/errors.hpp"

namespace minresmon {

namespace {

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

void strip_cr(std::string& line)
{
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
}

bool blank(const std::string& line)
{
    return line.find_first_not_of(" \t") == std::string::npos;
}

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot open '" + path.string() + "' for writing");
    return out;
}

int parse_int(const std::string& token, long line_no, const std::string& what)
{
    int value = 0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw ParseError("invalid " + what + " '" + token + "'", line_no);
    return value;
}

double parse_double(const std::string& token, long line_no, const std::string& what)
{
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw ParseError("invalid " + what + " '" + token + "'", line_no);
    return value;
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string::size_type start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

} // namespace

SparseMat read_matrix_market(const std::filesystem::path& path)
{
    std::ifstream in = open_input(path);
    long line_no = 0;
    std::string line;

    if (!std::getline(in, line))
        throw ParseError("empty file '" + path.string() + "'", 1);
    ++line_no;
    strip_cr(line);

    std::istringstream banner(line);
    std::string tag, object, format, field, symmetry;
    banner >> tag >> object >> format >> field >> symmetry;
    if (tag != "%%MatrixMarket")
        throw ParseError("missing %%MatrixMarket banner", line_no);
    object = lower(object);
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (object != "matrix")
        throw ParseError("unsupported object '" + object + "' (only matrix)", line_no);
    if (format != "coordinate")
        throw ParseError("unsupported format '" + format + "' (only coordinate)", line_no);
    if (field != "real")
        throw ParseError("unsupported field '" + field + "' (only real)", line_no);
    const bool symmetric = symmetry == "symmetric";
    if (!symmetric && symmetry != "general")
        throw ParseError("unsupported symmetry '" + symmetry + "' (only general or symmetric)",
                         line_no);

    // comments, then the size line
    long rows = -1, cols = -1, nnz = -1;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (blank(line) || line[line.find_first_not_of(" \t")] == '%')
            continue;
        std::istringstream size_line(line);
        std::string extra;
        if (!(size_line >> rows >> cols >> nnz) || (size_line >> extra))
            throw ParseError("malformed size line '" + line + "'", line_no);
        break;
    }
    if (rows < 0 || cols < 0 || nnz < 0)
        throw ParseError("missing size line", line_no);

    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
    long seen = 0;
    while (seen < nnz) {
        if (!std::getline(in, line))
            throw ParseError("expected " + std::to_string(nnz) + " entries, file ends after " +
                             std::to_string(seen), line_no);
        ++line_no;
        strip_cr(line);
        if (blank(line))
            continue;
        std::istringstream entry(line);
        long i = 0, j = 0;
        double v = 0.0;
        std::string extra;
        if (!(entry >> i >> j >> v) || (entry >> extra))
            throw ParseError("malformed entry '" + line + "'", line_no);
        if (i < 1 || i > rows || j < 1 || j > cols)
            throw ParseError("entry index (" + std::to_string(i) + ", " + std::to_string(j) +
                             ") outside " + std::to_string(rows) + " x " + std::to_string(cols),
                             line_no);
        entries.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1), v);
        if (symmetric && i != j)
            entries.emplace_back(static_cast<int>(j - 1), static_cast<int>(i - 1), v);
        ++seen;
    }

    SparseMat mat(static_cast<int>(rows), static_cast<int>(cols));
    mat.setFromTriplets(entries.begin(), entries.end());
    return mat;
}

void write_matrix_market(const SparseMat& mat, const std::filesystem::path& path)
{
    std::ofstream out = open_output(path);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << mat.rows() << " " << mat.cols() << " " << mat.nonZeros() << "\n";
    for (int col = 0; col < mat.outerSize(); ++col)
        for (SparseMat::InnerIterator it(mat, col); it; ++it)
            out << it.row() + 1 << " " << it.col() + 1 << " " << fmt(it.value()) << "\n";
    if (!out)
        throw InputError("failed writing '" + path.string() + "'");
}

Vector read_vector_market(const std::filesystem::path& path)
{
    const SparseMat mat = read_matrix_market(path);
    if (mat.cols() != 1)
        throw InputError("expected a column vector in '" + path.string() + "', got " +
                         std::to_string(mat.rows()) + " x " + std::to_string(mat.cols()));
    Vector v = Vector::Zero(mat.rows());
    for (int col = 0; col < mat.outerSize(); ++col)
        for (SparseMat::InnerIterator it(mat, col); it; ++it)
            v[it.row()] = it.value();
    return v;
}

void write_vector_market(const Vector& v, const std::filesystem::path& path)
{
    std::ofstream out = open_output(path);
    long nnz = 0;
    for (int i = 0; i < v.size(); ++i)
        if (v[i] != 0.0)
            ++nnz;
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << v.size() << " 1 " << nnz << "\n";
    for (int i = 0; i < v.size(); ++i)
        if (v[i] != 0.0)
            out << i + 1 << " 1 " << fmt(v[i]) << "\n";
    if (!out)
        throw InputError("failed writing '" + path.string() + "'");
}

BlockPartition read_partition(const std::filesystem::path& path)
{
    std::ifstream in = open_input(path);
    std::vector<std::pair<std::string, std::vector<int>>> blocks;
    std::string line;
    long line_no = 0;
    int max_index = -1;

    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (blank(line) || line[line.find_first_not_of(" \t")] == '#')
            continue;

        std::istringstream fields(line);
        std::string label, spec, extra_piece;
        fields >> label;
        // the spec may contain spaces around commas; glue the remainder
        while (fields >> extra_piece)
            spec += extra_piece;
        if (spec.empty())
            throw ParseError("block '" + label + "' has no index spec", line_no);
        for (const auto& b : blocks)
            if (b.first == label)
                throw ParseError("duplicate block label '" + label + "'", line_no);

        std::vector<int> indices;
        for (const std::string& token : split(spec, ',')) {
            if (token.empty())
                throw ParseError("empty index token in block '" + label + "'", line_no);
            const auto colon = token.find(':');
            if (colon != std::string::npos) {
                const int a = parse_int(token.substr(0, colon), line_no, "range start");
                const int b = parse_int(token.substr(colon + 1), line_no, "range end");
                if (a < 0 || b <= a)
                    throw ParseError("invalid range '" + token + "' (need 0 <= a < b)", line_no);
                for (int idx = a; idx < b; ++idx)
                    indices.push_back(idx);
            } else {
                const int idx = parse_int(token, line_no, "index");
                if (idx < 0)
                    throw ParseError("negative index '" + token + "'", line_no);
                indices.push_back(idx);
            }
        }
        for (int idx : indices)
            max_index = std::max(max_index, idx);
        blocks.emplace_back(std::move(label), std::move(indices));
    }

    if (blocks.empty())
        throw ParseError("partition file '" + path.string() + "' defines no blocks", line_no);
    return BlockPartition(max_index + 1, std::move(blocks));
}

void write_partition(const BlockPartition& part, const std::filesystem::path& path)
{
    std::ofstream out = open_output(path);
    for (int b = 0; b < part.block_count(); ++b) {
        const IndexBlock& blk = part.block(b);
        out << blk.label << " ";
        if (blk.contiguous) {
            out << blk.begin << ":" << blk.end;
        } else {
            // compress sorted indices into runs
            std::string spec;
            std::size_t i = 0;
            while (i < blk.indices.size()) {
                std::size_t j = i;
                while (j + 1 < blk.indices.size() && blk.indices[j + 1] == blk.indices[j] + 1)
                    ++j;
                if (!spec.empty())
                    spec += ",";
                if (j > i)
                    spec += std::to_string(blk.indices[i]) + ":" + std::to_string(blk.indices[j] + 1);
                else
                    spec += std::to_string(blk.indices[i]);
                i = j + 1;
            }
            out << spec;
        }
        out << "\n";
    }
    if (!out)
        throw InputError("failed writing '" + path.string() + "'");
}

void write_convergence_csv(const ConvergenceHistory& history, const std::filesystem::path& path)
{
    std::ofstream out = open_output(path);
    const bool monitored = !history.rows.empty() &&
                           history.rows.front().eta_block.size() == history.labels.size() &&
                           !history.labels.empty();
    out << "iter,eta,eta_rel";
    if (monitored) {
        for (const auto& label : history.labels)
            out << ",eta_" << label;
        for (const auto& label : history.labels)
            out << ",mu_" << label;
    }
    out << "\n";
    for (const HistoryRow& row : history.rows) {
        out << row.iter << "," << fmt(row.eta) << "," << fmt(row.eta_rel);
        if (monitored) {
            for (double v : row.eta_block)
                out << "," << fmt(v);
            for (double v : row.mu)
                out << "," << fmt(v);
        }
        out << "\n";
    }
    if (!out)
        throw InputError("failed writing '" + path.string() + "'");
}

ConvergenceHistory read_convergence_csv(const std::filesystem::path& path)
{
    std::ifstream in = open_input(path);
    std::string line;
    long line_no = 0;

    if (!std::getline(in, line))
        throw ParseError("empty CSV '" + path.string() + "'", 1);
    ++line_no;
    strip_cr(line);

    const std::vector<std::string> header = split(line, ',');
    if (header.size() < 3 || header[0] != "iter" || header[1] != "eta" || header[2] != "eta_rel")
        throw ParseError("unexpected CSV header '" + line + "'", line_no);

    ConvergenceHistory history;
    std::size_t col = 3;
    while (col < header.size() && header[col].rfind("eta_", 0) == 0) {
        history.labels.push_back(header[col].substr(4));
        ++col;
    }
    const std::size_t k = history.labels.size();
    for (std::size_t b = 0; b < k; ++b, ++col) {
        if (col >= header.size() || header[col] != "mu_" + history.labels[b])
            throw ParseError("expected column 'mu_" + history.labels[b] + "'", line_no);
    }
    if (col != header.size())
        throw ParseError("trailing CSV columns after '" + header[col - 1] + "'", line_no);

    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (blank(line))
            continue;
        const std::vector<std::string> cells = split(line, ',');
        if (cells.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " cells, got " +
                             std::to_string(cells.size()), line_no);
        HistoryRow row;
        row.iter = parse_int(cells[0], line_no, "iteration index");
        row.eta = parse_double(cells[1], line_no, "eta");
        row.eta_rel = parse_double(cells[2], line_no, "eta_rel");
        for (std::size_t b = 0; b < k; ++b)
            row.eta_block.push_back(parse_double(cells[3 + b], line_no, "block norm"));
        for (std::size_t b = 0; b < k; ++b)
            row.mu.push_back(parse_double(cells[3 + k + b], line_no, "mu"));
        history.rows.push_back(std::move(row));
    }
    if (history.rows.empty())
        throw ParseError("CSV '" + path.string() + "' has no data rows", line_no);
    history.eta0 = history.rows.front().eta;
    return history;
}

void write_oracle_report_csv(const OracleReport& report, const std::vector<std::string>& labels,
                             const std::filesystem::path& path)
{
    std::ofstream out = open_output(path);
    out << "iter";
    for (const auto& label : labels)
        out << ",eta_" << label;
    for (const auto& label : labels)
        out << ",explicit_" << label;
    out << ",abs_dev,rel_dev\n";
    for (const OracleRow& row : report.rows) {
        out << row.iter;
        for (double v : row.progressive)
            out << "," << fmt(v);
        for (double v : row.explicit_norms)
            out << "," << fmt(v);
        out << "," << fmt(row.max_abs_dev) << "," << fmt(row.max_rel_dev) << "\n";
    }
    if (!out)
        throw InputError("failed writing '" + path.string() + "'");
}

} // namespace minresmon
