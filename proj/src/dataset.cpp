#include "rgpcm/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rgpcm {

namespace {

// One CSV record, RFC-4180 quoting. Returns false at end of input.
bool read_record(const std::string& text, std::size_t& pos, std::vector<std::string>& fields) {
    fields.clear();
    if (pos >= text.size()) return false;
    std::string field;
    bool quoted = false;
    while (pos <= text.size()) {
        const char c = pos < text.size() ? text[pos] : '\n';
        if (quoted) {
            if (c == '"') {
                if (pos + 1 < text.size() && text[pos + 1] == '"') {
                    field.push_back('"');
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            ++pos;
            continue;
        }
        if (c == '"' && field.empty()) {
            quoted = true;
            ++pos;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            ++pos;
        } else if (c == '\n' || c == '\r') {
            while (pos < text.size() && (text[pos] == '\r' || text[pos] == '\n')) {
                if (text[pos] == '\n') {
                    ++pos;
                    break;
                }
                ++pos;
            }
            fields.push_back(std::move(field));
            return true;
        } else {
            field.push_back(c);
            ++pos;
        }
        if (pos >= text.size()) {
            fields.push_back(std::move(field));
            return true;
        }
    }
    return true;
}

double parse_number(const std::string& s, const std::string& origin, int row, int col) {
    // from_chars is locale-independent: decimal point only.
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data() + a, s.data() + b, v);
    if (a == b || ec != std::errc{} || end != s.data() + b || !std::isfinite(v))
        throw std::runtime_error(origin + ": non-numeric cell at row " + std::to_string(row) +
                                 ", column " + std::to_string(col) + " ('" + s + "')");
    return v;
}

}  // namespace

Dataset parse_csv(const std::string& text, const std::optional<std::string>& label_column,
                  const std::string& origin) {
    std::size_t pos = 0;
    std::vector<std::string> header;
    if (!read_record(text, pos, header) || header.empty())
        throw std::runtime_error(origin + ": missing header row");

    int label_idx = -1;
    if (label_column) {
        const auto it = std::find(header.begin(), header.end(), *label_column);
        if (it == header.end())
            throw std::runtime_error(origin + ": label column '" + *label_column +
                                     "' not found in header");
        label_idx = static_cast<int>(it - header.begin());
    }

    Dataset d;
    for (int j = 0; j < static_cast<int>(header.size()); ++j)
        if (j != label_idx) d.columns.push_back(header[j]);

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::vector<std::string> categories;
    std::vector<std::string> fields;
    int row_no = 1;  // header is row 1
    while (read_record(text, pos, fields)) {
        ++row_no;
        if (fields.size() == 1 && fields[0].empty()) continue;  // trailing blank line
        if (fields.size() != header.size())
            throw std::runtime_error(origin + ": row " + std::to_string(row_no) + " has " +
                                     std::to_string(fields.size()) + " fields, expected " +
                                     std::to_string(header.size()));
        std::vector<double> vals;
        vals.reserve(header.size());
        for (int j = 0; j < static_cast<int>(fields.size()); ++j) {
            if (j == label_idx) {
                const auto it = std::find(categories.begin(), categories.end(), fields[j]);
                if (it == categories.end()) {
                    labels.push_back(static_cast<int>(categories.size()));
                    categories.push_back(fields[j]);
                } else {
                    labels.push_back(static_cast<int>(it - categories.begin()));
                }
            } else {
                vals.push_back(parse_number(fields[j], origin, row_no, j + 1));
            }
        }
        rows.push_back(std::move(vals));
    }
    if (rows.empty()) throw std::runtime_error(origin + ": no data rows");

    d.values = Matrix(static_cast<int>(rows.size()), static_cast<int>(d.columns.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            d.values(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    if (label_idx >= 0) {
        d.truth = Partition::from_labels(std::move(labels));
        d.truth_names = std::move(categories);
    }
    return d;
}

Dataset load_csv(const std::string& path, const std::optional<std::string>& label_column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_csv: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), label_column, path);
}

Dataset standardize(const Dataset& d) {
    const int n = d.n();
    const int p = d.p();
    if (n < 2) throw std::invalid_argument("standardize: needs at least 2 rows");

    Dataset out = d;
    out.col_means.assign(p, 0.0);
    out.col_sds.assign(p, 0.0);
    for (int j = 0; j < p; ++j) {
        double mean = 0.0;
        for (int i = 0; i < n; ++i) mean += d.values(i, j);
        mean /= n;
        double ss = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = d.values(i, j) - mean;
            ss += v * v;
        }
        const double sd = std::sqrt(ss / (n - 1));
        if (!(sd > 0.0)) {
            const std::string name = j < static_cast<int>(d.columns.size())
                                         ? d.columns[j]
                                         : ("#" + std::to_string(j + 1));
            throw std::invalid_argument("standardize: column '" + name + "' is constant");
        }
        out.col_means[j] = mean;
        out.col_sds[j] = sd;
        for (int i = 0; i < n; ++i) out.values(i, j) = (d.values(i, j) - mean) / sd;
    }
    out.standardized = true;
    return out;
}

std::string format_g17(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                         std::chars_format::general, 17);
    if (ec != std::errc{}) throw std::runtime_error("format_g17: value does not format");
    return std::string(buf, end);
}

void write_csv(const std::string& path, const Matrix& values,
               const std::vector<std::string>& columns, const std::vector<int>* labels,
               const std::string& label_column) {
    if (static_cast<int>(columns.size()) != values.cols())
        throw std::invalid_argument("write_csv: header size mismatch");
    if (labels && static_cast<int>(labels->size()) != values.rows())
        throw std::invalid_argument("write_csv: label size mismatch");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open '" + path + "' for writing");
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (j) out << ',';
        out << columns[j];
    }
    if (labels) out << ',' << label_column;
    out << '\n';
    for (int i = 0; i < values.rows(); ++i) {
        for (int j = 0; j < values.cols(); ++j) {
            if (j) out << ',';
            out << format_g17(values(i, j));
        }
        if (labels) out << ',' << (*labels)[i];
        out << '\n';
    }
}

}  // namespace rgpcm
