#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rgpcm/linalg.hpp"
#include "rgpcm/selection.hpp"

namespace rgpcm {

struct Dataset {
    Matrix values;                              // n x p numeric data
    std::vector<std::string> columns;           // excludes the label column
    std::optional<Partition> truth;             // from the label column, when named
    std::vector<std::string> truth_names;       // category strings, index = label
    bool standardized = false;
    std::vector<double> col_means, col_sds;     // transforms stored when standardized

    int n() const { return values.rows(); }
    int p() const { return values.cols(); }
};

// Parses a rectangular numeric CSV with a header row (RFC-4180 quoting
// accepted, decimal point only). When `label_column` names a header, that
// column is split off as the truth partition (categories by first
// appearance). Errors carry 1-based row/column positions.
Dataset load_csv(const std::string& path, const std::optional<std::string>& label_column = {});

// Same parser over an in-memory string; `origin` names the source in errors.
Dataset parse_csv(const std::string& text, const std::optional<std::string>& label_column = {},
                  const std::string& origin = "<string>");

// Center each column by its mean and scale by its sample standard deviation
// (n-1 denominator); errors naming any constant column.
Dataset standardize(const Dataset& d);

// Writes n x p values (plus optional labels) as CSV with 17 significant
// digits so reloading round-trips exactly.
void write_csv(const std::string& path, const Matrix& values,
               const std::vector<std::string>& columns,
               const std::vector<int>* labels = nullptr,
               const std::string& label_column = "class");

std::string format_g17(double v);

}  // namespace rgpcm
