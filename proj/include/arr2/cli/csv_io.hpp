#pragma once

#include <string>
#include <vector>

#include "arr2/data.hpp"
#include "arr2/fit.hpp"

namespace arr2::cli {

/// Shortest-safe text for a double: 17 significant digits.
std::string fmt_double(double v);

/**
 * @brief Reads a dataset CSV: columns t, y, then optional covariates.
 *
 * Lines starting with '#' are skipped. t must increase by exactly one per
 * row; errors cite the file line.
 */
TimeSeriesData read_dataset(const std::string& path);
void write_dataset(const std::string& path, const TimeSeriesData& data, const std::vector<std::string>& comments);

/// chain, iteration, then one column per parameter.
void write_draws(const std::string& path, const inference::DrawsMatrix& draws, const std::vector<std::string>& comments);
inference::DrawsMatrix read_draws(const std::string& path);

using Row = std::vector<std::string>;
void write_table(const std::string& path, const Row& header, const std::vector<Row>& rows,
                 const std::vector<std::string>& comments);

/// Writes text atomically enough for our purposes; throws on I/O failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace arr2::cli
