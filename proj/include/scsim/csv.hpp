/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "scsim/simulation.hpp"

namespace scsim {

/// Locale-independent shortest round-trip formatting.
std::string format_double(double v);

/// Rectangular CSV writer; throws std::runtime_error on I/O failure or
/// ragged rows.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path,
            const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);
  void row_numeric(const std::vector<double>& cells);

 private:
  std::string path_;
  std::size_t columns_;
  std::ofstream out_;

  void write_cells(const std::vector<std::string>& cells);
};

void write_timeseries_csv(const std::filesystem::path& path,
                          const SimResult& r);

}  // namespace scsim
