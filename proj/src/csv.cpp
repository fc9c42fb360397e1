/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "scsim/csv.hpp"

#include <charconv>
#include <stdexcept>

namespace scsim {

std::string format_double(double v) {
  if (v == 0.0) return "0";  // avoid "-0"
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& header)
    : path_(path.string()), columns_(header.size()), out_(path) {
  if (!out_) throw std::runtime_error("cannot open " + path_);
  write_cells(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw std::runtime_error("csv row has " + std::to_string(cells.size()) +
                             " cells, expected " + std::to_string(columns_));
  write_cells(cells);
}

void CsvWriter::row_numeric(const std::vector<double>& cells) {
  std::vector<std::string> s;
  s.reserve(cells.size());
  for (double v : cells) s.push_back(format_double(v));
  row(s);
}

void CsvWriter::write_cells(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  if (!out_) throw std::runtime_error("write failed: " + path_);
}

void write_timeseries_csv(const std::filesystem::path& path,
                          const SimResult& r) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "time_s,freq_hz,delta_f_pu,p_bank_mw,p_bank_pu,i_cell_a,"
         "u_cell_v,u_string_v,soc,charge_enabled,discharge_enabled,"
         "i_d_pu,i_q_pu,v_ac_pu\n";
  for (std::size_t i = 0; i < r.size(); ++i) {
    out << format_double(r.time[i]) << ',' << format_double(r.freq_hz[i])
        << ',' << format_double(r.delta_f_pu[i]) << ','
        << format_double(r.p_bank_mw[i]) << ','
        << format_double(r.p_bank_pu[i]) << ','
        << format_double(r.i_cell_a[i]) << ','
        << format_double(r.u_cell_v[i]) << ','
        << format_double(r.u_string_v[i]) << ',' << format_double(r.soc[i])
        << ',' << (r.charge_enabled[i] ? '1' : '0') << ','
        << (r.discharge_enabled[i] ? '1' : '0') << ','
        << format_double(r.i_d_pu[i]) << ',' << format_double(r.i_q_pu[i])
        << ',' << format_double(r.v_ac_pu[i]) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace scsim
