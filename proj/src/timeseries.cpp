#include "oldb2d/timeseries.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oldb2d/errors.hpp"

namespace oldb2d {

namespace {

std::vector<double> row_values(const DiagnosticsRecord& r) {
  return {r.time,         r.energy,          r.dissipation,           r.source,
          r.min_gamma,    r.min_rho,         r.norm("u_L2"),          r.norm("grad_u_L2"),
          r.norm("sigma_L1"), r.norm("sigma_L2"), r.norm("grad_sigma_L2"), r.norm("omega_L2"),
          r.c_max};
}

// Units of every norm key, taken from a zero state.
const NormReport& norm_units() {
  static const NormReport units = [] {
    const SpectralGrid g = make_grid(8, 1.0);
    const SimState z{0.0, {ScalarField(g), ScalarField(g)},
                     {ScalarField(g), ScalarField(g), ScalarField(g)}, ScalarField(g)};
    return norms(z);
  }();
  return units;
}

}  // namespace

std::string timeseries_header() {
  std::string h;
  for (std::size_t i = 0; i < kTimeseriesColumns.size(); ++i) {
    if (i) h += ',';
    h += kTimeseriesColumns[i];
  }
  return h;
}

std::string timeseries_row(const DiagnosticsRecord& record) {
  std::string row;
  char buf[40];
  const auto values = row_values(record);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.17g", i ? "," : "", values[i]);
    row += buf;
  }
  return row;
}

void append_timeseries(const DiagnosticsRecord& record, const std::string& path) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw FormatError("cannot open '" + path + "' for appending");
  if (fresh) out << timeseries_header() << '\n';
  out << timeseries_row(record) << '\n';
  if (!out) throw FormatError("write to '" + path + "' failed");
}

void write_timeseries(const std::vector<DiagnosticsRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << timeseries_header() << '\n';
  for (const auto& r : records) out << timeseries_row(r) << '\n';
  if (!out) throw FormatError("write to '" + path + "' failed");
}

std::vector<DiagnosticsRecord> read_timeseries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open time series '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != timeseries_header())
    throw FormatError("'" + path + "' does not start with the time-series header");
  std::vector<DiagnosticsRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double x = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0')
        throw FormatError("line " + std::to_string(line_no) + ": unreadable value '" + cell + "'");
      v.push_back(x);
    }
    if (v.size() != kTimeseriesColumns.size())
      throw FormatError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(kTimeseriesColumns.size()) + " columns");
    DiagnosticsRecord r;
    r.time = v[0];
    r.energy = v[1];
    r.dissipation = v[2];
    r.source = v[3];
    r.min_gamma = v[4];
    r.min_rho = v[5];
    r.min_eigenvalue = 0.5 * v[4];
    r.c_max = v[12];
    const char* norm_cols[] = {"u_L2", "grad_u_L2", "sigma_L1", "sigma_L2", "grad_sigma_L2",
                               "omega_L2"};
    for (int i = 0; i < 6; ++i)
      r.norms[norm_cols[i]] = {v[6 + i], norm_units().at(norm_cols[i]).units};
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace oldb2d
