#pragma once

#include <array>
#include <string>
#include <vector>

#include "oldb2d/diagnostics.hpp"

namespace oldb2d {

inline constexpr std::array<const char*, 13> kTimeseriesColumns{
    "time",     "energy",   "dissipation",   "source",   "min_gamma", "min_rho", "u_L2",
    "grad_u_L2", "sigma_L1", "sigma_L2", "grad_sigma_L2", "omega_L2", "c_max"};

/// The header row, without a trailing newline.
std::string timeseries_header();
/// One CSV row, 17 significant digits per value, without a trailing newline.
std::string timeseries_row(const DiagnosticsRecord& record);

/// Appends one row, writing the header first if the file is new or empty.
/// Throws FormatError on IO failure.
void append_timeseries(const DiagnosticsRecord& record, const std::string& path);

/// Replaces path with the header and one row per record.
void write_timeseries(const std::vector<DiagnosticsRecord>& records, const std::string& path);

/// Reads a time series back. Norm columns come back as norms with their
/// units; everything else stays at its default (NaN where applicable).
std::vector<DiagnosticsRecord> read_timeseries(const std::string& path);

}  // namespace oldb2d
