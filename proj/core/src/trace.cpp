#include "gsgdm/trace.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace gsgdm {
namespace {

constexpr std::size_t kColumns = 11;

void write_optional(std::ostream& out, const std::optional<double>& value) {
  out << ',';
  if (value) out << format_real(*value);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_real(std::string_view field, std::size_t line_no) {
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::runtime_error("trace line " + std::to_string(line_no) + ": bad number '" +
                             std::string(field) + "'");
  }
  return value;
}

std::optional<double> parse_optional(std::string_view field, std::size_t line_no) {
  if (field.empty()) return std::nullopt;
  return parse_real(field, line_no);
}

// Mean of an optional column; empty as soon as one run lacks it.
template <typename Getter>
std::optional<double> mean_optional(std::span<const std::vector<TraceRow>> runs, std::size_t row,
                                    Getter get) {
  double sum = 0.0;
  for (const auto& run : runs) {
    const std::optional<double>& value = get(run[row]);
    if (!value) return std::nullopt;
    sum += *value;
  }
  return sum / static_cast<double>(runs.size());
}

}  // namespace

std::string format_real(double value) {
  char buffer[64];
  const auto [ptr, ec] =
      std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("format_real: conversion failed");
  return std::string(buffer, ptr);
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows) {
  out << kTraceHeader << '\n';
  for (const TraceRow& row : rows) {
    out << row.k << ',' << format_real(row.f_x);
    write_optional(out, row.f_w);
    write_optional(out, row.f_y);
    out << ',' << format_real(row.grad_sq) << ',' << format_real(row.m_sq);
    write_optional(out, row.phi);
    write_optional(out, row.varphi);
    write_optional(out, row.bound);
    write_optional(out, row.resid_w);
    write_optional(out, row.resid_v);
    out << '\n';
  }
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw std::runtime_error("trace: header mismatch, expected '" + std::string(kTraceHeader) +
                             "'");
  }
  std::vector<TraceRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != kColumns) {
      throw std::runtime_error("trace line " + std::to_string(line_no) + ": expected " +
                               std::to_string(kColumns) + " fields");
    }
    TraceRow row;
    row.k = static_cast<std::size_t>(parse_real(fields[0], line_no));
    row.f_x = parse_real(fields[1], line_no);
    row.f_w = parse_optional(fields[2], line_no);
    row.f_y = parse_optional(fields[3], line_no);
    row.grad_sq = parse_real(fields[4], line_no);
    row.m_sq = parse_real(fields[5], line_no);
    row.phi = parse_optional(fields[6], line_no);
    row.varphi = parse_optional(fields[7], line_no);
    row.bound = parse_optional(fields[8], line_no);
    row.resid_w = parse_optional(fields[9], line_no);
    row.resid_v = parse_optional(fields[10], line_no);
    rows.push_back(row);
  }
  return rows;
}

std::vector<TraceRow> mean_trace(std::span<const std::vector<TraceRow>> runs) {
  if (runs.empty()) return {};
  std::size_t length = runs.front().size();
  for (const auto& run : runs) length = std::min(length, run.size());

  const double count = static_cast<double>(runs.size());
  std::vector<TraceRow> mean(length);
  for (std::size_t i = 0; i < length; ++i) {
    TraceRow& out = mean[i];
    out.k = runs.front()[i].k;
    for (const auto& run : runs) {
      out.f_x += run[i].f_x;
      out.grad_sq += run[i].grad_sq;
      out.m_sq += run[i].m_sq;
    }
    out.f_x /= count;
    out.grad_sq /= count;
    out.m_sq /= count;
    out.f_w = mean_optional(runs, i, [](const TraceRow& r) -> const auto& { return r.f_w; });
    out.f_y = mean_optional(runs, i, [](const TraceRow& r) -> const auto& { return r.f_y; });
    out.phi = mean_optional(runs, i, [](const TraceRow& r) -> const auto& { return r.phi; });
    out.varphi = mean_optional(runs, i, [](const TraceRow& r) -> const auto& { return r.varphi; });
    out.bound = mean_optional(runs, i, [](const TraceRow& r) -> const auto& { return r.bound; });
    out.resid_w = mean_optional(runs, i, [](const TraceRow& r) -> const auto& { return r.resid_w; });
    out.resid_v = mean_optional(runs, i, [](const TraceRow& r) -> const auto& { return r.resid_v; });
    out.f_xbar = mean_optional(runs, i, [](const TraceRow& r) -> const auto& { return r.f_xbar; });
  }
  return mean;
}

}  // namespace gsgdm
