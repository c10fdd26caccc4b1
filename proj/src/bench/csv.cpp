#include "kfjlt/bench/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace kfjlt::bench {
namespace {

constexpr const char* kHeader = "experiment,method,m,trial,seed,value";

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void check_written(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

void sort_records(std::vector<TrialRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const TrialRecord& a, const TrialRecord& b) {
    return std::tie(a.method, a.m, a.trial) < std::tie(b.method, b.m, b.trial);
  });
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  std::map<std::pair<std::string, Index>, std::vector<double>> groups;
  for (const auto& r : records) groups[{r.method, r.m}].push_back(r.value);
  std::vector<SummaryRow> out;
  for (const auto& [key, values] : groups) {
    SummaryRow row{key.first, key.second, 0.0, 0.0, values.size()};
    for (double v : values) row.mean += v;
    row.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - row.mean) * (v - row.mean);
      row.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    out.push_back(row);
  }
  return out;
}

std::filesystem::path summary_path(const std::filesystem::path& path) {
  std::filesystem::path out = path;
  out.replace_filename(path.stem().string() + ".summary.csv");
  return out;
}

void emit_csv(const std::filesystem::path& path, std::vector<TrialRecord> records) {
  sort_records(records);
  {
    std::ofstream out = open_for_write(path);
    out << kHeader << '\n';
    for (const auto& r : records) {
      out << r.experiment << ',' << r.method << ',' << r.m << ',' << r.trial << ',' << r.seed << ','
          << format_double(r.value) << '\n';
    }
    check_written(out, path);
  }
  const auto spath = summary_path(path);
  std::ofstream out = open_for_write(spath);
  out << "method,m,mean,std,count\n";
  for (const auto& row : summarize(records)) {
    out << row.method << ',' << row.m << ',' << format_double(row.mean) << ','
        << format_double(row.std) << ',' << row.count << '\n';
  }
  check_written(out, spath);
}

std::vector<TrialRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw std::runtime_error(path.string() + ": missing or unexpected header");
  }
  std::vector<TrialRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    TrialRecord r;
    std::string m, trial, seed, value;
    if (!std::getline(fields, r.experiment, ',') || !std::getline(fields, r.method, ',') ||
        !std::getline(fields, m, ',') || !std::getline(fields, trial, ',') ||
        !std::getline(fields, seed, ',') || !std::getline(fields, value)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected 6 fields");
    }
    try {
      r.m = std::stoull(m);
      r.trial = std::stoull(trial);
      r.seed = std::stoull(seed);
      r.value = std::stod(value);
    } catch (const std::exception&) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": bad number");
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace kfjlt::bench
