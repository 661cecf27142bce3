#include "tltrack/trace.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "tltrack/errors.hpp"

namespace tlt::engine {

TraceLog::TraceLog(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw input_error("TraceLog needs at least one column");
}

void TraceLog::push_row(const std::vector<double>& row) {
  if (row.size() != columns_.size()) {
    throw input_error("TraceLog row width " + std::to_string(row.size()) + " != " +
                      std::to_string(columns_.size()));
  }
  data_.insert(data_.end(), row.begin(), row.end());
}

int TraceLog::column_index(const std::string& name) const {
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

void TraceLog::write_csv(std::ostream& os) const {
  os << "# tltrack-trace v1\n";
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (i) os << ',';
    os << columns_[i];
  }
  os << '\n';
  char buf[32];
  const size_t w = columns_.size();
  for (size_t r = 0; r < rows(); ++r) {
    for (size_t c = 0; c < w; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", data_[r * w + c]);
      if (c) os << ',';
      os << buf;
    }
    os << '\n';
  }
}

void TraceLog::save_csv(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  write_csv(f);
  if (!f.good()) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

TraceLog TraceLog::load_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open trace file '" + path + "'");
  std::string line;
  std::vector<std::string> cols;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
    break;
  }
  if (cols.empty()) throw input_error("trace file '" + path + "' has no header row");
  TraceLog log(cols);
  std::vector<double> row(cols.size());
  size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const char* p = line.c_str();
    for (size_t c = 0; c < cols.size(); ++c) {
      char* end = nullptr;
      row[c] = std::strtod(p, &end);
      if (end == p) throw input_error("trace file '" + path + "': bad number at line " +
                                      std::to_string(lineno));
      p = end;
      if (*p == ',') ++p;
    }
    log.push_row(row);
  }
  return log;
}

void write_plot_data(const TraceLog& t, const std::string& out_dir) {
  int i_t = t.column_index("t");
  int i_err = t.column_index("err");
  int i_ev = t.column_index("event");
  if (i_t < 0 || i_err < 0 || i_ev < 0)
    throw input_error("trace lacks the t/err/event columns needed for plot data");
  std::vector<int> i_u;
  for (int k = 1;; ++k) {
    int idx = t.column_index("u" + std::to_string(k));
    if (idx < 0) break;
    i_u.push_back(idx);
  }
  if (i_u.empty()) throw input_error("trace lacks input columns u1..");

  std::ofstream ferr(out_dir + "/tracking_error.dat");
  std::ofstream fctl(out_dir + "/control.dat");
  if (!ferr || !fctl) throw Error(ErrorCode::Io, "cannot write plot data under '" + out_dir + "'");
  ferr << "# t err\n";
  fctl << "# t";
  for (size_t k = 1; k <= i_u.size(); ++k) fctl << " u" << k;
  fctl << " event\n";
  char buf[64];
  auto put = [&buf](std::ofstream& os, double v, char sep) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf << sep;
  };
  for (size_t row = 0; row < t.rows(); ++row) {
    put(ferr, t.at(row, i_t), ' ');
    put(ferr, t.at(row, i_err), '\n');
    put(fctl, t.at(row, i_t), ' ');
    for (int idx : i_u) put(fctl, t.at(row, idx), ' ');
    fctl << static_cast<int>(t.at(row, i_ev)) << '\n';
  }
}

std::uint64_t TraceLog::hash() const {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  auto mix = [&h](const void* ptr, size_t len) {
    const unsigned char* b = static_cast<const unsigned char*>(ptr);
    for (size_t i = 0; i < len; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  };
  for (const std::string& c : columns_) mix(c.data(), c.size());
  if (!data_.empty()) mix(data_.data(), data_.size() * sizeof(double));
  return h;
}

}  // namespace tlt::engine
