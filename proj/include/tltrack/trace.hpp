#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace tlt::engine {

/**
 * Flat in-memory run log: named columns, row-major doubles. Serialized as
 * CSV with a version comment line; values are written round-trip exact so a
 * parsed file reproduces the original doubles (and therefore the hash).
 */
class TraceLog {
 public:
  TraceLog() = default;
  explicit TraceLog(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  int width() const { return static_cast<int>(columns_.size()); }
  size_t rows() const { return columns_.empty() ? 0 : data_.size() / columns_.size(); }
  bool empty() const { return data_.empty(); }

  void push_row(const std::vector<double>& row);
  double at(size_t row, size_t col) const { return data_[row * columns_.size() + col]; }
  int column_index(const std::string& name) const;  // -1 when absent

  void write_csv(std::ostream& os) const;
  void save_csv(const std::string& path) const;
  static TraceLog load_csv(const std::string& path);

  /** FNV-1a over the header and the raw row bytes. */
  std::uint64_t hash() const;

 private:
  std::vector<std::string> columns_;
  std::vector<double> data_;
};

/**
 * Emit figure-ready files from trace columns, nothing recomputed:
 *   <out_dir>/tracking_error.dat  t, err
 *   <out_dir>/control.dat         t, u*, event
 * Throws InvalidInput when the trace lacks those columns.
 */
void write_plot_data(const TraceLog& t, const std::string& out_dir);

}  // namespace tlt::engine
