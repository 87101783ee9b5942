#include "machlab/ledger.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace machlab {

RunLedger::RunLedger(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty() || columns_[0] != "t") {
    throw std::invalid_argument("ledger: first column must be t");
  }
}

void RunLedger::append(std::span<const double> row) {
  if (row.size() != columns_.size()) throw std::invalid_argument("ledger: row width mismatch");
  if (!data_.empty()) {
    const auto& prev = data_.back();
    if (!(row[0] > prev[0])) throw std::invalid_argument("ledger: time must increase strictly");
    for (size_t i = 1; i < columns_.size(); ++i) {
      if (columns_[i].rfind("int_", 0) == 0 && row[i] < prev[i]) {
        throw std::invalid_argument("ledger: accumulator " + columns_[i] + " decreased");
      }
    }
  }
  data_.emplace_back(row.begin(), row.end());
}

size_t RunLedger::index_of(std::string_view name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw std::out_of_range("ledger: missing column " + std::string(name));
  return static_cast<size_t>(it - columns_.begin());
}

bool RunLedger::has_column(std::string_view name) const {
  return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
}

std::vector<double> RunLedger::column(std::string_view name) const {
  const size_t i = index_of(name);
  std::vector<double> out;
  out.reserve(data_.size());
  for (const auto& r : data_) out.push_back(r[i]);
  return out;
}

double RunLedger::last(std::string_view name) const {
  if (data_.empty()) throw std::out_of_range("ledger: no rows");
  return data_.back()[index_of(name)];
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void RunLedger::write_csv(std::ostream& out) const {
  out << "# machlab-ledger v1\n";
  if (!run_id.empty()) out << "# run_id=" << run_id << '\n';
  if (!config_hash.empty()) out << "# config_hash=" << config_hash << '\n';
  for (const auto& [k, v] : metadata) out << "# " << k << '=' << v << '\n';
  for (size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
  out << '\n';
  for (const auto& r : data_) {
    for (size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
    out << '\n';
  }
}

RunLedger RunLedger::read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "# machlab-ledger v1") {
    throw std::runtime_error("ledger: missing version header");
  }
  RunLedger ledger;
  bool have_columns = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos || line.size() < 2) continue;
      std::string key = line.substr(2, eq - 2);
      std::string value = line.substr(eq + 1);
      if (key == "run_id") {
        ledger.run_id = value;
      } else if (key == "config_hash") {
        ledger.config_hash = value;
      } else {
        ledger.metadata.emplace_back(std::move(key), std::move(value));
      }
      continue;
    }
    std::istringstream ls(line);
    std::string cell;
    if (!have_columns) {
      std::vector<std::string> cols;
      while (std::getline(ls, cell, ',')) cols.push_back(cell);
      RunLedger shaped(cols);
      shaped.run_id = ledger.run_id;
      shaped.config_hash = ledger.config_hash;
      shaped.metadata = std::move(ledger.metadata);
      ledger = std::move(shaped);
      have_columns = true;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    ledger.append(row);
  }
  if (!have_columns) throw std::runtime_error("ledger: no column line");
  return ledger;
}

double Accumulator::add(double t, double value) {
  if (started_) total_ += 0.5 * (t - last_t_) * (value + last_v_);
  started_ = true;
  last_t_ = t;
  last_v_ = value;
  return total_;
}

std::string text_hash(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace machlab
