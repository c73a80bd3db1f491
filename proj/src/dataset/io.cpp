#include "bsmpc/dataset/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace bsmpc::dataset {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& cell, std::size_t line) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\r')) --last;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw ParseError("malformed number '" + cell + "'", line);
  }
  return v;
}

std::string trim_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << std::setprecision(17);
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open '" + path + "' for reading");
  return f;
}

// Counts the leading run of columns named prefix1, prefix2, ...
int count_prefixed(const std::vector<std::string>& cols, std::size_t from, char prefix) {
  int k = 0;
  for (std::size_t i = from; i < cols.size(); ++i) {
    if (cols[i] != prefix + std::to_string(k + 1)) break;
    ++k;
  }
  return k;
}

}  // namespace

void write_dataset(const std::vector<CycleRecord>& records, int m, int n, std::ostream& out) {
  if (m < 1 || m > kMaxStates || n < 1 || n > kMaxInputs) {
    throw DimensionError("dataset: dimensions out of range");
  }
  const auto old = out.precision(17);
  for (int j = 0; j < m; ++j) out << (j ? "," : "") << 'e' << j + 1;
  for (int i = 0; i < n; ++i) out << ",d" << i + 1;
  out << '\n';
  for (const auto& r : records) {
    if (r.error.size() != m || r.deltas.size() != n) {
      throw DimensionError("dataset: record does not match m = " + std::to_string(m) +
                           ", n = " + std::to_string(n));
    }
    for (int j = 0; j < m; ++j) out << (j ? "," : "") << r.error[j];
    for (int i = 0; i < n; ++i) out << ',' << r.deltas[i];
    out << '\n';
  }
  out.precision(old);
  if (!out) throw Error("dataset: write failed");
}

void write_dataset(const std::vector<CycleRecord>& records, int m, int n,
                   const std::string& path) {
  auto f = open_out(path);
  write_dataset(records, m, n, f);
}

Dataset read_dataset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty dataset file, expected a header", 1);
  const auto header = split(trim_cr(line));
  Dataset ds;
  ds.m = count_prefixed(header, 0, 'e');
  ds.n = count_prefixed(header, static_cast<std::size_t>(ds.m), 'd');
  if (ds.m < 1 || ds.n < 1 || static_cast<std::size_t>(ds.m + ds.n) != header.size()) {
    throw ParseError("header must be e1..em,d1..dn", 1);
  }
  if (ds.m > kMaxStates || ds.n > kMaxInputs) throw ParseError("too many columns", 1);
  const auto width = static_cast<std::size_t>(ds.m + ds.n);

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim_cr(line);
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " columns (m+n = " +
                           std::to_string(ds.m) + "+" + std::to_string(ds.n) + "), found " +
                           std::to_string(cells.size()),
                       lineno);
    }
    CycleRecord r{StateVector(ds.m), InputVector(ds.n)};
    for (std::size_t k = 0; k < width; ++k) {
      const double v = parse_number(cells[k], lineno);
      if (!std::isfinite(v) || v < 0.0) {
        throw ParseError("entries must be finite and non-negative", lineno);
      }
      if (k < static_cast<std::size_t>(ds.m)) {
        r.error[static_cast<int>(k)] = v;
      } else {
        r.deltas[static_cast<int>(k) - ds.m] = v;
      }
    }
    ds.records.push_back(std::move(r));
  }
  return ds;
}

Dataset read_dataset(const std::string& path) {
  auto f = open_in(path);
  return read_dataset(f);
}

void to_matrices(const std::vector<CycleRecord>& records, bsm::RowMatrix& errors,
                 bsm::RowMatrix& deltas) {
  if (records.empty()) throw ConfigError("dataset: no records");
  const auto m = records.front().error.size();
  const auto n = records.front().deltas.size();
  errors.resize(static_cast<Eigen::Index>(records.size()), m);
  deltas.resize(static_cast<Eigen::Index>(records.size()), n);
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    if (records[r].error.size() != m || records[r].deltas.size() != n) {
      throw DimensionError("dataset: ragged records");
    }
    errors.row(row) = records[r].error.transpose();
    deltas.row(row) = records[r].deltas.transpose();
  }
}

void write_references(const nmpc::ReferenceTrack& refs, std::ostream& out) {
  if (refs.states.empty() || refs.states.size() != refs.inputs.size()) {
    throw DimensionError("references: states and inputs must be non-empty and equally long");
  }
  const auto m = refs.states.front().size();
  const auto n = refs.inputs.front().size();
  const auto old = out.precision(17);
  for (int j = 0; j < m; ++j) out << (j ? "," : "") << 'r' << j + 1;
  for (int i = 0; i < n; ++i) out << ",v" << i + 1;
  out << '\n';
  for (std::size_t k = 0; k < refs.size(); ++k) {
    for (int j = 0; j < m; ++j) out << (j ? "," : "") << refs.states[k][j];
    for (int i = 0; i < n; ++i) out << ',' << refs.inputs[k][i];
    out << '\n';
  }
  out.precision(old);
  if (!out) throw Error("references: write failed");
}

void write_references(const nmpc::ReferenceTrack& refs, const std::string& path) {
  auto f = open_out(path);
  write_references(refs, f);
}

nmpc::ReferenceTrack read_references(std::istream& in, int m, int n) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty reference file, expected a header", 1);
  const auto header = split(trim_cr(line));
  const auto width = static_cast<std::size_t>(m + n);
  if (header.size() != width || count_prefixed(header, 0, 'r') != m ||
      count_prefixed(header, static_cast<std::size_t>(m), 'v') != n) {
    throw ParseError("header must be r1..r" + std::to_string(m) + ",v1..v" + std::to_string(n), 1);
  }
  nmpc::ReferenceTrack refs;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim_cr(line);
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " columns, found " +
                           std::to_string(cells.size()),
                       lineno);
    }
    StateVector r(m);
    InputVector v(n);
    for (int j = 0; j < m; ++j) r[j] = parse_number(cells[static_cast<std::size_t>(j)], lineno);
    for (int i = 0; i < n; ++i) {
      v[i] = parse_number(cells[static_cast<std::size_t>(m + i)], lineno);
    }
    refs.states.push_back(r);
    refs.inputs.push_back(v);
  }
  return refs;
}

nmpc::ReferenceTrack read_references(const std::string& path, int m, int n) {
  auto f = open_in(path);
  return read_references(f, m, n);
}

void write_manifest(const std::string& path, const std::string& model,
                    const ReferenceGenConfig& refs, const DatasetConfig& cfg,
                    const std::vector<DatasetResult>& runs) {
  nlohmann::ordered_json j;
  j["model"] = model;
  j["seed"] = cfg.seed;
  j["references"] = {{"cycles", refs.cycles},
                     {"horizon", refs.horizon},
                     {"amplitude", refs.amplitude},
                     {"slow_period", {refs.slow_period_min, refs.slow_period_max}},
                     {"fast_period", {refs.fast_period_min, refs.fast_period_max}},
                     {"step_rate", refs.step_rate},
                     {"step_weight", refs.step_weight},
                     {"slew", refs.slew},
                     {"seed", refs.seed}};
  j["noise"] = {{"rho", cfg.noise.rho}, {"theta", cfg.noise.theta}, {"seed", cfg.noise.seed}};
  j["ga"] = {{"population", cfg.population},
             {"generations", cfg.ga.generations},
             {"crossover_rate", cfg.ga.crossover_rate},
             {"mutation_rate", cfg.ga.mutation_rate},
             {"epsilon", cfg.ga.epsilon},
             {"tournament_size", cfg.ga.tournament_size},
             {"unlimited_time", cfg.ga.unlimited_time}};
  j["alignment"] = cfg.alignment == bsm::Alignment::kSameTime ? "same-time" : "same-position";
  std::size_t cycles = 0, records = 0, skipped = 0, evals = 0, failed = 0;
  for (const auto& r : runs) {
    cycles += r.cycles;
    records += r.records.size();
    skipped += r.skipped;
    evals += r.evaluations;
    failed += r.plant_failed ? 1 : 0;
  }
  j["runs"] = runs.size();
  j["cycles"] = cycles;
  j["records_before_skips"] = records + skipped;
  j["records"] = records;
  j["skipped"] = skipped;
  j["evaluations"] = evals;
  j["plant_failures"] = failed;
  std::ofstream f(path);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << j.dump(2) << '\n';
  if (!f) throw Error("write failed: '" + path + "'");
}

}  // namespace bsmpc::dataset
