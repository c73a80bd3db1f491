#include "bsmpc/bench/report.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace bsmpc::bench {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  std::string shortest(buf, r.ptr);
  r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  std::string full(buf, r.ptr);
  return shortest.size() <= full.size() ? shortest : full;
}

namespace {

std::string clean(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  }
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  if (!f) throw Error("write failed: " + path.string());
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s, std::size_t line) {
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  if (s == "nan") return NAN;
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
    throw ParseError("bad number '" + s + "'", line);
  }
  return v;
}

template <typename T>
T to_int(const std::string& s, std::size_t line) {
  T v{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
    throw ParseError("bad integer '" + s + "'", line);
  }
  return v;
}

constexpr const char* kCyclesHeader =
    "model,solver,seed,cycle,cost,converged,fallback,population,generations,evaluations,"
    "kernel_evaluations,time,margin_ratio,confidence,used_prediction,error_max,error";

}  // namespace

void write_summary(const std::vector<RunResult>& runs, std::ostream& out) {
  out << "model,solver,seed,cycles,E,convergence_rate,avg_time,avg_evaluations,"
         "total_evaluations,fallbacks,predictions_used,min_population,max_population,"
         "plant_failed\n";
  for (const auto& r : runs) {
    const auto& m = r.metrics;
    out << r.model << ',' << r.solver << ',' << r.seed << ',' << m.cycles << ','
        << format_double(m.avg_cost) << ',' << format_double(m.convergence_rate) << ','
        << format_double(m.avg_time) << ',' << format_double(m.avg_evaluations) << ','
        << m.total_evaluations << ',' << m.fallbacks << ',' << m.predictions_used << ','
        << m.min_population << ',' << m.max_population << ',' << (r.plant_failed ? 1 : 0)
        << '\n';
  }
}

void write_cycles(const std::vector<RunResult>& runs, std::ostream& out) {
  out << kCyclesHeader << '\n';
  for (const auto& r : runs) {
    for (const auto& c : r.cycles) {
      out << r.model << ',' << r.solver << ',' << r.seed << ',' << c.cycle << ','
          << format_double(c.cost) << ',' << (c.converged ? 1 : 0) << ','
          << (c.fallback ? 1 : 0) << ',' << c.population << ',' << c.generations << ','
          << c.evaluations << ',' << c.kernel_evaluations << ',' << format_double(c.time) << ','
          << format_double(c.margin_ratio) << ',' << format_double(c.confidence) << ','
          << (c.used_prediction ? 1 : 0) << ',' << format_double(c.error_max) << ','
          << clean(c.error) << '\n';
    }
  }
}

void write_histograms(const std::vector<RunResult>& runs, std::ostream& out) {
  out << "model,solver,seed,bin,lo,hi,count\n";
  for (const auto& r : runs) {
    const auto& h = r.metrics.pc_histogram;
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      out << r.model << ',' << r.solver << ',' << r.seed << ',' << b << ','
          << format_double(h.edges[b]) << ',' << format_double(h.edges[b + 1]) << ','
          << h.counts[b] << '\n';
    }
  }
}

std::string manifest_json(const std::vector<RunResult>& runs, const ExperimentConfig& cfg,
                          const bsm::MarginPredictor* predictor) {
  nlohmann::ordered_json j;
  j["config"] = nlohmann::ordered_json::parse(config_json(cfg, -1));
  j["streams"] = {"references", "plant-input", "plant-sensor", "solver"};
  if (predictor) {
    nlohmann::ordered_json p;
    p["inputs"] = predictor->inputs();
    p["support_vectors"] = predictor->support_vectors();
    p["calibrated"] = predictor->calibrated();
    if (predictor->calibrated()) p["threshold"] = predictor->threshold_for(cfg.eta);
    j["predictor"] = p;
  }
  auto& list = j["runs"] = nlohmann::ordered_json::array();
  for (const auto& r : runs) {
    list.push_back({{"seed", r.seed},
                    {"solver", r.solver},
                    {"cycles", r.cycles.size()},
                    {"plant_failed", r.plant_failed},
                    {"true_state_reads", r.true_state_reads},
                    {"log", r.log}});
  }
  return j.dump(2) + "\n";
}

void emit_reports(const std::vector<RunResult>& runs, const ExperimentConfig& cfg,
                  const std::string& dir, const bsm::MarginPredictor* predictor) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir + ": " + ec.message());
  std::ostringstream s, c, h;
  write_summary(runs, s);
  write_cycles(runs, c);
  write_histograms(runs, h);
  write_file(fs::path(dir) / "summary.csv", s.str());
  write_file(fs::path(dir) / "cycles.csv", c.str());
  write_file(fs::path(dir) / "pc_histogram.csv", h.str());
  write_file(fs::path(dir) / "manifest.json", manifest_json(runs, cfg, predictor));
}

void write_sweep(const std::vector<SweepPoint>& points, std::ostream& out) {
  out << "parameter,value,solver,seed,E,convergence_rate,avg_time,avg_evaluations,error\n";
  for (const auto& p : points) {
    const std::string name = to_string(p.parameter);
    if (!p.error.empty()) {
      out << name << ',' << format_double(p.value) << ",,,,,,," << clean(p.error) << '\n';
      continue;
    }
    for (const auto& r : p.runs) {
      const auto& m = r.metrics;
      out << name << ',' << format_double(p.value) << ',' << r.solver << ',' << r.seed << ','
          << format_double(m.avg_cost) << ',' << format_double(m.convergence_rate) << ','
          << format_double(m.avg_time) << ',' << format_double(m.avg_evaluations) << ",\n";
    }
  }
}

std::vector<LoggedRun> read_cycles(std::istream& in) {
  std::string line;
  std::size_t no = 1;
  if (!std::getline(in, line)) throw ParseError("empty cycles file", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCyclesHeader) throw ParseError("unexpected cycles header", 1);
  std::vector<LoggedRun> runs;
  while (std::getline(in, line)) {
    ++no;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 17) {
      throw ParseError("expected 17 columns, found " + std::to_string(f.size()), no);
    }
    const auto seed = to_int<std::uint64_t>(f[2], no);
    if (runs.empty() || runs.back().model != f[0] || runs.back().solver != f[1] ||
        runs.back().seed != seed) {
      runs.push_back(LoggedRun{f[0], f[1], seed, {}});
    }
    CycleLog c;
    c.cycle = to_int<std::size_t>(f[3], no);
    c.cost = to_double(f[4], no);
    c.converged = f[5] == "1";
    c.fallback = f[6] == "1";
    c.population = to_int<int>(f[7], no);
    c.generations = to_int<int>(f[8], no);
    c.evaluations = to_int<std::size_t>(f[9], no);
    c.kernel_evaluations = to_int<std::size_t>(f[10], no);
    c.time = to_double(f[11], no);
    c.margin_ratio = to_double(f[12], no);
    c.confidence = to_double(f[13], no);
    c.used_prediction = f[14] == "1";
    c.error_max = to_double(f[15], no);
    c.error = f[16];
    runs.back().cycles.push_back(std::move(c));
  }
  return runs;
}

std::vector<LoggedRun> read_cycles(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path);
  return read_cycles(f);
}

}  // namespace bsmpc::bench
