#include "cfwave/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "cfwave/baselines.hpp"
#include "cfwave/canonical.hpp"
#include "cfwave/grid.hpp"
#include "cfwave/phaseshift.hpp"
#include "cfwave/potentials.hpp"

namespace cfwave {

namespace {

constexpr const char* kSolverOrder[4] = {"kftee", "mcdmm", "fmcc", "bn"};

bool known_solver(const std::string& s) {
  for (const char* t : kSolverOrder)
    if (s == t) return true;
  return false;
}

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

template <typename T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

ResultRow run_row(const RunConfig& cfg, double k, int l, int spin,
                  const std::string& solver, double h) {
  if (!(k > 0)) throw std::invalid_argument("run_row: k must be > 0");
  if (l < 0) throw std::invalid_argument("run_row: l must be >= 0");
  if (spin != 0 && spin != 1)
    throw std::invalid_argument("run_row: spin must be 0 or 1");
  if (!(h > 0)) throw std::invalid_argument("run_row: h must be > 0");
  if (!known_solver(solver))
    throw std::invalid_argument("run_row: unknown solver '" + solver + "'");

  GridSpec gs;
  gs.h = h;
  gs.r0 = cfg.r0;
  gs.extended = cfg.rmax > kRegionEdges[2];
  const RadialGrid g = build_grid(gs);
  const ChannelSpec ch{k, l, spin};

  const auto t0 = std::chrono::steady_clock::now();
  PhaseResult ph;
  if (solver == "kftee") {
    CanonicalOptions copt;
    copt.ivp.rtol = cfg.rtol;
    copt.ivp.atol = cfg.atol;
    copt.origin_tol = cfg.origin_tol;
    const ChannelSolution sol = solve_channel(g, ch, copt);
    ph = extract_phase(g, sol.f1, sol.d1, 0, k, l, sol.origin_eps,
                       PhaseOptions{cfg.window, cfg.plateau_tol});
    ph.converged = ph.converged && sol.origin_converged && sol.ratio_converged;
  } else if (solver == "mcdmm") {
    ph = solve_mcdmm(g, ch);
  } else {
    ph = solve_local_exchange(
        g, ch, solver == "fmcc" ? ExchangeModel::fmcc : ExchangeModel::bn);
  }
  const auto t1 = std::chrono::steady_clock::now();

  ResultRow row;
  row.k = k;
  row.l = l;
  row.spin = spin;
  row.solver = solver;
  row.h = h;
  row.delta = ph.converged ? ph.delta
                           : std::numeric_limits<double>::quiet_NaN();
  row.tan_delta = ph.tan_delta;
  row.branch = ph.branch;
  row.converged = ph.converged;
  row.plateau_spread = ph.plateau_spread;
  row.wall_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  return row;
}

std::vector<ResultRow> run_sweep(const RunConfig& cfg) {
  for (const std::string& s : cfg.solver)
    if (!known_solver(s))
      throw std::invalid_argument("run_sweep: unknown solver '" + s + "'");
  const std::set<std::string> wanted(cfg.solver.begin(), cfg.solver.end());

  const auto ks = sorted_unique(cfg.k);
  const auto ls = sorted_unique(cfg.l);
  const auto ss = sorted_unique(cfg.spin);
  const auto hs = sorted_unique(cfg.h);

  struct Job {
    double k;
    int l, spin;
    const char* solver;
    double h;
  };
  std::vector<Job> jobs;
  for (double k : ks)
    for (int l : ls)
      for (int s : ss)
        for (const char* sol : kSolverOrder) {
          if (!wanted.count(sol)) continue;
          for (double h : hs) jobs.push_back({k, l, s, sol, h});
        }

  std::vector<ResultRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const int n_workers = std::max(
      1, std::min<int>(cfg.jobs, static_cast<int>(jobs.size())));
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& j = jobs[i];
      try {
        rows[i] = run_row(cfg, j.k, j.l, j.spin, j.solver, j.h);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return rows;
}

std::string to_csv(const std::vector<ResultRow>& rows, bool deterministic) {
  std::string out =
      "k,l,S,solver,h,delta,tan_delta,branch,converged,plateau_spread";
  if (!deterministic) out += ",wall_ms";
  out += '\n';
  for (const ResultRow& r : rows) {
    out += fmt9(r.k);
    out += ',' + std::to_string(r.l);
    out += ',' + std::to_string(r.spin);
    out += ',' + r.solver;
    out += ',' + fmt9(r.h);
    out += ',' + fmt9(r.delta);
    out += ',' + fmt9(r.tan_delta);
    out += ',' + std::to_string(r.branch);
    out += r.converged ? ",1" : ",0";
    out += ',' + fmt9(r.plateau_spread);
    if (!deterministic) out += ',' + fmt9(r.wall_ms);
    out += '\n';
  }
  return out;
}

std::string to_json(const std::vector<ResultRow>& rows, bool deterministic) {
  nlohmann::json doc;
  doc["rows"] = nlohmann::json::array();
  for (const ResultRow& r : rows) {
    nlohmann::json jr;
    jr["k"] = r.k;
    jr["l"] = r.l;
    jr["S"] = r.spin;
    jr["solver"] = r.solver;
    jr["h"] = r.h;
    if (std::isnan(r.delta))
      jr["delta"] = nullptr;
    else
      jr["delta"] = r.delta;
    jr["tan_delta"] = r.tan_delta;
    jr["branch"] = r.branch;
    jr["converged"] = r.converged;
    jr["plateau_spread"] = r.plateau_spread;
    if (!deterministic) jr["wall_ms"] = r.wall_ms;
    doc["rows"].push_back(std::move(jr));
  }
  return doc.dump(2) + "\n";
}

std::vector<ResultRow> rows_from_json(const std::string& text) {
  const nlohmann::json doc = nlohmann::json::parse(text);
  std::vector<ResultRow> rows;
  for (const nlohmann::json& jr : doc.at("rows")) {
    ResultRow r;
    r.k = jr.at("k").get<double>();
    r.l = jr.at("l").get<int>();
    r.spin = jr.at("S").get<int>();
    r.solver = jr.at("solver").get<std::string>();
    r.h = jr.at("h").get<double>();
    r.delta = jr.at("delta").is_null()
                  ? std::numeric_limits<double>::quiet_NaN()
                  : jr.at("delta").get<double>();
    r.tan_delta = jr.at("tan_delta").get<double>();
    r.branch = jr.at("branch").get<int>();
    r.converged = jr.at("converged").get<bool>();
    r.plateau_spread = jr.at("plateau_spread").get<double>();
    if (jr.contains("wall_ms")) r.wall_ms = jr.at("wall_ms").get<double>();
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  const auto parse_one = [](const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (pos != s.size())
      throw std::invalid_argument("trailing characters in number '" + s + "'");
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    std::string part;
    std::vector<double> parts;
    while (std::getline(ss, part, ':')) parts.push_back(parse_one(part));
    if (parts.size() != 3)
      throw std::invalid_argument("range must be start:stop:step");
    const double start = parts[0], stop = parts[1], step = parts[2];
    if (!(step > 0)) throw std::invalid_argument("range step must be > 0");
    if (stop < start - 0.5 * step)
      throw std::invalid_argument("range stop must be >= start");
    for (double v = start; v <= stop + 0.5 * step; v += step)
      out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(parse_one(part));
  if (out.empty()) throw std::invalid_argument("empty number list");
  return out;
}

namespace {

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_number_list(text)) {
    const int i = static_cast<int>(std::llround(v));
    if (std::abs(v - i) > 1e-9)
      throw std::invalid_argument("expected an integer, got '" +
                                  std::to_string(v) + "'");
    out.push_back(i);
  }
  return out;
}

bool parse_bool(const std::string& s) {
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw std::invalid_argument("expected a boolean, got '" + s + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void apply_key(RunConfig& cfg, const std::string& key,
               const std::string& value) {
  if (key == "k") {
    cfg.k = parse_number_list(value);
  } else if (key == "l") {
    cfg.l = parse_int_list(value);
  } else if (key == "spin") {
    if (value == "both") {
      cfg.spin = {0, 1};
    } else {
      cfg.spin = parse_int_list(value);
    }
    for (int s : cfg.spin)
      if (s != 0 && s != 1)
        throw std::invalid_argument("spin must be 0, 1 or both");
  } else if (key == "solver") {
    cfg.solver.clear();
    std::stringstream ss(value);
    std::string part;
    while (std::getline(ss, part, ',')) {
      part = trim(part);
      if (!known_solver(part))
        throw std::invalid_argument("unknown solver '" + part + "'");
      cfg.solver.push_back(part);
    }
    if (cfg.solver.empty()) throw std::invalid_argument("empty solver list");
  } else if (key == "h") {
    cfg.h = parse_number_list(value);
    for (double h : cfg.h)
      if (!(h > 0)) throw std::invalid_argument("h must be > 0");
  } else if (key == "r0") {
    cfg.r0 = std::stod(value);
  } else if (key == "rmax") {
    cfg.rmax = std::stod(value);
  } else if (key == "window") {
    cfg.window = std::stoi(value);
  } else if (key == "plateau_tol") {
    cfg.plateau_tol = std::stod(value);
  } else if (key == "origin_tol") {
    cfg.origin_tol = std::stod(value);
  } else if (key == "rtol") {
    cfg.rtol = std::stod(value);
  } else if (key == "atol") {
    cfg.atol = std::stod(value);
  } else if (key == "format") {
    if (value != "csv" && value != "json")
      throw std::invalid_argument("format must be csv or json");
    cfg.format = value;
  } else if (key == "output") {
    cfg.output = value;
  } else if (key == "jobs") {
    cfg.jobs = std::stoi(value);
    if (cfg.jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  } else if (key == "strict") {
    cfg.strict = parse_bool(value);
  } else if (key == "deterministic") {
    cfg.deterministic = parse_bool(value);
  } else {
    throw std::invalid_argument("unknown key '" + key + "'");
  }
}

}  // namespace

void apply_config_text(RunConfig& cfg, const std::string& text,
                       const std::string& name) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = name + ":" + std::to_string(lineno) + ": ";
    if (eq == std::string::npos)
      throw std::invalid_argument(where + "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument(where + "empty key");
    try {
      apply_key(cfg, key, value);
    } catch (const std::exception& e) {
      throw std::invalid_argument(where + e.what());
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str(), path);
}

}  // namespace cfwave
