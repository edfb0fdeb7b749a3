#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "json.hpp"
#include "otelbaev/bounds.hpp"
#include "otelbaev/closed_forms.hpp"
#include "otelbaev/comparison.hpp"
#include "otelbaev/decomposition.hpp"
#include "otelbaev/envelope.hpp"
#include "otelbaev/errors.hpp"
#include "otelbaev/measure.hpp"
#include "otelbaev/measure_io.hpp"
#include "otelbaev/profile.hpp"
#include "otelbaev/qstar.hpp"
#include "otelbaev/refsolver.hpp"

#ifndef OTELBAEV_VERSION
#define OTELBAEV_VERSION "0.0.0"
#endif

namespace otelbaev {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int sandwich_violation = 1;
inline constexpr int bad_input = 2;
inline constexpr int numerical_failure = 3;
}  // namespace exit_code

// Shortest decimal that reads back to the same double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct Table {
  std::string file;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(columns);
    for (const auto& r : rows) line(r);
    return out;
  }
};

// Runs f(0..n-1) on up to `threads` workers; results must go to preallocated slots.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += threads) {
        try {
          f(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct Tolerances {
  double spectrum = 1e-12;      // bisection width in kappa
  double sandwich_rel = 1e-9;   // relative slack on bound-vs-exact comparisons
  double closed_form_rel = 1e-9;

  nlohmann::json to_json() const {
    return {{"spectrum", spectrum}, {"sandwich_rel", sandwich_rel}, {"closed_form_rel", closed_form_rel}};
  }
};

namespace task {
struct EvalProfile {
  double alpha = 2.0, from = 0.0, to = 0.0, step = 0.0;
  bool envelope = true;
  std::optional<double> lambda;
};
struct Decompose {
  double alpha = 2.0, shift = 0.0;
};
struct CountingTable {
  std::vector<double> lambdas;
};
struct EigenvalueTable {
  std::optional<int> n_max;
};
struct LtTable {
  std::vector<double> gammas;
};
struct Edges {};
struct Compare {
  std::string generator;
  nlohmann::json params;
  std::vector<int> K;
};
struct DoubleDeltaSweep {
  std::vector<double> ys, gammas;
};
}  // namespace task

using TaskSpec = std::variant<task::EvalProfile, task::Decompose, task::CountingTable, task::EigenvalueTable,
                              task::LtTable, task::Edges, task::Compare, task::DoubleDeltaSweep>;

struct Scenario {
  std::string name;
  Measure measure;
  nlohmann::json measure_json;
  std::vector<std::string> task_names;
  std::vector<TaskSpec> tasks;
  Tolerances tol;
  std::string output;
};

namespace detail {

struct Reader {
  const nlohmann::json& j;
  std::string where;

  const nlohmann::json* find(const char* key) const {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
  }
  std::string path(const char* key) const { return where + "." + key; }

  double number(const char* key, std::optional<double> fallback = std::nullopt) const {
    const auto* v = find(key);
    if (!v) {
      if (fallback) return *fallback;
      throw InvalidInput(path(key) + ": required number is missing");
    }
    if (!v->is_number()) throw InvalidInput(path(key) + ": expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) throw InvalidInput(path(key) + ": must be finite");
    return d;
  }
  double positive(const char* key, std::optional<double> fallback = std::nullopt) const {
    const double d = number(key, fallback);
    if (!(d > 0.0)) throw InvalidInput(path(key) + ": must be > 0");
    return d;
  }
  std::vector<double> positive_list(const char* key) const {
    const auto* v = find(key);
    if (!v) throw InvalidInput(path(key) + ": required list is missing");
    if (!v->is_array() || v->empty()) throw InvalidInput(path(key) + ": expected a non-empty array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const auto& e = (*v)[i];
      const std::string p = path(key) + "[" + std::to_string(i) + "]";
      if (!e.is_number()) throw InvalidInput(p + ": expected a number");
      const double d = e.get<double>();
      if (!std::isfinite(d) || !(d > 0.0)) throw InvalidInput(p + ": must be finite and > 0");
      out.push_back(d);
    }
    return out;
  }
};

inline std::vector<double> log_grid(const Reader& r) {
  const auto* g = r.find("lambda_grid");
  const Reader gr{*g, r.path("lambda_grid")};
  if (!g->is_object()) throw InvalidInput(gr.where + ": expected an object {from, to, count}");
  const double from = gr.positive("from"), to = gr.positive("to");
  const double count = gr.number("count");
  if (count < 2 || count > 1e6 || count != std::floor(count)) throw InvalidInput(gr.path("count") + ": must be an integer in [2, 1e6]");
  if (!(from < to)) throw InvalidInput(gr.where + ": needs from < to");
  const int n = static_cast<int>(count);
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(from * std::pow(to / from, static_cast<double>(i) / (n - 1)));
  return out;
}

inline TaskSpec parse_task(const nlohmann::json& j, const std::string& where, std::string& name) {
  if (!j.is_object()) throw InvalidInput(where + ": expected an object");
  auto t = j.find("type");
  if (t == j.end() || !t->is_string()) throw InvalidInput(where + ".type: expected a task name");
  name = t->get<std::string>();
  const Reader r{j, where};
  if (name == "eval_profile") {
    task::EvalProfile e;
    e.alpha = r.positive("alpha", 2.0);
    e.from = r.number("from");
    e.to = r.number("to");
    e.step = r.positive("step");
    if (!(e.from < e.to)) throw InvalidInput(where + ": needs from < to");
    if ((e.to - e.from) / e.step > 1e7) throw InvalidInput(where + ": more than 1e7 sample points");
    if (r.find("lambda")) e.lambda = r.positive("lambda");
    if (const auto* v = r.find("envelope")) {
      if (!v->is_boolean()) throw InvalidInput(r.path("envelope") + ": expected true or false");
      e.envelope = v->get<bool>();
    }
    return e;
  }
  if (name == "decompose") return task::Decompose{r.positive("alpha", 2.0), r.number("shift", 0.0)};
  if (name == "counting_table") {
    task::CountingTable c;
    if (r.find("lambdas"))
      c.lambdas = r.positive_list("lambdas");
    else if (r.find("lambda_grid"))
      c.lambdas = log_grid(r);
    else
      throw InvalidInput(where + ": counting_table needs \"lambdas\" or \"lambda_grid\"");
    return c;
  }
  if (name == "eigenvalue_table") {
    task::EigenvalueTable e;
    if (r.find("n_max")) {
      const double n = r.number("n_max");
      if (n < 1 || n > 1e5 || n != std::floor(n)) throw InvalidInput(r.path("n_max") + ": must be an integer in [1, 1e5]");
      e.n_max = static_cast<int>(n);
    }
    return e;
  }
  if (name == "lt_table") return task::LtTable{r.positive_list("gammas")};
  if (name == "edges") return task::Edges{};
  if (name == "compare") {
    task::Compare c;
    const auto* g = r.find("generator");
    if (!g || !g->is_string()) throw InvalidInput(r.path("generator") + ": expected lt_counterexample or nw_counterexample");
    c.generator = g->get<std::string>();
    if (c.generator != "lt_counterexample" && c.generator != "nw_counterexample")
      throw InvalidInput(r.path("generator") + ": expected lt_counterexample or nw_counterexample");
    c.params = r.find("params") ? *r.find("params") : nlohmann::json::object();
    if (!c.params.is_object()) throw InvalidInput(r.path("params") + ": expected an object");
    for (double k : r.positive_list("K")) {
      if (k != std::floor(k) || k < 2 || k > 40) throw InvalidInput(r.path("K") + ": entries must be integers in [2, 40]");
      c.K.push_back(static_cast<int>(k));
    }
    // Validate the generator parameters now rather than halfway through the run.
    for (int K : c.K) {
      nlohmann::json p = c.params;
      p["K"] = K;
      try {
        generate_example(c.generator, p);
      } catch (const InvalidInput& e) {
        throw InvalidInput(r.path("params") + ": " + e.what());
      }
    }
    return c;
  }
  if (name == "double_delta_sweep") return task::DoubleDeltaSweep{r.positive_list("ys"), r.positive_list("gammas")};
  throw InvalidInput(where + ".type: unknown task \"" + name + "\"");
}

}  // namespace detail

inline Measure scenario_measure(const nlohmann::json& j, const std::string& where) {
  if (j.is_object() && j.contains("generator")) {
    if (!j.at("generator").is_string()) throw InvalidInput(where + ".generator: expected a name");
    const nlohmann::json params = j.contains("params") ? j.at("params") : nlohmann::json::object();
    try {
      return generate_example(j.at("generator").get<std::string>(), params);
    } catch (const InvalidInput& e) {
      throw InvalidInput(where + ": " + e.what());
    }
  }
  return measure_from_json(j, where);
}

inline Scenario parse_scenario(const nlohmann::json& j, const std::string& fallback_name = "scenario") {
  if (!j.is_object()) throw InvalidInput("scenario: expected a JSON object");
  Scenario s;
  s.name = fallback_name;
  if (auto it = j.find("name"); it != j.end()) {
    if (!it->is_string()) throw InvalidInput("name: expected a string");
    s.name = it->get<std::string>();
  }
  if (!j.contains("measure")) throw InvalidInput("measure: required");
  s.measure = scenario_measure(j.at("measure"), "measure");
  s.measure_json = measure_to_json(s.measure);
  if (auto it = j.find("tolerances"); it != j.end()) {
    if (!it->is_object()) throw InvalidInput("tolerances: expected an object");
    const detail::Reader r{*it, "tolerances"};
    s.tol.spectrum = r.positive("spectrum", s.tol.spectrum);
    s.tol.sandwich_rel = r.positive("sandwich_rel", s.tol.sandwich_rel);
    s.tol.closed_form_rel = r.positive("closed_form_rel", s.tol.closed_form_rel);
  }
  if (auto it = j.find("output"); it != j.end()) {
    if (!it->is_string()) throw InvalidInput("output: expected a directory name");
    s.output = it->get<std::string>();
  }
  auto t = j.find("tasks");
  if (t == j.end() || !t->is_array() || t->empty()) throw InvalidInput("tasks: expected a non-empty array");
  for (std::size_t i = 0; i < t->size(); ++i) {
    std::string name;
    s.tasks.push_back(detail::parse_task((*t)[i], "tasks[" + std::to_string(i) + "]", name));
    s.task_names.push_back(name);
  }
  return s;
}

struct TaskReport {
  std::string type;
  std::vector<Table> tables;
  int pass = 0;
  int fail = 0;
  int check_fail = 0;  // closed-form or invariant cross-checks
};

struct RunOptions {
  std::string out_dir;
  unsigned threads = 1;
  std::optional<double> tol;
};

struct RunResult {
  int exit = exit_code::ok;
  int pass = 0;
  int fail = 0;
  int check_fail = 0;
  std::string out_dir;
  std::vector<std::string> files;
  std::string message;
};

class ScenarioRunner {
 public:
  ScenarioRunner(Scenario s, unsigned threads) : s_(std::move(s)), threads_(std::max(1u, threads)) {}

  std::vector<TaskReport> run() {
    std::vector<TaskReport> out;
    for (std::size_t i = 0; i < s_.tasks.size(); ++i) {
      char prefix[16];
      std::snprintf(prefix, sizeof prefix, "%02zu_", i + 1);
      TaskReport rep;
      rep.type = s_.task_names[i];
      std::visit([&](const auto& t) { execute(t, prefix + rep.type, rep); }, s_.tasks[i]);
      out.push_back(std::move(rep));
    }
    return out;
  }

 private:
  const SpectralEstimator& estimator() {
    if (!est_) est_.emplace(s_.measure);
    return *est_;
  }
  const Spectrum& spectrum() {
    if (!spec_) spec_ = negative_spectrum(s_.measure, s_.tol.spectrum);
    return *spec_;
  }

  bool leq(double a, double b, double err) const {
    return a <= b + err + s_.tol.sandwich_rel * std::max(std::abs(a), std::abs(b));
  }
  static std::string flag(bool ok) { return ok ? "pass" : "fail"; }
  static std::string f(double v) { return format_double(v); }
  static void count(TaskReport& rep, bool ok) { ok ? ++rep.pass : ++rep.fail; }

  void execute(const task::EvalProfile& t, const std::string& base, TaskReport& rep) {
    const auto n = static_cast<std::size_t>(std::floor((t.to - t.from) / t.step + 1e-9)) + 1;
    Table prof{base + ".csv", {"x", "d", "q", "err"}, std::vector<std::vector<std::string>>(n)};
    parallel_for(n, threads_, [&](std::size_t i) {
      const double x = t.from + static_cast<double>(i) * t.step;
      const OtelbaevPoint p = eval_point(s_.measure, t.alpha, x);
      prof.rows[i] = {f(x), f(p.d), f(p.q), f(p.err)};
    });
    rep.tables.push_back(std::move(prof));
    if (t.envelope) {
      Table env{base + "_envelope.csv", {"x", "q_lower", "q_upper"}, {}};
      for (const auto& c : envelope(s_.measure, t.alpha, t.from, t.to, t.step))
        env.rows.push_back({f(c.x_lo), f(c.q_lower), f(c.q_upper)});
      rep.tables.push_back(std::move(env));
    }
    if (t.lambda) {
      Table sub{base + "_sublevel.csv", {"component_lo", "component_hi"}, {}};
      for (const auto& c : sublevel_measure(s_.measure, t.alpha, *t.lambda).components)
        sub.rows.push_back({f(c.lo), f(c.hi)});
      rep.tables.push_back(std::move(sub));
    }
  }

  void execute(const task::Decompose& t, const std::string& base, TaskReport& rep) {
    const Decomposition dec = build_decomposition(s_.measure, t.alpha, t.shift);
    Table tab{base + ".csv", {"k", "a_k", "a_k1", "gamma_k", "gamma_k1", "mu_k"}, {}};
    for (const auto& I : dec.intervals)
      tab.rows.push_back({std::to_string(I.k), f(I.lo), f(I.hi), f(dec.gamma_at(I.lo)), f(dec.gamma_at(I.hi)), f(I.mass)});
    rep.tables.push_back(std::move(tab));
    const auto check = verify_decomposition(s_.measure, dec);
    if (!check.passed()) ++rep.check_fail;
  }

  void execute(const task::CountingTable& t, const std::string& base, TaskReport& rep) {
    const auto& est = estimator();
    const auto& sp = spectrum();
    Table tab{base + ".csv",
              {"lambda", "lower1", "lower2", "lower3_literal", "lower3_variant", "N_exact", "upper1", "upper2", "upper3",
               "upper_bracketing", "sandwich"},
              std::vector<std::vector<std::string>>(t.lambdas.size())};
    std::vector<char> ok(t.lambdas.size());
    parallel_for(t.lambdas.size(), threads_, [&](std::size_t i) {
      const double lam = t.lambdas[i];
      const auto b = est.counting(lam);
      const int N = counting_exact(s_.measure, sp, lam).count;
      bool good = true;
      for (const auto* v : {&b.lower1, &b.lower2}) good = good && leq(v->value, N, v->err);
      for (const auto* v : {&b.upper1, &b.upper2, &b.upper3, &b.upper_bracketing}) good = good && leq(N, v->value, v->err);
      ok[i] = good;
      tab.rows[i] = {f(lam), f(b.lower1.value), f(b.lower2.value), f(b.lower3_literal.value), f(b.lower3_variant.value),
                     std::to_string(N), f(b.upper1.value), f(b.upper2.value), f(b.upper3.value),
                     f(b.upper_bracketing.value), flag(good)};
    });
    for (char c : ok) count(rep, c);
    rep.tables.push_back(std::move(tab));
  }

  void execute(const task::EigenvalueTable& t, const std::string& base, TaskReport& rep) {
    const auto& est = estimator();
    const auto& sp = spectrum();
    const int n_max = t.n_max.value_or(sp.count + 1);
    Table tab{base + ".csv", {"n", "lo", "lambda_exact", "hi", "sandwich"}, std::vector<std::vector<std::string>>(n_max)};
    std::vector<char> ok(static_cast<std::size_t>(n_max));
    parallel_for(static_cast<std::size_t>(n_max), threads_, [&](std::size_t i) {
      const int n = static_cast<int>(i) + 1;
      const auto e = est.eigenvalue(n);
      const double exact = n <= sp.count ? sp.eigenvalues[i] : 0.0;
      const double err = n <= sp.count ? sp.errors[i] : 0.0;
      const bool good = leq(e.lo, exact, err) && leq(exact, e.hi, err);
      ok[i] = good;
      tab.rows[i] = {std::to_string(n), f(e.lo), f(exact), f(e.hi), flag(good)};
    });
    for (char c : ok) count(rep, c);
    rep.tables.push_back(std::move(tab));
  }

  void execute(const task::LtTable& t, const std::string& base, TaskReport& rep) {
    const auto& est = estimator();
    const auto& sp = spectrum();
    Table tab{base + ".csv",
              {"gamma", "lt_exact", "lower_qstar", "upper_qstar", "lower_mass", "upper_mass", "lower_c1", "upper_c2",
               "upper_decomp", "sandwich"},
              std::vector<std::vector<std::string>>(t.gammas.size())};
    std::vector<char> ok(t.gammas.size());
    parallel_for(t.gammas.size(), threads_, [&](std::size_t i) {
      const double g = t.gammas[i];
      const auto b = est.lt(g);
      const auto lt = lt_sum_exact(s_.measure, sp, g);
      const double exact = lt.value, e = lt.err;
      bool good = leq(b.lower_qstar.value, exact, b.lower_qstar.err + e) &&
                  leq(exact, b.upper_qstar.value, b.upper_qstar.err + e) && leq(b.lower_c1.value, exact, b.lower_c1.err + e) &&
                  leq(exact, b.upper_c2.value, b.upper_c2.err + e) && leq(exact, b.upper_decomp.value, e);
      if (b.lower_mass) good = good && leq(b.lower_mass->value, exact, e) && leq(exact, b.upper_mass->value, e);
      ok[i] = good;
      tab.rows[i] = {f(g),
                     f(exact),
                     f(b.lower_qstar.value),
                     f(b.upper_qstar.value),
                     b.lower_mass ? f(b.lower_mass->value) : "",
                     b.upper_mass ? f(b.upper_mass->value) : "",
                     f(b.lower_c1.value),
                     f(b.upper_c2.value),
                     f(b.upper_decomp.value),
                     flag(good)};
    });
    for (char c : ok) count(rep, c);
    rep.tables.push_back(std::move(tab));
  }

  void execute(const task::Edges&, const std::string& base, TaskReport& rep) {
    const auto& est = estimator();
    const auto& sp = spectrum();
    const auto e = est.edges();
    const double l1 = sp.count ? sp.eigenvalues[0] : 0.0;
    const double err = sp.count ? sp.errors[0] : 0.0;
    const double nl = est.n_minus_lower();
    const bool good = leq(e.lambda1_lo, l1, err) && leq(l1, e.lambda1_hi, err) && leq(nl, sp.count, 0.0);
    Table tab{base + ".csv",
              {"lambda1_lo", "lambda1_exact", "lambda1_hi", "Lambda_lo", "Lambda_hi", "Q1", "Q2", "n_minus_lower",
               "N_minus_exact", "sandwich"},
              {{f(e.lambda1_lo), f(l1), f(e.lambda1_hi), f(e.Lambda_lo), f(e.Lambda_hi), f(e.Q1), f(e.Q2), f(nl),
                std::to_string(sp.count), flag(good)}}};
    count(rep, good);
    rep.tables.push_back(std::move(tab));
  }

  void execute(const task::Compare& t, const std::string& base, TaskReport& rep) {
    const bool lt = t.generator == "lt_counterexample";
    const double gamma = lt ? t.params.at("p").get<double>() - 0.5 : t.params.at("gamma").get<double>();
    Table tab{base + ".csv", {"K", "classical", "qstar_power", "nw_A", "nw_B"},
              std::vector<std::vector<std::string>>(t.K.size())};
    parallel_for(t.K.size(), threads_, [&](std::size_t i) {
      nlohmann::json p = t.params;
      p["K"] = t.K[i];
      const Measure m = generate_example(t.generator, p);
      std::string A, B;
      if (gamma > 0.0 && gamma < 0.5) {
        const auto nw = nw_functionals(m, gamma, t.K[i]);
        A = f(nw.A);
        B = f(nw.B);
      }
      tab.rows[i] = {std::to_string(t.K[i]), f(classical_lt_integral(m, gamma)), f(power_integral(m, 1.0, gamma).value),
                     A, B};
    });
    rep.tables.push_back(std::move(tab));
  }

  void execute(const task::DoubleDeltaSweep& t, const std::string& base, TaskReport& rep) {
    const std::size_t ng = t.gammas.size();
    const std::size_t n = t.ys.size() * ng;
    Table tab{base + ".csv", {"y", "gamma", "upper_qstar", "closed_form", "rel_err", "match"},
              std::vector<std::vector<std::string>>(n)};
    std::vector<char> ok(n);
    parallel_for(n, threads_, [&](std::size_t i) {
      const double y = t.ys[i / ng], g = t.gammas[i % ng];
      const Measure m = Measure::build({{0.0, 1.0}, {y, 1.0}}, {});
      const double v = std::pow(4.0, g + 1.0) * power_integral(m, kBeta, g).value;
      const double c = closed_form::two_delta_lt_upper(y, g);
      const double rel = std::abs(v - c) / std::abs(c);
      ok[i] = rel <= s_.tol.closed_form_rel;
      tab.rows[i] = {f(y), f(g), f(v), f(c), f(rel), flag(ok[i])};
    });
    for (char c : ok)
      if (!c) ++rep.check_fail;
    rep.tables.push_back(std::move(tab));
  }

  Scenario s_;
  unsigned threads_;
  std::optional<SpectralEstimator> est_;
  std::optional<Spectrum> spec_;
};

namespace detail {

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << content;
  os.close();
  if (!os) throw std::runtime_error("cannot write " + p.string());
}

inline void prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw std::runtime_error("cannot create output directory " + dir.string());
  const auto probe = dir / ".otelbaev_write_probe";
  write_file(probe, "");
  std::filesystem::remove(probe, ec);
}

}  // namespace detail

inline RunResult run_scenario_json(const nlohmann::json& j, const std::string& source, const RunOptions& opt) {
  RunResult res;
  Scenario s;
  try {
    s = parse_scenario(j, std::filesystem::path(source).stem().string());
  } catch (const InvalidInput& e) {
    res.exit = exit_code::bad_input;
    res.message = source + ": " + e.what();
    return res;
  }
  if (opt.tol) {
    if (!(*opt.tol > 0.0)) {
      res.exit = exit_code::bad_input;
      res.message = "--tol must be > 0";
      return res;
    }
    s.tol.spectrum = *opt.tol;
  }
  std::filesystem::path dir = !opt.out_dir.empty() ? opt.out_dir : (!s.output.empty() ? s.output : "otelbaev_out/" + s.name);
  res.out_dir = dir.string();
  try {
    detail::prepare_dir(dir);
  } catch (const std::exception& e) {
    res.exit = exit_code::bad_input;
    res.message = e.what();
    return res;
  }

  nlohmann::ordered_json summary;
  summary["scenario"] = s.name;
  summary["versions"] = {{"otelbaev", OTELBAEV_VERSION},
                         {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                               std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                               std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  summary["tolerances"] = s.tol.to_json();
  summary["measure"] = s.measure_json;
  nlohmann::ordered_json tasks = nlohmann::ordered_json::array();
  ScenarioRunner runner(std::move(s), opt.threads);
  std::vector<TaskReport> reports;
  try {
    reports = runner.run();
  } catch (const NumericalFailure& e) {
    res.exit = exit_code::numerical_failure;
    res.message = std::string("numerical cross-check failed: ") + e.what();
  } catch (const InvalidInput& e) {
    res.exit = exit_code::bad_input;
    res.message = e.what();
  }
  try {
    for (const auto& r : reports) {
      nlohmann::ordered_json files = nlohmann::ordered_json::array();
      for (const auto& t : r.tables) {
        detail::write_file(dir / t.file, t.csv());
        files.push_back(t.file);
        res.files.push_back(t.file);
      }
      tasks.push_back({{"type", r.type}, {"files", files}, {"pass", r.pass}, {"fail", r.fail}, {"check_fail", r.check_fail}});
      res.pass += r.pass;
      res.fail += r.fail;
      res.check_fail += r.check_fail;
    }
    if (res.exit == exit_code::ok) {
      if (res.check_fail > 0) {
        res.exit = exit_code::numerical_failure;
        res.message = std::to_string(res.check_fail) + " cross-check failure(s)";
      } else if (res.fail > 0) {
        res.exit = exit_code::sandwich_violation;
        res.message = std::to_string(res.fail) + " sandwich violation(s)";
      }
    }
    summary["tasks"] = tasks;
    summary["pass"] = res.pass;
    summary["fail"] = res.fail;
    summary["check_fail"] = res.check_fail;
    summary["exit_code"] = res.exit;
    if (!res.message.empty()) summary["message"] = res.message;
    detail::write_file(dir / "summary.json", summary.dump(2) + "\n");
    res.files.push_back("summary.json");
  } catch (const std::runtime_error& e) {
    res.exit = exit_code::bad_input;
    res.message = e.what();
  }
  return res;
}

inline RunResult run_scenario(const std::string& path, const RunOptions& opt) {
  RunResult res;
  std::ifstream is(path);
  if (!is) {
    res.exit = exit_code::bad_input;
    res.message = path + ": cannot open scenario file";
    return res;
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    res.exit = exit_code::bad_input;
    res.message = path + ": JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what();
    return res;
  }
  return run_scenario_json(j, path, opt);
}

}  // namespace otelbaev
