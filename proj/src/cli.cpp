// CSV/JSON front end over the transform and oracle layers. One job per
// invocation: spectrum | transform | verify | eval. Numbers are emitted at
// 12 significant digits in CSV (plot feed) and 17 in JSON (round-trip exact
// for 64-bit floats); both outputs are byte-deterministic for a fixed
// configuration.

#include "susytrm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "susytrm/errors.hpp"
#include "susytrm/oracle.hpp"
#include "susytrm/susy1.hpp"
#include "susytrm/susy2.hpp"
#include "susytrm/trm.hpp"

namespace susytrm::cli {
namespace {

using nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;

// ---- serialization ---------------------------------------------------------

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

// nlohmann prints doubles in shortest-round-trip form; the interface contract
// pins 17 significant digits instead, so the document is walked manually and
// only the float leaves are formatted here
void dump_17(const ordered_json& j, std::string& out, int depth) {
  auto pad = [&out](int d) { out.append(2 * static_cast<std::size_t>(d), ' '); };
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      pad(depth + 1);
      out += nlohmann::json(it.key()).dump();
      out += ": ";
      dump_17(it.value(), out, depth + 1);
      if (i + 1 < j.size()) out += ',';
      out += '\n';
    }
    pad(depth);
    out += '}';
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      pad(depth + 1);
      dump_17(j[i], out, depth + 1);
      if (i + 1 < j.size()) out += ',';
      out += '\n';
    }
    pad(depth);
    out += ']';
  } else if (j.is_number_float()) {
    double v = j.get<double>();
    if (!std::isfinite(v)) {
      out += "null";
      return;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    out += buf;
  } else {
    out += j.dump();  // strings (escaped), integers, booleans, null
  }
}

std::string dump_17(const ordered_json& j) {
  std::string out;
  dump_17(j, out, 0);
  out += '\n';
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open output file: " + path);
  f << text;
  if (!f) throw DomainError("short write to output file: " + path);
}

int fail(int code, const std::string& msg) {
  ordered_json doc;
  doc["schema"] = "susy-trm/1";
  doc["error"] = msg;
  doc["exit_code"] = code;
  std::string text = dump_17(doc);
  std::fwrite(text.data(), 1, text.size(), stderr);
  return code;
}

// ---- seed grammar ----------------------------------------------------------
// bound:<n> | general:<eps>:<lambda> | L:<eps> | R:<eps> | complex:<re>:<im>:<L|R>

struct ParsedSeed {
  enum Kind { bound, general, left, right, cplx } kind = general;
  int index = 0;
  double eps = 0.0;
  double lambda = 0.0;
  double re = 0.0, im = 0.0;
  trm::SeedKind side = trm::SeedKind::pure_L;
  std::string text;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t from = 0;
  while (true) {
    std::size_t at = s.find(sep, from);
    if (at == std::string::npos) {
      parts.push_back(s.substr(from));
      return parts;
    }
    parts.push_back(s.substr(from, at - from));
    from = at + 1;
  }
}

double parse_num(const std::string& tok, const std::string& where) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw DomainError(where + ": bad number '" + tok + "'");
  }
  if (pos != tok.size() || !std::isfinite(v))
    throw DomainError(where + ": bad number '" + tok + "'");
  return v;
}

int parse_int(const std::string& tok, const std::string& where) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &pos);
  } catch (const std::exception&) {
    throw DomainError(where + ": bad integer '" + tok + "'");
  }
  if (pos != tok.size()) throw DomainError(where + ": bad integer '" + tok + "'");
  return v;
}

ParsedSeed parse_seed(const std::string& text) {
  const std::string where = "seed spec '" + text + "'";
  auto parts = split(text, ':');
  auto want = [&](std::size_t n) {
    if (parts.size() != n)
      throw DomainError(where + ": expected " + std::to_string(n - 1) + " field(s) after '" +
                        parts[0] + "'");
  };
  ParsedSeed s;
  s.text = text;
  if (parts[0] == "bound") {
    want(2);
    s.kind = ParsedSeed::bound;
    s.index = parse_int(parts[1], where);
    if (s.index < 0) throw DomainError(where + ": bound-state index must be >= 0");
  } else if (parts[0] == "general") {
    want(3);
    s.kind = ParsedSeed::general;
    s.eps = parse_num(parts[1], where);
    s.lambda = parse_num(parts[2], where);
  } else if (parts[0] == "L" || parts[0] == "R") {
    want(2);
    s.kind = (parts[0] == "L") ? ParsedSeed::left : ParsedSeed::right;
    s.eps = parse_num(parts[1], where);
  } else if (parts[0] == "complex") {
    want(4);
    s.kind = ParsedSeed::cplx;
    s.re = parse_num(parts[1], where);
    s.im = parse_num(parts[2], where);
    if (parts[3] == "L")
      s.side = trm::SeedKind::pure_L;
    else if (parts[3] == "R")
      s.side = trm::SeedKind::pure_R;
    else
      throw DomainError(where + ": side must be L or R");
  } else {
    throw DomainError(where +
                      ": unknown kind (expected bound:<n>, general:<eps>:<lambda>, L:<eps>, "
                      "R:<eps>, complex:<re>:<im>:<L|R>)");
  }
  return s;
}

susy2::SeedSpec to_spec(const ParsedSeed& s) {
  switch (s.kind) {
    case ParsedSeed::bound:
      return susy2::SeedSpec::bound(s.index);
    case ParsedSeed::general:
      return susy2::SeedSpec::general(s.eps, s.lambda);
    case ParsedSeed::left:
      return susy2::SeedSpec::left(s.eps);
    case ParsedSeed::right:
      return susy2::SeedSpec::right(s.eps);
    case ParsedSeed::cplx:
      break;
  }
  throw DomainError("seed spec '" + s.text + "': complex seeds need --case complex");
}

trm::Solution seed_solution(const trm::TrmParams& p, const ParsedSeed& s) {
  switch (s.kind) {
    case ParsedSeed::bound:
      return trm::bound_state(p, s.index);
    case ParsedSeed::general:
      return trm::general_solution(p, s.eps, s.lambda);
    case ParsedSeed::left:
      return trm::psi_L(p, s.eps);
    case ParsedSeed::right:
      return trm::psi_R(p, s.eps);
    case ParsedSeed::cplx:
      break;
  }
  return (s.side == trm::SeedKind::pure_L) ? trm::psi_L(p, {s.re, s.im})
                                           : trm::psi_R(p, {s.re, s.im});
}

double seed_energy(const trm::TrmParams& p, const ParsedSeed& s) {
  if (s.kind == ParsedSeed::bound) return trm::bound_energy(p, s.index);
  if (s.kind == ParsedSeed::cplx)
    throw DomainError("seed spec '" + s.text + "': a complex energy has no real level");
  return s.eps;
}

// ---- job description ---------------------------------------------------------

struct JobConfig {
  double a = 2.0;
  double b = 50.0;
  int levels = 8;
  int order = 2;
  std::string case_label = "real";
  std::string seed1, seed2;
  int j = 0;
  bool j_set = false;
  double w0 = 0.0;
  bool w0_set = false;
  int points = 1000;
  double delta = trm::kEndpointInset;
  int grid_points = 0;  // 0: fall back to SUSY_TRM_GRID, then 2001
  std::string state = "seed";
  std::string out, meta, expect;
};

std::vector<double> sample_grid(const JobConfig& cfg) {
  if (cfg.points < 2) throw DomainError("--points must be at least 2");
  if (!(cfg.delta > 0.0) || !(cfg.delta < kPi / 2))
    throw DomainError("--delta must lie in (0, pi/2)");
  std::vector<double> xs(static_cast<std::size_t>(cfg.points));
  double h = (kPi - 2.0 * cfg.delta) / (cfg.points - 1);
  for (int i = 0; i < cfg.points; ++i) xs[static_cast<std::size_t>(i)] = cfg.delta + h * i;
  return xs;
}

int resolve_grid_points(const JobConfig& cfg) {
  if (cfg.grid_points > 0) return cfg.grid_points;
  if (const char* env = std::getenv("SUSY_TRM_GRID")) {
    int n = parse_int(env, "SUSY_TRM_GRID");
    if (n <= 0) throw DomainError("SUSY_TRM_GRID: grid size must be positive");
    return n;
  }
  return 2001;
}

// ---- transformation assembly -------------------------------------------------

// everything a command needs from a built transform, regardless of order
struct BuiltTransform {
  oracle::RealFn V;
  std::vector<double> predicted;
  std::string construction;
  double c0 = 0.0, cpi = 0.0;
  std::vector<std::string> warnings;
  bool second = false;
  susy1::PartnerPotential first_order;
  susy2::SecondOrderPotential second_order;
};

BuiltTransform build_first_order(const trm::TrmParams& p, const JobConfig& cfg) {
  if (cfg.case_label != "real")
    throw DomainError("--order 1 supports --case real only");
  if (cfg.seed1.empty()) throw DomainError("--seed1 is required");
  if (!cfg.seed2.empty()) throw DomainError("--order 1 takes a single seed");
  ParsedSeed s = parse_seed(cfg.seed1);
  susy1::PartnerPotential pot;
  switch (s.kind) {
    case ParsedSeed::bound:
      pot = (s.index == 0)
                ? susy1::delete_ground(p, cfg.levels)
                : susy1::first_order_potential(p, trm::bound_state(p, s.index),
                                               trm::bound_energy(p, s.index), cfg.levels);
      break;
    case ParsedSeed::general:
      pot = (s.lambda > 0.0)
                ? susy1::create_ground(p, s.eps, s.lambda, cfg.levels)
                : susy1::first_order_potential(p, trm::general_solution(p, s.eps, s.lambda),
                                               s.eps, cfg.levels);
      break;
    case ParsedSeed::left:
      pot = susy1::isospectral(p, trm::SeedKind::pure_L, s.eps, cfg.levels);
      break;
    case ParsedSeed::right:
      pot = susy1::isospectral(p, trm::SeedKind::pure_R, s.eps, cfg.levels);
      break;
    case ParsedSeed::cplx:
      throw DomainError("complex seeds need --order 2 --case complex");
  }
  BuiltTransform t;
  t.V = pot.V;
  t.predicted = pot.predicted_spectrum;
  t.construction = pot.construction;
  t.c0 = pot.singular_c0;
  t.cpi = pot.singular_cpi;
  t.warnings = pot.warnings;
  t.first_order = std::move(pot);
  return t;
}

BuiltTransform build_second_order(const trm::TrmParams& p, const JobConfig& cfg) {
  susy2::SecondOrderPotential pot;
  if (cfg.case_label == "real") {
    if (cfg.seed1.empty() || cfg.seed2.empty())
      throw DomainError("--case real needs --seed1 and --seed2");
    pot = susy2::real_case_transform(p, to_spec(parse_seed(cfg.seed1)),
                                     to_spec(parse_seed(cfg.seed2)), cfg.levels);
  } else if (cfg.case_label == "complex") {
    if (cfg.seed1.empty()) throw DomainError("--case complex needs --seed1 complex:<re>:<im>:<L|R>");
    if (!cfg.seed2.empty()) throw DomainError("--case complex takes a single seed");
    ParsedSeed s = parse_seed(cfg.seed1);
    if (s.kind != ParsedSeed::cplx)
      throw DomainError("--case complex needs a complex:<re>:<im>:<L|R> seed");
    pot = susy2::complex_case_transform(p, {s.re, s.im}, s.side, cfg.levels);
  } else if (cfg.case_label == "confluent") {
    if (!cfg.j_set || !cfg.w0_set) throw DomainError("--case confluent needs --j and --w0");
    if (!cfg.seed1.empty() || !cfg.seed2.empty())
      throw DomainError("--case confluent is configured by --j/--w0, not seeds");
    pot = susy2::confluent_transform(p, cfg.j, cfg.w0, cfg.levels);
  } else {
    throw DomainError("--case must be real, complex, or confluent");
  }
  BuiltTransform t;
  t.second = true;
  t.V = pot.V;
  t.predicted = pot.predicted_spectrum;
  t.construction = pot.construction;
  t.c0 = pot.singular_c0;
  t.cpi = pot.singular_cpi;
  t.warnings = pot.warnings;
  t.second_order = std::move(pot);
  return t;
}

BuiltTransform build_transform(const trm::TrmParams& p, const JobConfig& cfg) {
  if (cfg.order == 1) return build_first_order(p, cfg);
  if (cfg.order == 2) return build_second_order(p, cfg);
  throw DomainError("--order must be 1 or 2");
}

// configuration echo shared by the transform sidecar and the verify report
void describe_job(ordered_json& doc, const JobConfig& cfg, const BuiltTransform& t) {
  doc["a"] = cfg.a;
  doc["b"] = cfg.b;
  doc["order"] = cfg.order;
  doc["case"] = cfg.case_label;
  doc["construction"] = t.construction;
  ordered_json seeds = ordered_json::array();
  if (!cfg.seed1.empty()) seeds.push_back(cfg.seed1);
  if (!cfg.seed2.empty()) seeds.push_back(cfg.seed2);
  doc["seeds"] = seeds;
  if (cfg.case_label == "confluent") {
    doc["j"] = cfg.j;
    doc["w0"] = cfg.w0;
  }
}

// ---- commands ------------------------------------------------------------------

int cmd_spectrum(const JobConfig& cfg) {
  auto p = trm::TrmParams::make(cfg.a, cfg.b);
  if (cfg.levels < 1) throw DomainError("--levels must be at least 1");
  ordered_json doc;
  doc["schema"] = "susy-trm/1";
  doc["command"] = "spectrum";
  doc["a"] = cfg.a;
  doc["b"] = cfg.b;
  ordered_json levels = ordered_json::array();
  for (int n = 0; n < cfg.levels; ++n)
    levels.push_back(ordered_json{{"n", n}, {"E", trm::bound_energy(p, n)}});
  doc["levels"] = levels;
  write_text(cfg.out, dump_17(doc));
  return 0;
}

std::string sidecar_path(const JobConfig& cfg) {
  if (!cfg.meta.empty()) return cfg.meta;
  if (cfg.out.empty()) return "";  // CSV on stdout: nowhere sensible to put a sidecar
  auto side = std::filesystem::path(cfg.out).replace_extension(".json").string();
  if (side == cfg.out)
    throw DomainError("sidecar path would overwrite the CSV; pass --meta explicitly");
  return side;
}

int cmd_transform(const JobConfig& cfg) {
  auto p = trm::TrmParams::make(cfg.a, cfg.b);
  BuiltTransform t = build_transform(p, cfg);
  auto xs = sample_grid(cfg);

  std::string csv = t.second ? "x,V0,V2\n" : "x,V0,V1\n";
  for (double x : xs) {
    csv += csv_num(x);
    csv += ',';
    csv += csv_num(trm::potential(p, x));
    csv += ',';
    csv += csv_num(t.V(x));
    csv += '\n';
  }
  write_text(cfg.out, csv);

  std::string side = sidecar_path(cfg);
  if (!side.empty()) {
    ordered_json doc;
    doc["schema"] = "susy-trm/1";
    doc["command"] = "transform";
    describe_job(doc, cfg, t);
    doc["predicted_spectrum"] = t.predicted;
    doc["singular_c0"] = t.c0;
    doc["singular_cpi"] = t.cpi;
    doc["warnings"] = t.warnings;
    doc["grid"] = ordered_json{{"points", cfg.points}, {"delta", cfg.delta}};
    write_text(side, dump_17(doc));
  }
  return 0;
}

std::vector<double> load_expected(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot open --expect file: " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw DomainError("--expect " + path + ": " + e.what());
  }
  if (!j.contains("predicted_spectrum") || !j["predicted_spectrum"].is_array())
    throw DomainError("--expect " + path + ": no predicted_spectrum array");
  std::vector<double> out;
  for (const auto& v : j["predicted_spectrum"]) {
    if (!v.is_number()) throw DomainError("--expect " + path + ": non-numeric level");
    out.push_back(v.get<double>());
  }
  return out;
}

int cmd_verify(const JobConfig& cfg) {
  auto p = trm::TrmParams::make(cfg.a, cfg.b);
  BuiltTransform t = build_transform(p, cfg);
  std::vector<double> predicted =
      cfg.expect.empty() ? t.predicted : load_expected(cfg.expect);
  if (predicted.empty()) throw DomainError("nothing to verify: predicted spectrum is empty");
  if (!std::is_sorted(predicted.begin(), predicted.end()))
    throw DomainError("predicted spectrum must be ascending");

  int n = resolve_grid_points(cfg);
  auto grid = oracle::Grid::make(n);
  int k = static_cast<int>(predicted.size()) + 2;
  auto rep = oracle::fd_eigensolve(t.V, grid, k);
  double tol = rep.certified_tolerance;

  bool ok = true;
  ordered_json matches = ordered_json::array();
  for (double E : predicted) {
    double best = rep.eigenvalues.front();
    for (double ev : rep.eigenvalues)
      if (std::abs(ev - E) < std::abs(best - E)) best = ev;
    double err = std::abs(best - E);
    bool hit = err <= tol;
    ok = ok && hit;
    matches.push_back(ordered_json{{"E", E}, {"oracle", best}, {"error", err}, {"ok", hit}});
  }

  // a level below the top of the predicted band that is farther than the
  // certified tolerance from every predicted one is a genuine intruder
  ordered_json unpredicted = ordered_json::array();
  for (double ev : rep.eigenvalues) {
    if (!(ev < predicted.back())) break;
    double dmin = std::abs(ev - predicted.front());
    for (double E : predicted) dmin = std::min(dmin, std::abs(ev - E));
    if (dmin > tol) {
      unpredicted.push_back(ev);
      ok = false;
    }
  }

  ordered_json doc;
  doc["schema"] = "susy-trm/1";
  doc["command"] = "verify";
  describe_job(doc, cfg, t);
  doc["grid_points"] = n;
  doc["certified_tolerance"] = tol;
  doc["predicted"] = predicted;
  doc["oracle"] = rep.eigenvalues;
  doc["matches"] = matches;
  doc["unpredicted"] = unpredicted;
  doc["ok"] = ok;
  write_text(cfg.out, dump_17(doc));
  return ok ? 0 : 4;
}

trm::Solution build_state(const trm::TrmParams& p, const JobConfig& cfg) {
  auto state = split(cfg.state, ':');
  const std::string& head = state[0];

  if (head == "seed") {
    if (state.size() != 1) throw DomainError("--state seed takes no argument");
    if (cfg.seed1.empty()) throw DomainError("--seed1 is required");
    return seed_solution(p, parse_seed(cfg.seed1));
  }

  if (head == "missing") {
    if (state.size() != 1) throw DomainError("--state missing takes no argument");
    if (cfg.seed1.empty()) throw DomainError("--seed1 is required");
    ParsedSeed s = parse_seed(cfg.seed1);
    if (s.kind == ParsedSeed::cplx)
      throw DomainError("--state missing needs a real seed");
    return susy1::missing_state(seed_solution(p, s));
  }

  if (head == "mapped") {
    if (state.size() != 2) throw DomainError("--state mapped:<n> needs a level index");
    int n = parse_int(state[1], "--state mapped");
    if (n < 0) throw DomainError("--state mapped: level index must be >= 0");
    trm::Solution psi = trm::bound_state(p, n);
    double E_n = trm::bound_energy(p, n);
    if (cfg.order == 1) {
      if (cfg.seed1.empty()) throw DomainError("--seed1 is required");
      ParsedSeed s = parse_seed(cfg.seed1);
      if (s.kind == ParsedSeed::cplx)
        throw DomainError("--state mapped with --order 1 needs a real seed");
      return susy1::map_eigenfunction_1(seed_solution(p, s), seed_energy(p, s), psi, E_n);
    }
    if (cfg.order != 2 || cfg.case_label != "real")
      throw DomainError("--state mapped supports --order 1 or --order 2 --case real");
    if (cfg.seed1.empty() || cfg.seed2.empty())
      throw DomainError("--case real needs --seed1 and --seed2");
    auto pot = susy2::real_case_transform(p, to_spec(parse_seed(cfg.seed1)),
                                          to_spec(parse_seed(cfg.seed2)), cfg.levels);
    return susy2::map_eigenfunction_2(pot.u1, pot.u2, psi, E_n);
  }

  if (head == "new") {
    if (state.size() != 2) throw DomainError("--state new:<k> needs a candidate index");
    int k = parse_int(state[1], "--state new");
    if (cfg.order != 2 || cfg.case_label != "real")
      throw DomainError("--state new needs --order 2 --case real");
    if (cfg.seed1.empty() || cfg.seed2.empty())
      throw DomainError("--case real needs --seed1 and --seed2");
    auto pot = susy2::real_case_transform(p, to_spec(parse_seed(cfg.seed1)),
                                          to_spec(parse_seed(cfg.seed2)), cfg.levels);
    auto cands = susy2::new_bound_states_2(pot.u1, pot.u2);
    if (k < 0 || k >= static_cast<int>(cands.size()))
      throw DomainError("--state new: candidate index must be 0 or 1");
    return cands[static_cast<std::size_t>(k)];
  }

  if (head == "confluent") {
    if (state.size() != 1) throw DomainError("--state confluent takes no argument");
    if (!cfg.j_set || !cfg.w0_set) throw DomainError("--state confluent needs --j and --w0");
    return susy2::confluent_state(p, cfg.j, cfg.w0);
  }

  throw DomainError("unknown --state '" + cfg.state +
                    "' (expected seed, missing, mapped:<n>, new:<k>, or confluent)");
}

int cmd_eval(const JobConfig& cfg) {
  auto p = trm::TrmParams::make(cfg.a, cfg.b);
  trm::Solution state = build_state(p, cfg);
  auto xs = sample_grid(cfg);
  std::string csv = "x,re,im,d_re,d_im\n";
  for (double x : xs) {
    auto [v, d] = state.eval(x);
    csv += csv_num(x);
    csv += ',';
    csv += csv_num(v.real());
    csv += ',';
    csv += csv_num(v.imag());
    csv += ',';
    csv += csv_num(d.real());
    csv += ',';
    csv += csv_num(d.imag());
    csv += '\n';
  }
  write_text(cfg.out, csv);
  return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args) {
  CLI::App app{"spectral-design toolkit for the trigonometric Rosen-Morse model"};
  app.require_subcommand(1);
  JobConfig cfg;

  auto add_common = [&cfg](CLI::App* c) {
    c->add_option("--a", cfg.a, "csc^2 coupling, a > 0")->capture_default_str();
    c->add_option("--b", cfg.b, "cot coupling")->capture_default_str();
    c->add_option("--levels", cfg.levels, "levels kept in predicted spectra")
        ->capture_default_str();
    c->add_option("--out", cfg.out, "output path (stdout when omitted)");
  };
  auto add_transform = [&cfg](CLI::App* c) {
    c->add_option("--order", cfg.order, "transform order (1 or 2)")->capture_default_str();
    c->add_option("--case", cfg.case_label, "real | complex | confluent")
        ->capture_default_str();
    c->add_option("--seed1", cfg.seed1,
                  "bound:<n> | general:<eps>:<lambda> | L:<eps> | R:<eps> | "
                  "complex:<re>:<im>:<L|R>");
    c->add_option("--seed2", cfg.seed2, "second seed (real case of order 2)");
    c->add_option_function<int>(
        "--j", [&cfg](const int& v) { cfg.j = v; cfg.j_set = true; },
        "bound level for the confluent case");
    c->add_option_function<double>(
        "--w0", [&cfg](const double& v) { cfg.w0 = v; cfg.w0_set = true; },
        "Wronskian offset for the confluent case");
  };
  auto add_sampling = [&cfg](CLI::App* c) {
    c->add_option("--points", cfg.points, "sample count")->capture_default_str();
    c->add_option("--delta", cfg.delta, "endpoint inset of the sample window")
        ->capture_default_str();
  };

  CLI::App* sp = app.add_subcommand("spectrum", "print the exact bound-level ladder as JSON");
  add_common(sp);

  CLI::App* tr =
      app.add_subcommand("transform", "build a partner potential and emit CSV samples");
  add_common(tr);
  add_transform(tr);
  add_sampling(tr);
  tr->add_option("--meta", cfg.meta, "sidecar JSON path (defaults next to --out)");

  CLI::App* vf =
      app.add_subcommand("verify", "cross-check a transform against the eigensolver");
  add_common(vf);
  add_transform(vf);
  vf->add_option("--grid-points", cfg.grid_points,
                 "eigensolver grid size (overrides SUSY_TRM_GRID, default 2001)");
  vf->add_option("--expect", cfg.expect,
                 "take the predicted spectrum from this sidecar JSON instead");

  CLI::App* ev = app.add_subcommand("eval", "sample one solution as CSV");
  add_common(ev);
  add_transform(ev);
  add_sampling(ev);
  ev->add_option("--state", cfg.state, "seed | missing | mapped:<n> | new:<k> | confluent")
      ->capture_default_str();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const std::string name = app.get_subcommands().at(0)->get_name();
    if (name == "spectrum") return cmd_spectrum(cfg);
    if (name == "transform") return cmd_transform(cfg);
    if (name == "verify") return cmd_verify(cfg);
    return cmd_eval(cfg);
  } catch (const DomainError& e) {
    return fail(2, e.what());
  } catch (const SeedRuleError& e) {
    return fail(3, e.what());
  } catch (const VerificationError& e) {
    return fail(4, e.what());
  } catch (const NumericalError& e) {
    return fail(5, e.what());
  } catch (const std::exception& e) {
    return fail(5, e.what());
  }
}

}  // namespace susytrm::cli
