#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "symcap/cremona.hpp"
#include "symcap/diophantine.hpp"
#include "symcap/ech.hpp"
#include "symcap/ellipsoid.hpp"
#include "symcap/packing.hpp"
#include "symcap/parallel.hpp"
#include "symcap/weights.hpp"

namespace symcap::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kInternal = 1, kInvalid = 2, kUndecided = 3 };

enum class Format { Text, Json, Csv };

struct RunConfig {
  std::int64_t d_max = 100;
  std::size_t k_max = 2000;
  int refine_budget = kDefaultRefineBudget;
  std::int64_t denom_max = 8;
  unsigned jobs = default_jobs();
  std::filesystem::path cache_dir = default_cache_dir();
  Format format = Format::Text;
};

// Raised by a subcommand whose requested format has no tabular form.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::vector<Rat> parse_list(const std::string& s) {
  std::vector<Rat> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(Rat::parse(item));
  if (out.empty()) throw std::invalid_argument("empty list: '" + s + "'");
  return out;
}

inline std::string join(const std::vector<Rat>& v, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i].str();
  return s;
}

inline std::string join(const std::vector<std::int64_t>& v, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

inline RootBound presentable(const RootBound& x) { return x.is_exact() ? x : x.refined(64); }

inline Json to_json(const RootBound& x) {
  if (x.is_exact()) return x.exact()->str();
  RootBound r = presentable(x);
  return Json{{"expr", r.expr()}, {"lo", r.lo().str()}, {"hi", r.hi().str()}};
}

inline std::string to_text(const RootBound& x) {
  if (x.is_exact()) return x.exact()->str();
  RootBound r = presentable(x);
  std::ostringstream os;
  os << r.expr() << " ~ " << std::setprecision(12) << ((r.lo() + r.hi()) / Rat(2)).to_double();
  return os.str();
}

inline std::string interval_cell(const RootBound& x) {
  RootBound r = presentable(x);
  return "[" + r.lo().str() + ";" + r.hi().str() + "]";
}

inline Json to_json(const ClassVector& c) { return Json{{"d", c.d()}, {"m", c.m()}}; }

inline Json to_json(const Witness& w) { return w.cls ? to_json(*w.cls) : Json("volume"); }

inline Json to_json(const CapacityResult& c) {
  return Json{{"value", to_json(c.value)},
              {"certified", c.certified},
              {"witness", to_json(c.witness)},
              {"d_max", c.d_max_used}};
}

inline std::string to_text(const CapacityResult& c) {
  return to_text(c.value) + (c.certified ? " certified" : " uncertified") + " witness=" + c.witness.str();
}

inline Json to_json(const EchDecision& d) {
  Json j{{"verdict", to_string(d.verdict)}, {"certified_up_to", d.certified_up_to}};
  j["first_failure"] = d.verdict == EchVerdict::Embeds ? Json(nullptr) : Json(d.index);
  j["separation_index"] = d.separation_index ? Json(d.separation_index->get_str()) : Json(nullptr);
  j["fully_certified"] = d.fully_certified;
  return j;
}

inline std::string to_text(const EchDecision& d) {
  std::string s = to_string(d.verdict);
  if (d.verdict != EchVerdict::Embeds) s += " at k=" + std::to_string(d.index);
  s += " (checked k <= " + std::to_string(d.certified_up_to) + ")";
  if (d.separation_index) s += " separation_index=" + d.separation_index->get_str();
  if (d.fully_certified) s += " fully certified";
  return s;
}

inline void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

inline void require_text_or_json(const RunConfig& cfg, const char* cmd) {
  if (cfg.format == Format::Csv) throw UsageError(std::string("csv output is not available for ") + cmd);
}

inline int run_weights(const RunConfig& cfg, const std::string& a_str, std::ostream& out) {
  require_text_or_json(cfg, "weights");
  Rat a = Rat::parse(a_str);
  auto w = weight_expansion(a);
  if (cfg.format == Format::Json) {
    Json blocks = Json::array();
    for (const auto& b : w.blocks) blocks.push_back({{"value", b.value.str()}, {"mult", b.mult}});
    emit(out, {{"a", a.str()}, {"blocks", blocks}, {"flat", join(w.flat())}});
  } else {
    out << join(w.flat()) << "\n";
    out << "blocks:";
    for (const auto& b : w.blocks) out << " " << b.value << "^" << b.mult;
    out << "\n";
  }
  return kOk;
}

inline int run_reduce(const RunConfig& cfg, const std::vector<std::int64_t>& dm, std::int64_t max_steps,
                      std::ostream& out) {
  require_text_or_json(cfg, "reduce");
  if (dm.empty()) throw std::invalid_argument("reduce needs d followed by m1 m2 ...");
  ClassVector v(dm.front(), std::vector<std::int64_t>(dm.begin() + 1, dm.end()));
  auto r = max_steps > 0 ? reduce(v, max_steps) : reduce(v);
  if (cfg.format == Format::Json) {
    Json trace = Json::array();
    for (const auto& c : r.trace) trace.push_back(c.str());
    emit(out, {{"input", v.str()}, {"trace", trace}, {"verdict", to_string(r.verdict)}, {"steps", r.steps}});
  } else {
    for (const auto& c : r.trace) out << c << "\n";
    out << to_string(r.verdict) << " after " << r.steps << " steps\n";
  }
  return r.verdict == ReduceVerdict::BudgetExhausted ? kUndecided : kOk;
}

inline int run_solve_de(const RunConfig& cfg, bool explicit_dmax, std::int64_t max_parts, std::ostream& out) {
  require_text_or_json(cfg, "solve-de");
  if (!explicit_dmax) throw UsageError("solve-de requires an explicit --dmax");
  if (cfg.d_max < 1) throw std::invalid_argument("--dmax must be >= 1");
  std::optional<std::size_t> mp;
  if (max_parts > 0) mp = static_cast<std::size_t>(max_parts);
  auto load = load_or_build_catalog(cfg.cache_dir, cfg.d_max, mp, cfg.jobs);
  const auto& cat = load.catalog;
  if (cfg.format == Format::Json) {
    Json classes = Json::array(), rejected = Json::array();
    for (const auto& c : cat.classes) classes.push_back(to_json(c));
    for (const auto& c : cat.rejected) rejected.push_back(to_json(c));
    emit(out, {{"d_max", cat.d_max},
               {"max_parts", mp ? Json(*mp) : Json("unlimited")},
               {"from_cache", load.from_cache},
               {"classes", classes},
               {"rejected", rejected}});
  } else {
    for (const auto& c : cat.classes) out << c.d() << ": " << join(c.m(), " ") << "\n";
    for (const auto& c : cat.rejected) out << "rejected " << c << "\n";
    out << cat.classes.size() << " classes, " << cat.rejected.size() << " rejected"
        << (load.from_cache ? " (cached)" : "") << "\n";
  }
  return kOk;
}

inline int run_exceptional(const RunConfig& cfg, const std::vector<std::int64_t>& dm, std::ostream& out) {
  require_text_or_json(cfg, "exceptional");
  if (dm.empty()) throw std::invalid_argument("exceptional needs d followed by m1 m2 ...");
  ClassVector v(dm.front(), std::vector<std::int64_t>(dm.begin() + 1, dm.end()));
  bool exc = is_exceptional_candidate(v);
  auto r = reduce(v);
  if (cfg.format == Format::Json) {
    emit(out, {{"class", v.str()},
               {"solves_de", v.solves_de()},
               {"exceptional", exc},
               {"reduction", to_string(r.verdict)},
               {"steps", r.steps}});
  } else {
    out << v << (exc ? " exceptional" : " not exceptional") << " (solves_de=" << (v.solves_de() ? "yes" : "no")
        << ", reduction " << to_string(r.verdict) << " in " << r.steps << " steps)\n";
  }
  return !exc && r.verdict == ReduceVerdict::BudgetExhausted ? kUndecided : kOk;
}

inline int run_pack(const RunConfig& cfg, const std::string& a_str, const std::string& target, std::ostream& out) {
  require_text_or_json(cfg, "pack");
  PackingProblem p(parse_list(a_str), Rat::parse(target));
  auto d = pack_decide(p, cfg.d_max, cfg.refine_budget);
  const char* verdict = d.verdict == PackVerdict::Yes ? "Yes" : "No";
  if (cfg.format == Format::Json) {
    Json j{{"weights", join(p.weights)}, {"target", p.target.str()}, {"verdict", verdict}, {"certified", d.certified}};
    j["witness"] = d.verdict == PackVerdict::No ? to_json(d.witness) : Json(nullptr);
    j["d_max"] = cfg.d_max;
    emit(out, j);
  } else {
    out << verdict << (d.certified ? " certified" : " uncertified");
    if (d.verdict == PackVerdict::No) out << " witness=" << d.witness.str();
    out << "\n";
  }
  return kOk;
}

inline int run_capacity(const RunConfig& cfg, const std::string& a_str, std::ostream& out) {
  require_text_or_json(cfg, "capacity");
  auto a = parse_list(a_str);
  auto c = capacity(a, cfg.d_max, cfg.refine_budget);
  if (cfg.format == Format::Json) {
    Json j{{"weights", join(sorted_weights(a))}};
    j.update(to_json(c));
    emit(out, j);
  } else {
    out << to_text(c) << "\n";
  }
  return kOk;
}

inline int run_table2(const RunConfig& cfg, std::int64_t upto, std::ostream& out) {
  if (upto < 1) throw std::invalid_argument("--upto must be >= 1");
  auto rows = packing_table(upto, cfg.d_max);
  if (cfg.format == Format::Json) {
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json j{{"k", r.k}, {"c", to_json(r.capacity.value)}, {"p", r.packing_number.str()}};
      j["certified"] = r.capacity.certified;
      j["witness"] = to_json(r.capacity.witness);
      arr.push_back(j);
    }
    emit(out, arr);
  } else if (cfg.format == Format::Csv) {
    out << "k,c,p,certified,witness\n";
    for (const auto& r : rows)
      out << r.k << "," << (r.capacity.value.is_exact() ? r.capacity.value.exact()->str() : interval_cell(r.capacity.value))
          << "," << r.packing_number << "," << (r.capacity.certified ? "true" : "false") << "," << r.capacity.witness.str()
          << "\n";
  } else {
    out << std::left << std::setw(4) << "k" << std::setw(14) << "c_k" << std::setw(8) << "p_k"
        << "witness\n";
    for (const auto& r : rows)
      out << std::setw(4) << r.k << std::setw(14) << r.capacity.value.expr() << std::setw(8) << r.packing_number.str()
          << r.capacity.witness.str() << (r.capacity.certified ? "" : " (uncertified)") << "\n";
  }
  return kOk;
}

inline int run_c(const RunConfig& cfg, const std::string& a_str, std::ostream& out) {
  require_text_or_json(cfg, "c");
  Rat a = Rat::parse(a_str);
  auto c = c_of_a(a, cfg.d_max, cfg.refine_budget);
  if (cfg.format == Format::Json) {
    Json j{{"a", a.str()}};
    j.update(to_json(c));
    emit(out, j);
  } else {
    out << to_text(c) << "\n";
  }
  return kOk;
}

inline int run_staircase(const RunConfig& cfg, const std::string& lo, const std::string& hi, std::ostream& out) {
  auto rows = staircase_scan(Rat::parse(lo), Rat::parse(hi), cfg.denom_max, cfg.d_max, cfg.jobs, cfg.refine_budget);
  if (cfg.format == Format::Json) {
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json j{{"a", r.a.str()}};
      j.update(to_json(r.c));
      j["oracle"] = r.oracle ? Json(r.oracle->str()) : Json(nullptr);
      arr.push_back(j);
    }
    emit(out, arr);
  } else if (cfg.format == Format::Csv) {
    out << "a,c_num,c_den,certified,witness_d,witness_m,oracle\n";
    for (const auto& r : rows) {
      out << r.a << ",";
      if (auto e = r.c.value.exact())
        out << e->num().get_str() << "," << e->den().get_str();
      else
        out << interval_cell(r.c.value) << ",";
      out << "," << (r.c.certified ? "true" : "false") << ",";
      if (r.c.witness.cls)
        out << r.c.witness.cls->d() << "," << join(r.c.witness.cls->m(), " ");
      else
        out << ",volume";
      out << "," << (r.oracle ? r.oracle->str() : "") << "\n";
    }
  } else {
    for (const auto& r : rows) {
      out << r.a << "  " << to_text(r.c);
      if (r.oracle) out << "  oracle=" << *r.oracle;
      out << "\n";
    }
  }
  return kOk;
}

inline int run_ech_caps(const RunConfig& cfg, const std::string& a, const std::string& b, std::size_t k,
                        std::ostream& out) {
  auto seq = ech_capacities(RootBound(Rat::parse(a)), RootBound(Rat::parse(b)), k, cfg.refine_budget);
  if (cfg.format == Format::Json) {
    Json vals = Json::array();
    for (const auto& v : seq.values) vals.push_back(to_json(v));
    emit(out, {{"a", a}, {"b", b}, {"values", vals}});
  } else if (cfg.format == Format::Csv) {
    out << "k,value\n";
    for (std::size_t i = 0; i < seq.values.size(); ++i)
      out << i << "," << (seq.values[i].is_exact() ? seq.values[i].exact()->str() : interval_cell(seq.values[i]))
          << "\n";
  } else {
    std::vector<std::string> parts;
    for (const auto& v : seq.values) parts.push_back(to_text(v));
    for (std::size_t i = 0; i < parts.size(); ++i) out << (i ? "," : "") << parts[i];
    out << "\n";
  }
  return kOk;
}

inline Ellipsoid parse_ellipsoid(const std::string& s) {
  auto v = parse_list(s);
  if (v.size() != 2) throw std::invalid_argument("ellipsoid needs two entries a,b: '" + s + "'");
  return {RootBound(v[0]), RootBound(v[1])};
}

inline int run_ech_embeds(const RunConfig& cfg, const std::string& src, const std::string& tgt, std::ostream& out) {
  require_text_or_json(cfg, "ech-embeds");
  auto d = ech_decide(parse_ellipsoid(src), parse_ellipsoid(tgt), cfg.k_max, cfg.refine_budget);
  if (cfg.format == Format::Json) {
    Json j{{"src", src}, {"tgt", tgt}};
    j.update(to_json(d));
    emit(out, j);
  } else {
    out << to_text(d) << "\n";
  }
  return d.verdict == EchVerdict::Undecided ? kUndecided : kOk;
}

inline int run_ech_ball(const RunConfig& cfg, const std::string& a_str, const std::string& tol, std::ostream& out) {
  require_text_or_json(cfg, "ech-ball");
  Rat a = Rat::parse(a_str);
  auto br = ech_ball_capacity(a, cfg.k_max, Rat::parse(tol));
  if (cfg.format == Format::Json) {
    emit(out, {{"a", a.str()}, {"lo", br.lo.str()}, {"hi", br.hi.str()}, {"probes", br.probes}, {"k_max", cfg.k_max}});
  } else {
    out << "[" << br.lo << ", " << br.hi << "] after " << br.probes << " probes\n";
  }
  return kOk;
}

inline int run_stability(const RunConfig& cfg, std::int64_t k, std::ostream& out) {
  require_text_or_json(cfg, "stability");
  auto r = stability_chain_check(k, cfg.k_max, cfg.refine_budget);
  if (cfg.format == Format::Json) {
    Json j{{"k", k}, {"verdict", to_string(r.verdict)}, {"certified_up_to", r.certified_up_to}};
    j["failing_step"] = r.verdict == ChainVerdict::Holds ? Json(nullptr) : Json(r.step);
    j["first_failure"] = r.verdict == ChainVerdict::Holds ? Json(nullptr) : Json(r.index);
    j["steps"] = Json::array({to_json(r.steps[0]), to_json(r.steps[1])});
    emit(out, j);
  } else {
    out << to_string(r.verdict);
    if (r.verdict != ChainVerdict::Holds) out << " step " << r.step << " k=" << r.index;
    out << " (checked k <= " << r.certified_up_to << ")\n";
    for (int i = 0; i < 2; ++i) out << "  step " << i + 1 << ": " << to_text(r.steps[i]) << "\n";
  }
  return r.verdict == ChainVerdict::Undecided ? kUndecided : kOk;
}

inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact symplectic embedding capacities in dimension four", "symcap"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string format = "text", cache_dir = cfg.cache_dir.string();
  long long k_max = static_cast<long long>(cfg.k_max);
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  auto* dmax_opt = app.add_option("--dmax", cfg.d_max, "Largest class degree considered")->check(CLI::PositiveNumber);
  app.add_option("--kmax", k_max, "Largest ECH index compared")->check(CLI::PositiveNumber);
  app.add_option("--denom", cfg.denom_max, "Largest denominator on the staircase grid")->check(CLI::PositiveNumber);
  app.add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--cache-dir", cache_dir, "Catalog cache directory (env SYMCAP_CACHE_DIR)");
  app.add_option("--refine-budget", cfg.refine_budget, "Bisection steps per radical comparison")
      ->check(CLI::PositiveNumber);

  std::string a_str, b_str, target, lo = "1", hi, src, tgt, tol = "1/1000";
  std::vector<std::int64_t> dm;
  std::int64_t max_steps = 0, max_parts = 0, upto = 12, stab_k = 0;
  std::size_t ech_k = 20;

  auto* weights = app.add_subcommand("weights", "Weight expansion w(a)");
  weights->add_option("a", a_str, "a >= 1")->required();

  auto* reduce_cmd = app.add_subcommand("reduce", "Cremona reduction trace of (d; m1, m2, ...)");
  reduce_cmd->add_option("values", dm, "d m1 m2 ...")->required();
  reduce_cmd->add_option("--max-steps", max_steps, "Move budget");

  auto* solve = app.add_subcommand("solve-de", "Exceptional classes up to --dmax (cached)");
  solve->add_option("--max-parts", max_parts, "Only classes with at most this many entries");

  auto* exceptional = app.add_subcommand("exceptional", "Test (d; m1, m2, ...) for exceptionality");
  exceptional->add_option("values", dm, "d m1 m2 ...")->required();

  auto* pack = app.add_subcommand("pack", "Decide whether balls B(a_i) embed into B(A)");
  pack->add_option("--a", a_str, "Comma separated ball sizes")->required();
  pack->add_option("--A", target, "Target ball size")->required();

  auto* cap = app.add_subcommand("capacity", "Smallest ball containing the balls B(a_i)");
  cap->add_option("--a", a_str, "Comma separated ball sizes")->required();

  auto* table2 = app.add_subcommand("table2", "Capacities and packing numbers for k equal balls");
  table2->add_option("--upto", upto, "Largest k");

  auto* c_cmd = app.add_subcommand("c", "Ellipsoid into ball capacity c(a)");
  c_cmd->add_option("a", a_str, "a >= 1")->required();

  auto* stair = app.add_subcommand("staircase", "Scan c(a) over a rational grid");
  stair->add_option("--lo", lo, "Left end");
  stair->add_option("--hi", hi, "Right end")->required();

  auto* caps = app.add_subcommand("ech-caps", "First ECH capacities N_0..N_k of E(a,b)");
  caps->add_option("--a", a_str, "a > 0")->required();
  caps->add_option("--b", b_str, "b > 0")->required();
  caps->add_option("--k", ech_k, "Largest index");

  auto* embeds = app.add_subcommand("ech-embeds", "Compare ECH capacities of two ellipsoids up to --kmax");
  embeds->add_option("--src", src, "a,b")->required();
  embeds->add_option("--tgt", tgt, "c,d")->required();

  auto* ball = app.add_subcommand("ech-ball", "Bracket the ECH bound for E(1,a) into a ball");
  ball->add_option("a", a_str, "a >= 1")->required();
  ball->add_option("--tol", tol, "Bracket width");

  auto* stab = app.add_subcommand("stability", "ECH check of the two-step chain through E(cbrt k, cbrt k^2)");
  stab->add_option("--k", stab_k, "k >= 2")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kInvalid;
  }

  cfg.format = format == "json" ? Format::Json : format == "csv" ? Format::Csv : Format::Text;
  cfg.k_max = static_cast<std::size_t>(k_max);
  cfg.cache_dir = cache_dir;

  try {
    if (*weights) return run_weights(cfg, a_str, out);
    if (*reduce_cmd) return run_reduce(cfg, dm, max_steps, out);
    if (*solve) return run_solve_de(cfg, dmax_opt->count() > 0, max_parts, out);
    if (*exceptional) return run_exceptional(cfg, dm, out);
    if (*pack) return run_pack(cfg, a_str, target, out);
    if (*cap) return run_capacity(cfg, a_str, out);
    if (*table2) return run_table2(cfg, upto, out);
    if (*c_cmd) return run_c(cfg, a_str, out);
    if (*stair) return run_staircase(cfg, lo, hi, out);
    if (*caps) return run_ech_caps(cfg, a_str, b_str, ech_k, out);
    if (*embeds) return run_ech_embeds(cfg, src, tgt, out);
    if (*ball) return run_ech_ball(cfg, a_str, tol, out);
    if (*stab) return run_stability(cfg, stab_k, out);
  } catch (const UndecidedComparison& e) {
    err << "undecided: " << e.what() << "\n";
    return kUndecided;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  err << app.help();
  return kInvalid;
}

}  // namespace symcap::cli
