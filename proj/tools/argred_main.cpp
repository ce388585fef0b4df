// Command-line front end: constant tables, single reductions, verification
// campaigns and the Cody-Waite comparison.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "argred/constgen.hpp"
#include "argred/realnum.hpp"
#include "argred/reduction.hpp"
#include "argred/softfp.hpp"
#include "argred/theorems.hpp"

using namespace argred;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FormatOpts {
  std::string name;
  int p = 0;
  std::optional<std::int64_t> emin;
  std::optional<std::int64_t> emax;

  void add(CLI::App* app, bool explicit_format = true) {
    app->add_option("--format", name, "single, double, double-extended (extended), quad");
    if (!explicit_format) return;
    app->add_option("--p", p, "explicit precision (with --emin)");
    app->add_option("--emin", emin, "explicit minimum quantum exponent e_min_q");
    app->add_option("--emax", emax, "explicit maximum exponent (default -emin - p)");
  }

  std::optional<Format> resolve() const {
    if (!name.empty() && p != 0) throw UsageError("--format and --p are exclusive");
    if (!name.empty()) {
      auto f = format_by_name(name);
      if (!f) throw UsageError("unknown format: " + name);
      return f;
    }
    if (p != 0) {
      if (!emin) throw UsageError("--p needs --emin");
      const std::int64_t hi = emax.value_or(-*emin - p);
      try {
        return Format::custom(p, *emin, hi);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }
    return std::nullopt;
  }
};

struct ConstOpts {
  std::string name = "pi";
  std::string enclosure_file;

  void add(CLI::App* app) {
    app->add_option("--const", name, "pi or ln2");
    app->add_option("--enclosure", enclosure_file,
                    "JSON file {\"name\", \"lo\", \"hi\"} with dyadic bounds \"m * 2^e\"");
  }

  RealConstant resolve() const {
    if (!enclosure_file.empty()) {
      std::ifstream in(enclosure_file);
      if (!in) throw UsageError("cannot read " + enclosure_file);
      json j;
      try {
        in >> j;
        RealEnclosure enc{parse_exact(j.at("lo").get<std::string>()),
                          parse_exact(j.at("hi").get<std::string>())};
        if (enc.hi < enc.lo || enc.lo.sign() <= 0) {
          throw UsageError("enclosure must satisfy 0 < lo <= hi");
        }
        return RealConstant::fixed(j.value("name", std::string("user")), enc);
      } catch (const UsageError&) {
        throw;
      } catch (const std::exception& e) {
        throw UsageError("bad enclosure file: " + std::string(e.what()));
      }
    }
    try {
      return RealConstant::by_name(name);
    } catch (const std::invalid_argument&) {
      throw UsageError("unknown constant: " + name + " (pi, ln2)");
    }
  }
};

Tie parse_tie(const std::string& s) {
  if (s == "even") return Tie::kEven;
  if (s == "away") return Tie::kAway;
  auto t = tie_by_name(s);
  if (!t) throw UsageError("unknown tie mode: " + s + " (even, away)");
  return *t;
}

std::string yes(bool b) { return b ? "yes" : "no"; }

// ----------------------------------------------------------- constants

struct ConstantsCmd {
  ConstOpts c;
  FormatOpts f;
  int N = 0;
  int q = 2;
  bool all = false;
  bool audit_flag = false;
  bool as_json = false;
  bool adjust = false;

  int run() {
    std::vector<std::pair<std::string, std::vector<ConstantSet>>> groups;
    std::vector<RealConstant> consts;
    std::vector<Format> formats;
    if (all) {
      if (!f.name.empty() || f.p != 0) throw UsageError("--all covers every preset format");
      consts = {RealConstant::pi(), RealConstant::ln2()};
      formats = preset_formats();
    } else {
      consts = {c.resolve()};
      auto fmt = f.resolve();
      formats = fmt ? std::vector<Format>{*fmt} : preset_formats();
    }
    std::vector<int> moved;
    for (const RealConstant& rc : consts) {
      std::vector<ConstantSet> sets;
      for (const Format& fmt : formats) {
        ConstantSet cs = gen_constants(rc, fmt, N, q);
        if (adjust) {
          AdjustedSet a = adjust_R_for_RC1_le_1(cs);
          moved.push_back(a.ulps_moved);
          cs = std::move(a.set);
        }
        sets.push_back(std::move(cs));
      }
      groups.emplace_back(rc.name(), std::move(sets));
    }
    bool ok = true;
    if (as_json) {
      json out = json::array();
      std::size_t mi = 0;
      for (auto& [name, sets] : groups) {
        for (const ConstantSet& cs : sets) {
          json j = to_json(cs);
          if (adjust) j["R_ulps_moved"] = moved[mi++];
          if (audit_flag) {
            const AuditReport rep = audit(cs, N);
            j["audit"] = rep.to_json();
            ok = ok && rep.pass();
          }
          out.push_back(std::move(j));
        }
      }
      std::cout << out.dump(2) << "\n";
    } else {
      bool first = true;
      std::size_t mi = 0;
      for (auto& [name, sets] : groups) {
        if (!first) std::cout << "\n";
        first = false;
        std::cout << "C = " << name << "  (N = " << N << ", q = " << q << ")\n";
        std::cout << render_table(sets);
        for (const ConstantSet& cs : sets) {
          if (adjust) {
            std::cout << cs.fmt.name() << ": R moved by " << moved[mi++]
                      << " ulp(s), R C1 - 1 = " << delta(cs).to_double() << "\n";
          }
          if (audit_flag) {
            const AuditReport rep = audit(cs, N);
            std::cout << "\naudit " << name << " " << cs.fmt.name() << "\n" << rep.to_text();
            ok = ok && rep.pass();
          }
        }
      }
    }
    return ok ? 0 : 3;
  }
};

// -------------------------------------------------------------- reduce

struct ReduceCmd {
  ConstOpts c;
  FormatOpts f;
  std::string x_text;
  int N = 0;
  int q = 2;
  std::string R_text;
  std::string C2_text;
  std::string C3_text;
  std::string tie_text = "even";
  bool as_json = false;

  int run() {
    const Tie tie = parse_tie(tie_text);
    const Format fmt = f.resolve().value_or(Format::binary64());
    ExactReal xv;
    try {
      xv = parse_exact(x_text);
    } catch (const std::exception& e) {
      throw UsageError("cannot parse --x: " + std::string(e.what()));
    }
    ConstantSet cs;
    if (!R_text.empty()) {
      auto parse_in = [&](const std::string& t, const char* what) {
        try {
          return parse_fpn(t, fmt);
        } catch (const std::exception& e) {
          throw UsageError(std::string("bad ") + what + ": " + e.what());
        }
      };
      const Fpn R = parse_in(R_text, "--R");
      const Fpn C2 = C2_text.empty() ? Fpn::zero(fmt) : parse_in(C2_text, "--C2");
      const Fpn C3 = C3_text.empty() ? Fpn::zero(fmt) : parse_in(C3_text, "--C3");
      cs = synthetic_constants(R, q, N, C2, C3);
    } else {
      cs = gen_constants(c.resolve(), fmt, N, q);
    }
    const Rounded xr = round(xv, fmt, tie);
    const Fpn& x = xr.value;
    const ReductionOutput out = reduce(x, cs, N, {tie, true});
    const AuditReport rep = audit(cs, N);
    const ExactReal k = out.z.exact() * ExactReal::pow2(N);
    if (as_json) {
      json j;
      j["format"] = fmt.name();
      j["constant"] = cs.c_id;
      j["N"] = N;
      j["q"] = q;
      j["tie"] = std::string(to_string(tie));
      j["x"] = to_string(x);
      j["x_rounded_from_input"] = xr.inexact;
      j["z"] = to_string(out.z);
      j["k"] = k.to_string();
      j["ell"] = out.ell;
      j["s"] = out.s.to_string();
      j["u"] = to_string(out.u);
      j["v1"] = to_string(out.v1);
      j["v2"] = to_string(out.v2);
      j["w"] = to_string(out.w);
      j["exact_first"] = out.exact_first;
      j["exact_second"] = out.exact_second;
      j["rounding_ops_second"] = out.rounding_ops_second;
      if (out.residual) j["residual_bound"] = out.residual->to_double();
      j["audit_pass"] = rep.pass();
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "format " << fmt.name() << ", C = " << cs.c_id << ", N = " << N
                << ", q = " << q << ", ties " << to_string(tie) << "\n";
      std::cout << "x   = " << to_string(x) << (xr.inexact ? "  (rounded from input)" : "") << "\n";
      std::cout << "z   = " << to_string(out.z) << "  (z 2^N = " << k.to_string()
                << ", l = " << out.ell << ")\n";
      std::cout << "s   = xR - z = " << out.s.to_string() << "  (~" << out.s.to_double() << ")\n";
      std::cout << "u   = " << to_string(out.u) << "  exact: " << yes(out.exact_first) << "\n";
      std::cout << "v1  = " << to_string(out.v1) << "\n";
      std::cout << "v2  = " << to_string(out.v2) << "  v1 + v2 exact: " << yes(out.exact_second)
                << "\n";
      std::cout << "w   = " << to_string(out.w) << "\n";
      std::cout << "second-step rounded operations = " << out.rounding_ops_second << "\n";
      if (out.residual) {
        std::cout << "|v1 + w - (x - z C)| <= " << out.residual->to_double() << "\n";
      }
      if (!rep.pass()) {
        std::cout << "warning: the constant set fails its audit:\n";
        for (const HypothesisCheck& h : rep.failures()) {
          std::cout << "  " << h.theorem << ": " << h.hypothesis << "  [" << h.evaluated << "]\n";
        }
      }
    }
    return 0;
  }
};

// -------------------------------------------------------------- verify

struct VerifyCmd {
  std::string theorem;
  int p = 0;
  int p1 = 0;
  int p2 = 0;
  int beta = 2;
  int binades = 0;
  std::vector<int> n_values;
  int q_min = 0;
  int q_max = 0;
  bool exhaustive = false;
  std::optional<std::uint64_t> trials;
  std::uint64_t seed = 1;
  FormatOpts f;
  std::string constant = "pi";
  std::string tie_text = "even";
  bool as_json = false;
  int threads = 0;
  bool weaken = false;
  bool no_tight = false;

  int run() {
    CheckConfig cfg;
    cfg.theorem = theorem;
    const auto ids = theorem_ids();
    if (std::find(ids.begin(), ids.end(), theorem) == ids.end()) {
      throw UsageError("unknown theorem: " + theorem);
    }
    const bool randomized_by_default = theorem == "thm6" || theorem == "eft";
    if (exhaustive && trials) throw UsageError("--exhaustive and --trials are exclusive");
    cfg.mode = exhaustive ? Mode::kExhaustive
               : (trials || randomized_by_default) ? Mode::kRandomized
                                                   : Mode::kExhaustive;
    if (cfg.mode == Mode::kRandomized && !randomized_by_default) {
      throw UsageError(theorem + " is exhaustive only");
    }
    if (theorem == "eft" && exhaustive) throw UsageError("eft is randomized only");
    if (p != 0) cfg.p = p;
    cfg.p1 = p1;
    cfg.p2 = p2;
    if (theorem == "sterbenz2" && (p1 == 0 || p2 == 0)) throw UsageError("sterbenz2 needs --p1 and --p2");
    if (theorem == "sterbenz" && p == 0) cfg.p = 3;
    cfg.beta = beta;
    cfg.binades = binades;
    if (!n_values.empty()) cfg.n_values = n_values;
    else if (cfg.mode == Mode::kRandomized) cfg.n_values = {0};
    cfg.q_min = q_min;
    cfg.q_max = q_max;
    cfg.seed = seed;
    if (trials) cfg.trials = *trials;
    cfg.fmt = f.resolve();
    cfg.constant = constant;
    cfg.tie = parse_tie(tie_text);
    cfg.threads = threads;
    cfg.weakened = weaken;
    cfg.tight_underflow = !no_tight;
    if (weaken && theorem != "correct1" && theorem != "correct2") {
      throw UsageError("--weaken applies to correct1 and correct2");
    }
    const CheckResult r = run_check(cfg);
    if (as_json) {
      std::cout << r.to_json().dump(2) << "\n";
    } else {
      std::cout << r.to_text();
    }
    return r.pass ? 0 : 1;
  }
};

struct DemoCmd {
  std::uint64_t seed = 1;
  std::size_t cases = 3;
  bool as_json = false;

  int run() {
    const CodyWaiteReport rep = demo_codywaite(seed, cases);
    if (as_json) {
      std::cout << rep.to_json().dump(2) << "\n";
    } else {
      std::cout << rep.to_text();
    }
    return rep.found() ? 0 : 1;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fma-based argument reduction: constants, reductions and exactness checks"};
  app.require_subcommand(1);

  ConstantsCmd constants;
  auto* sc = app.add_subcommand("constants", "generate and audit R, C1, C2, C3");
  constants.c.add(sc);
  constants.f.add(sc);
  sc->add_option("--N", constants.N, "table index width (table size 2^N)");
  sc->add_option("--q", constants.q, "trailing zero bits of C1");
  sc->add_flag("--all", constants.all, "both constants, every preset format");
  sc->add_flag("--audit", constants.audit_flag, "append the hypothesis audit");
  sc->add_flag("--json", constants.as_json, "JSON records");
  sc->add_flag("--adjust", constants.adjust, "move R so that R C1 <= 1");

  ReduceCmd reduce_cmd;
  auto* rc = app.add_subcommand("reduce", "reduce one argument");
  reduce_cmd.c.add(rc);
  reduce_cmd.f.add(rc);
  rc->add_option("--x", reduce_cmd.x_text, "argument: decimal, integer, or \"m * 2^e\"")->required();
  rc->add_option("--N", reduce_cmd.N, "table index width");
  rc->add_option("--q", reduce_cmd.q, "trailing zero bits of C1");
  rc->add_option("--R", reduce_cmd.R_text, "use a synthetic set built from this R");
  rc->add_option("--C2", reduce_cmd.C2_text, "C2 of the synthetic set");
  rc->add_option("--C3", reduce_cmd.C3_text, "C3 of the synthetic set");
  rc->add_option("--ties", reduce_cmd.tie_text, "even or away");
  rc->add_flag("--json", reduce_cmd.as_json, "JSON output");

  VerifyCmd verify;
  auto* vc = app.add_subcommand("verify", "run a theorem check");
  vc->add_option("--theorem", verify.theorem,
                 "sterbenz, sterbenz2, thm3, correct1, correct2, correct3 (thm5), thm6, thm7, eft")
      ->required();
  vc->add_option("--p", verify.p, "precision of exhaustive sweeps");
  vc->add_option("--p1", verify.p1, "sterbenz2 operand digits");
  vc->add_option("--p2", verify.p2, "sterbenz2 result digits");
  vc->add_option("--beta", verify.beta, "radix of the Sterbenz checks");
  vc->add_option("--binades", verify.binades, "exponent window width");
  vc->add_option("--N", verify.n_values, "table index widths, e.g. --N 0,5,10")->delimiter(',');
  vc->add_option("--q-min", verify.q_min, "smallest q");
  vc->add_option("--q-max", verify.q_max, "largest q");
  vc->add_flag("--exhaustive", verify.exhaustive, "enumerate the case space");
  vc->add_option("--trials", verify.trials, "randomized trials per campaign");
  vc->add_option("--seed", verify.seed, "RNG seed");
  verify.f.add(vc, false);
  vc->add_option("--const", verify.constant, "pi or ln2");
  vc->add_option("--ties", verify.tie_text, "even or away");
  vc->add_flag("--json", verify.as_json, "JSON output");
  vc->add_option("--threads", verify.threads, "worker threads (default ARGRED_THREADS)");
  vc->add_flag("--weaken", verify.weaken, "mine counterexamples: correct1 with q = 1, correct2 without R C1 <= 1");
  vc->add_flag("--no-tight", verify.no_tight, "skip the tight-underflow formats");

  DemoCmd demo;
  auto* dc = app.add_subcommand("demo-codywaite", "two-rounding versus fma first step");
  dc->add_option("--seed", demo.seed, "RNG seed");
  dc->add_option("--cases", demo.cases, "cases to find");
  dc->add_flag("--json", demo.as_json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // Help requests exit 0; every other parse error is a usage error.
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sc) return constants.run();
    if (*rc) return reduce_cmd.run();
    if (*vc) return verify.run();
    if (*dc) return demo.run();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const RangeError& e) {
    std::cerr << "range error: " << e.what() << "\n";
    return 4;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
