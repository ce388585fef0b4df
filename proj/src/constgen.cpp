#include "argred/constgen.hpp"

#include <algorithm>
#include <sstream>

namespace argred {

namespace {

std::string pow2_str(std::int64_t e) { return "2^" + std::to_string(e); }

int max_int(int a, int b) { return a > b ? a : b; }

// Bits of the enclosure used for residual measurements: enough to resolve
// C well past C3's last bit.
int enclosure_bits_for(const ConstantSet& cs) {
  const std::int64_t below = -cs.C3.exponent();
  return static_cast<int>(std::max<std::int64_t>(64, below + 2 * cs.fmt.p + 64));
}

void fill_corrections(ConstantSet& cs) {
  const RealConstant& c = *cs.constant;
  const ExactReal c1 = cs.C1.exact();
  const std::int64_t step_exp = ulp2_exponent(cs.C1) + 3;
  const ExactReal step = ExactReal::pow2(step_exp);
  const mpz_class k = safe_round_to_integer(
      [&](int bits) {
        RealEnclosure e = c.enclose(bits);
        return std::pair{(e.lo - c1) / step, (e.hi - c1) / step};
      },
      c.refinable());
  cs.C2 = Fpn::make(1, k, step_exp, cs.fmt);
  const ExactReal c12 = c1 + cs.C2.exact();
  cs.C3 = safe_round(
      [&](int bits) {
        RealEnclosure e = c.enclose(bits);
        return std::pair{e.lo - c12, e.hi - c12};
      },
      cs.fmt, cs.fmt.p - cs.q, Tie::kEven, c.refinable());
  if (c.refinable()) {
    cs.c_enclosure = c.enclose(enclosure_bits_for(cs));
  } else {
    cs.c_enclosure = c.enclose(0);
  }
}

bool two_pow_neg_n_is_fpn(const Format& fmt, int N) {
  return -static_cast<std::int64_t>(N) >= fmt.e_min_q &&
         -static_cast<std::int64_t>(N) <= fmt.e_max;
}

bool two_pow_neg_n_is_normal(const Format& fmt, int N) {
  return -static_cast<std::int64_t>(N) >= fmt.e_min_q + fmt.p - 1 &&
         -static_cast<std::int64_t>(N) <= fmt.e_max;
}

// C1 >= 2^k * lambda.
HypothesisCheck underflow_bound(const std::string& thm, const ConstantSet& cs,
                                const std::string& stated, std::int64_t k) {
  const std::int64_t bound_exp = k + cs.fmt.e_min_q;
  const bool ok = cs.C1.exact() >= ExactReal::pow2(bound_exp);
  return {thm, stated,
          "C1 = " + to_string(cs.C1) + (ok ? " >= " : " < ") + pow2_str(bound_exp),
          ok};
}

}  // namespace

std::vector<Format> preset_formats() {
  return {Format::binary32(), Format::binary64(), Format::extended(),
          Format::binary128()};
}

ConstantSet gen_constants(const RealConstant& c, const Format& fmt, int N, int q) {
  if (fmt.p <= 4) throw HypothesisError("p > 4 is required (p = " + std::to_string(fmt.p) + ")");
  if (q < 2 || q >= fmt.p - 1) {
    throw HypothesisError("2 <= q < p - 1 is required (q = " + std::to_string(q) + ")");
  }
  if (!two_pow_neg_n_is_fpn(fmt, N)) {
    throw HypothesisError("2^-N is a FPN: fails for N = " + std::to_string(N));
  }
  ConstantSet cs;
  cs.c_id = c.name();
  cs.N = N;
  cs.q = q;
  cs.fmt = fmt;
  cs.constant = c;
  cs.R = safe_round(
      [&c](int bits) {
        RealEnclosure e = c.enclose(bits);
        if (e.lo.sign() <= 0) throw HypothesisError("C must be positive");
        return std::pair{e.hi.reciprocal(), e.lo.reciprocal()};
      },
      fmt, fmt.p, Tie::kEven, c.refinable());
  if (!cs.R.is_normal() || cs.R.negative()) {
    throw HypothesisError("R is a positive normal p-bit FPN: fails for R = " + to_string(cs.R));
  }
  const ExactReal r = cs.R.exact();
  cs.C1 = round_rational(r.denominator(), r.numerator(), fmt, fmt.p - q);
  if (cs.C1.is_pow2()) {
    throw HypothesisError("C1 is not exactly a power of 2: fails for C1 = " + to_string(cs.C1));
  }
  fill_corrections(cs);

  const AuditReport report = audit(cs, N);
  for (const HypothesisCheck& h : report.items) {
    // R C1 <= 1 is left to adjust_R_for_RC1_le_1.
    if (h.governing && !h.pass && h.hypothesis != "R C1 <= 1") {
      throw HypothesisError(h.theorem + ": " + h.hypothesis + " fails (" + h.evaluated + ")");
    }
  }
  return cs;
}

ConstantSet synthetic_constants(const Fpn& R, int q, int N) {
  const Format& fmt = R.format();
  return synthetic_constants(R, q, N, Fpn::zero(fmt), Fpn::zero(fmt));
}

ConstantSet synthetic_constants(const Fpn& R, int q, int N, const Fpn& C2,
                                const Fpn& C3) {
  ConstantSet cs;
  cs.c_id = "synthetic";
  cs.N = N;
  cs.q = q;
  cs.fmt = R.format();
  cs.R = R;
  const ExactReal r = R.exact();
  cs.C1 = round_rational(r.denominator(), r.numerator(), cs.fmt, cs.fmt.p - q);
  cs.C2 = C2;
  cs.C3 = C3;
  return cs;
}

ExactReal delta(const ConstantSet& cs) {
  return cs.R.exact() * cs.C1.exact() - ExactReal(1);
}

std::optional<bool> c1_within_four_ulps(const ConstantSet& cs) {
  if (!cs.c_enclosure) return std::nullopt;
  const ExactReal c1 = cs.C1.exact();
  const ExactReal lim = ExactReal(4) * ulp(cs.C1);
  return (cs.c_enclosure->lo - c1).abs() <= lim && (cs.c_enclosure->hi - c1).abs() <= lim;
}

AuditReport audit(const ConstantSet& cs, int N) {
  AuditReport rep;
  const Format& fmt = cs.fmt;
  const int p = fmt.p;
  const bool q2 = cs.q == 2;
  auto add = [&rep](HypothesisCheck h, bool governing) {
    h.governing = governing;
    rep.items.push_back(std::move(h));
  };
  const std::string ps = "p = " + std::to_string(p);
  const std::string c1s = "C1 = " + to_string(cs.C1);
  const ExactReal r = cs.R.exact();
  const bool c1_not_pow2 = !cs.C1.is_pow2();

  // z extraction.
  add({"thm3", "p > 3", ps, p > 3}, true);
  add({"thm3", "R is a positive normal p-bit FPN", "R = " + to_string(cs.R),
       !cs.R.negative() && cs.R.is_normal()},
      true);
  add({"thm3", "2^-N is a FPN", "N = " + std::to_string(N), two_pow_neg_n_is_fpn(fmt, N)},
      true);

  // First step, q = 2.
  {
    const bool ok = cs.R.is_normal() &&
                    cs.C1 == round_rational(r.denominator(), r.numerator(), fmt, p - 2);
    add({"thm5", "C1 is the (p-2)-bit rounding of 1/R", c1s + ", q = " + std::to_string(cs.q),
         ok},
        q2);
    add({"thm5", "C1 is not exactly a power of 2", c1s, c1_not_pow2}, q2);
    add(underflow_bound("thm5", cs, "C1 >= 2^(p+max(-1,N)) lambda", p + max_int(-1, N)), q2);
  }

  // Second step.
  {
    add({"thm6", "p > 4", ps, p > 4}, q2);
    add({"thm6", "2^-N is a normal p-bit FPN", "N = " + std::to_string(N),
         two_pow_neg_n_is_normal(fmt, N)},
        q2);
    add(underflow_bound("thm6", cs, "C1 >= 2^(p+max(-1,p+N-2)) lambda",
                        p + max_int(-1, p + N - 2)),
        q2);
    const std::int64_t step = ulp2_exponent(cs.C1) + 3;
    const bool multiple = cs.C2.is_zero() || cs.C2.lsb_exponent() >= step;
    add({"thm6", "C2 is a FPN and an integer multiple of 8 ulp2(C1)",
         "C2 = " + to_string(cs.C2) + ", 8 ulp2(C1) = " + pow2_str(step), multiple},
        q2);
    const ExactReal lim = ExactReal(4) * ulp(cs.C1);
    const bool small = cs.C2.exact().abs() <= lim;
    add({"thm6", "|C2| <= 4 ulp(C1)",
         "|C2| " + std::string(small ? "<= " : "> ") + pow2_str(ulp_exponent(cs.C1) + 2), small},
        q2);
  }

  // |C - C1| bound.
  if (cs.constant) {
    const RealConstant& c = *cs.constant;
    bool r_ok = false;
    try {
      r_ok = cs.R == safe_round(
                         [&c](int bits) {
                           RealEnclosure e = c.enclose(bits);
                           return std::pair{e.hi.reciprocal(), e.lo.reciprocal()};
                         },
                         fmt, p, Tie::kEven, c.refinable());
    } catch (const AmbiguousRoundingError&) {
      r_ok = false;
    }
    add({"thm7", "R is the p-bit rounding of 1/C", "R = " + to_string(cs.R), r_ok}, q2);
    add({"thm7", "C1 is not exactly a power of 2", c1s, c1_not_pow2}, q2);
    add(underflow_bound("thm7", cs, "C1 >= 2^(p-1) lambda", p - 1), q2);
    const std::optional<bool> within = c1_within_four_ulps(cs);
    add({"thm7", "conclusion: |C - C1| <= 4 ulp(C1)",
         "4 ulp(C1) = " + pow2_str(ulp_exponent(cs.C1) + 2), within.value_or(false)},
        q2);
  }

  // General q with R * C1 <= 1.
  {
    const bool gov = !q2;
    add({"appendix", "2 <= q <= p-1", "q = " + std::to_string(cs.q),
         cs.q >= 2 && cs.q <= p - 1},
        gov);
    const bool ok = cs.R.is_normal() &&
                    cs.C1 == round_rational(r.denominator(), r.numerator(), fmt, p - cs.q);
    add({"appendix", "C1 is the (p-q)-bit rounding of 1/R", c1s, ok}, gov);
    add({"appendix", "C1 is not exactly a power of 2", c1s, c1_not_pow2}, gov);
    add(underflow_bound("appendix", cs, "C1 >= 2^(p-q+max(1,N-1)) lambda",
                        p - cs.q + max_int(1, N - 1)),
        gov);
    const ExactReal d = delta(cs);
    add({"appendix", "R C1 <= 1", d.sign() <= 0 ? "R C1 <= 1" : "R C1 > 1", d.sign() <= 0},
        gov);
  }
  return rep;
}

bool AuditReport::pass() const {
  return std::all_of(items.begin(), items.end(),
                     [](const HypothesisCheck& h) { return h.pass || !h.governing; });
}

std::vector<HypothesisCheck> AuditReport::failures() const {
  std::vector<HypothesisCheck> out;
  for (const HypothesisCheck& h : items) {
    if (!h.pass && h.governing) out.push_back(h);
  }
  return out;
}

std::string AuditReport::to_text() const {
  std::ostringstream os;
  for (const HypothesisCheck& h : items) {
    os << (h.pass ? "pass" : "FAIL") << (h.governing ? "  " : "* ") << h.theorem << ": "
       << h.hypothesis << "  [" << h.evaluated << "]\n";
  }
  os << "audit: " << (pass() ? "pass" : "FAIL")
     << "  (* = not governing for this q, informational)\n";
  return os.str();
}

nlohmann::json AuditReport::to_json() const {
  nlohmann::json items_json = nlohmann::json::array();
  for (const HypothesisCheck& h : items) {
    items_json.push_back({{"theorem", h.theorem},
                          {"hypothesis", h.hypothesis},
                          {"evaluated", h.evaluated},
                          {"pass", h.pass},
                          {"governing", h.governing}});
  }
  return {{"pass", pass()}, {"items", items_json}};
}

AdjustedSet adjust_R_for_RC1_le_1(const ConstantSet& cs) {
  auto satisfied = [](const ConstantSet& s) { return delta(s).sign() <= 0; };
  if (satisfied(cs)) return {cs, 0};
  for (int k = 1; k <= 8; ++k) {
    for (const int dir : {-1, +1}) {
      Fpn r = cs.R;
      for (int i = 0; i < k; ++i) r = dir < 0 ? next_down(r) : next_up(r);
      ConstantSet s = cs;
      s.R = r;
      const ExactReal re = r.exact();
      s.C1 = round_rational(re.denominator(), re.numerator(), s.fmt, s.fmt.p - s.q);
      if (s.constant) fill_corrections(s);
      if (satisfied(s)) return {std::move(s), dir * k};
    }
  }
  throw HypothesisError("R C1 <= 1 not reachable within 8 ulps of R = " + to_string(cs.R));
}

nlohmann::json to_json(const ConstantSet& cs) {
  return {{"constant", cs.c_id}, {"precision", cs.fmt.name()}, {"N", cs.N},
          {"q", cs.q},           {"R", to_string(cs.R)},       {"C1", to_string(cs.C1)},
          {"C2", to_string(cs.C2)}, {"C3", to_string(cs.C3)}};
}

std::string render_table(const std::vector<ConstantSet>& sets) {
  std::vector<std::vector<std::string>> cols;
  cols.push_back({"Precision", "R", "C1", "C2", "C3"});
  for (const ConstantSet& cs : sets) {
    cols.push_back({cs.fmt.name(), to_string(cs.R), to_string(cs.C1), to_string(cs.C2),
                    to_string(cs.C3)});
  }
  std::vector<std::size_t> width;
  for (const auto& col : cols) {
    std::size_t w = 0;
    for (const auto& cell : col) w = std::max(w, cell.size());
    width.push_back(w);
  }
  std::ostringstream os;
  for (std::size_t row = 0; row < 5; ++row) {
    std::string line;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      std::string cell = cols[c][row];
      if (c + 1 < cols.size()) cell.resize(width[c] + 2, ' ');
      line += cell;
    }
    os << line << '\n';
  }
  return os.str();
}

}  // namespace argred
