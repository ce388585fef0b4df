#include "argred/theorems.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "argred/constgen.hpp"
#include "argred/realnum.hpp"
#include "argred/reduction.hpp"

namespace argred {

using nlohmann::json;

namespace {

// Per-chunk accumulator; chunks are merged in index order so the result
// does not depend on scheduling.
struct Partial {
  std::uint64_t cases = 0;
  std::uint64_t enumerated = 0;
  std::uint64_t failure_count = 0;
  std::uint64_t cx_count = 0;
  std::vector<json> failures;
  std::vector<json> counterexamples;
  std::map<std::string, std::uint64_t> counters;

  void fail(json j) {
    ++failure_count;
    if (failures.size() < kMaxReportedFailures) failures.push_back(std::move(j));
  }
  void counterexample(json j) {
    ++cx_count;
    if (counterexamples.size() < kMaxReportedFailures) counterexamples.push_back(std::move(j));
  }
  void count(const std::string& key, std::uint64_t n = 1) { counters[key] += n; }

  void merge(Partial&& o) {
    cases += o.cases;
    enumerated += o.enumerated;
    failure_count += o.failure_count;
    cx_count += o.cx_count;
    for (auto& f : o.failures) {
      if (failures.size() < kMaxReportedFailures) failures.push_back(std::move(f));
    }
    for (auto& c : o.counterexamples) {
      if (counterexamples.size() < kMaxReportedFailures) counterexamples.push_back(std::move(c));
    }
    for (auto& [k, v] : o.counters) counters[k] += v;
  }
};

template <class Fn>
Partial run_chunks(std::size_t chunks, int threads, Fn fn) {
  std::vector<Partial> parts(chunks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= chunks) return;
      try {
        fn(i, parts[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };
  const std::size_t n = std::max<std::size_t>(
      1, std::min<std::size_t>(chunks, static_cast<std::size_t>(threads)));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  Partial out;
  for (auto& p : parts) out.merge(std::move(p));
  return out;
}

int threads_for(const CheckConfig& cfg) {
  return cfg.threads > 0 ? cfg.threads : default_threads();
}

CheckResult finish(const CheckConfig& cfg, Partial&& part,
                   std::optional<std::uint64_t> expected) {
  CheckResult r;
  r.theorem = cfg.theorem;
  r.config = cfg.to_json();
  r.cases = part.cases;
  r.enumerated = part.enumerated;
  r.expected_enumerated = expected;
  r.failure_count = part.failure_count;
  r.failures = std::move(part.failures);
  r.counterexample_count = part.cx_count;
  r.counterexamples = std::move(part.counterexamples);
  for (auto& [k, v] : part.counters) r.notes["counts"][k] = v;
  if (expected && *expected != r.enumerated) {
    ++r.failure_count;
    r.failures.push_back({{"detail", "enumerated case count differs from the closed form"},
                          {"enumerated", r.enumerated},
                          {"expected", *expected}});
  }
  r.pass = r.failure_count == 0;
  return r;
}

std::mt19937_64 chunk_rng(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

// Uniform integer with exactly `bits` bits (top bit set), bits >= 1.
mpz_class random_top_bits(std::mt19937_64& rng, int bits) {
  mpz_class m = 1;
  int left = bits - 1;
  while (left > 0) {
    const int take = std::min(left, 32);
    m <<= take;
    m += static_cast<unsigned long>(rng() & ((1ULL << take) - 1));
    left -= take;
  }
  return m;
}

std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

// ---------------------------------------------------------------- radix beta

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// All non-negative p-digit numbers m * beta^e, 0 <= e < binades, each once.
std::vector<std::int64_t> radix_numbers(int beta, int p, int binades) {
  std::vector<std::int64_t> out;
  const std::int64_t top = ipow(beta, p);
  const std::int64_t low = ipow(beta, p - 1);
  std::int64_t scale = 1;
  for (int e = 0; e < binades; ++e) {
    for (std::int64_t m = (e == 0 ? 0 : low); m < top; ++m) out.push_back(m * scale);
    scale *= beta;
  }
  return out;
}

std::uint64_t radix_count(int beta, int p, int binades) {
  return static_cast<std::uint64_t>(binades) * (ipow(beta, p) - ipow(beta, p - 1)) +
         static_cast<std::uint64_t>(ipow(beta, p - 1));
}

// |d| = m beta^e with m < beta^digits and e >= 0.
bool radix_representable(std::int64_t d, int beta, int digits) {
  if (d < 0) d = -d;
  if (d == 0) return true;
  while (d % beta == 0) d /= beta;
  return d < ipow(beta, digits);
}

std::string radix_text(std::int64_t v, int beta) {
  std::int64_t m = v < 0 ? -v : v;
  int e = 0;
  while (m != 0 && m % beta == 0) {
    m /= beta;
    ++e;
  }
  return std::string(v < 0 ? "-" : "") + std::to_string(m) + " * " + std::to_string(beta) +
         "^" + std::to_string(e);
}

void require_radix_range(int beta, int top_exp) {
  // beta^top_exp must stay well inside int64.
  long double v = 1;
  for (int i = 0; i < top_exp; ++i) v *= beta;
  if (v > 4.0e18L) throw std::invalid_argument("radix window too large for 64-bit integers");
}

// ----------------------------------------------------------- small formats

struct SmallSet {
  ConstantSet cs;
  bool in_hypothesis = true;
  std::string excluded_by;
};

enum class Sweep { kThm3, kCorrect2, kCorrect3, kThm6 };

Format sweep_format(int p) { return Format::custom(p, -64 - 2 * p, 64); }

// Exponent e_min_q at which the sweep's underflow hypothesis on C1 is tight.
std::int64_t tight_emin(Sweep kind, const Fpn& C1, int p, int q, int N) {
  const std::int64_t e = C1.msb_exponent();
  switch (kind) {
    case Sweep::kThm3:
    case Sweep::kCorrect3: return e - p - std::max(-1, N);
    case Sweep::kCorrect2: return e - (p - q) - std::max(1, N - 1);
    case Sweep::kThm6: return e - p - std::max(-1, p + N - 2);
  }
  return e;
}

json fpn_json(const Fpn& x) { return to_string(x); }

json set_inputs(const ConstantSet& cs, int N, Tie tie) {
  json j;
  j["p"] = cs.fmt.p;
  j["e_min_q"] = cs.fmt.e_min_q;
  j["e_max"] = cs.fmt.e_max;
  j["N"] = N;
  j["q"] = cs.q;
  j["R"] = fpn_json(cs.R);
  j["C1"] = fpn_json(cs.C1);
  if (!cs.C2.is_zero()) j["C2"] = fpn_json(cs.C2);
  j["tie"] = std::string(to_string(tie));
  return j;
}

// Enumerates x: both signs of every number with msb in [top - binades + 1,
// top], plus zero; or, with `all_below`, every number with msb <= top
// including subnormals.
template <class Fn>
void for_each_x(const Format& fmt, std::int64_t top, int binades, bool all_below, Fn fn) {
  const int p = fmt.p;
  const mpz_class half = mpz_class(1) << (p - 1);
  const mpz_class full = mpz_class(1) << p;
  fn(Fpn::zero(fmt));
  if (all_below) {
    for (mpz_class m = 1; m < half; ++m) {
      const Fpn x = Fpn::make(1, m, fmt.e_min_q, fmt);
      fn(x);
      fn(-x);
    }
  }
  const std::int64_t lo_msb = all_below ? fmt.e_min_q + p - 1 : top - binades + 1;
  for (std::int64_t msb = lo_msb; msb <= top; ++msb) {
    const std::int64_t e = msb - p + 1;
    if (e < fmt.e_min_q) continue;
    for (mpz_class m = half; m < full; ++m) {
      const Fpn x = Fpn::make(1, m, e, fmt);
      fn(x);
      fn(-x);
    }
  }
}

std::uint64_t x_count(const Format& fmt, std::int64_t top, int binades, bool all_below) {
  const std::uint64_t half = 1ULL << (fmt.p - 1);
  if (all_below) {
    const std::int64_t normal_binades = top - (fmt.e_min_q + fmt.p - 1) + 1;
    return 2 * (half * static_cast<std::uint64_t>(std::max<std::int64_t>(0, normal_binades)) +
                half) -
           1;
  }
  std::uint64_t binades_ok = 0;
  for (std::int64_t msb = top - binades + 1; msb <= top; ++msb) {
    if (msb - fmt.p + 1 >= fmt.e_min_q) ++binades_ok;
  }
  return 2 * half * binades_ok + 1;
}

struct SweepJob {
  mpz_class r_sig;
  std::int64_t r_exp;
  int N;
  int q;
  int c2_mult;
  bool tight;
};

std::vector<int> default_c2_multipliers(int p) {
  const int lim = 1 << (p - 2);  // |C2| <= 4 ulp(C1) = 2^(p-2) * 8 ulp2(C1)
  std::vector<int> v{-lim, -lim + 1, -(lim / 2) - 1, -1, 0, 1, lim / 3, lim - 1, lim};
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::pair<int, int> q_range(const CheckConfig& cfg, int lo, int hi) {
  return {cfg.q_min > 0 ? cfg.q_min : lo, cfg.q_max > 0 ? cfg.q_max : hi};
}

SmallSet build_small_set(Sweep kind, const SweepJob& job, int p, bool weakened) {
  Format fmt = sweep_format(p);
  Fpn R = Fpn::make(1, job.r_sig, job.r_exp, fmt);
  if (p - job.q < 2) {
    // A 1-bit C1 is always a power of 2.
    SmallSet out;
    out.cs = synthetic_constants(R, p - 2, job.N);
    out.cs.q = job.q;
    out.in_hypothesis = false;
    out.excluded_by = "C1 is not exactly a power of 2";
    return out;
  }
  ConstantSet cs = synthetic_constants(R, job.q, job.N);
  if (job.tight) {
    std::int64_t e_min = tight_emin(kind, cs.C1, p, job.q, job.N);
    // R, 2^-N (normal for the second step) must stay representable.
    e_min = std::min<std::int64_t>(e_min, job.r_exp);
    e_min = std::min<std::int64_t>(e_min, -job.N - (kind == Sweep::kThm6 ? p - 1 : 0));
    fmt = Format::custom(p, e_min, 64);
    R = R.in_format(fmt);
    cs = synthetic_constants(R, job.q, job.N);
  }
  SmallSet out;
  if (kind == Sweep::kThm6) {
    const std::int64_t unit = ulp2_exponent(cs.C1) + 3;
    const Fpn C2 = job.c2_mult == 0
                       ? Fpn::zero(fmt)
                       : Fpn::make(job.c2_mult < 0 ? -1 : 1, mpz_class(std::abs(job.c2_mult)), unit,
                                   fmt);
    cs = synthetic_constants(R, job.q, job.N, C2, Fpn::zero(fmt));
  }
  out.cs = cs;
  if (kind == Sweep::kThm3) return out;
  const AuditReport rep = audit(cs, job.N);
  for (const HypothesisCheck& h : rep.items) {
    bool relevant = false;
    switch (kind) {
      case Sweep::kCorrect3: relevant = h.theorem == "thm3" || h.theorem == "thm5"; break;
      case Sweep::kCorrect2: relevant = h.theorem == "thm3" || h.theorem == "appendix"; break;
      case Sweep::kThm6:
        relevant = h.theorem == "thm3" || h.theorem == "thm5" || h.theorem == "thm6";
        break;
      case Sweep::kThm3: break;
    }
    if (weakened && h.hypothesis == "R C1 <= 1") continue;
    if (relevant && !h.pass) {
      out.in_hypothesis = false;
      out.excluded_by = h.theorem + ": " + h.hypothesis;
      return out;
    }
  }
  return out;
}

bool multiple_of_pow2(const Fpn& v, std::int64_t e) {
  return v.is_zero() || v.lsb_exponent() >= e;
}

CheckResult run_sweep(Sweep kind, const CheckConfig& cfg) {
  const int p = cfg.p;
  if (p <= 3 || (kind == Sweep::kThm6 && p <= 4)) {
    throw std::invalid_argument("precision too small for this check");
  }
  if (p > 16) throw std::invalid_argument("exhaustive reduction sweeps support p <= 16");
  const int binades = cfg.binades > 0 ? cfg.binades : 12;
  int q_lo = 2;
  int q_hi = 2;
  if (kind == Sweep::kCorrect2) std::tie(q_lo, q_hi) = q_range(cfg, 2, p - 1);
  if (kind == Sweep::kThm3) q_lo = q_hi = 2;
  const std::vector<int> mults =
      kind == Sweep::kThm6
          ? (cfg.c2_multipliers.empty() ? default_c2_multipliers(p) : cfg.c2_multipliers)
          : std::vector<int>{0};

  std::vector<SweepJob> jobs;
  const mpz_class lo_sig = mpz_class(1) << (p - 1);
  const mpz_class hi_sig = mpz_class(1) << p;
  for (int tight = 0; tight <= (cfg.tight_underflow ? 1 : 0); ++tight) {
    for (int N : cfg.n_values) {
      for (int q = q_lo; q <= q_hi; ++q) {
        for (int j : mults) {
          for (std::int64_t re : {static_cast<std::int64_t>(-p), static_cast<std::int64_t>(-p + 1)}) {
            for (mpz_class m = lo_sig; m < hi_sig; ++m) {
              jobs.push_back({m, re, N, q, j, tight == 1});
            }
          }
        }
      }
    }
  }

  std::vector<SmallSet> sets;
  sets.reserve(jobs.size());
  std::uint64_t expected = 0;
  for (const SweepJob& job : jobs) {
    sets.push_back(build_small_set(kind, job, p, cfg.weakened));
    expected += x_count(sets.back().cs.fmt, p - job.N - 2, binades, job.tight);
  }
  if (expected > kMaxExhaustiveCases) {
    throw std::invalid_argument("exhaustive case space of " + std::to_string(expected) +
                                " exceeds the limit of " + std::to_string(kMaxExhaustiveCases));
  }
  const Tie tie = cfg.tie;
  Partial part = run_chunks(jobs.size(), threads_for(cfg), [&](std::size_t i, Partial& acc) {
    const SweepJob& job = jobs[i];
    const SmallSet& set = sets[i];
    const ConstantSet& cs = set.cs;
    const Format& fmt = cs.fmt;
    const int N = job.N;
    const std::int64_t top = p - N - 2;
    const std::uint64_t n_x = x_count(fmt, top, binades, job.tight);
    if (!set.in_hypothesis) {
      acc.enumerated += n_x;
      acc.count("sets_out_of_hypothesis");
      acc.count("x_skipped_with_set", n_x);
      return;
    }
    acc.count("sets_in_hypothesis");
    const ExactReal c1 = cs.C1.exact();
    const ExactReal c2 = cs.C2.exact();
    const std::int64_t grid = ulp2_exponent(cs.C1) - N - 1;
    // Weakened correct2: R C1 > 1 sets are mined, not checked.
    const bool mining = cfg.weakened && cs.R.exact() * c1 > ExactReal(1);
    if (mining) acc.count("sets_mined_with_RC1_above_1");
    for_each_x(fmt, top, binades, job.tight, [&](const Fpn& x) {
      ++acc.enumerated;
      if (!in_reduction_range(x, cs, N)) return;
      ++acc.cases;
      auto failure = [&](const std::string& detail, const Fpn& z) {
        json j = set_inputs(cs, N, tie);
        j["x"] = fpn_json(x);
        j["z"] = fpn_json(z);
        j["detail"] = detail;
        if (mining) {
          acc.counterexample(std::move(j));
        } else {
          acc.fail(std::move(j));
        }
      };
      Kernel k(fmt, tie);
      const bool diag = kind == Sweep::kThm3 || kind == Sweep::kCorrect3;
      const ZExtraction ze = extract_z(x, cs, N, k, diag);
      const Fpn& z = ze.z;
      if (kind == Sweep::kThm3 || kind == Sweep::kCorrect3) {
        if (ze.guaranteed_case) {
          acc.count("z_guaranteed_case");
          acc.count("ell_" + std::to_string(ze.ell));
        }
        if (!ze.guarantees_hold) {
          failure("z extraction: z 2^N integral, 2 <= l <= p-2, |xR - z| <= 2^(-N-1) fails (l = " +
                      std::to_string(ze.ell) + ", s = " + ze.s.to_string() + ")",
                  z);
          return;
        }
        if (kind == Sweep::kThm3) return;
      }
      const FirstStep fs = first_step(x, z, cs, k);
      const ExactReal target = x.exact() - z.exact() * c1;
      const bool representable = is_representable(target, p, fmt);
      if (!representable) {
        failure("x - z C1 is not a p-bit number", z);
        return;
      }
      if (!fs.exact || fs.u.exact() != target) {
        failure("fma first step disagrees with the exact x - z C1", z);
        return;
      }
      if (kind != Sweep::kThm6) return;
      SecondStep ss;
      try {
        ss = second_step(x, z, fs.u, cs, tie, false, true);
      } catch (const std::exception& e) {
        failure(std::string("second step raised: ") + e.what(), z);
        return;
      }
      acc.count("ops_" + std::to_string(ss.ops));
      if (ss.ops != 9) failure("second step used " + std::to_string(ss.ops) + " rounded operations", z);
      if (ss.v1.exact() + ss.v2.exact() != target - z.exact() * c2) {
        failure("v1 + v2 != x - z C1 - z C2", z);
      } else if (!ss.last_line_exact) {
        failure("last line of the second step rounded", z);
      }
      if (!z.is_zero() && (!multiple_of_pow2(ss.t1, grid) || !multiple_of_pow2(ss.v1, grid))) {
        failure("t1 or v1 is not a multiple of 2^(-N-1) ulp2(C1)", z);
      }
    });
  });
  return finish(cfg, std::move(part), expected);
}

// ------------------------------------------------------------- campaigns

// Random x with |xR| within the z-extraction bound. Mixes the switching
// point of z between 0 and 2^-N, z rounding boundaries, the top of the
// range, and log-uniform magnitudes.
class XSampler {
 public:
  XSampler(const ConstantSet& cs, int N) : cs_(cs), N_(N), fmt_(cs.fmt) {
    bound_ = reduction_bound(fmt_, N) / cs.R.exact();
    top_ = bound_.floor_log2();
    kmax_ = (reduction_bound(fmt_, N) * ExactReal::pow2(N)).floor();
  }

  Fpn draw(std::mt19937_64& rng) {
    for (;;) {
      std::optional<Fpn> x = candidate(rng);
      if (x && in_reduction_range(*x, cs_, N_)) return *x;
    }
  }

 private:
  std::optional<Fpn> near(const ExactReal& v, std::int64_t spread, std::mt19937_64& rng) {
    const Fpn c = round(v, fmt_).value;
    if (c.is_zero()) return std::nullopt;
    const ExactReal step = ulp(c);
    const ExactReal moved = c.exact() + ExactReal(uniform(rng, -spread, spread)) * step;
    if (moved.sign() <= 0) return std::nullopt;
    return round(moved, fmt_).value;
  }

  std::optional<Fpn> candidate(std::mt19937_64& rng) {
    const int p = fmt_.p;
    const bool neg = rng() & 1;
    std::optional<Fpn> x;
    switch (rng() % 8) {
      case 0:  // xR near 2^(-N-1): z switches between 0 and 2^-N
        x = near(cs_.C1.exact() * ExactReal::pow2(-N_ - 1), 1 << 16, rng);
        break;
      case 1: {  // xR near (k + 1/2) 2^-N
        const int bits = static_cast<int>(uniform(rng, 1, static_cast<int>(bit_length(kmax_))));
        mpz_class k = random_top_bits(rng, bits);
        if (k > kmax_) k = kmax_;
        const ExactReal mid = (ExactReal(k) + ExactReal::ratio(1, 2)) * ExactReal::pow2(-N_);
        x = near(mid * cs_.C1.exact(), 1 << 10, rng);
        break;
      }
      case 2: {  // top of the range
        const Fpn b = round(bound_, fmt_).value;
        x = near(b.exact(), 1 << 16, rng);
        break;
      }
      case 3: {  // down to tiny x, z mostly 0
        const std::int64_t msb = uniform(rng, top_ - 3 * p, top_);
        const std::int64_t e = msb - p + 1;
        if (e < fmt_.e_min_q) return std::nullopt;
        x = Fpn::make(1, random_top_bits(rng, p), e, fmt_);
        break;
      }
      default: {  // z != 0 or near it
        const std::int64_t msb = uniform(rng, std::min<std::int64_t>(top_, -N_ - 3), top_);
        const std::int64_t e = msb - p + 1;
        if (e < fmt_.e_min_q) return std::nullopt;
        x = Fpn::make(1, random_top_bits(rng, p), e, fmt_);
        break;
      }
    }
    if (x && neg) x = -*x;
    return x;
  }

  const ConstantSet& cs_;
  int N_;
  Format fmt_;
  ExactReal bound_;
  std::int64_t top_ = 0;
  mpz_class kmax_;
};

constexpr std::uint64_t kChunk = 4096;

CheckResult thm6_campaign(const CheckConfig& cfg) {
  const Format fmt = cfg.fmt.value_or(Format::binary64());
  const RealConstant c = RealConstant::by_name(cfg.constant);
  std::vector<ConstantSet> sets;
  for (int N : cfg.n_values) sets.push_back(gen_constants(c, fmt, N, 2));
  const std::uint64_t per = (cfg.trials + kChunk - 1) / kChunk;
  const std::size_t chunks = sets.size() * per;
  const Tie tie = cfg.tie;
  Partial part = run_chunks(chunks, threads_for(cfg), [&](std::size_t i, Partial& acc) {
    const std::size_t si = i / per;
    const std::uint64_t ci = i % per;
    const ConstantSet& cs = sets[si];
    const int N = cfg.n_values[si];
    if (ci == 0) {
      const AuditReport rep = audit(cs, N);
      if (!rep.pass()) {
        acc.fail({{"detail", "constant set fails its audit"}, {"audit", rep.to_json()}});
      }
    }
    std::mt19937_64 rng = chunk_rng(cfg.seed, (static_cast<std::uint64_t>(N) << 40) + ci);
    XSampler sampler(cs, N);
    const std::uint64_t n = std::min<std::uint64_t>(kChunk, cfg.trials - ci * kChunk);
    const ExactReal c1 = cs.C1.exact();
    const ExactReal c2 = cs.C2.exact();
    const std::int64_t grid = ulp2_exponent(cs.C1) - N - 1;
    for (std::uint64_t t = 0; t < n; ++t) {
      const Fpn x = sampler.draw(rng);
      ++acc.enumerated;
      ++acc.cases;
      auto failure = [&](const std::string& detail, const Fpn& z) {
        json j = set_inputs(cs, N, tie);
        j["constant"] = cs.c_id;
        j["x"] = fpn_json(x);
        j["z"] = fpn_json(z);
        j["detail"] = detail;
        acc.fail(std::move(j));
      };
      Kernel k(fmt, tie);
      const ZExtraction ze = extract_z(x, cs, N, k, false);
      const Fpn& z = ze.z;
      if (z.is_zero()) acc.count("z_zero");
      const FirstStep fs = first_step(x, z, cs, k);
      const ExactReal zc = z.exact();
      const ExactReal first = x.exact() - zc * c1;
      if (!fs.exact || fs.u.exact() != first) {
        failure("first step is not exact", z);
        continue;
      }
      SecondStep ss;
      try {
        ss = second_step(x, z, fs.u, cs, tie, false, true);
      } catch (const std::exception& e) {
        failure(std::string("second step raised: ") + e.what(), z);
        continue;
      }
      acc.count("ops_" + std::to_string(ss.ops));
      if (ss.ops != 9) failure("second step used " + std::to_string(ss.ops) + " rounded operations", z);
      if (ss.v1.exact() + ss.v2.exact() != first - zc * c2) {
        failure("v1 + v2 != x - z C1 - z C2", z);
      } else if (!ss.last_line_exact) {
        failure("last line of the second step rounded", z);
      }
      if (!z.is_zero() && (!multiple_of_pow2(ss.t1, grid) || !multiple_of_pow2(ss.v1, grid))) {
        failure("t1 or v1 is not a multiple of 2^(-N-1) ulp2(C1)", z);
      }
    }
  });
  CheckResult r = finish(cfg, std::move(part), cfg.trials * sets.size());
  r.notes["fast2sum_precondition_checked_on_every_call"] = true;
  return r;
}

// Random number of fmt with msb in [lo, hi]; subnormal when below normal.
Fpn random_fpn(std::mt19937_64& rng, const Format& fmt, std::int64_t lo, std::int64_t hi) {
  const std::int64_t msb = uniform(rng, lo, hi);
  const int p = fmt.p;
  std::int64_t e = msb - p + 1;
  int bits = p;
  if (e < fmt.e_min_q) {
    bits = static_cast<int>(p - (fmt.e_min_q - e));
    e = fmt.e_min_q;
    if (bits < 1) bits = 1;
  }
  Fpn x = Fpn::make(1, random_top_bits(rng, bits), e, fmt);
  return (rng() & 1) ? -x : x;
}

}  // namespace

// ------------------------------------------------------------------ public

int default_threads() {
  if (const char* env = std::getenv("ARGRED_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

json CheckConfig::to_json() const {
  json j;
  j["theorem"] = theorem;
  j["mode"] = mode == Mode::kExhaustive ? "exhaustive" : "randomized";
  j["tie"] = std::string(argred::to_string(tie));
  if (theorem == "thm7") return j;
  if (theorem == "sterbenz" || theorem == "sterbenz2") {
    j["beta"] = beta;
    if (theorem == "sterbenz") j["p"] = p; else { j["p1"] = p1; j["p2"] = p2; }
    j["binades"] = binades > 0 ? binades : 8;
    return j;
  }
  if (mode == Mode::kRandomized || theorem == "eft") {
    j["seed"] = seed;
    j["trials"] = trials;
    const Format f = fmt.value_or(Format::binary64());
    j["format"] = f.name();
  } else {
    j["p"] = p;
    j["binades"] = binades > 0 ? binades : 12;
    j["tight_underflow"] = tight_underflow;
  }
  if (theorem != "eft" && theorem != "thm7") j["N"] = n_values;
  if (q_min > 0) j["q_min"] = q_min;
  if (q_max > 0) j["q_max"] = q_max;
  if (theorem == "thm6") j["constant"] = constant;
  if (weakened) j["weakened"] = true;
  return j;
}

json CheckResult::to_json() const {
  json j;
  j["theorem"] = theorem;
  j["config"] = config;
  j["cases"] = cases;
  j["enumerated"] = enumerated;
  if (expected_enumerated) j["expected_enumerated"] = *expected_enumerated;
  j["failure_count"] = failure_count;
  j["failures"] = failures;
  if (counterexample_count > 0 || !counterexamples.empty()) {
    j["counterexample_count"] = counterexample_count;
    j["counterexamples"] = counterexamples;
  }
  j["notes"] = notes;
  j["pass"] = pass;
  return j;
}

std::string CheckResult::to_text() const {
  std::ostringstream os;
  os << theorem << ": " << (pass ? "pass" : "FAIL") << "  cases=" << cases
     << " enumerated=" << enumerated;
  if (expected_enumerated) os << " (expected " << *expected_enumerated << ")";
  os << " failures=" << failure_count << "\n";
  os << "  config " << config.dump() << "\n";
  if (notes.contains("counts")) {
    for (auto& [k, v] : notes["counts"].items()) os << "  " << k << " = " << v.dump() << "\n";
  }
  for (auto& [k, v] : notes.items()) {
    if (k != "counts") os << "  " << k << ": " << v.dump() << "\n";
  }
  for (const json& f : failures) os << "  failure " << f.dump() << "\n";
  if (counterexample_count > 0) {
    os << "  counterexamples found: " << counterexample_count << "\n";
    for (const json& c : counterexamples) os << "  counterexample " << c.dump() << "\n";
  }
  return os.str();
}

CheckResult check_sterbenz(const CheckConfig& cfg) {
  const int beta = cfg.beta;
  const int p = cfg.p;
  if (beta < 2 || p < 2) throw std::invalid_argument("sterbenz needs beta >= 2 and p >= 2");
  const int binades = cfg.binades > 0 ? cfg.binades : 8;
  require_radix_range(beta, p + binades + 1);
  const std::vector<std::int64_t> nums = radix_numbers(beta, p, binades);
  const std::uint64_t n = radix_count(beta, p, binades);
  // In radix 2 the kernel's rounded subtraction must also be exact.
  std::optional<Format> kfmt;
  if (beta == 2 && p > 3) kfmt = Format::custom(p, 0, 62);
  const std::size_t block = 256;
  const std::size_t chunks = (nums.size() + block - 1) / block;
  Partial part = run_chunks(chunks, threads_for(cfg), [&](std::size_t c, Partial& acc) {
    const std::size_t end = std::min(nums.size(), (c + 1) * block);
    for (std::size_t i = c * block; i < end; ++i) {
      const std::int64_t x = nums[i];
      for (const std::int64_t y : nums) {
        ++acc.enumerated;
        if (!(y <= 2 * x && x <= 2 * y)) continue;
        ++acc.cases;
        if (!radix_representable(x - y, beta, p)) {
          acc.fail({{"beta", beta}, {"p", p}, {"x", radix_text(x, beta)},
                    {"y", radix_text(y, beta)}, {"detail", "x - y needs more than p digits"}});
        } else if (kfmt) {
          const Fpn fx = Fpn::from_int(static_cast<long>(x), *kfmt);
          const Fpn fy = Fpn::from_int(static_cast<long>(y), *kfmt);
          const Rounded d = sub(fx, fy, *kfmt, cfg.tie);
          acc.count("kernel_subtractions");
          if (d.inexact || d.value.exact() != ExactReal(static_cast<long>(x - y))) {
            acc.fail({{"beta", beta}, {"p", p}, {"x", radix_text(x, beta)},
                      {"y", radix_text(y, beta)}, {"detail", "kernel x - y rounded"}});
          }
        }
      }
    }
  });
  return finish(cfg, std::move(part), n * n);
}

CheckResult check_sterbenz_approx2(const CheckConfig& cfg) {
  const int beta = cfg.beta;
  const int p1 = cfg.p1;
  const int p2 = cfg.p2;
  if (beta < 2 || p1 < 2 || p2 < 2) {
    throw std::invalid_argument("sterbenz2 needs beta >= 2, p1 >= 2, p2 >= 2");
  }
  const int binades = cfg.binades > 0 ? cfg.binades : 8;
  require_radix_range(beta, p1 + binades + std::max(p1, p2) + 2);
  const std::vector<std::int64_t> nums = radix_numbers(beta, p1, binades);
  const std::uint64_t n = radix_count(beta, p1, binades);
  // y / (1 + beta^(p2-p1)) <= x  <=>  y A <= x (A + B), A = beta^p1, B = beta^p2.
  const std::int64_t a = ipow(beta, p1);
  const std::int64_t ab = a + ipow(beta, p2);
  const std::size_t block = 256;
  const std::size_t chunks = (nums.size() + block - 1) / block;
  Partial part = run_chunks(chunks, threads_for(cfg), [&](std::size_t c, Partial& acc) {
    const std::size_t end = std::min(nums.size(), (c + 1) * block);
    for (std::size_t i = c * block; i < end; ++i) {
      const std::int64_t x = nums[i];
      for (const std::int64_t y : nums) {
        ++acc.enumerated;
        if (!(y * a <= x * ab && x * a <= ab * y)) continue;
        ++acc.cases;
        if (!radix_representable(x - y, beta, p2)) {
          acc.fail({{"beta", beta}, {"p1", p1}, {"p2", p2}, {"x", radix_text(x, beta)},
                    {"y", radix_text(y, beta)}, {"detail", "x - y needs more than p2 digits"}});
        }
      }
    }
  });
  return finish(cfg, std::move(part), n * n);
}

CheckResult check_thm3(const CheckConfig& cfg) { return run_sweep(Sweep::kThm3, cfg); }
CheckResult check_correct2(const CheckConfig& cfg) {
  CheckResult r = run_sweep(Sweep::kCorrect2, cfg);
  r.notes["q_range_reading"] = "2 <= q <= p-1";
  if (cfg.weakened) {
    r.notes["mining"] = r.counterexample_count > 0
                            ? "counterexamples found with R C1 <= 1 dropped"
                            : "no counterexample found in the window";
  }
  return r;
}
CheckResult check_correct3(const CheckConfig& cfg) { return run_sweep(Sweep::kCorrect3, cfg); }

CheckResult check_correct1(const CheckConfig& cfg) {
  const int p = cfg.p;
  if (p <= 3 || p > 16) throw std::invalid_argument("correct1 supports 3 < p <= 16");
  auto [q_lo, q_hi] = q_range(cfg, cfg.weakened ? 1 : 2, cfg.weakened ? 1 : p - 2);
  if (!cfg.weakened && (q_lo < 2 || q_hi >= p - 1)) {
    throw std::invalid_argument("correct1 needs 2 <= q < p-1 (use weakened mode to mine)");
  }
  struct Job {
    mpz_class r_sig;
    std::int64_t r_exp;
    int N;
    int q;
  };
  std::vector<Job> jobs;
  for (int N : cfg.n_values) {
    for (int q = q_lo; q <= q_hi; ++q) {
      for (std::int64_t re : {static_cast<std::int64_t>(-p), static_cast<std::int64_t>(-p + 1)}) {
        for (mpz_class m = mpz_class(1) << (p - 1); m < (mpz_class(1) << p); ++m) {
          jobs.push_back({m, re, N, q});
        }
      }
    }
  }
  const Tie tie = cfg.tie;
  const Format fmt = sweep_format(p);
  std::atomic<std::uint64_t> expected_z{0};
  Partial part = run_chunks(jobs.size(), threads_for(cfg), [&](std::size_t i, Partial& acc) {
    const Job& job = jobs[i];
    const Fpn R = Fpn::make(1, job.r_sig, job.r_exp, fmt);
    const ConstantSet cs = synthetic_constants(R, job.q, job.N);
    const int N = job.N;
    const int l_lo = std::max(2, job.q);
    std::uint64_t z_expected = 0;
    for (int l = l_lo; l <= p - 1; ++l) z_expected += 2ULL << (l - 1);
    expected_z.fetch_add(z_expected);
    const bool lambda_ok =
        cs.C1.exact() >= ExactReal::pow2(p - job.q + std::max(1, N - 1)) * fmt.lambda();
    if (cs.C1.is_pow2() || !lambda_ok) {
      acc.count("sets_out_of_hypothesis");
      acc.count("z_enumerated", z_expected);
      return;
    }
    acc.count("sets_in_hypothesis");
    const ExactReal r = R.exact();
    const ExactReal c1 = cs.C1.exact();
    const ExactReal h = ExactReal::pow2(-N - 1);
    for (int l = l_lo; l <= p - 1; ++l) {
      for (mpz_class k = mpz_class(1) << (l - 1); k < (mpz_class(1) << l); ++k) {
        for (int sign : {1, -1}) {
          acc.count("z_enumerated");
          const Fpn z = Fpn::make(sign, k, -N, fmt);
          const ExactReal zc = z.exact();
          const ExactReal lo = (zc - h) / r;
          const ExactReal hi = (zc + h) / r;
          Fpn x = round(lo, fmt).value;
          if (x.exact() < lo) x = next_up(x);
          for (; x.exact() <= hi; x = next_up(x)) {
            ++acc.enumerated;
            ++acc.cases;
            acc.count("ell_" + std::to_string(l));
            const ExactReal target = x.exact() - zc * c1;
            const bool ok = is_representable(target, p, fmt);
            const Rounded u = fma(-z, cs.C1, x, fmt, tie);
            if (ok && (u.inexact || u.value.exact() != target)) {
              json j = set_inputs(cs, N, tie);
              j["x"] = fpn_json(x);
              j["z"] = fpn_json(z);
              j["detail"] = "fma disagrees with a representable x - z C1";
              acc.fail(std::move(j));
            }
            if (ok) continue;
            json j = set_inputs(cs, N, tie);
            j["x"] = fpn_json(x);
            j["z"] = fpn_json(z);
            j["ell"] = l;
            j["detail"] = "x - z C1 is not a p-bit number";
            if (cfg.weakened) {
              acc.count("counterexample_ell_" + std::to_string(l));
              acc.counterexample(std::move(j));
            } else {
              acc.count("failure_ell_" + std::to_string(l));
              acc.fail(std::move(j));
            }
          }
        }
      }
    }
  });
  CheckResult res = finish(cfg, std::move(part), std::nullopt);
  const std::uint64_t got = res.notes["counts"].value("z_enumerated", std::uint64_t{0});
  res.notes["expected_z_enumerated"] = expected_z.load();
  if (got != expected_z.load()) {
    ++res.failure_count;
    res.failures.push_back({{"detail", "enumerated z count differs from the closed form"},
                            {"enumerated", got},
                            {"expected", expected_z.load()}});
    res.pass = false;
  }
  if (cfg.weakened) {
    res.notes["mining"] = res.counterexample_count > 0
                              ? "counterexamples found with the weakened hypothesis"
                              : "no counterexample found in the window";
  }
  return res;
}

CheckResult check_thm6(const CheckConfig& cfg) {
  if (cfg.mode == Mode::kRandomized) return thm6_campaign(cfg);
  return run_sweep(Sweep::kThm6, cfg);
}

CheckResult check_thm7(const CheckConfig& cfg) {
  std::vector<std::pair<RealConstant, Format>> presets;
  for (const RealConstant& c : {RealConstant::pi(), RealConstant::ln2()}) {
    for (const Format& f : preset_formats()) presets.emplace_back(c, f);
  }
  Partial part;
  for (const auto& [c, f] : presets) {
    ++part.enumerated;
    ++part.cases;
    const ConstantSet cs = gen_constants(c, f, 0, 2);
    const std::optional<bool> ok = c1_within_four_ulps(cs);
    json j{{"constant", c.name()}, {"format", f.name()}, {"C1", to_string(cs.C1)}};
    if (!ok || !*ok) {
      j["detail"] = "|C - C1| > 4 ulp(C1) at an end of the enclosure";
      part.fail(std::move(j));
      continue;
    }
    for (const HypothesisCheck& h : audit(cs, 0).items) {
      if (h.theorem == "thm7" && !h.pass) {
        j["detail"] = h.hypothesis + " fails";
        part.fail(j);
      }
    }
    const ExactReal four_ulp = ExactReal(4) * ulp(cs.C1);
    const ExactReal err = std::max((cs.c_enclosure->hi - cs.C1.exact()).abs(),
                                   (cs.c_enclosure->lo - cs.C1.exact()).abs());
    part.count(c.name() + "_" + f.name() + "_err_over_ulp_x1e6",
               static_cast<std::uint64_t>((err / ulp(cs.C1)).to_double() * 1e6));
    (void)four_ulp;
  }
  return finish(cfg, std::move(part), presets.size());
}

CheckResult check_eft(const CheckConfig& cfg) {
  const Format fmt = cfg.fmt.value_or(Format::binary64());
  const int p = fmt.p;
  const Tie tie = cfg.tie;
  const std::uint64_t per = (cfg.trials + kChunk - 1) / kChunk;
  const std::int64_t normal_lo = fmt.e_min_q + p - 1;
  Partial part = run_chunks(2 * per, threads_for(cfg), [&](std::size_t i, Partial& acc) {
    const bool sum = i < per;
    const std::uint64_t ci = i % per;
    std::mt19937_64 rng = chunk_rng(cfg.seed, (sum ? 0 : 1ULL << 40) + ci);
    const std::uint64_t n = std::min<std::uint64_t>(kChunk, cfg.trials - ci * kChunk);
    for (std::uint64_t t = 0; t < n;) {
      // One in 16 draws sits near the subnormal range.
      const bool low = rng() % 16 == 0;
      const std::int64_t lo = low ? fmt.e_min_q : -200;
      const std::int64_t hi = low ? normal_lo + 2 * p : 200;
      ++acc.enumerated;
      if (sum) {
        Fpn a = random_fpn(rng, fmt, lo, hi);
        Fpn b;
        if (rng() & 1) {
          b = random_fpn(rng, fmt, lo, hi);
          if (compare_abs(a, b) < 0) std::swap(a, b);
        } else {
          // |a| < |b| allowed when a sits on b's quantum grid.
          b = random_fpn(rng, fmt, lo, hi);
          const std::int64_t qb = b.exponent();
          const int bits = static_cast<int>(uniform(rng, 1, p));
          const std::int64_t ea = qb + uniform(rng, 0, 3);
          mpz_class ma = random_top_bits(rng, bits);
          if (ea + bits - 1 > fmt.e_max) continue;
          a = Fpn::make((rng() & 1) ? 1 : -1, ma, ea, fmt);
        }
        // Oracle for the precondition: a on b's quantum grid or |a| >= |b|.
        const ExactReal ea = a.exact();
        const ExactReal eb = b.exact();
        const bool grid = (ea / ExactReal::pow2(b.exponent())).is_integer();
        if (!(a.is_zero() || b.is_zero() || ea.abs() >= eb.abs() || grid)) {
          acc.count("fast2sum_draw_rejected");
          continue;
        }
        ++t;
        ++acc.cases;
        acc.count("fast2sum_calls");
        try {
          const TwoTerm r = fast2sum(a, b, fmt, tie);
          const Rounded s = round(ea + eb, fmt, tie);
          if (r.hi != s.value || r.hi.exact() + r.lo.exact() != ea + eb) {
            acc.fail({{"op", "fast2sum"}, {"a", fpn_json(a)}, {"b", fpn_json(b)},
                      {"s", fpn_json(r.hi)}, {"e", fpn_json(r.lo)},
                      {"detail", "s + e != a + b or s != o(a + b)"}});
          }
        } catch (const std::exception& e) {
          acc.fail({{"op", "fast2sum"}, {"a", fpn_json(a)}, {"b", fpn_json(b)},
                    {"detail", std::string("raised: ") + e.what()}});
        }
      } else {
        const std::int64_t ma_msb = uniform(rng, -300, 300);
        const Fpn a = random_fpn(rng, fmt, ma_msb, ma_msb);
        const std::int64_t want = low ? uniform(rng, normal_lo - p, normal_lo + 2 * p)
                                      : uniform(rng, -400, 400);
        const Fpn b = random_fpn(rng, fmt, want - ma_msb, want - ma_msb);
        const ExactReal prod = a.exact() * b.exact();
        const Rounded h = round(prod, fmt, tie);
        if (!is_representable(prod - h.value.exact(), p, fmt)) {
          acc.count("fast2mult_draw_rejected");
          continue;
        }
        ++t;
        ++acc.cases;
        acc.count("fast2mult_calls");
        try {
          const TwoTerm r = fast2mult(a, b, fmt, tie);
          if (r.hi != h.value || r.hi.exact() + r.lo.exact() != prod) {
            acc.fail({{"op", "fast2mult"}, {"a", fpn_json(a)}, {"b", fpn_json(b)},
                      {"h", fpn_json(r.hi)}, {"l", fpn_json(r.lo)},
                      {"detail", "h + l != a b or h != o(a b)"}});
          }
        } catch (const std::exception& e) {
          acc.fail({{"op", "fast2mult"}, {"a", fpn_json(a)}, {"b", fpn_json(b)},
                    {"detail", std::string("raised: ") + e.what()}});
        }
      }
    }
  });
  CheckResult r = finish(cfg, std::move(part), std::nullopt);
  if (r.cases != 2 * cfg.trials) {
    ++r.failure_count;
    r.failures.push_back({{"detail", "call count differs from 2 * trials"}, {"cases", r.cases}});
    r.pass = false;
  }
  return r;
}

std::vector<std::string> theorem_ids() {
  return {"sterbenz", "sterbenz2", "thm3", "correct1", "correct2",
          "correct3", "thm5",      "thm6", "thm7",     "eft"};
}

CheckResult run_check(const CheckConfig& cfg) {
  const std::string& t = cfg.theorem;
  if (t == "sterbenz") return check_sterbenz(cfg);
  if (t == "sterbenz2") return check_sterbenz_approx2(cfg);
  if (t == "thm3") return check_thm3(cfg);
  if (t == "correct1") return check_correct1(cfg);
  if (t == "correct2") return check_correct2(cfg);
  if (t == "correct3" || t == "thm5") return check_correct3(cfg);
  if (t == "thm6") return check_thm6(cfg);
  if (t == "thm7") return check_thm7(cfg);
  if (t == "eft") return check_eft(cfg);
  throw std::invalid_argument("unknown theorem id: " + t);
}

// ------------------------------------------------------------- Cody-Waite

namespace {

ExactReal worst_vs_c(const Fpn& u, const Fpn& x, const Fpn& z, const RealEnclosure& c) {
  const ExactReal base = u.exact() - x.exact();
  const ExactReal zc = z.exact();
  return std::max((base + zc * c.lo).abs(), (base + zc * c.hi).abs());
}

}  // namespace

CodyWaiteReport demo_codywaite(std::uint64_t seed, std::size_t want, std::uint64_t max_trials) {
  const Format fmt = Format::binary64();
  const int p = fmt.p;
  const ConstantSet cs = gen_constants(RealConstant::pi(), fmt, 0, 2);
  const Fpn c1_full = safe_round(RealConstant::pi(), fmt, p);
  const RealEnclosure c = *cs.c_enclosure;
  CodyWaiteReport rep;
  std::mt19937_64 rng = chunk_rng(seed, 0);
  const ExactReal half = ExactReal::ratio(1, 2);
  while (rep.cases.size() < want && rep.searched < max_trials) {
    ++rep.searched;
    // x near k pi for a large k: the regime where z C1 needs many bits.
    const int bits = static_cast<int>(uniform(rng, 20, 48));
    const mpz_class k = random_top_bits(rng, bits);
    const ExactReal jitter = ExactReal(uniform(rng, -1000, 1000)) * ExactReal::ratio(1, 1000) * half;
    const Fpn x = round(ExactReal(k) * c1_full.exact() + jitter, fmt).value;
    if (!in_reduction_range(x, cs, 0)) continue;
    Kernel kern(fmt);
    const ZExtraction ze = extract_z(x, cs, 0, kern, false);
    const Fpn& z = ze.z;
    const Rounded prod = mul(z, c1_full, fmt);
    const Rounded naive = sub(x, prod.value, fmt);
    const FirstStep fs = first_step(x, z, cs, kern);
    CodyWaiteCase cw;
    cw.x = x;
    cw.z = z;
    cw.c1_full = c1_full;
    cw.naive_u = naive.value;
    cw.fma_u = fs.u;
    cw.naive_target = x.exact() - z.exact() * c1_full.exact();
    cw.fma_target = x.exact() - z.exact() * cs.C1.exact();
    cw.naive_exact = cw.naive_u.exact() == cw.naive_target;
    cw.fma_exact = fs.exact && cw.fma_u.exact() == cw.fma_target;
    if (cw.naive_exact || !cw.fma_exact) continue;
    cw.naive_error = (cw.naive_u.exact() - cw.naive_target).abs();
    cw.naive_vs_c = worst_vs_c(cw.naive_u, x, z, c);
    cw.fma_vs_c = worst_vs_c(cw.fma_u, x, z, c);
    {
      const SecondStep ss = second_step(x, z, fs.u, cs, Tie::kEven, false, true);
      const ExactReal base = ss.v1.exact() + ss.v2.exact() - x.exact();
      cw.second_vs_c = std::max((base + z.exact() * c.lo).abs(), (base + z.exact() * c.hi).abs());
    }
    cw.cancelled_bits = cw.naive_target.is_zero()
                            ? p
                            : static_cast<int>(x.msb_exponent() - cw.naive_target.abs().floor_log2());
    mpz_class pm = z.significand() * c1_full.significand();
    while (pm != 0 && mpz_even_p(pm.get_mpz_t())) pm >>= 1;
    cw.product_bits = static_cast<int>(bit_length(pm));
    rep.cases.push_back(std::move(cw));
  }
  return rep;
}

std::string CodyWaiteReport::to_text() const {
  std::ostringstream os;
  os << "Cody-Waite two-rounding first step versus the fma first step (double, C = pi, N = 0)\n";
  os << "searched " << searched << " arguments, found " << cases.size()
     << " with an inexact two-rounding step and an exact fma step\n";
  int i = 0;
  for (const CodyWaiteCase& c : cases) {
    os << "\ncase " << ++i << "\n";
    os << "  x                     = " << to_string(c.x) << "  (~" << c.x.exact().to_double() << ")\n";
    os << "  z                     = " << to_string(c.z) << "\n";
    os << "  C1 full (p bits)      = " << to_string(c.c1_full) << "\n";
    os << "  z * C1 full needs     = " << c.product_bits << " bits\n";
    os << "  o(x - o(z C1 full))   = " << to_string(c.naive_u) << "\n";
    os << "  exact x - z C1 full   = " << c.naive_target.to_string() << "\n";
    os << "  two-rounding error    = " << c.naive_error.to_string() << "  (~"
       << c.naive_error.to_double() << ")\n";
    os << "  cancelled bits        = " << c.cancelled_bits << "\n";
    os << "  fma u = {x - z C1}    = " << to_string(c.fma_u) << "  exact: "
       << (c.fma_exact ? "yes" : "no") << "\n";
    os << "  fma first-step error  = 0\n";
    os << "  |naive - (x - z C)|  <= " << c.naive_vs_c.to_double() << "\n";
    os << "  |fma u - (x - z C)|  <= " << c.fma_vs_c.to_double() << "\n";
    os << "  |v1 + v2 - (x - z C)| <= " << c.second_vs_c.to_double() << "  (after the second step)\n";
  }
  return os.str();
}

json CodyWaiteReport::to_json() const {
  json j;
  j["searched"] = searched;
  j["found"] = found();
  j["cases"] = json::array();
  for (const CodyWaiteCase& c : cases) {
    j["cases"].push_back({{"x", to_string(c.x)},
                          {"z", to_string(c.z)},
                          {"c1_full", to_string(c.c1_full)},
                          {"naive_u", to_string(c.naive_u)},
                          {"fma_u", to_string(c.fma_u)},
                          {"naive_exact", c.naive_exact},
                          {"fma_exact", c.fma_exact},
                          {"naive_error", c.naive_error.to_string()},
                          {"naive_vs_c_bound", c.naive_vs_c.to_double()},
                          {"fma_vs_c_bound", c.fma_vs_c.to_double()},
                          {"second_step_vs_c_bound", c.second_vs_c.to_double()},
                          {"cancelled_bits", c.cancelled_bits},
                          {"product_bits", c.product_bits}});
  }
  return j;
}

}  // namespace argred
