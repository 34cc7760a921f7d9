#include "dtnflow/flow.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dtnflow/errors.hpp"
#include "dtnflow/special.hpp"

namespace dtnflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

int mode_multiplicity(int m) { return m == 0 ? 1 : 2; }

double scaled(double tol, double lambda) { return tol * std::max(1.0, std::abs(lambda)); }

template <typename F>
void parallel_modes(int count, int threads, F&& fn) {
  if (threads == 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, std::max(1, count));
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

struct TaggedPole {
  double lambda;
  bool from_f;
  bool from_fa;
};

struct SweepContext {
  const Media& media;
  const RadialDomain& domain;
  int sigma;
  double lambda_max;
  FlowOptions options;
  double dk;         // scan step in k-space
  double side_dk;  // offset in k kept clear of the pole-detection threshold
};

double mu_value(const SweepContext& ctx, int m, double lambda) {
  const DtnValue v = mu_mode(m, lambda, ctx.media, ctx.domain, ctx.sigma, ctx.options.pole_tol);
  if (v.is_pole) {
    std::ostringstream msg;
    msg << "flow: unexpected pole at lambda = " << lambda << " (mode " << m << ")";
    throw ConsistencyError(msg.str());
  }
  return v.value;
}

std::vector<TaggedPole> merged_poles(const SweepContext& ctx, int m) {
  const auto pf = mode_poles_f(m, ctx.domain, ctx.lambda_max);
  const auto pa = mode_poles_fa(m, ctx.media, ctx.domain, ctx.lambda_max);
  std::vector<TaggedPole> out;
  size_t i = 0, j = 0;
  while (i < pf.size() || j < pa.size()) {
    if (i < pf.size() && j < pa.size() &&
        std::abs(pf[i] - pa[j]) <= scaled(1e-9, pf[i])) {
      out.push_back({0.5 * (pf[i] + pa[j]), true, true});
      ++i;
      ++j;
    } else if (j >= pa.size() || (i < pf.size() && pf[i] < pa[j])) {
      out.push_back({pf[i++], true, false});
    } else {
      out.push_back({pa[j++], false, true});
    }
  }
  return out;
}

// Bisection for a sign change of mu over (la, lb), tightened to lambda_tol.
double bisect_crossing(const SweepContext& ctx, int m, double la, double lb, double fa) {
  const double tol = scaled(ctx.options.lambda_tol, lb);
  while (lb - la > tol) {
    const double mid = 0.5 * (la + lb);
    const double fm = mu_value(ctx, m, mid);
    if (fm == 0.0) return mid;
    if ((fa < 0.0) != (fm < 0.0)) {
      lb = mid;
    } else {
      la = mid;
      fa = fm;
    }
  }
  return 0.5 * (la + lb);
}

// Golden-section minimum of |mu| over (la, lb); used only for touch candidates.
double refine_abs_minimum(const SweepContext& ctx, int m, double la, double lb) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = la, b = lb;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = std::abs(mu_value(ctx, m, x1)), f2 = std::abs(mu_value(ctx, m, x2));
  const double tol = scaled(ctx.options.lambda_tol, lb);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = std::abs(mu_value(ctx, m, x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = std::abs(mu_value(ctx, m, x2));
    }
  }
  return 0.5 * (a + b);
}

struct ModeScan {
  std::vector<BranchEvent> events;
  double min_mu = std::numeric_limits<double>::infinity();
  bool all_positive = true;
};

// Scan one inter-pole interval (lo, hi) for zero crossings and touches.
void scan_interval(const SweepContext& ctx, int m, double lo, double hi, bool lo_is_pole,
                   bool hi_is_pole, ModeScan* out) {
  double klo = std::sqrt(std::max(lo, 0.0));
  double khi = std::sqrt(hi);
  if (lo_is_pole) klo += ctx.side_dk;
  if (hi_is_pole) khi -= ctx.side_dk;
  if (lo == 0.0) klo = std::max(klo, std::min(0.5 * khi, 1e-5));
  if (khi <= klo) return;

  const int n = std::clamp(static_cast<int>(std::ceil((khi - klo) / ctx.dk)), 32, 200000);
  const int mult = mode_multiplicity(m);

  std::vector<double> ls(n + 1), mus(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double k = klo + (khi - klo) * i / n;
    ls[i] = k * k;
    mus[i] = mu_value(ctx, m, ls[i]);
    out->min_mu = std::min(out->min_mu, mus[i]);
    if (mus[i] <= 10.0 * ctx.options.zero_tol) out->all_positive = false;
  }

  for (int i = 0; i < n; ++i) {
    if (mus[i] == 0.0) continue;  // neighbours carry the sign change
    if ((mus[i] < 0.0) != (mus[i + 1] < 0.0)) {
      const double root = bisect_crossing(ctx, m, ls[i], ls[i + 1], mus[i]);
      BranchEvent ev;
      ev.lambda = root;
      ev.mode = m;
      ev.kind = mus[i] > 0.0 ? EventKind::ZeroCrossUp : EventKind::ZeroCrossDown;
      ev.delta_n2 = mus[i] > 0.0 ? mult : -mult;
      ev.mu_left = mus[i];
      ev.mu_right = mus[i + 1];
      out->events.push_back(ev);
    }
  }

  // Touch candidates: interior |mu| minima below threshold without sign change.
  for (int i = 1; i < n; ++i) {
    const double am = std::abs(mus[i]);
    if (am >= 1e-3 || am > std::abs(mus[i - 1]) || am > std::abs(mus[i + 1])) continue;
    if ((mus[i - 1] < 0.0) != (mus[i + 1] < 0.0)) continue;  // genuine crossing pair, found above
    const double at = refine_abs_minimum(ctx, m, ls[i - 1], ls[i + 1]);
    const double mu_min = mu_value(ctx, m, at);
    if (std::abs(mu_min) <= 10.0 * ctx.options.zero_tol) {
      if (ctx.options.strict)
        throw ConsistencyError("flow: ZeroTouch event in strict mode at lambda = " +
                               std::to_string(at));
      BranchEvent ev;
      ev.lambda = at;
      ev.mode = m;
      ev.kind = EventKind::ZeroTouch;
      ev.mu_left = mus[i - 1];
      ev.mu_right = mus[i + 1];
      out->events.push_back(ev);
    }
  }
}

ModeScan scan_mode(const SweepContext& ctx, int m) {
  ModeScan out;
  const int mult = mode_multiplicity(m);
  const auto poles = merged_poles(ctx, m);

  // Interval partition: (0, p1), ..., (pk, lambda_max].
  double lo = 0.0;
  bool lo_is_pole = false;
  for (size_t i = 0; i <= poles.size(); ++i) {
    const bool last = i == poles.size();
    const double hi = last ? ctx.lambda_max : poles[i].lambda;
    if (hi > lo) scan_interval(ctx, m, lo, hi, lo_is_pole, !last, &out);
    lo = hi;
    lo_is_pole = true;
  }

  // Departure at lambda = 0: a branch starting exactly on the axis edge that
  // dives negative immediately raises n2 without a positive-lambda crossing.
  const double mu0 = mu_value(ctx, m, 0.0);
  if (std::abs(mu0) <= ctx.options.zero_tol) {
    const double first = poles.empty() ? ctx.lambda_max : poles.front().lambda;
    double probe = first * 1e-6;
    double mup = mu_value(ctx, m, probe);
    int tries = 0;
    while (std::abs(mup) <= 10.0 * ctx.options.zero_tol && ++tries < 20) {
      probe *= 4.0;
      if (probe > 0.25 * first) break;
      mup = mu_value(ctx, m, probe);
    }
    if (mup < -10.0 * ctx.options.zero_tol) {
      BranchEvent ev;
      ev.lambda = 0.0;
      ev.mode = m;
      ev.kind = EventKind::ZeroCrossUp;
      ev.delta_n2 = mult;
      ev.mu_left = 0.0;
      ev.mu_right = mup;
      out.events.push_back(ev);
    }
  }

  // Pole passages: measure the jump of n_minus from the branch signs on the
  // two sides; the passage through infinity is what changes n1.
  for (size_t i = 0; i < poles.size(); ++i) {
    const double p = poles[i].lambda;
    if (p > ctx.lambda_max) break;
    const double kp = std::sqrt(p);
    double dk = ctx.side_dk;
    const double prev = i == 0 ? 0.0 : poles[i - 1].lambda;
    const double next = i + 1 < poles.size() ? poles[i + 1].lambda : p + 4.0 * kp * dk + 1.0;
    dk = std::min(dk, 0.125 * (kp - std::sqrt(std::max(prev, 0.0))));
    dk = std::min(dk, 0.125 * (std::sqrt(next) - kp));
    dk = std::max(dk, 64.0 * ctx.options.pole_tol);
    const double ll = (kp - dk) * (kp - dk);
    const double lr = (kp + dk) * (kp + dk);
    const double mul = mu_value(ctx, m, ll);
    const double mur = mu_value(ctx, m, lr);

    BranchEvent ev;
    ev.lambda = p;
    ev.mode = m;
    ev.kind = poles[i].from_f && poles[i].from_fa ? EventKind::DoublePole
              : poles[i].from_f                   ? EventKind::PoleOfF
                                                  : EventKind::PoleOfFA;
    ev.delta_n1 = mult * ((mur < 0.0 ? 1 : 0) - (mul < 0.0 ? 1 : 0));
    ev.mu_left = mul;
    ev.mu_right = mur;
    out.events.push_back(ev);
  }

  std::sort(out.events.begin(), out.events.end(),
            [](const BranchEvent& a, const BranchEvent& b) { return a.lambda < b.lambda; });
  return out;
}

void verify_pole_law(const SweepContext& ctx, const FlowLedger& ledger,
                     const SpectrumTable& dirichlet, const SpectrumTable& dirichlet_a) {
  // Every tabulated pole must be accounted for by events whose measured jump
  // matches sigma*(m_A - m_0); singular coincidences only loosen it to the
  // intersection bound.
  std::vector<double> pole_lambdas;
  for (const auto& e : dirichlet.entries)
    if (e.lambda <= ctx.lambda_max) pole_lambdas.push_back(e.lambda);
  for (const auto& e : dirichlet_a.entries)
    if (e.lambda <= ctx.lambda_max) pole_lambdas.push_back(e.lambda);
  std::sort(pole_lambdas.begin(), pole_lambdas.end());

  size_t i = 0;
  while (i < pole_lambdas.size()) {
    const double lambda0 = pole_lambdas[i];
    const double tol = scaled(1e-9, lambda0);
    size_t j = i;
    while (j < pole_lambdas.size() && pole_lambdas[j] - lambda0 <= tol) ++j;

    const int m0 = dirichlet.multiplicity_near(lambda0, tol);
    const int ma = dirichlet_a.multiplicity_near(lambda0, tol);
    int measured = 0;
    bool has_double = false;
    for (const auto& ev : ledger.events) {
      if (std::abs(ev.lambda - lambda0) > tol) continue;
      if (ev.kind == EventKind::PoleOfF || ev.kind == EventKind::PoleOfFA ||
          ev.kind == EventKind::DoublePole) {
        measured += ev.delta_n1;
        if (ev.kind == EventKind::DoublePole) has_double = true;
      }
    }
    const int predicted = ctx.sigma * (ma - m0);
    const int slack = has_double ? std::min(m0, ma) : 0;
    if (std::abs(measured - predicted) > slack) {
      std::ostringstream msg;
      msg << "flow: pole-jump law violated at lambda = " << lambda0 << " (measured " << measured
          << ", expected " << predicted << ", m0 = " << m0 << ", m_A = " << ma << ")";
      throw ConsistencyError(msg.str());
    }
    i = j;
  }
}

void verify_ledger_identity(const SweepContext& ctx, const FlowLedger& ledger) {
  std::vector<double> stops;
  stops.push_back(0.0);
  for (const auto& ev : ledger.events)
    if (stops.back() < ev.lambda) stops.push_back(ev.lambda);
  if (stops.back() < ctx.lambda_max) stops.push_back(ctx.lambda_max);

  const int gaps = static_cast<int>(stops.size()) - 1;
  if (gaps < 1) return;
  const int per_gap = std::max(1, (200 + gaps - 1) / gaps);

  int checked = 0;
  for (int g = 0; g < gaps && checked < 200; ++g) {
    const double lo = stops[g], hi = stops[g + 1];
    if (hi - lo < scaled(1e-6, hi)) continue;
    for (int s = 1; s <= per_gap && checked < 200; ++s) {
      const double lambda = lo + (hi - lo) * s / (per_gap + 1.0);
      const int direct = n_minus_at(lambda, ctx.media, ctx.domain, ctx.sigma, ledger.mode_cap,
                                    ctx.options.pole_tol);
      const int folded = ledger.n_minus(lambda);
      if (direct != folded) {
        std::ostringstream msg;
        msg << "flow: ledger identity violated at lambda = " << lambda << " (direct " << direct
            << ", ledger " << folded << ")";
        throw ConsistencyError(msg.str());
      }
      ++checked;
    }
  }
}

SweepContext make_context(const Media& media, const RadialDomain& domain, int sigma,
                          double lambda_max, const FlowOptions& options) {
  if (!(lambda_max > 0.0)) throw std::invalid_argument("sweep: lambda_max must be positive");
  if (sigma != 1 && sigma != -1) throw std::invalid_argument("sweep: sigma must be +1 or -1");
  const double wave = std::max(1.0, std::sqrt(media.n / media.a));
  SweepContext ctx{media, domain, sigma, lambda_max, options, 0.0, 0.0};
  ctx.dk = kPi / (16.0 * domain.R * wave);
  ctx.side_dk = std::max(1e-6, 64.0 * options.pole_tol);
  return ctx;
}

}  // namespace

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::ZeroCrossUp: return "zero_cross_up";
    case EventKind::ZeroCrossDown: return "zero_cross_down";
    case EventKind::ZeroTouch: return "zero_touch";
    case EventKind::PoleOfF: return "pole_f";
    case EventKind::PoleOfFA: return "pole_fa";
    case EventKind::DoublePole: return "double_pole";
  }
  return "unknown";
}

int FlowLedger::n1(double lambda) const {
  int sum = 0;
  for (const auto& ev : events) {
    if (ev.lambda > lambda) break;
    sum += ev.delta_n1;
  }
  return sum;
}

int FlowLedger::n2(double lambda) const {
  int sum = 0;
  for (const auto& ev : events) {
    if (ev.lambda > lambda) break;
    sum += ev.delta_n2;
  }
  return sum;
}

int FlowLedger::n_minus(double lambda) const { return n_minus_zero + n1(lambda) + n2(lambda); }

DtnValue mu_mode(int m, double lambda, const Media& media, const RadialDomain& domain, int sigma,
                 double pole_tol) {
  const DtnValue f = f_mode(m, lambda, domain, pole_tol);
  const DtnValue fa = fa_mode(m, lambda, media, domain, pole_tol);
  if (f.is_pole || fa.is_pole) return {0.0, true};
  return {sigma * (f.value - fa.value), false};
}

int n_minus_at(double lambda, const Media& media, const RadialDomain& domain, int sigma,
               int mode_cap, double pole_tol) {
  // The symbol gap sigma*(1-a) m/R must grow positively for the tail to close.
  if (sigma * (1.0 - media.a) <= 0.0)
    throw std::logic_error("n_minus_at: symbol gap is not positive");
  int count = 0;
  for (int m = 0; m <= mode_cap; ++m) {
    const DtnValue mu = mu_mode(m, lambda, media, domain, sigma, pole_tol);
    if (mu.is_pole)
      throw std::invalid_argument("n_minus_at: lambda = " + std::to_string(lambda) +
                                  " sits on a pole of mode " + std::to_string(m));
    if (mu.value < 0.0) count += mode_multiplicity(m);
  }
  for (int m = mode_cap + 1; m <= mode_cap + 10; ++m) {
    const DtnValue mu = mu_mode(m, lambda, media, domain, sigma, pole_tol);
    if (mu.is_pole || mu.value <= 0.0)
      throw ConsistencyError("n_minus_at: tail certification failed at mode " + std::to_string(m) +
                             ", lambda = " + std::to_string(lambda));
  }
  return count;
}

int default_mode_cap(const Media& media, const RadialDomain& domain, int sigma, double lambda_max,
                     const FlowOptions& options) {
  SweepContext ctx = make_context(media, domain, sigma, lambda_max, options);

  const auto pole_free_and_positive = [&](int m) {
    if (!mode_poles_f(m, domain, lambda_max).empty()) return false;
    if (!mode_poles_fa(m, media, domain, lambda_max).empty()) return false;
    ModeScan scan;
    scan_interval(ctx, m, 0.0, lambda_max, false, false, &scan);
    return scan.all_positive;
  };

  const double reach =
      std::sqrt(lambda_max * std::max(1.0, media.n / media.a)) * domain.R;
  int candidate = static_cast<int>(std::ceil(reach));
  for (; candidate + 10 <= special::kMaxOrder; ++candidate) {
    bool ok = true;
    for (int m = candidate; m <= candidate + 10; ++m) {
      if (!pole_free_and_positive(m)) {
        candidate = m;  // restart above the failure
        ok = false;
        break;
      }
    }
    if (ok) return candidate;
  }
  throw std::runtime_error("default_mode_cap: no certified cap below the order limit");
}

FlowLedger sweep(const Media& media, const RadialDomain& domain, int sigma, double lambda_max,
                 const FlowOptions& options) {
  SweepContext ctx = make_context(media, domain, sigma, lambda_max, options);

  FlowLedger ledger;
  ledger.lambda_max = lambda_max;
  ledger.sigma = sigma;
  ledger.mode_cap = options.mode_cap_override >= 0
                        ? options.mode_cap_override
                        : default_mode_cap(media, domain, sigma, lambda_max, options);

  std::vector<ModeScan> scans(ledger.mode_cap + 1);
  parallel_modes(ledger.mode_cap + 1, options.threads,
                 [&](int m) { scans[m] = scan_mode(ctx, m); });

  for (int m = 0; m <= ledger.mode_cap; ++m)
    for (const auto& ev : scans[m].events) {
      ledger.events.push_back(ev);
      if (ev.kind == EventKind::DoublePole) ledger.singular_points += mode_multiplicity(m);
    }
  std::sort(ledger.events.begin(), ledger.events.end(),
            [](const BranchEvent& a, const BranchEvent& b) {
              return a.lambda != b.lambda ? a.lambda < b.lambda : a.mode < b.mode;
            });

  if (options.strict && ledger.singular_points > 0)
    throw ConsistencyError("sweep: singular spectral points present in strict mode");

  // n_minus(0): strictly negative branch values at the origin.
  ledger.n_minus_zero = 0;
  for (int m = 0; m <= ledger.mode_cap; ++m) {
    const DtnValue mu = mu_mode(m, 0.0, media, domain, sigma, options.pole_tol);
    if (!mu.is_pole && mu.value < -options.zero_tol) ledger.n_minus_zero += mode_multiplicity(m);
  }

  const SpectrumTable dirichlet = dirichlet_spectrum(domain, lambda_max);
  const SpectrumTable dirichlet_a = dirichlet_a_spectrum(media, domain, lambda_max);
  verify_pole_law(ctx, ledger, dirichlet, dirichlet_a);
  verify_ledger_identity(ctx, ledger);
  return ledger;
}

}  // namespace dtnflow
