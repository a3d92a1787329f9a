#include "cvqkd/security.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

namespace cvqkd {

namespace {

void require_transmissivity(double T, const char* where) {
  if (!(T > 0.0 && T < 1.0)) {
    throw InvalidArgument(std::string(where) + ": transmissivity must lie in (0, 1)");
  }
}

void require_t_grid(std::span<const double> t_grid) {
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    require_transmissivity(t_grid[i], "threshold_curve");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) {
      throw InvalidArgument("threshold_curve: transmissivity grid must be strictly increasing");
    }
  }
}

ThresholdPoint evaluate_point(double T, const std::function<ThresholdResult()>& solve) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  ThresholdPoint pt;
  pt.T = T;
  try {
    const auto r = solve();
    if (r.status == ThresholdResult::Status::found) {
      pt.status = PointStatus::secure;
      pt.omega_star = r.omega_star;
      pt.N_star = excess_noise(T, r.omega_star);
    } else {
      pt.status = PointStatus::insecure;
      pt.omega_star = 1.0;
      pt.N_star = 0.0;
    }
  } catch (const DivergentThreshold& e) {
    pt.status = PointStatus::divergent;
    pt.omega_star = inf;
    pt.N_star = inf;
    pt.message = e.what();
  } catch (const std::exception& e) {
    pt.status = PointStatus::error;
    pt.omega_star = nan;
    pt.N_star = nan;
    pt.message = e.what();
  }
  return pt;
}

ThresholdCurve build_curve(std::string name, std::span<const double> t_grid, unsigned threads,
                           const std::function<ThresholdResult(double)>& solve) {
  require_t_grid(t_grid);
  ThresholdCurve curve;
  curve.attack_class = std::move(name);
  curve.points.resize(t_grid.size());
  parallel_for(t_grid.size(), threads, [&](std::size_t i) {
    const double T = t_grid[i];
    curve.points[i] = evaluate_point(T, [&] { return solve(T); });
  });
  return curve;
}

}  // namespace

double excess_noise(double T, double omega) {
  if (!(T > 0.0 && T <= 1.0)) throw InvalidArgument("excess_noise: transmissivity must lie in (0, 1]");
  if (!(omega >= 1.0)) throw InvalidArgument("excess_noise: omega must be >= 1");
  return (T - 1.0 + (1.0 - T) * omega) / T;
}

double omega_from_excess(double T, double N) {
  if (!(T > 0.0 && T < 1.0)) throw InvalidArgument("omega_from_excess: transmissivity must lie in (0, 1)");
  if (!(N >= 0.0)) throw InvalidArgument("omega_from_excess: excess noise must be >= 0");
  return (N * T + 1.0 - T) / (1.0 - T);
}

ThresholdResult threshold_omega(const std::function<double(double)>& rate) {
  const double r1 = rate(1.0);
  if (!(r1 > 0.0)) return {ThresholdResult::Status::no_secure_region, 1.0};

  double lo = 1.0;
  double r_lo = r1;
  double hi = 2.0;
  for (;;) {
    const double r_hi = rate(hi);
    if (!(r_hi < r_lo)) {
      std::ostringstream os;
      os.precision(17);
      os << "threshold_omega: rate not decreasing in omega (R(" << lo << ") = " << r_lo << ", R(" << hi
         << ") = " << r_hi << ")";
      throw MonotonicityError(os.str());
    }
    if (r_hi <= 0.0) break;
    if (hi >= kThresholdOmegaCap) {
      throw DivergentThreshold("threshold_omega: rate still positive at omega = 2^16");
    }
    lo = hi;
    r_lo = r_hi;
    hi *= 2.0;
  }

  while (hi - lo > kThresholdBracketWidth) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at double resolution
    const double r = rate(mid);
    if (r > 0.0) {
      lo = mid;
    } else if (r < 0.0) {
      hi = mid;
    } else {
      return {ThresholdResult::Status::found, mid};
    }
  }
  const double omega_star = 0.5 * (lo + hi);
  const double residual = rate(omega_star);
  if (!(std::abs(residual) <= kThresholdResidual)) {
    throw NumericalError("threshold_omega: residual |R| = " + std::to_string(residual) + " above tolerance");
  }
  return {ThresholdResult::Status::found, omega_star};
}

ThresholdResult threshold_omega(double T, const AttackClass& cls) {
  require_transmissivity(T, "threshold_omega");
  if (cls.label == AttackLabel::custom) {
    throw InvalidArgument("threshold_omega: custom correlations do not define a curve in omega");
  }
  return threshold_omega([&](double omega) { return keyrate_asymptotic(T, attack_from_class(cls, omega)); });
}

std::string_view to_string(PointStatus status) {
  switch (status) {
    case PointStatus::secure:
      return "secure";
    case PointStatus::insecure:
      return "insecure";
    case PointStatus::divergent:
      return "divergent";
    case PointStatus::error:
      return "error";
  }
  return "unknown";
}

ThresholdCurve threshold_curve(const AttackClass& cls, std::span<const double> t_grid, unsigned threads) {
  if (cls.label == AttackLabel::custom) {
    throw InvalidArgument("threshold_curve: custom correlations do not define a curve in omega");
  }
  return build_curve(std::string(to_string(cls.label)), t_grid, threads,
                     [&](double T) { return threshold_omega(T, cls); });
}

ThresholdCurve oneway_threshold_curve(std::span<const double> t_grid, unsigned threads) {
  return build_curve("oneway", t_grid, threads, [](double T) {
    return threshold_omega([T](double omega) { return oneway_keyrate(T, omega); });
  });
}

double oneway_keyrate_at(double T, double omega, double mu) {
  require_transmissivity(T, "oneway_keyrate");
  if (!(omega >= 1.0)) throw InvalidArgument("oneway_keyrate: omega must be >= 1");
  if (!(mu > 0.0)) throw InvalidArgument("oneway_keyrate: modulation must be positive");
  using CM = CovarianceMatrix<Extended>;
  // Modes: A, A' (Alice's EPR), E, e (Eve's thermal purification).
  constexpr std::size_t kA = 0, kAp = 1, kE = 2, kModes = 4;
  auto state = tensor(CM::two_mode_squeezed(Extended(mu) + 1), CM::two_mode_squeezed(Extended(omega)));
  state = apply_symplectic(beam_splitter<Extended>(T, kAp, kE, kModes), state);
  const auto ab = partial_trace(state, {kA, kAp});
  const auto bob_given_alice = heterodyne_condition(ab, {0});

  const double s_ab = von_neumann_entropy(ab);
  const double s_cond = von_neumann_entropy(bob_given_alice);
  const double vq = to_double(ab(2, 2));
  const double vp = to_double(ab(3, 3));
  const double vq_cond = to_double(bob_given_alice(0, 0));
  const double vp_cond = to_double(bob_given_alice(1, 1));
  const double mutual = 0.5 * std::log2((vq + 1.0) / (vq_cond + 1.0)) + 0.5 * std::log2((vp + 1.0) / (vp_cond + 1.0));
  return mutual - (s_ab - s_cond);
}

double oneway_keyrate(double T, double omega) { return oneway_keyrate_at(T, omega, kOneWayModulation); }

ScanResult optimal_attack_scan(double T, double omega, double step, kernels::Isa isa, ScanGrid* full_grid) {
  require_transmissivity(T, "optimal_attack_scan");
  auto points = physical_region_grid(omega, step);
  std::vector<double> g(points.size());
  std::vector<double> gp(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    g[i] = points[i].g;
    gp[i] = points[i].g_prime;
  }
  std::vector<double> rates(points.size());
  kernels::keyrate_batch(T, omega, g, gp, rates, isa);

  ScanResult out;
  out.T = T;
  out.omega = omega;
  out.grid_resolution = step;
  out.grid_points = points.size();
  std::size_t best = 0;
  for (std::size_t i = 1; i < rates.size(); ++i) {
    // Row-major ascending order: the first strict minimum is also the
    // smallest (g, g') among ties.
    if (rates[i] < rates[best]) best = i;
  }
  out.best_g = g[best];
  out.best_g_prime = gp[best];
  out.R_min = rates[best];
  if (full_grid != nullptr) {
    full_grid->points = std::move(points);
    full_grid->rates = std::move(rates);
  }
  return out;
}

std::vector<RelativeVariation> relative_variations(double T, double mu, std::span<const double> omega_grid) {
  require_transmissivity(T, "relative_variations");
  if (!(mu >= 1e3)) throw InvalidArgument("relative_variations: modulation must be >= 1e3");
  std::vector<RelativeVariation> out;
  out.reserve(omega_grid.size());
  for (double omega : omega_grid) {
    if (!(omega >= 1.0)) throw InvalidArgument("relative_variations: omega must be >= 1");
    const auto optimal = attack_from_class(AttackLabel::sep_sym_neg, omega);
    const auto collective = attack_from_class(AttackLabel::collective, omega);
    RelativeVariation v;
    v.omega = omega;
    v.I_AB = mutual_information_asymptotic(T, optimal, mu).I_AB;
    v.I_c = mutual_information_asymptotic(T, collective, mu).I_AB;
    v.chi_EA = holevo_asymptotic(T, optimal, mu);
    v.chi_c = holevo_asymptotic(T, collective, mu);
    v.valid = v.I_c > 0.0 && v.chi_c > 0.0;
    if (v.valid) {
      v.dI_AB = (v.I_AB - v.I_c) / v.I_c;
      v.dchi_EA = (v.chi_EA - v.chi_c) / v.chi_c;
    } else {
      v.dI_AB = std::numeric_limits<double>::quiet_NaN();
      v.dchi_EA = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(v);
  }
  return out;
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw InvalidArgument("uniform_grid: step must be positive");
  if (!(hi >= lo)) throw InvalidArgument("uniform_grid: upper end below lower end");
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  out.reserve(n + 1);
  // For steps of the form 1/k with lo on the lattice, (j + i)/k is the
  // correctly rounded decimal (0.84 rather than 0.3 + 54 * 0.01).
  const double k = std::round(1.0 / step);
  const double j = std::round(lo * k);
  const bool decimal = k >= 1.0 && std::abs(k * step - 1.0) < 1e-12 && std::abs(lo * k - j) < 1e-9;
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i);
    out.push_back(decimal ? (j + x) / k : lo + x * step);
  }
  return out;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace cvqkd
