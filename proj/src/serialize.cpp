#include "cvqkd/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace cvqkd {

namespace {

using Json = nlohmann::ordered_json;

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

void append_row(std::string& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out += ',';
    out += c;
    first = false;
  }
  out += '\n';
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json to_json(const KeyRateReport& r) {
  Json j;
  j["nu1"] = number(r.nu1);
  j["nu2"] = number(r.nu2);
  j["nu3nu4_product"] = number(r.nu3nu4_product);
  j["nubar1"] = number(r.nubar1);
  j["nubar2"] = number(r.nubar2);
  j["S_E"] = number(r.S_E);
  j["S_E_cond"] = number(r.S_E_cond);
  j["I_AB"] = number(r.I_AB);
  j["chi_EA"] = number(r.chi_EA);
  j["R"] = number(r.R);
  j["sigma"] = number(r.sigma);
  j["sigma_prime"] = number(r.sigma_prime);
  j["Delta"] = number(r.Delta);
  return j;
}

std::string to_csv(const KeyRateReport& r) {
  std::string out = "nu1,nu2,nu3nu4_product,nubar1,nubar2,S_E,S_E_cond,I_AB,chi_EA,R,sigma,sigma_prime,Delta\n";
  append_row(out, {format_number(r.nu1), format_number(r.nu2), format_number(r.nu3nu4_product),
                   format_number(r.nubar1), format_number(r.nubar2), format_number(r.S_E), format_number(r.S_E_cond),
                   format_number(r.I_AB), format_number(r.chi_EA), format_number(r.R), format_number(r.sigma),
                   format_number(r.sigma_prime), format_number(r.Delta)});
  return out;
}

Json to_json(const ThresholdCurve& c) {
  Json points = Json::array();
  for (const auto& p : c.points) {
    Json jp;
    jp["T"] = number(p.T);
    jp["omega_star"] = number(p.omega_star);
    jp["N_star"] = number(p.N_star);
    jp["secure"] = std::string(to_string(p.status));
    if (!p.message.empty()) jp["message"] = p.message;
    points.push_back(std::move(jp));
  }
  Json j;
  j["attack_class"] = c.attack_class;
  j["points"] = std::move(points);
  return j;
}

std::string to_csv(std::span<const ThresholdCurve> curves) {
  const bool labelled = curves.size() > 1;
  std::string out = labelled ? "attack,T,omega_star,N_star,secure\n" : "T,omega_star,N_star,secure\n";
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      const std::string row = format_number(p.T) + ',' + format_number(p.omega_star) + ',' +
                              format_number(p.N_star) + ',' + std::string(to_string(p.status));
      if (labelled) out += c.attack_class + ',';
      out += row;
      out += '\n';
    }
  }
  return out;
}

Json to_json(const ScanResult& s, const ScanGrid* grid) {
  Json j;
  j["T"] = number(s.T);
  j["omega"] = number(s.omega);
  j["best_g"] = number(s.best_g);
  j["best_g_prime"] = number(s.best_g_prime);
  j["R_min"] = number(s.R_min);
  j["grid_resolution"] = number(s.grid_resolution);
  j["grid_points"] = s.grid_points;
  if (grid != nullptr) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < grid->points.size(); ++i) {
      Json row;
      row["g"] = number(grid->points[i].g);
      row["g_prime"] = number(grid->points[i].g_prime);
      row["R"] = number(grid->rates[i]);
      rows.push_back(std::move(row));
    }
    j["grid"] = std::move(rows);
  }
  return j;
}

std::string to_csv(const ScanResult& s, const ScanGrid* grid) {
  std::string out;
  if (grid == nullptr) {
    out = "T,omega,best_g,best_g_prime,R_min,grid_resolution,grid_points\n";
    append_row(out, {format_number(s.T), format_number(s.omega), format_number(s.best_g),
                     format_number(s.best_g_prime), format_number(s.R_min), format_number(s.grid_resolution),
                     std::to_string(s.grid_points)});
    return out;
  }
  out = "g,g_prime,R,best\n";
  for (std::size_t i = 0; i < grid->points.size(); ++i) {
    const auto& p = grid->points[i];
    const bool best = p.g == s.best_g && p.g_prime == s.best_g_prime;
    append_row(out, {format_number(p.g), format_number(p.g_prime), format_number(grid->rates[i]), best ? "1" : "0"});
  }
  return out;
}

}  // namespace cvqkd
