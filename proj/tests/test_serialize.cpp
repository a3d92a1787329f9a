#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cvqkd/serialize.hpp"
#include "support.hpp"

using namespace cvqkd;
using Json = nlohmann::ordered_json;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string c; std::getline(in, c, ',');) out.push_back(c);
  return out;
}

std::vector<std::string> keys(const Json& j) {
  std::vector<std::string> out;
  for (const auto& [k, v] : j.items()) out.push_back(k);
  return out;
}

ThresholdCurve sample_curve(std::string label) {
  ThresholdCurve c{std::move(label), {}};
  c.points.push_back({0.5, 1.0, 0.0, PointStatus::insecure, ""});
  c.points.push_back({0.9, 2.25, 0.1388888888888889, PointStatus::secure, ""});
  c.points.push_back({0.95, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                      PointStatus::divergent, "still positive"});
  c.points.push_back({0.97, std::nan(""), std::nan(""), PointStatus::error, "monotonicity"});
  return c;
}

}  // namespace

TEST_CASE("format_number") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(-2.5) == "-2.5");
  CHECK(format_number(1e300) == "1.0000000000000001e+300");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");

  support::Rng rng(61);
  for (int k = 0; k < 2000; ++k) {
    const double x = std::ldexp(rng.uniform(-1.0, 1.0), rng.integer(-1000, 1000));
    CHECK(std::strtod(format_number(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("key rate report") {
  const auto r = key_rate_report(0.9, {2.0, -1.0, -1.0});
  const auto csv = lines(to_csv(r));
  REQUIRE(csv.size() == 2);
  CHECK(csv[0] == "nu1,nu2,nu3nu4_product,nubar1,nubar2,S_E,S_E_cond,I_AB,chi_EA,R,sigma,sigma_prime,Delta");
  const auto row = cells(csv[1]);
  REQUIRE(row.size() == 13);
  CHECK(std::strtod(row[9].c_str(), nullptr) == r.R);
  CHECK(std::strtod(row[0].c_str(), nullptr) == r.nu1);

  const auto j = to_json(r);
  CHECK(keys(j) == cells(csv[0]));
  const auto back = Json::parse(j.dump());
  CHECK(back["R"].get<double>() == r.R);
  CHECK(back["nu3nu4_product"].get<double>() == r.nu3nu4_product);
  CHECK(back["Delta"].get<double>() == r.Delta);

  KeyRateReport bad;
  bad.R = std::nan("");
  CHECK(to_json(bad)["R"].is_null());
  CHECK(cells(lines(to_csv(bad))[1])[9] == "nan");
}

TEST_CASE("threshold curves") {
  const std::vector<ThresholdCurve> one{sample_curve("collective")};
  const auto csv = lines(to_csv(one));
  REQUIRE(csv.size() == 5);
  CHECK(csv[0] == "T,omega_star,N_star,secure");
  CHECK(csv[1] == "0.5,1,0,insecure");
  CHECK(csv[2] == "0.90000000000000002,2.25,0.1388888888888889,secure");
  CHECK(csv[3] == "0.94999999999999996,inf,inf,divergent");
  CHECK(csv[4] == "0.96999999999999997,nan,nan,error");

  const std::vector<ThresholdCurve> two{sample_curve("epr+"), sample_curve("epr-")};
  const auto csv2 = lines(to_csv(two));
  REQUIRE(csv2.size() == 9);
  CHECK(csv2[0] == "attack,T,omega_star,N_star,secure");
  CHECK(csv2[1] == "epr+,0.5,1,0,insecure");
  CHECK(csv2[5] == "epr-,0.5,1,0,insecure");
  // The two curves differ only in the label column.
  for (std::size_t k = 1; k <= 4; ++k) CHECK(csv2[k].substr(5) == csv2[k + 4].substr(5));

  const auto j = to_json(one.front());
  CHECK(j["attack_class"] == "collective");
  REQUIRE(j["points"].size() == 4);
  CHECK(keys(j["points"][0]) == std::vector<std::string>{"T", "omega_star", "N_star", "secure"});
  CHECK(j["points"][1]["secure"] == "secure");
  CHECK(j["points"][1]["N_star"].get<double>() == 0.1388888888888889);
  CHECK(j["points"][2]["omega_star"].is_null());
  CHECK(j["points"][2]["message"] == "still positive");
  CHECK(j["points"][3]["N_star"].is_null());
}

TEST_CASE("scan results") {
  ScanGrid grid;
  const auto s = optimal_attack_scan(0.8, 2.0, 0.25, kernels::Isa::scalar, &grid);

  const auto summary = lines(to_csv(s));
  REQUIRE(summary.size() == 2);
  CHECK(summary[0] == "T,omega,best_g,best_g_prime,R_min,grid_resolution,grid_points");
  CHECK(cells(summary[1]).back() == std::to_string(grid.points.size()));

  const auto full = lines(to_csv(s, &grid));
  REQUIRE(full.size() == grid.points.size() + 1);
  CHECK(full[0] == "g,g_prime,R,best");
  int best_rows = 0;
  for (std::size_t k = 1; k < full.size(); ++k) {
    const auto row = cells(full[k]);
    REQUIRE(row.size() == 4);
    CHECK(std::strtod(row[2].c_str(), nullptr) == grid.rates[k - 1]);
    if (row[3] == "1") {
      ++best_rows;
      CHECK(std::strtod(row[0].c_str(), nullptr) == s.best_g);
      CHECK(std::strtod(row[1].c_str(), nullptr) == s.best_g_prime);
    }
  }
  CHECK(best_rows == 1);

  const auto j = Json::parse(to_json(s, &grid).dump());
  CHECK(j["R_min"].get<double>() == s.R_min);
  CHECK(j["grid_points"].get<std::size_t>() == grid.points.size());
  REQUIRE(j["grid"].size() == grid.points.size());
  CHECK(j["grid"][0]["R"].get<double>() == grid.rates[0]);
  CHECK_FALSE(to_json(s).contains("grid"));
}
