#include "conntraj/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "conntraj/error.hpp"

namespace conntraj {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::InvalidInput, "scenario: " + message);
}

}  // namespace

Scenario::Scenario(ScenarioParams params) : params_(std::move(params)) {
  require(!params_.gbs.empty(), "at least one GBS is required");
  for (std::size_t i = 0; i < params_.gbs.size(); ++i)
    require(is_finite(params_.gbs[i]), "gbs[" + std::to_string(i) + "] is not finite");
  require(is_finite(params_.u0), "u0 is not finite");
  require(is_finite(params_.uf), "uF is not finite");
  require(std::isfinite(params_.uav_altitude) && std::isfinite(params_.gbs_altitude),
          "altitudes must be finite");
  require(params_.gbs_altitude >= 0.0, "HG must be >= 0");
  require(params_.uav_altitude > params_.gbs_altitude, "H must exceed HG");
  require(std::isfinite(params_.vmax) && params_.vmax > 0.0, "vmax must be > 0");
  require(std::isfinite(params_.gamma0_db), "gamma0_db must be finite");
}

CoverageRadius::CoverageRadius(double meters) : meters_(meters) {
  if (!std::isfinite(meters) || meters <= 0.0)
    throw Error(ErrorCode::InvalidInput,
                "coverage radius must be finite and positive, got " + std::to_string(meters));
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

CoverageRadius compute_coverage_radius(const Scenario& s, SnrTarget target) {
  if (!std::isfinite(target.rho_bar_db))
    throw Error(ErrorCode::InvalidInput, "SNR target must be finite");
  // gamma0/rho evaluated as a single power keeps precision for large gamma0.
  const double ratio = db_to_linear(s.gamma0_db() - target.rho_bar_db);
  const double dh = s.height_gap();
  const double d2 = ratio - dh * dh;
  if (!(d2 > 0.0) || !std::isfinite(d2))
    throw Error(ErrorCode::UnattainableSnr,
                "SNR target " + std::to_string(target.rho_bar_db) +
                    " dB exceeds the SNR directly above a GBS (" +
                    std::to_string(snr_at_distance(s, 0.0)) + " dB)");
  return CoverageRadius(std::sqrt(d2));
}

double snr_at_distance(const Scenario& s, double horizontal_m) {
  const double dh = s.height_gap();
  return s.gamma0_db() - linear_to_db(dh * dh + horizontal_m * horizontal_m);
}

double snr_target_covering(const Scenario& s, double horizontal_m) {
  double rho = snr_at_distance(s, horizontal_m);
  if (!(horizontal_m > 0.0)) return rho;
  auto short_of = [&](double r) {
    try {
      return compute_coverage_radius(s, SnrTarget{r}).meters() < horizontal_m;
    } catch (const Error&) {
      return true;
    }
  };
  const double start = rho;
  double step = 1e-16 * std::max(1.0, std::abs(rho));
  for (int k = 0; k < 64 && short_of(rho); ++k, step *= 2.0) rho = start - step;
  return rho;
}

double snr_at(const Scenario& s, Vec2 u) { return snr_at_distance(s, nearest_gbs(s, u).distance); }

NearestGbs nearest_gbs(const Scenario& s, Vec2 u) {
  NearestGbs best{0, distance(u, s.gbs(0))};
  for (std::size_t m = 1; m < s.gbs_count(); ++m) {
    const double d = distance(u, s.gbs()[m]);
    if (d < best.distance) best = {m, d};
  }
  return best;
}

}  // namespace conntraj
