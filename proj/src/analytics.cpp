#include "wpgg/analytics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace wpgg::analytics {

namespace {

constexpr double kPi = std::numbers::pi;

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

void MeanFieldState::validate() const {
  if (!in_unit(coop_fraction)) throw std::invalid_argument("x(t) must lie in [0, 1]");
  if (!(mean_degree >= 0.0)) throw std::invalid_argument("<k> must be >= 0");
  for (const auto& s : nodes) {
    if (!in_unit(s.coop_fraction) || !in_unit(s.useful_fraction)) {
      throw std::invalid_argument("node fractions must lie in [0, 1]");
    }
    if (!(s.degree >= 0.0) || !(s.received >= 0.0)) {
      throw std::invalid_argument("degree and received count must be >= 0");
    }
  }
}

double defector_payoff_estimate(const MeanFieldState& state, std::size_t i) {
  const auto& s = state.nodes.at(i);
  const double coop_neighbors = s.coop_fraction * s.degree;
  return (1.0 / (coop_neighbors + 1.0)) *
         (s.useful_fraction * coop_neighbors / (state.coop_fraction * state.mean_degree + 1.0));
}

double cooperator_payoff_estimate(const MeanFieldState& state, std::size_t j) {
  const auto& s = state.nodes.at(j);
  return defector_payoff_estimate(state, j) - 1.0 / (s.coop_fraction * s.degree + 1.0);
}

double transition_propensity(const MeanFieldState& state, std::size_t i, std::size_t j) {
  const auto& si = state.nodes.at(i);
  const auto& sj = state.nodes.at(j);
  const double ci = si.coop_fraction * si.degree;
  const double cj = sj.coop_fraction * sj.degree;
  const double scale = 1.0 / (state.coop_fraction * state.mean_degree + 1.0);
  return scale * (sj.useful_fraction * cj / (cj + 1.0) - si.useful_fraction * ci / (ci + 1.0)) -
         1.0 / (cj + 1.0);
}

double lemma1_q(double coop_fraction, double clustering_j, double degree_j, std::size_t received_i,
                std::size_t received_j) {
  if (!in_unit(coop_fraction) || !in_unit(clustering_j)) {
    throw std::invalid_argument("x(t) and c_j must lie in [0, 1]");
  }
  if (!(degree_j >= 1.0)) throw std::invalid_argument("k_j must be >= 1");
  if (received_j > received_i) return coop_fraction;
  const double common = clustering_j * (degree_j - 1.0) / degree_j;
  return coop_fraction * (1.0 - std::pow(common, static_cast<double>(received_j)));
}

void MeetingGeometry::validate() const {
  if (!(rad > 0.0) || !(rad < region)) throw std::invalid_argument("need 0 < rad < R");
  if (!(velocity >= 0.0)) throw std::invalid_argument("velocity must be >= 0");
}

namespace {

// Tanh-sinh quadrature over [a, b] split at the interior points of `breaks`;
// `error` receives the summed error estimate.
template <class F>
double integrate_pieces(F&& f, double a, double b, std::vector<double> breaks, double& error) {
  breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                              [&](double t) { return !(t > a && t < b); }),
               breaks.end());
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  double total = 0.0;
  error = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double err = 0.0;
    total += integrator.integrate(f, breaks[i], breaks[i + 1], 1e-10, &err);
    error += err;
  }
  return total;
}

}  // namespace

MeetingProbabilities meeting_probabilities_quadrature(const MeetingGeometry& geom,
                                                      MeetingIntegrand integrand,
                                                      double tolerance) {
  geom.validate();
  if (geom.velocity == 0.0) return {1.0, 0.0, 0.0};

  const double v = geom.velocity;
  const double rad = geom.rad;

  // Probability that a partner at distance d from the jumped reference lands
  // within rad after its own jump of length v.
  auto landing = [&](double d) {
    if (d == 0.0) return v <= rad ? 1.0 : 0.0;
    const double num = integrand == MeetingIntegrand::LawOfCosines ? v * v + d * d - rad * rad
                                                                   : v * v + rad * rad + d * d;
    return std::acos(std::clamp(num / (2.0 * v * d), -1.0, 1.0)) / kPi;
  };

  // landing() has kinks where d crosses |rad - v| and rad + v; both integrals
  // are split there so every panel sees a smooth integrand.
  const std::array<double, 2> kinks{std::abs(rad - v), rad + v};

  double inner_error = 0.0;
  // Mean of `landing` over the reference's jump direction; symmetric in theta.
  auto retention = [&](double x) {
    auto over_theta = [&](double theta) {
      return landing(std::sqrt(std::max(0.0, v * v + x * x - 2.0 * x * v * std::cos(theta))));
    };
    std::vector<double> breaks;
    for (double k : kinks) {
      if (x > 0.0) {
        const double c = (v * v + x * x - k * k) / (2.0 * x * v);
        if (c > -1.0 && c < 1.0) breaks.push_back(std::acos(c));
      }
    }
    double err = 0.0;
    const double value = integrate_pieces(over_theta, 0.0, kPi, std::move(breaks), err);
    inner_error = std::max(inner_error, err / kPi);
    return value / kPi;
  };

  std::vector<double> radial_breaks{v};
  for (double k : kinks) {
    radial_breaks.push_back(k + v);
    radial_breaks.push_back(std::abs(k - v));
  }

  double err_old = 0.0;
  double err_new = 0.0;
  const double p_old = integrate_pieces(
      [&](double x) { return retention(x) * 2.0 * x / (rad * rad); }, 0.0, rad, radial_breaks,
      err_old);

  // Beyond rad + 2v no partner can come within range.
  const double band = geom.region * geom.region - rad * rad;
  const double upper = std::min(geom.region, rad + 2.0 * v);
  const double p_new = integrate_pieces([&](double x) { return retention(x) * 2.0 * x / band; },
                                        rad, upper, radial_breaks, err_new);

  const double error = std::max(err_old, err_new) + inner_error;
  if (!(error <= tolerance) || !std::isfinite(p_old) || !std::isfinite(p_new)) {
    throw QuadratureError("meeting quadrature did not converge (error estimate " +
                          std::to_string(error) + ")");
  }
  return {std::clamp(p_old, 0.0, 1.0), std::clamp(p_new, 0.0, 1.0), error};
}

NeighborFractions neighbor_fractions(double p_old, double p_new, const MeetingGeometry& geom) {
  geom.validate();
  if (!in_unit(p_old) || !in_unit(p_new)) {
    throw std::invalid_argument("meeting probabilities must lie in [0, 1]");
  }
  const double w_old = p_old * geom.rad * geom.rad;
  const double w_new = p_new * (geom.region * geom.region - geom.rad * geom.rad);
  if (w_old + w_new <= 0.0) throw std::domain_error("both neighbour weights are zero");
  const double f_old = w_old / (w_old + w_new);
  return {f_old, 1.0 - f_old};
}

MeetingSample meeting_monte_carlo(const MeetingGeometry& geom, std::uint64_t samples, Rng& rng) {
  geom.validate();
  if (samples == 0) throw std::invalid_argument("need at least one sample");
  const double v = geom.velocity;
  const double rad2 = geom.rad * geom.rad;
  MeetingSample out;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const double radius = geom.region * std::sqrt(rng.uniform());
    const double phi = 2.0 * kPi * rng.uniform();
    const double ref_dir = 2.0 * kPi * rng.uniform();
    const double own_dir = 2.0 * kPi * rng.uniform();
    const bool was_neighbor = radius * radius <= rad2;
    const double dx = radius * std::cos(phi) + v * std::cos(own_dir) - v * std::cos(ref_dir);
    const double dy = radius * std::sin(phi) + v * std::sin(own_dir) - v * std::sin(ref_dir);
    if (dx * dx + dy * dy > rad2) continue;
    if (was_neighbor) {
      ++out.old_neighbors;
    } else {
      ++out.new_neighbors;
    }
  }
  const auto total = out.old_neighbors + out.new_neighbors;
  if (total == 0) throw std::domain_error("no post-jump neighbours sampled");
  out.fractions.f_old = static_cast<double>(out.old_neighbors) / static_cast<double>(total);
  out.fractions.f_new = static_cast<double>(out.new_neighbors) / static_cast<double>(total);
  return out;
}

std::vector<MeetingRow> meeting_table(double rad, double region, std::span<const double> velocities,
                                      std::uint64_t samples, std::uint64_t seed) {
  std::vector<MeetingRow> rows;
  for (std::size_t k = 0; k < velocities.size(); ++k) {
    const MeetingGeometry geom{velocities[k], rad, region};
    const auto p = meeting_probabilities_quadrature(geom);
    const auto f = neighbor_fractions(p.p_old, p.p_new, geom);
    rows.push_back({geom.velocity, f.f_old, f.f_new, "quadrature"});
    Rng rng(derive_seed(seed, fnv1a64("meeting"), k));
    const auto mc = meeting_monte_carlo(geom, samples, rng);
    rows.push_back({geom.velocity, mc.fractions.f_old, mc.fractions.f_new, "monte_carlo"});
  }
  return rows;
}

}  // namespace wpgg::analytics
