#include "cohprobe/discord.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "cohprobe/optimize.hpp"
#include "cohprobe/parallel.hpp"
#include "cohprobe/tfim.hpp"

namespace cohprobe::discord {
namespace {

using quantum::Complex;
using std::numbers::pi;

// Entropy of a 2x2 Hermitian block [[d0, o], [o*, d1]] scaled by its trace p,
// i.e. p * S(block / p). Returns 0 for empty branches.
double weighted_branch_entropy(double d0, double d1, double off_abs) {
  const double p = d0 + d1;
  if (!(p > 1e-15)) return 0.0;
  const double half_gap = std::sqrt(0.25 * (d0 - d1) * (d0 - d1) + off_abs * off_abs);
  const std::array<double, 2> ev{(0.5 * p + half_gap) / p, (0.5 * p - half_gap) / p};
  double s = 0.0;
  for (double v : ev) {
    if (v > 0.0) s -= v * std::log2(v);
  }
  return p * s;
}

// Measured conditional entropy for the X-state route, with the azimuth set to
// its optimum so both outcomes carry off-diagonal weight (|z1| + |z2|) sin(theta) / 2.
double x_conditional_entropy(const quantum::Matrix& m, double theta) {
  const double c2 = std::cos(0.5 * theta) * std::cos(0.5 * theta);
  const double s2 = 1.0 - c2;
  const double off = 0.5 * std::sin(theta) * (std::abs(m(0, 3)) + std::abs(m(1, 2)));
  const double r00 = m(0, 0).real();
  const double r11 = m(1, 1).real();
  const double r22 = m(2, 2).real();
  const double r33 = m(3, 3).real();
  return weighted_branch_entropy(c2 * r00 + s2 * r11, c2 * r22 + s2 * r33, off) +
         weighted_branch_entropy(s2 * r00 + c2 * r11, s2 * r22 + c2 * r33, off);
}

// Measured conditional entropy for an arbitrary two-qubit state and a
// projective measurement of qubit B along the Bloch direction (theta, phi).
double generic_conditional_entropy(const quantum::Matrix& m, double theta, double phi) {
  const Complex phase = std::polar(1.0, phi);
  const std::array<std::array<Complex, 2>, 2> basis{{
      {Complex{std::cos(0.5 * theta), 0.0}, phase * std::sin(0.5 * theta)},
      {Complex{std::sin(0.5 * theta), 0.0}, -phase * std::cos(0.5 * theta)},
  }};
  double total = 0.0;
  for (const auto& n : basis) {
    // Unnormalized conditional state of A: <n|_B rho |n>_B.
    std::array<std::array<Complex, 2>, 2> a{};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        Complex acc{0.0, 0.0};
        for (int k = 0; k < 2; ++k) {
          for (int l = 0; l < 2; ++l) acc += std::conj(n[k]) * n[l] * m(2 * i + k, 2 * j + l);
        }
        a[i][j] = acc;
      }
    }
    total += weighted_branch_entropy(a[0][0].real(), a[1][1].real(), std::abs(a[0][1]));
  }
  return total;
}

double entropy_b(const quantum::DensityMatrix& rho) {
  const auto& m = rho.matrix();
  const double off = std::abs(m(0, 1) + m(2, 3));
  return weighted_branch_entropy(m(0, 0).real() + m(2, 2).real(), m(1, 1).real() + m(3, 3).real(),
                                 off);
}

double entropy_a(const quantum::DensityMatrix& rho) {
  const auto& m = rho.matrix();
  const double off = std::abs(m(0, 2) + m(1, 3));
  return weighted_branch_entropy(m(0, 0).real() + m(1, 1).real(), m(2, 2).real() + m(3, 3).real(),
                                 off);
}

double discord_from_conditional(const quantum::DensityMatrix& rho, double min_conditional) {
  const double d = entropy_b(rho) - quantum::von_neumann_entropy(rho) + min_conditional;
  return std::max(d, 0.0);
}

}  // namespace

XState::XState(quantum::DensityMatrix rho) : rho_(std::move(rho)) {
  if (rho_.dim() != 4) throw Error(ErrorKind::InvalidArgument, "an X state is a 4x4 matrix");
  const auto& m = rho_.matrix();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j || i + j == 3) continue;
      if (std::abs(m(i, j)) > kXPatternTol) {
        std::ostringstream os;
        os << "entry (" << i << ", " << j << ") = " << std::abs(m(i, j)) << " breaks the X pattern";
        throw Error(ErrorKind::InvalidArgument, os.str());
      }
    }
  }
}

std::pair<double, double> marginal_entropies(const quantum::DensityMatrix& rho) {
  if (rho.dim() != 4) throw Error(ErrorKind::InvalidArgument, "marginals need a two-qubit state");
  return {entropy_a(rho), entropy_b(rho)};
}

double mutual_information(const quantum::DensityMatrix& rho) {
  const auto [sa, sb] = marginal_entropies(rho);
  return sa + sb - quantum::von_neumann_entropy(rho);
}

double discord_analytic(const XState& x) {
  const auto& m = x.density_matrix().matrix();
  // The conditional entropy is symmetric under theta -> pi - theta.
  constexpr int kScan = 512;
  const double h = 0.5 * pi / kScan;
  double best = std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i <= kScan; ++i) {
    const double v = x_conditional_entropy(m, i * h);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  const double lo = std::max(0.0, (best_i - 1) * h);
  const double hi = std::min(0.5 * pi, (best_i + 1) * h);
  const double theta = optimize::golden_section_max(
      [&m](double t) { return -x_conditional_entropy(m, t); }, lo, hi, 1e-10);
  best = std::min({best, x_conditional_entropy(m, theta), x_conditional_entropy(m, 0.0),
                   x_conditional_entropy(m, 0.5 * pi)});
  return discord_from_conditional(x.density_matrix(), best);
}

double discord_bruteforce(const XState& x, int angle_grid_n) {
  return discord_general(x.density_matrix(), angle_grid_n);
}

double discord_general(const quantum::DensityMatrix& rho, int angle_grid_n) {
  if (rho.dim() != 4) throw Error(ErrorKind::InvalidArgument, "discord needs a two-qubit state");
  if (angle_grid_n < 181) {
    throw Error(ErrorKind::InvalidArgument, "brute-force discord needs angle_grid_n >= 181");
  }
  const auto& m = rho.matrix();
  // (theta, phi) and (pi - theta, phi + pi) give the same measurement, so phi
  // only needs [0, pi).
  const int n_theta = angle_grid_n;
  const int n_phi = (angle_grid_n + 1) / 2;
  const double d_theta = pi / (n_theta - 1);
  const double d_phi = pi / n_phi;
  double best = std::numeric_limits<double>::infinity();
  double bt = 0.0;
  double bp = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    for (int j = 0; j < n_phi; ++j) {
      const double t = i * d_theta;
      const double p = j * d_phi;
      const double v = generic_conditional_entropy(m, t, p);
      if (v < best) {
        best = v;
        bt = t;
        bp = p;
      }
    }
  }
  // Compass search from the best grid cell.
  double step_t = d_theta;
  double step_p = d_phi;
  while (step_t > 1e-11 || step_p > 1e-11) {
    bool moved = false;
    const std::array<std::pair<double, double>, 4> moves{
        {{step_t, 0.0}, {-step_t, 0.0}, {0.0, step_p}, {0.0, -step_p}}};
    for (const auto& [dt, dp] : moves) {
      const double v = generic_conditional_entropy(m, bt + dt, bp + dp);
      if (v < best) {
        best = v;
        bt += dt;
        bp += dp;
        moved = true;
        break;
      }
    }
    if (!moved) {
      step_t *= 0.5;
      step_p *= 0.5;
    }
  }
  return discord_from_conditional(rho, best);
}

DiscordValue discord(const XState& x, const DiscordOptions& options) {
  const double analytic = discord_analytic(x);
  if (!options.verify) return {analytic, false};
  const double brute = discord_bruteforce(x, options.angle_grid_n);
  if (std::abs(analytic - brute) > kFallbackTol) return {brute, true};
  return {analytic, false};
}

double ising_thermal_discord(double lambda, double kBT, const quad::QuadratureSpec& spec,
                             const DiscordOptions& options) {
  XState x(quantum::reconstruct_two_site(tfim::thermal_two_site(lambda, kBT, spec)));
  return discord(x, options).value;
}

std::vector<DiscordMaximum> discord_max_locus(const std::vector<double>& kBT_list,
                                              const LocusOptions& options) {
  for (double t : kBT_list) {
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "locus temperatures must be positive");
  }
  const std::vector<double> grid =
      optimize::uniform_grid(options.lambda_min, options.lambda_max, options.lambda_step);
  std::vector<DiscordMaximum> out(kBT_list.size());
  parallel::parallel_for(kBT_list.size(), [&](std::size_t k) {
    const double kBT = kBT_list[k];
    auto f = [&](double lambda) {
      return ising_thermal_discord(lambda, kBT, options.quadrature, options.discord);
    };
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid[i]);
    const optimize::GridMaximum g = optimize::grid_argmax(grid, values);
    DiscordMaximum m{kBT, g.x, g.value, g.at_boundary, g.tie};
    if (!g.at_boundary && !g.tie) {
      const double x = optimize::golden_section_max(f, grid[g.index - 1], grid[g.index + 1],
                                                    options.refine_tol);
      const double v = f(x);
      if (v >= g.value) {
        m.lambda_at_max = x;
        m.discord_max = v;
      }
    }
    out[k] = m;
  });
  return out;
}

}  // namespace cohprobe::discord
