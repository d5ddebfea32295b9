#include "cohprobe/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

namespace cohprobe::quad {
namespace {

// 21-point Kronrod abscissae (non-negative half, descending) and weights, with
// the embedded 10-point Gauss rule on the odd indices.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr int kNodes = 21;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Full 21-node rule on [-1, 1]: abscissa, Kronrod weight, Gauss weight (0 when
// the node is not a Gauss node).
struct Node {
  double x;
  double wk;
  double wg;
};

constexpr std::array<Node, kNodes> make_nodes() {
  std::array<Node, kNodes> nodes{};
  for (int i = 0; i < 10; ++i) {
    const double wg = (i % 2 == 1) ? kWg[static_cast<std::size_t>(i / 2)] : 0.0;
    nodes[static_cast<std::size_t>(i)] = {-kXgk[static_cast<std::size_t>(i)],
                                          kWgk[static_cast<std::size_t>(i)], wg};
    nodes[static_cast<std::size_t>(20 - i)] = {kXgk[static_cast<std::size_t>(i)],
                                               kWgk[static_cast<std::size_t>(i)], wg};
  }
  nodes[10] = {0.0, kWgk[10], 0.0};
  return nodes;
}

constexpr std::array<Node, kNodes> kNodes21 = make_nodes();

double tolerance_for(const QuadratureSpec& spec, double value) {
  return std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
}

struct Interval {
  double a;
  double b;
  double value;
  double err;
};

Interval gk21(const Integrand1d& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, kNodes> fv{};
  double kronrod = 0.0;
  double gauss = 0.0;
  double resabs = 0.0;
  for (int i = 0; i < kNodes; ++i) {
    const Node& n = kNodes21[static_cast<std::size_t>(i)];
    const double v = f(center + half * n.x);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "integrand is not finite at x = " << center + half * n.x;
      throw Error(ErrorKind::Numerical, os.str());
    }
    fv[static_cast<std::size_t>(i)] = v;
    kronrod += n.wk * v;
    gauss += n.wg * v;
    resabs += n.wk * std::abs(v);
  }
  const double mean = 0.5 * kronrod;
  double resasc = 0.0;
  for (int i = 0; i < kNodes; ++i) {
    resasc += kNodes21[static_cast<std::size_t>(i)].wk * std::abs(fv[static_cast<std::size_t>(i)] - mean);
  }
  resasc *= std::abs(half);
  resabs *= std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * resabs, err);
  }
  return {a, b, kronrod * half, err};
}

struct Rect {
  double ax, bx, ay, by;
  double value;
  double err;
  bool split_x;
};

Rect gk21_2d(const Integrand2d& f, double ax, double bx, double ay, double by) {
  const double cx = 0.5 * (ax + bx);
  const double hx = 0.5 * (bx - ax);
  const double cy = 0.5 * (ay + by);
  const double hy = 0.5 * (by - ay);
  std::array<double, kNodes> ys{};
  for (int j = 0; j < kNodes; ++j) ys[static_cast<std::size_t>(j)] = cy + hy * kNodes21[static_cast<std::size_t>(j)].x;

  double kk = 0.0;  // Kronrod x Kronrod
  double gk = 0.0;  // Gauss in x, Kronrod in y
  double kg = 0.0;  // Kronrod in x, Gauss in y
  double abs_sum = 0.0;
  for (int i = 0; i < kNodes; ++i) {
    const Node& nx = kNodes21[static_cast<std::size_t>(i)];
    const double x = cx + hx * nx.x;
    double row_k = 0.0;
    double row_g = 0.0;
    double row_abs = 0.0;
    for (int j = 0; j < kNodes; ++j) {
      const Node& ny = kNodes21[static_cast<std::size_t>(j)];
      const double v = f(x, ys[static_cast<std::size_t>(j)]);
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "integrand is not finite at (" << x << ", " << ys[static_cast<std::size_t>(j)] << ")";
        throw Error(ErrorKind::Numerical, os.str());
      }
      row_k += ny.wk * v;
      row_g += ny.wg * v;
      row_abs += ny.wk * std::abs(v);
    }
    kk += nx.wk * row_k;
    gk += nx.wg * row_k;
    kg += nx.wk * row_g;
    abs_sum += nx.wk * row_abs;
  }
  const double area = std::abs(hx * hy);
  const double err_x = std::abs(kk - gk) * area;
  const double err_y = std::abs(kk - kg) * area;
  const double err = std::max(err_x + err_y, 50.0 * kEps * abs_sum * area);
  return {ax, bx, ay, by, kk * hx * hy, err, err_x >= err_y};
}

template <class Cell>
struct WorstFirst {
  bool operator()(const Cell& l, const Cell& r) const { return l.err < r.err; }
};

// Sum in a fixed order so the result does not depend on heap internals.
template <class Cell, class Key>
QuadratureResult collect(std::vector<Cell> cells, Key key, int subdivisions) {
  std::sort(cells.begin(), cells.end(), [&](const Cell& l, const Cell& r) { return key(l) < key(r); });
  QuadratureResult out;
  for (const Cell& c : cells) {
    out.value += c.value;
    out.err_estimate += c.err;
  }
  out.subdivisions = subdivisions;
  return out;
}

template <class Cell, class Evaluate, class Split, class Key>
QuadratureResult adaptive(Cell first, Evaluate evaluate, Split split, Key key,
                          const QuadratureSpec& spec, const char* what) {
  std::priority_queue<Cell, std::vector<Cell>, WorstFirst<Cell>> heap;
  double value = first.value;
  double err = first.err;
  heap.push(first);
  int subdivisions = 0;
  while (err > tolerance_for(spec, value)) {
    if (subdivisions >= spec.max_subdivisions) {
      std::vector<Cell> cells;
      while (!heap.empty()) {
        cells.push_back(heap.top());
        heap.pop();
      }
      QuadratureResult best = collect(std::move(cells), key, subdivisions);
      std::ostringstream os;
      os << what << ": tolerance not reached after " << subdivisions
         << " subdivisions (estimate " << best.value << ", error " << best.err_estimate << ")";
      throw ToleranceNotReached(os.str(), best);
    }
    Cell worst = heap.top();
    heap.pop();
    auto [lo, hi] = split(worst, evaluate);
    value += lo.value + hi.value - worst.value;
    err += lo.err + hi.err - worst.err;
    heap.push(lo);
    heap.push(hi);
    ++subdivisions;
  }
  std::vector<Cell> cells;
  cells.reserve(heap.size());
  while (!heap.empty()) {
    cells.push_back(heap.top());
    heap.pop();
  }
  return collect(std::move(cells), key, subdivisions);
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "quadrature tolerances must be positive");
  }
  if (max_subdivisions < 1) {
    throw Error(ErrorKind::InvalidArgument, "max_subdivisions must be at least 1");
  }
}

QuadratureResult integrate_1d(const Integrand1d& f, double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorKind::InvalidArgument, "integration bounds must be finite");
  }
  if (a == b) return {};
  auto evaluate = [&f](double lo, double hi) { return gk21(f, lo, hi); };
  auto split = [](const Interval& c, auto& eval) {
    const double mid = 0.5 * (c.a + c.b);
    return std::pair{eval(c.a, mid), eval(mid, c.b)};
  };
  auto key = [](const Interval& c) { return c.a; };
  return adaptive(evaluate(a, b), evaluate, split, key, spec, "integrate_1d");
}

QuadratureResult integrate_2d(const Integrand2d& f, double ax, double bx, double ay, double by,
                              const QuadratureSpec& spec) {
  spec.validate();
  if (!std::isfinite(ax) || !std::isfinite(bx) || !std::isfinite(ay) || !std::isfinite(by)) {
    throw Error(ErrorKind::InvalidArgument, "integration bounds must be finite");
  }
  if (ax == bx || ay == by) return {};
  auto evaluate = [&f](double x0, double x1, double y0, double y1) {
    return gk21_2d(f, x0, x1, y0, y1);
  };
  auto split = [](const Rect& c, auto& eval) {
    if (c.split_x) {
      const double mid = 0.5 * (c.ax + c.bx);
      return std::pair{eval(c.ax, mid, c.ay, c.by), eval(mid, c.bx, c.ay, c.by)};
    }
    const double mid = 0.5 * (c.ay + c.by);
    return std::pair{eval(c.ax, c.bx, c.ay, mid), eval(c.ax, c.bx, mid, c.by)};
  };
  auto key = [](const Rect& c) { return std::pair{c.ax, c.ay}; };
  return adaptive(evaluate(ax, bx, ay, by), evaluate, split, key, spec, "integrate_2d");
}

QuadratureResult integrate_2d(const Integrand2d& f, const QuadratureSpec& spec) {
  constexpr double pi = std::numbers::pi;
  return integrate_2d(f, -pi, pi, -pi, pi, spec);
}

}  // namespace cohprobe::quad
