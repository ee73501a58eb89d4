#include "lea/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

namespace lea {

namespace {

// Kronrod abscissae (descending, last is the centre) and weights; Gauss
// 7-point weights belong to the odd-indexed abscissae.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Piece kronrod15(const std::function<double(double)>& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(centre - dx);
    f2[j] = f(centre + dx);
    const double s = f1[j] + f2[j];
    resk += kWgk[j] * s;
    if (j % 2 == 1) resg += kWg[j / 2] * s;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  resasc *= std::abs(half);

  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  return Piece{a, b, resk * half, err};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
  std::priority_queue<Piece> heap;
  std::vector<Piece> done;  // pieces too narrow to split further
  Piece first = kronrod15(f, a, b);
  heap.push(first);
  double value = first.value;
  double error = first.error;

  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(value)); };

  std::size_t count = 1;
  while (!heap.empty() && error > target() && count < opts.max_intervals) {
    Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      done.push_back(worst);
      continue;
    }
    Piece left = kronrod15(f, worst.a, mid);
    Piece right = kronrod15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }

  // Re-sum to drop the drift of the running totals.
  QuadratureResult r;
  r.intervals = heap.size() + done.size();
  for (const auto& p : done) {
    r.value += p.value;
    r.abs_error += p.error;
  }
  while (!heap.empty()) {
    r.value += heap.top().value;
    r.abs_error += heap.top().error;
    heap.pop();
  }
  r.converged = std::isfinite(r.value) &&
                r.abs_error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(r.value));
  return r;
}

QuadratureResult integrate_half_line(const std::function<double(double)>& f,
                                     const QuadratureOptions& opts) {
  constexpr double quarter = std::numbers::pi / 4.0;
  auto lower = [&](double theta) {
    const double c = std::cos(theta);
    return f(std::tan(theta)) / (c * c);
  };
  auto upper = [&](double phi) {
    const double s = std::sin(phi);
    return f(1.0 / std::tan(phi)) / (s * s);
  };
  QuadratureResult lo = integrate(lower, 0.0, quarter, opts);
  QuadratureResult hi = integrate(upper, 0.0, quarter, opts);
  QuadratureResult r;
  r.value = lo.value + hi.value;
  r.abs_error = lo.abs_error + hi.abs_error;
  r.intervals = lo.intervals + hi.intervals;
  r.converged = lo.converged && hi.converged;
  return r;
}

}  // namespace lea
