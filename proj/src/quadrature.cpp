#include "dpmk/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "dpmk/error.hpp"
#include "dpmk/numerics.hpp"

namespace dpmk {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo, hi, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  double fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = f(center - dx);
    fv2[j] = f(center + dx);
    const double pair = fv1[j] + fv2[j];
    resk += kWgk[j] * pair;
    resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * pair;
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  const double ah = std::abs(half);
  resk *= half;
  resabs *= ah;
  resasc *= ah;
  double err = std::abs((resk - resg * half));
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {lo, hi, resk, err};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureOptions& opts) {
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw DomainError("integrate: bounds must be finite with lo <= hi");
  if (lo == hi) return {};
  std::priority_queue<Segment> queue;
  const int pieces = std::max(1, opts.initial_subdivisions);
  double total = 0.0, total_err = 0.0;
  std::size_t evals = 0;
  for (int i = 0; i < pieces; ++i) {
    const double a = lo + (hi - lo) * i / pieces;
    const double b = (i + 1 == pieces) ? hi : lo + (hi - lo) * (i + 1) / pieces;
    Segment s = gauss_kronrod(f, a, b);
    evals += 15;
    total += s.value;
    total_err += s.error;
    queue.push(s);
  }
  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
  while (total_err > target()) {
    if (evals + 30 > opts.max_evaluations)
      throw NumericError("integrate: evaluation budget exhausted", total_err / std::max(std::abs(total), 1e-300));
    Segment worst = queue.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) break;  // interval at machine resolution
    queue.pop();
    Segment left = gauss_kronrod(f, worst.lo, mid);
    Segment right = gauss_kronrod(f, mid, worst.hi);
    evals += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
  // Re-sum from the segments to shed accumulated update roundoff.
  double sum = 0.0, err = 0.0;
  std::vector<Segment> segs;
  segs.reserve(queue.size());
  while (!queue.empty()) {
    segs.push_back(queue.top());
    queue.pop();
  }
  std::sort(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
  for (const auto& s : segs) {
    sum += s.value;
    err += s.error;
  }
  return {sum, err, evals};
}

LogQuadratureResult log_integrate_unimodal(const std::function<double(double)>& log_f, double lo,
                                           double hi, const QuadratureOptions& opts) {
  if (!(lo < hi)) {
    if (lo == hi) return {kNegInf, 0.0, 0};
    throw DomainError("log_integrate_unimodal: lo > hi");
  }
  constexpr double kCut = 80.0;
  // Golden-section search for the mode.
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = log_f(x1), f2 = log_f(x2);
  std::size_t evals = 2;
  for (int it = 0; it < 200 && (b - a) > 1e-12 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = log_f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = log_f(x1);
    }
    ++evals;
  }
  double peak = 0.5 * (a + b);
  double m = log_f(peak);
  const double flo = log_f(lo), fhi = log_f(hi);
  evals += 3;
  if (flo > m) { peak = lo; m = flo; }
  if (fhi > m) { peak = hi; m = fhi; }
  if (m == kNegInf) return {kNegInf, 0.0, evals};
  if (!std::isfinite(m)) throw NumericError("log_integrate_unimodal: non-finite mode value", 0.0);

  auto trim = [&](double inner, double outer) {
    if (log_f(outer) >= m - kCut) return outer;
    double in = inner, out = outer;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (in + out);
      if (log_f(mid) >= m - kCut) in = mid; else out = mid;
      evals += 1;
    }
    return out;
  };
  const double left = trim(peak, lo);
  const double right = trim(peak, hi);
  auto f = [&](double u) { return std::exp(log_f(u) - m); };
  QuadratureOptions sub = opts;
  sub.abs_tol = 0.0;
  if (sub.initial_subdivisions < 4) sub.initial_subdivisions = 4;
  double total = 0.0, err = 0.0;
  if (peak > left) {
    auto r = integrate(f, left, peak, sub);
    total += r.value;
    err += r.error;
    evals += r.evaluations;
  }
  if (right > peak) {
    auto r = integrate(f, peak, right, sub);
    total += r.value;
    err += r.error;
    evals += r.evaluations;
  }
  if (total <= 0.0) return {kNegInf, 0.0, evals};
  return {m + std::log(total), err / total, evals};
}

LogQuadratureResult log_integrate(const std::function<double(double)>& log_f, double lo, double hi,
                                  const QuadratureOptions& opts, int scan_points) {
  if (!(lo < hi)) {
    if (lo == hi) return {kNegInf, 0.0, 0};
    throw DomainError("log_integrate: lo > hi");
  }
  double m = kNegInf;
  for (int i = 0; i <= scan_points; ++i) {
    const double u = lo + (hi - lo) * i / scan_points;
    m = std::max(m, log_f(u));
  }
  if (m == kNegInf) return {kNegInf, 0.0, static_cast<std::size_t>(scan_points + 1)};
  auto f = [&](double u) { return std::exp(log_f(u) - m); };
  QuadratureOptions sub = opts;
  sub.abs_tol = 0.0;
  sub.initial_subdivisions = std::max(sub.initial_subdivisions, 16);
  auto r = integrate(f, lo, hi, sub);
  if (r.value <= 0.0) return {kNegInf, 0.0, r.evaluations};
  return {m + std::log(r.value), r.error / r.value, r.evaluations + scan_points + 1};
}

}  // namespace dpmk
