#include "asg/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "asg/error.hpp"

namespace asg::numerics {

namespace {

// Kronrod abscissae on [-1, 1]; xgk[1], xgk[3], xgk[5] and the centre are the 7-point Gauss nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082,
                           0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975,
                           0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

double sanitize(double v, std::size_t& nonfinite) {
  if (std::isfinite(v)) return v;
  ++nonfinite;
  return 0.0;
}

struct HeapEntry {
  double error;
  std::size_t index;
  bool operator<(const HeapEntry& other) const { return error < other.error; }
};

}  // namespace

Gk15Panel gauss_kronrod15(const ScalarFn& f, double lo, double hi, std::size_t& nonfinite) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  double fv1[7];
  double fv2[7];
  const double fc = sanitize(f(centre), nonfinite);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);

  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double f1 = sanitize(f(centre - dx), nonfinite);
    const double f2 = sanitize(f(centre + dx), nonfinite);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double f1 = sanitize(f(centre - dx), nonfinite);
    const double f2 = sanitize(f(centre + dx), nonfinite);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }

  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }

  const double ahalf = std::abs(half);
  const double value = resk * half;
  resabs *= ahalf;
  resasc *= ahalf;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > kTiny / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * resabs, err);
  }
  return {value, err};
}

std::array<double, 15> gauss_kronrod15_nodes(double lo, double hi) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::array<double, 15> nodes{};
  for (int j = 0; j < 7; ++j) {
    nodes[static_cast<std::size_t>(j)] = centre - half * kXgk[j];
    nodes[static_cast<std::size_t>(14 - j)] = centre + half * kXgk[j];
  }
  nodes[7] = centre;
  return nodes;
}

QuadPartition adaptive_partition(const ScalarFn& f, double lo, double hi, const QuadOptions& opts) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    throw InvalidArgument("adaptive_quadrature: need finite lo < hi");
  }
  if (!(opts.abs_tol >= 0.0 && opts.rel_tol >= 0.0) || opts.max_depth < 0) {
    throw InvalidArgument("adaptive_quadrature: tolerances must be non-negative");
  }

  std::vector<double> cuts{lo};
  for (double b : opts.breakpoints) {
    if (std::isfinite(b) && b > lo && b < hi) cuts.push_back(b);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  QuadPartition out;
  std::size_t nonfinite = 0;
  std::size_t evaluations = 0;
  std::vector<QuadSegment>& segs = out.segments;
  std::priority_queue<HeapEntry> heap;

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto panel = gauss_kronrod15(f, cuts[i], cuts[i + 1], nonfinite);
    evaluations += 15;
    segs.push_back({cuts[i], cuts[i + 1], panel.value, panel.error, 0});
    heap.push({panel.error, segs.size() - 1});
  }

  auto totals = [&segs]() {
    double v = 0.0;
    double e = 0.0;
    for (const auto& s : segs) {
      v += s.value;
      e += s.error;
    }
    return std::pair{v, e};
  };

  auto [value, error] = totals();
  bool converged = false;
  std::size_t since_resum = 0;
  while (true) {
    if (error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) {
      // Running sums drift; confirm with an exact re-sum before declaring success.
      std::tie(value, error) = totals();
      if (error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) {
        converged = true;
        break;
      }
    }
    if (heap.empty() || segs.size() >= opts.max_segments) break;

    const HeapEntry top = heap.top();
    heap.pop();
    QuadSegment parent = segs[top.index];
    const double mid = 0.5 * (parent.lo + parent.hi);
    const bool too_narrow = !(mid > parent.lo && mid < parent.hi) ||
                            (parent.hi - parent.lo) <= 4.0 * kEps * std::max(1.0, std::abs(mid));
    if (parent.depth >= opts.max_depth || too_narrow) {
      // Frozen: stays in the partition but is never split again.
      continue;
    }

    const auto left = gauss_kronrod15(f, parent.lo, mid, nonfinite);
    const auto right = gauss_kronrod15(f, mid, parent.hi, nonfinite);
    evaluations += 30;

    value += left.value + right.value - parent.value;
    error += left.error + right.error - parent.error;

    segs[top.index] = {parent.lo, mid, left.value, left.error, parent.depth + 1};
    segs.push_back({mid, parent.hi, right.value, right.error, parent.depth + 1});
    heap.push({left.error, top.index});
    heap.push({right.error, segs.size() - 1});

    if (++since_resum == 64) {
      std::tie(value, error) = totals();
      since_resum = 0;
    }
  }

  std::tie(value, error) = totals();
  std::sort(segs.begin(), segs.end(),
            [](const QuadSegment& a, const QuadSegment& b) { return a.lo < b.lo; });

  out.result.value = value;
  out.result.abs_error_estimate = error;
  out.result.evaluations = evaluations;
  out.result.nonfinite_evaluations = nonfinite;
  out.result.converged = converged && std::isfinite(value) && 2 * nonfinite <= evaluations;
  return out;
}

QuadResult adaptive_quadrature(const ScalarFn& f, double lo, double hi, const QuadOptions& opts) {
  return adaptive_partition(f, lo, hi, opts).result;
}

RootResult find_root(const ScalarFn& f, double lo, double hi, const RootOptions& opts) {
  if (!(lo < hi)) throw InvalidArgument("find_root: need lo < hi");

  double a = lo;
  double b = hi;
  double fa = f(a);
  double fb = f(b);
  RootResult res;

  if (std::abs(fa) <= opts.f_tol) return {a, fa, 0};
  if (std::abs(fb) <= opts.f_tol) return {b, fb, 0};
  if (!(std::isfinite(fa) && std::isfinite(fb)) || (fa > 0.0) == (fb > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "find_root: no sign change on [" << lo << ", " << hi << "]: f(lo)=" << fa
        << ", f(hi)=" << fb;
    throw BracketError(msg.str(), fa, fb);
  }

  // Brent's zeroin: b is the best estimate, a the previous one, c keeps the bracket.
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  int iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * kEps * std::abs(b) + 0.5 * opts.x_tol;
    const double m = 0.5 * (c - b);
    if (std::abs(fb) <= opts.f_tol || std::abs(m) <= tol) break;

    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
  }

  res.root = std::clamp(b, lo, hi);
  res.residual = fb;
  res.iterations = iter;
  return res;
}

}  // namespace asg::numerics
