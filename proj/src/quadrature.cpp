#include "casimir/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace casimir {
namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kCutoffRatio = 1e-16;
constexpr double kMinimumCutoff = 8.0;
constexpr double kMaximumCutoff = 4096.0;

struct Panel {
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
  double error = 0.0;
};

struct PanelOrder {
  const std::vector<Panel>* panels;
  bool operator()(std::size_t lhs, std::size_t rhs) const {
    const auto& p = *panels;
    if (p[lhs].error != p[rhs].error) return p[lhs].error < p[rhs].error;
    return lhs > rhs;
  }
};

class Integrator {
 public:
  Integrator(const std::function<double(double)>& f, double scale)
      : f_(f), scale_(scale) {}

  double eval(double u) {
    ++evaluations_;
    const double y = f_(u / scale_) / scale_;
    running_max_ = std::max(running_max_, std::abs(y));
    return y;
  }

  Panel kronrod(double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = eval(center);
    double kronrod = kKronrodWeights[7] * fc;
    double gauss = kGaussWeights[3] * fc;
    double magnitude = std::abs(kronrod);
    for (std::size_t j = 0; j < 7; ++j) {
      const double dx = half * kKronrodNodes[j];
      const double f1 = eval(center - dx);
      const double f2 = eval(center + dx);
      kronrod += kKronrodWeights[j] * (f1 + f2);
      magnitude += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
      if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
    }
    const double roundoff =
        50.0 * std::numeric_limits<double>::epsilon() * magnitude * half;
    const double error = std::max(std::abs((kronrod - gauss) * half), roundoff);
    return {lo, hi, kronrod * half, error};
  }

  std::size_t evaluations() const { return evaluations_; }
  double running_max() const { return running_max_; }

 private:
  const std::function<double(double)>& f_;
  double scale_;
  std::size_t evaluations_ = 0;
  double running_max_ = 0.0;
};

}  // namespace

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         double decay_scale, double tol,
                                         const QuadratureOptions& options) {
  detail::require_positive(decay_scale, "decay_scale");
  detail::require_positive(tol, "tol");
  Integrator integrator(f, decay_scale);

  // Geometric panels [0,1], [1,2], [2,4], ... until the integrand is
  // negligible against its running maximum.
  std::vector<Panel> panels;
  double lo = 0.0;
  double hi = 1.0;
  while (true) {
    panels.push_back(integrator.kronrod(lo, hi));
    if (hi >= kMaximumCutoff) break;
    if (hi >= kMinimumCutoff) {
      const double tail = std::abs(integrator.eval(hi));
      if (tail <= kCutoffRatio * integrator.running_max()) break;
    }
    lo = hi;
    hi *= 2.0;
  }

  auto totals = [&] {
    double value = 0.0;
    double error = 0.0;
    for (const Panel& p : panels) {
      value += p.value;
      error += p.error;
    }
    return std::pair{value, error};
  };

  std::priority_queue<std::size_t, std::vector<std::size_t>, PanelOrder> queue{
      PanelOrder{&panels}};
  for (std::size_t i = 0; i < panels.size(); ++i) queue.push(i);

  auto [value, error] = totals();
  auto target = [&](double v) { return std::max(tol * std::abs(v), options.abs_tol); };
  while (error > target(value) &&
         integrator.evaluations() + 30 <= options.max_evaluations) {
    const std::size_t worst = queue.top();
    queue.pop();
    const Panel parent = panels[worst];
    const double mid = 0.5 * (parent.lo + parent.hi);
    if (!(mid > parent.lo && mid < parent.hi)) break;  // interval exhausted
    const Panel left = integrator.kronrod(parent.lo, mid);
    const Panel right = integrator.kronrod(mid, parent.hi);
    value += left.value + right.value - parent.value;
    error += left.error + right.error - parent.error;
    panels[worst] = left;
    panels.push_back(right);
    queue.push(worst);
    queue.push(panels.size() - 1);
  }

  // Re-sum in left-to-right order for a reproducible final value.
  std::sort(panels.begin(), panels.end(),
            [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
  std::tie(value, error) = totals();

  QuadratureResult result;
  result.value = value;
  result.abs_error_estimate = error;
  result.evaluations = integrator.evaluations();
  result.converged = std::isfinite(value) && error <= target(value);
  return result;
}

SeriesResult sum_geometric_like(const std::function<double(std::size_t)>& term,
                                double ratio_bound, double tol,
                                std::size_t max_terms) {
  detail::require_positive(tol, "tol");
  detail::require_non_negative(ratio_bound, "ratio_bound");
  SeriesResult result;

  if (ratio_bound < 1.0) {
    const double tail_factor = ratio_bound / (1.0 - ratio_bound);
    double partial = 0.0;
    double previous = 0.0;
    for (std::size_t n = 1; n <= max_terms; ++n) {
      const double t = term(n);
      if (n > 1 && std::abs(t) > ratio_bound * std::abs(previous) * (1.0 + 1e-9)) {
        throw ConvergenceError("series term " + std::to_string(n) +
                               " violates the ratio bound " +
                               std::to_string(ratio_bound));
      }
      partial += t;
      previous = t;
      const double tail = std::abs(t) * tail_factor;
      result.value = partial;
      result.terms_used = n;
      result.tail_bound = tail;
      if (tail <= tol * std::abs(partial)) {
        result.converged = true;
        return result;
      }
    }
    return result;
  }

  // Power-law tail: Euler-Maclaurin on t(n) ~ C n^-p with p fitted between
  // N/2 and N at every doubling of N.
  std::vector<double> terms;
  terms.reserve(1024);
  double partial = 0.0;
  bool have_previous = false;
  double previous_total = 0.0;
  std::size_t checkpoint = 16;
  for (std::size_t n = 1; n <= max_terms; ++n) {
    const double t = term(n);
    terms.push_back(t);
    partial += t;
    if (n != checkpoint) continue;
    checkpoint *= 2;

    const double t_n = terms[n - 1];
    const double t_half = terms[n / 2 - 1];
    double tail = 0.0;
    if (t_n != 0.0) {
      if (t_half == 0.0 || (t_half > 0.0) != (t_n > 0.0)) continue;
      const double p = std::log(t_half / t_n) / std::log(2.0);
      if (!(p > 1.05)) continue;
      const double big_n = static_cast<double>(n);
      tail = t_n * (big_n / (p - 1.0) - 0.5 + p / (12.0 * big_n));
    }
    const double total = partial + tail;
    result.value = total;
    result.terms_used = n;
    if (have_previous) {
      const double change = std::abs(total - previous_total);
      result.tail_bound = change;
      if (change <= tol * std::abs(total)) {
        result.converged = true;
        return result;
      }
    }
    previous_total = total;
    have_previous = true;
  }
  return result;
}

double zeta3(double tol) {
  const SeriesResult r = sum_geometric_like(
      [](std::size_t n) {
        const double x = static_cast<double>(n);
        return 1.0 / (x * x * x);
      },
      1.0, tol);
  if (!r.converged) throw ConvergenceError("zeta(3) series did not converge");
  return r.value;
}

double polylog3(double z, double tol) {
  detail::require_finite(z, "z");
  if (!(std::abs(z) < 1.0)) {
    throw InvalidArgument("polylog3 requires |z| < 1");
  }
  double power = 1.0;
  std::size_t last = 0;
  const SeriesResult r = sum_geometric_like(
      [&](std::size_t n) {
        // Terms are requested in order n = 1, 2, ...
        while (last < n) {
          power *= z;
          ++last;
        }
        const double x = static_cast<double>(n);
        return power / (x * x * x);
      },
      std::abs(z), tol);
  if (!r.converged) throw ConvergenceError("Li_3 series did not converge");
  return r.value;
}

}  // namespace casimir
