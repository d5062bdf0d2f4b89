#include "vchoq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <queue>
#include <string>

#include "vchoq/errors.hpp"

namespace vchoq {

void QuadratureConfig::validate() const {
  if (order < 2) throw UsageError("quadrature order must be >= 2");
  if (max_subdivisions < 0) throw UsageError("max_subdivisions must be >= 0");
  if (!(tolerance > 0.0)) throw UsageError("quadrature tolerance must be > 0");
}

QuadratureConfig QuadratureConfig::from_environment() {
  QuadratureConfig cfg;
  if (const char* env = std::getenv("VCHOQ_TOLERANCE"); env && *env) {
    char* end = nullptr;
    const double tol = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(tol > 0.0)) {
      throw UsageError(std::string("VCHOQ_TOLERANCE is not a positive number: ") + env);
    }
    cfg.tolerance = tol;
  }
  return cfg;
}

GaussLegendreRule::GaussLegendreRule(int order) {
  if (order < 2) throw UsageError("Gauss-Legendre order must be >= 2");
  const auto n = static_cast<std::size_t>(order);
  nodes.resize(n);
  weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

namespace {

struct Item {
  std::size_t panel;
  double lo, hi;  // in the panel's own variable
  int depth;
  double whole, left, right;
  double err() const { return std::abs(whole - (left + right)); }
};

}  // namespace

IntegralResult integrate_panels(const std::vector<Panel>& panels,
                                const std::function<double(double)>& integrand,
                                const QuadratureConfig& cfg) {
  cfg.validate();
  const GaussLegendreRule rule(cfg.order);

  // Integrand in the panel's variable: x itself, or tau in [0,1] when graded.
  auto local = [&](const Panel& p, double s) {
    const double w = p.b - p.a;
    switch (p.grading) {
      case Panel::Grading::kNone:
        return integrand(s);
      case Panel::Grading::kTop: {
        const double m = p.exponent;
        return integrand(p.b - w * std::pow(s, m)) * m * w * std::pow(s, m - 1.0);
      }
      case Panel::Grading::kBottom: {
        const double m = p.exponent;
        return integrand(p.a + w * std::pow(s, m)) * m * w * std::pow(s, m - 1.0);
      }
    }
    return 0.0;
  };
  auto gauss = [&](const Panel& p, double lo, double hi) {
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      acc += rule.weights[i] * local(p, mid + half * rule.nodes[i]);
    }
    return acc * half;
  };
  auto make = [&](std::size_t idx, double lo, double hi, int depth, double whole) {
    const double mid = 0.5 * (lo + hi);
    const Panel& p = panels[idx];
    return Item{idx, lo, hi, depth, whole, gauss(p, lo, mid), gauss(p, mid, hi)};
  };

  std::vector<Item> items;
  items.reserve(panels.size());
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const Panel& p = panels[i];
    if (!(p.b > p.a)) continue;
    const double lo = p.grading == Panel::Grading::kNone ? p.a : 0.0;
    const double hi = p.grading == Panel::Grading::kNone ? p.b : 1.0;
    items.push_back(make(i, lo, hi, 0, gauss(p, lo, hi)));
  }

  auto by_error = [&](std::size_t x, std::size_t y) {
    const double ex = items[x].err(), ey = items[y].err();
    return ex < ey || (ex == ey && x > y);
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_error)>
      queue(by_error);
  double total_err = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    queue.push(i);
    total_err += items[i].err();
  }

  std::vector<bool> retired(items.size(), false);
  while (total_err > cfg.tolerance && !queue.empty()) {
    const std::size_t top = queue.top();
    queue.pop();
    if (items[top].depth >= cfg.max_subdivisions) continue;
    const Item parent = items[top];
    retired[top] = true;
    const double mid = 0.5 * (parent.lo + parent.hi);
    Item l = make(parent.panel, parent.lo, mid, parent.depth + 1, parent.left);
    Item r = make(parent.panel, mid, parent.hi, parent.depth + 1, parent.right);
    total_err += l.err() + r.err() - parent.err();
    items.push_back(l);
    items.push_back(r);
    retired.push_back(false);
    retired.push_back(false);
    queue.push(items.size() - 2);
    queue.push(items.size() - 1);
  }

  std::vector<const Item*> leaves;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!retired[i]) leaves.push_back(&items[i]);
  }
  std::sort(leaves.begin(), leaves.end(), [](const Item* x, const Item* y) {
    return x->panel < y->panel || (x->panel == y->panel && x->lo < y->lo);
  });
  IntegralResult result;
  for (const Item* it : leaves) {
    result.value += it->left + it->right;
    result.error_estimate += it->err();
  }
  result.panels_used = static_cast<int>(leaves.size());
  result.converged = result.error_estimate <= cfg.tolerance;
  return result;
}

}  // namespace vchoq
