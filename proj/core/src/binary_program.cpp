#include "riscnoma/binary_program.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "riscnoma/phases.hpp"

namespace riscnoma {

double evaluate(const QuadraticForm& q, const RVector& theta) {
  if (q.a.rows() != theta.size() || q.a.cols() != theta.size() || q.b.size() != theta.size()) {
    throw std::invalid_argument("quadratic form: dimension mismatch");
  }
  const CVector v = unit_phasors(-theta);
  return (v.adjoint() * q.a * v)(0).real() + 2.0 * v.dot(q.b).real() + q.c;
}

RVector theta_delta(int levels) {
  RVector out(2 * levels - 1);
  for (int i = 0; i < 2 * levels - 1; ++i) out(i) = (i - (levels - 1)) * kTwoPi / levels;
  return out;
}

double PsiExpression::value(const std::vector<int>& levels, int q) const {
  const int l = static_cast<int>(levels.size());
  double s = constant;
  for (int m = 0; m < l; ++m) s += element[static_cast<std::size_t>(m)](levels[static_cast<std::size_t>(m)]);
  for (int m = 0; m < l; ++m) {
    for (int n = m + 1; n < l; ++n) {
      s += pair[static_cast<std::size_t>(pair_index(m, n, l))](
          levels[static_cast<std::size_t>(m)] - levels[static_cast<std::size_t>(n)] + q - 1);
    }
  }
  return s;
}

PsiExpression psi_expression(const QuadraticForm& q, int levels) {
  const int l = static_cast<int>(q.b.size());
  if (q.a.rows() != l || q.a.cols() != l) throw std::invalid_argument("psi: dimension mismatch");
  const RVector td = theta_delta(levels);
  PsiExpression e;
  e.constant = q.c + q.a.diagonal().real().sum();
  for (int m = 0; m < l; ++m) {
    RVector coef(levels);
    for (int s = 0; s < levels; ++s) {
      coef(s) = 2.0 * (q.b(m) * std::polar(1.0, td(s + levels - 1))).real();
    }
    e.element.push_back(coef);
  }
  for (int m = 0; m < l; ++m) {
    for (int n = m + 1; n < l; ++n) {
      RVector coef(2 * levels - 1);
      for (int d = 0; d < 2 * levels - 1; ++d) {
        coef(d) = 2.0 * (q.a(m, n) * std::polar(1.0, td(d))).real();
      }
      e.pair.push_back(coef);
    }
  }
  return e;
}

OneHotAssignment encode_levels(const std::vector<int>& levels, int q) {
  const int l = static_cast<int>(levels.size());
  OneHotAssignment x;
  for (int m = 0; m < l; ++m) {
    RVector d = RVector::Zero(q);
    d(levels[static_cast<std::size_t>(m)]) = 1.0;
    x.delta.push_back(d);
  }
  for (int m = 0; m < l; ++m) {
    for (int n = m + 1; n < l; ++n) {
      RVector d = RVector::Zero(2 * q - 1);
      d(levels[static_cast<std::size_t>(m)] - levels[static_cast<std::size_t>(n)] + q - 1) = 1.0;
      x.delta_pair.push_back(d);
    }
  }
  return x;
}

double psi(const QuadraticForm& q, const OneHotAssignment& x, int levels) {
  const int l = static_cast<int>(q.b.size());
  const RVector td = theta_delta(levels);
  const RVector v_cos = td.array().cos();
  const RVector v_sin = td.array().sin();
  double s = q.c + q.a.diagonal().real().sum();
  for (int m = 0; m < l; ++m) {
    const RVector& d = x.delta[static_cast<std::size_t>(m)];
    const RVector c = v_cos.tail(levels);
    const RVector sn = v_sin.tail(levels);
    s += 2.0 * (q.b(m).real() * c.dot(d) - q.b(m).imag() * sn.dot(d));
  }
  for (int m = 0; m < l; ++m) {
    for (int n = m + 1; n < l; ++n) {
      const RVector& d = x.delta_pair[static_cast<std::size_t>(pair_index(m, n, l))];
      s += 2.0 * (q.a(m, n).real() * v_cos.dot(d) - q.a(m, n).imag() * v_sin.dot(d));
    }
  }
  return s;
}

RVector decode_phases(const OneHotAssignment& x, int levels) {
  const RVector td = theta_delta(levels).tail(levels);
  RVector theta(static_cast<Eigen::Index>(x.delta.size()));
  for (std::size_t m = 0; m < x.delta.size(); ++m) {
    theta(static_cast<Eigen::Index>(m)) = td.dot(x.delta[m]);
  }
  return theta;
}

double PsiConstraint::normalized_slack(const std::vector<int>& levels, int q) const {
  return (expr.value(levels, q) - rhs) / std::max(1.0, std::abs(rhs - expr.constant));
}

void IlpProblem::validate() const {
  if (elements < 1) throw std::invalid_argument("ilp: need at least one element");
  if (levels < 2) throw std::invalid_argument("ilp: need at least two levels");
  const std::size_t pairs = static_cast<std::size_t>(elements * (elements - 1) / 2);
  for (const auto& c : constraints) {
    if (c.expr.element.size() != static_cast<std::size_t>(elements) || c.expr.pair.size() != pairs) {
      throw std::invalid_argument("ilp: group count mismatch");
    }
    for (const auto& e : c.expr.element) {
      if (e.size() != levels) throw std::invalid_argument("ilp: element group length mismatch");
    }
    for (const auto& p : c.expr.pair) {
      if (p.size() != 2 * levels - 1) throw std::invalid_argument("ilp: pair group length mismatch");
    }
  }
}

namespace {

class BranchAndBound {
 public:
  BranchAndBound(const IlpProblem& p, const std::optional<PsiExpression>& obj)
      : l_(p.elements), q_(p.levels) {
    for (const auto& c : p.constraints) {
      exprs_.push_back(&c.expr);
      rhs_.push_back(c.rhs);
      norm_.push_back(std::max(1.0, std::abs(c.rhs - c.expr.constant)));
    }
    if (obj) {
      objective_ = &*obj;
      exprs_.push_back(objective_);
    }
    // Pair maxima for fully-unassigned pairs.
    for (const auto* e : exprs_) {
      std::vector<double> pm;
      for (const auto& p : e->pair) pm.push_back(p.maxCoeff());
      pair_max_.push_back(std::move(pm));
    }
    // Branch order: descending coefficient mass.
    std::vector<double> mass(static_cast<std::size_t>(l_), 0.0);
    for (const auto* e : exprs_) {
      for (int m = 0; m < l_; ++m) {
        mass[static_cast<std::size_t>(m)] += e->element[static_cast<std::size_t>(m)].cwiseAbs().maxCoeff();
        for (int n = 0; n < l_; ++n) {
          if (n == m) continue;
          const int pi = pair_index(std::min(m, n), std::max(m, n), l_);
          mass[static_cast<std::size_t>(m)] += e->pair[static_cast<std::size_t>(pi)].cwiseAbs().maxCoeff();
        }
      }
    }
    order_.resize(static_cast<std::size_t>(l_));
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      return mass[static_cast<std::size_t>(a)] > mass[static_cast<std::size_t>(b)];
    });
    levels_.assign(static_cast<std::size_t>(l_), -1);
    assigned_.assign(static_cast<std::size_t>(l_), false);
  }

  IlpResult run() {
    std::vector<double> partial;
    for (const auto* e : exprs_) partial.push_back(e->constant);
    best_score_ = -std::numeric_limits<double>::infinity();
    recurse(0, partial);
    IlpResult r;
    r.nodes = nodes_;
    if (best_levels_.empty()) return r;  // objective mode, empty feasible set
    r.levels = best_levels_;
    r.min_slack = best_min_slack_;
    r.feasible = best_min_slack_ >= 0.0;
    if (objective_ != nullptr) r.objective = objective_->value(best_levels_, q_);
    return r;
  }

 private:
  // Contribution of element m at level s given the currently assigned elements.
  double element_gain(std::size_t ci, int m, int s) const {
    const PsiExpression& e = *exprs_[ci];
    double g = e.element[static_cast<std::size_t>(m)](s);
    for (int n = 0; n < l_; ++n) {
      if (!assigned_[static_cast<std::size_t>(n)]) continue;
      const int sn = levels_[static_cast<std::size_t>(n)];
      if (m < n) {
        g += e.pair[static_cast<std::size_t>(pair_index(m, n, l_))](s - sn + q_ - 1);
      } else {
        g += e.pair[static_cast<std::size_t>(pair_index(n, m, l_))](sn - s + q_ - 1);
      }
    }
    return g;
  }

  double upper_bound(std::size_t ci, double partial) const {
    double ub = partial;
    for (int m = 0; m < l_; ++m) {
      if (assigned_[static_cast<std::size_t>(m)]) continue;
      double best = -std::numeric_limits<double>::infinity();
      for (int s = 0; s < q_; ++s) best = std::max(best, element_gain(ci, m, s));
      ub += best;
      for (int n = m + 1; n < l_; ++n) {
        if (!assigned_[static_cast<std::size_t>(n)]) {
          ub += pair_max_[ci][static_cast<std::size_t>(pair_index(m, n, l_))];
        }
      }
    }
    return ub;
  }

  void recurse(int depth, const std::vector<double>& partial) {
    ++nodes_;
    const std::size_t nc = rhs_.size();
    if (depth == l_) {
      double min_slack = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < nc; ++c) {
        min_slack = std::min(min_slack, (partial[c] - rhs_[c]) / norm_[c]);
      }
      double score = min_slack;
      if (objective_ != nullptr) {
        if (min_slack < 0.0) return;
        score = partial[nc];
      }
      if (score > best_score_) {
        best_score_ = score;
        best_min_slack_ = min_slack;
        best_levels_ = levels_;
      }
      return;
    }
    double bound_slack = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < nc; ++c) {
      bound_slack = std::min(bound_slack, (upper_bound(c, partial[c]) - rhs_[c]) / norm_[c]);
    }
    if (objective_ == nullptr) {
      if (bound_slack <= best_score_) return;
    } else {
      if (bound_slack < 0.0) return;
      if (!best_levels_.empty() && upper_bound(nc, partial[nc]) <= best_score_) return;
    }
    const int m = order_[static_cast<std::size_t>(depth)];
    std::vector<double> next(partial.size());
    for (int s = 0; s < q_; ++s) {
      for (std::size_t c = 0; c < exprs_.size(); ++c) next[c] = partial[c] + element_gain(c, m, s);
      levels_[static_cast<std::size_t>(m)] = s;
      assigned_[static_cast<std::size_t>(m)] = true;
      recurse(depth + 1, next);
      assigned_[static_cast<std::size_t>(m)] = false;
      levels_[static_cast<std::size_t>(m)] = -1;
    }
  }

  int l_;
  int q_;
  std::vector<const PsiExpression*> exprs_;  // constraints, then objective
  std::vector<double> rhs_;
  std::vector<double> norm_;
  std::vector<std::vector<double>> pair_max_;
  const PsiExpression* objective_ = nullptr;
  std::vector<int> order_;
  std::vector<int> levels_;
  std::vector<bool> assigned_;
  std::vector<int> best_levels_;
  double best_score_ = 0.0;
  double best_min_slack_ = 0.0;
  std::int64_t nodes_ = 0;
};

}  // namespace

IlpResult solve_binary_feasibility(const IlpProblem& problem,
                                   const std::optional<PsiExpression>& objective,
                                   const IlpOptions& options) {
  problem.validate();
  const int bits = static_cast<int>(std::lround(std::log2(problem.levels)));
  if (problem.elements > options.max_elements || bits > options.max_bits) {
    throw SizeGuardError("binary program exceeds the exact-search size guard (L=" +
                         std::to_string(problem.elements) + ", B=" + std::to_string(bits) +
                         "); use the low-complexity solver instead");
  }
  if (objective) {
    IlpProblem shape{problem.elements, problem.levels, {PsiConstraint{*objective, 0.0}}};
    shape.validate();
  }
  if (problem.constraints.empty() && !objective) {
    IlpResult r;
    r.feasible = true;
    r.levels.assign(static_cast<std::size_t>(problem.elements), 0);
    r.min_slack = std::numeric_limits<double>::infinity();
    return r;
  }
  IlpResult r = BranchAndBound(problem, objective).run();
  if (objective && r.levels.empty()) {
    // Report the max-min-slack point so callers still get an assignment.
    const std::int64_t nodes = r.nodes;
    r = BranchAndBound(problem, std::nullopt).run();
    r.nodes += nodes;
    r.feasible = false;
  }
  return r;
}

BruteForceResult brute_force_phase_search(const std::vector<QuadraticForm>& forms,
                                          const std::vector<double>& rhs, int levels, int elements,
                                          SearchMode mode) {
  if (forms.empty()) throw std::invalid_argument("brute force: no quadratic forms");
  if (mode == SearchMode::feasibility_set && rhs.size() != forms.size()) {
    throw std::invalid_argument("brute force: one rhs per form required");
  }
  if (levels < 2 || elements < 1) throw std::invalid_argument("brute force: invalid size");
  if (std::pow(static_cast<double>(levels), elements) > kBruteForceLimit) {
    throw SizeGuardError("brute force: Q^L exceeds 1e7");
  }
  const std::size_t nf = mode == SearchMode::maximize ? 1 : forms.size();
  std::vector<PsiExpression> exprs;
  std::vector<double> norms;
  for (std::size_t i = 0; i < nf; ++i) {
    if (forms[i].b.size() != elements) throw std::invalid_argument("brute force: dimension mismatch");
    exprs.push_back(psi_expression(forms[i], levels));
    if (mode == SearchMode::feasibility_set) {
      norms.push_back(std::max(1.0, std::abs(rhs[i] - exprs.back().constant)));
    }
  }
  std::vector<int> s(static_cast<std::size_t>(elements), 0);
  BruteForceResult best;
  best.value = -std::numeric_limits<double>::infinity();
  for (;;) {
    double value;
    if (mode == SearchMode::maximize) {
      value = evaluate(forms[0], phases_from_levels(s, levels));
    } else {
      value = std::numeric_limits<double>::infinity();
      const RVector theta = phases_from_levels(s, levels);
      for (std::size_t i = 0; i < nf; ++i) {
        value = std::min(value, (evaluate(forms[i], theta) - rhs[i]) / norms[i]);
      }
    }
    if (value > best.value) {
      best.value = value;
      best.levels = s;
    }
    int pos = elements - 1;
    while (pos >= 0 && ++s[static_cast<std::size_t>(pos)] == levels) {
      s[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  best.theta = phases_from_levels(best.levels, levels);
  best.feasible = mode == SearchMode::maximize || best.value >= 0.0;
  return best;
}

}  // namespace riscnoma
