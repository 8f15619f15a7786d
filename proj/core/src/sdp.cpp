#include "riscnoma/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace riscnoma {

std::string_view to_string(SdpStatus status) {
  switch (status) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::infeasible: return "infeasible";
    case SdpStatus::dual_infeasible: return "dual_infeasible";
    case SdpStatus::max_iters: return "max_iters";
    case SdpStatus::numerical_error: return "numerical_error";
  }
  return "unknown";
}

void SdpProblem::validate() const {
  const std::size_t nb = block_sizes.size();
  if (nb == 0) throw std::invalid_argument("sdp: no blocks");
  if (cost.size() != nb) throw std::invalid_argument("sdp: cost block count mismatch");
  auto check_block = [&](const CMatrix& a, std::size_t k, const char* what) {
    if (a.size() == 0) return;
    if (a.rows() != block_sizes[k] || a.cols() != block_sizes[k]) {
      throw std::invalid_argument(std::string("sdp: ") + what + " block size mismatch");
    }
    if (!a.allFinite()) throw std::invalid_argument(std::string("sdp: ") + what + " not finite");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if (hermitian_defect(a) > 1e-12 * scale) {
      throw std::invalid_argument(std::string("sdp: ") + what + " not Hermitian");
    }
  };
  for (std::size_t k = 0; k < nb; ++k) {
    if (block_sizes[k] <= 0) throw std::invalid_argument("sdp: block size must be positive");
    check_block(cost[k], k, "cost");
  }
  for (const auto& con : constraints) {
    if (con.blocks.size() != nb) throw std::invalid_argument("sdp: constraint block count mismatch");
    if (!std::isfinite(con.rhs)) throw std::invalid_argument("sdp: constraint rhs not finite");
    for (std::size_t k = 0; k < nb; ++k) check_block(con.blocks[k], k, "constraint");
  }
  for (const auto& fd : fixed_diagonals) {
    if (fd.block < 0 || fd.block >= static_cast<int>(nb) || fd.index < 0 ||
        fd.index >= block_sizes[static_cast<std::size_t>(fd.block)] || !std::isfinite(fd.value)) {
      throw std::invalid_argument("sdp: fixed diagonal out of range");
    }
  }
}

namespace {

struct Triplet {
  int r;
  int c;
  double v;
};

// One block of one constraint row in the real embedding.
struct Term {
  int block = 0;
  bool dense = false;
  RMatrix mat;
  std::vector<Triplet> trip;  // full symmetric list when sparse

  double norm_sq() const {
    if (dense) return mat.squaredNorm();
    double s = 0.0;
    for (const auto& t : trip) s += t.v * t.v;
    return s;
  }
  void scale(double f) {
    if (dense) {
      mat *= f;
    } else {
      for (auto& t : trip) t.v *= f;
    }
  }
  double inner(const RMatrix& x) const {
    if (dense) return mat.cwiseProduct(x).sum();
    double s = 0.0;
    for (const auto& t : trip) s += t.v * x(t.r, t.c);
    return s;
  }
  void add_to(RMatrix& acc, double a) const {
    if (dense) {
      acc.noalias() += a * mat;
    } else {
      for (const auto& t : trip) acc(t.r, t.c) += a * t.v;
    }
  }
};

struct Row {
  std::vector<Term> terms;
  int lp = -1;
  double lp_coef = 0.0;
  double b = 0.0;
  int source = 0;
  double row_scale = 1.0;
};

struct Model {
  std::vector<int> n;
  std::vector<RMatrix> c;
  std::vector<Row> rows;
  int n_lp = 0;
};

RMatrix embed(const CMatrix& a) {
  const Eigen::Index n = a.rows();
  RMatrix out(2 * n, 2 * n);
  const RMatrix re = a.real();
  const RMatrix im = a.imag();
  out.topLeftCorner(n, n) = 0.5 * re;
  out.bottomRightCorner(n, n) = 0.5 * re;
  out.topRightCorner(n, n) = -0.5 * im;
  out.bottomLeftCorner(n, n) = 0.5 * im;
  return 0.5 * (out + out.transpose());
}

CMatrix unembed(const RMatrix& x) {
  const Eigen::Index n = x.rows() / 2;
  CMatrix out(n, n);
  out.real() = 0.5 * (x.topLeftCorner(n, n) + x.bottomRightCorner(n, n));
  out.imag() = 0.5 * (x.bottomLeftCorner(n, n) - x.topRightCorner(n, n));
  return 0.5 * (out + out.adjoint());
}

Term make_term(int block, RMatrix dense) {
  Term t;
  t.block = block;
  const Eigen::Index n = dense.rows();
  Eigen::Index nnz = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) nnz += dense(i, j) != 0.0 ? 1 : 0;
  }
  if (nnz <= n) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (dense(i, j) != 0.0) {
          t.trip.push_back({static_cast<int>(i), static_cast<int>(j), dense(i, j)});
        }
      }
    }
  } else {
    t.dense = true;
    t.mat = std::move(dense);
  }
  return t;
}

RMatrix sym(const RMatrix& a) { return 0.5 * (a + a.transpose()); }

// Largest step in (0, inf] keeping L(L^-1 (S + a dS) L^-T) PSD given S = L L^T.
double max_step(const Eigen::LLT<RMatrix>& chol, const RMatrix& ds) {
  RMatrix t = chol.matrixL().solve(ds);
  t = chol.matrixL().solve(t.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<RMatrix> es(sym(t), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

double max_step_lp(const RVector& v, const RVector& dv) {
  double a = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) a = std::min(a, -v(i) / dv(i));
  }
  return a;
}

struct NtScaling {
  RMatrix g;     // X = G D G^T, Z = G^-T D G^-1
  RMatrix ginv;  // G^-1
  RMatrix w;     // G G^T
  RVector d;
};

class Solver {
 public:
  // `obj_scale` maps scaled objective values back to the caller's units.
  Solver(Model model, const SdpOptions& opt, double obj_scale)
      : m_(std::move(model)), opt_(opt), obj_scale_(obj_scale) {
    nb_ = m_.n.size();
    nr_ = static_cast<int>(m_.rows.size());
    b_.resize(nr_);
    for (int i = 0; i < nr_; ++i) b_(i) = m_.rows[static_cast<std::size_t>(i)].b;
  }

  SdpSolution run(std::vector<RMatrix>& x_out, RVector& xl_out, RVector& y_out,
                  std::vector<RMatrix>& z_out);

 private:
  RVector apply_a(const std::vector<RMatrix>& x, const RVector& xl) const {
    RVector out(nr_);
    for (int i = 0; i < nr_; ++i) {
      const Row& row = m_.rows[static_cast<std::size_t>(i)];
      double s = 0.0;
      for (const auto& t : row.terms) s += t.inner(x[static_cast<std::size_t>(t.block)]);
      if (row.lp >= 0 && xl.size() > 0) s += row.lp_coef * xl(row.lp);
      out(i) = s;
    }
    return out;
  }
  void apply_at(const RVector& y, std::vector<RMatrix>& out, RVector& out_lp) const {
    out.resize(nb_);
    for (std::size_t k = 0; k < nb_; ++k) out[k] = RMatrix::Zero(m_.n[k], m_.n[k]);
    out_lp = RVector::Zero(m_.n_lp);
    for (int i = 0; i < nr_; ++i) {
      const Row& row = m_.rows[static_cast<std::size_t>(i)];
      for (const auto& t : row.terms) t.add_to(out[static_cast<std::size_t>(t.block)], y(i));
      if (row.lp >= 0) out_lp(row.lp) += row.lp_coef * y(i);
    }
  }
  RMatrix schur(const std::vector<NtScaling>& nt, const RVector& xl, const RVector& zl) const;

  Model m_;
  SdpOptions opt_;
  double obj_scale_ = 1.0;
  std::size_t nb_ = 0;
  int nr_ = 0;
  RVector b_;
};

RMatrix Solver::schur(const std::vector<NtScaling>& nt, const RVector& xl,
                      const RVector& zl) const {
  RMatrix mm = RMatrix::Zero(nr_, nr_);
  for (std::size_t k = 0; k < nb_; ++k) {
    const RMatrix& w = nt[k].w;
    // rows with a term in this block
    std::vector<std::pair<int, const Term*>> dense_terms;
    std::vector<std::pair<int, const Term*>> sparse_terms;
    for (int i = 0; i < nr_; ++i) {
      for (const auto& t : m_.rows[static_cast<std::size_t>(i)].terms) {
        if (t.block != static_cast<int>(k)) continue;
        (t.dense ? dense_terms : sparse_terms).emplace_back(i, &t);
      }
    }
    for (const auto& [i, ti] : dense_terms) {
      const RMatrix wa = sym(w * ti->mat * w);
      for (const auto& [j, tj] : dense_terms) mm(i, j) += tj->inner(wa);
      for (const auto& [j, tj] : sparse_terms) {
        const double v = tj->inner(wa);
        mm(i, j) += v;
        mm(j, i) += v;
      }
    }
    for (std::size_t a = 0; a < sparse_terms.size(); ++a) {
      const auto& [i, ti] = sparse_terms[a];
      for (std::size_t bidx = a; bidx < sparse_terms.size(); ++bidx) {
        const auto& [j, tj] = sparse_terms[bidx];
        double s = 0.0;
        for (const auto& p : ti->trip) {
          for (const auto& q : tj->trip) s += p.v * q.v * w(p.c, q.r) * w(q.c, p.r);
        }
        mm(i, j) += s;
        if (bidx != a) mm(j, i) += s;
      }
    }
  }
  for (int i = 0; i < nr_; ++i) {
    const Row& row = m_.rows[static_cast<std::size_t>(i)];
    if (row.lp >= 0) mm(i, i) += row.lp_coef * row.lp_coef * xl(row.lp) / zl(row.lp);
  }
  return sym(mm);
}

SdpSolution Solver::run(std::vector<RMatrix>& x, RVector& xl, RVector& y,
                        std::vector<RMatrix>& z) {
  SdpSolution sol;
  const int nl = m_.n_lp;

  // Starting point.
  x.resize(nb_);
  z.resize(nb_);
  double c_norm_total = 0.0;
  for (std::size_t k = 0; k < nb_; ++k) {
    const double n = m_.n[k];
    double ratio = 0.0;
    double a_max = 0.0;
    for (const auto& row : m_.rows) {
      for (const auto& t : row.terms) {
        if (t.block != static_cast<int>(k)) continue;
        const double an = std::sqrt(t.norm_sq());
        ratio = std::max(ratio, (1.0 + std::abs(row.b)) / (1.0 + an));
        a_max = std::max(a_max, an);
      }
    }
    const double c_norm = m_.c[k].norm();
    c_norm_total += c_norm * c_norm;
    const double xi = std::max({10.0, std::sqrt(n), n * ratio});
    const double zeta = std::max({10.0, std::sqrt(n), a_max, c_norm});
    x[k] = xi * RMatrix::Identity(m_.n[k], m_.n[k]);
    z[k] = zeta * RMatrix::Identity(m_.n[k], m_.n[k]);
  }
  xl = RVector::Zero(nl);
  RVector zl = RVector::Zero(nl);
  if (nl > 0) {
    double ratio = 0.0;
    double a_max = 0.0;
    for (const auto& row : m_.rows) {
      if (row.lp < 0) continue;
      ratio = std::max(ratio, (1.0 + std::abs(row.b)) / (1.0 + std::abs(row.lp_coef)));
      a_max = std::max(a_max, std::abs(row.lp_coef));
    }
    xl.setConstant(std::max({10.0, std::sqrt(double(nl)), nl * ratio}));
    zl.setConstant(std::max({10.0, std::sqrt(double(nl)), a_max}));
  }
  y = RVector::Zero(nr_);

  const double b_norm = b_.norm();
  const double c_norm = std::sqrt(c_norm_total);
  double dim = nl;
  for (int n : m_.n) dim += n;

  std::vector<RMatrix> aty;
  RVector aty_lp;
  int stall = 0;

  for (int iter = 0;; ++iter) {
    // Residuals and objectives.
    const RVector ax = apply_a(x, xl);
    const RVector rp = b_ - ax;
    apply_at(y, aty, aty_lp);
    std::vector<RMatrix> rd(nb_);
    double rd_sq = 0.0;
    double pobj = 0.0;
    double comp = xl.dot(zl);
    double cross = 0.0;
    double cert_sq = 0.0;  // ||A^T y + Z||^2
    for (std::size_t k = 0; k < nb_; ++k) {
      rd[k] = m_.c[k] - aty[k] - z[k];
      rd_sq += rd[k].squaredNorm();
      pobj += m_.c[k].cwiseProduct(x[k]).sum();
      comp += x[k].cwiseProduct(z[k]).sum();
      cross += rd[k].cwiseProduct(x[k]).sum();
      cert_sq += (aty[k] + z[k]).squaredNorm();
    }
    const RVector rdl = -aty_lp - zl;
    rd_sq += rdl.squaredNorm();
    cross = std::abs(cross + rdl.dot(xl));
    cert_sq += (aty_lp + zl).squaredNorm();
    const double dobj = b_.dot(y);
    cross += std::abs(y.dot(rp));

    const double pinf = rp.norm() / (1.0 + b_norm);
    const double dinf = std::sqrt(rd_sq) / (1.0 + c_norm);
    const double gap = obj_scale_ * std::max(std::abs(pobj - dobj), comp) /
                       (1.0 + obj_scale_ * (std::abs(pobj) + std::abs(dobj)));
    sol.primal_objective = pobj;
    sol.dual_objective = dobj;
    sol.gap = gap;
    sol.primal_residual = pinf;
    sol.dual_residual = dinf;
    sol.iterations = iter;
    if (opt_.record_trace) sol.trace.push_back({pobj, dobj, comp, cross, pinf, dinf});

    if (gap <= opt_.tol && pinf <= opt_.tol && dinf <= opt_.tol) {
      sol.status = SdpStatus::optimal;
      return sol;
    }
    if (dobj > 0.0 && std::sqrt(cert_sq) < opt_.infeasibility_tol * dobj) {
      sol.status = SdpStatus::infeasible;
      return sol;
    }
    const RVector ax_lin = ax;  // A(X) + A_l x
    if (pobj < 0.0 && ax_lin.norm() < opt_.infeasibility_tol * -pobj) {
      sol.status = SdpStatus::dual_infeasible;
      return sol;
    }
    if (iter >= opt_.max_iters) {
      sol.status = SdpStatus::max_iters;
      return sol;
    }

    const double mu = comp / dim;

    // NT scaling per block.
    std::vector<NtScaling> nt(nb_);
    std::vector<Eigen::LLT<RMatrix>> chol_x(nb_);
    std::vector<Eigen::LLT<RMatrix>> chol_z(nb_);
    bool broken = false;
    for (std::size_t k = 0; k < nb_ && !broken; ++k) {
      chol_x[k].compute(x[k]);
      chol_z[k].compute(z[k]);
      if (chol_x[k].info() != Eigen::Success || chol_z[k].info() != Eigen::Success) {
        broken = true;
        break;
      }
      const RMatrix lx = chol_x[k].matrixL();
      const RMatrix lz = chol_z[k].matrixL();
      Eigen::JacobiSVD<RMatrix> svd(lz.transpose() * lx, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const RVector s = svd.singularValues();
      if (!(s.minCoeff() > 0.0)) {
        broken = true;
        break;
      }
      const RVector s_isqrt = s.cwiseSqrt().cwiseInverse();
      nt[k].d = s;
      nt[k].g = lx * svd.matrixV() * s_isqrt.asDiagonal();
      // G^-1 = S^1/2 V^T L_x^-1
      const RMatrix lxinv = lx.triangularView<Eigen::Lower>().solve(
          RMatrix::Identity(m_.n[k], m_.n[k]));
      nt[k].ginv = s.cwiseSqrt().asDiagonal() * svd.matrixV().transpose() * lxinv;
      nt[k].w = sym(nt[k].g * nt[k].g.transpose());
    }
    if (broken) {
      sol.status = SdpStatus::numerical_error;
      return sol;
    }

    RMatrix mm = schur(nt, xl, zl);
    const double diag_max = std::max(1e-300, mm.diagonal().cwiseAbs().maxCoeff());
    mm.diagonal().array() += 1e-14 * diag_max;
    Eigen::LDLT<RMatrix> mfac(mm);
    if (mfac.info() != Eigen::Success) {
      sol.status = SdpStatus::numerical_error;
      return sol;
    }

    // W R_d W is shared by predictor and corrector.
    std::vector<RMatrix> wrdw(nb_);
    for (std::size_t k = 0; k < nb_; ++k) wrdw[k] = sym(nt[k].w * rd[k] * nt[k].w);

    struct Direction {
      std::vector<RMatrix> dx, dz;
      RVector dxl, dzl, dy;
    };
    auto solve_dir = [&](const std::vector<RMatrix>& rhat, const RVector& rc_lp) {
      Direction d;
      d.dx.resize(nb_);
      d.dz.resize(nb_);
      std::vector<RMatrix> grg(nb_);
      for (std::size_t k = 0; k < nb_; ++k) grg[k] = sym(nt[k].g * rhat[k] * nt[k].g.transpose());
      // LP: dx = rc/z - (x/z) dz, dz = rdl - A_l^T dy
      RVector lp_part = RVector::Zero(nl);
      for (int j = 0; j < nl; ++j) lp_part(j) = rc_lp(j) / zl(j) - xl(j) / zl(j) * rdl(j);
      const RVector h = rp - apply_a(grg, lp_part) + apply_a(wrdw, RVector::Zero(nl));
      d.dy = mfac.solve(h);
      std::vector<RMatrix> atdy;
      RVector atdy_lp;
      apply_at(d.dy, atdy, atdy_lp);
      for (std::size_t k = 0; k < nb_; ++k) {
        d.dz[k] = sym(rd[k] - atdy[k]);
        d.dx[k] = sym(grg[k] - nt[k].w * d.dz[k] * nt[k].w);
      }
      d.dzl = rdl - atdy_lp;
      d.dxl.resize(nl);
      for (int j = 0; j < nl; ++j) d.dxl(j) = (rc_lp(j) - xl(j) * d.dzl(j)) / zl(j);
      return d;
    };
    auto step_lengths = [&](const Direction& d, double& ap, double& ad) {
      ap = max_step_lp(xl, d.dxl);
      ad = max_step_lp(zl, d.dzl);
      for (std::size_t k = 0; k < nb_; ++k) {
        ap = std::min(ap, max_step(chol_x[k], d.dx[k]));
        ad = std::min(ad, max_step(chol_z[k], d.dz[k]));
      }
    };

    // Predictor.
    std::vector<RMatrix> rhat(nb_);
    for (std::size_t k = 0; k < nb_; ++k) rhat[k] = -RMatrix(nt[k].d.asDiagonal());
    RVector rc_lp = -xl.cwiseProduct(zl);
    const Direction aff = solve_dir(rhat, rc_lp);
    double ap = 0.0;
    double ad = 0.0;
    step_lengths(aff, ap, ad);
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    double comp_aff = (xl + ap * aff.dxl).dot(zl + ad * aff.dzl);
    for (std::size_t k = 0; k < nb_; ++k) {
      comp_aff += (x[k] + ap * aff.dx[k]).cwiseProduct(z[k] + ad * aff.dz[k]).sum();
    }
    const double mu_aff = std::max(0.0, comp_aff / dim);
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    // Corrector.
    for (std::size_t k = 0; k < nb_; ++k) {
      const RMatrix dxh = nt[k].ginv * aff.dx[k] * nt[k].ginv.transpose();
      const RMatrix dzh = nt[k].g.transpose() * aff.dz[k] * nt[k].g;
      RMatrix rhs = -(dxh * dzh + dzh * dxh);
      const RVector& dd = nt[k].d;
      rhs.diagonal().array() += 2.0 * sigma * mu;
      rhs.diagonal() -= 2.0 * dd.cwiseAbs2();
      for (Eigen::Index j = 0; j < rhs.cols(); ++j) {
        for (Eigen::Index i = 0; i < rhs.rows(); ++i) rhs(i, j) /= dd(i) + dd(j);
      }
      rhat[k] = sym(rhs);
    }
    rc_lp = RVector::Constant(nl, sigma * mu) - xl.cwiseProduct(zl) - aff.dxl.cwiseProduct(aff.dzl);
    const Direction dir = solve_dir(rhat, rc_lp);
    step_lengths(dir, ap, ad);
    const double gamma = 0.9 + 0.09 * std::min({1.0, ap, ad});
    ap = std::min(1.0, gamma * ap);
    ad = std::min(1.0, gamma * ad);
    if (!std::isfinite(ap) || !std::isfinite(ad) || !dir.dy.allFinite()) {
      sol.status = SdpStatus::numerical_error;
      return sol;
    }

    for (std::size_t k = 0; k < nb_; ++k) {
      x[k] = sym(x[k] + ap * dir.dx[k]);
      z[k] = sym(z[k] + ad * dir.dz[k]);
    }
    xl += ap * dir.dxl;
    zl += ad * dir.dzl;
    y += ad * dir.dy;

    stall = (ap < 1e-9 && ad < 1e-9) ? stall + 1 : 0;
    if (stall >= 3) {
      sol.status = SdpStatus::numerical_error;
      return sol;
    }
  }
}

}  // namespace

SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& options) {
  problem.validate();
  if (!(options.tol > 0.0) || options.max_iters < 1) {
    throw std::invalid_argument("sdp: invalid options");
  }
  const std::size_t nb = problem.block_sizes.size();
  Model model;
  for (std::size_t k = 0; k < nb; ++k) {
    model.n.push_back(2 * problem.block_sizes[k]);
    model.c.push_back(problem.cost[k].size() == 0
                          ? RMatrix::Zero(model.n.back(), model.n.back())
                          : embed(problem.cost[k]));
  }

  SdpSolution infeasible_early;
  infeasible_early.status = SdpStatus::infeasible;
  bool trivially_infeasible = false;

  auto push_row = [&](Row row, Sense sense, int source) {
    double nsq = 0.0;
    for (const auto& t : row.terms) nsq += t.norm_sq();
    if (nsq == 0.0) {
      const bool ok = sense == Sense::eq ? row.b == 0.0 : row.b <= 0.0;
      if (!ok) trivially_infeasible = true;
      return;
    }
    const double scale = 1.0 / std::sqrt(nsq);
    for (auto& t : row.terms) t.scale(scale);
    row.b *= scale;
    row.row_scale = scale;
    row.source = source;
    if (sense == Sense::geq) {
      row.lp = model.n_lp++;
      row.lp_coef = -scale;
    }
    model.rows.push_back(std::move(row));
  };

  int source = 0;
  for (const auto& con : problem.constraints) {
    Row row;
    row.b = con.rhs;
    for (std::size_t k = 0; k < nb; ++k) {
      if (con.blocks[k].size() == 0) continue;
      if (con.blocks[k].cwiseAbs().maxCoeff() == 0.0) continue;
      row.terms.push_back(make_term(static_cast<int>(k), embed(con.blocks[k])));
    }
    push_row(std::move(row), con.sense, source++);
  }
  for (const auto& fd : problem.fixed_diagonals) {
    Row row;
    row.b = fd.value;
    Term t;
    t.block = fd.block;
    const int n = problem.block_sizes[static_cast<std::size_t>(fd.block)];
    t.trip = {{fd.index, fd.index, 0.5}, {fd.index + n, fd.index + n, 0.5}};
    row.terms.push_back(std::move(t));
    push_row(std::move(row), Sense::eq, source++);
  }
  if (trivially_infeasible) return infeasible_early;

  double beta = 1.0;
  for (const auto& row : model.rows) beta = std::max(beta, std::abs(row.b));
  for (auto& row : model.rows) row.b /= beta;
  double c_norm_sq = 0.0;
  for (const auto& c : model.c) c_norm_sq += c.squaredNorm();
  const double gamma_c = std::max(1.0, std::sqrt(c_norm_sq));
  for (auto& c : model.c) c /= gamma_c;

  std::vector<double> row_scales;
  std::vector<int> sources;
  for (const auto& row : model.rows) {
    row_scales.push_back(row.row_scale);
    sources.push_back(row.source);
  }

  std::vector<RMatrix> x;
  std::vector<RMatrix> z;
  RVector xl;
  RVector y;
  const double obj_scale = beta * gamma_c;
  Solver solver(std::move(model), options, obj_scale);
  SdpSolution sol = solver.run(x, xl, y, z);

  sol.primal_objective *= obj_scale;
  sol.dual_objective *= obj_scale;
  for (auto& it : sol.trace) {
    it.primal_objective *= obj_scale;
    it.dual_objective *= obj_scale;
    it.complementarity *= obj_scale;
    it.cross_term *= obj_scale;
  }
  sol.x.clear();
  for (std::size_t k = 0; k < nb; ++k) sol.x.push_back(beta * unembed(x[k]));
  sol.y = RVector::Zero(problem.constraint_count());
  for (std::size_t i = 0; i < sources.size(); ++i) {
    sol.y(sources[i]) = y(static_cast<Eigen::Index>(i)) * gamma_c * row_scales[i];
  }
  return sol;
}

void write_sdp_triplets(std::ostream& out, const SdpProblem& problem) {
  out << "blocks";
  for (int n : problem.block_sizes) out << ' ' << n;
  out << '\n';
  out << std::setprecision(17);
  auto dump = [&](const std::string& tag, std::size_t k, const CMatrix& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      for (Eigen::Index i = 0; i <= j; ++i) {
        if (a(i, j) == cplx(0.0, 0.0)) continue;
        out << tag << ' ' << k << ' ' << i << ' ' << j << ' ' << a(i, j).real() << ' '
            << a(i, j).imag() << '\n';
      }
    }
  };
  for (std::size_t k = 0; k < problem.cost.size(); ++k) dump("C", k, problem.cost[k]);
  for (std::size_t c = 0; c < problem.constraints.size(); ++c) {
    const auto& con = problem.constraints[c];
    out << "row " << c << ' ' << (con.sense == Sense::eq ? "eq" : "geq") << ' ' << con.rhs << '\n';
    for (std::size_t k = 0; k < con.blocks.size(); ++k) {
      dump("A" + std::to_string(c), k, con.blocks[k]);
    }
  }
  for (const auto& fd : problem.fixed_diagonals) {
    out << "diag " << fd.block << ' ' << fd.index << ' ' << fd.value << '\n';
  }
}

}  // namespace riscnoma
