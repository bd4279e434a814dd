// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0
//
// Infeasible-start primal-dual path following with Nesterov-Todd scaling and
// a Mehrotra predictor-corrector.  For each PSD block the scaling G satisfies
// G^-1 X G^-T = G^T S G = Lambda and W = G G^T; the Newton system is reduced to
// the Schur complement M_ij = <A_i, W A_j W> + sum_l a_il a_jl x_l / s_l.

#include <algorithm>
#include <cmath>
#include <limits>

#include "nonphys/kernels.hpp"
#include "nonphys/sdp.hpp"

namespace nonphys::sdp {
namespace {

struct Entry {
  int p;
  int q;
  double v;
};

struct LpColumn {
  int var;
  double sign;
};

// Standard-form view of a presolved program: PSD blocks plus one orthant.
struct Problem {
  int m = 0;
  std::vector<int> psd_block;  // program block id
  std::vector<int> psd_n;
  std::vector<std::vector<std::vector<Entry>>> psd_rows;  // [k][i]
  std::vector<std::vector<int>> psd_touch;                // rows with entries on k
  std::vector<RealMatrix> C;
  std::vector<LpColumn> lp;
  std::vector<std::vector<std::pair<int, double>>> lp_rows;  // [i]
  RealVector c_lp;
  RealVector b;
};

Problem build_problem(const ConeProgram& p) {
  Problem pr;
  pr.m = p.num_constraints();
  pr.b = p.b();
  std::vector<int> psd_of_block(p.blocks().size(), -1);
  std::vector<int> lp_of_var(p.num_vars(), -1);
  for (int k = 0; k < static_cast<int>(p.blocks().size()); ++k) {
    const Block& bl = p.blocks()[k];
    if (bl.kind == BlockKind::kPsd) {
      psd_of_block[k] = static_cast<int>(pr.psd_block.size());
      pr.psd_block.push_back(k);
      pr.psd_n.push_back(bl.size);
      RealMatrix c = p.block_matrix(p.c(), k);
      pr.C.push_back(0.5 * (c + c.transpose()));
    } else {
      for (int i = 0; i < bl.size; ++i) {
        const int var = p.offset(k) + i;
        lp_of_var[var] = static_cast<int>(pr.lp.size());
        pr.lp.push_back({var, 1.0});
        if (bl.kind == BlockKind::kFree) pr.lp.push_back({var, -1.0});
      }
    }
  }
  const int nk = static_cast<int>(pr.psd_block.size());
  pr.c_lp.resize(static_cast<Eigen::Index>(pr.lp.size()));
  for (std::size_t l = 0; l < pr.lp.size(); ++l)
    pr.c_lp(l) = pr.lp[l].sign * p.c()(pr.lp[l].var);

  // Variable -> (psd index, p, q) lookup.
  std::vector<int> var_block(p.num_vars(), -1);
  for (int k = 0; k < nk; ++k) {
    const int blk = pr.psd_block[k];
    for (int t = 0; t < pr.psd_n[k] * pr.psd_n[k]; ++t) var_block[p.offset(blk) + t] = k;
  }

  pr.psd_rows.assign(nk, std::vector<std::vector<Entry>>(pr.m));
  pr.psd_touch.assign(nk, {});
  pr.lp_rows.assign(pr.m, {});
  for (int i = 0; i < pr.m; ++i) {
    for (const auto& [var, v] : p.rows()[i].entries) {
      const int k = var_block[var];
      if (k >= 0) {
        const int n = pr.psd_n[k];
        const int t = var - p.offset(pr.psd_block[k]);
        const int r = t % n;
        const int c = t / n;
        pr.psd_rows[k][i].push_back({r, c, 0.5 * v});
        pr.psd_rows[k][i].push_back({c, r, 0.5 * v});
      } else {
        const int l = lp_of_var[var];
        pr.lp_rows[i].emplace_back(l, v * pr.lp[l].sign);
        if (p.blocks().size() > 0 && l + 1 < static_cast<int>(pr.lp.size()) &&
            pr.lp[l + 1].var == var)
          pr.lp_rows[i].emplace_back(l + 1, v * pr.lp[l + 1].sign);
      }
    }
    for (int k = 0; k < nk; ++k) {
      auto& e = pr.psd_rows[k][i];
      if (e.empty()) continue;
      std::sort(e.begin(), e.end(), [](const Entry& a, const Entry& b) {
        return a.q != b.q ? a.q < b.q : a.p < b.p;
      });
      std::vector<Entry> merged;
      for (const Entry& x : e) {
        if (!merged.empty() && merged.back().p == x.p && merged.back().q == x.q)
          merged.back().v += x.v;
        else
          merged.push_back(x);
      }
      std::erase_if(merged, [](const Entry& x) { return x.v == 0.0; });
      e = std::move(merged);
      if (!e.empty()) pr.psd_touch[k].push_back(i);
    }
  }
  return pr;
}

struct Iterate {
  std::vector<RealMatrix> X, S;
  RealVector x, s, y;
};

struct Scaling {
  std::vector<RealMatrix> G, Ginv, W;
  std::vector<RealVector> lam;
};

double inner(const RealMatrix& a, const RealMatrix& b) {
  return kernels::dot(a.data(), b.data(), static_cast<std::size_t>(a.size()));
}

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix c(a.rows(), b.cols());
  kernels::gemm(a.rows(), a.cols(), b.cols(), a.data(), b.data(), c.data());
  return c;
}

void symmetrize(RealMatrix& a) { a = 0.5 * (a + a.transpose()).eval(); }

class Ipm {
 public:
  Ipm(const Problem& pr, const SolverConfig& cfg) : pr_(pr), cfg_(cfg) {
    nk_ = static_cast<int>(pr.psd_n.size());
    nlp_ = static_cast<int>(pr.lp.size());
    nu_ = nlp_;
    for (int n : pr.psd_n) nu_ += n;
  }

  RealVector apply_A(const std::vector<RealMatrix>& X, const RealVector& x) const {
    RealVector out = RealVector::Zero(pr_.m);
    for (int k = 0; k < nk_; ++k)
      for (int i : pr_.psd_touch[k]) {
        double s = 0.0;
        for (const Entry& e : pr_.psd_rows[k][i]) s += e.v * X[k](e.p, e.q);
        out(i) += s;
      }
    for (int i = 0; i < pr_.m; ++i)
      for (const auto& [l, v] : pr_.lp_rows[i]) out(i) += v * x(l);
    return out;
  }

  void apply_At(const RealVector& y, std::vector<RealMatrix>& Y, RealVector& ylp) const {
    Y.resize(nk_);
    for (int k = 0; k < nk_; ++k) {
      Y[k] = RealMatrix::Zero(pr_.psd_n[k], pr_.psd_n[k]);
      for (int i : pr_.psd_touch[k])
        for (const Entry& e : pr_.psd_rows[k][i]) Y[k](e.p, e.q) += e.v * y(i);
    }
    ylp = RealVector::Zero(nlp_);
    for (int i = 0; i < pr_.m; ++i)
      for (const auto& [l, v] : pr_.lp_rows[i]) ylp(l) += v * y(i);
  }

  void initial_point(Iterate& it) const {
    it.X.resize(nk_);
    it.S.resize(nk_);
    for (int k = 0; k < nk_; ++k) {
      const int n = pr_.psd_n[k];
      double xi = std::max(10.0, std::sqrt(double(n)));
      double max_a = 0.0;
      for (int i : pr_.psd_touch[k]) {
        double nrm = 0.0;
        for (const Entry& e : pr_.psd_rows[k][i]) nrm += e.v * e.v;
        nrm = std::sqrt(nrm);
        max_a = std::max(max_a, nrm);
        xi = std::max(xi, n * (1.0 + std::abs(pr_.b(i))) / (1.0 + nrm));
      }
      const double eta = std::max(
          {10.0, std::sqrt(double(n)),
           (1.0 + std::max(max_a, pr_.C[k].norm())) / std::sqrt(double(n))});
      it.X[k] = xi * RealMatrix::Identity(n, n);
      it.S[k] = eta * RealMatrix::Identity(n, n);
    }
    double xi = std::max(10.0, std::sqrt(double(std::max(nlp_, 1))));
    double max_a = 0.0;
    for (int i = 0; i < pr_.m; ++i) {
      double nrm = 0.0;
      for (const auto& e : pr_.lp_rows[i]) nrm += e.second * e.second;
      nrm = std::sqrt(nrm);
      if (pr_.lp_rows[i].empty()) continue;
      max_a = std::max(max_a, nrm);
      xi = std::max(xi, (1.0 + std::abs(pr_.b(i))) / (1.0 + nrm));
    }
    const double eta = std::max(10.0, 1.0 + std::max(max_a, pr_.c_lp.size() ? pr_.c_lp.cwiseAbs().maxCoeff() : 0.0));
    it.x = RealVector::Constant(nlp_, xi);
    it.s = RealVector::Constant(nlp_, eta);
    it.y = RealVector::Zero(pr_.m);
  }

  bool compute_scaling(const Iterate& it, Scaling& sc) const {
    sc.G.resize(nk_);
    sc.Ginv.resize(nk_);
    sc.W.resize(nk_);
    sc.lam.resize(nk_);
    for (int k = 0; k < nk_; ++k) {
      Eigen::LLT<RealMatrix> lx(it.X[k]);
      Eigen::LLT<RealMatrix> ls(it.S[k]);
      if (lx.info() != Eigen::Success || ls.info() != Eigen::Success) return false;
      const RealMatrix LX = lx.matrixL();
      const RealMatrix LS = ls.matrixL();
      Eigen::JacobiSVD<RealMatrix> svd(LS.transpose() * LX,
                                       Eigen::ComputeFullU | Eigen::ComputeFullV);
      const RealVector lam = svd.singularValues();
      if (lam.minCoeff() <= 0.0 || !std::isfinite(lam.maxCoeff())) return false;
      const RealVector isq = lam.cwiseSqrt().cwiseInverse();
      sc.G[k] = LX * svd.matrixV() * isq.asDiagonal();
      sc.Ginv[k] = isq.asDiagonal() * svd.matrixU().transpose() * LS.transpose();
      sc.W[k] = matmul(sc.G[k], sc.G[k].transpose());
      symmetrize(sc.W[k]);
      sc.lam[k] = lam;
    }
    return true;
  }

  // Assembles and factors the Schur complement in place (lower triangle).
  bool factor_schur(const Scaling& sc, const Iterate& it, RealMatrix& L) const {
    const int m = pr_.m;
    L = RealMatrix::Zero(m, m);
    for (int k = 0; k < nk_; ++k) {
      const int n = pr_.psd_n[k];
      const RealMatrix& W = sc.W[k];
      RealMatrix Gj(n, n);
      for (int j : pr_.psd_touch[k]) {
        const auto& Aj = pr_.psd_rows[k][j];
        // Gj = W Aj W
        if (static_cast<int>(Aj.size()) < n) {
          Gj.setZero();
          for (int c = 0; c < n; ++c) {
            double* gc = Gj.data() + static_cast<std::size_t>(c) * n;
            for (const Entry& e : Aj)
              kernels::axpy(e.v * W(e.q, c), W.data() + static_cast<std::size_t>(e.p) * n, gc, n);
          }
        } else {
          RealMatrix T = RealMatrix::Zero(n, n);  // Aj W
          for (const Entry& e : Aj) T.row(e.p) += e.v * W.row(e.q);
          Gj = matmul(W, T);
        }
        for (int i : pr_.psd_touch[k]) {
          if (i < j) continue;
          double s = 0.0;
          for (const Entry& e : pr_.psd_rows[k][i]) s += e.v * Gj(e.p, e.q);
          L(i, j) += s;
        }
      }
    }
    if (nlp_ > 0) {
      const RealVector d = it.x.cwiseQuotient(it.s);
      for (int i = 0; i < m; ++i) {
        if (pr_.lp_rows[i].empty()) continue;
        for (int j = 0; j <= i; ++j) {
          if (pr_.lp_rows[j].empty()) continue;
          double s = 0.0;
          for (const auto& [la, va] : pr_.lp_rows[i])
            for (const auto& [lb, vb] : pr_.lp_rows[j])
              if (la == lb) s += va * vb * d(la);
          L(i, j) += s;
        }
      }
    }
    double maxdiag = 0.0;
    for (int i = 0; i < m; ++i) maxdiag = std::max(maxdiag, L(i, i));
    schur_ = L;
    const RealMatrix& base = schur_;
    for (int attempt = 0; attempt < 4; ++attempt) {
      if (attempt > 0) {
        L = base;
        const double reg = maxdiag * std::pow(10.0, -14 + 2 * attempt);
        for (int i = 0; i < m; ++i) L(i, i) += reg;
      }
      if (cholesky(L)) return true;
    }
    return false;
  }

  // Left-looking column Cholesky on the lower triangle of a column-major matrix.
  static bool cholesky(RealMatrix& L) {
    const Eigen::Index m = L.rows();
    for (Eigen::Index j = 0; j < m; ++j) {
      double* cj = L.data() + j * m;
      for (Eigen::Index k = 0; k < j; ++k) {
        const double ljk = L(j, k);
        if (ljk != 0.0) kernels::axpy(-ljk, L.data() + k * m + j, cj + j, m - j);
      }
      const double d = cj[j];
      if (!(d > 0.0) || !std::isfinite(d)) return false;
      const double r = std::sqrt(d);
      for (Eigen::Index i = j; i < m; ++i) cj[i] /= r;
    }
    for (Eigen::Index j = 0; j < m; ++j)
      for (Eigen::Index i = 0; i < j; ++i) L(i, j) = 0.0;
    return true;
  }

  static void chol_solve(const RealMatrix& L, RealVector& v) {
    const Eigen::Index m = L.rows();
    for (Eigen::Index j = 0; j < m; ++j) {
      v(j) /= L(j, j);
      if (j + 1 < m) kernels::axpy(-v(j), L.data() + j * m + j + 1, v.data() + j + 1, m - j - 1);
    }
    for (Eigen::Index j = m - 1; j >= 0; --j) {
      const double s = j + 1 < m ? kernels::dot(L.data() + j * m + j + 1, v.data() + j + 1, m - j - 1) : 0.0;
      v(j) = (v(j) - s) / L(j, j);
    }
  }

  struct Direction {
    std::vector<RealMatrix> dX, dS;
    RealVector dx, ds, dy;
  };

  void solve_direction(const Scaling& sc, const Iterate& it, const RealMatrix& L,
                       const RealVector& rp, const std::vector<RealMatrix>& Rd,
                       const RealVector& rd_lp, const std::vector<RealMatrix>& Rc,
                       const RealVector& rc_lp, Direction& d) const {
    std::vector<RealMatrix> tmp(nk_);
    for (int k = 0; k < nk_; ++k)
      tmp[k] = Rc[k] - matmul(matmul(sc.W[k], Rd[k]), sc.W[k]);
    const RealVector xs = nlp_ > 0 ? RealVector(it.x.cwiseQuotient(it.s)) : RealVector();
    const RealVector tlp = nlp_ > 0 ? RealVector(rc_lp - xs.cwiseProduct(rd_lp)) : RealVector();
    const RealVector rhs = rp - apply_A(tmp, tlp);
    d.dy = rhs;
    chol_solve(L, d.dy);
    // Refine against the unregularized Schur matrix; near the optimum the
    // factor may carry a diagonal shift or lose accuracy to conditioning.
    for (int pass = 0; pass < 3; ++pass) {
      RealVector r = rhs - schur_.selfadjointView<Eigen::Lower>() * d.dy;
      if (r.norm() <= 1e-15 * (1.0 + rhs.norm())) break;
      chol_solve(L, r);
      d.dy += r;
    }
    std::vector<RealMatrix> Aty;
    RealVector aty_lp;
    apply_At(d.dy, Aty, aty_lp);
    d.dS.resize(nk_);
    d.dX.resize(nk_);
    for (int k = 0; k < nk_; ++k) {
      d.dS[k] = Rd[k] - Aty[k];
      symmetrize(d.dS[k]);
      d.dX[k] = Rc[k] - matmul(matmul(sc.W[k], d.dS[k]), sc.W[k]);
      symmetrize(d.dX[k]);
    }
    if (nlp_ > 0) {
      d.ds = rd_lp - aty_lp;
      d.dx = rc_lp - xs.cwiseProduct(d.ds);
    }
  }

  static double max_step_psd(const RealVector& lam, const RealMatrix& dtilde) {
    const RealVector isq = lam.cwiseSqrt().cwiseInverse();
    RealMatrix b = isq.asDiagonal() * dtilde * isq.asDiagonal();
    symmetrize(b);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(b, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
  }

  static double max_step_lp(const RealVector& v, const RealVector& dv) {
    double a = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (dv(i) < 0.0) a = std::min(a, -v(i) / dv(i));
    return a;
  }

  void step_lengths(const Scaling& sc, const Iterate& it, const Direction& d,
                    std::vector<RealMatrix>* dXt, std::vector<RealMatrix>* dSt,
                    double& ap, double& ad) const {
    ap = std::numeric_limits<double>::infinity();
    ad = ap;
    dXt->resize(nk_);
    dSt->resize(nk_);
    for (int k = 0; k < nk_; ++k) {
      (*dXt)[k] = matmul(matmul(sc.Ginv[k], d.dX[k]), sc.Ginv[k].transpose());
      (*dSt)[k] = matmul(matmul(sc.G[k].transpose(), d.dS[k]), sc.G[k]);
      symmetrize((*dXt)[k]);
      symmetrize((*dSt)[k]);
      ap = std::min(ap, max_step_psd(sc.lam[k], (*dXt)[k]));
      ad = std::min(ad, max_step_psd(sc.lam[k], (*dSt)[k]));
    }
    if (nlp_ > 0) {
      ap = std::min(ap, max_step_lp(it.x, d.dx));
      ad = std::min(ad, max_step_lp(it.s, d.ds));
    }
  }

  Solution run(const ConeProgram& prog) {
    Solution sol;
    Iterate it;
    initial_point(it);
    const double bnorm = pr_.b.norm();
    double cnorm2 = pr_.c_lp.squaredNorm();
    for (const RealMatrix& c : pr_.C) cnorm2 += c.squaredNorm();
    const double cnorm = std::sqrt(cnorm2);

    double best_merit = std::numeric_limits<double>::infinity();
    struct Snapshot {
      Iterate it;
      double merit = std::numeric_limits<double>::infinity();
      double pobj = 0.0, dobj = 0.0, pinf = 0.0, dinf = 0.0, relgap = 0.0;
    } best;
    int best_iter = 0;
    Status status = Status::kMaxIterations;
    RealVector rp;
    std::vector<RealMatrix> Rd(nk_);
    RealVector rd_lp;
    double pobj = 0.0, dobj = 0.0, pinf = 0.0, dinf = 0.0, relgap = 0.0;
    int iter = 0;

    for (;; ++iter) {
      rp = pr_.b - apply_A(it.X, it.x);
      std::vector<RealMatrix> Aty;
      RealVector aty_lp;
      apply_At(it.y, Aty, aty_lp);
      double rdn2 = 0.0;
      pobj = 0.0;
      double compl_ = 0.0, rdx = 0.0;
      for (int k = 0; k < nk_; ++k) {
        Rd[k] = pr_.C[k] - it.S[k] - Aty[k];
        rdn2 += Rd[k].squaredNorm();
        pobj += inner(pr_.C[k], it.X[k]);
        compl_ += inner(it.X[k], it.S[k]);
        rdx += inner(Rd[k], it.X[k]);
      }
      if (nlp_ > 0) {
        rd_lp = pr_.c_lp - it.s - aty_lp;
        rdn2 += rd_lp.squaredNorm();
        pobj += pr_.c_lp.dot(it.x);
        compl_ += it.x.dot(it.s);
        rdx += rd_lp.dot(it.x);
      }
      dobj = pr_.b.dot(it.y);
      pinf = rp.norm() / (1.0 + bnorm);
      dinf = std::sqrt(rdn2) / (1.0 + cnorm);
      relgap = std::abs(pobj - dobj) / std::max(1.0, std::abs(pobj));
      const double mu = compl_ / std::max(nu_, 1);

      if (cfg_.record_log)
        sol.log.push_back({iter, pobj + prog.objective_constant(),
                           dobj + prog.objective_constant(), pinf, dinf, mu, compl_,
                           -it.y.dot(rp) + rdx, last_ap_, last_ad_});

      if (pinf <= cfg_.feas_tol && dinf <= cfg_.feas_tol && relgap <= cfg_.gap_tol) {
        status = Status::kOptimal;
        break;
      }
      double xnorm = it.x.size() ? it.x.cwiseAbs().maxCoeff() : 0.0;
      double snorm = it.s.size() ? it.s.cwiseAbs().maxCoeff() : 0.0;
      for (int k = 0; k < nk_; ++k) {
        xnorm = std::max(xnorm, it.X[k].norm());
        snorm = std::max(snorm, it.S[k].norm());
      }
      const double ynorm = it.y.size() ? it.y.cwiseAbs().maxCoeff() : 0.0;
      if (xnorm > cfg_.divergence_threshold) {
        status = Status::kDualInfeasible;
        break;
      }
      if (std::max(ynorm, snorm) > cfg_.divergence_threshold) {
        status = Status::kPrimalInfeasible;
        break;
      }
      const double merit = std::max({relgap / cfg_.gap_tol, pinf / cfg_.feas_tol,
                                     dinf / cfg_.feas_tol});
      if (merit < best.merit) best = {it, merit, pobj, dobj, pinf, dinf, relgap};
      if (merit < 0.9 * best_merit) {
        best_merit = merit;
        best_iter = iter;
      } else if (iter - best_iter >= cfg_.stagnation_window) {
        status = stalled_status(pinf, dinf);
        break;
      }
      if (iter >= cfg_.max_iterations) break;

      Scaling sc;
      RealMatrix L;
      if (!compute_scaling(it, sc) || !factor_schur(sc, it, L)) {
        status = stalled_status(pinf, dinf);
        break;
      }

      // Predictor.
      std::vector<RealMatrix> Rc(nk_);
      for (int k = 0; k < nk_; ++k) Rc[k] = -it.X[k];
      RealVector rc_lp = nlp_ > 0 ? RealVector(-it.x) : RealVector();
      Direction da;
      solve_direction(sc, it, L, rp, Rd, rd_lp, Rc, rc_lp, da);
      std::vector<RealMatrix> dXt, dSt;
      double ap, ad;
      step_lengths(sc, it, da, &dXt, &dSt, ap, ad);
      ap = std::min(1.0, ap);
      ad = std::min(1.0, ad);
      double mu_aff = 0.0;
      for (int k = 0; k < nk_; ++k)
        mu_aff += inner(it.X[k] + ap * da.dX[k], it.S[k] + ad * da.dS[k]);
      if (nlp_ > 0) mu_aff += (it.x + ap * da.dx).dot(it.s + ad * da.ds);
      mu_aff /= std::max(nu_, 1);
      const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

      // Corrector.
      for (int k = 0; k < nk_; ++k) {
        const RealVector& lam = sc.lam[k];
        const int n = pr_.psd_n[k];
        RealMatrix P = matmul(dXt[k], dSt[k]);
        RealMatrix rhs = -0.5 * (P + P.transpose());
        for (int i = 0; i < n; ++i) rhs(i, i) += sigma * mu - lam(i) * lam(i);
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i) rhs(i, j) *= 2.0 / (lam(i) + lam(j));
        Rc[k] = matmul(matmul(sc.G[k], rhs), sc.G[k].transpose());
        symmetrize(Rc[k]);
      }
      if (nlp_ > 0) {
        rc_lp = (RealVector::Constant(nlp_, sigma * mu) - it.x.cwiseProduct(it.s) -
                 da.dx.cwiseProduct(da.ds))
                    .cwiseQuotient(it.s);
      }
      Direction d;
      solve_direction(sc, it, L, rp, Rd, rd_lp, Rc, rc_lp, d);
      step_lengths(sc, it, d, &dXt, &dSt, ap, ad);
      ap = std::min(1.0, cfg_.step_fraction * ap);
      ad = std::min(1.0, cfg_.step_fraction * ad);
      last_ap_ = ap;
      last_ad_ = ad;

      for (int k = 0; k < nk_; ++k) {
        it.X[k] += ap * d.dX[k];
        it.S[k] += ad * d.dS[k];
        symmetrize(it.X[k]);
        symmetrize(it.S[k]);
      }
      if (nlp_ > 0) {
        it.x += ap * d.dx;
        it.s += ad * d.ds;
      }
      it.y += ad * d.dy;
    }

    // Late iterations can lose accuracy once precision runs out; report the
    // best point seen rather than the last one.
    if (status == Status::kMaxIterations && best.merit < std::numeric_limits<double>::infinity()) {
      it = best.it;
      pobj = best.pobj;
      dobj = best.dobj;
      pinf = best.pinf;
      dinf = best.dinf;
      relgap = best.relgap;
    }
    sol.status = status;
    sol.iterations = iter;
    sol.primal_objective = pobj + prog.objective_constant();
    sol.dual_objective = dobj + prog.objective_constant();
    sol.primal_infeasibility = pinf;
    sol.dual_infeasibility = dinf;
    sol.relative_gap = relgap;
    sol.x = RealVector::Zero(prog.num_vars());
    sol.s = RealVector::Zero(prog.num_vars());
    for (int k = 0; k < nk_; ++k) {
      const int off = prog.offset(pr_.psd_block[k]);
      const int n = pr_.psd_n[k];
      Eigen::Map<RealMatrix>(sol.x.data() + off, n, n) = it.X[k];
      Eigen::Map<RealMatrix>(sol.s.data() + off, n, n) = it.S[k];
    }
    for (int l = 0; l < nlp_; ++l) {
      sol.x(pr_.lp[l].var) += pr_.lp[l].sign * it.x(l);
      if (pr_.lp[l].sign > 0) sol.s(pr_.lp[l].var) = it.s(l);
    }
    sol.y = it.y;
    return sol;
  }

 private:
  // A stall with small residuals is a precision limit, not infeasibility.
  Status stalled_status(double pinf, double dinf) const {
    const double floor = std::max(1e-6, 1e3 * cfg_.feas_tol);
    if (pinf > floor && pinf >= dinf) return Status::kPrimalInfeasible;
    if (dinf > floor) return Status::kDualInfeasible;
    return Status::kMaxIterations;
  }

  const Problem& pr_;
  const SolverConfig& cfg_;
  mutable RealMatrix schur_;  // lower triangle of the last assembled Schur matrix
  int nk_ = 0;
  int nlp_ = 0;
  int nu_ = 0;
  double last_ap_ = 0.0;
  double last_ad_ = 0.0;
};

}  // namespace

Solution solve(const ConeProgram& program, const SolverConfig& config) {
  PresolveResult pre;
  if (config.presolve) {
    pre = presolve(program);
  } else {
    pre.program = program;
    for (int i = 0; i < program.num_constraints(); ++i) pre.kept_rows.push_back(i);
  }
  ConeProgram work = pre.program;
  work.canonicalize();

  Solution sol;
  if (pre.inconsistent) {
    sol.status = Status::kPrimalInfeasible;
    sol.x = RealVector::Zero(program.num_vars());
    sol.s = RealVector::Zero(program.num_vars());
    sol.y = RealVector::Zero(program.num_constraints());
    sol.primal_infeasibility = std::numeric_limits<double>::infinity();
    return sol;
  }
  const Problem pr = build_problem(work);
  Ipm ipm(pr, config);
  sol = ipm.run(work);

  RealVector y = RealVector::Zero(program.num_constraints());
  for (std::size_t r = 0; r < pre.kept_rows.size(); ++r) y(pre.kept_rows[r]) = sol.y(r);
  std::vector<bool> kept(program.num_constraints(), false);
  for (int r : pre.kept_rows) kept[r] = true;
  for (int i = 0; i < program.num_constraints(); ++i)
    if (!kept[i]) sol.dropped_rows.push_back(i);
  sol.y = std::move(y);
  return sol;
}

}  // namespace nonphys::sdp
