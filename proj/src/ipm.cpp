#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>

#include "capsdp/conic.hpp"

namespace capsdp {

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Blocks = std::vector<Mat>;

double inner(const SparseSym& a, const Mat& x) {
  double acc = 0;
  for (std::size_t e = 0; e < a.nnz(); ++e) {
    const int r = a.row[e], c = a.col[e];
    acc += a.val[e] * x(r, c) * (r == c ? 1.0 : 2.0);
  }
  return acc;
}

void add_scaled(Mat& m, const SparseSym& a, double s) {
  for (std::size_t e = 0; e < a.nnz(); ++e) {
    const int r = a.row[e], c = a.col[e];
    m(r, c) += s * a.val[e];
    if (r != c) m(c, r) += s * a.val[e];
  }
}

double frobenius(const SparseSym& a) {
  double acc = 0;
  for (std::size_t e = 0; e < a.nnz(); ++e) acc += a.val[e] * a.val[e] * (a.row[e] == a.col[e] ? 1 : 2);
  return std::sqrt(acc);
}

double dot(const Blocks& a, const Blocks& b) {
  double acc = 0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k].cwiseProduct(b[k]).sum();
  return acc;
}

double norm(const Blocks& a) { return std::sqrt(dot(a, a)); }

Mat sym(const Mat& m) { return 0.5 * (m + m.transpose()); }

struct Piece {
  int cons = 0;
  const SparseSym* entries = nullptr;
  std::vector<int> idx;  // distinct indices touched
  Mat s;                 // entries restricted to idx, as a dense symmetric matrix
};

struct Scaling {
  Mat g;     // W = G G^T
  Mat ginv;  // G^{-1}
  Mat w;
  Vec d;     // G^{-1} X G^{-T} = G^T Z G = diag(d)
  Mat lx;
  Mat lz;
};

class ReferenceIpm {
 public:
  ReferenceIpm(const StandardForm& form, const SolverConfig& config)
      : form_(form), config_(config), nb_(form.block_sizes.size()), m_(form.num_constraints()) {
    pieces_.resize(nb_);
    for (int i = 0; i < m_; ++i) {
      for (const auto& be : form_.a[i]) {
        Piece p;
        p.cons = i;
        p.entries = &be.entries;
        p.idx.insert(p.idx.end(), be.entries.row.begin(), be.entries.row.end());
        p.idx.insert(p.idx.end(), be.entries.col.begin(), be.entries.col.end());
        std::sort(p.idx.begin(), p.idx.end());
        p.idx.erase(std::unique(p.idx.begin(), p.idx.end()), p.idx.end());
        p.s = Mat::Zero(p.idx.size(), p.idx.size());
        for (std::size_t e = 0; e < be.entries.nnz(); ++e) {
          const int r = std::lower_bound(p.idx.begin(), p.idx.end(), be.entries.row[e]) - p.idx.begin();
          const int c = std::lower_bound(p.idx.begin(), p.idx.end(), be.entries.col[e]) - p.idx.begin();
          p.s(r, c) += be.entries.val[e];
          if (r != c) p.s(c, r) += be.entries.val[e];
        }
        pieces_[be.block].push_back(std::move(p));
      }
    }
    c_.resize(nb_);
    for (std::size_t k = 0; k < nb_; ++k) {
      const int n = form_.block_sizes[k];
      c_[k] = Mat::Zero(n, n);
      add_scaled(c_[k], form_.c[k], 1.0);
    }
  }

  StandardSolution run();

 private:
  // A A^T for the least-norm correction of primal directions.
  void factor_gram() {
    Blocks unit = zeros();
    Mat g = Mat::Zero(m_, m_);
    for (std::size_t k = 0; k < nb_; ++k) {
      const auto& pieces = pieces_[k];
      for (std::size_t a = 0; a < pieces.size(); ++a) {
        Mat ak = Mat::Zero(form_.block_sizes[k], form_.block_sizes[k]);
        add_scaled(ak, *pieces[a].entries, 1.0);
        for (std::size_t q = a; q < pieces.size(); ++q) g(pieces[a].cons, pieces[q].cons) += inner(*pieces[q].entries, ak);
      }
    }
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < i; ++j) g(i, j) = g(j, i) = g(i, j) + g(j, i);
    gram_.compute(g);
  }

  // dx += A^T (A A^T)^{-1} (r - A(dx))
  void correct_primal(Blocks& dx, const Vec& r) const {
    const Vec lambda = gram_.solve(r - apply_a(dx));
    const Blocks corr = apply_at(lambda);
    for (std::size_t k = 0; k < nb_; ++k) dx[k] += corr[k];
  }

  Eigen::LDLT<Mat> gram_;

  Vec apply_a(const Blocks& x) const {
    Vec out = Vec::Zero(m_);
    for (int i = 0; i < m_; ++i)
      for (const auto& be : form_.a[i]) out(i) += inner(be.entries, x[be.block]);
    return out;
  }

  Blocks apply_at(const Vec& y) const {
    Blocks out = zeros();
    for (int i = 0; i < m_; ++i)
      for (const auto& be : form_.a[i]) add_scaled(out[be.block], be.entries, y(i));
    return out;
  }

  Blocks zeros() const {
    Blocks out(nb_);
    for (std::size_t k = 0; k < nb_; ++k) out[k] = Mat::Zero(form_.block_sizes[k], form_.block_sizes[k]);
    return out;
  }

  int total_dim() const {
    int n = 0;
    for (int s : form_.block_sizes) n += s;
    return n;
  }

  bool compute_scaling(const Blocks& x, const Blocks& z, std::vector<Scaling>& out) const;
  Mat schur(const std::vector<Scaling>& sc) const;

  const StandardForm& form_;
  const SolverConfig& config_;
  std::size_t nb_;
  int m_;
  std::vector<std::vector<Piece>> pieces_;
  Blocks c_;
};

bool ReferenceIpm::compute_scaling(const Blocks& x, const Blocks& z, std::vector<Scaling>& out) const {
  out.resize(nb_);
  for (std::size_t k = 0; k < nb_; ++k) {
    Eigen::LLT<Mat> cx(x[k]), cz(z[k]);
    if (cx.info() != Eigen::Success || cz.info() != Eigen::Success) return false;
    Scaling& s = out[k];
    s.lx = cx.matrixL();
    s.lz = cz.matrixL();
    Eigen::JacobiSVD<Mat> svd(s.lz.transpose() * s.lx, Eigen::ComputeFullU | Eigen::ComputeFullV);
    s.d = svd.singularValues();
    if (s.d.minCoeff() <= 0) return false;
    const Vec isq = s.d.cwiseSqrt().cwiseInverse();
    s.g = s.lx * svd.matrixV() * isq.asDiagonal();
    s.ginv = isq.asDiagonal() * svd.matrixU().transpose() * s.lz.transpose();
    s.w = sym(s.g * s.g.transpose());
  }
  return true;
}

Mat ReferenceIpm::schur(const std::vector<Scaling>& sc) const {
  Mat m = Mat::Zero(m_, m_);
  for (std::size_t k = 0; k < nb_; ++k) {
    const Mat& w = sc[k].w;
    const auto& pieces = pieces_[k];
    for (std::size_t a = 0; a < pieces.size(); ++a) {
      const Piece& p = pieces[a];
      Mat wr(p.idx.size(), w.cols());
      for (std::size_t r = 0; r < p.idx.size(); ++r) wr.row(r) = w.row(p.idx[r]);
      const Mat b = wr.transpose() * (p.s * wr);  // W A_i W
      for (std::size_t q = a; q < pieces.size(); ++q) m(p.cons, pieces[q].cons) += inner(*pieces[q].entries, b);
    }
  }
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < i; ++j) {
      const double v = m(i, j) + m(j, i);
      m(i, j) = m(j, i) = v;
    }
  return m;
}

StandardSolution ReferenceIpm::run() {
  StandardSolution sol;
  factor_gram();
  const int ntot = std::max(1, total_dim());
  const double normb = form_.b.norm();
  double normc = 0;
  for (const auto& c : c_) normc += c.squaredNorm();
  normc = std::sqrt(normc);

  // SDPT3-style starting point scaled by the data.
  Blocks x = zeros(), z = zeros();
  for (std::size_t k = 0; k < nb_; ++k) {
    const int n = form_.block_sizes[k];
    double xi = std::max(10.0, std::sqrt(double(n)));
    double eta = std::max({10.0, std::sqrt(double(n)), frobenius(form_.c[k])});
    for (const auto& p : pieces_[k]) {
      const double na = frobenius(*p.entries);
      xi = std::max(xi, n * (1 + std::abs(form_.b(p.cons))) / (1 + na));
      eta = std::max(eta, na);
    }
    x[k] = xi * Mat::Identity(n, n);
    z[k] = eta * Mat::Identity(n, n);
  }
  Vec y = Vec::Zero(m_);

  Blocks best_x = x, best_z = z;
  Vec best_y = y;
  double best_err = std::numeric_limits<double>::infinity();
  double best_p = 0, best_d = 0, best_rp = 0, best_rd = 0, best_gap = 0;
  const double near_tol = std::max(1e-6, 100 * config_.tolerance);
  // A stalled run still counts as near-optimal within sqrt(tolerance).
  const double usable_tol = std::max(near_tol, std::sqrt(config_.tolerance));
  int stalls = 0;

  char buf[256];
  std::snprintf(buf, sizeof buf, "%4s %22s %22s %9s %9s %9s %9s %6s %6s", "it", "primal", "dual", "p-res",
                "d-res", "gap", "mu", "a-p", "a-d");
  sol.log.emplace_back(buf);
  if (config_.verbose) std::cerr << buf << "\n";

  double alpha_p = 0, alpha_d = 0;
  for (int it = 0;; ++it) {
    const Vec rp = form_.b - apply_a(x);
    Blocks aty = apply_at(y);
    Blocks rd(nb_);
    for (std::size_t k = 0; k < nb_; ++k) rd[k] = c_[k] - z[k] - aty[k];
    const double pobj = dot(c_, x);
    const double dobj = form_.b.dot(y);
    const double rel_p = rp.norm() / (1 + normb);
    const double rel_d = norm(rd) / (1 + normc);
    const double rel_gap = std::abs(pobj - dobj) / (1 + std::abs(pobj) + std::abs(dobj));
    const double mu = dot(x, z) / ntot;
    const double err = std::max({rel_p, rel_d, rel_gap});

    std::snprintf(buf, sizeof buf, "%4d %+22.15e %+22.15e %9.2e %9.2e %9.2e %9.2e %6.3f %6.3f", it, pobj, dobj,
                  rel_p, rel_d, rel_gap, mu, alpha_p, alpha_d);
    sol.log.emplace_back(buf);
    if (config_.verbose) std::cerr << buf << "\n";

    if (err < best_err) {
      best_err = err;
      best_x = x;
      best_z = z;
      best_y = y;
      best_p = pobj;
      best_d = dobj;
      best_rp = rel_p;
      best_rd = rel_d;
      best_gap = rel_gap;
    }
    sol.iterations = it;
    if (err <= config_.tolerance) {
      sol.status = SolveStatus::kOptimal;
      break;
    }
    // Divergence along a nearly exact ray of the other problem.
    if (dobj > 1e10 * (1 + normc + std::abs(pobj)) && norm(rd) <= near_tol * dobj) {
      sol.status = SolveStatus::kInfeasible;
      sol.message = "dual objective diverges: primal infeasible";
      break;
    }
    if (-pobj > 1e10 * (1 + normb + std::abs(dobj)) && rp.norm() <= near_tol * -pobj) {
      sol.status = SolveStatus::kInfeasible;
      sol.message = "primal objective diverges: dual infeasible";
      break;
    }
    if (it >= config_.max_iterations) {
      sol.message = "iteration limit reached";
      sol.status = SolveStatus::kNumericalFailure;
      break;
    }
    if (stalls >= 5) {
      sol.message = "progress stalled";
      sol.status = SolveStatus::kNumericalFailure;
      break;
    }

    std::vector<Scaling> sc;
    if (!compute_scaling(x, z, sc)) {
      sol.message = "lost positive definiteness";
      sol.status = SolveStatus::kNumericalFailure;
      break;
    }
    Mat schur_m = schur(sc);
    Eigen::LLT<Mat> chol(schur_m);
    Eigen::LDLT<Mat> ldlt;
    const bool use_llt = chol.info() == Eigen::Success;
    if (!use_llt) ldlt.compute(schur_m);

    Blocks wrdw(nb_);
    for (std::size_t k = 0; k < nb_; ++k) wrdw[k] = sc[k].w * rd[k] * sc[k].w;
    const Vec a_wrdw = apply_a(wrdw);

    // Solve for a given right-hand side of the scaled complementarity equation.
    Blocks dxt(nb_), dzt(nb_);  // directions in the scaled space
    auto direction = [&](const Blocks& rhs, Blocks& dx, Blocks& dz, Vec& dy) {
      Blocks grg(nb_), rts(nb_);
      for (std::size_t k = 0; k < nb_; ++k) {
        const Vec& d = sc[k].d;
        Mat rt = rhs[k];
        for (Eigen::Index i = 0; i < rt.rows(); ++i)
          for (Eigen::Index j = 0; j < rt.cols(); ++j) rt(i, j) = 2 * rt(i, j) / (d(i) + d(j));
        grg[k] = sc[k].g * rt * sc[k].g.transpose();
        rts[k] = std::move(rt);
      }
      const Vec r = rp - apply_a(grg) + a_wrdw;
      auto solve_m = [&](const Vec& v) { return use_llt ? Vec(chol.solve(v)) : Vec(ldlt.solve(v)); };
      dy = solve_m(r);
      // Refine against the operator A(W A^T(.) W) applied without forming M.
      double res_norm = std::numeric_limits<double>::infinity();
      for (int pass = 0; pass < 3; ++pass) {
        const Blocks at = apply_at(dy);
        Blocks wdw(nb_);
        for (std::size_t k = 0; k < nb_; ++k) wdw[k] = sc[k].w * at[k] * sc[k].w;
        const Vec res = r - apply_a(wdw);
        const double rn = res.norm();
        if (!(rn < 0.5 * res_norm)) break;
        res_norm = rn;
        dy += solve_m(res);
      }
      const Blocks atdy = apply_at(dy);
      dz.resize(nb_);
      dx.resize(nb_);
      for (std::size_t k = 0; k < nb_; ++k) {
        dz[k] = rd[k] - atdy[k];
        dzt[k] = sym(sc[k].g.transpose() * dz[k] * sc[k].g);
        dxt[k] = rts[k] - dzt[k];
        dx[k] = sym(sc[k].g * dxt[k] * sc[k].g.transpose());
      }
      correct_primal(dx, rp);
      for (std::size_t k = 0; k < nb_; ++k) dxt[k] = sym(sc[k].ginv * dx[k] * sc[k].ginv.transpose());
    };
    // Step to the boundary measured in the scaled space, where X and Z both
    // read diag(d).
    auto steps = [&](double& ap, double& ad) {
      ap = ad = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < nb_; ++k) {
        const Vec isd = sc[k].d.cwiseSqrt().cwiseInverse();
        auto step = [&](const Mat& dt) {
          const Mat t = isd.asDiagonal() * dt * isd.asDiagonal();
          Eigen::SelfAdjointEigenSolver<Mat> es(sym(t), Eigen::EigenvaluesOnly);
          const double lmin = es.eigenvalues()(0);
          return lmin >= 0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
        };
        ap = std::min(ap, step(dxt[k]));
        ad = std::min(ad, step(dzt[k]));
      }
    };

    // Predictor
    Blocks rhs(nb_);
    for (std::size_t k = 0; k < nb_; ++k) rhs[k] = -Mat(sc[k].d.cwiseAbs2().asDiagonal());
    Blocks dx, dz;
    Vec dy;
    direction(rhs, dx, dz, dy);
    double ap, ad;
    steps(ap, ad);
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    double mu_aff = 0;
    for (std::size_t k = 0; k < nb_; ++k) mu_aff += (x[k] + ap * dx[k]).cwiseProduct(z[k] + ad * dz[k]).sum();
    mu_aff /= ntot;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3), 0.0, 1.0);

    // Corrector
    for (std::size_t k = 0; k < nb_; ++k) {
      const int n = form_.block_sizes[k];
      rhs[k] = sigma * mu * Mat::Identity(n, n) - Mat(sc[k].d.cwiseAbs2().asDiagonal()) - sym(dxt[k] * dzt[k]);
    }
    direction(rhs, dx, dz, dy);
    steps(ap, ad);
    alpha_p = std::min(1.0, 0.98 * ap);
    alpha_d = std::min(1.0, 0.98 * ad);
    stalls = (alpha_p < 1e-8 && alpha_d < 1e-8) ? stalls + 1 : 0;

    for (std::size_t k = 0; k < nb_; ++k) {
      x[k] = sym(x[k] + alpha_p * dx[k]);
      z[k] = sym(z[k] + alpha_d * dz[k]);
    }
    y += alpha_d * dy;
  }

  if (sol.status == SolveStatus::kNumericalFailure && best_err <= usable_tol) {
    sol.status = SolveStatus::kNearOptimal;
  }
  x = std::move(best_x);
  z = std::move(best_z);
  y = std::move(best_y);
  sol.primal_objective = best_p;
  sol.dual_objective = best_d;
  sol.rel_primal = best_rp;
  sol.rel_dual = best_rd;
  sol.rel_gap = best_gap;
  sol.x = std::move(x);
  sol.z = std::move(z);
  sol.y = std::move(y);
  return sol;
}

}  // namespace

StandardSolution solve_reference_ipm(const StandardForm& form, const SolverConfig& config) {
  config.validate();
  ReferenceIpm ipm(form, config);
  return ipm.run();
}

}  // namespace capsdp
