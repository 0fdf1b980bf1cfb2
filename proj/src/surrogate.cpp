#include "pgpr/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <fmt/format.h>

namespace pgpr {

void TrainingSet::add_noisy(const ThetaPoint& theta, double value, double sigma) {
  theta.validate();
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("noisy samples need sigma > 0");
  if (!std::isfinite(value)) throw std::invalid_argument("sample value is not finite");
  samples_.push_back({theta, value, sigma, false});
}

void TrainingSet::add_exact(const ThetaPoint& theta, double value) {
  theta.validate();
  if (!std::isfinite(value)) throw std::invalid_argument("sample value is not finite");
  samples_.push_back({theta, value, 0.0, true});
}

std::size_t TrainingSet::exact_count() const {
  return static_cast<std::size_t>(std::count_if(samples_.begin(), samples_.end(), [](const Sample& s) { return s.exact; }));
}

SurrogateModel::SurrogateModel(BasisVector xi_bar, BasisMatrix coeff_cov, double t, VarianceForm form)
    : xi_(std::move(xi_bar)), cov_(std::move(coeff_cov)), t_(t), form_(form) {
  variance_matrix_ = form_ == VarianceForm::posterior ? cov_ : BasisMatrix(cov_ - xi_ * xi_.transpose());
}

double SurrogateModel::mean(const ThetaPoint& theta) const { return xi_.dot(basis_functions(theta)); }

double SurrogateModel::variance(const ThetaPoint& theta) const {
  const BasisVector tv = basis_functions(theta);
  return std::max(0.0, tv.dot(variance_matrix_ * tv));
}

Eigen::Vector2d SurrogateModel::gradient(const ThetaPoint& theta) const {
  const auto jet = basis_jet(theta);
  return {xi_.dot(jet.d1), xi_.dot(jet.d2)};
}

Eigen::Matrix2d SurrogateModel::hessian(const ThetaPoint& theta) const {
  const auto jet = basis_jet(theta);
  Eigen::Matrix2d h;
  h << xi_.dot(jet.d11), xi_.dot(jet.d12), xi_.dot(jet.d12), xi_.dot(jet.d22);
  return h;
}

std::vector<double> SurrogateModel::mean(const kernels::HalfAngles& points) const {
  std::vector<double> out(points.size());
  kernels::active_kernels().mean(points.view(), xi_.data(), out.data());
  return out;
}

std::vector<double> SurrogateModel::variance(const kernels::HalfAngles& points) const {
  std::vector<double> out(points.size());
  // variance_matrix_ is symmetric, so its column-major storage is also row-major.
  kernels::active_kernels().quad_form(points.view(), variance_matrix_.data(), out.data());
  for (auto& v : out) v = std::max(0.0, v);
  return out;
}

std::string SurrogateModel::dump() const {
  std::string out = "pgpr-surrogate v1\n";
  out += fmt::format("t {:.17g}\n", t_);
  out += fmt::format("variance {}\n", form_ == VarianceForm::posterior ? "posterior" : "moment-difference");
  out += "xi";
  for (int s = 0; s < kBasisSize; ++s) out += fmt::format(" {:.17g}", xi_(s));
  out += "\ncov\n";
  for (int r = 0; r < kBasisSize; ++r) {
    for (int c = 0; c < kBasisSize; ++c) out += fmt::format("{}{:.17g}", c == 0 ? "" : " ", cov_(r, c));
    out += "\n";
  }
  out += fmt::format("constraints {}\n", constraints_.size());
  for (const auto& s : constraints_)
    out += fmt::format("{:.17g} {:.17g} {:.17g}\n", s.theta.theta1, s.theta.theta2, s.value);
  return out;
}

SurrogateModel SurrogateModel::parse(const std::string& text) {
  std::istringstream in(text);
  std::string word, version;
  auto expect = [&](const char* key) {
    if (!(in >> word) || word != key) throw std::invalid_argument(fmt::format("model dump: expected '{}'", key));
  };
  expect("pgpr-surrogate");
  if (!(in >> version) || version != "v1") throw std::invalid_argument("model dump: unsupported version");
  double t = 0.0;
  expect("t");
  in >> t;
  expect("variance");
  std::string form;
  in >> form;
  if (form != "posterior" && form != "moment-difference") throw std::invalid_argument("model dump: bad variance form");
  BasisVector xi;
  BasisMatrix cov;
  expect("xi");
  for (int s = 0; s < kBasisSize; ++s) in >> xi(s);
  expect("cov");
  for (int r = 0; r < kBasisSize; ++r)
    for (int c = 0; c < kBasisSize; ++c) in >> cov(r, c);
  std::size_t k = 0;
  expect("constraints");
  in >> k;
  SurrogateModel m(xi, cov, t, form == "posterior" ? VarianceForm::posterior : VarianceForm::moment_difference);
  for (std::size_t i = 0; i < k; ++i) {
    Sample s;
    s.exact = true;
    in >> s.theta.theta1 >> s.theta.theta2 >> s.value;
    m.constraints_.push_back(s);
  }
  if (!in) throw std::invalid_argument("model dump: truncated");
  return m;
}

// Sigma-floor mode: exact samples become rows with weight 1/floor^2. The
// normal matrix would square that weight spread, so the least-squares problem
// is solved by QR of the row-weighted design matrix instead.
SurrogateModel fit_weighted_design(const TrainingSet& data, const FitOptions& options) {
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  const Eigen::Index extra = options.t > 0.0 ? kBasisSize : 0;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n + extra, kBasisSize);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + extra);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Sample& s = data.samples()[r];
    const double root_w = 1.0 / (s.exact ? options.sigma_floor : s.sigma);
    b.row(r) = root_w * basis_functions(s.theta).transpose();
    rhs(r) = root_w * s.value;
  }
  if (extra > 0) {
    // t M = (sqrt(t) D^1/2 V^T)^T (sqrt(t) D^1/2 V^T)
    Eigen::SelfAdjointEigenSolver<BasisMatrix> eig(gram_matrix());
    const Eigen::VectorXd root_d = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt() * std::sqrt(options.t);
    b.bottomRows(extra) = root_d.asDiagonal() * eig.eigenvectors().transpose();
  }

  SurrogateModel model;
  model.t_ = options.t;
  model.form_ = options.variance;
  if (b.rows() < kBasisSize) {
    throw RankDeficientError(fmt::format("{} weighted rows cannot determine {} coefficients", b.rows(), kBasisSize));
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(b);
  qr.setThreshold(1e-15);
  const Eigen::VectorXd r_diag = qr.matrixR().diagonal().head(kBasisSize).cwiseAbs();
  model.diag_.condition = r_diag.minCoeff() > 0.0 ? std::pow(r_diag.maxCoeff() / r_diag.minCoeff(), 2)
                                                  : std::numeric_limits<double>::infinity();
  if (qr.rank() < kBasisSize) {
    throw RankDeficientError(fmt::format(
        "weighted design is rank deficient (rank {} of {}); the mesh does not determine the landscape", qr.rank(),
        kBasisSize));
  }
  model.xi_ = qr.solve(rhs);
  // (B^T B)^-1 = P R^-1 R^-T P^T
  const BasisMatrix r = qr.matrixR().topLeftCorner(kBasisSize, kBasisSize).triangularView<Eigen::Upper>();
  const BasisMatrix r_inv = r.triangularView<Eigen::Upper>().solve(BasisMatrix::Identity());
  const BasisMatrix perm = qr.colsPermutation();
  const BasisMatrix cov = perm * (r_inv * r_inv.transpose()) * perm.transpose();
  model.cov_ = 0.5 * (cov + cov.transpose());
  model.variance_matrix_ = model.form_ == VarianceForm::posterior
                               ? model.cov_
                               : BasisMatrix(model.cov_ - model.xi_ * model.xi_.transpose());
  return model;
}

SurrogateModel fit(const TrainingSet& data, const FitOptions& options) {
  if (!(options.t >= 0.0)) throw std::invalid_argument("t must be >= 0");
  const bool use_constraints = options.exact == ExactHandling::constraints;

  if (!use_constraints) return fit_weighted_design(data, options);

  // Split into constraint rows and weighted rows.
  std::vector<const Sample*> exact;
  kernels::HalfAngles weighted;
  std::vector<double> w, y;
  for (const auto& s : data.samples()) {
    if (s.exact && use_constraints) {
      exact.push_back(&s);
      continue;
    }
    const double sigma = s.sigma;
    weighted.push_back(s.theta.theta1, s.theta.theta2);
    w.push_back(1.0 / (sigma * sigma));
    y.push_back(s.value);
  }

  // Particular solution and null-space basis of the constraints.
  BasisVector xi_p = BasisVector::Zero();
  Eigen::MatrixXd null_basis = Eigen::MatrixXd::Identity(kBasisSize, kBasisSize);
  int rank = 0;
  if (!exact.empty()) {
    Eigen::MatrixXd c(static_cast<Eigen::Index>(exact.size()), kBasisSize);
    Eigen::VectorXd d(c.rows());
    for (Eigen::Index r = 0; r < c.rows(); ++r) {
      c.row(r) = basis_functions(exact[r]->theta).transpose();
      d(r) = exact[r]->value;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = options.rank_tolerance * std::max(1.0, sv(0));
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    const Eigen::MatrixXd& u = svd.matrixU();
    const Eigen::MatrixXd& v = svd.matrixV();
    xi_p = v.leftCols(rank) * (u.leftCols(rank).transpose() * d).cwiseQuotient(sv.head(rank));
    const double misfit = (c * xi_p - d).lpNorm<Eigen::Infinity>();
    if (misfit > 1e-9 * (1.0 + d.lpNorm<Eigen::Infinity>())) {
      throw InconsistentConstraintsError(
          fmt::format("exact samples are mutually inconsistent (misfit {:.3e})", misfit));
    }
    null_basis = v.rightCols(kBasisSize - rank);
  }

  BasisMatrix a = BasisMatrix::Zero();
  BasisVector j = BasisVector::Zero();
  if (weighted.size() > 0) {
    kernels::active_kernels().accumulate_normal(weighted.view(), w.data(), y.data(), a.data(), j.data());
  }
  if (options.t > 0.0) a += options.t * gram_matrix();

  SurrogateModel model;
  model.t_ = options.t;
  model.form_ = options.variance;
  model.diag_.constraint_rank = rank;
  model.diag_.free_dimensions = kBasisSize - rank;
  for (const auto* s : exact) model.constraints_.push_back(*s);

  BasisVector xi = xi_p;
  BasisMatrix cov = BasisMatrix::Zero();
  if (null_basis.cols() > 0) {
    const Eigen::MatrixXd az = null_basis.transpose() * a * null_basis;
    const Eigen::VectorXd jz = null_basis.transpose() * (j - a * xi_p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(az, Eigen::EigenvaluesOnly);
    const double lmax = eig.eigenvalues().maxCoeff();
    const double lmin = eig.eigenvalues().minCoeff();
    model.diag_.condition = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(az);
    qr.setThreshold(options.rank_tolerance);
    if (lmax <= 0.0 || qr.rank() < az.rows()) {
      throw RankDeficientError(fmt::format(
          "normal equations are rank deficient on the constraint manifold (rank {} of {}, condition {:.3e}); "
          "the mesh does not determine the landscape",
          lmax <= 0.0 ? 0 : qr.rank(), az.rows(), model.diag_.condition));
    }
    xi += null_basis * qr.solve(jz);
    const Eigen::MatrixXd az_inv = qr.inverse();
    cov = null_basis * (0.5 * (az_inv + az_inv.transpose())) * null_basis.transpose();
  }
  model.xi_ = xi;
  model.cov_ = 0.5 * (cov + cov.transpose());
  model.variance_matrix_ = model.form_ == VarianceForm::posterior ? model.cov_
                                                                   : BasisMatrix(model.cov_ - xi * xi.transpose());
  return model;
}

SurrogateModel fit_observable(const TrainingSet& data, const FitOptions& options) { return fit(data, options); }

}  // namespace pgpr
