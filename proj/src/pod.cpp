#include "romscale/pod.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include <Eigen/Dense>

#include "json.hpp"
#include "romscale/error.hpp"
#include "romscale/parallel.hpp"
#include "romscale/snapshot_io.hpp"

namespace romscale {

namespace fs = std::filesystem;
using nlohmann::json;

PODBasis::PODBasis(VelocityField mean_field, std::vector<VelocityField> modes,
                   std::vector<double> eigenvalues)
    : mean_(std::move(mean_field)), modes_(std::move(modes)), eigenvalues_(std::move(eigenvalues)) {
  if (modes_.size() != eigenvalues_.size()) {
    throw ShapeError("POD basis needs one eigenvalue per mode");
  }
  for (std::size_t j = 0; j < modes_.size(); ++j) {
    if (!modes_[j].same_layout(mean_)) throw ShapeError("POD modes must match the mean field");
    if (!(eigenvalues_[j] >= 0.0)) throw ValidationError("POD eigenvalues must be non-negative");
    if (j > 0 && eigenvalues_[j] > eigenvalues_[j - 1]) {
      throw ValidationError("POD eigenvalues must be in descending order");
    }
  }
}

VelocityField compute_mean(const SnapshotSet& set) {
  VelocityField mean(set.grid(), set.components());
  auto m = mean.values();
  for (const auto& s : set.snapshots()) {
    const auto v = s.values();
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += v[i];
  }
  const double inv = 1.0 / static_cast<double>(set.size());
  for (auto& x : m) x *= inv;
  return mean;
}

PODBasis compute_pod(const SnapshotSet& set, std::size_t r_max, double tol) {
  if (!(tol >= 0.0 && tol < 1.0)) throw ValidationError("POD tolerance must lie in [0, 1)");
  const std::size_t M = set.size();
  VelocityField mean = compute_mean(set);
  const std::size_t d = set.components();
  const std::size_t nodes = set.grid().node_count();
  const std::size_t len = d * nodes;

  // sqrt(w) folded into the fluctuation matrix so the Gram matrix is a plain product
  const auto w = set.grid().weights();
  Eigen::VectorXd sqrt_w(len);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t i = 0; i < nodes; ++i) sqrt_w[c * nodes + i] = std::sqrt(w[i]);
  }
  Eigen::MatrixXd X(len, M);
  const auto mv = mean.values();
  double snapshot_energy = 0.0;
  for (std::size_t k = 0; k < M; ++k) {
    const auto v = set[k].values();
    for (std::size_t i = 0; i < len; ++i) {
      X(i, k) = (v[i] - mv[i]) * sqrt_w[i];
      snapshot_energy += v[i] * v[i] * sqrt_w[i] * sqrt_w[i];
    }
  }
  snapshot_energy /= static_cast<double>(M);

  Eigen::MatrixXd C(M, M);
  parallel_for(M, [&](std::size_t k) {
    for (std::size_t l = k; l < M; ++l) {
      const double v = X.col(k).dot(X.col(l)) / static_cast<double>(M);
      C(k, l) = v;
      C(l, k) = v;
    }
  });

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver failed on the snapshot Gram matrix");
  }
  const Eigen::VectorXd& evals = eig.eigenvalues();  // ascending
  const Eigen::MatrixXd& evecs = eig.eigenvectors();
  const double lambda1 = evals[static_cast<Eigen::Index>(M) - 1];
  // mean subtraction leaves round-off sized fluctuations on identical snapshots
  if (!(lambda1 > 1e-26 * snapshot_energy)) {
    throw NumericalError("snapshots carry no fluctuation energy; the POD basis would be empty");
  }

  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < M; ++j) {
    const auto idx = static_cast<Eigen::Index>(M - 1 - j);
    if (!(evals[idx] > tol * lambda1)) break;
    if (r_max != 0 && keep.size() == r_max) break;
    keep.push_back(static_cast<std::size_t>(idx));
  }
  const std::size_t R = keep.size();

  Eigen::MatrixXd V(M, R);
  std::vector<double> lambda(R);
  for (std::size_t j = 0; j < R; ++j) {
    const auto idx = static_cast<Eigen::Index>(keep[j]);
    lambda[j] = evals[idx];
    V.col(static_cast<Eigen::Index>(j)) =
        evecs.col(idx) / std::sqrt(static_cast<double>(M) * lambda[j]);
  }
  // columns of Phi are sqrt(w) * phi_j, so plain dot products are L2 products
  Eigen::MatrixXd Phi = X * V;

  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(R); ++j) {
      for (Eigen::Index i = 0; i < j; ++i) {
        Phi.col(j) -= Phi.col(i).dot(Phi.col(j)) * Phi.col(i);
      }
      const double norm = Phi.col(j).norm();
      if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw NumericalError("POD mode " + std::to_string(j + 1) + " is numerically null");
      }
      Phi.col(j) /= norm;
    }
  }

  std::vector<VelocityField> modes;
  modes.reserve(R);
  for (std::size_t j = 0; j < R; ++j) {
    VelocityField phi(set.grid(), d);
    auto pv = phi.values();
    for (std::size_t i = 0; i < len; ++i) pv[i] = Phi(static_cast<Eigen::Index>(i), j) / sqrt_w[i];
    std::size_t big = 0;
    for (std::size_t i = 1; i < len; ++i) {
      if (std::abs(pv[i]) > std::abs(pv[big])) big = i;
    }
    if (pv[big] < 0.0) phi *= -1.0;
    modes.push_back(std::move(phi));
  }
  return PODBasis(std::move(mean), std::move(modes), std::move(lambda));
}

std::vector<double> project(const PODBasis& basis, const VelocityField& field, std::size_t r) {
  if (r < 1 || r > basis.size()) {
    throw ValidationError("r = " + std::to_string(r) + " outside 1.." +
                          std::to_string(basis.size()));
  }
  if (!field.same_layout(basis.mean_field())) {
    throw ShapeError("field layout does not match the POD basis");
  }
  VelocityField fluct = field - basis.mean_field();
  std::vector<double> a(r);
  for (std::size_t j = 0; j < r; ++j) a[j] = inner_product(fluct, basis.mode(j));
  return a;
}

std::vector<std::vector<double>> project_all(const PODBasis& basis, const SnapshotSet& set,
                                             std::size_t r) {
  std::vector<std::vector<double>> out(set.size());
  parallel_for(set.size(), [&](std::size_t k) { out[k] = project(basis, set[k], r); });
  return out;
}

VelocityField reconstruct(const PODBasis& basis, const std::vector<double>& a) {
  if (a.size() > basis.size()) {
    throw ValidationError("coefficient vector longer than the basis (" +
                          std::to_string(a.size()) + " > " + std::to_string(basis.size()) + ")");
  }
  VelocityField u = basis.mean_field();
  for (std::size_t j = 0; j < a.size(); ++j) u.axpy(a[j], basis.mode(j));
  return u;
}

double energy_ratio(const std::vector<double>& eigenvalues, std::size_t r) {
  if (r < 1 || r > eigenvalues.size()) {
    throw ValidationError("r = " + std::to_string(r) + " outside 1.." +
                          std::to_string(eigenvalues.size()));
  }
  double head = 0.0, total = 0.0;
  for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
    total += eigenvalues[j];
    if (j < r) head += eigenvalues[j];
  }
  if (!(total > 0.0)) throw DomainError("zero total POD energy; the energy ratio is undefined");
  return head / total;
}

double energy_ratio(const PODBasis& basis, std::size_t r) {
  return energy_ratio(basis.eigenvalues(), r);
}

void write_basis(const PODBasis& basis, const fs::path& dir) {
  std::vector<double> labels(basis.size());
  for (std::size_t j = 0; j < labels.size(); ++j) labels[j] = static_cast<double>(j + 1);
  write_fields(basis.modes(), labels, dir);
  write_f64(dir / "mean.bin", basis.mean_field().values());
  std::ofstream out(dir / "eigenvalues.json", std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + (dir / "eigenvalues.json").string() + "'");
  out << json(basis.eigenvalues()).dump() << '\n';
}

PODBasis read_basis(const fs::path& dir) {
  FieldContainer c = read_fields(dir);
  const fs::path ev_path = dir / "eigenvalues.json";
  std::vector<double> lambda;
  try {
    std::ifstream in(ev_path);
    if (!in) throw ValidationError("missing '" + ev_path.string() + "'");
    lambda = json::parse(in).get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ValidationError("malformed '" + ev_path.string() + "': " + e.what());
  }
  VelocityField mean(c.grid, c.components,
                     read_f64(dir / "mean.bin", c.components * c.grid.node_count()));
  return PODBasis(std::move(mean), std::move(c.fields), std::move(lambda));
}

}  // namespace romscale
