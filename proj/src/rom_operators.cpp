#include "romscale/rom_operators.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "json.hpp"
#include "romscale/error.hpp"
#include "romscale/parallel.hpp"
#include "romscale/snapshot_io.hpp"

namespace romscale {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using ConstMap = Eigen::Map<const Vec>;

ROMOperators assemble_unforced(const PODBasis& basis, std::size_t r, double re_inv) {
  if (r < 1 || r > basis.size()) {
    throw ValidationError("r = " + std::to_string(r) + " outside 1.." +
                          std::to_string(basis.size()));
  }
  if (!std::isfinite(re_inv) || re_inv < 0.0) {
    throw ValidationError("viscosity coefficient must be finite and non-negative");
  }
  const Grid& grid = basis.grid();
  const std::size_t d = basis.components();
  const std::size_t rank = grid.rank();
  if (d != rank) {
    throw ShapeError("Galerkin advection needs one velocity component per axis (" +
                     std::to_string(d) + " components on a " + std::to_string(rank) +
                     "-axis grid)");
  }
  const std::size_t N = grid.node_count();
  const auto w = grid.weights();
  const std::size_t glen = d * rank * N;

  // gradients computed once: column j holds grad phi_j in FieldGradient layout
  Mat grads(static_cast<Eigen::Index>(glen), static_cast<Eigen::Index>(r));
  parallel_for(r, [&](std::size_t j) {
    const FieldGradient g = gradient(basis.mode(j));
    grads.col(static_cast<Eigen::Index>(j)) = ConstMap(g.values().data(), static_cast<Eigen::Index>(glen));
  });
  const FieldGradient gU = gradient(basis.mean_field());
  const ConstMap gradU(gU.values().data(), static_cast<Eigen::Index>(glen));
  const auto U = basis.mean_field().values();

  ROMOperators ops;
  ops.r = r;
  ops.re_inv = re_inv;
  ops.b = Vec::Zero(static_cast<Eigen::Index>(r));
  ops.A = Mat::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
  ops.B.assign(r * r * r, 0.0);
  ops.S = Mat::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
  ops.M = Mat::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
  ops.mean_energy = inner_product(basis.mean_field(), basis.mean_field());
  ops.mean_mode = Vec::Zero(static_cast<Eigen::Index>(r));

  // rows are independent; each worker writes only row i
  parallel_for(r, [&](std::size_t i) {
    const auto ei = static_cast<Eigen::Index>(i);
    const auto phi_i = basis.mode(i).values();
    Vec weighted_grad_i(static_cast<Eigen::Index>(glen));
    for (std::size_t q = 0; q < d * rank; ++q) {
      for (std::size_t x = 0; x < N; ++x) {
        weighted_grad_i[static_cast<Eigen::Index>(q * N + x)] =
            w[x] * grads(static_cast<Eigen::Index>(q * N + x), ei);
      }
    }
    const Vec srow = grads.transpose() * weighted_grad_i;
    ops.S.row(ei) = srow.transpose();
    const double visc_b = weighted_grad_i.dot(gradU);

    // T(c, axis, x) = w phi_i,c u_axis  for u = U and u = phi_m
    Vec T(static_cast<Eigen::Index>(glen));
    auto fill_T = [&](std::span<const double> u) {
      for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t a = 0; a < rank; ++a) {
          const std::size_t base = (c * rank + a) * N;
          for (std::size_t x = 0; x < N; ++x) {
            T[static_cast<Eigen::Index>(base + x)] = w[x] * phi_i[c * N + x] * u[a * N + x];
          }
        }
      }
    };

    fill_T(U);
    ops.b[ei] = -T.dot(gradU) - re_inv * visc_b;
    const Vec adv_U = grads.transpose() * T;  // <phi_i, U.grad phi_m>

    double mass_U = 0.0;
    for (std::size_t q = 0; q < d * N; ++q) mass_U += w[q % N] * phi_i[q] * U[q];
    ops.mean_mode[ei] = mass_U;

    for (std::size_t m = 0; m < r; ++m) {
      const auto em = static_cast<Eigen::Index>(m);
      const auto phi_m = basis.mode(m).values();
      double mass = 0.0;
      for (std::size_t q = 0; q < d * N; ++q) mass += w[q % N] * phi_i[q] * phi_m[q];
      ops.M(ei, em) = mass;

      fill_T(phi_m);
      const Vec bn = grads.transpose() * T;  // <phi_i, phi_m.grad phi_n> over n
      for (std::size_t n = 0; n < r; ++n) {
        ops.B[(i * r + m) * r + n] = -bn[static_cast<Eigen::Index>(n)];
      }
      ops.A(ei, em) = -adv_U[em] - T.dot(gradU) - re_inv * srow[em];
    }
  });
  return ops;
}

}  // namespace

Vec ROMOperators::forcing_at(double t) const {
  if (!time_dependent()) return b;
  Vec theta(G.cols());
  for (Eigen::Index p = 0; p < G.cols(); ++p) {
    theta[p] = std::cos(omega[static_cast<std::size_t>(p)] * t + phase[static_cast<std::size_t>(p)]);
  }
  return b + G * theta;
}

Vec ROMOperators::quadratic(const Vec& a) const {
  Vec q = Vec::Zero(static_cast<Eigen::Index>(r));
  for (std::size_t i = 0; i < r; ++i) {
    double s = 0.0;
    for (std::size_t m = 0; m < r; ++m) {
      const double* row = &B[(i * r + m) * r];
      double inner = 0.0;
      for (std::size_t n = 0; n < r; ++n) inner += row[n] * a[static_cast<Eigen::Index>(n)];
      s += a[static_cast<Eigen::Index>(m)] * inner;
    }
    q[static_cast<Eigen::Index>(i)] = s;
  }
  return q;
}

Mat ROMOperators::frozen_first_slot(const Vec& a) const {
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto n = static_cast<Eigen::Index>(r);
  Mat N(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Map<const RowMat> Bi(&B[static_cast<std::size_t>(i) * r * r], n, n);
    N.row(i).noalias() = a.transpose() * Bi;
  }
  return N;
}

ROMOperators assemble(const PODBasis& basis, std::size_t r, double re_inv,
                      const VelocityField& forcing) {
  if (!forcing.same_layout(basis.mean_field())) {
    throw ShapeError("forcing layout does not match the POD basis");
  }
  ROMOperators ops = assemble_unforced(basis, r, re_inv);
  for (std::size_t i = 0; i < r; ++i) {
    ops.b[static_cast<Eigen::Index>(i)] += inner_product(basis.mode(i), forcing);
  }
  return ops;
}

ROMOperators assemble(const PODBasis& basis, std::size_t r, double re_inv,
                      const SeparableForcing& forcing) {
  ROMOperators ops = assemble_unforced(basis, r, re_inv);
  const std::size_t P = forcing.size();
  ops.G = Mat::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(P));
  for (std::size_t p = 0; p < P; ++p) {
    if (!forcing.patterns()[p].same_layout(basis.mean_field())) {
      throw ShapeError("forcing layout does not match the POD basis");
    }
    for (std::size_t i = 0; i < r; ++i) {
      ops.G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) =
          inner_product(basis.mode(i), forcing.patterns()[p]);
    }
  }
  ops.omega = forcing.omega();
  ops.phase = forcing.phase();
  return ops;
}

ROMOperators truncate(const ROMOperators& ops, std::size_t r) {
  if (r < 1 || r > ops.r) {
    throw ValidationError("cannot truncate operators of dimension " + std::to_string(ops.r) +
                          " to r = " + std::to_string(r));
  }
  const auto n = static_cast<Eigen::Index>(r);
  ROMOperators out;
  out.r = r;
  out.b = ops.b.head(n);
  out.A = ops.A.topLeftCorner(n, n);
  out.S = ops.S.topLeftCorner(n, n);
  out.M = ops.M.topLeftCorner(n, n);
  out.B.resize(r * r * r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t m = 0; m < r; ++m) {
      for (std::size_t k = 0; k < r; ++k) out.B[(i * r + m) * r + k] = ops.B_at(i, m, k);
    }
  }
  out.re_inv = ops.re_inv;
  out.mean_energy = ops.mean_energy;
  out.mean_mode = ops.mean_mode.head(n);
  out.G = ops.G.topRows(n);
  out.omega = ops.omega;
  out.phase = ops.phase;
  return out;
}

Vec rhs(const ROMOperators& ops, const Vec& a) {
  if (static_cast<std::size_t>(a.size()) != ops.r) {
    throw ShapeError("coefficient vector has length " + std::to_string(a.size()) +
                     ", operators have r = " + std::to_string(ops.r));
  }
  return ops.b + ops.A * a + ops.quadratic(a);
}

Vec rhs(const ROMOperators& ops, const Vec& a, double t) {
  if (static_cast<std::size_t>(a.size()) != ops.r) {
    throw ShapeError("coefficient vector has length " + std::to_string(a.size()) +
                     ", operators have r = " + std::to_string(ops.r));
  }
  return ops.forcing_at(t) + ops.A * a + ops.quadratic(a);
}

namespace {

// Eigen matrices are column-major; files are row-major.
std::vector<double> row_major(const Mat& m) {
  std::vector<double> out(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
    }
  }
  return out;
}

Mat from_row_major(const std::vector<double>& v, std::size_t rows, std::size_t cols) {
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v[i * cols + j];
    }
  }
  return m;
}

}  // namespace

void write_operators(const ROMOperators& ops, const fs::path& dir) {
  fs::create_directories(dir);
  const std::size_t r = ops.r;
  const auto P = static_cast<std::size_t>(ops.G.cols());
  write_f64(dir / "b.bin", std::span<const double>(ops.b.data(), r));
  write_f64(dir / "A.bin", row_major(ops.A));
  write_f64(dir / "B.bin", ops.B);
  write_f64(dir / "S.bin", row_major(ops.S));
  write_f64(dir / "M.bin", row_major(ops.M));
  write_f64(dir / "U_phi.bin", std::span<const double>(ops.mean_mode.data(), r));
  write_f64(dir / "G.bin", row_major(ops.G));

  json meta;
  meta["r"] = r;
  meta["re_inv"] = ops.re_inv;
  meta["mean_energy"] = ops.mean_energy;
  meta["shapes"] = {{"b", {r}},         {"A", {r, r}}, {"B", {r, r, r}}, {"S", {r, r}},
                    {"M", {r, r}},      {"U_phi", {r}}, {"G", {r, P}}};
  meta["forcing_omega"] = ops.omega;
  meta["forcing_phase"] = ops.phase;
  meta["order"] = "row-major";
  meta["B_index"] = "B[i][m][n] multiplies a_m a_n in row i";
  std::ofstream out(dir / "ops_meta.json", std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + (dir / "ops_meta.json").string() + "'");
  out << meta.dump(2) << '\n';
}

ROMOperators read_operators(const fs::path& dir) {
  const fs::path meta_path = dir / "ops_meta.json";
  if (!fs::exists(meta_path)) {
    throw ValidationError("no operator directory at '" + dir.string() + "' (missing ops_meta.json)");
  }
  ROMOperators ops;
  std::size_t P = 0;
  try {
    std::ifstream in(meta_path);
    const json meta = json::parse(in);
    ops.r = meta.at("r").get<std::size_t>();
    ops.re_inv = meta.at("re_inv").get<double>();
    ops.mean_energy = meta.at("mean_energy").get<double>();
    ops.omega = meta.at("forcing_omega").get<std::vector<double>>();
    ops.phase = meta.at("forcing_phase").get<std::vector<double>>();
    P = meta.at("shapes").at("G").at(1).get<std::size_t>();
  } catch (const json::exception& e) {
    throw ValidationError("malformed header '" + meta_path.string() + "': " + e.what());
  }
  const std::size_t r = ops.r;
  if (r == 0) throw ValidationError("operator dimension r must be positive");
  if (ops.omega.size() != P || ops.phase.size() != P) {
    throw ValidationError("forcing frequencies do not match G's column count");
  }
  ops.b = ConstMap(read_f64(dir / "b.bin", r).data(), static_cast<Eigen::Index>(r));
  ops.A = from_row_major(read_f64(dir / "A.bin", r * r), r, r);
  ops.B = read_f64(dir / "B.bin", r * r * r);
  ops.S = from_row_major(read_f64(dir / "S.bin", r * r), r, r);
  ops.M = from_row_major(read_f64(dir / "M.bin", r * r), r, r);
  ops.mean_mode = ConstMap(read_f64(dir / "U_phi.bin", r).data(), static_cast<Eigen::Index>(r));
  ops.G = from_row_major(read_f64(dir / "G.bin", r * P), r, P);
  return ops;
}

}  // namespace romscale
