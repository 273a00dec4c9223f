#include "cntqd/trap.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <cstdio>

#include <nlohmann/json.hpp>

#include "cntqd/kernels.hpp"
#include "cntqd/units.hpp"

namespace cntqd::trap {

namespace {

// Closed-form infinite-line integrals int dz (a^2+z^2)^-n = C_n * a^(1-2n).
constexpr double kC3 = 3.0 * M_PI / 8.0;                  // n=3
constexpr double kC6 = 63.0 * M_PI / 256.0;               // n=6
constexpr double kC4 = 5.0 * M_PI / 16.0;                 // n=4
constexpr double kC7 = 231.0 * M_PI / 1024.0;             // n=7

constexpr int kAxialOrder = 32;

struct GaussLegendre {
  std::vector<double> x, w;  // on [-1, 1]
};

GaussLegendre gauss_legendre(int m) {
  GaussLegendre gl;
  gl.x.resize(m);
  gl.w.resize(m);
  for (int k = 0; k < (m + 1) / 2; ++k) {
    double x = std::cos(M_PI * (k + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= m; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    gl.x[k] = -x;
    gl.x[m - 1 - k] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.w[k] = w;
    gl.w[m - 1 - k] = w;
  }
  return gl;
}

const GaussLegendre& axial_rule() {
  static const GaussLegendre gl = gauss_legendre(kAxialOrder);
  return gl;
}

// Finite-tube axial integrals for one angular node with transverse distance a:
//   I_n = int_{-L/2}^{L/2} dz (a^2 + (z-z0)^2)^-n      (n = 3, 4, 6, 7)
//   K_m = int_{-L/2}^{L/2} dz (z-z0) (a^2 + (z-z0)^2)^-m  (closed form)
struct AxialIntegrals {
  double i3 = 0, i4 = 0, i6 = 0, i7 = 0;
  double k4 = 0, k7 = 0;
};

AxialIntegrals axial_integrals(double a, double z0, double half_len) {
  AxialIntegrals out;
  const double u1 = -half_len - z0, u2 = half_len - z0;
  const double t1 = std::atan2(u1, a), t2 = std::atan2(u2, a);
  const GaussLegendre& gl = axial_rule();
  const double mid = 0.5 * (t1 + t2), half = 0.5 * (t2 - t1);
  double j4 = 0, j6 = 0, j10 = 0, j12 = 0;  // int cos^p theta dtheta
  for (int q = 0; q < kAxialOrder; ++q) {
    const double th = mid + half * gl.x[q];
    const double c2 = std::cos(th) * std::cos(th);
    const double c4 = c2 * c2;
    const double w = gl.w[q] * half;
    j4 += w * c4;
    j6 += w * c4 * c2;
    j10 += w * c4 * c4 * c2;
    j12 += w * c4 * c4 * c4;
  }
  const double a2 = a * a;
  const double ia = 1.0 / a;
  const double ia2 = ia * ia;
  const double ia5 = ia2 * ia2 * ia;
  out.i3 = ia5 * j4;
  out.i4 = ia5 * ia2 * j6;
  out.i6 = ia5 * ia5 * ia * j10;
  out.i7 = ia5 * ia5 * ia2 * ia * j12;
  // K_m = [-(a^2+u^2)^{1-m} / (2(m-1))]_{u1}^{u2}
  auto k_closed = [&](int m) {
    const double p1 = std::pow(a2 + u1 * u1, 1 - m);
    const double p2 = std::pow(a2 + u2 * u2, 1 - m);
    return (p1 - p2) / (2.0 * (m - 1));
  };
  out.k4 = k_closed(4);
  out.k7 = k_closed(7);
  return out;
}

}  // namespace

void TrapConfig::validate() const {
  if (!(tube_radius >= 3.0))
    throw ValidationError("tube_radius must be >= 3.0 angstrom");
  if (!(tube_length > 0)) throw ValidationError("tube_length must be positive");
  if (!(wall_epsilon > 0)) throw ValidationError("wall_epsilon must be positive");
  if (!(wall_sigma > 0)) throw ValidationError("wall_sigma must be positive");
  if (!(surface_density > 0))
    throw ValidationError("surface_density must be positive");
  if (!(atom_epsilon > 0)) throw ValidationError("atom_epsilon must be positive");
  if (!(atom_sigma > 0)) throw ValidationError("atom_sigma must be positive");
  if (quadrature_order < 8)
    throw ValidationError("quadrature_order must be at least 8");
}

WallEval wall_potential(double radial, double axial, const TrapConfig& c) {
  c.validate();
  if (!(radial < c.tube_radius))
    throw OutsideTube("radial coordinate reaches the tube wall");
  const int n = c.quadrature_order;
  const double dphi = 2.0 * M_PI / n;
  const double pref = 4.0 * c.wall_epsilon * c.surface_density * c.tube_radius * dphi;
  const double s6 = std::pow(c.wall_sigma, 6);
  const double s12 = s6 * s6;
  const double r = c.tube_radius;

  WallEval out;
  if (!c.finite_length) {
    std::vector<double> a2(n), b(n);
    for (int i = 0; i < n; ++i) {
      const double cphi = std::cos((i + 0.5) * dphi);
      a2[i] = r * r + radial * radial - 2.0 * r * radial * cphi;
      b[i] = radial - r * cphi;
    }
    const kernels::LjSums sums = kernels::active().lj_sums(a2.data(), b.data(), n);
    out.energy = pref * (s12 * kC6 * sums.s11 - s6 * kC3 * sums.s5);
    out.d_radial = pref * (-11.0 * s12 * kC6 * sums.g13 + 5.0 * s6 * kC3 * sums.g7);
    out.d_axial = 0.0;
    return out;
  }

  const double half_len = 0.5 * c.tube_length;
  for (int i = 0; i < n; ++i) {
    const double cphi = std::cos((i + 0.5) * dphi);
    const double a2 = r * r + radial * radial - 2.0 * r * radial * cphi;
    const double a = std::sqrt(a2);
    const double b = radial - r * cphi;
    const AxialIntegrals ai = axial_integrals(a, axial, half_len);
    out.energy += pref * (s12 * ai.i6 - s6 * ai.i3);
    // d/drho (d^2)^-n = -2n b (d^2)^-(n+1)
    out.d_radial += pref * b * (-12.0 * s12 * ai.i7 + 6.0 * s6 * ai.i4);
    // d/dz0 int (d^2)^-n dz = 2n K_{n+1}
    out.d_axial += pref * (12.0 * s12 * ai.k7 - 6.0 * s6 * ai.k4);
  }
  return out;
}

EnergyGrad chain_energy(const std::vector<Vec3>& coords, const TrapConfig& c) {
  c.validate();
  const std::size_t n = coords.size();
  EnergyGrad out;
  out.gradient.assign(n, Vec3{});

  for (std::size_t i = 0; i < n; ++i) {
    const double rho = std::hypot(coords[i].x, coords[i].y);
    const WallEval w = wall_potential(rho, coords[i].z, c);
    out.energy += w.energy;
    if (rho > 1e-14) {
      out.gradient[i].x += w.d_radial * coords[i].x / rho;
      out.gradient[i].y += w.d_radial * coords[i].y / rho;
    }
    out.gradient[i].z += w.d_axial;
  }

  const double s6 = std::pow(c.atom_sigma, 6);
  const double s12 = s6 * s6;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = coords[i].x - coords[j].x;
      const double dy = coords[i].y - coords[j].y;
      const double dz = coords[i].z - coords[j].z;
      const double r2 = dx * dx + dy * dy + dz * dz;
      const double ir2 = 1.0 / r2;
      const double ir6 = ir2 * ir2 * ir2;
      out.energy += 4.0 * c.atom_epsilon * (s12 * ir6 * ir6 - s6 * ir6);
      // dE/dr / r
      const double f = 4.0 * c.atom_epsilon *
                       (-12.0 * s12 * ir6 * ir6 + 6.0 * s6 * ir6) * ir2;
      out.gradient[i].x += f * dx;
      out.gradient[i].y += f * dy;
      out.gradient[i].z += f * dz;
      out.gradient[j].x -= f * dx;
      out.gradient[j].y -= f * dy;
      out.gradient[j].z -= f * dz;
    }
  return out;
}

namespace {

double grad_norm(const std::vector<Vec3>& g) {
  double acc = 0.0;
  for (const Vec3& v : g) acc += v.x * v.x + v.y * v.y + v.z * v.z;
  return std::sqrt(acc);
}

std::vector<Vec3> displaced(const std::vector<Vec3>& x,
                            const std::vector<double>& dir, double t) {
  std::vector<Vec3> out = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i].x += t * dir[3 * i];
    out[i].y += t * dir[3 * i + 1];
    out[i].z += t * dir[3 * i + 2];
  }
  return out;
}

}  // namespace

std::vector<double> chain_hessian(const std::vector<Vec3>& coords,
                                  const TrapConfig& c) {
  const std::size_t dof = 3 * coords.size();
  const double h = 1e-4;
  std::vector<double> hess(dof * dof, 0.0);
  std::vector<double> dir(dof, 0.0);
  for (std::size_t i = 0; i < dof; ++i) {
    dir[i] = 1.0;
    const EnergyGrad plus = chain_energy(displaced(coords, dir, h), c);
    const EnergyGrad minus = chain_energy(displaced(coords, dir, -h), c);
    dir[i] = 0.0;
    for (std::size_t j = 0; j < coords.size(); ++j) {
      hess[i * dof + 3 * j] = (plus.gradient[j].x - minus.gradient[j].x) / (2 * h);
      hess[i * dof + 3 * j + 1] =
          (plus.gradient[j].y - minus.gradient[j].y) / (2 * h);
      hess[i * dof + 3 * j + 2] =
          (plus.gradient[j].z - minus.gradient[j].z) / (2 * h);
    }
  }
  // symmetrize
  for (std::size_t i = 0; i < dof; ++i)
    for (std::size_t j = i + 1; j < dof; ++j) {
      const double m = 0.5 * (hess[i * dof + j] + hess[j * dof + i]);
      hess[i * dof + j] = m;
      hess[j * dof + i] = m;
    }
  return hess;
}

ChainState relax_chain(std::size_t n_atoms, const TrapConfig& c,
                       double seed_jitter, std::uint64_t seed,
                       std::vector<double>* energy_trace) {
  c.validate();
  if (n_atoms < 1) throw ValidationError("n_atoms must be >= 1");
  if (!(seed_jitter >= 0)) throw ValidationError("seed_jitter must be >= 0");

  const double spacing = std::pow(2.0, 1.0 / 6.0) * c.atom_sigma;
  std::vector<Vec3> x(n_atoms);
  std::uint64_t state = seed * 6364136223846793005ULL + 1442695040888963407ULL;
  auto next_uniform = [&]() {
    // xorshift64*, mapped to [-1, 1); deterministic across platforms
    state ^= state >> 12;
    state ^= state << 25;
    state ^= state >> 27;
    const std::uint64_t bits = state * 2685821657736338717ULL;
    return 2.0 * (static_cast<double>(bits >> 11) * 0x1.0p-53) - 1.0;
  };
  for (std::size_t i = 0; i < n_atoms; ++i) {
    x[i].x = seed_jitter * next_uniform();
    x[i].y = seed_jitter * next_uniform();
    x[i].z = (static_cast<double>(i) - 0.5 * (n_atoms - 1)) * spacing +
             seed_jitter * next_uniform();
  }

  constexpr std::size_t kMaxIter = 100000;
  constexpr double kGradTol = 1e-6;
  const std::size_t dof = 3 * n_atoms;

  EnergyGrad cur = chain_energy(x, c);
  std::size_t iter = 0;
  double step = 0.05;
  auto record = [&]() {
    if (energy_trace != nullptr) energy_trace->push_back(cur.energy);
  };
  record();

  // Stage 1: steepest descent with backtracking line search.
  while (grad_norm(cur.gradient) > 1e-3 && iter < kMaxIter) {
    std::vector<double> dir(dof);
    for (std::size_t i = 0; i < n_atoms; ++i) {
      dir[3 * i] = -cur.gradient[i].x;
      dir[3 * i + 1] = -cur.gradient[i].y;
      dir[3 * i + 2] = -cur.gradient[i].z;
    }
    const double g2 = grad_norm(cur.gradient) * grad_norm(cur.gradient);
    double t = step;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      std::vector<Vec3> trial = displaced(x, dir, t);
      bool inside = true;
      for (const Vec3& p : trial)
        if (std::hypot(p.x, p.y) >= c.tube_radius) inside = false;
      if (inside) {
        const EnergyGrad e = chain_energy(trial, c);
        if (e.energy <= cur.energy - 1e-4 * t * g2) {
          x = std::move(trial);
          cur = e;
          step = std::min(t * 1.5, 1.0);
          accepted = true;
          record();
          break;
        }
      }
      t *= 0.5;
    }
    ++iter;
    if (!accepted) break;  // line search stalled; hand over to Newton
  }

  // Stage 2: damped Newton on the finite-difference Hessian.
  double lambda = 1e-6;
  while (grad_norm(cur.gradient) > kGradTol && iter < kMaxIter) {
    const std::vector<double> hess = chain_hessian(x, c);
    Eigen::MatrixXd hm(dof, dof);
    for (std::size_t i = 0; i < dof; ++i)
      for (std::size_t j = 0; j < dof; ++j)
        hm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            hess[i * dof + j];
    Eigen::VectorXd g(dof);
    for (std::size_t i = 0; i < n_atoms; ++i) {
      g(static_cast<Eigen::Index>(3 * i)) = cur.gradient[i].x;
      g(static_cast<Eigen::Index>(3 * i + 1)) = cur.gradient[i].y;
      g(static_cast<Eigen::Index>(3 * i + 2)) = cur.gradient[i].z;
    }
    bool accepted = false;
    for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
      Eigen::MatrixXd damped = hm;
      for (std::size_t i = 0; i < dof; ++i)
        damped(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) +=
            lambda;
      const Eigen::VectorXd p = damped.ldlt().solve(-g);
      std::vector<double> dir(dof);
      for (std::size_t i = 0; i < dof; ++i)
        dir[i] = p(static_cast<Eigen::Index>(i));
      std::vector<Vec3> trial = displaced(x, dir, 1.0);
      bool inside = true;
      for (const Vec3& pt : trial)
        if (std::hypot(pt.x, pt.y) >= c.tube_radius) inside = false;
      if (inside) {
        const EnergyGrad e = chain_energy(trial, c);
        if (e.energy <= cur.energy + 1e-14 * std::abs(cur.energy)) {
          x = std::move(trial);
          cur = e;
          lambda = std::max(lambda / 3.0, 1e-12);
          accepted = true;
          record();
          break;
        }
      }
      lambda *= 10.0;
    }
    ++iter;
    if (!accepted)
      throw NonConvergence("damped Newton could not find a descent step");
  }

  if (iter >= kMaxIter && grad_norm(cur.gradient) > kGradTol)
    throw NonConvergence("relaxation hit the iteration cap");

  std::sort(x.begin(), x.end(),
            [](const Vec3& a, const Vec3& b) { return a.z < b.z; });
  cur = chain_energy(x, c);

  ChainState out;
  out.coordinates = std::move(x);
  out.energy = cur.energy;
  out.gradient_norm = grad_norm(cur.gradient);
  out.converged = out.gradient_norm < kGradTol;
  return out;
}

ModeReport normal_modes(const ChainState& state, const TrapConfig& c,
                        double mass_amu) {
  if (!state.converged)
    throw NotConverged("normal modes require a converged chain");
  if (!(mass_amu > 0)) throw ValidationError("mass must be positive");

  const std::size_t n = state.coordinates.size();
  const std::size_t dof = 3 * n;
  const std::vector<double> hess = chain_hessian(state.coordinates, c);
  Eigen::MatrixXd hm(dof, dof);
  for (std::size_t i = 0; i < dof; ++i)
    for (std::size_t j = 0; j < dof; ++j)
      hm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          hess[i * dof + j] / mass_amu;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hm);

  ModeReport out;
  out.frequencies_cm.resize(dof);
  for (std::size_t k = 0; k < dof; ++k) {
    const double lam = solver.eigenvalues()(static_cast<Eigen::Index>(k));
    const double f = std::sqrt(std::abs(lam)) * units::kMevPerA2AmuToCm;
    out.frequencies_cm[k] = lam >= 0 ? f : -f;
  }
  // axial translation: eigenvector closest to a uniform z displacement
  double best = -1.0;
  for (std::size_t k = 0; k < dof; ++k) {
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      dot += solver.eigenvectors()(static_cast<Eigen::Index>(3 * i + 2),
                                   static_cast<Eigen::Index>(k));
    const double overlap = std::abs(dot) / std::sqrt(static_cast<double>(n));
    if (overlap > best) {
      best = overlap;
      out.translation_index = k;
      out.translation_frequency = out.frequencies_cm[k];
    }
  }
  return out;
}

double transverse_stability(const ChainState& state, const TrapConfig& c) {
  if (!state.converged)
    throw NotConverged("transverse stability requires a converged chain");
  const std::size_t n = state.coordinates.size();
  const std::size_t dof = 3 * n;
  const std::vector<double> hess = chain_hessian(state.coordinates, c);
  std::vector<std::size_t> tr;
  for (std::size_t i = 0; i < dof; ++i)
    if (i % 3 != 2) tr.push_back(i);
  Eigen::MatrixXd sub(tr.size(), tr.size());
  for (std::size_t a = 0; a < tr.size(); ++a)
    for (std::size_t b = 0; b < tr.size(); ++b)
      sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          hess[tr[a] * dof + tr[b]];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sub,
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

void write_xyz(const std::vector<Vec3>& coords, const std::string& element,
               std::ostream& os) {
  os << coords.size() << "\n";
  os << "relaxed chain, coordinates in angstrom\n";
  char line[128];
  for (const Vec3& p : coords) {
    std::snprintf(line, sizeof(line), "%s %.10f %.10f %.10f\n", element.c_str(),
                  p.x, p.y, p.z);
    os << line;
  }
}

SpeciesParams hydrogen_defaults() {
  SpeciesParams sp;
  sp.config = TrapConfig{};
  sp.mass_amu = 1.008;
  sp.element = "H";
  return sp;
}

SpeciesParams nitrogen_defaults() {
  SpeciesParams sp;
  sp.config = TrapConfig{};
  sp.config.wall_epsilon = 2.7;
  sp.config.wall_sigma = 3.34;
  sp.config.atom_epsilon = 3.2;
  sp.config.atom_sigma = 3.12;
  sp.mass_amu = 14.007;
  sp.element = "N";
  return sp;
}

SpeciesParams load_trap_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open parameter file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("parameter file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError("parameter file must hold one object");

  SpeciesParams sp = hydrogen_defaults();
  for (const auto& [key, value] : j.items()) {
    auto number = [&]() -> double {
      if (!value.is_number())
        throw ValidationError("key '" + key + "' must be a number");
      return value.get<double>();
    };
    if (key == "tube_radius_angstrom") sp.config.tube_radius = number();
    else if (key == "tube_length_angstrom") sp.config.tube_length = number();
    else if (key == "wall_epsilon_mev") sp.config.wall_epsilon = number();
    else if (key == "wall_sigma_angstrom") sp.config.wall_sigma = number();
    else if (key == "surface_density_per_a2") sp.config.surface_density = number();
    else if (key == "atom_epsilon_mev") sp.config.atom_epsilon = number();
    else if (key == "atom_sigma_angstrom") sp.config.atom_sigma = number();
    else if (key == "mass_amu") sp.mass_amu = number();
    else if (key == "element") {
      if (!value.is_string())
        throw ValidationError("key 'element' must be a string");
      sp.element = value.get<std::string>();
    } else {
      throw UnknownKey("unknown parameter key '" + key + "'");
    }
  }
  sp.config.validate();
  return sp;
}

}  // namespace cntqd::trap
