#include "jcr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "jcr/errors.hpp"

namespace jcr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSingularRel = 1e-10;  // relative eigenvalue floor for "exists"

using Cplx = std::complex<double>;

/// Hermitian inverse square root via eigendecomposition.
Eigen::MatrixXcd inv_sqrt_hermitian(const Eigen::MatrixXcd& r) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() <= 0.0) throw Error("covariance is not positive definite");
  Eigen::VectorXd inv_sqrt = ev.array().rsqrt();
  return es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<double> scene_velocities(const RadarScene& scene) {
  std::vector<double> v;
  v.reserve(scene.targets.size());
  for (const auto& t : scene.targets) v.push_back(t.velocity_mps);
  return v;
}

Eigen::VectorXd scene_powers(const RadarScene& scene) {
  auto tp = target_powers_and_snr(scene);
  Eigen::VectorXd p(static_cast<Eigen::Index>(tp.size()));
  for (std::size_t i = 0; i < tp.size(); ++i) p(static_cast<Eigen::Index>(i)) = tp[i].power;
  return p;
}

/// Columnwise Kronecker product (Khatri-Rao), columns a_k (x) b_k.
Eigen::MatrixXcd khatri_rao(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const Eigen::Index m = a.rows(), k = a.cols();
  Eigen::MatrixXcd out(m * m, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    for (Eigen::Index i = 0; i < m; ++i) {
      out.block(i * m, c, m, 1) = a(i, c) * b.col(c);
    }
  }
  return out;
}

/// Apply (R^{-1/2})^T (x) R^{-1/2} to each column, via vec(S X S) with
/// S = R^{-1/2}; avoids materializing the M^2 x M^2 Kronecker factor.
Eigen::MatrixXcd apply_whitener(const Eigen::MatrixXcd& s, const Eigen::MatrixXcd& cols) {
  const Eigen::Index m = s.rows();
  Eigen::MatrixXcd out(m * m, cols.cols());
  for (Eigen::Index c = 0; c < cols.cols(); ++c) {
    Eigen::Map<const Eigen::MatrixXcd> x(cols.col(c).data(), m, m);
    Eigen::MatrixXcd y = s * x * s;
    out.col(c) = Eigen::Map<const Eigen::VectorXcd>(y.data(), m * m);
  }
  return out;
}

CrbResult finish_from_fisher_block(const Eigen::MatrixXcd& g, int eta) {
  CrbResult out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  out.fisher_min_eig = es.eigenvalues().minCoeff();
  out.fisher_max_eig = es.eigenvalues().maxCoeff();
  if (!(out.fisher_max_eig > 0.0) || out.fisher_min_eig < kSingularRel * out.fisher_max_eig) {
    out.exists = false;
    out.reason = CrbResult::Reason::Singular;
    return out;
  }
  Eigen::VectorXd inv = es.eigenvalues().array().inverse();
  Eigen::MatrixXcd ginv = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
  Eigen::MatrixXd crb = ginv.real() / static_cast<double>(eta);
  out.crb = 0.5 * (crb + crb.transpose());
  out.exists = true;
  out.reason = CrbResult::Reason::Ok;
  return out;
}

}  // namespace

DopplerModel build_doppler(const std::vector<int>& positions, double slot_interval_s,
                           double wavelength_m, const std::vector<double>& velocities_mps) {
  const int m = static_cast<int>(positions.size());
  const int k = static_cast<int>(velocities_mps.size());
  DopplerModel model;
  model.d.resize(m, k);
  model.d_dot.resize(m, k);
  model.u.resize(velocities_mps.size());
  for (int c = 0; c < k; ++c) {
    double u = 2.0 * velocities_mps[static_cast<std::size_t>(c)] * slot_interval_s / wavelength_m;
    model.u[static_cast<std::size_t>(c)] = u;
    for (int r = 0; r < m; ++r) {
      double q = positions[static_cast<std::size_t>(r)];
      double ph = -2.0 * kPi * u * q;
      Cplx e(std::cos(ph), std::sin(ph));
      model.d(r, c) = e;
      // d/dv exp(-j 2 pi (2 v T_D / lambda) q) = -j 4 pi T_D q / lambda * e
      model.d_dot(r, c) = Cplx(0.0, -4.0 * kPi * slot_interval_s * q / wavelength_m) * e;
    }
  }
  return model;
}

Eigen::MatrixXcd model_covariance(const DopplerModel& model, const Eigen::VectorXd& powers,
                                  double noise_power) {
  if (powers.size() != model.d.cols()) throw Error("power vector size mismatch");
  if (!(noise_power > 0.0)) throw Error("noise power must be positive");
  Eigen::MatrixXcd r = model.d * powers.asDiagonal() * model.d.adjoint();
  r.diagonal().array() += noise_power;
  return 0.5 * (r + r.adjoint().eval());
}

CrbResult crb_from_model(const std::vector<int>& positions, double slot_interval_s,
                         double wavelength_m, const std::vector<double>& velocities_mps,
                         const Eigen::VectorXd& powers, double noise_power, int eta) {
  if (eta < 1) throw Error("snapshot count must be at least 1");
  const Eigen::Index m = static_cast<Eigen::Index>(positions.size());
  const Eigen::Index k = static_cast<Eigen::Index>(velocities_mps.size());
  if (k < 1) throw Error("at least one target required");

  DopplerModel model = build_doppler(positions, slot_interval_s, wavelength_m, velocities_mps);
  Eigen::MatrixXcd r = model_covariance(model, powers, noise_power);
  Eigen::MatrixXcd s = inv_sqrt_hermitian(r);

  // Vectorized model: vec(R) = Dq p + sigma^2 vec(I), with derivative columns
  // Dq_dot = Ddot^c (*) D + D^c (*) Ddot (conjugation, not transposition).
  Eigen::MatrixXcd dq = khatri_rao(model.d.conjugate(), model.d);
  Eigen::MatrixXcd dq_dot = khatri_rao(model.d_dot.conjugate(), model.d) +
                            khatri_rao(model.d.conjugate(), model.d_dot);

  Eigen::MatrixXcd e = apply_whitener(s, dq_dot * powers.asDiagonal());
  Eigen::MatrixXcd f(m * m, k + 1);
  f.leftCols(k) = dq;
  Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(m, m);
  f.col(k) = Eigen::Map<const Eigen::VectorXcd>(eye.data(), m * m);
  f = apply_whitener(s, f);

  // Project E onto the orthogonal complement of range(F) via a rank-revealing
  // QR, robust to a rank-deficient nuisance block.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(f);
  qr.setThreshold(1e-12);
  Eigen::Index rank = qr.rank();
  Eigen::MatrixXcd y = qr.householderQ().adjoint() * e;
  y.topRows(rank).setZero();
  Eigen::MatrixXcd e_perp = qr.householderQ() * y;

  Eigen::MatrixXcd g = e.adjoint() * e_perp;
  g = 0.5 * (g + g.adjoint().eval());
  return finish_from_fisher_block(g, eta);
}

CrbResult slepian_bangs_from_model(const std::vector<int>& positions, double slot_interval_s,
                                   double wavelength_m, const std::vector<double>& velocities_mps,
                                   const Eigen::VectorXd& powers, double noise_power, int eta) {
  if (eta < 1) throw Error("snapshot count must be at least 1");
  const Eigen::Index m = static_cast<Eigen::Index>(positions.size());
  const Eigen::Index k = static_cast<Eigen::Index>(velocities_mps.size());
  DopplerModel model = build_doppler(positions, slot_interval_s, wavelength_m, velocities_mps);
  Eigen::MatrixXcd r = model_covariance(model, powers, noise_power);
  Eigen::MatrixXcd rinv = r.inverse();

  // Real parameter vector theta = (v_1..v_K, p_1..p_K, sigma_n^2).
  const Eigen::Index np = 2 * k + 1;
  std::vector<Eigen::MatrixXcd> deriv;
  deriv.reserve(static_cast<std::size_t>(np));
  for (Eigen::Index i = 0; i < k; ++i) {
    Eigen::MatrixXcd dv = powers(i) * (model.d_dot.col(i) * model.d.col(i).adjoint() +
                                       model.d.col(i) * model.d_dot.col(i).adjoint());
    deriv.push_back(dv);
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    deriv.push_back(model.d.col(i) * model.d.col(i).adjoint());
  }
  deriv.push_back(Eigen::MatrixXcd::Identity(m, m));

  std::vector<Eigen::MatrixXcd> a;
  a.reserve(deriv.size());
  for (const auto& dm : deriv) a.push_back(rinv * dm);

  Eigen::MatrixXd fim(np, np);
  for (Eigen::Index i = 0; i < np; ++i) {
    for (Eigen::Index j = i; j < np; ++j) {
      double v = (a[static_cast<std::size_t>(i)].cwiseProduct(
                      a[static_cast<std::size_t>(j)].transpose()))
                     .sum()
                     .real();
      fim(i, j) = static_cast<double>(eta) * v;
      fim(j, i) = fim(i, j);
    }
  }

  CrbResult out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fim);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  double emin = es.eigenvalues().minCoeff();
  double emax = es.eigenvalues().maxCoeff();
  out.fisher_min_eig = emin;
  out.fisher_max_eig = emax;
  if (!(emax > 0.0) || emin < kSingularRel * emax) {
    out.exists = false;
    out.reason = CrbResult::Reason::Singular;
    return out;
  }
  Eigen::MatrixXd inv = fim.inverse();
  out.crb = inv.topLeftCorner(k, k);
  out.crb = 0.5 * (out.crb + out.crb.transpose().eval());
  out.exists = true;
  out.reason = CrbResult::Reason::Ok;
  return out;
}

namespace {

CrbResult with_precheck(const PreambleSchedule& schedule, const RadarScene& scene, int eta,
                        bool oracle) {
  const int k = static_cast<int>(scene.targets.size());
  const int m = schedule.count();
  // Identifiability gate: uniform schedules support K < M; hole-free sparse
  // schedules support 2K <= one-sided VP count.
  if (schedule.family == WaveFamily::Uniform) {
    if (k >= m) {
      CrbResult out;
      out.exists = false;
      out.reason = CrbResult::Reason::PreCheckUniform;
      return out;
    }
  } else {
    CoWaveform cw = difference_cowaveform(schedule);
    if (cw.hole_free && 2 * k > cw.vp_count_one_sided) {
      CrbResult out;
      out.exists = false;
      out.reason = CrbResult::Reason::PreCheckCoarray;
      return out;
    }
  }
  auto vel = scene_velocities(scene);
  auto pow = scene_powers(scene);
  if (oracle) {
    return slepian_bangs_from_model(schedule.positions, schedule.slot_interval_s,
                                    scene.wavelength_m, vel, pow, scene.noise_power, eta);
  }
  return crb_from_model(schedule.positions, schedule.slot_interval_s, scene.wavelength_m, vel,
                        pow, scene.noise_power, eta);
}

}  // namespace

CrbResult crb_velocity(const PreambleSchedule& schedule, const RadarScene& scene, int eta) {
  return with_precheck(schedule, scene, eta, false);
}

CrbResult crb_oracle_slepian_bangs(const PreambleSchedule& schedule, const RadarScene& scene,
                                   int eta) {
  return with_precheck(schedule, scene, eta, true);
}

std::vector<double> waterfill(const std::vector<double>& gains) {
  const std::size_t n = gains.size();
  if (n == 0) throw Error("water-filling needs at least one subchannel");
  for (double g : gains) {
    if (g < 0.0 || !std::isfinite(g)) throw Error("subchannel gains must be finite and >= 0");
  }
  double gmax = *std::max_element(gains.begin(), gains.end());
  if (!(gmax > 0.0)) throw AllZeroGains("all subchannel gains are zero");

  const double budget = static_cast<double>(n);  // sum(xi) = N so that mean(xi) = 1
  auto load_sum = [&](double level) {
    double s = 0.0;
    for (double g : gains) {
      if (g > 0.0) s += std::max(0.0, level - 1.0 / g);
    }
    return s;
  };

  double lo = 0.0, hi = 1.0 / gmax + budget;
  while (load_sum(hi) < budget) hi *= 2.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    if (load_sum(mid) < budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double level = 0.5 * (lo + hi);

  // Closed-form polish on the bisected active set: exact budget and exactly
  // equal water level across active subchannels.
  double inv_sum = 0.0;
  int active = 0;
  for (double g : gains) {
    if (g > 0.0 && level > 1.0 / g) {
      inv_sum += 1.0 / g;
      ++active;
    }
  }
  if (active > 0) {
    double exact = (budget + inv_sum) / static_cast<double>(active);
    bool consistent = true;
    for (double g : gains) {
      bool was_active = g > 0.0 && level > 1.0 / g;
      bool is_active = g > 0.0 && exact > 1.0 / g;
      if (was_active != is_active) consistent = false;
    }
    if (consistent) level = exact;
  }

  std::vector<double> xi(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (gains[i] > 0.0) xi[i] = std::max(0.0, level - 1.0 / gains[i]);
  }
  return xi;
}

SpectralEfficiency spectral_efficiency(double snr, const std::vector<double>& eigenvalues,
                                       const std::vector<double>& xi) {
  if (eigenvalues.size() != xi.size()) throw Error("eigenvalue and load sizes differ");
  if (eigenvalues.empty()) throw Error("at least one subchannel required");
  if (snr < 0.0) throw Error("SNR must be non-negative");
  SpectralEfficiency se;
  se.per_subchannel.resize(eigenvalues.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    double ri = std::log2(1.0 + snr * eigenvalues[i] * xi[i]);
    se.per_subchannel[i] = ri;
    acc += ri;
  }
  se.r = acc / static_cast<double>(eigenvalues.size());
  return se;
}

CommMetrics dmmse_scalar(double mu, const SpectralEfficiency& se) {
  if (!(mu > 0.0) || mu > 1.0) throw Error("duty factor mu must lie in (0, 1]");
  CommMetrics cm;
  cm.mu = mu;
  cm.r = se.r;
  cm.r_eff = mu * se.r;
  cm.dmmse_diag.resize(se.per_subchannel.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < se.per_subchannel.size(); ++i) {
    double log2_d = -mu * se.per_subchannel[i];
    cm.dmmse_diag[i] = std::exp2(log2_d);
    acc += log2_d;
  }
  cm.phi_c = acc / static_cast<double>(se.per_subchannel.size());
  cm.dmmse_db = 10.0 * std::log10(2.0) * cm.phi_c;
  return cm;
}

RadarScalar radar_scalar(const CrbResult& crb) {
  if (!crb.exists) throw CrbDoesNotExist("radar scalar requested for a non-existent bound");
  const Eigen::Index k = crb.crb.rows();
  double acc_ln = 0.0, acc_log10 = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    double c = crb.crb(i, i);
    if (!(c > 0.0)) throw CrbDoesNotExist("CRB diagonal must be positive");
    acc_ln += std::log(c);
    acc_log10 += std::log10(c);
  }
  RadarScalar out;
  out.phi_r = acc_ln / static_cast<double>(k);
  out.rcrb_db = 10.0 * acc_log10 / static_cast<double>(k);
  return out;
}

}  // namespace jcr
