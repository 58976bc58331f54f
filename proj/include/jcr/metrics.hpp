#pragma once

#include <Eigen/Dense>
#include <vector>

#include "jcr/scene.hpp"
#include "jcr/schedule.hpp"

namespace jcr {

/// Doppler steering model for a slot schedule: D has entries
/// exp(-j 2 pi u_k q_m) with u_k = 2 v_k T_D / lambda, and d_dot is the
/// elementwise derivative of D with respect to v_k.
struct DopplerModel {
  Eigen::MatrixXcd d;      // M x K
  Eigen::MatrixXcd d_dot;  // M x K
  std::vector<double> u;   // normalized Doppler per target
};

DopplerModel build_doppler(const std::vector<int>& positions, double slot_interval_s,
                           double wavelength_m, const std::vector<double>& velocities_mps);

/// Model covariance R = D P D^H + sigma_n^2 I.
Eigen::MatrixXcd model_covariance(const DopplerModel& model, const Eigen::VectorXd& powers,
                                  double noise_power);

struct CrbResult {
  enum class Reason { Ok, PreCheckUniform, PreCheckCoarray, Singular };

  Eigen::MatrixXd crb;  // K x K, velocity block, (m/s)^2; valid iff exists
  bool exists = false;
  Reason reason = Reason::Singular;
  double fisher_min_eig = 0.0;  // smallest eigenvalue of the projected Fisher block
  double fisher_max_eig = 0.0;
};

/// Stochastic velocity CRB through the vectorized-covariance form, with the
/// co-waveform identifiability pre-check for the canonical families.
CrbResult crb_velocity(const PreambleSchedule& schedule, const RadarScene& scene, int eta);

/// Same bound computed independently from the Gaussian Fisher information over
/// (velocities, powers, noise power); used to cross-check crb_velocity.
CrbResult crb_oracle_slepian_bangs(const PreambleSchedule& schedule, const RadarScene& scene,
                                   int eta);

/// Low-level entry points without the family pre-check.
CrbResult crb_from_model(const std::vector<int>& positions, double slot_interval_s,
                         double wavelength_m, const std::vector<double>& velocities_mps,
                         const Eigen::VectorXd& powers, double noise_power, int eta);
CrbResult slepian_bangs_from_model(const std::vector<int>& positions, double slot_interval_s,
                                   double wavelength_m, const std::vector<double>& velocities_mps,
                                   const Eigen::VectorXd& powers, double noise_power, int eta);

/// Water-filling power allocation: maximize mean log2(1 + g_n xi_n) subject to
/// mean(xi) = 1, xi >= 0. Returns the per-subchannel loads xi.
std::vector<double> waterfill(const std::vector<double>& gains);

struct SpectralEfficiency {
  double r = 0.0;                      // mean bits/s/Hz over subchannels
  std::vector<double> per_subchannel;  // r_i
};

/// Mean spectral efficiency for eigenvalue profile and water-filled loads.
SpectralEfficiency spectral_efficiency(double snr, const std::vector<double>& eigenvalues,
                                       const std::vector<double>& xi);

struct CommMetrics {
  double mu = 0.0;
  double r = 0.0;        // full-time spectral efficiency
  double r_eff = 0.0;    // mu * r
  double phi_c = 0.0;    // mean log2 of the distortion-MMSE diagonal
  double dmmse_db = 0.0; // 10 log10 of the geometric-mean distortion MMSE
  std::vector<double> dmmse_diag;
};

/// Distortion-MMSE scalarization for duty factor mu and per-subchannel rates.
CommMetrics dmmse_scalar(double mu, const SpectralEfficiency& se);

struct RadarScalar {
  double phi_r = 0.0;    // mean natural log of the CRB diagonal
  double rcrb_db = 0.0;  // 20 log10 of the geometric-mean root CRB in m/s
};

RadarScalar radar_scalar(const CrbResult& crb);

}  // namespace jcr
