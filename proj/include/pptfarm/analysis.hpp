#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pptfarm/family.hpp"
#include "pptfarm/spectral.hpp"

namespace pptfarm {

/*
 * Closed-form quantities of the family.
 *
 * The binding mixing weight
 *
 *     q* = 1 / (1 + dB^n / (N*(dA-1)))
 *
 * is where the top-eigenvalue positivity conditions below change sign, and
 * the distance of the mixture from its core is |rho(q) - rho_core|_1 = 2q,
 * so the separable-distance lower bound combines both:
 *
 *     dist(rho, SEP) >= 1 - 1/dA^n - q*.
 */
double q_star(int parties, int dim_a, int dim_b);

// |rho(q) - rho_core|_1 for orthogonally supported unit-trace components.
double core_distance_formula(double q);

// dist(rho_core, SEP) >= 1 - 1/dA^n.
double rho0_sep_bound(int parties, int dim_a);

double sep_distance_lower_bound(int parties, int dim_a, int dim_b);

struct CoreDistanceCheck {
  double expected = 0.0;  // 2q
  double measured = 0.0;
  double residual = 0.0;
  bool pass = false;
};

CoreDistanceCheck verify_core_distance(const FamilyParams& params, const BlockPair& blocks,
                                       double tol = 1e-8);

/*
 * Positivity margins of the mixture after a cut transposition, evaluated on
 * the block structure instead of the full matrix. With mu an eigenvalue of
 * payload b, nu the (uniform) eigenvalue of payload a, p = 1-q and
 * x = q/(N*D):
 *
 *     X+ = x*mu + p*nu          X- = x*mu - p*nu
 *     Y+ = p*nu + (dA-1)*x*mu   Y- = p*nu - x*mu
 *
 * The X pairs are the spectrum of the two-block matrix [[x b, p a], [p a, x b]]
 * sitting on a mixed-support pair after the transposition; the Y values come
 * from the dA-block matrix with p a on the diagonal and x b off it, sitting
 * on the diagonal A-family. "TopEigenvalue" pairs only the top eigenvalue of
 * b with nu; "Full" pairs every eigenvalue of b, including the zeros.
 */
enum class PairingMode { TopEigenvalue, Full };

struct ConditionMargins {
  PairingMode mode = PairingMode::Full;
  double nu = 0.0;          // uniform eigenvalue of a
  std::vector<double> mu;   // eigenvalues of b used for pairing, ascending
  std::vector<double> x_plus, x_minus, y_plus, y_minus;  // aligned with mu

  double min_margin() const;
};

// Requires payload a to be an exact scalar multiple of the identity; throws
// DomainError("unsupported decomposition") otherwise.
ConditionMargins analytic_conditions(const FamilyParams& params, const BlockPair& blocks,
                                     PairingMode mode);

// The q at which the top-eigenvalue Y- margin vanishes: p*nu = x*mu_top.
double binding_q(const FamilyParams& params, const BlockPair& blocks);

// The literal block matrices behind the margins, for spectral cross-checks.
SymMatrix assemble_x_block(const FamilyParams& params, const BlockPair& blocks);
SymMatrix assemble_y_block(const FamilyParams& params, const BlockPair& blocks);

/*
 * A cut is a party subset; transposing it moves both factors of every party
 * in the subset. The complement cut has the same spectrum (it is the global
 * transpose of the former), so the canonical enumeration keeps party 1 out.
 */
struct CutSpec {
  std::vector<int> parties;  // sorted, subset of {2..n}

  std::vector<int> factor_positions(const FactorSpace& space) const;
};

std::vector<CutSpec> canonical_cuts(int parties);

struct AuditOptions {
  std::vector<double> q_grid;          // defaults to 0..1 in steps of 1/32
  double tol = kDefaultTol;            // PSD threshold: min_eig >= -tol*order*maxabs
  double resolution = 1e-6;            // feasible-interval endpoint resolution
  // Diagnostic factor subsets, measured and reported but never part of the
  // feasibility decision (only party cuts are).
  std::vector<std::vector<int>> extra_factor_cuts;
};

struct AuditPoint {
  double q = 0.0;
  double min_eig_rho = 0.0;
  std::vector<double> cut_min_eigs;        // aligned with AuditReport::cuts
  std::vector<double> extra_cut_min_eigs;  // aligned with options.extra_factor_cuts
  bool feasible = false;
  std::optional<ConditionMargins> margins_top;
  std::optional<ConditionMargins> margins_full;
};

struct AuditReport {
  int parties = 0, dim_a = 0, dim_b = 0;
  bool canonical_blocks = true;
  double tol = kDefaultTol;
  double resolution = 1e-6;
  double q_star_value = 0.0;
  double lemma3_bound = 0.0;
  bool margins_available = false;
  std::vector<CutSpec> cuts;
  std::vector<std::vector<int>> extra_factor_cuts;
  std::vector<AuditPoint> points;
  std::optional<std::pair<double, double>> feasible_q;
};

/*
 * Builds rho(q) across the grid, measures the minimum eigenvalue of the state
 * and of its transposition over every canonical cut, and reports the measured
 * q-interval on which everything stays positive within tolerance. The
 * interval endpoints are refined by bisection, which is sound because the
 * states with positive transpositions form a convex set and rho(q) moves
 * along a segment. An empty interval is a first-class outcome. The q stored
 * in params is ignored; the grid drives the scan.
 */
AuditReport ppt_audit(const FamilyParams& params, const BlockPair& blocks,
                      const AuditOptions& options);

std::string audit_to_json(const AuditReport& report);

struct VerifyReport {
  FamilyParams params;
  bool canonical_blocks = true;
  DensityReport density;
  SupportReport support;
  CoreDistanceCheck core_distance;
  bool pass = false;
};

VerifyReport run_verify(const FamilyParams& params, const BlockPair& blocks,
                        double tol = kDefaultTol);

std::string verify_to_json(const VerifyReport& report);

/*
 * Dimension scaling: to push the separable-distance bound to 1 - epsilon,
 * split the slack evenly, epsilon/2 = 1/dA^n and epsilon/2 = q*, giving
 *
 *     dA^n = 2/eps,   dB^n = N * (2-eps)/eps * ((2/eps)^(1/n) - 1),
 *
 * and a total ideal dimension d = dA^n * dB^n that stays below
 * C(n)/eps^(2+1/n) with C(n) = 8*N*2^(1/n).
 */
struct BoundReport {
  int parties = 0;
  std::optional<int> dim_a, dim_b;
  std::optional<double> q_star_value;
  std::optional<double> lemma1_distance;  // 2*q*
  std::optional<double> rho0_bound;
  std::optional<double> lemma3_bound;
  double c_n = 0.0;  // 8*N*2^(1/n)
  std::optional<double> epsilon;
  std::optional<double> dim_a_ideal, dim_b_ideal;
  std::optional<long long> dim_a_int, dim_b_int;
  std::optional<double> d_ideal, d_bound;
};

BoundReport dims_for_epsilon(int parties, double epsilon);

BoundReport bounds_report(int parties, std::optional<int> dim_a, std::optional<int> dim_b,
                          std::optional<double> epsilon);

std::string bounds_to_json(const BoundReport& report);

// CSV table with header n,epsilon,dA_ideal,dB_ideal,d_ideal,d_bound.
std::string scan_csv(std::span<const int> parties, std::span<const double> epsilons);

}  // namespace pptfarm
