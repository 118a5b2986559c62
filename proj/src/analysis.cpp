#include "pptfarm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "json.hpp"

namespace pptfarm {

namespace {

void require_formula_domain(int parties, int dim_a, int dim_b) {
  if (parties < 2) throw DomainError("at least two parties required");
  if (dim_a < 2) throw DomainError("dim_a must be >= 2");
  if (dim_b < 2) throw DomainError("dim_b must be >= 2");
}

double dpow(double base, int exp) { return std::pow(base, static_cast<double>(exp)); }

}  // namespace

double q_star(int parties, int dim_a, int dim_b) {
  require_formula_domain(parties, dim_a, dim_b);
  const double n_patterns = static_cast<double>(count_patterns(parties));
  const double dbn = dpow(dim_b, parties);
  return 1.0 / (1.0 + dbn / (n_patterns * (dim_a - 1)));
}

double core_distance_formula(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("core_distance_formula: q must lie in [0, 1]");
  return 2.0 * q;
}

double rho0_sep_bound(int parties, int dim_a) {
  if (parties < 2) throw DomainError("at least two parties required");
  if (dim_a < 2) throw DomainError("dim_a must be >= 2");
  return 1.0 - 1.0 / dpow(dim_a, parties);
}

double sep_distance_lower_bound(int parties, int dim_a, int dim_b) {
  require_formula_domain(parties, dim_a, dim_b);
  return rho0_sep_bound(parties, dim_a) - q_star(parties, dim_a, dim_b);
}

CoreDistanceCheck verify_core_distance(const FamilyParams& params, const BlockPair& blocks,
                                       double tol) {
  CoreDistanceCheck check;
  check.expected = core_distance_formula(params.q);
  SymMatrix mixture = build_mixture(params, blocks);
  SymMatrix core = build_rho0(params, blocks.a);
  check.measured = trace_norm(SymMatrix::combine(1.0, mixture, -1.0, core));
  check.residual = std::fabs(check.measured - check.expected);
  check.pass = check.residual <= tol;
  return check;
}

double ConditionMargins::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto* family : {&x_plus, &x_minus, &y_plus, &y_minus})
    for (double v : *family) m = std::min(m, v);
  return m;
}

namespace {

// Uniform eigenvalue of payload a, or nothing when a is not an exact scalar
// multiple of the identity.
std::optional<double> uniform_eigenvalue(const SymMatrix& a) {
  const double nu = a.entry(1, 1);
  for (std::int64_t r = 1; r <= a.order(); ++r)
    for (std::int64_t c = 1; c <= a.order(); ++c) {
      double expected = (r == c) ? nu : 0.0;
      if (a.entry(r, c) != expected) return std::nullopt;
    }
  return nu;
}

ConditionMargins margins_from(double nu, std::vector<double> mu, const FamilyParams& params,
                              PairingMode mode) {
  ConditionMargins margins;
  margins.mode = mode;
  margins.nu = nu;
  margins.mu = std::move(mu);
  const double p = params.p();
  const double x = params.mixing_x();
  const double da1 = static_cast<double>(params.dim_a - 1);
  margins.x_plus.reserve(margins.mu.size());
  for (double m : margins.mu) {
    margins.x_plus.push_back(x * m + p * nu);
    margins.x_minus.push_back(x * m - p * nu);
    margins.y_plus.push_back(p * nu + da1 * x * m);
    margins.y_minus.push_back(p * nu - x * m);
  }
  return margins;
}

}  // namespace

ConditionMargins analytic_conditions(const FamilyParams& params, const BlockPair& blocks,
                                     PairingMode mode) {
  std::optional<double> nu = uniform_eigenvalue(blocks.a);
  if (!nu)
    throw DomainError(
        "unsupported decomposition: payload a is not a scalar multiple of the identity");
  std::vector<double> mu = eigenvalues(blocks.b);
  if (mode == PairingMode::TopEigenvalue) mu = {mu.back()};
  return margins_from(*nu, std::move(mu), params, mode);
}

double binding_q(const FamilyParams& params, const BlockPair& blocks) {
  std::optional<double> nu = uniform_eigenvalue(blocks.a);
  if (!nu)
    throw DomainError(
        "unsupported decomposition: payload a is not a scalar multiple of the identity");
  const double mu_top = eigenvalues(blocks.b).back();
  const double nd = static_cast<double>(params.label_count());
  // Solve (1-q)*nu = (q/ND)*mu for q.
  return nd * *nu / (nd * *nu + mu_top);
}

SymMatrix assemble_x_block(const FamilyParams& params, const BlockPair& blocks) {
  const std::int64_t m = params.block_order();
  std::vector<int> dims{2};
  for (int k = 0; k < params.parties; ++k) dims.push_back(params.dim_b);
  BlockAssembler assembler{FactorSpace(std::move(dims)), m};
  assembler.add(1, 1, blocks.b, params.mixing_x());
  assembler.add(2, 2, blocks.b, params.mixing_x());
  assembler.add(1, 2, blocks.a, params.p());
  assembler.add(2, 1, blocks.a, params.p());
  return assembler.take();
}

SymMatrix assemble_y_block(const FamilyParams& params, const BlockPair& blocks) {
  const std::int64_t m = params.block_order();
  std::vector<int> dims{params.dim_a};
  for (int k = 0; k < params.parties; ++k) dims.push_back(params.dim_b);
  BlockAssembler assembler{FactorSpace(std::move(dims)), m};
  for (int r = 1; r <= params.dim_a; ++r)
    for (int c = 1; c <= params.dim_a; ++c) {
      if (r == c)
        assembler.add(r, c, blocks.a, params.p());
      else
        assembler.add(r, c, blocks.b, params.mixing_x());
    }
  return assembler.take();
}

std::vector<int> CutSpec::factor_positions(const FactorSpace& space) const {
  std::vector<int> out;
  for (int party : parties)
    for (int f : space.party_factors(party)) out.push_back(f);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CutSpec> canonical_cuts(int parties) {
  if (parties < 2) throw DomainError("canonical_cuts: at least two parties required");
  std::vector<CutSpec> cuts;
  for (unsigned mask = 1; mask < (1u << (parties - 1)); ++mask) {
    CutSpec cut;
    for (int k = 0; k < parties - 1; ++k)
      if (mask & (1u << k)) cut.parties.push_back(k + 2);
    cuts.push_back(std::move(cut));
  }
  std::sort(cuts.begin(), cuts.end(), [](const CutSpec& a, const CutSpec& b) {
    if (a.parties.size() != b.parties.size()) return a.parties.size() < b.parties.size();
    return a.parties < b.parties;
  });
  return cuts;
}

namespace {

int thread_budget() {
  if (const char* env = std::getenv("PPTFARM_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

template <typename Fn>
void parallel_for(std::size_t jobs, Fn&& fn) {
  int budget = std::min<std::size_t>(static_cast<std::size_t>(thread_budget()), jobs);
  if (budget <= 1) {
    for (std::size_t k = 0; k < jobs; ++k) fn(k);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (int t = 0; t < budget; ++t) {
    workers.emplace_back([&, t]() {
      try {
        for (std::size_t k = static_cast<std::size_t>(t); k < jobs;
             k += static_cast<std::size_t>(budget))
          fn(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<double> default_q_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 32; ++k) grid.push_back(static_cast<double>(k) / 32.0);
  return grid;
}

struct PointMeasurement {
  double min_eig_rho = 0.0;
  std::vector<double> cut_min_eigs;
  std::vector<double> extra_cut_min_eigs;
  double max_abs = 0.0;
};

}  // namespace

AuditReport ppt_audit(const FamilyParams& params, const BlockPair& blocks,
                      const AuditOptions& options) {
  params.require_capacity();

  AuditReport report;
  report.parties = params.parties;
  report.dim_a = params.dim_a;
  report.dim_b = params.dim_b;
  report.canonical_blocks = blocks.is_canonical(params);
  report.tol = options.tol;
  report.resolution = options.resolution;
  report.q_star_value = q_star(params.parties, params.dim_a, params.dim_b);
  report.lemma3_bound = sep_distance_lower_bound(params.parties, params.dim_a, params.dim_b);
  report.cuts = canonical_cuts(params.parties);
  report.extra_factor_cuts = options.extra_factor_cuts;

  std::vector<double> grid = options.q_grid.empty() ? default_q_grid() : options.q_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (double q : grid)
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("ppt_audit: q grid values must lie in [0, 1]");
  if (grid.empty()) throw DomainError("ppt_audit: empty q grid");

  const FactorSpace space = params.space();
  const double nd = static_cast<double>(params.label_count());

  // The mixture is affine in q, so one core matrix and one label sum serve
  // every grid point and every bisection probe.
  const SymMatrix core = build_rho0(params, blocks.a);
  SymMatrix label_sum = [&]() {
    LabelMap labels(params.parties, params.dim_a);
    BlockAssembler assembler(params.space(), params.block_order());
    for (const OperatorLabel& label : labels.all()) {
      assembler.add(label.v_flat, label.v_flat, blocks.b);
      assembler.add(label.v_flat, label.w_flat, blocks.b);
      assembler.add(label.w_flat, label.v_flat, blocks.b);
      assembler.add(label.w_flat, label.w_flat, blocks.b);
    }
    return assembler.take();
  }();

  std::vector<std::vector<int>> cut_factors;
  for (const CutSpec& cut : report.cuts) cut_factors.push_back(cut.factor_positions(space));
  for (const auto& factors : options.extra_factor_cuts)
    for (int f : factors)
      if (f < 1 || f > space.factor_count())
        throw DomainError("ppt_audit: diagnostic factor position out of range");

  auto measure = [&](double q) {
    SymMatrix rho = SymMatrix::combine(1.0 - q, core, q / nd, label_sum);
    PointMeasurement m;
    m.max_abs = rho.max_abs();
    m.min_eig_rho = min_eigenvalue(rho);
    for (const auto& factors : cut_factors)
      m.cut_min_eigs.push_back(min_eigenvalue(partial_transpose(rho, factors)));
    for (const auto& factors : options.extra_factor_cuts)
      m.extra_cut_min_eigs.push_back(min_eigenvalue(partial_transpose(rho, factors)));
    return m;
  };
  auto is_feasible = [&](const PointMeasurement& m) {
    double threshold =
        -options.tol * static_cast<double>(space.total_dim()) * m.max_abs;
    if (m.min_eig_rho < threshold) return false;
    return std::all_of(m.cut_min_eigs.begin(), m.cut_min_eigs.end(),
                       [&](double v) { return v >= threshold; });
  };

  // Analytic margins are defined whenever payload a is a multiple of the
  // identity; they are juxtaposed with the measurements, never substituted.
  std::optional<double> nu = uniform_eigenvalue(blocks.a);
  std::vector<double> mu_full;
  if (nu) mu_full = eigenvalues(blocks.b);
  report.margins_available = nu.has_value();

  std::vector<PointMeasurement> measurements(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) { measurements[k] = measure(grid[k]); });

  for (std::size_t k = 0; k < grid.size(); ++k) {
    AuditPoint point;
    point.q = grid[k];
    point.min_eig_rho = measurements[k].min_eig_rho;
    point.feasible = is_feasible(measurements[k]);
    point.cut_min_eigs = std::move(measurements[k].cut_min_eigs);
    point.extra_cut_min_eigs = std::move(measurements[k].extra_cut_min_eigs);
    if (nu) {
      FamilyParams at_q(params.parties, params.dim_a, params.dim_b, grid[k]);
      point.margins_top = margins_from(*nu, {mu_full.back()}, at_q, PairingMode::TopEigenvalue);
      point.margins_full = margins_from(*nu, mu_full, at_q, PairingMode::Full);
    }
    report.points.push_back(std::move(point));
  }

  // Feasible interval: find the feasible grid stretch, then sharpen both
  // endpoints against their nearest infeasible neighbours.
  std::ptrdiff_t first = -1, last = -1;
  for (std::size_t k = 0; k < report.points.size(); ++k) {
    if (report.points[k].feasible) {
      if (first < 0) first = static_cast<std::ptrdiff_t>(k);
      last = static_cast<std::ptrdiff_t>(k);
    }
  }
  if (first >= 0) {
    auto probe = [&](double q) { return is_feasible(measure(q)); };
    auto bisect = [&](double bad, double good) {
      while (std::fabs(good - bad) > options.resolution) {
        double mid = 0.5 * (bad + good);
        (probe(mid) ? good : bad) = mid;
      }
      return good;
    };
    double lo = grid[static_cast<std::size_t>(first)];
    double hi = grid[static_cast<std::size_t>(last)];
    if (first > 0) lo = bisect(grid[static_cast<std::size_t>(first - 1)], lo);
    if (last + 1 < static_cast<std::ptrdiff_t>(grid.size()))
      hi = bisect(grid[static_cast<std::size_t>(last + 1)], hi);
    report.feasible_q = std::make_pair(lo, hi);
  }
  return report;
}

namespace {

nlohmann::ordered_json margins_json(const ConditionMargins& margins) {
  nlohmann::ordered_json doc;
  doc["nu"] = margins.nu;
  doc["mu"] = margins.mu;
  doc["x_plus"] = margins.x_plus;
  doc["x_minus"] = margins.x_minus;
  doc["y_plus"] = margins.y_plus;
  doc["y_minus"] = margins.y_minus;
  doc["min"] = margins.min_margin();
  return doc;
}

}  // namespace

std::string audit_to_json(const AuditReport& report) {
  nlohmann::ordered_json doc;
  doc["format"] = "pptfarm-audit/1";
  doc["params"] = {{"n", report.parties}, {"dA", report.dim_a}, {"dB", report.dim_b}};
  doc["blocks"] = report.canonical_blocks ? "canonical" : "user";
  doc["tol"] = report.tol;
  doc["resolution"] = report.resolution;
  doc["q_star"] = report.q_star_value;
  doc["lemma3_bound"] = report.lemma3_bound;
  nlohmann::ordered_json q_grid = nlohmann::ordered_json::array();
  nlohmann::ordered_json min_eig_rho = nlohmann::ordered_json::array();
  for (const AuditPoint& point : report.points) {
    q_grid.push_back(point.q);
    min_eig_rho.push_back(point.min_eig_rho);
  }
  doc["q_grid"] = std::move(q_grid);
  doc["min_eig_rho"] = std::move(min_eig_rho);
  nlohmann::ordered_json cuts = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < report.cuts.size(); ++c) {
    nlohmann::ordered_json cut;
    cut["parties"] = report.cuts[c].parties;
    nlohmann::ordered_json eigs = nlohmann::ordered_json::array();
    for (const AuditPoint& point : report.points) eigs.push_back(point.cut_min_eigs[c]);
    cut["min_eig"] = std::move(eigs);
    cuts.push_back(std::move(cut));
  }
  doc["cuts"] = std::move(cuts);
  nlohmann::ordered_json extra = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < report.extra_factor_cuts.size(); ++c) {
    nlohmann::ordered_json cut;
    cut["factors"] = report.extra_factor_cuts[c];
    nlohmann::ordered_json eigs = nlohmann::ordered_json::array();
    for (const AuditPoint& point : report.points) eigs.push_back(point.extra_cut_min_eigs[c]);
    cut["min_eig"] = std::move(eigs);
    extra.push_back(std::move(cut));
  }
  doc["factor_cuts"] = std::move(extra);
  nlohmann::ordered_json margins;
  margins["available"] = report.margins_available;
  nlohmann::ordered_json per_q = nlohmann::ordered_json::array();
  if (report.margins_available) {
    for (const AuditPoint& point : report.points) {
      nlohmann::ordered_json entry;
      entry["q"] = point.q;
      entry["top"] = margins_json(*point.margins_top);
      entry["full"] = margins_json(*point.margins_full);
      per_q.push_back(std::move(entry));
    }
  }
  margins["per_q"] = std::move(per_q);
  doc["margins"] = std::move(margins);
  if (report.feasible_q)
    doc["feasible_q"] = {report.feasible_q->first, report.feasible_q->second};
  else
    doc["feasible_q"] = nullptr;
  return doc.dump(2);
}

VerifyReport run_verify(const FamilyParams& params, const BlockPair& blocks, double tol) {
  SymMatrix mixture = build_mixture(params, blocks);
  VerifyReport report{params,
                      blocks.is_canonical(params),
                      validate_density(mixture, tol),
                      support_orthogonality_check(params, blocks),
                      verify_core_distance(params, blocks),
                      false};
  report.pass = report.density.pass && report.support.pass && report.core_distance.pass;
  return report;
}

std::string verify_to_json(const VerifyReport& report) {
  nlohmann::ordered_json doc;
  doc["format"] = "pptfarm-verify/1";
  doc["params"] = {{"n", report.params.parties},
                   {"dA", report.params.dim_a},
                   {"dB", report.params.dim_b},
                   {"q", report.params.q}};
  doc["blocks"] = report.canonical_blocks ? "canonical" : "user";
  doc["density"] = {{"order", report.density.order},
                    {"tol", report.density.tol},
                    {"trace_dev", report.density.trace_dev},
                    {"min_eig", report.density.min_eig},
                    {"max_abs", report.density.max_abs},
                    {"pass", report.density.pass}};
  doc["support_orthogonality"] = {{"max_residual", report.support.max_residual},
                                  {"threshold", report.support.threshold},
                                  {"pass", report.support.pass}};
  doc["core_distance"] = {{"expected", report.core_distance.expected},
                          {"measured", report.core_distance.measured},
                          {"residual", report.core_distance.residual},
                          {"pass", report.core_distance.pass}};
  doc["pass"] = report.pass;
  return doc.dump(2);
}

BoundReport dims_for_epsilon(int parties, double epsilon) {
  if (parties < 2) throw DomainError("dims_for_epsilon: at least two parties required");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw DomainError("dims_for_epsilon: epsilon must lie in (0, 1)");

  BoundReport report;
  report.parties = parties;
  report.epsilon = epsilon;
  const double n_patterns = static_cast<double>(count_patterns(parties));
  const double inv_n = 1.0 / static_cast<double>(parties);
  report.c_n = 8.0 * n_patterns * std::pow(2.0, inv_n);

  const double dan = 2.0 / epsilon;
  const double root = std::pow(dan, inv_n);
  const double dbn = n_patterns * ((2.0 - epsilon) / epsilon) * (root - 1.0);
  report.dim_a_ideal = root;
  report.dim_b_ideal = std::pow(dbn, inv_n);
  report.d_ideal = dan * dbn;
  report.d_bound = report.c_n / std::pow(epsilon, 2.0 + inv_n);
  if (*report.d_ideal > *report.d_bound * (1.0 + 1e-9))
    throw NumericError("dims_for_epsilon: ideal dimension exceeded its bound");

  auto ceil_snapped = [](double x) {
    double r = std::round(x);
    if (std::fabs(x - r) <= 1e-9 * std::max(1.0, std::fabs(x)))
      return static_cast<long long>(r);
    return static_cast<long long>(std::ceil(x));
  };
  report.dim_a_int = ceil_snapped(*report.dim_a_ideal);
  report.dim_b_int = ceil_snapped(*report.dim_b_ideal);
  return report;
}

BoundReport bounds_report(int parties, std::optional<int> dim_a, std::optional<int> dim_b,
                          std::optional<double> epsilon) {
  if (dim_a.has_value() != dim_b.has_value())
    throw DomainError("bounds_report: dim_a and dim_b must be given together");
  if (!dim_a && !epsilon)
    throw DomainError("bounds_report: local dimensions or epsilon required");

  BoundReport report;
  if (epsilon) {
    report = dims_for_epsilon(parties, *epsilon);
  } else {
    if (parties < 2) throw DomainError("bounds_report: at least two parties required");
    report.parties = parties;
    report.c_n = 8.0 * static_cast<double>(count_patterns(parties)) *
                 std::pow(2.0, 1.0 / static_cast<double>(parties));
  }
  if (dim_a) {
    report.dim_a = dim_a;
    report.dim_b = dim_b;
    report.q_star_value = q_star(parties, *dim_a, *dim_b);
    report.lemma1_distance = core_distance_formula(*report.q_star_value);
    report.rho0_bound = rho0_sep_bound(parties, *dim_a);
    report.lemma3_bound = sep_distance_lower_bound(parties, *dim_a, *dim_b);
  }
  return report;
}

std::string bounds_to_json(const BoundReport& report) {
  nlohmann::ordered_json doc;
  auto set = [&doc](const char* key, const auto& value) {
    if (value)
      doc[key] = *value;
    else
      doc[key] = nullptr;
  };
  doc["format"] = "pptfarm-bounds/1";
  doc["n"] = report.parties;
  set("dA", report.dim_a);
  set("dB", report.dim_b);
  set("q_star", report.q_star_value);
  set("lemma1_distance", report.lemma1_distance);
  set("rho0_sep_bound", report.rho0_bound);
  set("lemma3_bound", report.lemma3_bound);
  doc["C_n"] = report.c_n;
  set("epsilon", report.epsilon);
  set("dA_ideal", report.dim_a_ideal);
  set("dB_ideal", report.dim_b_ideal);
  set("dA_int", report.dim_a_int);
  set("dB_int", report.dim_b_int);
  set("d_ideal", report.d_ideal);
  set("d_bound", report.d_bound);
  return doc.dump(2);
}

std::string scan_csv(std::span<const int> parties, std::span<const double> epsilons) {
  if (parties.empty() || epsilons.empty())
    throw DomainError("scan_csv: party and epsilon lists must be non-empty");
  auto fmt = [](double v) {
    nlohmann::json j = v;  // shortest round-trip formatting
    return j.dump();
  };
  std::string out = "n,epsilon,dA_ideal,dB_ideal,d_ideal,d_bound\n";
  for (int n : parties) {
    for (double eps : epsilons) {
      BoundReport r = dims_for_epsilon(n, eps);
      out += std::to_string(n) + "," + fmt(eps) + "," + fmt(*r.dim_a_ideal) + "," +
             fmt(*r.dim_b_ideal) + "," + fmt(*r.d_ideal) + "," + fmt(*r.d_bound) + "\n";
    }
  }
  return out;
}

}  // namespace pptfarm
