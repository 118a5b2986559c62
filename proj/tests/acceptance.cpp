// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Measurements go through the library; expectations come from frozen golden
// data, rational arithmetic, and the independent oracles in oracles.hpp.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "golden.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "pptfarm/analysis.hpp"
#include "pptfarm/family.hpp"
#include "pptfarm/layout.hpp"
#include "pptfarm/matrix_json.hpp"

using namespace pptfarm;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& message) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += message;
    }
  }
};

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  std::string command = std::string(PPTFARM_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  CliResult result;
  if (!pipe) return result;
  char buffer[4096];
  std::size_t got = 0;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) result.out.append(buffer, got);
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path tmp_dir() {
  fs::path dir = fs::current_path() / "acceptance_tmp";
  fs::create_directories(dir);
  return dir;
}

// ---- 1: pattern and label combinatorics -------------------------------------

Check criterion_combinatorics() {
  Check check;
  auto start = std::chrono::steady_clock::now();

  check.require(count_patterns(2) == 1 && count_patterns(3) == 3 && count_patterns(4) == 7,
                "pattern counts for n=2,3,4 must be 1,3,7");

  for (int n : {2, 3, 4}) {
    for (int da : {2, 3, 4}) {
      LabelMap labels(n, da);
      long long expected = count_patterns(n) * static_cast<long long>(da) * (da - 1) / 2;
      check.require(labels.count() == expected,
                    "label count mismatch at n=" + std::to_string(n) +
                        " dA=" + std::to_string(da));
      // bijection round trip: (pattern, i, j) -> v -> l
      std::map<std::int64_t, int> by_flat;
      for (const OperatorLabel& label : labels.all()) by_flat[label.v_flat] = label.l;
      FactorSpace a_space = FactorSpace::uniform(n, da);
      for (const OperatorLabel& label : labels.all()) {
        std::vector<int> v(static_cast<std::size_t>(n), label.i);
        for (int k = 1; k < n; ++k)
          if (label.pattern.flips[static_cast<std::size_t>(k - 1)])
            v[static_cast<std::size_t>(k)] = label.j;
        auto it = by_flat.find(a_space.flat_index(v));
        check.require(it != by_flat.end() && it->second == label.l,
                      "label round trip failed at l=" + std::to_string(label.l));
      }
    }
  }

  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  check.require(seconds < 1.0, "runtime " + fmt(seconds) + " s exceeds 1 s");
  return check;
}

// ---- 2: golden block layout --------------------------------------------------

Check criterion_golden_layout() {
  Check check;

  std::set<std::tuple<std::int64_t, std::int64_t, char, int>> expected;
  for (const golden::Cell& cell : golden::kLayout333)
    expected.insert({cell.row, cell.col, cell.payload, cell.label});

  CliResult json_run = run_cli("layout -n 3 --dA 3 --format json");
  check.require(json_run.exit_code == 0, "layout --format json exited nonzero");
  if (json_run.exit_code == 0) {
    nlohmann::json doc = nlohmann::json::parse(json_run.out, nullptr, false);
    check.require(!doc.is_discarded(), "layout JSON did not parse");
    if (!doc.is_discarded()) {
      std::set<std::tuple<std::int64_t, std::int64_t, char, int>> actual;
      for (const auto& cell : doc.at("blocks"))
        actual.insert({cell.at("row").get<std::int64_t>(), cell.at("col").get<std::int64_t>(),
                       cell.at("payload").get<std::string>().at(0), cell.at("l").get<int>()});
      check.require(actual == expected, "JSON block set differs from the golden layout");

      std::vector<std::int64_t> diagonals;
      for (const auto& label : doc.at("labels"))
        diagonals.push_back(label.at("v_flat").get<std::int64_t>());
      check.require(std::equal(diagonals.begin(), diagonals.end(),
                               golden::kLabelDiagonals333.begin(),
                               golden::kLabelDiagonals333.end()),
                    "label diagonals differ from 2,3,4,5,7,9,15,17,18");
    }
  }

  CliResult text_run = run_cli("layout -n 3 --dA 3");
  check.require(text_run.exit_code == 0, "layout text exited nonzero");
  if (text_run.exit_code == 0) {
    std::set<std::tuple<std::int64_t, std::int64_t, char, int>> actual;
    std::istringstream lines(text_run.out);
    std::string line;
    std::int64_t row = 0;
    while (std::getline(lines, line)) {
      if (line.empty() || line[0] == '#') continue;
      ++row;
      std::istringstream tokens(line);
      std::string token;
      std::int64_t col = 0;
      while (tokens >> token) {
        ++col;
        if (token == ".") continue;
        if (token == "a")
          actual.insert({row, col, 'a', 0});
        else
          actual.insert({row, col, 'b', std::stoi(token.substr(1))});
      }
      check.require(col == 27, "grid row " + std::to_string(row) + " has " +
                                   std::to_string(col) + " columns");
    }
    check.require(row == 27, "grid has " + std::to_string(row) + " rows");
    check.require(actual == expected, "text block set differs from the golden layout");
  }

  return check;
}

// ---- 3: measured core distance ----------------------------------------------

Check criterion_core_distance() {
  Check check;
  auto start = std::chrono::steady_clock::now();

  for (auto [n, da, db] : {std::tuple{2, 2, 2}, std::tuple{2, 3, 2}, std::tuple{3, 3, 2}}) {
    for (double q : {0.0, 0.25, q_star(n, da, db), 1.0}) {
      FamilyParams params(n, da, db, q);
      BlockPair blocks = BlockPair::canonical(params);
      SymMatrix rho = build_mixture(params, blocks);
      SymMatrix core = build_rho0(params, blocks.a);
      double measured = trace_norm(SymMatrix::combine(1.0, rho, -1.0, core));
      check.require(std::fabs(measured - 2.0 * q) <= 1e-8,
                    "distance residual " + fmt(std::fabs(measured - 2.0 * q)) + " at (" +
                        std::to_string(n) + "," + std::to_string(da) + "," +
                        std::to_string(db) + ") q=" + fmt(q));
    }
  }

  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  check.require(seconds < 30.0, "runtime " + fmt(seconds) + " s exceeds 30 s");
  return check;
}

// ---- 4: canonical payload spectra --------------------------------------------

Check criterion_block_spectra() {
  Check check;
  for (int n : {2, 3, 4}) {
    for (int da : {2, 3, 4}) {
      for (int db : {2, 3, 4}) {
        FamilyParams params(n, da, db, 0.5);
        if (params.block_order() > 64) continue;
        BlockPair blocks = BlockPair::canonical(params);
        const double m = static_cast<double>(params.block_order());

        for (double ev : eigenvalues(blocks.a))
          check.require(std::fabs(ev - 1.0 / (da * m)) <= 1e-12,
                        "payload a eigenvalue off at dB^n=" + fmt(m));
        std::vector<double> spec_b = eigenvalues(blocks.b);
        check.require(std::fabs(spec_b.back() - 0.5) <= 1e-12,
                      "payload b top eigenvalue off at dB^n=" + fmt(m));
        for (std::size_t k = 0; k + 1 < spec_b.size(); ++k)
          check.require(std::fabs(spec_b[k]) <= 1e-12,
                        "payload b null eigenvalue off at dB^n=" + fmt(m));
      }
    }
  }
  return check;
}

// ---- 5: formula regression ----------------------------------------------------

Check criterion_formula_regression() {
  Check check;

  auto expect = [&](double actual, long double rational, const std::string& name) {
    check.require(std::fabs(actual - static_cast<double>(rational)) <= 1e-12,
                  name + " = " + fmt(actual) + " differs from rational value");
  };
  expect(q_star(2, 2, 2), 1.0L / 5.0L, "q_star(2,2,2)");
  expect(q_star(3, 3, 2), 3.0L / 7.0L, "q_star(3,3,2)");
  expect(sep_distance_lower_bound(2, 2, 2), 11.0L / 20.0L, "bound(2,2,2)");
  expect(sep_distance_lower_bound(3, 3, 2), 1.0L - 1.0L / 27.0L - 3.0L / 7.0L,
         "bound(3,3,2)");

  // minimum over the parameter grid
  double reference = sep_distance_lower_bound(2, 2, 2);
  for (int n : {2, 3, 4})
    for (int da : {2, 3, 4})
      for (int db : {2, 3, 4}) {
        double bound = sep_distance_lower_bound(n, da, db);
        check.require(reference <= bound + 1e-12,
                      "bound(" + std::to_string(n) + "," + std::to_string(da) + "," +
                          std::to_string(db) + ")=" + fmt(bound) +
                          " undercuts bound(2,2,2)=" + fmt(reference));
      }
  return check;
}

// ---- 6: condition margins against the literal block matrices ------------------

Check criterion_condition_fidelity() {
  Check check;

  auto nearest_gap = [](double value, const std::vector<double>& eigs) {
    double best = std::numeric_limits<double>::infinity();
    for (double ev : eigs) best = std::min(best, std::fabs(value - ev));
    return best;
  };

  for (auto [n, da, db] : {std::tuple{2, 2, 2}, std::tuple{2, 3, 2}, std::tuple{3, 3, 2}}) {
    for (double q : {0.2, q_star(n, da, db), 0.7}) {
      FamilyParams params(n, da, db, q);
      BlockPair blocks = BlockPair::canonical(params);
      std::vector<double> spec_x = eigenvalues(assemble_x_block(params, blocks));
      std::vector<double> spec_y = eigenvalues(assemble_y_block(params, blocks));
      for (PairingMode mode : {PairingMode::TopEigenvalue, PairingMode::Full}) {
        ConditionMargins margins = analytic_conditions(params, blocks, mode);
        for (const auto& [values, spec, tag] :
             {std::tuple{&margins.x_plus, &spec_x, "X+"}, {&margins.x_minus, &spec_x, "X-"},
              {&margins.y_plus, &spec_y, "Y+"}, {&margins.y_minus, &spec_y, "Y-"}}) {
          for (double v : *values)
            check.require(nearest_gap(v, *spec) <= 1e-10,
                          std::string(tag) + " margin " + fmt(v) +
                              " is not an eigenvalue of its block matrix");
        }
      }
    }
  }

  for (int n : {2, 3, 4})
    for (int da : {2, 3, 4})
      for (int db : {2, 3, 4}) {
        FamilyParams params(n, da, db, 0.5);
        BlockPair blocks = BlockPair::canonical(params);
        check.require(std::fabs(binding_q(params, blocks) - q_star(n, da, db)) <= 1e-12,
                      "binding q differs from the formula at (" + std::to_string(n) + "," +
                          std::to_string(da) + "," + std::to_string(db) + ")");
      }
  return check;
}

// ---- 7: partial transpose correctness -----------------------------------------

Check criterion_partial_transpose() {
  Check check;
  std::vector<int> dims{2, 2, 2};
  FactorSpace space(dims);
  std::vector<std::vector<int>> subsets{{1}, {2}, {3}, {1, 2}, {2, 3}, {1, 2, 3}};

  for (std::uint32_t seed = 0; seed < 50; ++seed) {
    std::vector<double> raw = oracle::random_symmetric(space.total_dim(), 1000 + seed);
    SymMatrix m = SymMatrix::from_dense(space, raw);
    for (const auto& factors : subsets) {
      SymMatrix once = partial_transpose(m, factors);
      check.require(partial_transpose(once, factors) == m, "involution failed");
      std::vector<double> expected = oracle::naive_partial_transpose(raw, dims, factors);
      check.require(
          std::equal(expected.begin(), expected.end(), once.entries().begin()),
          "naive re-indexing oracle disagrees at seed " + std::to_string(seed));
    }
  }

  // exact linearity and invariants on dyadic data
  for (std::uint32_t seed = 0; seed < 10; ++seed) {
    std::vector<double> raw_a = oracle::random_dyadic_symmetric(space.total_dim(), 2000 + seed);
    std::vector<double> raw_b = oracle::random_dyadic_symmetric(space.total_dim(), 3000 + seed);
    SymMatrix ma = SymMatrix::from_dense(space, raw_a);
    SymMatrix mb = SymMatrix::from_dense(space, raw_b);
    for (const auto& factors : subsets) {
      SymMatrix lhs = partial_transpose(SymMatrix::combine(0.5, ma, -0.75, mb), factors);
      SymMatrix rhs = SymMatrix::combine(0.5, partial_transpose(ma, factors), -0.75,
                                         partial_transpose(mb, factors));
      check.require(lhs == rhs, "linearity failed");
      SymMatrix t = partial_transpose(ma, factors);
      check.require(t.trace() == ma.trace(), "trace changed");
      check.require(t.frobenius_norm() == ma.frobenius_norm(), "Frobenius norm changed");
    }
  }

  std::vector<int> all{1, 2, 3};
  for (std::uint32_t seed = 0; seed < 5; ++seed) {
    SymMatrix m = SymMatrix::from_dense(space, oracle::random_symmetric(8, 4000 + seed));
    std::vector<double> before = eigenvalues(m);
    std::vector<double> after = eigenvalues(partial_transpose(m, all));
    for (std::size_t k = 0; k < before.size(); ++k)
      check.require(std::fabs(before[k] - after[k]) <= 1e-10,
                    "full transpose moved the spectrum");
  }
  return check;
}

// ---- 8: audit equivalence with the brute-force oracle --------------------------

Check criterion_audit_oracle() {
  Check check;
  auto start = std::chrono::steady_clock::now();

  struct Setup {
    int n, da, db;
    std::vector<double> grid;
  };
  std::vector<Setup> setups{{2, 2, 2, {0.0, 0.2, 1.0}}, {3, 3, 2, {0.0, 3.0 / 7.0, 1.0}}};

  for (const Setup& setup : setups) {
    FamilyParams params(setup.n, setup.da, setup.db, 0.0);
    BlockPair blocks = BlockPair::canonical(params);
    AuditOptions options;
    options.q_grid = setup.grid;
    AuditReport report = ppt_audit(params, blocks, options);

    check.require(report.resolution == 1e-6, "interval resolution is not 1e-6");
    if (report.feasible_q) {
      check.require(report.feasible_q->first >= 0.0 && report.feasible_q->second <= 1.0 &&
                        report.feasible_q->first <= report.feasible_q->second,
                    "feasible interval endpoints out of order");
    }

    oracle::FamilyOracle reference(setup.n, setup.da, setup.db);
    FactorSpace space = params.space();
    for (std::size_t k = 0; k < setup.grid.size(); ++k) {
      std::vector<double> rho = reference.matrix(setup.grid[k]);
      double rho_min = oracle::jacobi_min_eigenvalue(rho, reference.order);
      check.require(std::fabs(report.points[k].min_eig_rho - rho_min) <= 1e-10,
                    "state minimum differs from the oracle at q=" + fmt(setup.grid[k]));
      for (std::size_t c = 0; c < report.cuts.size(); ++c) {
        std::vector<int> factors = report.cuts[c].factor_positions(space);
        std::vector<double> pt =
            oracle::naive_partial_transpose(rho, reference.dims(), factors);
        double pt_min = oracle::jacobi_min_eigenvalue(pt, reference.order);
        check.require(std::fabs(report.points[k].cut_min_eigs[c] - pt_min) <= 1e-10,
                      "cut minimum differs from the oracle at q=" + fmt(setup.grid[k]) +
                          " cut#" + std::to_string(c + 1) + " (lib " +
                          fmt(report.points[k].cut_min_eigs[c]) + " vs oracle " + fmt(pt_min) +
                          ")");
      }
    }
  }

  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  check.require(seconds < 120.0, "runtime " + fmt(seconds) + " s exceeds 120 s");
  return check;
}

// ---- 9: dimension scaling ------------------------------------------------------

Check criterion_dimension_scaling() {
  Check check;
  const std::vector<double> eps_grid{1e-1, 1e-2, 1e-3, 1e-4};
  for (int n : {2, 3, 4}) {
    double previous = -std::numeric_limits<double>::infinity();
    for (double eps : eps_grid) {
      BoundReport report = dims_for_epsilon(n, eps);
      double d_ideal = report.d_ideal.value();
      double d_bound = report.d_bound.value();
      check.require(d_ideal <= d_bound * (1.0 + 1e-9),
                    "d_ideal exceeds its bound at n=" + std::to_string(n) +
                        " eps=" + fmt(eps));
      double factor = d_ideal * std::pow(eps, 2.0 + 1.0 / n);
      // non-increasing in eps: along this descending grid the factor grows
      check.require(factor >= previous * (1.0 - 1e-9),
                    "d_ideal*eps^(2+1/n) is not monotone at n=" + std::to_string(n) +
                        " eps=" + fmt(eps));
      check.require(factor <= report.c_n * (1.0 + 1e-9),
                    "d_ideal*eps^(2+1/n) crossed C(n) at n=" + std::to_string(n));
      previous = factor;
    }
  }
  return check;
}

// ---- 10: CLI determinism -------------------------------------------------------

Check criterion_cli_determinism() {
  Check check;
  fs::path dir = tmp_dir();

  std::vector<std::string> commands{
      "build -n 2 --dA 2 --dB 2 -q 0.2",
      "verify -n 2 --dA 2 --dB 2 -q 0.25",
      "audit -n 2 --dA 2 --dB 2 -q 0,0.2,1",
      "bounds -n 3 --dA 3 --dB 2 --epsilon 0.5",
      "scan -n 2,3,4 --epsilon 0.1,0.01,0.001",
      "layout -n 3 --dA 3",
      "layout -n 3 --dA 3 --format json",
  };
  for (const std::string& command : commands) {
    CliResult first = run_cli(command);
    CliResult second = run_cli(command);
    check.require(first.exit_code == second.exit_code && first.out == second.out,
                  "output of '" + command + "' is not reproducible");
    check.require(first.exit_code == 0, "'" + command + "' exited nonzero");
  }

  fs::path out1 = dir / "det1.json";
  fs::path out2 = dir / "det2.json";
  CliResult f1 = run_cli("build -n 3 --dA 3 --dB 2 -q 0.3 -o " + out1.string());
  CliResult f2 = run_cli("build -n 3 --dA 3 --dB 2 -q 0.3 -o " + out2.string());
  check.require(f1.exit_code == 0 && f2.exit_code == 0, "build with -o exited nonzero");
  check.require(f1.out == f2.out, "build summaries differ");
  check.require(slurp(out1) == slurp(out2), "exported files differ");
  check.require(!slurp(out1).empty(), "exported file is empty");
  return check;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "combinatorics", criterion_combinatorics},
      {2, "golden-layout", criterion_golden_layout},
      {3, "core-distance", criterion_core_distance},
      {4, "block-spectra", criterion_block_spectra},
      {5, "formula-regression", criterion_formula_regression},
      {6, "condition-fidelity", criterion_condition_fidelity},
      {7, "partial-transpose", criterion_partial_transpose},
      {8, "audit-oracle", criterion_audit_oracle},
      {9, "dimension-scaling", criterion_dimension_scaling},
      {10, "cli-determinism", criterion_cli_determinism},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    auto start = std::chrono::steady_clock::now();
    Check check;
    try {
      check = criterion.run();
    } catch (const std::exception& e) {
      check.pass = false;
      check.detail = std::string("exception: ") + e.what();
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2d %-20s (%.2f s)%s%s\n", check.pass ? "PASS" : "FAIL", criterion.id,
                criterion.name, seconds, check.detail.empty() ? "" : ": ",
                check.detail.c_str());
    if (!check.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
