// Command-line front end for the pptfarm shared library. Builds and exports
// family matrices, runs the verification and audit reports, and evaluates the
// bound and dimension-scaling formulas. All heavy lifting happens behind the
// C API; this file only parses arguments and moves bytes.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pptfarm.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitCapacity = 3;

int exit_code_for(pptfarm_status status) {
  switch (status) {
    case PPTFARM_OK:
      return kExitOk;
    case PPTFARM_ERR_CAPACITY:
      return kExitCapacity;
    default:
      return kExitInvalid;
  }
}

[[nodiscard]] int report_error(pptfarm_status status) {
  std::cerr << "pptfarm: " << pptfarm_last_error() << "\n";
  return exit_code_for(status);
}

struct OwnedString {
  char* text = nullptr;
  ~OwnedString() { pptfarm_string_free(text); }
  std::string str() const { return text ? text : ""; }
};

struct OwnedMatrix {
  pptfarm_matrix* m = nullptr;
  ~OwnedMatrix() { pptfarm_matrix_free(m); }
};

struct OwnedFamily {
  pptfarm_family* f = nullptr;
  ~OwnedFamily() { pptfarm_family_free(f); }
};

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  out = buffer.str();
  return true;
}

bool write_output(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << "\n";
    return true;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "pptfarm: cannot open output file " << out_path << "\n";
    return false;
  }
  out << payload;
  return out.good();
}

std::string format_double(double v) {
  return nlohmann::json(v).dump();  // shortest round-trip representation
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw CLI::ValidationError("empty entry in numeric list");
    std::size_t used = 0;
    double v = std::stod(item, &used);
    if (used != item.size()) throw CLI::ValidationError("bad numeric value: " + item);
    values.push_back(v);
  }
  if (values.empty()) throw CLI::ValidationError("empty numeric list");
  return values;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  for (double v : parse_double_list(text)) {
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) throw CLI::ValidationError("integer expected");
    values.push_back(i);
  }
  return values;
}

// Shared family configuration: flags, optionally seeded from a description
// file {"n":..., "d_A":..., "d_B":..., "q":..., "blocks": "canonical"|{a,b}}.
struct FamilyConfig {
  std::string family_file;
  std::optional<int> parties, dim_a, dim_b;
  std::optional<double> q;
  std::string blocks = "canonical";

  std::string block_a_path, block_b_path;

  bool load(bool q_required) {
    if (!family_file.empty()) {
      std::string text;
      if (!read_file(family_file, text)) {
        std::cerr << "pptfarm: cannot read family file " << family_file << "\n";
        return false;
      }
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(text);
        if (!parties && doc.contains("n")) parties = doc.at("n").get<int>();
        if (!dim_a && doc.contains("d_A")) dim_a = doc.at("d_A").get<int>();
        if (!dim_b && doc.contains("d_B")) dim_b = doc.at("d_B").get<int>();
        if (!q && doc.contains("q")) q = doc.at("q").get<double>();
        if (doc.contains("blocks") && blocks == "canonical") {
          if (doc.at("blocks").is_string()) {
            blocks = doc.at("blocks").get<std::string>();
          } else {
            block_a_path = doc.at("blocks").at("a").get<std::string>();
            block_b_path = doc.at("blocks").at("b").get<std::string>();
            blocks = "files";
          }
        }
      } catch (const nlohmann::json::exception& e) {
        std::cerr << "pptfarm: malformed family file: " << e.what() << "\n";
        return false;
      }
    }
    if (blocks != "canonical" && blocks != "files") {
      auto comma = blocks.find(',');
      if (comma == std::string::npos) {
        std::cerr << "pptfarm: --blocks expects 'canonical' or 'A_FILE,B_FILE'\n";
        return false;
      }
      block_a_path = blocks.substr(0, comma);
      block_b_path = blocks.substr(comma + 1);
      blocks = "files";
    }
    if (!parties || !dim_a || !dim_b) {
      std::cerr << "pptfarm: party count and local dimensions are required\n";
      return false;
    }
    if (q_required && !q) {
      std::cerr << "pptfarm: mixing weight q is required\n";
      return false;
    }
    return true;
  }

  // Creates the handle, loading user payloads when configured. On failure
  // prints the error and stores the exit code.
  bool make_family(OwnedFamily& family, int& exit_code, double q_value) const {
    pptfarm_status status =
        pptfarm_family_create(*parties, *dim_a, *dim_b, q_value, &family.f);
    if (status != PPTFARM_OK) {
      exit_code = report_error(status);
      return false;
    }
    if (blocks == "files") {
      OwnedMatrix a, b;
      for (auto [path, slot] : {std::pair{&block_a_path, &a}, std::pair{&block_b_path, &b}}) {
        std::string text;
        if (!read_file(*path, text)) {
          std::cerr << "pptfarm: cannot read block file " << *path << "\n";
          exit_code = kExitInvalid;
          return false;
        }
        status = pptfarm_matrix_from_json(text.c_str(), &slot->m);
        if (status != PPTFARM_OK) {
          exit_code = report_error(status);
          return false;
        }
      }
      status = pptfarm_family_set_blocks(family.f, a.m, b.m);
      if (status != PPTFARM_OK) {
        exit_code = report_error(status);
        return false;
      }
    }
    return true;
  }
};

void add_output_option(CLI::App* cmd, std::string& out_path) {
  cmd->add_option("-o,--out", out_path, "output file (default: stdout)");
}

void add_family_options(CLI::App* cmd, FamilyConfig& config, std::string& q_text,
                        bool with_q) {
  cmd->add_option("family", config.family_file,
                  "optional family description file (JSON)");
  cmd->add_option("-n,--parties", config.parties, "party count n (>= 2)");
  cmd->add_option("--dA", config.dim_a, "local dimension of the A side (>= 2)");
  cmd->add_option("--dB", config.dim_b, "local dimension of the B side (>= 2)");
  if (with_q) cmd->add_option("-q,--q-grid", q_text, "mixing weight, or comma list for audit");
  cmd->add_option("--blocks", config.blocks,
                  "payload source: 'canonical' or 'A_FILE,B_FILE'");
}

int cmd_build(FamilyConfig& config, const std::string& q_text, const std::string& out_path) {
  if (!q_text.empty()) {
    auto values = parse_double_list(q_text);
    if (values.size() != 1) {
      std::cerr << "pptfarm: build expects a single q value\n";
      return kExitInvalid;
    }
    config.q = values[0];
  }
  if (!config.load(/*q_required=*/true)) return kExitInvalid;

  OwnedFamily family;
  int exit_code = kExitOk;
  if (!config.make_family(family, exit_code, *config.q)) return exit_code;

  OwnedMatrix rho;
  pptfarm_status status = pptfarm_family_build(family.f, &rho.m);
  if (status != PPTFARM_OK) return report_error(status);

  OwnedString json;
  status = pptfarm_matrix_to_json(rho.m, &json.text);
  if (status != PPTFARM_OK) return report_error(status);

  if (!write_output(out_path, json.str())) return kExitInvalid;
  if (!out_path.empty()) {
    long long order = 0, blocks = 0;
    double trace = 0.0;
    pptfarm_matrix_order(rho.m, &order);
    pptfarm_matrix_trace(rho.m, &trace);
    pptfarm_family_block_count(family.f, &blocks);
    std::cout << "order=" << order << " trace=" << format_double(trace)
              << " blocks=" << blocks << "\n";
  }
  return kExitOk;
}

int cmd_verify(FamilyConfig& config, const std::string& q_text, double tol,
               const std::string& out_path) {
  if (!q_text.empty()) {
    auto values = parse_double_list(q_text);
    if (values.size() != 1) {
      std::cerr << "pptfarm: verify expects a single q value\n";
      return kExitInvalid;
    }
    config.q = values[0];
  }
  if (!config.load(/*q_required=*/true)) return kExitInvalid;

  OwnedFamily family;
  int exit_code = kExitOk;
  if (!config.make_family(family, exit_code, *config.q)) return exit_code;

  int all_pass = 0;
  OwnedString json;
  pptfarm_status status = pptfarm_verify_json(family.f, tol, &all_pass, &json.text);
  if (status != PPTFARM_OK) return report_error(status);
  if (!write_output(out_path, json.str())) return kExitInvalid;
  return all_pass ? kExitOk : kExitVerifyFailed;
}

int cmd_audit(FamilyConfig& config, const std::string& q_text, double tol,
              const std::string& out_path) {
  std::vector<double> grid;
  if (!q_text.empty()) grid = parse_double_list(q_text);
  if (!config.load(/*q_required=*/false)) return kExitInvalid;

  OwnedFamily family;
  int exit_code = kExitOk;
  if (!config.make_family(family, exit_code, config.q.value_or(0.0))) return exit_code;

  OwnedString json;
  pptfarm_status status =
      pptfarm_audit_json(family.f, grid.empty() ? nullptr : grid.data(), grid.size(), tol,
                         &json.text);
  if (status != PPTFARM_OK) return report_error(status);
  if (!write_output(out_path, json.str())) return kExitInvalid;
  return kExitOk;
}

int cmd_bounds(int parties, std::optional<int> dim_a, std::optional<int> dim_b,
               std::optional<double> epsilon, const std::string& out_path) {
  if (dim_a.has_value() != dim_b.has_value()) {
    std::cerr << "pptfarm: --dA and --dB must be given together\n";
    return kExitInvalid;
  }
  OwnedString json;
  pptfarm_status status = pptfarm_bounds_json(parties, dim_a.value_or(0), dim_b.value_or(0),
                                              epsilon.value_or(0.0), &json.text);
  if (status != PPTFARM_OK) return report_error(status);
  if (!write_output(out_path, json.str())) return kExitInvalid;
  return kExitOk;
}

int cmd_scan(const std::string& parties_text, const std::string& epsilon_text,
             const std::string& out_path) {
  std::vector<int> parties = parse_int_list(parties_text);
  std::vector<double> epsilons = parse_double_list(epsilon_text);
  OwnedString csv;
  pptfarm_status status =
      pptfarm_scan_csv(parties.data(), parties.size(), epsilons.data(), epsilons.size(),
                       &csv.text);
  if (status != PPTFARM_OK) return report_error(status);
  if (!write_output(out_path, csv.str())) return kExitInvalid;
  return kExitOk;
}

int cmd_layout(int parties, int dim_a, const std::string& format,
               const std::string& out_path) {
  OwnedString text;
  pptfarm_status status = format == "json" ? pptfarm_layout_json(parties, dim_a, &text.text)
                                           : pptfarm_layout_text(parties, dim_a, &text.text);
  if (status != PPTFARM_OK) return report_error(status);
  if (!write_output(out_path, text.str())) return kExitInvalid;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pptfarm: block-structured multipartite state family laboratory"};
  app.require_subcommand(1);

  std::string out_path;

  FamilyConfig build_config, verify_config, audit_config;
  std::string build_q, verify_q, audit_q;
  double verify_tol = 1e-9, audit_tol = 1e-9;

  CLI::App* build = app.add_subcommand("build", "build the mixture and export it as JSON");
  add_family_options(build, build_config, build_q, true);
  add_output_option(build, out_path);

  CLI::App* verify = app.add_subcommand(
      "verify", "density, support-orthogonality and core-distance checks");
  add_family_options(verify, verify_config, verify_q, true);
  verify->add_option("--tol", verify_tol, "tolerance for the density check");
  add_output_option(verify, out_path);

  CLI::App* audit = app.add_subcommand(
      "audit", "measure spectra across all cuts over a q grid");
  add_family_options(audit, audit_config, audit_q, true);
  audit->add_option("--tol", audit_tol, "positivity tolerance");
  add_output_option(audit, out_path);

  int bounds_n = 0;
  std::optional<int> bounds_da, bounds_db;
  std::optional<double> bounds_eps;
  CLI::App* bounds = app.add_subcommand("bounds", "closed-form distance and scaling report");
  bounds->add_option("-n,--parties", bounds_n, "party count n (>= 2)")->required();
  bounds->add_option("--dA", bounds_da, "local dimension of the A side");
  bounds->add_option("--dB", bounds_db, "local dimension of the B side");
  bounds->add_option("--epsilon", bounds_eps, "target distance slack in (0, 1)");
  add_output_option(bounds, out_path);

  std::string scan_parties, scan_eps, scan_format = "csv";
  CLI::App* scan = app.add_subcommand("scan", "dimension-scaling table over (n, epsilon)");
  scan->add_option("-n,--parties", scan_parties, "comma list of party counts")->required();
  scan->add_option("--epsilon", scan_eps, "comma list of epsilon values")->required();
  scan->add_option("--format", scan_format, "output format: csv");
  add_output_option(scan, out_path);

  int layout_n = 0, layout_da = 0;
  std::string layout_format = "text";
  CLI::App* layout = app.add_subcommand("layout", "A-block occupancy grid of the construction");
  layout->add_option("-n,--parties", layout_n, "party count n (>= 2)")->required();
  layout->add_option("--dA", layout_da, "local dimension of the A side")->required();
  layout->add_option("--format", layout_format, "output format: text or json");
  add_output_option(layout, out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (build->parsed()) return cmd_build(build_config, build_q, out_path);
    if (verify->parsed()) return cmd_verify(verify_config, verify_q, verify_tol, out_path);
    if (audit->parsed()) return cmd_audit(audit_config, audit_q, audit_tol, out_path);
    if (bounds->parsed()) return cmd_bounds(bounds_n, bounds_da, bounds_db, bounds_eps, out_path);
    if (scan->parsed()) {
      if (scan_format != "csv") {
        std::cerr << "pptfarm: scan supports only --format csv\n";
        return kExitInvalid;
      }
      return cmd_scan(scan_parties, scan_eps, out_path);
    }
    if (layout->parsed()) {
      if (layout_format != "text" && layout_format != "json") {
        std::cerr << "pptfarm: layout supports --format text or json\n";
        return kExitInvalid;
      }
      return cmd_layout(layout_n, layout_da, layout_format, out_path);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "pptfarm: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "pptfarm: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
