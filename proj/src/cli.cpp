#include "deltaspec/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "deltaspec/config_io.hpp"
#include "deltaspec/errors.hpp"
#include "deltaspec/linalg.hpp"
#include "deltaspec/resolvent.hpp"
#include "deltaspec/resonance.hpp"
#include "deltaspec/spectral.hpp"

namespace deltaspec::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json to_json(complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

json to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> split_numbers(const std::string& text, std::size_t expected, const char* flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v))
      throw UsageError(std::string(flag) + ": '" + item + "' is not a finite number");
    values.push_back(v);
  }
  if (values.size() != expected)
    throw UsageError(std::string(flag) + " expects " + std::to_string(expected) +
                     " comma-separated numbers");
  return values;
}

Vec3 parse_vec3(const std::string& text, const char* flag) {
  const auto v = split_numbers(text, 3, flag);
  return {v[0], v[1], v[2]};
}

complex parse_complex(const std::string& text, const char* flag) {
  const auto v = split_numbers(text, 2, flag);
  return {v[0], v[1]};
}

struct Invocation {
  std::string command;
  std::string config_path;
  json parameters = json::object();
  json result = json::object();
  // Header plus rows, written only when --csv is given.
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
};

struct Options {
  std::string out_path;
  std::string csv_path;
  std::string config_path;

  double spectrum_tol = 1e-10;
  double zero_tol = 1e-10;
  double laurent_radius = 1e-2;
  int laurent_nodes = 64;
  std::vector<double> box;
  double resonance_tol = 1e-10;
  std::string zmax = "auto";
  std::optional<double> grid;
  std::string resolvent_z;
  std::string resolvent_x;
  std::string resolvent_xp;
  std::optional<double> helmholtz_h;
  std::string axis = "real";
  double scan_from = 0.0;
  double scan_to = 0.0;
  double scan_step = 0.0;
};

json bound_state_json(const BoundState& s) {
  return {{"lambda", s.lambda},
          {"energy", s.energy},
          {"multiplicity", s.multiplicity},
          {"coefficients", s.coefficients},
          {"residual", s.residual}};
}

void run_spectrum(const PointConfig& cfg, const Options& o, Invocation& inv) {
  inv.parameters["tol"] = o.spectrum_tol;
  const auto report = negative_eigenvalues(cfg, o.spectrum_tol);
  json list = json::array();
  for (const auto& s : report.eigenvalues) list.push_back(bound_state_json(s));
  inv.result["eigenvalues"] = std::move(list);
  inv.result["total_multiplicity"] = report.total_multiplicity();
}

void run_classify_zero(const PointConfig& cfg, const Options& o, Invocation& inv) {
  inv.parameters["tol"] = o.zero_tol;
  const auto c = classify_zero(cfg, o.zero_tol);
  inv.result["label"] = std::string(to_string(c.label));
  inv.result["kernel_dim"] = c.kernel_dim;
  inv.result["eigenvalue_multiplicity"] = c.eigenvalue_multiplicity;
  inv.result["resonance_present"] = c.resonance_present;
  inv.result["eigen_coefficients"] = c.eigen_coefficients;
  inv.result["resonance_coefficients"] =
      c.resonance_coefficients ? json(*c.resonance_coefficients) : json(nullptr);
}

void run_laurent(const PointConfig& cfg, const Options& o, Invocation& inv) {
  inv.parameters["radius"] = o.laurent_radius;
  inv.parameters["nodes"] = o.laurent_nodes;
  const auto l = laurent_at_zero(cfg, o.laurent_radius, o.laurent_nodes);
  inv.result["a_minus2"] = to_json(l.a_minus2);
  inv.result["a_minus1"] = to_json(l.a_minus1);
  inv.result["norm_a_minus2"] = frobenius_norm(l.a_minus2);
  inv.result["norm_a_minus1"] = frobenius_norm(l.a_minus1);
  inv.result["radius"] = l.radius;
  inv.result["nodes"] = l.nodes;
  inv.result["last_change"] = l.last_change;
  inv.result["stable"] = l.stable;
}

void run_resonances(const PointConfig& cfg, const Options& o, Invocation& inv) {
  inv.parameters["box"] = o.box;
  inv.parameters["tol"] = o.resonance_tol;
  const Box box(o.box[0], o.box[1], o.box[2], o.box[3]);
  const auto set = find_resonances(cfg, box, o.resonance_tol);
  json roots = json::array();
  for (const auto& r : set.roots)
    roots.push_back({{"z", to_json(r.z)},
                     {"energy", to_json(r.z * r.z)},
                     {"multiplicity", r.multiplicity},
                     {"kind", std::string(to_string(r.kind))},
                     {"abs_det", r.abs_det},
                     {"sigma_min", r.sigma_min}});
  inv.result["roots"] = std::move(roots);
  inv.result["total_count"] = set.total_count;
  inv.result["searched_box"] = {set.searched.re_min, set.searched.re_max, set.searched.im_min,
                                set.searched.im_max};
}

void run_certify(const PointConfig& cfg, const Options& o, Invocation& inv, std::ostream& err) {
  CertifyOptions options;
  options.grid_step = o.grid;
  if (o.zmax != "auto") options.z_max = split_numbers(o.zmax, 1, "--zmax")[0];
  inv.parameters["zmax"] = options.z_max ? json(*options.z_max) : json("auto");
  inv.parameters["grid"] = o.grid ? json(*o.grid) : json("default");

  const auto c = certify_real_axis(cfg, options);
  std::size_t argmin = 0;
  bool all_cholesky = true;
  for (std::size_t k = 0; k < c.z_grid.size(); ++k) {
    if (c.sigma_min[k] < c.sigma_min[argmin]) argmin = k;
    all_cholesky = all_cholesky && c.cholesky_ok[k];
  }
  inv.result["verdict"] = c.verdict;
  inv.result["z_star"] = c.z_star;
  inv.result["grid_step"] = c.grid_step;
  inv.result["grid_points"] = c.z_grid.size();
  inv.result["z_end"] = c.z_grid.empty() ? 0.0 : c.z_grid.back();
  inv.result["threshold"] = c.threshold;
  inv.result["min_sigma"] = c.z_grid.empty() ? json(nullptr) : json(c.sigma_min[argmin]);
  inv.result["argmin_z"] = c.z_grid.empty() ? json(nullptr) : json(c.z_grid[argmin]);
  inv.result["all_cholesky_ok"] = all_cholesky;
  inv.result["bound_at_z_star"] = c.bound_at_z_star;
  inv.result["covers_z_star"] = c.covers_z_star;

  inv.csv_header = {"z", "sigma_min", "cholesky_ok"};
  for (std::size_t k = 0; k < c.z_grid.size(); ++k)
    inv.csv_rows.push_back({csv_number(c.z_grid[k]), csv_number(c.sigma_min[k]),
                            c.cholesky_ok[k] ? "true" : "false"});

  if (!c.verdict) {
    err << "WARNING: real-axis certificate FAILED";
    if (!c.covers_z_star) err << " (grid stops before z_star = " << c.z_star << ")";
    if (!all_cholesky) err << " (sinc-Gram Cholesky failed on the grid)";
    err << "; see the CSV for the offending grid points\n";
  }
}

void run_resolvent(const PointConfig& cfg, const Options& o, Invocation& inv) {
  const complex z = parse_complex(o.resolvent_z, "--z");
  const Vec3 x = parse_vec3(o.resolvent_x, "--x");
  const Vec3 xp = parse_vec3(o.resolvent_xp, "--xp");
  inv.parameters["z"] = to_json(z);
  inv.parameters["x"] = to_json(x);
  inv.parameters["xp"] = to_json(xp);

  const complex kernel = resolvent_kernel(cfg, z, x, xp);
  inv.result["z"] = to_json(z);
  inv.result["free"] = to_json(free_kernel(z, x, xp));
  inv.result["correction"] = to_json(resolvent_correction(cfg, z, x, xp));
  inv.result["kernel"] = to_json(kernel);

  if (o.helmholtz_h) {
    const double h = *o.helmholtz_h;
    inv.parameters["check_helmholtz"] = h;
    const double coarse = helmholtz_residual(cfg, z, x, xp, h);
    const double fine = helmholtz_residual(cfg, z, x, xp, h / 2.0);
    inv.result["helmholtz"] = {{"h", h},
                               {"residual_h", coarse},
                               {"residual_h_half", fine},
                               {"ratio", fine > 0.0 ? json(coarse / fine) : json(nullptr)}};
  }
}

void run_scan_det(const PointConfig& cfg, const Options& o, Invocation& inv) {
  if (o.axis != "real" && o.axis != "imag") throw UsageError("--axis must be real or imag");
  if (!(o.scan_step > 0.0)) throw UsageError("--step must be positive");
  if (!(o.scan_to >= o.scan_from)) throw UsageError("--to must not be below --from");
  inv.parameters["axis"] = o.axis;
  inv.parameters["from"] = o.scan_from;
  inv.parameters["to"] = o.scan_to;
  inv.parameters["step"] = o.scan_step;

  const auto count =
      static_cast<std::size_t>(std::floor((o.scan_to - o.scan_from) / o.scan_step + 1e-9)) + 1;
  json rows = json::array();
  inv.csv_header = {"z", "re_det", "im_det", "abs_det", "sigma_min"};
  for (std::size_t k = 0; k < count; ++k) {
    const double t = o.scan_from + static_cast<double>(k) * o.scan_step;
    const complex z = o.axis == "real" ? complex(t, 0.0) : complex(0.0, t);
    const auto gamma = assemble_gamma(cfg, z).entries;
    const complex det = linalg::lu_det(gamma).second;
    const double sigma = linalg::min_singular_value(gamma);
    rows.push_back({{"z", t},
                    {"re_det", det.real()},
                    {"im_det", det.imag()},
                    {"abs_det", std::abs(det)},
                    {"sigma_min", sigma}});
    inv.csv_rows.push_back({csv_number(t), csv_number(det.real()), csv_number(det.imag()),
                            csv_number(std::abs(det)), csv_number(sigma)});
  }
  inv.result["rows"] = std::move(rows);
}

void write_csv(const std::string& path, const Invocation& inv) {
  std::ofstream csv(path, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot open CSV output " + path);
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) csv << (i ? "," : "") << fields[i];
    csv << "\r\n";
  };
  line(inv.csv_header);
  for (const auto& r : inv.csv_rows) line(r);
}

json error_json(const char* kind, const std::string& message, const std::string* pointer) {
  json e = {{"kind", kind}, {"message", message}};
  if (pointer) e["pointer"] = *pointer;
  return {{"error", e}};
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral analysis of -Laplacian with N point interactions in R^3", "deltaspec"};
  app.fallthrough();
  app.require_subcommand(1);
  Options o;
  app.add_option("--out", o.out_path, "Write the JSON result to FILE instead of stdout");
  app.add_option("--csv", o.csv_path, "Also write grid data as CSV (certify, scan-det)");
  app.set_version_flag("--version", kToolVersion);

  auto with_config = [&](CLI::App* sub) {
    sub->add_option("config", o.config_path, "Configuration JSON file")->required();
    return sub;
  };

  auto* spectrum = with_config(app.add_subcommand("spectrum", "Negative eigenvalues"));
  spectrum->add_option("--tol", o.spectrum_tol, "Relative zero tolerance");

  auto* zero = with_config(app.add_subcommand("classify-zero", "Zero-energy classification"));
  zero->add_option("--tol", o.zero_tol, "Relative kernel tolerance");

  auto* laurent = with_config(app.add_subcommand("laurent", "Laurent coefficients of Gamma^-1 at 0"));
  laurent->add_option("--radius", o.laurent_radius, "Contour radius");
  laurent->add_option("--nodes", o.laurent_nodes, "Initial number of quadrature nodes");

  auto* resonances = with_config(app.add_subcommand("resonances", "Zeros of det Gamma in a box"));
  resonances->add_option("--box", o.box, "re_min re_max im_min im_max")->expected(4)->required();
  resonances->add_option("--tol", o.resonance_tol, "Newton tolerance");

  auto* certify = with_config(app.add_subcommand("certify", "Real-axis non-singularity certificate"));
  certify->add_option("--zmax", o.zmax, "auto or an upper end for the grid");
  certify->add_option("--grid", o.grid, "Grid step");

  auto* resolvent = with_config(app.add_subcommand("resolvent", "Resolvent kernel at (x, x')"));
  resolvent->add_option("--z", o.resolvent_z, "RE,IM")->required();
  resolvent->add_option("--x", o.resolvent_x, "X,Y,Z")->required();
  resolvent->add_option("--xp", o.resolvent_xp, "X,Y,Z")->required();
  resolvent->add_option("--check-helmholtz", o.helmholtz_h, "Finite-difference step H");

  auto* scan = with_config(app.add_subcommand("scan-det", "det Gamma along an axis"));
  scan->add_option("--axis", o.axis, "real or imag")->check(CLI::IsMember({"real", "imag"}));
  scan->add_option("--from", o.scan_from)->required();
  scan->add_option("--to", o.scan_to)->required();
  scan->add_option("--step", o.scan_step)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  Invocation inv;
  inv.command = app.get_subcommands().front()->get_name();
  inv.config_path = o.config_path;
  if (!o.csv_path.empty() && inv.command != "certify" && inv.command != "scan-det") {
    err << "error: --csv is only available for certify and scan-det\n";
    return 2;
  }
  try {
    const PointConfig cfg = parse_config(o.config_path);
    if (inv.command == "spectrum")
      run_spectrum(cfg, o, inv);
    else if (inv.command == "classify-zero")
      run_classify_zero(cfg, o, inv);
    else if (inv.command == "laurent")
      run_laurent(cfg, o, inv);
    else if (inv.command == "resonances")
      run_resonances(cfg, o, inv);
    else if (inv.command == "certify")
      run_certify(cfg, o, inv, err);
    else if (inv.command == "resolvent")
      run_resolvent(cfg, o, inv);
    else
      run_scan_det(cfg, o, inv);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << error_json(e.kind(), e.what(), &e.pointer()).dump() << "\n";
    return 1;
  } catch (const Error& e) {
    err << error_json(e.kind(), e.what(), nullptr).dump() << "\n";
    return 1;
  }

  json doc = inv.result;
  doc["manifest"] = {{"command", inv.command},
                     {"config_path", inv.config_path},
                     {"parameters", inv.parameters},
                     {"tool_version", kToolVersion},
                     {"timestamp", utc_timestamp()}};
  try {
    if (!o.csv_path.empty()) write_csv(o.csv_path, inv);
    if (o.out_path.empty()) {
      out << doc.dump(2) << "\n";
    } else {
      std::ofstream file(o.out_path);
      if (!file) throw std::runtime_error("cannot open output " + o.out_path);
      file << doc.dump(2) << "\n";
    }
  } catch (const std::runtime_error& e) {
    err << error_json("io", e.what(), nullptr).dump() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace deltaspec::cli
