// ba_lab: batch front end for the balab library.
//
// Exit codes: 0 ok, 1 unparseable configuration, 2 parameter / dimension /
// exactness error, 3 enumeration budget exceeded, 4 output I/O failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "balab/balab.hpp"
#include "balab/io/report.hpp"

namespace {

using namespace balab;
using nlohmann::json;

enum Exit { kOk = 0, kConfig = 1, kParameter = 2, kBudget = 3, kIo = 4 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep = ',') {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

Scalar parse_scalar(const std::string& text, bool force_float, const std::string& flag) {
  try {
    return Scalar::parse(text, force_float);
  } catch (const ParameterError& e) {
    throw ConfigError(flag + ": " + e.what());
  }
}

std::vector<Scalar> parse_scalars(const std::string& text, bool force_float, const std::string& flag) {
  std::vector<Scalar> out;
  for (const auto& item : split(text)) out.push_back(parse_scalar(item, force_float, flag));
  return out;
}

std::vector<double> parse_doubles(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  for (const auto& s : parse_scalars(text, false, flag)) out.push_back(s.to_double());
  return out;
}

// "start:stop:step" or a comma list.
std::vector<double> parse_times(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) return parse_doubles(text, "--times");
  if (parts.size() != 3) throw ConfigError("--times: expected a comma list or start:stop:step");
  const double start = parse_scalar(parts[0], false, "--times").to_double();
  const double stop = parse_scalar(parts[1], false, "--times").to_double();
  const double step = parse_scalar(parts[2], false, "--times").to_double();
  if (!(step > 0)) throw ParameterError("--times: step must be positive");
  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const double t = start + static_cast<double>(i) * step;
    if (t > stop + 1e-12 * std::max(1.0, std::fabs(stop))) break;
    out.push_back(t);
  }
  return out;
}

struct SystemArgs {
  std::size_t m = 1;
  std::size_t n = 1;
  std::string a;
  std::string b;
  bool force_float = false;

  void attach(CLI::App& cmd, bool need_b = true) {
    cmd.add_option("--m", m, "number of forms")->check(CLI::PositiveNumber);
    cmd.add_option("--n", n, "number of variables")->check(CLI::PositiveNumber);
    cmd.add_option("--A", a, "matrix entries, row-major, comma separated (num/den or decimal)")->required();
    auto* opt_b = cmd.add_option("--b", b, "translation entries, comma separated");
    if (need_b) opt_b->required();
    cmd.add_flag("--float", force_float, "parse every entry as Float64");
  }

  AffineSystem build() const {
    auto entries = parse_scalars(a, force_float, "--A");
    Vector shift = b.empty() ? Vector(m, force_float ? Scalar(0.0) : Scalar(0)) : parse_scalars(b, force_float, "--b");
    if (entries.size() != m * n)
      throw DimensionError("--A has " + std::to_string(entries.size()) + " entries, expected m*n = " +
                           std::to_string(m * n));
    return AffineSystem(m, n, std::move(entries), std::move(shift));
  }
};

struct Common {
  std::uint64_t budget = kDefaultBudget;
  unsigned threads = default_threads();
  std::string output = "-";
  std::string format;

  ScanOptions scan() const {
    ScanOptions opt;
    opt.budget = budget;
    opt.threads = threads;
    return opt;
  }
};

class Sink {
 public:
  explicit Sink(const std::string& path) : path_(path) {
    if (path_ != "-") {
      file_.open(path_, std::ios::binary | std::ios::trunc);
      if (!file_) throw IoError("cannot open '" + path_ + "' for writing");
    }
  }
  std::ostream& stream() { return path_ == "-" ? std::cout : file_; }
  void finish() {
    stream().flush();
    if (!stream()) throw IoError("write to '" + path_ + "' failed");
  }

 private:
  std::string path_;
  std::ofstream file_;
};

void write_json(const Common& c, const json& j) {
  Sink sink(c.output);
  sink.stream() << j.dump(2) << '\n';
  sink.finish();
}

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (format == f) return;
  std::string list;
  for (const char* f : allowed) list += std::string(list.empty() ? "" : "|") + f;
  throw ConfigError("--format must be one of " + list + ", got '" + format + "'");
}

std::uint64_t budget_from_env() {
  const char* env = std::getenv("BA_LAB_BUDGET");
  if (!env || !*env) return kDefaultBudget;
  std::uint64_t v = 0;
  const std::string s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v == 0)
    throw ConfigError("BA_LAB_BUDGET must be a positive integer, got '" + s + "'");
  return v;
}

std::vector<Interval> parse_region(const std::string& text) {
  const auto v = parse_doubles(text, "--region");
  if (v.size() != 4) throw ConfigError("--region expects a0,a1,b0,b1");
  return {Interval{v[0], v[1]}, Interval{v[2], v[3]}};
}

std::vector<std::size_t> parse_sizes(const std::string& text, std::size_t resolution) {
  std::vector<std::size_t> sizes;
  if (text.empty()) {
    for (std::size_t s = 1; s < resolution; s *= 2)
      if (resolution % s == 0 && resolution / s >= 2) sizes.push_back(s);
    return sizes;
  }
  for (const auto& item : split(text)) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size()) throw ConfigError("--scales: bad box size '" + item + "'");
    sizes.push_back(v);
  }
  return sizes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inhomogeneous Diophantine approximation lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ba_lab 0.1");

  Common common;
  std::optional<std::uint64_t> budget_flag;
  std::map<const CLI::App*, std::string> default_format;
  auto add_common = [&](CLI::App* cmd, const char* format) {
    default_format[cmd] = format;
    cmd->add_option("--budget", budget_flag, "enumeration budget (default 1e7, or BA_LAB_BUDGET)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threads", common.threads, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--output,-o", common.output, "output file ('-' for stdout)");
  };

  SystemArgs sys_args;
  std::uint64_t N = 1, Q = 0;

  auto* classify_cmd = app.add_subcommand("classify", "rational / Kronecker classification (exact input)");
  sys_args.attach(*classify_cmd);
  add_common(classify_cmd, "json");

  auto* ctrunc_cmd = app.add_subcommand("ctrunc", "truncated constant min over N <= |q| <= Q");
  sys_args.attach(*ctrunc_cmd);
  ctrunc_cmd->add_option("--N", N, "inner shell")->check(CLI::PositiveNumber);
  ctrunc_cmd->add_option("--Q", Q, "outer shell")->required()->check(CLI::PositiveNumber);
  add_common(ctrunc_cmd, "json");

  auto* eps_cmd = app.add_subcommand("epsilon", "affine flow criterion over |q| <= Q");
  sys_args.attach(*eps_cmd);
  eps_cmd->add_option("--Q", Q, "enumeration depth")->required()->check(CLI::PositiveNumber);
  add_common(eps_cmd, "json");

  auto* homeps_cmd = app.add_subcommand("homeps", "homogeneous flow criterion (v != 0) over |q| <= Q");
  sys_args.attach(*homeps_cmd, false);
  homeps_cmd->add_option("--Q", Q, "enumeration depth")->required()->check(CLI::PositiveNumber);
  add_common(homeps_cmd, "json");

  std::string times_text;
  auto* orbit_cmd = app.add_subcommand("orbit", "orbit diagnostics along a t grid");
  sys_args.attach(*orbit_cmd);
  orbit_cmd->add_option("--times", times_text, "comma list or start:stop:step")->required();
  orbit_cmd->add_option("--format", common.format, "csv|json");
  add_common(orbit_cmd, "csv");

  double c_threshold = 0;
  std::size_t resolution = 64;
  std::string region_text = "0,1,0,1", bracket_output, scales_text, input_path;
  auto* scan_cmd = app.add_subcommand("scan", "slice scan of the (a, b) unit square, m = n = 1");
  scan_cmd->add_option("--c", c_threshold, "threshold")->required();
  scan_cmd->add_option("--resolution", resolution, "cells per axis")->check(CLI::PositiveNumber);
  scan_cmd->add_option("--Q", Q, "enumeration depth")->required()->check(CLI::PositiveNumber);
  scan_cmd->add_option("--region", region_text, "a0,a1,b0,b1");
  scan_cmd->add_option("--format", common.format, "pgm|csv|json");
  scan_cmd->add_option("--bracket-output", bracket_output, "also write the 2Q bitmap here (same format)");
  add_common(scan_cmd, "pgm");

  auto* boxdim_cmd = app.add_subcommand("boxdim", "box-counting slope of a PGM bitmap or of a fresh scan");
  boxdim_cmd->add_option("--input", input_path, "binary PGM bitmap");
  boxdim_cmd->add_option("--scales", scales_text, "box sizes in cells (default: powers of 2)");
  boxdim_cmd->add_option("--c", c_threshold, "scan threshold (when no --input)");
  boxdim_cmd->add_option("--resolution", resolution, "scan cells per axis")->check(CLI::PositiveNumber);
  boxdim_cmd->add_option("--Q", Q, "scan enumeration depth")->check(CLI::PositiveNumber);
  boxdim_cmd->add_option("--region", region_text, "scan region a0,a1,b0,b1");
  add_common(boxdim_cmd, "json");

  std::size_t k = 1, levels = 20;
  std::string delta_text, ratio_text, deltas_text, diams_text;
  auto* tree_cmd = app.add_subcommand("treebound", "tree-like collection dimension lower bound");
  tree_cmd->add_option("--k", k, "ambient dimension")->check(CLI::PositiveNumber);
  tree_cmd->add_option("--delta", delta_text, "constant density per level");
  tree_cmd->add_option("--diam-ratio", ratio_text, "diameter ratio, d_j = ratio^j");
  tree_cmd->add_option("--levels", levels, "number of levels")->check(CLI::PositiveNumber);
  tree_cmd->add_option("--deltas", deltas_text, "explicit densities, comma separated");
  tree_cmd->add_option("--diams", diams_text, "explicit diameters, comma separated");
  add_common(tree_cmd, "json");

  std::string r_text = "1", t_text, exp_t_text;
  std::size_t tm = 1, tn = 1;
  auto* tess_cmd = app.add_subcommand("tesscount", "cube tessellation translate counts");
  tess_cmd->add_option("--m", tm, "number of forms")->check(CLI::PositiveNumber);
  tess_cmd->add_option("--n", tn, "number of variables")->check(CLI::PositiveNumber);
  tess_cmd->add_option("--r", r_text, "tile scale in (0, 1]");
  auto* t_opt = tess_cmd->add_option("--t", t_text, "flow time");
  auto* exp_opt = tess_cmd->add_option("--exp-t", exp_t_text, "e^t as an exact rational (counts exactly)");
  t_opt->excludes(exp_opt);
  add_common(tess_cmd, "json");

  std::string mu_text, lambda_text, ct_text;
  auto* cbound_cmd = app.add_subcommand("cbound", "dimension bound k - log(1/mu) / (lambda t - log 4)");
  cbound_cmd->add_option("--k", k, "ambient dimension")->check(CLI::PositiveNumber);
  cbound_cmd->add_option("--mu", mu_text, "surviving measure fraction in (0, 1]")->required();
  cbound_cmd->add_option("--lambda", lambda_text, "expansion rate (default 1/m)");
  cbound_cmd->add_option("--m", tm, "number of forms, for the default lambda")->check(CLI::PositiveNumber);
  cbound_cmd->add_option("--t", ct_text, "flow time")->required();
  add_common(cbound_cmd, "json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "ba_lab: error: " << e.what() << '\n';
    return kConfig;
  }

  try {
    common.budget = budget_flag ? *budget_flag : budget_from_env();
    if (common.format.empty()) common.format = default_format.at(app.get_subcommands().front());
    const auto opt = common.scan();

    if (*classify_cmd) {
      write_json(common, io::classification_json(classify(sys_args.build())));
    } else if (*ctrunc_cmd) {
      write_json(common, io::truncated_json(c_trunc(sys_args.build(), N, Q, opt)));
    } else if (*eps_cmd) {
      const auto sys = sys_args.build();
      write_json(common, io::flow_criterion_json(epsilon_inf(FlowSpec(sys), sys, Q, opt), "epsilon_inf"));
    } else if (*homeps_cmd) {
      const auto sys = sys_args.build();
      write_json(common,
                 io::flow_criterion_json(dani_homogeneous_eps(FlowSpec(sys), sys.a(), Q, opt), "dani_homogeneous_eps"));
    } else if (*orbit_cmd) {
      require_format(common.format, {"csv", "json"});
      const auto sys = sys_args.build();
      const auto times = parse_times(times_text);
      std::cerr << "ba_lab: orbit over " << times.size() << " times\n";
      const auto d = orbit_trace(FlowSpec(sys), sys, times, opt);
      if (common.format == "csv") {
        Sink sink(common.output);
        io::write_orbit_csv(sink.stream(), d);
        sink.finish();
      } else {
        json rows = json::array();
        for (std::size_t i = 0; i < d.times.size(); ++i)
          rows.push_back({{"t", d.times[i]},
                          {"lambda1", d.lambda1[i]},
                          {"affine_min", d.affine_min[i]},
                          {"witness", io::candidate_json(d.affine_witness[i])},
                          {"lambda1_witness", io::candidate_json(d.lambda1_witness[i])}});
        write_json(common, json{{"kind", "orbit_trace"}, {"rows", rows}});
      }
    } else if (*scan_cmd) {
      require_format(common.format, {"pgm", "csv", "json"});
      const auto region = parse_region(region_text);
      std::cerr << "ba_lab: scanning " << resolution << "x" << resolution << " cells, Q = " << Q << '\n';
      const auto s = ba_slice_scan(c_threshold, resolution, Q, region[0], region[1], opt);
      auto emit = [&](const GridIndicator& g, const std::string& path, std::uint64_t depth) {
        Sink sink(path);
        if (common.format == "pgm") {
          g.write_pgm(sink.stream());
        } else if (common.format == "csv") {
          g.write_csv(sink.stream());
        } else {
          sink.stream() << json{{"kind", "slice_scan"},
                                {"c", c_threshold},
                                {"Q", depth},
                                {"resolution", resolution},
                                {"marked", g.count()},
                                {"cells", g.size()}}
                               .dump(2)
                        << '\n';
        }
        sink.finish();
      };
      emit(s.at_q, common.output, Q);
      if (!bracket_output.empty()) emit(s.at_2q, bracket_output, 2 * Q);
    } else if (*boxdim_cmd) {
      std::optional<GridIndicator> grid;
      if (!input_path.empty()) {
        std::ifstream in(input_path, std::ios::binary);
        if (!in) throw IoError("cannot open '" + input_path + "'");
        grid = GridIndicator::read_pgm(in);
      } else {
        if (Q == 0) throw ConfigError("boxdim needs --input, or --c and --Q for a fresh scan");
        const auto region = parse_region(region_text);
        grid = ba_slice_scan(c_threshold, resolution, Q, region[0], region[1], opt).at_q;
      }
      const auto sizes = parse_sizes(scales_text, grid->resolution());
      auto j = io::box_dimension_json(box_dim_estimate(*grid, sizes));
      j["kind"] = "box_dimension";
      write_json(common, j);
    } else if (*tree_cmd) {
      TreeLevelData data;
      data.k = k;
      if (!deltas_text.empty() || !diams_text.empty()) {
        data.deltas = parse_doubles(deltas_text, "--deltas");
        data.diams = parse_doubles(diams_text, "--diams");
      } else {
        if (delta_text.empty() || ratio_text.empty())
          throw ConfigError("treebound needs --delta and --diam-ratio, or --deltas and --diams");
        data = TreeLevelData::geometric(k, parse_scalar(delta_text, false, "--delta").to_double(),
                                        parse_scalar(ratio_text, false, "--diam-ratio").to_double(), levels);
      }
      write_json(common, io::tree_bound_json(tree_dim_lower_bound(data)));
    } else if (*tess_cmd) {
      const FlowSpec fs(tm, tn);
      const double r = parse_scalar(r_text, false, "--r").to_double();
      TessellationCounts c;
      double t = 0;
      if (!exp_t_text.empty()) {
        const Scalar growth = parse_scalar(exp_t_text, false, "--exp-t");
        if (!growth.is_exact()) throw ExactnessError("--exp-t must be an exact rational");
        c = tessellation_counts_exact(fs, r, growth.rational());
        t = std::log(growth.to_double());
      } else {
        if (t_text.empty()) throw ConfigError("tesscount needs --t or --exp-t");
        t = parse_scalar(t_text, false, "--t").to_double();
        c = tessellation_counts(fs, r, t);
      }
      auto j = io::tessellation_json(c, t);
      j["m"] = tm;
      j["n"] = tn;
      write_json(common, j);
    } else if (*cbound_cmd) {
      const double mu = parse_scalar(mu_text, false, "--mu").to_double();
      const double lambda = lambda_text.empty() ? 1.0 / static_cast<double>(tm)
                                                : parse_scalar(lambda_text, false, "--lambda").to_double();
      const double t = parse_scalar(ct_text, false, "--t").to_double();
      write_json(common, json{{"kind", "construction_bound"},
                              {"value", construction_bound(k, mu, lambda, t)},
                              {"k", k},
                              {"mu", mu},
                              {"lambda", lambda},
                              {"t", t}});
    }
  } catch (const ConfigError& e) {
    std::cerr << "ba_lab: error: " << e.what() << '\n';
    return kConfig;
  } catch (const BudgetError& e) {
    std::cerr << "ba_lab: budget: " << e.what() << "; raise --budget or BA_LAB_BUDGET\n";
    return kBudget;
  } catch (const IoError& e) {
    std::cerr << "ba_lab: io: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    std::cerr << "ba_lab: parameter: " << e.what() << '\n';
    return kParameter;
  }
  return kOk;
}
