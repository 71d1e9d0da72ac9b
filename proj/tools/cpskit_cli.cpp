// cpskit command-line front end. Links only the C API.
//
// Precedence: command-line flags > --config file > built-in defaults.
// Config files are flat key = value lines keyed by the long flag name without
// the leading dashes; `_` and `-` are interchangeable (`t_max = 6.28`).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpskit/cpskit.h"

#ifndef CPSKIT_GIT_DESCRIBE
#define CPSKIT_GIT_DESCRIBE "unknown"
#endif

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitBadInput = 2;

using Json = nlohmann::ordered_json;

struct ApiError {
  cpskit_status status;
  std::string message;
};

void check(cpskit_status status) {
  if (status != CPSKIT_OK) throw ApiError{status, cpskit_last_error()};
}

struct TableDeleter {
  void operator()(cpskit_table* t) const { cpskit_table_free(t); }
};
struct TextDeleter {
  void operator()(cpskit_text* t) const { cpskit_text_free(t); }
};
using TablePtr = std::unique_ptr<cpskit_table, TableDeleter>;
using TextPtr = std::unique_ptr<cpskit_text, TextDeleter>;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string version_line() {
  return std::string("cpskit ") + cpskit_version() + " (" + CPSKIT_GIT_DESCRIBE + ")";
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw ApiError{CPSKIT_ERR_IO, "cannot open output file '" + path + "'"};
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void write_csv(std::ostream& out, const std::string& command, const Json& config,
               const cpskit_table* table) {
  out << "# " << version_line() << '\n';
  out << "# command: " << command << '\n';
  for (const auto& [key, value] : config.items()) out << "# " << key << ": " << value.dump() << '\n';
  const std::size_t cols = cpskit_table_cols(table);
  const std::size_t rows = cpskit_table_rows(table);
  for (std::size_t c = 0; c < cols; ++c) out << (c ? "," : "") << cpskit_table_column_name(table, c);
  out << '\n';
  std::vector<const double*> data(cols);
  for (std::size_t c = 0; c < cols; ++c) data[c] = cpskit_table_column(table, c);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out << (c ? "," : "") << fmt(data[c][r]);
    out << '\n';
  }
  out << "# summary: " << cpskit_table_summary(table) << '\n';
}

void write_summary(const std::string& path, const cpskit_table* table) {
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ApiError{CPSKIT_ERR_IO, "cannot open summary file '" + path + "'"};
  f << Json::parse(cpskit_table_summary(table)).dump(2) << '\n';
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool flag_given(const std::vector<std::string>& args, const std::string& flag) {
  for (const std::string& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

// Expands `--config FILE` into `--key value` pairs placed right after it.
// Keys already given on the command line are skipped so flags win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    std::size_t consumed = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      consumed = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      consumed = 1;
    } else {
      continue;
    }
    std::ifstream f(path);
    if (!f) throw ApiError{CPSKIT_ERR_IO, "cannot read config file '" + path + "'"};
    std::vector<std::string> injected;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
      ++lineno;
      line = trim(line);
      if (line.empty() || line[0] == '#' || line[0] == ';') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw ApiError{CPSKIT_ERR_IO, path + ":" + std::to_string(lineno) + ": expected key = value"};
      }
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
          value.back() == value.front()) {
        value = value.substr(1, value.size() - 2);
      }
      std::replace(key.begin(), key.end(), '_', '-');
      if (flag_given(args, "--" + key)) continue;
      injected.push_back("--" + key);
      injected.push_back(value);
    }
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
               args.begin() + static_cast<std::ptrdiff_t>(i + consumed));
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(i), injected.begin(), injected.end());
    break;
  }
  return args;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ApiError{CPSKIT_ERR_IO, "cannot read '" + path + "'"};
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent-phase-state toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_line());
  std::string config_path;
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0: CPSKIT_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  // anharmonic
  cpskit_anharmonic_config an{};
  cpskit_anharmonic_defaults(&an);
  std::string an_picture = "direct";
  std::string an_output, an_summary;
  auto* anharmonic = app.add_subcommand("anharmonic", "Kerr evolution of a projected coherent state");
  anharmonic->add_option("--config", config_path, "Flat key = value file (flags take precedence)");
  anharmonic->add_option("--alpha", an.alpha_re, "Real part of alpha")->capture_default_str();
  anharmonic->add_option("--alpha-im", an.alpha_im, "Imaginary part of alpha")->capture_default_str();
  anharmonic->add_option("--d", an.d, "Number of phases")->capture_default_str();
  anharmonic->add_option("--omega", an.omega)->capture_default_str();
  anharmonic->add_option("--kappa", an.kappa)->capture_default_str();
  anharmonic->add_option("--steps", an.steps)->capture_default_str();
  anharmonic->add_option("--t-max", an.t_max)->capture_default_str();
  anharmonic->add_option("--picture", an_picture)
      ->check(CLI::IsMember({"direct", "hybrid"}))
      ->capture_default_str();
  anharmonic->add_option("-o,--output", an_output, "CSV path (default stdout)");
  anharmonic->add_option("--summary", an_summary, "Also write the summary JSON here");

  // cat-fringes
  cpskit_fringe_config fr{};
  cpskit_fringe_defaults(&fr);
  std::string fr_method = "mc";
  std::string fr_output;
  auto* fringes = app.add_subcommand("cat-fringes", "Momentum fringes of a Kerr cat under phase noise");
  fringes->add_option("--config", config_path, "Flat key = value file (flags take precedence)");
  fringes->add_option("--alpha", fr.alpha)->capture_default_str();
  fringes->add_option("--sigma", fr.sigma, "Phase-noise standard deviation")->capture_default_str();
  fringes->add_option("--points", fr.points)->capture_default_str();
  fringes->add_option("--p-min", fr.p_min)->capture_default_str();
  fringes->add_option("--p-max", fr.p_max)->capture_default_str();
  fringes->add_option("--samples", fr.samples)->capture_default_str();
  fringes->add_option("--seed", fr.seed)->capture_default_str();
  fringes->add_option("--method", fr_method)
      ->check(CLI::IsMember({"mc", "gh", "exact"}))
      ->capture_default_str();
  fringes->add_option("--d", fr.d, "Cutoff (0: default)")->capture_default_str();
  fringes->add_option("-o,--output", fr_output, "CSV path (default stdout)");

  // boson-sampling
  std::string bs_unitary, bs_mode = "exact", bs_output;
  std::vector<int> bs_inputs, bs_outputs;
  std::uint64_t bs_samples = 100000, bs_seed = 1;
  auto* boson = app.add_subcommand("boson-sampling", "Output-coincidence correlation of single photons");
  boson->add_option("--config", config_path, "Flat key = value file (flags take precedence)");
  boson->add_option("--unitary", bs_unitary, "Unitary JSON file {m, re, im}")->required();
  boson->add_option("--inputs", bs_inputs, "Occupied input modes")->delimiter(',')->required();
  boson->add_option("--outputs", bs_outputs, "Detected output modes")->delimiter(',')->required();
  boson->add_option("--mode", bs_mode)->check(CLI::IsMember({"exact", "mc"}))->capture_default_str();
  boson->add_option("--samples", bs_samples)->capture_default_str();
  boson->add_option("--seed", bs_seed)->capture_default_str();
  boson->add_option("-o,--output", bs_output, "JSON path (default stdout)");

  // basis-info
  int bi_d = 12, bi_n0 = 0;
  std::vector<double> bi_alpha_sq{3, 4, 5, 6, 7, 8};
  std::string bi_output;
  auto* info = app.add_subcommand("basis-info", "Gram-matrix magnitudes against phase separation");
  info->add_option("--config", config_path, "Flat key = value file (flags take precedence)");
  info->add_option("--d", bi_d)->capture_default_str();
  info->add_option("--n0", bi_n0)->capture_default_str();
  info->add_option("--alpha-sq", bi_alpha_sq, "Values of |alpha|^2")->delimiter(',')->capture_default_str();
  info->add_option("-o,--output", bi_output, "CSV path (default stdout)");

  // validate
  std::string va_suite = "all", va_output;
  auto* validate = app.add_subcommand("validate", "Run oracle-equivalence checks");
  validate->add_option("--config", config_path, "Flat key = value file (flags take precedence)");
  validate->add_option("--suite", va_suite, "basis, operators, evolution, prep, oracle or all")
      ->capture_default_str();
  validate->add_option("-o,--output", va_output, "JSON path (default stdout)");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const ApiError& e) {
    std::cerr << "error (" << cpskit_status_name(e.status) << "): " << e.message << '\n';
    return kExitBadInput;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (threads > 0) check(cpskit_set_threads(threads));

    if (*anharmonic) {
      an.picture = an_picture == "hybrid" ? CPSKIT_PICTURE_HYBRID : CPSKIT_PICTURE_DIRECT;
      cpskit_table* raw = nullptr;
      check(cpskit_anharmonic(&an, &raw));
      const TablePtr table(raw);
      const Json config{{"alpha", {an.alpha_re, an.alpha_im}}, {"d", an.d},
                        {"omega", an.omega},                   {"kappa", an.kappa},
                        {"steps", an.steps},                   {"t_max", an.t_max},
                        {"picture", an_picture}};
      Output out(an_output);
      write_csv(out.stream(), "anharmonic", config, table.get());
      write_summary(an_summary, table.get());
    } else if (*fringes) {
      fr.method = fr_method == "gh"      ? CPSKIT_NOISE_GAUSS_HERMITE
                  : fr_method == "exact" ? CPSKIT_NOISE_EXACT
                                         : CPSKIT_NOISE_MC;
      cpskit_table* raw = nullptr;
      check(cpskit_cat_fringes(&fr, &raw));
      const TablePtr table(raw);
      const Json config{{"alpha", fr.alpha},   {"sigma", fr.sigma},  {"points", fr.points},
                        {"p_min", fr.p_min},   {"p_max", fr.p_max},  {"samples", fr.samples},
                        {"seed", fr.seed},     {"method", fr_method}, {"d", fr.d}};
      Output out(fr_output);
      write_csv(out.stream(), "cat-fringes", config, table.get());
    } else if (*boson) {
      const std::string text = read_file(bs_unitary);
      cpskit_text* raw = nullptr;
      check(cpskit_boson_sampling(text.c_str(), bs_inputs.data(), bs_inputs.size(),
                                  bs_outputs.data(), bs_outputs.size(),
                                  bs_mode == "mc" ? CPSKIT_SAMPLING_MC : CPSKIT_SAMPLING_EXACT,
                                  bs_samples, bs_seed, &raw));
      const TextPtr result(raw);
      Output out(bs_output);
      out.stream() << Json::parse(cpskit_text_data(result.get())).dump(2) << '\n';
    } else if (*info) {
      cpskit_table* raw = nullptr;
      check(cpskit_basis_info(bi_d, bi_n0, bi_alpha_sq.data(), bi_alpha_sq.size(), &raw));
      const TablePtr table(raw);
      const Json config{{"d", bi_d}, {"n0", bi_n0}, {"alpha_sq", bi_alpha_sq}};
      Output out(bi_output);
      write_csv(out.stream(), "basis-info", config, table.get());
    } else if (*validate) {
      int passed = 0;
      cpskit_text* raw = nullptr;
      check(cpskit_validate(va_suite.c_str(), &passed, &raw));
      const TextPtr report(raw);
      Output out(va_output);
      out.stream() << cpskit_text_data(report.get()) << '\n';
      if (!passed) {
        std::cerr << "validate: one or more checks exceeded tolerance\n";
        return kExitFailed;
      }
    }
  } catch (const ApiError& e) {
    std::cerr << "error (" << cpskit_status_name(e.status) << "): " << e.message << '\n';
    return kExitBadInput;
  }
  return kExitOk;
}
