#include "cpskit/cpskit.h"

#include <cmath>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "cpskit/evolution.hpp"
#include "cpskit/fock_oracle.hpp"
#include "cpskit/io.hpp"
#include "cpskit/parallel.hpp"
#include "cpskit/validation.hpp"

using namespace cpskit;

struct cpskit_basis {
  CpsBasis basis;
};

struct cpskit_state {
  CpsState state;
};

struct cpskit_table {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::string summary;
};

struct cpskit_text {
  std::string data;
};

namespace {

thread_local std::string g_last_error;

cpskit_status fail(cpskit_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

cpskit_status map_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return CPSKIT_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch:
      return CPSKIT_ERR_DIMENSION;
    case ErrorCode::NotHermitian:
      return CPSKIT_ERR_NOT_HERMITIAN;
    case ErrorCode::NotUnitary:
      return CPSKIT_ERR_NOT_UNITARY;
    case ErrorCode::Unsupported:
      return CPSKIT_ERR_UNSUPPORTED;
    case ErrorCode::Io:
      return CPSKIT_ERR_IO;
  }
  return CPSKIT_ERR_INTERNAL;
}

template <class F>
cpskit_status guarded(F&& body) {
  try {
    body();
    return CPSKIT_OK;
  } catch (const Error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(CPSKIT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CPSKIT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CPSKIT_ERR_INTERNAL, "unknown error");
  }
}

#define CPSKIT_NEED(ptr)                                                   \
  do {                                                                     \
    if ((ptr) == nullptr) return fail(CPSKIT_ERR_INVALID_ARGUMENT, "null " #ptr); \
  } while (0)

void write_interleaved(const CVector& v, double* out) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[2 * i] = v(i).real();
    out[2 * i + 1] = v(i).imag();
  }
}

CVector read_interleaved(const double* in, int n) {
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = {in[2 * i], in[2 * i + 1]};
  return v;
}

}  // namespace

extern "C" {

const char* cpskit_version(void) { return CPSKIT_VERSION_STRING; }

const char* cpskit_last_error(void) { return g_last_error.c_str(); }

const char* cpskit_status_name(cpskit_status status) {
  switch (status) {
    case CPSKIT_OK:
      return "ok";
    case CPSKIT_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case CPSKIT_ERR_DIMENSION:
      return "dimension mismatch";
    case CPSKIT_ERR_NOT_HERMITIAN:
      return "not hermitian";
    case CPSKIT_ERR_NOT_UNITARY:
      return "not unitary";
    case CPSKIT_ERR_UNSUPPORTED:
      return "unsupported";
    case CPSKIT_ERR_IO:
      return "io";
    case CPSKIT_ERR_INTERNAL:
      return "internal";
  }
  return "unknown";
}

cpskit_status cpskit_set_threads(int n) {
  parallel::set_worker_count(n);
  return CPSKIT_OK;
}

int cpskit_threads(void) { return parallel::worker_count(); }

const char* cpskit_text_data(const cpskit_text* text) {
  return text ? text->data.c_str() : nullptr;
}

void cpskit_text_free(cpskit_text* text) { delete text; }

size_t cpskit_table_rows(const cpskit_table* table) {
  return table && !table->columns.empty() ? table->columns.front().size() : 0;
}

size_t cpskit_table_cols(const cpskit_table* table) { return table ? table->columns.size() : 0; }

const char* cpskit_table_column_name(const cpskit_table* table, size_t col) {
  if (!table || col >= table->names.size()) return nullptr;
  return table->names[col].c_str();
}

const double* cpskit_table_column(const cpskit_table* table, size_t col) {
  if (!table || col >= table->columns.size()) return nullptr;
  return table->columns[col].data();
}

const char* cpskit_table_summary(const cpskit_table* table) {
  return table ? table->summary.c_str() : nullptr;
}

void cpskit_table_free(cpskit_table* table) { delete table; }

cpskit_status cpskit_basis_new(int d, int n0, double alpha_re, double alpha_im,
                               cpskit_basis** out) {
  CPSKIT_NEED(out);
  *out = nullptr;
  return guarded([&] { *out = new cpskit_basis{CpsBasis(d, n0, {alpha_re, alpha_im})}; });
}

void cpskit_basis_free(cpskit_basis* basis) { delete basis; }

int cpskit_basis_dim(const cpskit_basis* basis) { return basis ? basis->basis.dim() : 0; }

int cpskit_basis_n0(const cpskit_basis* basis) { return basis ? basis->basis.n0() : 0; }

cpskit_status cpskit_basis_gq(const cpskit_basis* basis, double* out) {
  CPSKIT_NEED(basis);
  CPSKIT_NEED(out);
  return guarded([&] { *out = basis->basis.gq(); });
}

cpskit_status cpskit_basis_gram(const cpskit_basis* basis, int q1, int q2, double* re,
                                double* im) {
  CPSKIT_NEED(basis);
  CPSKIT_NEED(re);
  CPSKIT_NEED(im);
  const int d = basis->basis.dim();
  if (q1 < 0 || q1 >= d || q2 < 0 || q2 >= d) {
    return fail(CPSKIT_ERR_INVALID_ARGUMENT, "gram: index out of range");
  }
  const cplx m = basis->basis.gram()(q1, q2);
  *re = m.real();
  *im = m.imag();
  return CPSKIT_OK;
}

cpskit_status cpskit_state_from_fock(const cpskit_basis* basis, const double* psi,
                                     int normalized, cpskit_state** out) {
  CPSKIT_NEED(basis);
  CPSKIT_NEED(psi);
  CPSKIT_NEED(out);
  *out = nullptr;
  return guarded([&] {
    const CVector v = read_interleaved(psi, basis->basis.dim());
    *out = new cpskit_state{fock_to_cps(basis->basis, v,
                                        normalized ? Convention::Normalized
                                                   : Convention::Unnormalized)};
  });
}

cpskit_status cpskit_state_member(const cpskit_basis* basis, int q, cpskit_state** out) {
  CPSKIT_NEED(basis);
  CPSKIT_NEED(out);
  *out = nullptr;
  return guarded([&] { *out = new cpskit_state{basis_member(basis->basis, q)}; });
}

void cpskit_state_free(cpskit_state* state) { delete state; }

cpskit_status cpskit_state_coeffs(const cpskit_state* state, double* out) {
  CPSKIT_NEED(state);
  CPSKIT_NEED(out);
  write_interleaved(state->state.coeffs, out);
  return CPSKIT_OK;
}

cpskit_status cpskit_state_to_fock(const cpskit_state* state, double* out) {
  CPSKIT_NEED(state);
  CPSKIT_NEED(out);
  return guarded([&] { write_interleaved(cps_to_fock(state->state), out); });
}

cpskit_status cpskit_state_norm_sq(const cpskit_state* state, double* out) {
  CPSKIT_NEED(state);
  CPSKIT_NEED(out);
  return guarded([&] { *out = state->state.physical_norm_sq(); });
}

cpskit_status cpskit_state_json(const cpskit_state* state, cpskit_text** out) {
  CPSKIT_NEED(state);
  CPSKIT_NEED(out);
  *out = nullptr;
  return guarded([&] { *out = new cpskit_text{io::state_to_json(state->state).dump()}; });
}

void cpskit_anharmonic_defaults(cpskit_anharmonic_config* config) {
  if (!config) return;
  const AnharmonicConfig d;
  *config = {d.alpha.real(), d.alpha.imag(), d.d,       d.omega,
             d.kappa,        d.steps,        d.t_max,   CPSKIT_PICTURE_DIRECT};
}

cpskit_status cpskit_anharmonic(const cpskit_anharmonic_config* config, cpskit_table** out) {
  CPSKIT_NEED(config);
  CPSKIT_NEED(out);
  *out = nullptr;
  if (config->picture != CPSKIT_PICTURE_DIRECT && config->picture != CPSKIT_PICTURE_HYBRID) {
    return fail(CPSKIT_ERR_INVALID_ARGUMENT, "anharmonic: unknown picture");
  }
  return guarded([&] {
    AnharmonicConfig c;
    c.alpha = {config->alpha_re, config->alpha_im};
    c.d = config->d;
    c.omega = config->omega;
    c.kappa = config->kappa;
    c.steps = config->steps;
    c.t_max = config->t_max;
    c.picture = config->picture == CPSKIT_PICTURE_HYBRID ? Picture::Hybrid : Picture::Direct;
    const AnharmonicResult r = run_anharmonic(c);

    auto table = std::make_unique<cpskit_table>();
    table->names = {"t",           "a_re",      "a_im",        "analytic_re",
                    "analytic_im", "deviation", "mean_number", "norm_drift"};
    table->columns.assign(table->names.size(), {});
    for (const AnharmonicRow& row : r.rows) {
      const double values[] = {row.t,         row.amplitude.real(), row.amplitude.imag(),
                               row.analytic.real(), row.analytic.imag(), row.deviation,
                               row.mean_number, row.norm_drift};
      for (std::size_t i = 0; i < table->columns.size(); ++i) table->columns[i].push_back(values[i]);
    }
    table->summary =
        io::Json{{"max_deviation", r.max_deviation}, {"max_norm_drift", r.max_norm_drift}}.dump();
    *out = table.release();
  });
}

void cpskit_fringe_defaults(cpskit_fringe_config* config) {
  if (!config) return;
  *config = {5.0, 0.0, 500, -4.0, 4.0, 100000, 1, CPSKIT_NOISE_MC, 0};
}

cpskit_status cpskit_cat_fringes(const cpskit_fringe_config* config, cpskit_table** out) {
  CPSKIT_NEED(config);
  CPSKIT_NEED(out);
  *out = nullptr;
  return guarded([&] {
    require(config->alpha > 0.0 && std::isfinite(config->alpha), ErrorCode::InvalidArgument,
            "cat-fringes: alpha must be > 0");
    require(config->sigma >= 0.0, ErrorCode::InvalidArgument, "cat-fringes: sigma must be >= 0");
    PhaseNoiseModel noise;
    noise.sigma = config->sigma;
    noise.samples = config->samples;
    noise.seed = config->seed;
    switch (config->method) {
      case CPSKIT_NOISE_MC:
        noise.method = NoiseMethod::MonteCarlo;
        break;
      case CPSKIT_NOISE_GAUSS_HERMITE:
        noise.method = NoiseMethod::GaussHermite;
        break;
      case CPSKIT_NOISE_EXACT:
        noise.method = NoiseMethod::Exact;
        break;
      default:
        throw Error(ErrorCode::InvalidArgument, "cat-fringes: unknown method");
    }
    const std::vector<double> grid = uniform_grid(config->p_min, config->p_max, config->points);
    const FringeResult r = cat_fringe(config->alpha, noise, grid, config->d);

    auto table = std::make_unique<cpskit_table>();
    table->names = {"p", "density", "stderr"};
    table->columns.push_back(r.p);
    table->columns.push_back(r.density);
    table->columns.push_back(r.stderr_values.empty()
                                 ? std::vector<double>(r.p.size(),
                                                       std::numeric_limits<double>::quiet_NaN())
                                 : r.stderr_values);
    if (config->sigma == 0.0) {
      table->names.push_back("analytic");
      std::vector<double> analytic;
      for (double p : r.p) analytic.push_back(cat_fringe_analytic(config->alpha, p));
      table->columns.push_back(std::move(analytic));
    }
    io::Json summary{{"d", r.meta.d},
                     {"method", noise_method_name(noise.method)},
                     {"t_collapse", r.meta.t_collapse}};
    try {
      summary["visibility"] = fringe_visibility(r);
    } catch (const Error&) {
      summary["visibility"] = nullptr;
    }
    table->summary = summary.dump();
    *out = table.release();
  });
}

cpskit_status cpskit_basis_info(int d, int n0, const double* alpha_sq, size_t count,
                                cpskit_table** out) {
  CPSKIT_NEED(out);
  *out = nullptr;
  if (count > 0) CPSKIT_NEED(alpha_sq);
  return guarded([&] {
    require(count >= 1, ErrorCode::InvalidArgument, "basis-info: need at least one radius");
    auto table = std::make_unique<cpskit_table>();
    table->names.push_back("dq");
    table->columns.emplace_back();
    for (int dq = 0; dq <= d / 2; ++dq) table->columns[0].push_back(dq);
    for (size_t i = 0; i < count; ++i) {
      require(alpha_sq[i] > 0.0 && std::isfinite(alpha_sq[i]), ErrorCode::InvalidArgument,
              "basis-info: |alpha|^2 must be > 0");
      const CpsBasis basis(d, n0, std::sqrt(alpha_sq[i]));
      const std::string tag = io::format_double(alpha_sq[i]);
      table->names.push_back("gram_abs_" + tag);
      table->names.push_back("coherent_" + tag);
      std::vector<double> gram;
      std::vector<double> coherent;
      for (int dq = 0; dq <= d / 2; ++dq) {
        gram.push_back(std::abs(basis.gram()(0, dq)));
        coherent.push_back(std::exp(-alpha_sq[i] * (1.0 - std::cos(dq * basis.phase_step()))));
      }
      table->columns.push_back(std::move(gram));
      table->columns.push_back(std::move(coherent));
    }
    table->summary = io::Json{{"d", d}, {"n0", n0}}.dump();
    *out = table.release();
  });
}

cpskit_status cpskit_boson_sampling(const char* unitary_json, const int* inputs,
                                    size_t n_inputs, const int* outputs, size_t n_outputs,
                                    cpskit_sampling method, uint64_t samples, uint64_t seed,
                                    cpskit_text** out) {
  CPSKIT_NEED(unitary_json);
  CPSKIT_NEED(out);
  *out = nullptr;
  if (n_inputs > 0) CPSKIT_NEED(inputs);
  if (n_outputs > 0) CPSKIT_NEED(outputs);
  if (method != CPSKIT_SAMPLING_EXACT && method != CPSKIT_SAMPLING_MC) {
    return fail(CPSKIT_ERR_INVALID_ARGUMENT, "boson-sampling: unknown method");
  }
  return guarded([&] {
    const CMatrix u = io::unitary_from_json(io::parse(unitary_json));
    BosonSamplingOptions options;
    options.method = method == CPSKIT_SAMPLING_MC ? SamplingMethod::MonteCarlo
                                                  : SamplingMethod::Exact;
    options.samples = samples;
    options.seed = seed;
    const std::span<const int> in(inputs, n_inputs);
    const std::span<const int> outs(outputs, n_outputs);
    const BosonSamplingResult r = boson_sampling_correlation(u, in, outs, options);
    io::Json j = io::boson_result_to_json(r);
    if (options.method == SamplingMethod::Exact &&
        n_inputs <= static_cast<size_t>(kMaxExactPhotons)) {
      CMatrix sub(static_cast<Eigen::Index>(n_inputs), static_cast<Eigen::Index>(n_inputs));
      for (size_t a = 0; a < n_outputs; ++a) {
        for (size_t b = 0; b < n_inputs; ++b) {
          sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = u(outputs[a], inputs[b]);
        }
      }
      j["oracle"] = std::norm(fock::permanent(sub));
    }
    *out = new cpskit_text{j.dump()};
  });
}

cpskit_status cpskit_permanent(const double* matrix, int n, double* re, double* im) {
  CPSKIT_NEED(matrix);
  CPSKIT_NEED(re);
  CPSKIT_NEED(im);
  return guarded([&] {
    require(n >= 1, ErrorCode::InvalidArgument, "permanent: n must be >= 1");
    CMatrix m(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        const std::size_t k = 2 * (static_cast<std::size_t>(r) * n + c);
        m(r, c) = {matrix[k], matrix[k + 1]};
      }
    }
    const cplx p = fock::permanent(m);
    *re = p.real();
    *im = p.imag();
  });
}

cpskit_status cpskit_validate(const char* suite, int* passed, cpskit_text** out) {
  CPSKIT_NEED(suite);
  CPSKIT_NEED(passed);
  CPSKIT_NEED(out);
  *out = nullptr;
  return guarded([&] {
    const validation::Report report = validation::run(suite);
    *passed = report.passed() ? 1 : 0;
    *out = new cpskit_text{report.to_json().dump(2)};
  });
}

}  // extern "C"
