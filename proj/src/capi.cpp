// Copyright 2026 The lfu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lfu/lfu.h"

#include <string>
#include <vector>

#include "lfu/error.hpp"
#include "lfu/multfn.hpp"
#include "lfu/pretend.hpp"
#include "lfu/primes.hpp"
#include "lfu/run.hpp"

struct lfu_fn {
  lfu::MultFnSpec spec;
  std::string text;
};

struct lfu_int_list {
  std::vector<std::int64_t> values;
};

struct lfu_config {
  lfu::RunConfig config;
  std::string text;
};

struct lfu_report {
  lfu::RunOutcome outcome;
  std::string dir;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_stage;

template <typename F>
lfu_status guard(F&& f) {
  last_error.clear();
  last_stage.clear();
  try {
    f();
    return LFU_OK;
  } catch (const lfu::Error& e) {
    last_error = e.what();
    last_stage = e.stage();
    return static_cast<lfu_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return LFU_ERR_INTERNAL;
}

void need(bool ok, const char* what) {
  if (!ok) throw lfu::Error(lfu::ErrorCode::kInvalidArgument, what);
}

lfu::PipelineParams to_params(const lfu_params* p) {
  need(p != nullptr, "params is NULL");
  lfu::PipelineParams out;
  out.X = p->X;
  out.delta_exp = p->delta_exp;
  out.eta = p->eta;
  out.epsilon = p->epsilon;
  out.seed = p->seed;
  out.workers = p->workers < 1 ? 1 : p->workers;
  out.k.k_tilde_override = p->k_tilde_override;
  return out;
}

lfu_distance_result to_c(const lfu::DistanceResult& d) {
  return {d.value,        d.value_sq, d.argmin_t,   d.q,
          d.index,        d.prime_cutoff, d.primes, d.t_grid_step,
          d.value_sq_at_zero};
}

lfu_model to_c(const lfu::PipelineOutcome& o) {
  lfu_model m{};
  m.a = o.model.a;
  m.Q = o.model.Q;
  m.T = o.model.T;
  m.t_pretender = -2 * 3.14159265358979323846 * o.model.T;
  m.T_within_bound = o.model.T_within_bound ? 1 : 0;
  m.P = o.recursion.P;
  m.k_tilde = o.recursion.k_tilde;
  m.verified_fraction = o.verify.fraction;
  m.correlated_fraction = o.verify.correlated_fraction;
  m.mean_sup = o.j1.mean_sup;
  return m;
}

}  // namespace

extern "C" {

LFU_API const char* lfu_version(void) { return "1.0.0"; }

LFU_API const char* lfu_status_name(lfu_status status) {
  if (status == LFU_OK) return "Ok";
  if (status == LFU_ERR_INTERNAL) return "Internal";
  const auto name = lfu::error_code_name(static_cast<lfu::ErrorCode>(status));
  return name.data();
}

LFU_API const char* lfu_last_error(void) { return last_error.c_str(); }
LFU_API const char* lfu_last_error_stage(void) { return last_stage.c_str(); }

LFU_API lfu_status lfu_fn_parse(const char* text, lfu_fn** out) {
  return guard([&] {
    need(text != nullptr && out != nullptr, "NULL argument");
    auto spec = lfu::parse_multfn(text);
    auto text_form = lfu::to_string(spec);
    *out = new lfu_fn{std::move(spec), std::move(text_form)};
  });
}

LFU_API const char* lfu_fn_text(const lfu_fn* fn) { return fn != nullptr ? fn->text.c_str() : ""; }

LFU_API lfu_status lfu_fn_eval(const lfu_fn* fn, int64_t n, double* re, double* im) {
  return guard([&] {
    need(fn != nullptr && re != nullptr && im != nullptr, "NULL argument");
    const auto v = lfu::eval_at(fn->spec, n);
    *re = v.real();
    *im = v.imag();
  });
}

LFU_API lfu_status lfu_fn_eval_range(const lfu_fn* fn, int64_t start, int64_t len,
                                     double* values) {
  return guard([&] {
    need(fn != nullptr && (values != nullptr || len == 0), "NULL argument");
    const auto v = lfu::eval_range(fn->spec, start, len);
    for (std::size_t i = 0; i < v.size(); ++i) {
      values[2 * i] = v[i].real();
      values[2 * i + 1] = v[i].imag();
    }
  });
}

LFU_API void lfu_fn_free(lfu_fn* fn) { delete fn; }

LFU_API lfu_status lfu_primes(int64_t lo, int64_t hi, lfu_int_list** out) {
  return guard([&] {
    need(out != nullptr, "NULL argument");
    *out = new lfu_int_list{lfu::primes_in(lo, hi)};
  });
}

LFU_API size_t lfu_int_list_size(const lfu_int_list* list) {
  return list != nullptr ? list->values.size() : 0;
}
LFU_API const int64_t* lfu_int_list_data(const lfu_int_list* list) {
  return list != nullptr ? list->values.data() : nullptr;
}
LFU_API void lfu_int_list_free(lfu_int_list* list) { delete list; }

LFU_API void lfu_params_defaults(lfu_params* params) {
  if (params == nullptr) return;
  const lfu::PipelineParams d;
  *params = {d.X, d.delta_exp, d.eta, d.epsilon, d.seed, d.workers, d.k.k_tilde_override};
}

LFU_API lfu_status lfu_params_H(const lfu_params* params, int64_t* H) {
  return guard([&] {
    need(H != nullptr, "NULL argument");
    *H = to_params(params).H();
  });
}

LFU_API lfu_status lfu_pipeline_run(const lfu_fn* fn, const lfu_params* params,
                                    const char* out_dir, lfu_model* model) {
  return guard([&] {
    need(fn != nullptr && model != nullptr, "NULL argument");
    lfu::RunConfig c;
    c.fn = fn->text;
    c.params = to_params(params);
    lfu::check_config(c);
    *model = to_c(lfu::run_pipeline(c, out_dir != nullptr ? out_dir : ""));
  });
}

LFU_API lfu_status lfu_pipeline_resume(const char* dir, int workers, lfu_model* model) {
  return guard([&] {
    need(dir != nullptr && model != nullptr, "NULL argument");
    *model = to_c(lfu::resume_pipeline(dir, workers));
  });
}

LFU_API lfu_status lfu_distance(const lfu_fn* fn, double T, int64_t Q, int workers,
                                lfu_distance_result* result) {
  return guard([&] {
    need(fn != nullptr && result != nullptr, "NULL argument");
    lfu::DistanceOptions o;
    o.workers = workers < 1 ? 1 : workers;
    *result = to_c(lfu::pretentious_distance(fn->spec, T, Q, o));
  });
}

LFU_API lfu_status lfu_theorem1_check(const lfu_fn* fn, const lfu_params* params, double C,
                                      lfu_theorem1_result* result) {
  return guard([&] {
    need(fn != nullptr && result != nullptr, "NULL argument");
    const auto t = lfu::theorem1_check(fn->spec, to_params(params), C);
    *result = {t.gate ? 1 : 0, t.mean_sup, t.T, t.Q, t.distance_computed ? 1 : 0,
               to_c(t.distance), t.consistent ? 1 : 0};
  });
}

LFU_API lfu_status lfu_config_new(lfu_config** out) {
  return guard([&] {
    need(out != nullptr, "NULL argument");
    *out = new lfu_config{lfu::default_run_config(), {}};
  });
}

LFU_API lfu_status lfu_config_apply(lfu_config* config, const char* text) {
  return guard([&] {
    need(config != nullptr && text != nullptr, "NULL argument");
    lfu::RunConfig next = config->config;
    lfu::apply_run_config(next, text);
    config->config = std::move(next);
  });
}

LFU_API lfu_status lfu_config_set(lfu_config* config, const char* key, const char* value) {
  return guard([&] {
    need(config != nullptr && key != nullptr && value != nullptr, "NULL argument");
    lfu::set_key(config->config, key, value);
  });
}

LFU_API const char* lfu_config_text(lfu_config* config) {
  if (config == nullptr) return "";
  config->text = lfu::to_string(config->config);
  return config->text.c_str();
}

LFU_API void lfu_config_free(lfu_config* config) { delete config; }

LFU_API lfu_status lfu_run(const lfu_config* config, lfu_report** out) {
  return guard([&] {
    need(config != nullptr && out != nullptr, "NULL argument");
    auto outcome = lfu::run(config->config);
    auto dir = outcome.out_dir.string();
    *out = new lfu_report{std::move(outcome), std::move(dir)};
  });
}

LFU_API const char* lfu_report_text(const lfu_report* report) {
  return report != nullptr ? report->outcome.report.c_str() : "";
}
LFU_API const char* lfu_report_out_dir(const lfu_report* report) {
  return report != nullptr ? report->dir.c_str() : "";
}
LFU_API size_t lfu_report_file_count(const lfu_report* report) {
  return report != nullptr ? report->outcome.files.size() : 0;
}
LFU_API const char* lfu_report_file(const lfu_report* report, size_t i) {
  if (report == nullptr || i >= report->outcome.files.size()) return nullptr;
  return report->outcome.files[i].c_str();
}
LFU_API void lfu_report_free(lfu_report* report) { delete report; }

}  // extern "C"
