// Command-line front end. Every subcommand maps onto one library operation,
// prints a single payload in the requested format, and reports failures
// through exit codes:
//   0 success | 1 verification failure | 2 domain or usage error
//   3 capacity or I/O error            | 4 insufficient data
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "floorsum/floorsum.hpp"

using namespace floorsum;

namespace {

enum class Format { json, csv, plain };

// Ordered field list rendered as a one-line JSON object, a two-line CSV, or
// plain key/value lines. Field order is fixed at insertion time, and floats
// always go through format_double17, so identical invocations produce
// byte-identical output.
class Payload {
 public:
  void str(const std::string& name, const std::string& v) { push(name, v, true); }
  void raw(const std::string& name, const std::string& v) { push(name, v, false); }
  void num(const std::string& name, double v) { raw(name, format_double17(v)); }
  void count(const std::string& name, u64 v) { raw(name, std::to_string(v)); }
  void integer(const std::string& name, long long v) { raw(name, std::to_string(v)); }
  void boolean(const std::string& name, bool v) { raw(name, v ? "true" : "false"); }

  // Exact results keep their full decimal expansion as a string; float
  // results are plain JSON numbers.
  void cert(const std::string& name, const CertifiedValue& v) {
    if (v.exact)
      str(name, v.text());
    else
      num(name, v.value);
  }

  std::string render(Format f) const {
    switch (f) {
      case Format::json: {
        std::string out = "{";
        for (size_t i = 0; i < fields_.size(); ++i) {
          if (i) out += ',';
          out += '"';
          out += escape(fields_[i].name);
          out += "\":";
          if (fields_[i].quoted) {
            out += '"';
            out += escape(fields_[i].text);
            out += '"';
          } else {
            out += fields_[i].text;
          }
        }
        out += "}\n";
        return out;
      }
      case Format::csv: {
        std::string head, row;
        for (size_t i = 0; i < fields_.size(); ++i) {
          if (i) {
            head += ',';
            row += ',';
          }
          head += csv_cell(fields_[i].name);
          row += csv_cell(fields_[i].text);
        }
        return head + "\n" + row + "\n";
      }
      case Format::plain: {
        std::string out;
        for (const Field& f2 : fields_) out += f2.name + " = " + f2.text + "\n";
        return out;
      }
    }
    return {};
  }

 private:
  struct Field {
    std::string name;
    std::string text;
    bool quoted;
  };

  void push(const std::string& name, const std::string& text, bool quoted) {
    fields_.push_back(Field{name, text, quoted});
  }

  static std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
      if (c == '"' || c == '\\') {
        out += '\\';
        out += c;
      } else if (static_cast<unsigned char>(c) < 0x20) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "\\u%04x", c);
        out += buf;
      } else {
        out += c;
      }
    }
    return out;
  }

  static std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    out += '"';
    return out;
  }

  std::vector<Field> fields_;
};

struct Ctx {
  Budget budget;
  Format format = Format::json;
};

void finish(const Ctx& ctx, Payload& out) {
  out.count("threads", effective_threads(ctx.budget));
  out.count("memory_cap_bytes", ctx.budget.memory_cap_bytes);
  std::cout << out.render(ctx.format);
}

u64 to_count(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 9.0e18)
    throw domain_error(std::string(what) + " must be a positive integer");
  return static_cast<u64>(v);
}

unsigned resolve_threads(bool flag_given, unsigned flag_value) {
  if (flag_given) {
    if (flag_value < 1) throw domain_error("--threads must be at least 1");
    return flag_value;
  }
  const char* env = std::getenv("FLOORSUM_THREADS");
  if (env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 1'000'000)
      throw domain_error("FLOORSUM_THREADS must be a positive integer");
    return static_cast<unsigned>(v);
  }
  return 0;  // resolved to machine parallelism by effective_threads
}

int run_compute(const Ctx& ctx, double j, double k, double x_in, const std::string& method) {
  const SumParams p = make_params(j, k);
  const u64 x = to_count(x_in, "x");
  StopWatch timer;
  const CertifiedValue v = method == "naive"   ? s_naive(p, x, ctx.budget)
                           : method == "block" ? s_block(p, x, ctx.budget)
                                               : s_hybrid(p, x, ctx.budget);
  const double secs = timer.seconds();

  Payload out;
  out.str("command", "compute");
  out.num("j", j);
  out.num("k", k);
  out.count("x", x);
  out.str("method", method);
  out.str("mode", v.exact ? "exact" : "float");
  out.cert("value", v);
  out.num("abs_error", v.abs_error);
  out.count("terms", v.terms);
  out.num("seconds", secs);
  finish(ctx, out);
  return 0;
}

int run_summatory(const Ctx& ctx, const std::string& kind, double n_in) {
  const u64 n = to_count(n_in, "n");
  Payload out;
  out.str("command", "summatory");
  out.str("kind", kind);
  out.count("n", n);
  StopWatch timer;
  if (kind == "phi") {
    out.str("value", totient_summatory(n, ctx.budget).str());
  } else {
    out.integer("value", mertens(n, ctx.budget));
  }
  out.num("seconds", timer.seconds());
  finish(ctx, out);
  return 0;
}

int run_constant(const Ctx& ctx, double cprime, double eps, double head_in, unsigned tail_order) {
  const u64 head = to_count(head_in, "head");
  StopWatch timer;
  const CertifiedValue v = series_constant(cprime, eps, head, tail_order, ctx.budget);
  const double secs = timer.seconds();

  Payload out;
  out.str("command", "constant");
  out.num("cprime", cprime);
  out.num("eps", eps);
  out.count("head", head);
  out.count("tail_order", tail_order);
  out.num("value", v.value);
  out.num("abs_error", v.abs_error);
  out.count("terms", v.terms);
  out.num("seconds", secs);
  finish(ctx, out);
  return 0;
}

int run_mainterm(const Ctx& ctx, double j, double k, double x_in) {
  const SumParams p = make_params(j, k);
  const u64 x = to_count(x_in, "x");
  StopWatch timer;
  const CertifiedValue v = main_term(p, x, ctx.budget);
  const double secs = timer.seconds();

  Payload out;
  out.str("command", "mainterm");
  out.num("j", j);
  out.num("k", k);
  out.count("x", x);
  out.str("case", main_case(p) == MainCase::log_case ? "log" : "linear");
  out.num("value", v.value);
  out.num("abs_error", v.abs_error);
  out.count("terms", v.terms);
  out.num("seconds", secs);
  finish(ctx, out);
  return 0;
}

int run_psi_check(const Ctx& ctx, double t, unsigned H) {
  const VaalerApprox va = vaaler_approx(t, H);
  const double target = psi(t);
  const double diff = std::abs(target - va.approx);
  const bool ok = diff <= va.rh_bound + 1e-10;

  Payload out;
  out.str("command", "psi-check");
  out.num("t", t);
  out.count("H", H);
  out.num("psi", target);
  out.num("approx", va.approx);
  out.num("rh_bound", va.rh_bound);
  out.num("abs_diff", diff);
  out.boolean("within_bound", ok);
  finish(ctx, out);
  return ok ? 0 : 1;
}

int run_mho(const Ctx& ctx, double j, double k, double x_in, double w_in, unsigned delta,
            double eps) {
  const SumParams p = make_params(j, k);
  const u64 x = to_count(x_in, "x");
  const u64 W = to_count(w_in, "W");
  if (delta > 1) throw domain_error("delta must be 0 or 1");
  StopWatch timer;
  const CertifiedValue v = mho_sum(x, W, delta, p, ctx.budget);
  const double secs = timer.seconds();

  Payload out;
  out.str("command", "mho");
  out.num("j", j);
  out.num("k", k);
  out.count("x", x);
  out.count("W", W);
  out.count("delta", delta);
  out.num("value", v.value);
  out.num("abs_error", v.abs_error);
  out.count("terms", v.terms);
  const double d = k - j;
  if (d >= 0.0 && d < 1.0 && W <= x) {
    const EnvelopeReport env = prop_bound_pieces(x, W, p, eps);
    out.num("eps", eps);
    out.num("envelope", env.value);
    out.str("branch", env.large_selected ? "large" : "small");
    out.num("ratio", std::abs(v.value) / env.value);
  }
  out.num("seconds", secs);
  finish(ctx, out);
  return 0;
}

int run_fit(const Ctx& ctx, double j, double k, double xmin_in, double xmax_in, unsigned points,
            const std::string& out_path) {
  const SumParams p = make_params(j, k);
  const u64 xmin = to_count(xmin_in, "xmin");
  const u64 xmax = to_count(xmax_in, "xmax");

  // Open the sink before the long computation so path errors surface fast.
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw capacity_error("fit: cannot open output file: " + out_path);

  StopWatch timer;
  const FitResult fit = fit_error_exponent(p, xmin, xmax, points, ctx.budget);
  const double secs = timer.seconds();

  file << "x,s_value,main,delta,log10_x,log10_abs_delta,seconds\n";
  for (const ErrorSample& s : fit.samples) {
    file << s.x << ',' << s.s_value.text() << ',' << format_double17(s.main.value) << ','
         << format_double17(s.delta) << ','
         << format_double17(std::log10(static_cast<double>(s.x))) << ','
         << format_double17(std::log10(std::abs(s.delta))) << ','
         << format_double17(s.seconds) << '\n';
  }
  file.flush();
  if (!file) throw capacity_error("fit: write failed: " + out_path);

  unsigned admitted = 0;
  for (const ErrorSample& s : fit.samples) admitted += s.admitted ? 1u : 0u;

  Payload out;
  out.str("command", "fit");
  out.num("j", j);
  out.num("k", k);
  out.count("xmin", xmin);
  out.count("xmax", xmax);
  out.count("points", points);
  out.str("out", out_path);
  out.num("slope", fit.slope);
  out.num("intercept", fit.intercept);
  out.num("r_squared", fit.r_squared);
  out.num("theta_reference", fit.theta_reference);
  out.count("samples", fit.samples.size());
  out.count("admitted", admitted);
  out.num("seconds", secs);
  finish(ctx, out);
  return 0;
}

int run_verify_oracle(const Ctx& ctx, double j, double k, double xmax_in) {
  const SumParams p = make_params(j, k);
  const u64 xmax = to_count(xmax_in, "xmax");
  const OracleReport rep = oracle_check(p, xmax, ctx.budget);

  Payload out;
  out.str("command", "verify");
  out.str("suite", "oracle");
  out.num("j", j);
  out.num("k", k);
  out.count("xmax", xmax);
  out.count("checked", rep.checked);
  out.boolean("ok", rep.ok);
  out.count("first_failure", rep.first_failure);
  if (!rep.ok) out.str("detail", rep.detail);
  finish(ctx, out);
  return rep.ok ? 0 : 1;
}

int run_verify_decomposition(const Ctx& ctx, double x_in, double z) {
  const u64 x = to_count(x_in, "x");
  const DecompositionReport rep = hyperbola_decomposition_check(x, z, ctx.budget);

  Payload out;
  out.str("command", "verify");
  out.str("suite", "decomposition");
  out.count("x", x);
  out.num("z", z);
  out.str("sigma1", rep.sigma1.str());
  out.str("sigma2", rep.sigma2.str());
  out.str("sigma3", rep.sigma3.str());
  out.str("combined", rep.combined.str());
  out.str("reference", rep.reference.str());
  out.boolean("ok", rep.ok);
  finish(ctx, out);
  return rep.ok ? 0 : 1;
}

int run_verify_sandwich(const Ctx& ctx, double c_in, double x_in, double xmax_in) {
  if (!(c_in >= 2.0) || c_in != std::floor(c_in) || c_in > 60.0)
    throw domain_error("sandwich suite needs integer c in [2, 60]");
  const u64 c = static_cast<u64>(c_in);
  const SumParams p = make_params(static_cast<double>(c) + 1.0, 1.0);

  Payload out;
  out.str("command", "verify");
  out.str("suite", "sandwich");
  out.count("c", c);

  if (x_in != 0.0) {
    const u64 x = to_count(x_in, "x");
    const SandwichReport rep = sandwich_check(p, x, ctx.budget);
    out.count("x", x);
    out.str("lower", rep.lower.str());
    out.str("value", rep.value.str());
    out.str("upper", rep.upper.str());
    out.num("zeta_ratio", rep.zeta_ratio);
    out.num("lower_ratio", rep.lower_ratio);
    out.boolean("ok", rep.ok);
    finish(ctx, out);
    return rep.ok ? 0 : 1;
  }

  const u64 xmax = to_count(xmax_in, "xmax");
  for (u64 x = 1; x <= xmax; ++x) {
    const SandwichReport rep = sandwich_check(p, x, ctx.budget);
    if (!rep.ok) {
      out.count("first_failure", x);
      out.str("lower", rep.lower.str());
      out.str("value", rep.value.str());
      out.str("upper", rep.upper.str());
      out.boolean("ok", false);
      finish(ctx, out);
      return 1;
    }
  }
  out.count("xmax", xmax);
  out.count("checked", xmax);
  out.boolean("ok", true);
  finish(ctx, out);
  return 0;
}

int run_verify_vaaler(const Ctx& ctx, const std::vector<unsigned>& hs, unsigned grid) {
  if (grid < 2) throw domain_error("vaaler suite needs a grid of at least 2 points");
  u64 points = 0;
  double worst = -1.0;
  std::string h_list;
  for (unsigned H : hs) {
    if (!h_list.empty()) h_list += ',';
    h_list += std::to_string(H);
    for (unsigned i = 0; i < grid; ++i) {
      const double t = static_cast<double>(i) / grid;
      if (t < 1e-6 || t > 1.0 - 1e-6) continue;
      const VaalerApprox va = vaaler_approx(t, H);
      const double slack = std::abs(psi(t) - va.approx) - va.rh_bound;
      worst = std::max(worst, slack);
      ++points;
      if (slack > 1e-10) {
        Payload out;
        out.str("command", "verify");
        out.str("suite", "vaaler");
        out.count("H", H);
        out.num("t", t);
        out.num("slack", slack);
        out.boolean("ok", false);
        finish(ctx, out);
        return 1;
      }
    }
  }
  Payload out;
  out.str("command", "verify");
  out.str("suite", "vaaler");
  out.str("H", h_list);
  out.count("grid", grid);
  out.count("points", points);
  out.num("worst_slack", worst);
  out.boolean("ok", true);
  finish(ctx, out);
  return 0;
}

int run_verify_walfisz(const Ctx& ctx, double x_in, double tol) {
  const u64 x = to_count(x_in, "x");
  const double ratio = walfisz_ratio(x, ctx.budget);
  const double deviation = std::abs(ratio - 1.0);
  const bool ok = deviation <= tol;

  Payload out;
  out.str("command", "verify");
  out.str("suite", "walfisz");
  out.count("x", x);
  out.num("ratio", ratio);
  out.num("deviation", deviation);
  out.num("tol", tol);
  out.boolean("ok", ok);
  finish(ctx, out);
  return ok ? 0 : 1;
}

int run_verify_floorpow(const Ctx& ctx, double x_in, double c, double tol) {
  const u64 x = to_count(x_in, "x");
  const double value = floor_power_asymptotic_check(x, c, ctx.budget);
  const bool ok = value <= tol;

  Payload out;
  out.str("command", "verify");
  out.str("suite", "floorpow");
  out.count("x", x);
  out.num("c", c);
  out.num("value", value);
  out.num("tol", tol);
  out.boolean("ok", ok);
  finish(ctx, out);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized totient floor-sum toolkit"};
  app.require_subcommand(1);

  unsigned threads_flag = 0;
  u64 memory_cap = Budget{}.memory_cap_bytes;
  std::string format_name = "json";
  app.add_option("--threads", threads_flag, "worker threads (default: machine parallelism)");
  app.add_option("--memory-cap", memory_cap, "memory budget in bytes (min 2^24)");
  app.add_option("--format", format_name, "output format")
      ->check(CLI::IsMember({"json", "csv", "plain"}));

  double j = 1.0, k = 1.0, x = 0.0, z = 1.0, t = 0.0;
  double cprime = 2.0, eps = 1e-13, head = 1e6, tol = 0.0;
  double c_param = 2.0, xmin = 1e4, xmax_fit = 1e7, n = 1.0, w = 1.0, env_eps = 0.01;
  double xmax_verify = 1000.0;
  unsigned points = 9, H = 10, tail_order = 3, delta = 0, grid = 10'000;
  std::string method = "hybrid", kind = "phi", suite, out_path = "fit.csv";
  std::vector<unsigned> h_list{4, 16, 64};

  CLI::App* cmd_compute = app.add_subcommand("compute", "evaluate the floor-sum at one point");
  cmd_compute->add_option("--j", j)->required();
  cmd_compute->add_option("--k", k)->required();
  cmd_compute->add_option("--x", x)->required();
  cmd_compute->add_option("--method", method)->check(CLI::IsMember({"naive", "block", "hybrid"}));

  CLI::App* cmd_summatory =
      app.add_subcommand("summatory", "prefix sum of the totient or Moebius function");
  cmd_summatory->add_option("--kind", kind)->check(CLI::IsMember({"phi", "mertens"}));
  cmd_summatory->add_option("--n", n)->required();

  CLI::App* cmd_constant =
      app.add_subcommand("constant", "linear-case series constant to certified precision");
  cmd_constant->add_option("--cprime", cprime)->required();
  cmd_constant->add_option("--eps", eps);
  cmd_constant->add_option("--head", head);
  cmd_constant->add_option("--tail-order", tail_order);

  CLI::App* cmd_mainterm = app.add_subcommand("mainterm", "main-term value for given parameters");
  cmd_mainterm->add_option("--j", j)->required();
  cmd_mainterm->add_option("--k", k)->required();
  cmd_mainterm->add_option("--x", x)->required();

  CLI::App* cmd_psi = app.add_subcommand("psi-check", "sawtooth approximation at one point");
  cmd_psi->add_option("--t", t)->required();
  cmd_psi->add_option("--H", H)->required();

  CLI::App* cmd_mho = app.add_subcommand("mho", "dyadic-window sawtooth-weighted totient sum");
  cmd_mho->add_option("--j", j)->required();
  cmd_mho->add_option("--k", k)->required();
  cmd_mho->add_option("--x", x)->required();
  cmd_mho->add_option("--W", w)->required();
  cmd_mho->add_option("--delta", delta);
  cmd_mho->add_option("--eps", env_eps);

  CLI::App* cmd_fit = app.add_subcommand("fit", "error-exponent regression over a geometric grid");
  cmd_fit->add_option("--j", j)->required();
  cmd_fit->add_option("--k", k)->required();
  cmd_fit->add_option("--xmin", xmin);
  cmd_fit->add_option("--xmax", xmax_fit);
  cmd_fit->add_option("--points", points);
  cmd_fit->add_option("--out", out_path);

  CLI::App* cmd_verify = app.add_subcommand("verify", "run one verification suite");
  cmd_verify->add_option("--suite", suite)
      ->required()
      ->check(CLI::IsMember({"oracle", "decomposition", "sandwich", "vaaler", "walfisz",
                             "floorpow"}));
  cmd_verify->add_option("--j", j);
  cmd_verify->add_option("--k", k);
  cmd_verify->add_option("--x", x);
  cmd_verify->add_option("--z", z);
  cmd_verify->add_option("--c", c_param);
  cmd_verify->add_option("--xmax", xmax_verify);
  cmd_verify->add_option("--H", h_list)->delimiter(',');
  cmd_verify->add_option("--grid", grid);
  cmd_verify->add_option("--tol", tol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Ctx ctx;
    if (memory_cap < (u64{1} << 24)) throw domain_error("--memory-cap must be at least 2^24");
    ctx.budget.memory_cap_bytes = memory_cap;
    ctx.budget.threads = resolve_threads(app.count("--threads") > 0, threads_flag);
    ctx.format = format_name == "csv"     ? Format::csv
                 : format_name == "plain" ? Format::plain
                                          : Format::json;

    if (*cmd_compute) return run_compute(ctx, j, k, x, method);
    if (*cmd_summatory) return run_summatory(ctx, kind, n);
    if (*cmd_constant) return run_constant(ctx, cprime, eps, head, tail_order);
    if (*cmd_mainterm) return run_mainterm(ctx, j, k, x);
    if (*cmd_psi) return run_psi_check(ctx, t, H);
    if (*cmd_mho) return run_mho(ctx, j, k, x, w, delta, env_eps);
    if (*cmd_fit) return run_fit(ctx, j, k, xmin, xmax_fit, points, out_path);
    if (*cmd_verify) {
      const bool have_x = cmd_verify->count("--x") > 0;
      const bool have_tol = cmd_verify->count("--tol") > 0;
      if (suite == "oracle") return run_verify_oracle(ctx, j, k, xmax_verify);
      if (suite == "decomposition") return run_verify_decomposition(ctx, have_x ? x : 1000.0, z);
      if (suite == "sandwich")
        return run_verify_sandwich(ctx, c_param, have_x ? x : 0.0,
                                   cmd_verify->count("--xmax") > 0 ? xmax_verify : 2000.0);
      if (suite == "vaaler") return run_verify_vaaler(ctx, h_list, grid);
      if (suite == "walfisz")
        return run_verify_walfisz(ctx, have_x ? x : 1e7, have_tol ? tol : 1e-4);
      return run_verify_floorpow(ctx, have_x ? x : 1e5, c_param, have_tol ? tol : 1e-3);
    }
  } catch (const domain_error& e) {
    std::cerr << "floorsum: " << e.what() << "\n";
    return 2;
  } catch (const precision_error& e) {
    std::cerr << "floorsum: " << e.what() << "\n";
    return 2;
  } catch (const capacity_error& e) {
    std::cerr << "floorsum: " << e.what() << "\n";
    return 3;
  } catch (const insufficient_data_error& e) {
    std::cerr << "floorsum: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "floorsum: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
