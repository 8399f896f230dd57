#include "tate/cli.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tate/coefficients.hpp"
#include "tate/evaluator.hpp"
#include "tate/integrals.hpp"
#include "tate/kernels.hpp"
#include "tate/verify.hpp"

namespace tate::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw DomainError("option '" + key + "' expects a number, got '" + v + "'");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  int out = 0;
  try {
    out = std::stoi(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw DomainError("option '" + key + "' expects an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw DomainError("option '" + key + "' expects true or false, got '" + v + "'");
}

struct Field {
  const char* key;
  const char* help;
  std::function<std::optional<std::string>(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

template <typename T>
std::optional<std::string> opt_text(const std::optional<T>& v, std::function<std::string(const T&)> f) {
  if (!v) return std::nullopt;
  return f(*v);
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"stream", "stream spec: zeta, tau, dirichlet:d, dedekind:d, character:path, product:A,B (default zeta)",
       [](const RunConfig& c) { return std::optional<std::string>(c.stream); },
       [](RunConfig& c, const std::string& v) { c.stream = v; }},
      {"s", "complex point, e.g. 0.5+14.134725i (default: the zero picked by --zero-index)",
       [](const RunConfig& c) { return opt_text<cplx>(c.s, [](const cplx& z) { return format_complex(z); }); },
       [](RunConfig& c, const std::string& v) { c.s = parse_complex(v); }},
      {"zero-index", "which zero above the real axis to use (default 1)",
       [](const RunConfig& c) { return std::optional<std::string>(std::to_string(c.zero_index)); },
       [](RunConfig& c, const std::string& v) { c.zero_index = to_int("zero-index", v); }},
      {"gamma", "zero ordinate; overrides --zero-index",
       [](const RunConfig& c) { return opt_text<double>(c.gamma, fmt); },
       [](RunConfig& c, const std::string& v) { c.gamma = to_double("gamma", v); }},
      {"T", "critical-line truncation height (default 2000)",
       [](const RunConfig& c) { return std::optional<std::string>(fmt(c.T)); },
       [](RunConfig& c, const std::string& v) { c.T = to_double("T", v); }},
      {"X", "kernel truncation x_max (default 5000)",
       [](const RunConfig& c) { return std::optional<std::string>(fmt(c.X)); },
       [](RunConfig& c, const std::string& v) { c.X = to_double("X", v); }},
      {"eps", "mollifier width (default 0.01)",
       [](const RunConfig& c) { return std::optional<std::string>(fmt(c.eps)); },
       [](RunConfig& c, const std::string& v) { c.eps = to_double("eps", v); }},
      {"tol", "zero-refinement / evaluation tolerance (default 1e-9)",
       [](const RunConfig& c) { return std::optional<std::string>(fmt(c.tol)); },
       [](RunConfig& c, const std::string& v) { c.tol = to_double("tol", v); }},
      {"n-zeros", "number of zeros for scan (default 10)",
       [](const RunConfig& c) { return std::optional<std::string>(std::to_string(c.n_zeros)); },
       [](RunConfig& c, const std::string& v) { c.n_zeros = to_int("n-zeros", v); }},
      {"range", "ordinate range a:b for zeros (default 0:50)",
       [](const RunConfig& c) { return std::optional<std::string>(c.range); },
       [](RunConfig& c, const std::string& v) { c.range = v; }},
      {"format", "json or csv (default json)",
       [](const RunConfig& c) { return std::optional<std::string>(c.format); },
       [](RunConfig& c, const std::string& v) {
         if (v != "json" && v != "csv") throw DomainError("format must be json or csv");
         c.format = v;
       }},
      {"output", "output file (default stdout)",
       [](const RunConfig& c) { return std::optional<std::string>(c.output); },
       [](RunConfig& c, const std::string& v) { c.output = v; }},
      {"claim", "claim ID for verify",
       [](const RunConfig& c) { return std::optional<std::string>(c.claim); },
       [](RunConfig& c, const std::string& v) { c.claim = v; }},
      {"all", "run every claim (default false)",
       [](const RunConfig& c) { return std::optional<std::string>(c.all ? "true" : "false"); },
       [](RunConfig& c, const std::string& v) { c.all = to_bool("all", v); }},
      {"line-re", "single vertical line for P31/P32 or integral --kind line (default 1/2 or the claim's set)",
       [](const RunConfig& c) { return opt_text<double>(c.line_re, fmt); },
       [](RunConfig& c, const std::string& v) { c.line_re = to_double("line-re", v); }},
      {"q", "prime modulus for NU_Q",
       [](const RunConfig& c) { return opt_text<int>(c.q, [](const int& q) { return std::to_string(q); }); },
       [](RunConfig& c, const std::string& v) { c.q = to_int("q", v); }},
      {"w", "Mellin point (default 0.5)",
       [](const RunConfig& c) { return opt_text<cplx>(c.w, [](const cplx& z) { return format_complex(z); }); },
       [](RunConfig& c, const std::string& v) { c.w = parse_complex(v); }},
      {"xi", "Fourier frequency (default 1.5)",
       [](const RunConfig& c) { return opt_text<double>(c.xi, fmt); },
       [](RunConfig& c, const std::string& v) { c.xi = to_double("xi", v); }},
      {"kind",
       "kernel: tate | inverse_different | variance_sqrt | variance_unit | smoothed; "
       "integral: line | line_half | variance | norm | mellin | fourier",
       [](const RunConfig& c) { return std::optional<std::string>(c.kind); },
       [](RunConfig& c, const std::string& v) { c.kind = v; }},
      {"weight", "norm weight: dx | dx_over_x | dx_over_x2 (default dx)",
       [](const RunConfig& c) { return std::optional<std::string>(c.weight); },
       [](RunConfig& c, const std::string& v) {
         if (v != "dx" && v != "dx_over_x" && v != "dx_over_x2") throw DomainError("unknown weight '" + v + "'");
         c.weight = v;
       }},
  };
  return table;
}

const Field& field(const std::string& key) {
  for (const auto& f : fields()) {
    if (key == f.key) return f;
  }
  throw DomainError("unknown configuration key '" + key + "'");
}

// -------------------------------------------------------------------------
// Subcommand bodies. Each returns the text to write and an exit code.

struct Outcome {
  std::string text;
  int code = kOk;
};

cplx resolve_point(const RunConfig& c, const CoefficientStream& stream) {
  if (c.s) return *c.s;
  if (c.gamma) return {0.5, *c.gamma};
  return {0.5, nth_zero(stream, c.zero_index, std::min(c.tol, 1e-10)).ordinate};
}

ordered_json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

Outcome do_zeros(const RunConfig& c) {
  const auto stream = parse_stream(c.stream);
  const auto colon = c.range.find(':');
  if (colon == std::string::npos) throw DomainError("range must look like a:b");
  const double a = to_double("range", c.range.substr(0, colon));
  const double b = to_double("range", c.range.substr(colon + 1));
  const auto zeros = find_zeros(stream, a, b, c.tol);
  if (c.format == "csv") return {zeros_to_csv(zeros)};
  ordered_json arr = ordered_json::array();
  for (const auto& z : zeros) {
    arr.push_back({{"label", z.label}, {"ordinate", z.ordinate}, {"t_lo", z.t_lo}, {"t_hi", z.t_hi},
                   {"tol", z.refined_tol}});
  }
  return {arr.dump(2) + "\n"};
}

Outcome do_eval(const RunConfig& c) {
  const auto stream = parse_stream(c.stream);
  if (!c.s) throw DomainError("eval needs --s");
  const auto e = l_value(stream, *c.s, c.tol);
  if (c.format == "csv") {
    char buf[256];
    std::snprintf(buf, sizeof buf, "s_re,s_im,value_re,value_im,error_estimate\n%.17g,%.17g,%.17g,%.17g,%.3g\n",
                  c.s->real(), c.s->imag(), e.value.real(), e.value.imag(), e.error_estimate);
    return {buf};
  }
  ordered_json j{{"stream", c.stream},  {"s", complex_json(*c.s)},
                 {"value", complex_json(e.value)}, {"error_estimate", e.error_estimate},
                 {"tol", e.tol},        {"clamped", e.clamped}};
  return {j.dump(2) + "\n"};
}

PiecewiseKernel make_kernel(const RunConfig& c, const CoefficientStream& stream, const std::string& kind) {
  if (kind == "tate" || kind.empty()) return build_tate_kernel(stream, resolve_point(c, stream), c.X);
  if (kind == "inverse_different") {
    if (stream.kind() != StreamKind::dedekind_quadratic && stream.kind() != StreamKind::zeta) {
      throw DomainError("inverse_different kernels need zeta or dedekind:d");
    }
    const std::int64_t d = stream.kind() == StreamKind::zeta ? 1 : stream.discriminant();
    return build_inverse_different_kernel(d, resolve_point(c, stream), c.X);
  }
  if (kind == "variance_sqrt") return build_variance_kernel(stream, central_value(stream), c.X, VarianceWeight::sqrt_n);
  if (kind == "variance_unit") return build_variance_kernel(stream, 0.0, c.X, VarianceWeight::unit);
  throw DomainError("unknown kernel kind '" + kind + "'");
}

Outcome do_kernel(const RunConfig& c) {
  const auto stream = parse_stream(c.stream);
  if (c.kind == "smoothed") {
    // Plot-ready samples of H_eps next to H on [1, min(X, 50)].
    const cplx central = central_value(stream);
    const double hi = std::min(c.X, 50.0);
    const auto H = build_variance_kernel(stream, central, std::max(hi, 2.0), VarianceWeight::sqrt_n);
    std::string out = "x,h_eps_re,h_eps_im,h_re,h_im\n";
    char buf[200];
    for (int i = 0;; ++i) {
      const double x = 1.0 + 0.01 * i;
      if (x >= hi) break;
      const cplx he = smoothed_kernel_H_eps(stream, central, c.eps, x);
      const cplx h = H.value(x);
      std::snprintf(buf, sizeof buf, "%.6f,%.17g,%.17g,%.17g,%.17g\n", x, he.real(), he.imag(), h.real(), h.imag());
      out += buf;
    }
    return {out};
  }
  const auto k = make_kernel(c, stream, c.kind);
  if (c.format == "csv") return {k.to_csv()};
  ordered_json j{{"label", k.label},
                 {"s", complex_json(k.s)},
                 {"offset_d", complex_json(k.offset_d)},
                 {"offset_power", complex_json(k.offset_power)},
                 {"power_exponent", complex_json(k.power_exponent)},
                 {"support_lo", k.support_lo},
                 {"denominator", k.denominator},
                 {"intervals", k.interval_count()},
                 {"x_max", k.x_max},
                 {"tail", {{"kind", to_string(k.tail.kind)}, {"beta", k.tail.beta}, {"C", k.tail.C}}}};
  return {j.dump(2) + "\n"};
}

Weight parse_weight(const std::string& w) {
  if (w == "dx") return Weight::dx;
  if (w == "dx_over_x") return Weight::dx_over_x;
  return Weight::dx_over_x2;
}

Outcome do_integral(const RunConfig& c) {
  const auto stream = parse_stream(c.stream);
  IntegralResult r;
  const std::string kind = c.kind.empty() ? "line" : c.kind;
  if (kind == "line") {
    r = vertical_line_integral(stream, resolve_point(c, stream), c.line_re.value_or(0.5), c.T, CenterShift::pole_at_s);
  } else if (kind == "line_half") {
    r = vertical_line_integral(stream, 0.0, c.line_re.value_or(0.5), c.T, CenterShift::pole_at_half);
  } else if (kind == "variance") {
    r = variance_integral(stream, c.T);
  } else if (kind == "norm") {
    r = kernel_l2_norm(build_tate_kernel(stream, resolve_point(c, stream), c.X), parse_weight(c.weight), c.X);
  } else if (kind == "mellin") {
    r = mellin_of_kernel(build_tate_kernel(stream, resolve_point(c, stream), c.X), c.w.value_or(cplx(0.5, 0.0)));
  } else if (kind == "fourier") {
    r = fourier_of_kernel_zeta(resolve_point(c, stream), c.xi.value_or(1.5), c.X);
  } else {
    throw DomainError("unknown integral kind '" + kind + "'");
  }
  if (c.format == "csv") {
    char buf[256];
    std::snprintf(buf, sizeof buf, "value_re,value_im,tail_estimate,error_bound\n%.17g,%.17g,%.6g,%.6g\n",
                  r.value.real(), r.value.imag(), r.tail_estimate, r.error_bound);
    return {buf};
  }
  return {r.to_json() + "\n"};
}

ClaimParams claim_params(const RunConfig& c) {
  ClaimParams p;
  p.stream = c.stream;
  p.zero_index = c.zero_index;
  p.gamma = c.gamma;
  if (c.s) p.gamma = c.s->imag();
  p.T = c.T;
  p.X = c.X;
  p.line_re = c.line_re;
  p.w = c.w;
  p.xi = c.xi;
  p.q = c.q;
  return p;
}

Outcome do_verify(const RunConfig& c) {
  if (c.all == !c.claim.empty()) throw DomainError("verify needs exactly one of --claim ID or --all");
  const auto p = claim_params(c);
  std::vector<ClaimReport> reports;
  if (c.all) {
    reports = check_all(p);
  } else {
    reports.push_back(check_claim(c.claim, p));
  }
  int code = kOk;
  for (const auto& r : reports) {
    if (r.status == "fail") code = kClaimFailed;
    if (!c.all && r.status == "inapplicable") code = kClaimFailed;
  }
  if (c.format == "csv") {
    std::string out = "claim_id,status,lhs,bound_or_rhs,margin,tolerance,error_budget\n";
    char buf[256];
    for (const auto& r : reports) {
      std::snprintf(buf, sizeof buf, "%s,%s,%.12g,%.12g,%.12g,%.3g,%.6g\n", r.claim_id.c_str(), r.status.c_str(), r.lhs,
                    r.bound_or_rhs, r.margin, r.tolerance, r.error_budget);
      out += buf;
    }
    return {out, code};
  }
  if (!c.all) return {reports.front().to_json() + "\n", code};
  return {reports_to_json(reports) + "\n", code};
}

Outcome do_scan(const RunConfig& c) {
  const auto stream = parse_stream(c.stream);
  const auto table = scan_zero_growth(stream, c.n_zeros, c.T);
  int code = kOk;
  for (const auto& r : table.rows) {
    if (r.margin - r.error_budget <= 0.0) code = kClaimFailed;
  }
  if (c.format == "csv") return {growth_to_csv(table), code};
  ordered_json rows = ordered_json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"index", r.index}, {"ordinate", r.ordinate}, {"I_value", r.value}, {"T12_bound", r.bound},
                    {"margin", r.margin}, {"error_budget", r.error_budget}});
  }
  ordered_json j{{"stream", c.stream}, {"T", c.T}, {"rows", rows}};
  if (!table.note.empty()) j["note"] = table.note;
  return {j.dump(2) + "\n", code};
}

std::string claims_footer() {
  std::string out = "\nClaim IDs:\n";
  for (const auto& id : claim_ids()) {
    out += "  " + id + std::string(11 - id.size(), ' ') + claim_description(id) + "\n";
  }
  out += "\nExit codes: 0 success, 1 claim failed, 2 usage or configuration error, 3 numeric precondition failed.\n";
  return out;
}

}  // namespace

std::string RunConfig::serialize() const {
  std::string out = "subcommand=" + subcommand + "\n";
  for (const auto& f : fields()) {
    const auto v = f.get(*this);
    if (v) out += std::string(f.key) + "=" + *v + "\n";
  }
  return out;
}

void RunConfig::apply(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("configuration line without '=': " + line);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "subcommand") {
      subcommand = value;
    } else {
      field(key).set(*this, value);
    }
  }
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"tatelab: Tate kernels, quadratic integrals and claim checks for low-degree L-functions", "tatelab"};
  app.require_subcommand(1);
  app.footer(claims_footer());

  static const std::map<std::string, std::vector<std::string>> per_command = {
      {"zeros", {"stream", "range", "tol", "format", "output"}},
      {"eval", {"stream", "s", "tol", "format", "output"}},
      {"kernel", {"stream", "s", "zero-index", "gamma", "X", "eps", "kind", "tol", "format", "output"}},
      {"integral",
       {"stream", "s", "zero-index", "gamma", "T", "X", "kind", "weight", "line-re", "w", "xi", "tol", "format",
        "output"}},
      {"verify",
       {"stream", "claim", "all", "s", "zero-index", "gamma", "T", "X", "line-re", "q", "w", "xi", "format",
        "output"}},
      {"scan", {"stream", "n-zeros", "T", "format", "output"}},
  };
  static const std::map<std::string, std::string> blurbs = {
      {"zeros", "locate zeros on the critical line"},
      {"eval", "evaluate L(s)"},
      {"kernel", "build a piecewise kernel (CSV intervals or JSON summary)"},
      {"integral", "quadratic integrals and kernel transforms"},
      {"verify", "check one claim or all of them"},
      {"scan", "I(s) over the first zeros against the lower bound"},
  };

  std::map<std::string, std::string> given;
  std::string config_path;
  for (const auto& [name, keys] : per_command) {
    auto* sub = app.add_subcommand(name, blurbs.at(name));
    sub->footer(name == "verify" ? claims_footer() : "");
    sub->add_option("--config", config_path, "file of key=value lines applied before the flags");
    for (const auto& key : keys) {
      const Field& f = field(key);
      const std::string flag = "--" + key;
      if (key == "all") {
        sub->add_flag_callback(flag, [&given] { given["all"] = "true"; }, f.help);
        continue;
      }
      sub->add_option_function<std::string>(flag, [&given, key](const std::string& v) { given[key] = v; }, f.help);
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  RunConfig config;
  std::string subcommand;
  for (auto* sub : app.get_subcommands()) subcommand = sub->get_name();
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw DomainError("cannot read config file '" + config_path + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      config.apply(buf.str());
    }
    config.subcommand = subcommand;
    for (const auto& [key, value] : given) field(key).set(config, value);

    Outcome out;
    if (subcommand == "zeros") out = do_zeros(config);
    else if (subcommand == "eval") out = do_eval(config);
    else if (subcommand == "kernel") out = do_kernel(config);
    else if (subcommand == "integral") out = do_integral(config);
    else if (subcommand == "verify") out = do_verify(config);
    else out = do_scan(config);

    if (config.output.empty()) {
      std::cout << out.text;
    } else {
      std::ofstream f(config.output);
      if (!f) throw DomainError("cannot write '" + config.output + "'");
      f << out.text;
    }
    return out.code;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return kNumeric;
  } catch (const PoleError& e) {
    std::cerr << "pole: " << e.what() << "\n";
    return kNumeric;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kUsage;
  } catch (const TruncationError& e) {
    std::cerr << "truncation: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  }
}

}  // namespace tate::cli
