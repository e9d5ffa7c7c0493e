// Command-line front end. Builds a JSON run configuration and hands it to the C API.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "bergman_limits.h"
#include "json.hpp"

namespace {

struct Options {
  std::string domain = "disk";
  double nu = 0.0;
  double p = 2.0;
  int degree = -1;
  std::string symbol = "z";
  std::string shell;
  std::string sequences = "default";
  int steps = 8;
  std::string lambda = "0";
  std::string op = "projection";
  std::string omegas = "1,2,3,4";
  double cover_t = 0.9;
  double extent = 0.95;
  std::string out = ".";
  int threads = 0;
  uint64_t seed = 1;
  bool corrupt_branch = false;
};

// "a" or "a,b" for a + bi.
bool parse_lambda(const std::string& text, double& re, double& im) {
  char tail = 0;
  im = 0.0;
  if (std::sscanf(text.c_str(), "%lf,%lf%c", &re, &im, &tail) == 2) return true;
  return std::sscanf(text.c_str(), "%lf%c", &re, &tail) == 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Limit operators, Berezin shells and band diagnostics on weighted Bergman spaces"};
  app.set_version_flag("--version", std::string(bl_version()));
  app.require_subcommand(1);
  Options o;

  const struct {
    const char* name;
    const char* help;
  } commands[] = {
      {"spectrum", "Berezin-shell estimate of the essential spectrum with finite-section eigenvalues"},
      {"verify", "Invariant suites; exit code 1 if any suite fails"},
      {"compactness", "Compactness verdict from Berezin decay, limit approximants and band profile"},
      {"fredholm", "Invertibility of T_f - lambda along boundary sequences"},
      {"band", "Band profile and metric cover of a kernel operator"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--domain", o.domain, "disk, ball2, ball3, ball4 or matrix")->capture_default_str();
    sub->add_option("--nu", o.nu, "weight parameter")->capture_default_str();
    sub->add_option("--p", o.p, "exponent, 1 < p < inf")->capture_default_str();
    sub->add_option("--degree", o.degree, "largest polynomial degree of the basis (default per domain)");
    sub->add_option("--symbol", o.symbol, "symbol expression, e.g. \"1 - abs2(z)\"")->capture_default_str();
    sub->add_option("--shell", o.shell, "tmin:tmax:grid");
    sub->add_option("--sequences", o.sequences, "default, or a comma list of rays:K and spiral")
        ->capture_default_str();
    sub->add_option("--steps", o.steps, "sequence step m")->capture_default_str();
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--threads", o.threads, "worker threads (0: BERGMAN_LIMITS_THREADS or all cores)");
    sub->add_option("--seed", o.seed, "seed of the sampled checks")->capture_default_str();
    if (std::string(c.name) == "fredholm") sub->add_option("--lambda", o.lambda, "re or re,im")->capture_default_str();
    if (std::string(c.name) == "band") {
      sub->add_option("--operator", o.op, "projection, identity, toeplitz or multiplication")->capture_default_str();
      sub->add_option("--omegas", o.omegas, "comma list of band widths")->capture_default_str();
      sub->add_option("--cover-t", o.cover_t, "cover parameter t")->capture_default_str();
      sub->add_option("--extent", o.extent, "largest polar radius covered")->capture_default_str();
    }
    if (std::string(c.name) == "verify")
      sub->add_flag("--corrupt-branch", o.corrupt_branch, "test hook: use a discontinuous branch of log h");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  double lre = 0.0, lim = 0.0;
  if (!parse_lambda(o.lambda, lre, lim)) {
    std::fprintf(stderr, "error: --lambda must be re or re,im\n");
    return 2;
  }
  nlohmann::json cfg = {
      {"command", app.get_subcommands().front()->get_name()},
      {"domain", o.domain},
      {"nu", o.nu},
      {"p", o.p},
      {"degree", o.degree},
      {"symbol", o.symbol},
      {"shell", o.shell},
      {"sequences", o.sequences},
      {"steps", o.steps},
      {"lambda", {lre, lim}},
      {"operator", o.op},
      {"omegas", o.omegas},
      {"cover_t", o.cover_t},
      {"extent", o.extent},
      {"out", o.out},
      {"threads", o.threads},
      {"seed", o.seed},
      {"corrupt_branch", o.corrupt_branch},
  };

  int exit_code = 5;
  const char* summary = "";
  bl_run_command(cfg.dump().c_str(), &exit_code, &summary);
  std::fputs(summary, exit_code == 0 ? stdout : stderr);
  return exit_code;
}
