#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "fraccert/app.hpp"
#include "fraccert/errors.hpp"

namespace {

struct Options {
  std::string config;
  std::string out = "fraccert_out";
  std::vector<std::string> sets;
  std::map<std::string, std::optional<double>> numeric{{"seed", std::nullopt}, {"tol", std::nullopt},
                                                       {"N", std::nullopt},    {"s", std::nullopt},
                                                       {"alpha", std::nullopt}, {"beta", std::nullopt},
                                                       {"K", std::nullopt},    {"p", std::nullopt},
                                                       {"T", std::nullopt}};
};

const std::map<std::string, std::string> kAbout{
    {"flap", "compare fractional Laplacian evaluators on a Gaussian and on the weight psi"},
    {"kernel", "tabulate the fractional heat kernel and check its mass and two-sided bound"},
    {"certify", "classify (N, s, alpha, beta) and verify a supersolution certificate"},
    {"covering", "cutoff remainder integrals over the covering regions"},
    {"riesz", "Riesz potential of a bump density and the scaled sup ratio"},
    {"simulate", "evolve rho u_t + (-Delta)^s u = 0 on a periodic grid"},
    {"norm", "weighted L^p norm of a sampled field"}};

nlohmann::json load_config(const std::string& path) {
  if (path.empty()) return nullptr;
  std::ifstream f(path);
  if (!f) throw fraccert::ConfigError("cannot open config file " + path);
  nlohmann::json j = nlohmann::json::parse(f, nullptr, false);
  if (j.is_discarded()) throw fraccert::ConfigError("config file " + path + " is not valid JSON");
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Numerical checks for weighted fractional diffusion"};
  cli.require_subcommand(1);
  Options opt;
  for (const auto& name : fraccert::app::commands()) {
    CLI::App* sub = cli.add_subcommand(name, kAbout.at(name));
    const nlohmann::json keys = fraccert::app::defaults(name);
    sub->add_option("--config", opt.config, "JSON config file");
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--set", opt.sets, "override key=value (repeatable)");
    for (auto& [key, value] : opt.numeric)
      if (keys.contains(key)) sub->add_option("--" + key, value, "override " + key);
  }
  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  const std::string command = cli.get_subcommands().front()->get_name();
  try {
    nlohmann::json overrides = nlohmann::json::object();
    for (const auto& [key, value] : opt.numeric)
      if (value) {
        if (*value == std::floor(*value) && std::abs(*value) < 1e15)
          overrides[key] = static_cast<long long>(*value);
        else
          overrides[key] = *value;
      }
    for (const auto& s : opt.sets) {
      auto [k, v] = fraccert::app::parse_override(s);
      overrides[k] = v;
    }
    const nlohmann::json config = fraccert::app::resolve(command, load_config(opt.config), overrides);
    return fraccert::app::run(command, config, opt.out, std::cout);
  } catch (const fraccert::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  }
}
