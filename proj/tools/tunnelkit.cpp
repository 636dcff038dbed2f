// tunnelkit analyze|sweep|oracle|compare <config> [--out path] [--format csv|json]
//
// Exit codes: 0 success, 2 config error, 3 regime error, 4 numerical failure.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tunnelkit/commands.hpp"
#include "tunnelkit/config.hpp"
#include "tunnelkit/errors.hpp"
#include "tunnelkit/report.hpp"

using namespace tunnelkit;

namespace {

int write_output(const std::string &text, const std::string &out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out || !(out << text)) {
    std::cerr << "error: InvalidConfig: cannot write '" << out_path << "'\n";
    return exit_code(ErrorCategory::Config);
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Ground-doublet tunnel splittings of one-dimensional double wells"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::string> format;
  const std::map<std::string, Format> formats{{"csv", Format::Csv}, {"json", Format::Json}};

  const std::pair<const char *, const char *> commands[] = {
      {"analyze", "well analysis, action and every splitting route for one potential"},
      {"sweep", "bias sweep with a quadratic fit of ln Delta"},
      {"oracle", "finite-difference ground doublet"},
      {"compare", "semiclassical splittings against the finite-difference oracle"},
  };
  for (const auto &[name, help] : commands) {
    auto *sub = app.add_subcommand(name, help);
    sub->add_option("config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_code(ErrorCategory::Config);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = load_config(config_path);
    std::string text;
    if (command == "analyze") {
      text = render_analyze(run_analyze(cfg), formats.at(format.value_or("json")));
    } else if (command == "sweep") {
      const SweepReport report = run_sweep(cfg);
      const Format f = formats.at(format.value_or("csv"));
      text = render_sweep(report, f);
      if (f == Format::Csv)
        std::cerr << render_fit_summary(report);
    } else if (command == "oracle") {
      text = render_oracle(run_oracle(cfg), formats.at(format.value_or("json")));
    } else {
      text = render_compare(run_compare(cfg), formats.at(format.value_or("csv")));
    }
    return write_output(text, out_path);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(ErrorCategory::Numerical);
  }
}
