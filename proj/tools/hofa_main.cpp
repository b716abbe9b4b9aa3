#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cli/golden.hpp"
#include "cli/run.hpp"
#include "hofa/errors.hpp"

#ifndef HOFA_GOLDEN_DEFAULT
#define HOFA_GOLDEN_DEFAULT "golden.json"
#endif

namespace {

using hofa::cli::json;

std::string csv_path_for(const std::string& out) {
  const auto dot = out.rfind('.');
  const auto slash = out.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return out.substr(0, dot) + ".csv";
  return out + ".csv";
}

int run_command(const std::string& sub, const std::string& config_path, const std::string& out_path, bool csv,
                const hofa::cli::RunOptions& opts) {
  json cfg;
  try {
    cfg = hofa::cli::load_json_file(config_path);
    if (sub != "run") {
      if (cfg.is_object() && cfg.contains("command") && cfg["command"] != sub) {
        throw hofa::ValidationError("config command " + cfg["command"].dump() + " does not match subcommand " + sub);
      }
      cfg["command"] = sub;
    }
    std::string out = out_path;
    if (out.empty() && cfg.is_object() && cfg.contains("out")) out = cfg["out"].get<std::string>();

    const hofa::cli::RunResult r = hofa::cli::run(cfg, opts);
    const std::string text = r.record.dump(2) + "\n";
    if (!out.empty()) {
      hofa::cli::write_atomic(out, text);
      if (csv) hofa::cli::write_atomic(csv_path_for(out), hofa::cli::csv_text(r.rows));
    } else if (csv) {
      std::cout << hofa::cli::csv_text(r.rows);
    } else {
      std::cout << text;
    }
    if (!r.postcondition_ok) {
      std::cerr << "hofa: " << sub << ": postcondition failed (status " << r.record["status"] << ")\n";
      return 4;
    }
    return 0;
  } catch (const std::exception& e) {
    const int code = hofa::cli::exit_code_for(e);
    std::cerr << "hofa: " << e.what() << "\n";
    if (!out_path.empty()) {
      try {
        hofa::cli::write_atomic(out_path, hofa::cli::error_record(cfg, e).dump(2) + "\n");
      } catch (const std::exception&) {
      }
    }
    return code;
  }
}

int run_golden(const std::string& file, const std::optional<std::string>& only) {
  try {
    const json g = hofa::cli::load_json_file(file);
    const auto reports = hofa::cli::run_golden(g, only);
    int failed = 0;
    for (const auto& r : reports) {
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.runtime_ms << " ms)\n";
      for (const auto& d : r.diffs) std::cout << "  diff " << d << "\n";
      failed += !r.passed;
    }
    std::cout << reports.size() - failed << "/" << reports.size() << " golden cases passed\n";
    return failed ? 4 : 0;
  } catch (const std::exception& e) {
    std::cerr << "hofa: " << e.what() << "\n";
    return hofa::cli::exit_code_for(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Higher-order Fourier analysis toolkit for finite abelian groups"};
  app.require_subcommand(1);
  app.set_version_flag("--version", hofa::cli::library_version());

  std::string config, out;
  bool csv = false;
  std::optional<std::uint64_t> seed, cap;
  std::optional<double> tolerance;

  auto add_run_options = [&](CLI::App* s) {
    s->add_option("--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    s->add_option("--out", out, "Write the result record here (atomically)");
    s->add_option("--seed", seed, "Override the config seed");
    s->add_option("--cap", cap, "Override the cost cap");
    s->add_option("--tolerance", tolerance, "Override the numeric tolerance");
    s->add_flag("--csv", csv, "Emit CSV rows (next to --out, or on stdout)");
  };

  std::string chosen;
  CLI::App* run_sub = app.add_subcommand("run", "Run the command named in the config");
  add_run_options(run_sub);
  run_sub->callback([&] { chosen = "run"; });
  for (const auto& name : hofa::cli::command_names()) {
    CLI::App* s = app.add_subcommand(name, "Run the " + name + " command");
    add_run_options(s);
    s->callback([&chosen, name] { chosen = name; });
  }

  std::string golden_file = HOFA_GOLDEN_DEFAULT;
  std::optional<std::string> golden_case;
  CLI::App* golden = app.add_subcommand("golden", "Check the golden suite");
  golden->add_option("--file", golden_file, "Golden file")->check(CLI::ExistingFile);
  golden->add_option("--case", golden_case, "Run a single case by name");
  golden->callback([&] { chosen = "golden"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (chosen == "golden") return run_golden(golden_file, golden_case);
  return run_command(chosen, config, out, csv, hofa::cli::RunOptions{seed, cap, tolerance});
}
