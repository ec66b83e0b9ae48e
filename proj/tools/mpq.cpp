// mpq: command-line driver.
//
//   mpq [--threads N] <command> [--config FILE] [--key value ...]
//
// Exit codes: 0 success, 2 configuration error, 3 physics-domain error
// (vartheta > 1, aliasing), 4 selftest failure.

#include <mpq/cli.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

int main(int argc, char** argv) {
  using namespace mpq;
  CLI::App app{"Exact paraxial quantization toolkit"};
  app.set_version_flag("--version", std::string(MPQ_VERSION));
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (overrides MPQ_THREADS)")
      ->check(CLI::PositiveNumber);

  struct Slot {
    const cli::Command* cmd;
    CLI::App* sub;
    std::string config;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
  };
  std::vector<Slot> slots;
  slots.reserve(cli::commands().size());
  for (const cli::Command& cmd : cli::commands()) {
    Slot& s = slots.emplace_back();
    s.cmd = &cmd;
    s.sub = app.add_subcommand(cmd.name, cmd.help);
    s.sub->fallthrough();
    s.sub->add_option("--config", s.config, "JSON config file (flags override it)");
    for (const cli::Param& p : cmd.schema()) {
      std::string help = p.help + " [default: " + p.def.dump() + "]";
      s.options[p.key] = s.sub->add_option("--" + p.key, s.values[p.key], help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (threads > 0)
    set_thread_count(threads);

  for (Slot& s : slots) {
    if (!s.sub->parsed())
      continue;
    try {
      std::map<std::string, std::string> flags;
      for (const auto& [key, opt] : s.options)
        if (opt->count() > 0)
          flags[key] = s.values[key];
      const cli::json file = s.config.empty() ? cli::json() : cli::read_json_file(s.config);
      const cli::json cfg = cli::resolve_config(s.cmd->schema(), file, flags);
      return cli::execute(*s.cmd, cfg);
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return 2;
    } catch (const cli::json::exception& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return 2;
    } catch (const DomainError& e) {
      std::cerr << "domain error: " << e.what() << '\n';
      return 3;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }
  return 2;
}
