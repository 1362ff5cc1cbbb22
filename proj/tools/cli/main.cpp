#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "runner.hpp"
#include "superwave/error.hpp"

using namespace superwave;
using namespace superwave::cli;

namespace {

struct Common {
  std::string config, out, field_format;
  std::string seed, threads;
};

json parse_value(const Param& p, const std::string& text) {
  auto bad = [&] {
    const char* what = p.type == ParamType::number    ? "a number"
                       : p.type == ParamType::integer ? "an integer"
                       : p.type == ParamType::boolean ? "a boolean"
                                                      : "a JSON array";
    return ConfigError(p.key, "--" + p.key + " expects " + what + ", got '" + text + "'");
  };
  if (p.type == ParamType::string) return text;
  if (p.type == ParamType::boolean) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw bad();
  }
  auto v = json::parse(text, nullptr, false);
  if (v.is_discarded()) throw bad();
  if (p.type == ParamType::array && v.is_number()) v = json::array({v});
  if (p.type == ParamType::array && !v.is_array()) throw bad();
  if (p.type != ParamType::array && !v.is_number()) throw bad();
  return v;
}

std::uint64_t parse_u64(const std::string& key, const json& v) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw ConfigError(key, "'" + key + "' must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path + "'");
  auto doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config", "config '" + path + "' is not valid JSON");
  if (!doc.is_object()) throw ConfigError("config", "config must be a JSON object");
  static const std::vector<std::string> allowed{"command", "params", "seed", "threads", "output_dir",
                                                "field_format"};
  for (const auto& [key, value] : doc.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(key, "unknown config key '" + key + "'");
  return doc;
}

std::string default_out(const std::string& command) {
  std::string s = "superwave_out/";
  for (char ch : command) s += ch == ' ' ? '_' : ch;
  return s;
}

int run(const std::string& command_hint, const Common& common, const std::map<std::string, std::string>& flags) {
  json doc = common.config.empty() ? json::object() : read_config(common.config);
  std::string command = command_hint;
  if (doc.contains("command")) {
    if (!doc["command"].is_string()) throw ConfigError("command", "'command' must be a string");
    if (!command.empty() && doc["command"] != command)
      throw ConfigError("command", "config is for '" + doc["command"].get<std::string>() + "', not '" + command + "'");
    command = doc["command"].get<std::string>();
  }
  if (command.empty()) throw ConfigError("command", "no command given");
  const auto& pipeline = find_pipeline(command);

  json given = doc.value("params", json::object());
  if (!given.is_object()) throw ConfigError("params", "'params' must be an object");
  for (const auto& [key, text] : flags)
    for (const auto& p : pipeline.params)
      if (p.key == key) given[key] = parse_value(p, text);

  RunContext ctx;
  ctx.command = command;
  ctx.params = validate_params(pipeline, given);
  if (!common.seed.empty()) doc["seed"] = json::parse(common.seed, nullptr, false);
  ctx.seed = doc.contains("seed") ? parse_u64("seed", doc["seed"]) : 1;

  json threads;
  if (!common.threads.empty()) threads = json::parse(common.threads, nullptr, false);
  else if (doc.contains("threads")) threads = doc["threads"];
  else if (const char* env = std::getenv("SUPERWAVE_THREADS")) threads = json::parse(env, nullptr, false);
  ctx.threads = threads.is_null() ? 1 : static_cast<unsigned>(parse_u64("threads", threads));
  if (ctx.threads == 0) throw ConfigError("threads", "'threads' must be >= 1");

  std::string fmt = common.field_format;
  if (fmt.empty() && doc.contains("field_format")) {
    if (!doc["field_format"].is_string()) throw ConfigError("field_format", "'field_format' must be a string");
    fmt = doc["field_format"];
  }
  if (fmt.empty()) fmt = "binary";
  if (fmt == "swf") fmt = "binary";
  if (fmt != "binary" && fmt != "csv") throw ConfigError("field_format", "'field_format' must be binary or csv");
  ctx.field_format = fmt == "csv" ? FieldFormat::csv : FieldFormat::binary;

  std::string out = common.out;
  if (out.empty() && doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) throw ConfigError("output_dir", "'output_dir' must be a string");
    out = doc["output_dir"];
  }
  ctx.out_dir = out.empty() ? default_out(command) : out;

  const json canonical{{"command", command}, {"params", ctx.params}, {"seed", ctx.seed}, {"field_format", fmt}};
  const auto manifest = execute(pipeline, ctx, canonical);
  std::cout << (ctx.out_dir / "manifest.json").string() << '\n';
  return 0;
}

int fail(int code, const std::string& type, const std::string& message, const std::string& key = {}) {
  std::cerr << error_document(code, type, message, key).dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"superwave: bandlimited waveform toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--config", common.config, "RunConfig JSON {command, params, seed, threads, output_dir, field_format}");
  app.add_option("--out", common.out, "output directory");
  app.add_option("--seed", common.seed, "seed (default 1)");
  app.add_option("--threads", common.threads, "worker threads (default $SUPERWAVE_THREADS, else 1)");
  app.add_option("--field-format", common.field_format, "binary or csv");

  std::map<std::string, CLI::App*> groups;
  std::map<std::string, std::string> flags;
  std::string chosen;
  for (const auto& p : pipelines()) {
    CLI::App* parent = &app;
    std::string name = p.command;
    if (const auto sp = p.command.find(' '); sp != std::string::npos) {
      const auto group = p.command.substr(0, sp);
      if (!groups.count(group)) {
        groups[group] = app.add_subcommand(group, group + " pipelines");
        groups[group]->require_subcommand(1);
        groups[group]->fallthrough();
      }
      parent = groups[group];
      name = p.command.substr(sp + 1);
    }
    auto* sub = parent->add_subcommand(name, p.description);
    sub->fallthrough();
    for (const auto& param : p.params) {
      std::string names = "--" + param.key;
      if (param.key.find('_') != std::string::npos) {
        std::string dashed = param.key;
        std::replace(dashed.begin(), dashed.end(), '_', '-');
        names += ",--" + dashed;
      }
      sub->add_option_function<std::string>(
          names, [&flags, key = param.key](const std::string& v) { flags[key] = v; },
          param.help + " (default " + param.fallback.dump() + ")");
    }
    sub->callback([&chosen, cmd = p.command] { chosen = cmd; });
  }
  auto* run_cmd = app.add_subcommand("run", "run the pipeline named by a --config file");
  run_cmd->fallthrough();
  run_cmd->callback([&chosen] { chosen = ""; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    return fail(2, "usage", msg);
  }

  try {
    return run(chosen, common, flags);
  } catch (const ConfigError& e) {
    return fail(2, "config", e.what(), e.key());
  } catch (const std::invalid_argument& e) {
    return fail(2, "config", e.what());
  } catch (const NumericError& e) {
    return fail(3, "numeric", e.what());
  } catch (const std::domain_error& e) {
    return fail(3, "numeric", e.what());
  } catch (const std::overflow_error& e) {
    return fail(3, "numeric", e.what());
  } catch (const IoError& e) {
    return fail(4, "io", e.what());
  } catch (const fs::filesystem_error& e) {
    return fail(4, "io", e.what());
  } catch (const json::exception& e) {
    return fail(2, "config", e.what());
  } catch (const std::exception& e) {
    return fail(1, "internal", e.what());
  }
}
