#pragma once

#include <filesystem>
#include <functional>
#include <json.hpp>
#include <string>
#include <vector>

#include "superwave/field.hpp"
#include "superwave/field_io.hpp"

namespace superwave::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

enum class ParamType { number, integer, string, boolean, array };

struct Param {
  std::string key;
  ParamType type;
  json fallback;
  std::string help;
};

struct RunContext {
  std::string command;  // e.g. "construct product"
  json params;          // validated, defaults filled
  std::uint64_t seed = 1;
  unsigned threads = 1;
  fs::path out_dir;
  FieldFormat field_format = FieldFormat::binary;
  std::vector<std::string> warnings;
  std::vector<fs::path> outputs;  // relative to out_dir
  std::vector<fs::path> inputs;

  double num(const std::string& key) const { return params.at(key).get<double>(); }
  long integer(const std::string& key) const { return params.at(key).get<long>(); }
  std::string str(const std::string& key) const { return params.at(key).get<std::string>(); }
  bool flag(const std::string& key) const { return params.at(key).get<bool>(); }

  fs::path path(const std::string& name) const { return out_dir / name; }
  /// Field file with the run's format extension.
  fs::path field_path(const std::string& stem) const;
  void write(const std::string& stem, const SampledField& field);
  void write_json(const std::string& name, const json& doc);
  /// CSV with a header row; numbers at 17 significant digits.
  void write_csv(const std::string& name, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows);
  void add_output(const fs::path& name) { outputs.push_back(name); }
  SampledField read_input(const fs::path& p);
};

struct Pipeline {
  std::string command;
  std::string description;
  std::vector<Param> params;
  std::function<void(RunContext&)> run;
};

const std::vector<Pipeline>& pipelines();
const Pipeline& find_pipeline(const std::string& command);

/// Checks types and rejects unknown keys (ConfigError naming the key); fills defaults.
json validate_params(const Pipeline& pipeline, const json& given);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const fs::path& path);

/// Executes the pipeline and writes manifest.json. Returns the manifest.
json execute(const Pipeline& pipeline, RunContext& ctx, const json& canonical_config);

/// Error document written to stderr on failure.
json error_document(int code, const std::string& type, const std::string& message,
                    const std::string& key = {});

}  // namespace superwave::cli
