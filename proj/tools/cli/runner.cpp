#include "runner.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "superwave/error.hpp"

#ifndef SUPERWAVE_VERSION
#define SUPERWAVE_VERSION "0.0.0"
#endif

namespace superwave::cli {

fs::path RunContext::field_path(const std::string& stem) const {
  return out_dir / (stem + (field_format == FieldFormat::csv ? ".csv" : ".swf"));
}

void RunContext::write(const std::string& stem, const SampledField& field) {
  const auto p = field_path(stem);
  write_field(field, p, field_format);
  add_output(p.filename());
}

void RunContext::write_json(const std::string& name, const json& doc) {
  std::ofstream out(path(name));
  if (!out) throw IoError("cannot open '" + path(name).string() + "' for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path(name).string() + "'");
  add_output(name);
}

void RunContext::write_csv(const std::string& name, const std::vector<std::string>& header,
                           const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path(name));
  if (!out) throw IoError("cannot open '" + path(name).string() + "' for writing");
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  char buf[40];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path(name).string() + "'");
  add_output(name);
}

SampledField RunContext::read_input(const fs::path& p) {
  if (!fs::exists(p)) throw IoError("input '" + p.string() + "' does not exist");
  inputs.push_back(p);
  return read_field(p);
}

const Pipeline& find_pipeline(const std::string& command) {
  for (const auto& p : pipelines())
    if (p.command == command) return p;
  throw ConfigError("command", "unknown command '" + command + "'");
}

namespace {

bool type_matches(ParamType t, const json& v) {
  switch (t) {
    case ParamType::number: return v.is_number();
    case ParamType::integer: return v.is_number_integer() || (v.is_number_float() && v.get<double>() == std::floor(v.get<double>()));
    case ParamType::string: return v.is_string();
    case ParamType::boolean: return v.is_boolean();
    case ParamType::array: return v.is_array();
  }
  return false;
}

const char* type_name(ParamType t) {
  switch (t) {
    case ParamType::number: return "number";
    case ParamType::integer: return "integer";
    case ParamType::string: return "string";
    case ParamType::boolean: return "boolean";
    default: return "array";
  }
}

}  // namespace

json validate_params(const Pipeline& pipeline, const json& given) {
  if (!given.is_null() && !given.is_object()) throw ConfigError("params", "params must be an object");
  json out = json::object();
  if (given.is_object())
    for (const auto& [key, value] : given.items()) {
      const Param* spec = nullptr;
      for (const auto& p : pipeline.params)
        if (p.key == key) spec = &p;
      if (!spec) throw ConfigError(key, "unknown key '" + key + "' for '" + pipeline.command + "'");
      if (!type_matches(spec->type, value))
        throw ConfigError(key, "key '" + key + "' must be a " + type_name(spec->type));
      out[key] = spec->type == ParamType::integer ? json(value.get<long>()) : value;
    }
  for (const auto& p : pipeline.params)
    if (!out.contains(p.key)) out[p.key] = p.fallback;
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
    throw NumericError("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "' for hashing");
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

json execute(const Pipeline& pipeline, RunContext& ctx, const json& canonical_config) {
  const auto start = std::chrono::steady_clock::now();
  const std::string config_hash = sha256_hex(canonical_config.dump());
  std::error_code ec;
  fs::create_directories(ctx.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + ctx.out_dir.string() + "': " + ec.message());

  const auto manifest_path = ctx.out_dir / "manifest.json";
  if (fs::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    const auto previous = json::parse(in, nullptr, false);
    if (!previous.is_discarded() && previous.value("config_sha256", "") == config_hash)
      ctx.warnings.push_back("identical config already run in " + ctx.out_dir.string() +
                             "; overwriting its outputs");
    else
      ctx.warnings.push_back("overwriting outputs of a different run in " + ctx.out_dir.string());
    for (const auto& w : ctx.warnings) std::cerr << "warning: " << w << '\n';
  }

  pipeline.run(ctx);

  json manifest;
  manifest["tool"] = "superwave";
  manifest["version"] = SUPERWAVE_VERSION;
  manifest["command"] = ctx.command;
  manifest["config"] = canonical_config;
  manifest["config_sha256"] = config_hash;
  manifest["seed"] = ctx.seed;
  manifest["threads"] = ctx.threads;
  json inputs = json::array(), outputs = json::array();
  for (const auto& p : ctx.inputs) inputs.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
  for (const auto& p : ctx.outputs)
    outputs.push_back({{"path", p.string()},
                       {"sha256", sha256_file(ctx.out_dir / p)},
                       {"bytes", fs::file_size(ctx.out_dir / p)}});
  manifest["inputs"] = inputs;
  manifest["outputs"] = outputs;
  manifest["warnings"] = ctx.warnings;
  manifest["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ofstream out(manifest_path);
  if (!out) throw IoError("cannot write '" + manifest_path.string() + "'");
  out << manifest.dump(2) << '\n';
  return manifest;
}

json error_document(int code, const std::string& type, const std::string& message,
                    const std::string& key) {
  json e{{"exit_code", code}, {"type", type}, {"message", message}};
  if (!key.empty()) e["key"] = key;
  return {{"error", e}};
}

}  // namespace superwave::cli
