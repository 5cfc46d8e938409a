#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <nlohmann/json.hpp>

#include "qdarwin/error.hpp"
#include "qdarwin/experiment.hpp"

namespace qdarwin::harness {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 failed");
  std::string hex;
  char buf[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

namespace {

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json convergence_json(const std::vector<ConvergenceEntry>& cs) {
  json a = json::array();
  for (const auto& c : cs)
    a.push_back({{"label", c.label},
                 {"iterations", c.iterations},
                 {"converged", c.converged},
                 {"required", c.required},
                 {"last_distance", number(c.last_distance)},
                 {"monotone", c.monotone}});
  return a;
}

OutputFile write_file(const fs::path& p, const std::string& body) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << body;
  f.close();
  if (!f) throw std::runtime_error("write failed: " + p.string());
  return OutputFile{p.string(), sha256_hex(body)};
}

}  // namespace

RunManifest run_scenario(const ExperimentConfig& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const ScenarioResult r = compute_scenario(c);

  RunManifest m;
  m.config = config_json(c);
  m.convergence = r.convergence;
  m.notes = r.notes;
  m.converged = r.converged();

  const fs::path dir(c.out);
  fs::create_directories(dir);
  if (c.format == Format::Csv) {
    for (const auto& t : r.tables) m.outputs.push_back(write_file(dir / (t.name + ".csv"), to_csv(t)));
  } else {
    json doc;
    doc["scenario"] = c.scenario;
    doc["version"] = std::string(kVersion);
    doc["config"] = json::parse(m.config);
    doc["convergence"] = convergence_json(r.convergence);
    doc["notes"] = r.notes;
    json tables = json::object();
    for (const auto& t : r.tables) {
      json rows = json::array();
      for (const auto& row : t.rows) {
        json jr = json::array();
        for (double x : row) jr.push_back(number(x));
        rows.push_back(std::move(jr));
      }
      tables[t.name] = {{"columns", t.columns}, {"rows", std::move(rows)}};
    }
    doc["tables"] = std::move(tables);
    m.outputs.push_back(write_file(dir / (c.scenario + ".json"), doc.dump(2) + "\n"));
  }

  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json man;
  man["scenario"] = c.scenario;
  man["version"] = m.version;
  man["config"] = json::parse(m.config);
  man["wall_seconds"] = m.wall_seconds;
  man["converged"] = m.converged;
  man["convergence"] = convergence_json(m.convergence);
  man["notes"] = m.notes;
  json outs = json::array();
  for (const auto& o : m.outputs) outs.push_back({{"path", fs::path(o.path).filename().string()}, {"sha256", o.sha256}});
  man["outputs"] = std::move(outs);
  write_file(dir / (c.scenario + "_manifest.json"), man.dump(2) + "\n");
  return m;
}

}  // namespace qdarwin::harness
