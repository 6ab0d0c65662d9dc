#include "hessmc/harness/records.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hessmc {

namespace {

nlohmann::ordered_json vecx_to_json(const VecX& v) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

nlohmann::ordered_json record_to_json(const RunRecord& record) {
  nlohmann::ordered_json j;
  j["config"] = record.config;
  nlohmann::ordered_json res;
  res["mean"] = vecx_to_json(record.result.mean);
  res["std_error"] = vecx_to_json(record.result.std_error);
  res["n_paths"] = record.result.n_paths;
  res["failed_paths"] = record.result.failed_paths;
  res["n_steps"] = record.result.n_steps;
  res["dt"] = record.result.dt;
  res["seed"] = record.result.seed;
  res["quadrature_warning"] = record.result.quadrature_warning;
  j["result"] = res;
  if (record.oracle) {
    nlohmann::ordered_json o;
    o["value"] = record.oracle->value;
    o["tolerance"] = record.oracle->tolerance;
    o["abs_err"] = record.oracle->abs_err;
    o["pass"] = record.oracle->pass;
    j["oracle"] = o;
  }
  j["degraded"] = record.degraded;
  j["pass"] = record.pass;
  if (!record.extras.is_null()) j["extras"] = record.extras;
  j["wall_ms"] = record.wall_ms;
  j["version"] = record.version;
  return j;
}

std::string record_to_string(const RunRecord& record) {
  return record_to_json(record).dump(2);
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

std::string resolve_output_path(const std::string& path) {
  if (path.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  const char* dir = std::getenv("HESSMC_OUTPUT_DIR");
  if (!dir || !*dir) return path;
  return (std::filesystem::path(dir) / p).string();
}

std::string sweep_csv(const std::vector<SweepRow>& rows,
                      const std::map<std::string, double>& slopes) {
  std::ostringstream os;
  os.precision(12);
  os << "axis_value,mean,stderr,oracle,abs_err,pass\n";
  for (const SweepRow& row : rows) {
    os << row.axis_value << "," << row.mean << "," << row.std_error << ",";
    if (row.oracle) os << *row.oracle;
    os << ",";
    if (row.abs_err) os << *row.abs_err;
    os << "," << (row.pass ? "true" : "false") << "\n";
  }
  for (const auto& [name, value] : slopes) {
    os << "# " << name << "=" << value << "\n";
  }
  return os.str();
}

}  // namespace hessmc
