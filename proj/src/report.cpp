#include "lpiso/report.hpp"

#include "lpiso/error.hpp"

#include <iomanip>
#include <sstream>

namespace lpiso {

using nlohmann::json;

nlohmann::json to_json(const Report& r) {
  json j;
  j["command"] = r.command;
  j["status"] = r.status;
  j["exit_code"] = r.exit_code;
  j["message"] = r.message;
  j["verdict"] = r.verdict ? json(*r.verdict) : json(nullptr);
  j["rule"] = r.rule ? json(*r.rule) : json(nullptr);
  j["diagonalizations"] = json::array();
  for (const auto& d : r.diagonalizations) {
    j["diagonalizations"].push_back(
        {{"name", d.name}, {"n", d.n}, {"ell", d.ell}, {"signature", d.signature}, {"M", d.M}, {"residual", d.residual}});
  }
  j["checks"] = json::array();
  for (const auto& c : r.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"value", c.value},
                           {"tolerance", c.tolerance},
                           {"detail", c.detail}});
  }
  j["details"] = r.details;
  j["provenance"] = {{"seed", r.provenance.seed},
                     {"version", r.provenance.version},
                     {"config_hash", r.provenance.config_hash}};
  return j;
}

Report report_from_json(const nlohmann::json& j) {
  try {
    Report r;
    r.command = j.at("command").get<std::string>();
    r.status = j.at("status").get<std::string>();
    r.exit_code = j.at("exit_code").get<int>();
    r.message = j.at("message").get<std::string>();
    if (!j.at("verdict").is_null()) r.verdict = j.at("verdict").get<std::string>();
    if (!j.at("rule").is_null()) r.rule = j.at("rule").get<std::string>();
    for (const auto& d : j.at("diagonalizations")) {
      r.diagonalizations.push_back({d.at("name").get<std::string>(), d.at("n").get<int>(), d.at("ell").get<int>(),
                                    d.at("signature").get<int>(), d.at("M").get<std::vector<std::vector<double>>>(),
                                    d.at("residual").get<double>()});
    }
    for (const auto& c : j.at("checks")) {
      r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(), c.at("value").get<double>(),
                          c.at("tolerance").get<double>(), c.at("detail").get<std::string>()});
    }
    r.details = j.at("details");
    const auto& p = j.at("provenance");
    r.provenance = {p.at("seed").get<std::uint64_t>(), p.at("version").get<std::string>(),
                    p.at("config_hash").get<std::string>()};
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed report: ") + e.what());
  }
}

std::string render_text(const Report& r) {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "command:  " << r.command << "\n";
  os << "status:   " << r.status << " (exit " << r.exit_code << ")\n";
  if (!r.message.empty()) os << "message:  " << r.message << "\n";
  if (r.verdict) os << "verdict:  " << *r.verdict << "\n";
  if (r.rule) os << "rule:     " << *r.rule << "\n";
  for (const auto& d : r.diagonalizations) {
    os << "\n" << d.name << ": n=" << d.n << " l=" << d.ell << " signature=" << d.signature
       << " residual=" << d.residual << "\n";
    for (const auto& row : d.M) {
      os << "  [";
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? ", " : "") << std::setw(12) << row[i];
      os << " ]\n";
    }
  }
  if (!r.checks.empty()) {
    os << "\nchecks:\n";
    for (const auto& c : r.checks) {
      os << "  [" << (c.passed ? "PASS" : "FAIL") << "] " << c.name << ": " << c.value << " (tol " << c.tolerance << ")";
      if (!c.detail.empty()) os << "  " << c.detail;
      os << "\n";
    }
  }
  if (r.details.contains("summary")) os << "\nsummary: " << r.details.at("summary").dump() << "\n";
  os << "\nseed " << r.provenance.seed << ", version " << r.provenance.version << ", config " << r.provenance.config_hash
     << "\n";
  return os.str();
}

}  // namespace lpiso
