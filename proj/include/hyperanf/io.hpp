#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "hyperanf/engine.hpp"
#include "hyperanf/errors.hpp"
#include "hyperanf/oracle.hpp"
#include "hyperanf/stats.hpp"

// JSON and TSV serialisation of neighbourhood-function estimates and
// reports. Key order is deterministic (sorted), so identical runs produce
// byte-identical files.

namespace hyperanf {

inline NfEstimate to_estimate(const ExactNf& exact) {
  NfEstimate est;
  est.n = exact.n;
  est.values = exact.as_doubles();
  est.exact = true;
  return est;
}

inline nlohmann::json nf_to_json(const NfEstimate& est) {
  nlohmann::json j;
  j["n"] = est.n;
  j["exact"] = est.exact;
  j["iterations"] = est.iterations();
  j["values"] = est.values;
  if (!est.exact) {
    j["m"] = est.m;
    j["seed"] = est.seed;
    j["termination"] = to_string(est.termination);
    j["modified"] = est.modified;
  }
  return j;
}

inline NfEstimate nf_from_json(const nlohmann::json& j) {
  NfEstimate est;
  try {
    est.n = j.at("n").get<std::uint64_t>();
    est.values = j.at("values").get<std::vector<double>>();
    est.exact = j.value("exact", false);
    est.m = j.value("m", 0u);
    est.seed = j.value("seed", std::uint64_t{0});
    est.termination = j.value("termination", "stabilisation") == "threshold"
                          ? Termination::threshold
                          : Termination::stabilisation;
    est.modified = j.value("modified", std::vector<std::uint64_t>{});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad neighbourhood-function report: ") +
                     e.what());
  }
  return est;
}

inline nlohmann::json multirun_to_json(const MultiRunReport& report) {
  nlohmann::json j;
  j["n"] = report.n;
  j["m"] = report.m;
  j["alpha"] = report.alpha;
  j["runs"] = report.per_run.size();
  nlohmann::json per = nlohmann::json::array();
  for (const auto& s : report.per_run) {
    per.push_back({{"seed", s.seed},
                   {"avg_distance", s.avg_distance},
                   {"spid", s.spid},
                   {"ied", s.ied}});
  }
  j["per_run"] = per;
  j["mean"] = {{"avg_distance", report.mean.avg_distance},
               {"spid", report.mean.spid},
               {"ied", report.mean.ied}};
  j["stddev"] = {{"avg_distance", report.stddev.avg_distance},
                 {"spid", report.stddev.spid},
                 {"ied", report.stddev.ied}};
  j["mean_nf"] = report.mean_nf;
  return j;
}

inline nlohmann::json interval_to_json(const DiameterInterval& interval) {
  nlohmann::json j;
  j["lo"] = interval.lo ? nlohmann::json(*interval.lo) : nlohmann::json();
  j["hi"] = interval.hi ? nlohmann::json(*interval.hi) : nlohmann::json();
  j["confidence"] = interval.confidence;
  if (!interval.note.empty()) j["note"] = interval.note;
  return j;
}

// --- TSV emitters (for plotting) ----------------------------------------------

inline std::string nf_to_tsv(std::span<const double> values) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t t = 0; t < values.size(); ++t)
    out << t << '\t' << values[t] << '\n';
  return out.str();
}

inline std::string cdf_to_tsv(const DistanceCdf& cdf) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t t = 0; t < cdf.values.size(); ++t)
    out << t << '\t' << cdf.values[t] << '\n';
  return out.str();
}

// --- Files ---------------------------------------------------------------------

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

inline std::string json_to_text(const nlohmann::json& j) {
  return j.dump(2) + "\n";
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace hyperanf
